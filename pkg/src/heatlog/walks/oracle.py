"""Brute-force trajectory enumeration for tiny instances.

Trajectories are tuples of augmented-space indices listed in increasing step
order, whatever direction the walk is generated in. Mixture enumerations are
keyed by ``(label, trajectory)``.
"""

import logging
from collections import defaultdict
from typing import Dict, Tuple, Union

import numpy as np

from ..core.exceptions import DimensionError, GuardError
from ..divergence import DivergenceValue, kl
from ..heat.arith import is_exact
from .markov import MarkovWalk, walk_divergence
from .mixture import WalkMixture

LOG = logging.getLogger(__name__)

ORACLE_GUARD = 10**7
ORACLE_STATES = 4
ORACLE_STEPS = 6

Trajectory = Tuple[int, ...]
TrajectoryLaw = Dict[Trajectory, object]


def at_oracle_scale(n: int, t: int, states: int = ORACLE_STATES, steps: int = ORACLE_STEPS) -> bool:
    return n <= states and t <= steps


def _enumerate_walk(walk: MarkovWalk, guard: int, budget: list) -> TrajectoryLaw:
    law: TrajectoryLaw = {}
    initial = walk.initial
    stack = [((int(x),), initial[x]) for x in np.flatnonzero(_positive(initial))]
    while stack:
        path, mass = stack.pop()
        budget[0] += 1
        if budget[0] > guard:
            raise GuardError(f"Trajectory enumeration exceeded {guard} partial paths")
        depth = len(path) - 1
        if depth == len(walk.kernels):
            key = tuple(reversed(path)) if walk.reversed else path
            law[key] = law.get(key, 0) + mass
            continue
        row = walk.kernels[depth][path[-1]]
        for y in np.flatnonzero(_positive(row)):
            stack.append((path + (int(y),), mass * row[y]))
    return law


def _positive(values: np.ndarray) -> np.ndarray:
    if is_exact(values):
        return np.array([x > 0 for x in values], dtype=bool)
    return values > 0


def trajectory_enumerate(
    walk: Union[MarkovWalk, WalkMixture], guard: int = ORACLE_GUARD
) -> Dict:
    """Exact law of full trajectories by depth-first enumeration of positive transitions."""
    budget = [0]
    if isinstance(walk, WalkMixture):
        law = {}
        for label, (weight, component) in zip(walk.labels, walk.components):
            for path, mass in _enumerate_walk(component, guard, budget).items():
                law[(label, path)] = weight * mass
    else:
        law = _enumerate_walk(walk, guard, budget)
    LOG.debug(f"Enumerated {len(law)} trajectories from {budget[0]} partial paths")
    return law


def total_mass(law: Dict):
    return sum(law.values())


def forget_label(law: Dict) -> TrajectoryLaw:
    """Marginalize the mixing label out of a labelled mixture law."""
    out = defaultdict(int)
    for (_, path), mass in law.items():
        out[path] += mass
    return dict(out)


def step_marginal(law: TrajectoryLaw, start: int, step: int, size: int) -> np.ndarray:
    """Marginal of the coordinate at ``step`` for a walk starting at ``start``."""
    exact = any(is_exact(m) for m in law.values())
    out = np.array([0] * size, dtype=object) if exact else np.zeros(size)
    for path, mass in law.items():
        out[path[step - start]] += mass
    return out


def condition(law: TrajectoryLaw, start: int, step: int, state: int) -> TrajectoryLaw:
    """Condition a trajectory law on the event {W_step = state}."""
    kept = {path: mass for path, mass in law.items() if path[step - start] == state}
    weight = sum(kept.values())
    if not weight > 0:
        raise DimensionError(f"Conditioning on a null event at step {step}")
    return {path: mass / weight for path, mass in kept.items()}


def trajectory_divergence(p: Dict, q: Dict) -> DivergenceValue:
    """D(p || q) over trajectory laws; undefined when p charges a path q does not."""
    keys = sorted(p)
    exact = all(is_exact(v) for v in p.values()) and all(is_exact(v) for v in q.values())
    dtype = object if exact else float
    p_values = np.array([p[key] for key in keys], dtype=dtype)
    q_values = np.array([q.get(key, 0) for key in keys], dtype=dtype)
    return kl(p_values, q_values)


def mixture_divergence(mixture: WalkMixture, reference: MarkovWalk, guard: int = ORACLE_GUARD):
    """D(Z || reference) with the label forgotten."""
    return trajectory_divergence(
        forget_label(trajectory_enumerate(mixture, guard)), trajectory_enumerate(reference, guard)
    )


def mixing_information(mixture: WalkMixture, guard: int = ORACLE_GUARD) -> DivergenceValue:
    """I(J; Z) = D(dist(J, Z) || dist(J) dist(Z))."""
    joint = trajectory_enumerate(mixture, guard)
    paths = forget_label(joint)
    weights = {label: weight for label, (weight, _) in zip(mixture.labels, mixture.components)}
    product = {(label, path): weights[label] * paths[path] for label, path in joint}
    return trajectory_divergence(joint, product)


def law_residual(p: TrajectoryLaw, q: TrajectoryLaw) -> float:
    """Sup distance between two trajectory laws; 0.0 exactly for equal exact laws."""
    worst = 0.0
    for key in set(p) | set(q):
        difference = p.get(key, 0) - q.get(key, 0)
        if difference != 0:
            worst = max(worst, abs(float(difference)))
    return worst


def verify_time_reversal(X: MarkovWalk, F: MarkovWalk, B: MarkovWalk, guard: int = ORACLE_GUARD):
    """X against F conditioned on {F_{t+1} = r} and B conditioned on {B_{-1} = r}."""
    r = X.space.r_index
    x_law = trajectory_enumerate(X, guard)
    forward = condition(trajectory_enumerate(F, guard), F.start, F.end, r)
    backward = condition(trajectory_enumerate(B, guard), B.start, B.start, r)
    return {
        "forward_residual": law_residual(x_law, forward),
        "backward_residual": law_residual(x_law, backward),
    }


def verify_factorized_divergence(P: MarkovWalk, Q: MarkovWalk, guard: int = ORACLE_GUARD):
    """Chain-rule divergence next to the enumerated one."""
    return walk_divergence(P, Q), trajectory_divergence(
        trajectory_enumerate(P, guard), trajectory_enumerate(Q, guard)
    )

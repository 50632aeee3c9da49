"""Heat-core: state spaces, kernels, vectors, moments and instance generators."""

from .arith import ZERO_THRESHOLD, ExactLog
from .formats import Instance, load_kernel, load_vector
from .generators import (
    complete_graph_kernel,
    hypercube_kernel,
    identity_kernel,
    path_chain,
    random_instance,
    scale_kernel,
    swap_kernel,
    trial_generator,
    unit_vector,
)
from .moments import (
    MomentSequence,
    moment_sequence,
    normalize_substochastic,
    spectral_moments,
    walk_count_density,
)
from .space import Distribution, NonnegVector, StateSpace, SymmetricKernel

__all__ = [
    "ZERO_THRESHOLD",
    "ExactLog",
    "Instance",
    "load_kernel",
    "load_vector",
    "complete_graph_kernel",
    "hypercube_kernel",
    "identity_kernel",
    "path_chain",
    "random_instance",
    "scale_kernel",
    "swap_kernel",
    "trial_generator",
    "unit_vector",
    "MomentSequence",
    "moment_sequence",
    "normalize_substochastic",
    "spectral_moments",
    "walk_count_density",
    "Distribution",
    "NonnegVector",
    "StateSpace",
    "SymmetricKernel",
]

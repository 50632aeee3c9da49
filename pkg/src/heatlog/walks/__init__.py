"""Walks on the augmented space: reference walks, the conditioned walk and the reversal mixture."""

from .conditioned import ConditionedWalk, conditioned_walk, verify_closed_form_kernels
from .lemmas import (
    bd_proof_chain,
    verify_conditioning_cost,
    verify_endpoint_entropy,
    verify_reversal_decomposition,
    verify_walk_oracle,
)
from .markov import AugmentedSpace, MarkovWalk, conditional_step_divergence, walk_divergence
from .mixture import WalkMixture, mixture_marginal_residual, reversal_mixture
from .oracle import mixing_information, mixture_divergence, trajectory_enumerate
from .reference import backward_walk, forward_walk

__all__ = [
    "ConditionedWalk",
    "conditioned_walk",
    "verify_closed_form_kernels",
    "bd_proof_chain",
    "verify_conditioning_cost",
    "verify_endpoint_entropy",
    "verify_reversal_decomposition",
    "verify_walk_oracle",
    "AugmentedSpace",
    "MarkovWalk",
    "conditional_step_divergence",
    "walk_divergence",
    "WalkMixture",
    "mixture_marginal_residual",
    "reversal_mixture",
    "mixing_information",
    "mixture_divergence",
    "trajectory_enumerate",
    "backward_walk",
    "forward_walk",
]

"""Corruption-bound machinery on the Boolean cube."""

from .certificates import (
    BranchAudit,
    CorruptionCertificate,
    PdtSizeBound,
    affine_audit,
    branch_audit,
    certificate_report,
    corruption_certificate,
    dichotomy_audit,
    pdt_size_bound,
)
from .coset import coset_identity_sweep, coset_walk_identity, coset_walk_value, column_walk
from .flips import FlipDistribution, collision_bound, flip_distribution
from .padding import PaddedInstances, decision_table, padding_reduction
from .vertices import (
    AffineVertex,
    Hyperplane,
    RankOneVertex,
    affine_value,
    hyperplane,
    pair_enumeration_value,
    rank_one_value,
)

__all__ = [
    "BranchAudit",
    "CorruptionCertificate",
    "PdtSizeBound",
    "affine_audit",
    "branch_audit",
    "certificate_report",
    "corruption_certificate",
    "dichotomy_audit",
    "pdt_size_bound",
    "coset_identity_sweep",
    "coset_walk_identity",
    "coset_walk_value",
    "column_walk",
    "FlipDistribution",
    "collision_bound",
    "flip_distribution",
    "PaddedInstances",
    "decision_table",
    "padding_reduction",
    "AffineVertex",
    "Hyperplane",
    "RankOneVertex",
    "affine_value",
    "hyperplane",
    "pair_enumeration_value",
    "rank_one_value",
]

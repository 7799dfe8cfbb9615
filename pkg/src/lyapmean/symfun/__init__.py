"""Exact symmetric-function kernel: partitions, Jack and spherical polynomials."""
from .jack import (
    SymPolyM,
    eval_monomial,
    eval_sympoly,
    format_sympoly,
    jack_in_monomials,
    principal_specialization,
)
from .partitions import Partition, conjugate, dominates, is_even, partitions, partitions_in_box
from .spherical import (
    F_mu,
    F_mu_from_squared,
    F_mu_mc,
    F_mu_mc_many,
    schur_character,
    schur_character_batch,
    spherical_phi,
)

__all__ = [
    "Partition",
    "conjugate",
    "dominates",
    "is_even",
    "partitions",
    "partitions_in_box",
    "SymPolyM",
    "jack_in_monomials",
    "eval_monomial",
    "eval_sympoly",
    "principal_specialization",
    "format_sympoly",
    "spherical_phi",
    "F_mu",
    "F_mu_from_squared",
    "schur_character",
    "schur_character_batch",
    "F_mu_mc",
    "F_mu_mc_many",
]

"""Lyapunov exponents of random matrix products with orthogonally invariant laws on GL(n, R).

Desk-scale numerics: QR-cocycle and Grassmannian estimators of random
Lyapunov exponents, invariant-subspace suprema, zonal/Jack polynomial
evaluation of orthogonal-group averages, and the exact characteristic
polynomial integral ``J(B1, B2; u)`` with its Monte Carlo oracle.
"""
from .errors import (
    DegenerateMatrix,
    InvalidPartition,
    InvalidPoint,
    LyapMeanError,
    NonGenericSpectrum,
    NotInvariant,
    OddPartition,
)
from .grassmann import (
    SubspaceFrame,
    TopSumResult,
    count_invariant_subspaces,
    haar_subspace,
    haar_subspace_batch,
    induced_chart_derivative,
    invariant_topk_sum,
    normal_jacobian_pi1,
    restriction_log_det,
    restriction_log_det_batch,
)
from .jchar import CharPolyJ, j_at_one_check, j_exact, j_exact_from_squared, j_mc
from .linalg import RngStream, eig_log_moduli, haar_orthogonal, haar_orthogonal_batch, kron_operator, qr_positive
from .lyapunov import (
    LeftHaarOrbit,
    LyapunovEstimate,
    PointMass,
    TwoSidedHaarOrbit,
    lyapunov_spectrum_qr,
    mean_exponent_lhs,
    sample,
    sup_invariant_lhs,
    topk_sum_grassmann,
)
from .symfun import (
    F_mu,
    F_mu_mc,
    Partition,
    conjugate,
    eval_sympoly,
    jack_in_monomials,
    partitions_in_box,
    schur_character,
    spherical_phi,
)
from .verify import MainCheck, jensen_check, random_orbit_model, sl_corollary_check, verify_main

__version__ = "0.1.0"

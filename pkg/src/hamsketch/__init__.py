"""Sliding-window Hamming distance profiles: exact, baseline, and corrected
sketch estimators with per-window (1 +- eps) guarantees."""

from .approx import ApproxParams, approx_params, approx_profile, approx_profile_single
from .exact import hamming_profile_convolution, hamming_profile_naive
from .hashing import FourWiseHash, XorTreeFamily, beta, beta_many, family_new, fourwise_new
from .karloff import KarloffParams, default_reps, karloff_params, karloff_profile
from .sparse_recovery import (
    B_CONST,
    CoupledProjection,
    NoiseProfile,
    RecoveryParams,
    construct_reference,
    construct_sparse_noise,
    make_coupled_projection,
    recovery_params,
)
from .stats import error_stats, fraction_within_epsilon, relative_errors, within_epsilon
from .text_model import (
    AlignmentMatrix,
    DistanceProfile,
    FileFormatError,
    IntString,
    SparseNoiseMatrix,
    build_alignment_matrix,
    generate_instance,
    read_bytes,
    read_profile_csv,
    read_tokens,
    write_bytes,
    write_profile_csv,
    write_tokens,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxParams",
    "AlignmentMatrix",
    "B_CONST",
    "CoupledProjection",
    "DistanceProfile",
    "FileFormatError",
    "FourWiseHash",
    "IntString",
    "KarloffParams",
    "NoiseProfile",
    "RecoveryParams",
    "SparseNoiseMatrix",
    "XorTreeFamily",
    "approx_params",
    "approx_profile",
    "approx_profile_single",
    "beta",
    "beta_many",
    "build_alignment_matrix",
    "construct_reference",
    "construct_sparse_noise",
    "default_reps",
    "error_stats",
    "family_new",
    "fourwise_new",
    "fraction_within_epsilon",
    "generate_instance",
    "hamming_profile_convolution",
    "hamming_profile_naive",
    "karloff_params",
    "karloff_profile",
    "make_coupled_projection",
    "read_bytes",
    "read_profile_csv",
    "read_tokens",
    "recovery_params",
    "relative_errors",
    "within_epsilon",
    "write_bytes",
    "write_profile_csv",
    "write_tokens",
]

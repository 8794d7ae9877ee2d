"""Baseline projection estimator with k = O(1/eps^2) binary hashes.

Each member i contributes x_i[j] = HAM(h_i(text window j), h_i(pattern)); the
estimate is 2/k * sum_i x_i. One execution succeeds per window with constant
probability, so the profile runs a per-window median over `reps` executions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._seeds import ROLE_EXECUTION, ROLE_FAMILY, mix
from ._sketch import member_hamming_sum
from .hashing import family_new
from .text_model import DistanceProfile, IntString


def default_reps(n: int) -> int:
    """Outer repetition count, ceil(2*log2 n)."""
    if n < 2:
        return 1
    return math.ceil(2 * math.log2(n))


def _check_epsilon(epsilon: float) -> None:
    if not 0 < epsilon <= 0.5:
        raise ValueError(f"epsilon must be in (0, 1/2], got {epsilon}")


@dataclass(frozen=True)
class KarloffParams:
    epsilon: float
    k: int
    reps: int
    seed: int


def karloff_params(epsilon: float, seed: int, n: int, reps: int | None = None) -> KarloffParams:
    """k = ceil(2/eps^2) rounded up to a power of two; reps defaults to ceil(2*log2 n)."""
    _check_epsilon(epsilon)
    raw = math.ceil(2.0 / (epsilon * epsilon))
    k = 1 << max(1, (raw - 1).bit_length())
    return KarloffParams(epsilon=epsilon, k=k, reps=reps or default_reps(n), seed=seed)


def karloff_profile_single(
    text: IntString,
    pattern: IntString,
    params: KarloffParams,
    exec_index: int,
    backend: str = "auto",
) -> DistanceProfile:
    """One execution: delta[j] = 2/k * sum_i HAM_i[j]."""
    seed_exec = mix(params.seed, ROLE_EXECUTION, exec_index)
    family = family_new(params.k, mix(seed_exec, ROLE_FAMILY))
    ham_sum = member_hamming_sum(text, pattern, family, backend)
    return DistanceProfile(2.0 * ham_sum / params.k, "estimate")


def karloff_profile(
    text: IntString,
    pattern: IntString,
    params: KarloffParams,
    backend: str = "auto",
) -> DistanceProfile:
    """Per-window median over params.reps independent executions."""
    runs = np.stack(
        [
            karloff_profile_single(text, pattern, params, e, backend).values
            for e in range(params.reps)
        ]
    )
    return DistanceProfile(np.median(runs, axis=0), "estimate")

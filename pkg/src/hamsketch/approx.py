"""Profile estimator with k = O(1/eps) binary hashes plus a noise correction.

The baseline needs k ~ 1/eps^2 members because collisions between distinct
symbol pairs contribute variance proportional to the full distance. Here k is
only ~ 8b/eps_eff, and the variance the smaller family leaves behind is
cancelled explicitly: for every heavy pair (u, v) in the recovered noise
matrix D', the term (2*beta_{u,v} - k) * d'_{u,v} removes the expected
contribution of that pair's collisions, where beta_{u,v} counts the family
members hashing u and v together. Per window

    delta[j] = max(0, (2 * sum_i HAM_i[j] + sum_{(u,v)} (2*beta - k) * d'[u,v]) / k)

and the profile is a per-window median over `reps` executions, each with a
fresh family and (by default) a freshly recovered D'.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._seeds import ROLE_EXECUTION, ROLE_FAMILY, ROLE_RECOVERY, mix
from ._sketch import member_hamming_sum
from .hashing import XorTreeFamily, beta, beta_many, family_new
from .karloff import default_reps
from .sparse_recovery import (
    B_CONST,
    NoiseProfile,
    PairCounts,
    construct_sparse_noise,
    prepare_pair_counts,
    recovery_params,
)
from .text_model import DistanceProfile, IntString, SparseNoiseMatrix


@dataclass(frozen=True)
class ApproxParams:
    epsilon: float
    epsilon_eff: float
    k: int
    reps: int
    seed: int
    share_dprime: bool = False
    recovery_reps: int | None = None


def approx_params(
    epsilon: float,
    seed: int,
    n: int,
    reps: int | None = None,
    share_dprime: bool = False,
    recovery_reps: int | None = None,
) -> ApproxParams:
    """k = 8b/eps_eff rounded up to a power of two, b = 12289/16384."""
    if not 0 < epsilon <= 0.5:
        raise ValueError(f"epsilon must be in (0, 1/2], got {epsilon}")
    eps_eff = recovery_params(epsilon, 0, reps=1).epsilon_eff
    target = 8.0 * B_CONST / eps_eff
    k = 1 << max(1, (math.ceil(target) - 1).bit_length())
    return ApproxParams(
        epsilon=epsilon,
        epsilon_eff=eps_eff,
        k=k,
        reps=reps or default_reps(n),
        seed=seed,
        share_dprime=share_dprime,
        recovery_reps=recovery_reps,
    )


def correction_term(dprime: SparseNoiseMatrix, family: XorTreeFamily) -> float:
    """(1/2) * sum (2*beta_{u,v} - k) * d'_{u,v}; half-integer for integer d'."""
    if not dprime.entries:
        return 0.0
    total = 0
    for (u, v), val in dprime.entries.items():
        total += (2 * beta(family, u, v) - family.k) * val
    return total / 2.0


def correction_numerators(noise: NoiseProfile, family: XorTreeFamily) -> np.ndarray:
    """Per-window integer numerators sum (2*beta - k) * d'."""
    nw = noise.n_windows
    out = np.zeros(nw, dtype=np.int64)
    if noise.values.size == 0:
        return out
    codes = noise.us.astype(np.int64) * noise.sigma + noise.vs.astype(np.int64)
    uniq, inv = np.unique(codes, return_inverse=True)
    betas = beta_many(family, uniq // noise.sigma, uniq % noise.sigma)
    weights = (2 * betas[inv] - family.k) * noise.values
    np.add.at(out, noise.entry_windows(), weights)
    return out


def _recover_noise(
    text: IntString,
    pattern: IntString,
    params: ApproxParams,
    exec_index: int,
    pair_cache: PairCounts | None,
) -> NoiseProfile:
    seed_exec = mix(params.seed, ROLE_EXECUTION, exec_index)
    rp = recovery_params(
        params.epsilon,
        mix(seed_exec, ROLE_RECOVERY),
        n=len(text),
        reps=params.recovery_reps,
    )
    return construct_sparse_noise(text, pattern, rp, pair_cache=pair_cache)


def approx_profile_single(
    text: IntString,
    pattern: IntString,
    params: ApproxParams,
    exec_index: int,
    backend: str = "auto",
    *,
    noise: NoiseProfile | None = None,
    pair_cache: PairCounts | None = None,
) -> DistanceProfile:
    """One execution; pass `noise` to reuse or inject a noise profile."""
    if noise is None:
        noise = _recover_noise(text, pattern, params, exec_index, pair_cache)
    seed_exec = mix(params.seed, ROLE_EXECUTION, exec_index)
    family = family_new(params.k, mix(seed_exec, ROLE_FAMILY))
    ham_sum = member_hamming_sum(text, pattern, family, backend)
    numerator = 2 * ham_sum + correction_numerators(noise, family)
    return DistanceProfile(np.maximum(0.0, numerator / params.k), "estimate")


def approx_profile(
    text: IntString,
    pattern: IntString,
    params: ApproxParams,
    backend: str = "auto",
    *,
    noise_override: NoiseProfile | None = None,
    return_noise: bool = False,
):
    """Per-window median over params.reps executions.

    noise_override injects one fixed noise profile into every execution
    (bypassing recovery entirely); share_dprime recovers once with execution
    0's seeds and reuses that profile.
    """
    pair_cache = None
    shared = noise_override
    if shared is None:
        pair_cache = prepare_pair_counts(text, pattern)
        if params.share_dprime:
            shared = _recover_noise(text, pattern, params, 0, pair_cache)
    runs = np.stack(
        [
            approx_profile_single(
                text, pattern, params, e, backend,
                noise=shared, pair_cache=pair_cache,
            ).values
            for e in range(params.reps)
        ]
    )
    profile = DistanceProfile(np.median(runs, axis=0), "estimate")
    if return_noise:
        return profile, shared
    return profile

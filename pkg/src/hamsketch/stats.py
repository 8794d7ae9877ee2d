"""Accuracy summaries for estimated distance profiles.

Zero-distance convention: a window with exact value 0 counts as within-eps
iff the estimate is exactly 0 (the multiplicative guarantee leaves no slack
there), and its relative error is 0 in that case, +inf otherwise.
"""

from __future__ import annotations

import numpy as np

from .text_model import DistanceProfile


def _values(profile) -> np.ndarray:
    if isinstance(profile, DistanceProfile):
        return profile.values
    return np.asarray(profile)


def relative_errors(estimate, exact) -> np.ndarray:
    est = _values(estimate).astype(np.float64)
    ext = _values(exact).astype(np.float64)
    if est.shape != ext.shape:
        raise ValueError(f"length mismatch: {est.shape} vs {ext.shape}")
    zero = ext == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.abs(est - ext) / ext
    rel[zero & (est == 0)] = 0.0
    rel[zero & (est != 0)] = np.inf
    return rel


def within_epsilon(estimate, exact, epsilon: float) -> np.ndarray:
    est = _values(estimate).astype(np.float64)
    ext = _values(exact).astype(np.float64)
    if est.shape != ext.shape:
        raise ValueError(f"length mismatch: {est.shape} vs {ext.shape}")
    lo = (1.0 - epsilon) * ext
    hi = (1.0 + epsilon) * ext
    ok = (est >= lo) & (est <= hi)
    ok[ext == 0] = est[ext == 0] == 0
    return ok


def fraction_within_epsilon(estimate, exact, epsilon: float) -> float:
    ok = within_epsilon(estimate, exact, epsilon)
    return float(ok.mean()) if ok.size else 1.0


def error_stats(estimate, exact, epsilon: float) -> dict:
    """{fraction_within_epsilon, max/p95/mean_relative_error, n_windows}."""
    rel = relative_errors(estimate, exact)
    finite = rel[np.isfinite(rel)]
    return {
        "n_windows": int(rel.size),
        "fraction_within_epsilon": fraction_within_epsilon(estimate, exact, epsilon),
        "max_relative_error": float(rel.max()) if rel.size else 0.0,
        "p95_relative_error": float(np.percentile(finite, 95)) if finite.size else float("inf"),
        "mean_relative_error": float(finite.mean()) if finite.size else float("inf"),
    }

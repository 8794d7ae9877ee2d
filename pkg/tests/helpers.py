"""Brute-force oracles used across the test modules.

Everything here is deliberately naive: double loops and dict counting only,
no shortcuts shared with the library code.
"""

import numpy as np

from hamsketch._seeds import ROLE_BASE_HASH, mix_array, splitmix64_array
from hamsketch.gf64 import poly3_eval
from hamsketch.hashing import member_eval
from hamsketch.text_model import IntString


def sliding_hamming_brute(text: IntString, pattern: IntString) -> np.ndarray:
    t, p = text.symbols, pattern.symbols
    n, m = len(t), len(p)
    out = np.zeros(n - m + 1, dtype=np.int64)
    for j in range(n - m + 1):
        out[j] = int(np.count_nonzero(t[j : j + m] != p))
    return out


def aligned_ones_brute(tmask, pmask) -> np.ndarray:
    t = np.asarray(tmask)
    p = np.asarray(pmask)
    n, m = len(t), len(p)
    out = np.zeros(n - m + 1, dtype=np.int64)
    for j in range(n - m + 1):
        out[j] = int(np.sum(t[j : j + m] * p))
    return out


def beta_brute(family, u: int, v: int) -> int:
    """Count members agreeing on u and v by enumerating the selection rule.

    One batched polynomial evaluation per call plus an array fold over all k
    members, so k=1024 stays affordable in the acceptance run. Anchored to
    scalar member_eval counting at small k in the unit tests.
    """
    cs = np.array([f.coeffs for f in family.base], dtype=np.uint64)
    xs = np.array([u, v], dtype=np.uint64)
    masks = np.array([[f.range_size - 1] for f in family.base], dtype=np.uint64)
    vals = poly3_eval(
        cs[:, 3:4], cs[:, 2:3], cs[:, 1:2], cs[:, 0:1],
        xs[None, :], max(int(xs.max()).bit_length(), 1),
    )
    bits = (vals & masks).astype(np.int64)
    t = len(family.base) // 2
    members = np.arange(family.k)
    xu = np.zeros(family.k, dtype=np.int64)
    xv = np.zeros(family.k, dtype=np.int64)
    for b in range(t):
        sel = 2 * b + ((members >> b) & 1)
        xu ^= bits[sel, 0]
        xv ^= bits[sel, 1]
    return int((xu == xv).sum())


def alignment_dict_brute(text: IntString, pattern: IntString, j: int) -> dict:
    t, p = text.symbols, pattern.symbols
    out: dict = {}
    for i in range(len(p)):
        u, v = int(t[j + i]), int(p[i])
        if u != v:
            out[(u, v)] = out.get((u, v), 0) + 1
    return out


def fourwise_eval_seeds(out_bits: int, seeds, x: int) -> np.ndarray:
    """fourwise_new(out_bits, s).eval(x) for every s in seeds, as one batch.

    Not an independent oracle; the Monte Carlo tests that use it spot-check a
    few entries against the scalar constructor first.
    """
    h = np.asarray(seeds, dtype=np.uint64)
    c0 = splitmix64_array(h)
    c1 = splitmix64_array(c0)
    c2 = splitmix64_array(c1)
    c3 = splitmix64_array(c2)
    val = poly3_eval(c3, c2, c1, c0, np.uint64(x), max(int(x).bit_length(), 1))
    return (val & np.uint64((1 << out_bits) - 1)).astype(np.int64)


def family2_member_bits_seeds(seeds, u: int) -> tuple[np.ndarray, np.ndarray]:
    """(member 0 bit, member 1 bit) of family_new(2, s) on symbol u, batched."""
    seeds = np.asarray(seeds, dtype=np.uint64)
    b0 = fourwise_eval_seeds(1, mix_array(seeds, ROLE_BASE_HASH, 0), u)
    b1 = fourwise_eval_seeds(1, mix_array(seeds, ROLE_BASE_HASH, 1), u)
    return b0, b1


def member_profile_brute(text: IntString, pattern: IntString, family, i: int) -> np.ndarray:
    """Window Hamming distances of member i's binary projections."""
    tb = np.array([member_eval(family, i, int(s)) for s in text.symbols], dtype=np.int64)
    pb = np.array([member_eval(family, i, int(s)) for s in pattern.symbols], dtype=np.int64)
    n, m = len(tb), len(pb)
    out = np.zeros(n - m + 1, dtype=np.int64)
    for j in range(n - m + 1):
        out[j] = int(np.count_nonzero(tb[j : j + m] != pb))
    return out

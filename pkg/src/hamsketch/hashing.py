"""Hash families for binary projections of symbol alphabets.

Two layers:

* FourWiseHash: a 4-wise independent function [0, 2^20) -> [0, 2^s], built as
  a degree-3 polynomial over GF(2^64) with carry-less multiplication, output
  truncated to the low s bits. Distinct inputs are distinct field points, so
  any four outputs are jointly uniform.

* XorTreeFamily: k = 2^t binary projections derived from 2t base functions
  arranged in t pairs. Member i XORs one function per pair, chosen by bit b
  of i. Each member is 4-wise independent and distinct members are pairwise
  independent, while collision counts over the whole family are computable
  in O(t) via a balanced tree recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._seeds import ROLE_BASE_HASH, mix, u64_stream
from .gf64 import POINT_BITS, poly3_eval

MAX_OUT_BITS = 20
DOMAIN_CAP = 1 << POINT_BITS


@dataclass(frozen=True)
class FourWiseHash:
    """Degree-3 polynomial hash over GF(2^64), truncated to out_bits bits."""

    coeffs: tuple[int, int, int, int]
    out_bits: int

    @property
    def range_size(self) -> int:
        return 1 << self.out_bits

    def eval(self, x: int) -> int:
        if not 0 <= x < DOMAIN_CAP:
            raise ValueError(f"hash input {x} outside [0, 2^{POINT_BITS})")
        c0, c1, c2, c3 = (np.uint64(c) for c in self.coeffs)
        val = poly3_eval(c3, c2, c1, c0, np.uint64(x))
        return int(val) & (self.range_size - 1)

    def eval_array(self, xs) -> np.ndarray:
        xs = np.asarray(xs)
        if xs.size and (xs.min() < 0 or xs.max() >= DOMAIN_CAP):
            raise ValueError(f"hash inputs outside [0, 2^{POINT_BITS})")
        c0, c1, c2, c3 = (np.uint64(c) for c in self.coeffs)
        bits = int(xs.max()).bit_length() if xs.size else 1
        val = poly3_eval(c3, c2, c1, c0, xs.astype(np.uint64), max(bits, 1))
        return (val & np.uint64(self.range_size - 1)).astype(np.int64)

    def table(self, sigma: int) -> np.ndarray:
        """Outputs for every symbol in [0, sigma)."""
        return self.eval_array(np.arange(sigma, dtype=np.int64))


def fourwise_new(out_bits: int, seed: int) -> FourWiseHash:
    """Draw a 4-wise independent hash; all four coefficients come from the
    splitmix64 chain started at seed."""
    if not 1 <= out_bits <= MAX_OUT_BITS:
        raise ValueError(f"out_bits must be in [1, {MAX_OUT_BITS}], got {out_bits}")
    c0, c1, c2, c3 = u64_stream(seed, 4)
    return FourWiseHash(coeffs=(c0, c1, c2, c3), out_bits=out_bits)


@dataclass(frozen=True)
class XorTreeFamily:
    """k binary hash functions as XOR combinations of 2*log2(k) base hashes."""

    k: int
    seed: int
    base: tuple[FourWiseHash, ...]

    @property
    def pairs(self) -> int:
        return len(self.base) // 2


def family_new(k: int, seed: int) -> XorTreeFamily:
    if k < 2 or (k & (k - 1)) != 0:
        raise ValueError(f"family size k must be a power of two >= 2, got {k}")
    t = k.bit_length() - 1
    base = tuple(fourwise_new(1, mix(seed, ROLE_BASE_HASH, j)) for j in range(2 * t))
    return XorTreeFamily(k=k, seed=seed, base=base)


def member_eval(family: XorTreeFamily, i: int, u: int) -> int:
    """Bit output of member i on symbol u: XOR over pairs b of base[2b + bit_b(i)]."""
    if not 0 <= i < family.k:
        raise IndexError(f"member index {i} outside [0, {family.k})")
    out = 0
    for b in range(family.pairs):
        out ^= family.base[2 * b + ((i >> b) & 1)].eval(u)
    return out


def base_bits(family: XorTreeFamily, symbols) -> np.ndarray:
    """(2*pairs, len(symbols)) matrix of base-function bits.

    All base polynomials are evaluated in one broadcast pass; the coefficient
    rows and the symbol axis broadcast inside poly3_eval.
    """
    symbols = np.asarray(symbols, dtype=np.int64)
    if symbols.size and (symbols.min() < 0 or symbols.max() >= DOMAIN_CAP):
        raise ValueError(f"hash inputs outside [0, 2^{POINT_BITS})")
    cs = np.array([f.coeffs for f in family.base], dtype=np.uint64)
    bits = int(symbols.max()).bit_length() if symbols.size else 1
    vals = poly3_eval(
        cs[:, 3:4], cs[:, 2:3], cs[:, 1:2], cs[:, 0:1],
        symbols.astype(np.uint64)[None, :], max(bits, 1),
    )
    return (vals & np.uint64(1)).astype(np.uint8)


def member_table(family: XorTreeFamily, sigma: int) -> np.ndarray:
    """(k, sigma) uint8 matrix: member_table[i, u] == member_eval(family, i, u)."""
    bits = base_bits(family, np.arange(sigma, dtype=np.int64))
    t = family.pairs
    sel = np.zeros((family.k, 2 * t), dtype=np.float32)
    idx = np.arange(family.k)
    for b in range(t):
        sel[idx, 2 * b + ((idx >> b) & 1)] = 1.0
    # float32 matmul is exact here: sums of at most 2t bits
    acc = sel @ bits.astype(np.float32)
    return (acc.astype(np.int64) & 1).astype(np.uint8)


def _combine_pairs(e: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # One tree level: (e, d) of a parent spanning both child nodes. An odd
    # trailing node is carried up unchanged.
    half = len(e) // 2
    e_l, e_r = e[0 : 2 * half : 2], e[1 : 2 * half : 2]
    d_l, d_r = d[0 : 2 * half : 2], d[1 : 2 * half : 2]
    e_new = e_l * e_r + d_l * d_r
    d_new = e_l * d_r + d_l * e_r
    if len(e) % 2:
        e_new = np.concatenate([e_new, e[-1:]])
        d_new = np.concatenate([d_new, d[-1:]])
    return e_new, d_new


def beta(family: XorTreeFamily, u: int, v: int) -> int:
    """Number of members with h_i(u) == h_i(v), in O(log k) hash evaluations."""
    buv = base_bits(family, [u, v])
    agree = (buv[:, 0] == buv[:, 1]).astype(np.int64)
    e = agree[0::2] + agree[1::2]  # per leaf pair: 0, 1, or 2 agreeing choices
    d = 2 - e
    while len(e) > 1:
        e, d = _combine_pairs(e, d)
    return int(e[0])


def beta_many(family: XorTreeFamily, us, vs) -> np.ndarray:
    """Vectorized beta over parallel symbol arrays."""
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    bu = base_bits(family, us)
    bv = base_bits(family, vs)
    agree = (bu == bv).astype(np.int64)
    e = agree[0::2] + agree[1::2]
    d = 2 - e
    while e.shape[0] > 1:
        e, d = _combine_pairs(e, d)
    return e[0]

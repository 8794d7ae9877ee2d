"""Arithmetic in GF(2^64) with carry-less multiplication, vectorized over numpy.

Field elements are uint64 values holding polynomial coefficients over GF(2).
Reduction is modulo x^64 + x^4 + x^3 + x + 1 (a standard irreducible
pentanomial), whose low part is 0b11011 = 0x1B. Addition is XOR.

Multiplication is only ever needed against a "point" operand whose set bits
sit below POINT_BITS (hash inputs are capped at 2^20), which keeps the
shift-and-xor loop short.
"""

from __future__ import annotations

import numpy as np

# Domain cap for hash inputs; evaluation points must sit below 2**POINT_BITS.
POINT_BITS = 20

_U1 = np.uint64(1)
_U64 = np.uint64(64)


def _fold(hi: np.ndarray, lo: np.ndarray) -> np.ndarray:
    # hi * x^64 == hi * (x^4 + x^3 + x + 1) (mod p)
    t = hi ^ (hi << _U1) ^ (hi << np.uint64(3)) ^ (hi << np.uint64(4))
    t_hi = (hi >> np.uint64(63)) ^ (hi >> np.uint64(61)) ^ (hi >> np.uint64(60))
    lo = lo ^ t
    # t_hi < 2^4, so the second fold cannot overflow again
    return lo ^ t_hi ^ (t_hi << _U1) ^ (t_hi << np.uint64(3)) ^ (t_hi << np.uint64(4))


def gf64_mul_point(a, x, point_bits: int = POINT_BITS) -> np.ndarray:
    """Field product a * x where every set bit of x lies below point_bits."""
    a = np.asarray(a, dtype=np.uint64)
    x = np.asarray(x, dtype=np.uint64)
    shape = np.broadcast_shapes(a.shape, x.shape)
    lo = np.zeros(shape, dtype=np.uint64)
    hi = np.zeros(shape, dtype=np.uint64)
    with np.errstate(over="ignore"):
        for i in range(point_bits):
            m = ((x >> np.uint64(i)) & _U1).astype(bool)
            lo = np.where(m, lo ^ (a << np.uint64(i)), lo)
            if i:
                hi = np.where(m, hi ^ (a >> np.uint64(64 - i)), hi)
        return _fold(hi, lo)


def poly3_eval(c3, c2, c1, c0, x, point_bits: int = POINT_BITS) -> np.ndarray:
    """Evaluate c3*x^3 + c2*x^2 + c1*x + c0 over GF(2^64) by Horner's rule.

    Coefficients and x broadcast against each other; x must stay below
    2**point_bits (inputs are hashed symbols, capped at 2^20).
    """
    acc = gf64_mul_point(c3, x, point_bits) ^ np.asarray(c2, dtype=np.uint64)
    acc = gf64_mul_point(acc, x, point_bits) ^ np.asarray(c1, dtype=np.uint64)
    return gf64_mul_point(acc, x, point_bits) ^ np.asarray(c0, dtype=np.uint64)

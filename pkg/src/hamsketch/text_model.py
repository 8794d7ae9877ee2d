"""Instance model: integer strings, profiles, alignment matrices, file I/O.

Symbols are integers in [0, sigma) with sigma capped at 2^20 so per-symbol
alphabet scans stay cheap. Texts and patterns are immutable IntString values;
all generation is deterministic in the seed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from ._seeds import (
    MASK64,
    ROLE_PATTERN,
    ROLE_PLANT,
    ROLE_TEXT,
    mix,
    splitmix64_array,
)

SIGMA_CAP = 1 << 20
_GAMMA = np.uint64(0x9E3779B97F4A7C15)

MODELS = ("uniform", "planted_heavy")

# planted_heavy: weight of the favored pattern symbol (symbol 0)
_HEAVY_PATTERN_WEIGHT = 0.6


class FileFormatError(ValueError):
    """Raised when an instance or profile file cannot be parsed."""


@dataclass(frozen=True)
class IntString:
    """Immutable symbol sequence over the alphabet [0, sigma)."""

    symbols: np.ndarray
    sigma: int

    def __post_init__(self):
        arr = np.asarray(self.symbols, dtype=np.int32)
        if arr.ndim != 1:
            raise ValueError("symbols must be one-dimensional")
        if not 1 <= self.sigma <= SIGMA_CAP:
            raise ValueError(f"sigma must be in [1, {SIGMA_CAP}], got {self.sigma}")
        if arr.size and (arr.min() < 0 or arr.max() >= self.sigma):
            raise ValueError(f"symbols must lie in [0, {self.sigma})")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "symbols", arr)

    def __len__(self) -> int:
        return self.symbols.size


@dataclass(frozen=True)
class DistanceProfile:
    """Per-window distance values; kind is 'exact' or 'estimate'."""

    values: np.ndarray
    kind: str

    def __post_init__(self):
        if self.kind not in ("exact", "estimate"):
            raise ValueError(f"kind must be 'exact' or 'estimate', got {self.kind!r}")
        dtype = np.int64 if self.kind == "exact" else np.float64
        arr = np.asarray(self.values, dtype=dtype)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("profile must be a non-empty vector")
        if arr.min() < 0:
            raise ValueError("distances cannot be negative")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n_windows(self) -> int:
        return self.values.size


@dataclass
class AlignmentMatrix:
    """Mismatch counts of one window: entries[(u, v)] = aligned (u, v) pairs, u != v."""

    sigma: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def row_weight(self, u: int) -> int:
        return sum(c for (a, _), c in self.entries.items() if a == u)

    def col_weight(self, v: int) -> int:
        return sum(c for (_, b), c in self.entries.items() if b == v)

    def get(self, u: int, v: int) -> int:
        return self.entries.get((u, v), 0)


@dataclass
class SparseNoiseMatrix:
    """Sparse approximation of one window's AlignmentMatrix, capped in size."""

    sigma: int
    capacity: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def validate(self) -> None:
        if len(self.entries) > self.capacity:
            raise ValueError(f"{len(self.entries)} entries exceed capacity {self.capacity}")
        for (u, v), val in self.entries.items():
            if u == v:
                raise ValueError(f"diagonal entry ({u},{v}) not allowed")
            if not (0 <= u < self.sigma and 0 <= v < self.sigma):
                raise ValueError(f"entry ({u},{v}) outside alphabet")
            if val <= 0:
                raise ValueError(f"entry ({u},{v}) must be positive, got {val}")

    def get(self, u: int, v: int) -> int:
        return self.entries.get((u, v), 0)


def _counter_draws(seed: int, count: int) -> np.ndarray:
    # splitmix64 in counter mode: draw i is finalize(seed + i*gamma)
    idx = np.arange(count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        states = np.uint64(seed & MASK64) + idx * _GAMMA
    return splitmix64_array(states)


def _draws_to_symbols(draws: np.ndarray, sigma: int) -> np.ndarray:
    # multiply-shift map to [0, sigma); bias <= sigma / 2^32
    return (((draws >> np.uint64(32)) * np.uint64(sigma)) >> np.uint64(32)).astype(np.int32)


def generate_instance(n: int, m: int, sigma: int, model: str, seed: int):
    """Deterministic (text, pattern) instance of the given model.

    uniform: i.i.d. symbols. planted_heavy: uniform text with a contiguous
    block overwritten by one symbol, against a pattern skewed toward symbol 0,
    which forces a heavy-hitter pair inside block windows.
    """
    if m < 1 or m > n:
        raise ValueError(f"need 1 <= m <= n, got m={m}, n={n}")
    if sigma < 1:
        raise ValueError(f"sigma must be >= 1, got {sigma}")
    if sigma > SIGMA_CAP:
        raise ValueError(f"sigma must be <= {SIGMA_CAP}, got {sigma}")
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}, expected one of {MODELS}")

    text_draws = _counter_draws(mix(seed, ROLE_TEXT), n)
    pat_draws = _counter_draws(mix(seed, ROLE_PATTERN), m)

    if model == "uniform" or sigma == 1:
        text = _draws_to_symbols(text_draws, sigma)
        pattern = _draws_to_symbols(pat_draws, sigma)
    else:
        text = _draws_to_symbols(text_draws, sigma)
        # pattern: symbol 0 with weight ~0.6, otherwise uniform
        thresh = np.uint64(int(_HEAVY_PATTERN_WEIGHT * (1 << 24)))
        heavy = (pat_draws >> np.uint64(40)) & np.uint64((1 << 24) - 1)
        uni = (((pat_draws & np.uint64(0xFFFFFFFF)) * np.uint64(sigma)) >> np.uint64(32)).astype(np.int32)
        pattern = np.where(heavy < thresh, np.int32(0), uni)
        # plant a constant block of a non-favored symbol in the text
        plant = _counter_draws(mix(seed, ROLE_PLANT), 2)
        block_len = min(n, max(m, n // 4))
        start = int(plant[0] % np.uint64(n - block_len + 1))
        block_sym = 1 + int(plant[1] % np.uint64(sigma - 1))
        text[start : start + block_len] = block_sym

    return IntString(text, sigma), IntString(pattern, sigma)


def build_alignment_matrix(text: IntString, pattern: IntString, j: int) -> AlignmentMatrix:
    """Exact mismatch-pair counts of window j, in O(m)."""
    n, m = len(text), len(pattern)
    if m > n:
        raise ValueError(f"pattern length {m} exceeds text length {n}")
    if not 0 <= j <= n - m:
        raise IndexError(f"window {j} outside [0, {n - m}]")
    window = text.symbols[j : j + m]
    mism = window != pattern.symbols
    if not mism.any():
        return AlignmentMatrix(sigma=text.sigma)
    codes = window[mism].astype(np.int64) * text.sigma + pattern.symbols[mism]
    uniq, counts = np.unique(codes, return_counts=True)
    entries = {
        (int(c) // text.sigma, int(c) % text.sigma): int(k)
        for c, k in zip(uniq, counts)
    }
    return AlignmentMatrix(sigma=text.sigma, entries=entries)


# ----------------------------------------------------------------------------
# file formats
# ----------------------------------------------------------------------------

def read_tokens(path) -> IntString:
    """Token format: ASCII whitespace-separated decimals, first token = sigma."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            tokens = fh.read().split()
    except UnicodeDecodeError as exc:
        raise FileFormatError(f"{path}: not an ASCII token file ({exc})") from None
    if not tokens:
        raise FileFormatError(f"{path}: empty token file")
    values = []
    for t in tokens:
        try:
            values.append(int(t))
        except ValueError:
            raise FileFormatError(f"{path}: non-integer token {t!r}") from None
    sigma, symbols = values[0], values[1:]
    if not symbols:
        raise FileFormatError(f"{path}: no symbols after sigma header")
    try:
        return IntString(np.array(symbols, dtype=np.int64), sigma)
    except ValueError as exc:
        raise FileFormatError(f"{path}: {exc}") from None


def write_tokens(path, s: IntString) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(str(s.sigma))
        fh.write("\n")
        fh.write(" ".join(str(int(x)) for x in s.symbols))
        fh.write("\n")


def read_bytes(path) -> IntString:
    """Byte format: raw bytes, alphabet fixed at sigma = 256."""
    data = np.fromfile(path, dtype=np.uint8)
    if data.size == 0:
        raise FileFormatError(f"{path}: empty byte file")
    return IntString(data.astype(np.int32), 256)


def write_bytes(path, s: IntString) -> None:
    if s.sigma > 256:
        raise ValueError(f"byte format needs sigma <= 256, got {s.sigma}")
    s.symbols.astype(np.uint8).tofile(path)


def format_value(value, kind: str) -> str:
    if kind == "exact":
        return str(int(value))
    return repr(float(value))


def write_profile_csv(path, profile: DistanceProfile) -> None:
    """CSV with header pos,value; exact profiles print integers."""
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write("pos,value\n")
        for pos, value in enumerate(profile.values):
            fh.write(f"{pos},{format_value(value, profile.kind)}\n")


def read_profile_csv(path) -> np.ndarray:
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["pos", "value"]:
            raise FileFormatError(f"{path}: expected header pos,value, got {header}")
        values = []
        for row in reader:
            if len(row) != 2:
                raise FileFormatError(f"{path}: malformed row {row}")
            values.append(float(row[1]))
    return np.asarray(values, dtype=np.float64)

"""Sparse recovery of heavy mismatch pairs: the noise matrix D'.

For every window j the alignment matrix D_j counts aligned symbol pairs
(u, v), u != v. This module recovers, per window, a sparse approximation D'
with at most ceil(3/eps_eff) entries such that the residual satisfies
sum (d - d')^2 <= b * eps * d^2 on most windows, where b = 12289/16384.

The recovery works over a ladder of coupled projections (tau, pi) into
[ell_i] x [r_i] with ell_i = 32 * 2^i and r_i chosen so ell_i * r_i =
1024/eps_eff. One side is a fresh 4-wise independent hash, the other is its
value modulo the smaller range. Aligned pairs land in buckets of the
[ell] x [r] grid; buckets that contain no (s, s) preimage ("non-diagonal"
buckets) receive only mismatch mass. A pair that dominates its bucket is
decoded from bit-plane majorities, and every decode min-updates its pair's
running estimate, so overcounts from shared buckets can only shrink.

compute_bucket_table keeps the literal one-count-per-bucket form (used as the
small-scale oracle); construct_sparse_noise computes identical bucket counts
from exact per-window pair counts, which is what makes desk-scale sizes
tractable. construct_reference wires the literal pieces together and must
produce bit-identical profiles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ._seeds import ROLE_PROJECTION, mix
from .correlation import count_aligned_ones
from .hashing import FourWiseHash, fourwise_new
from .karloff import default_reps
from .text_model import IntString, SparseNoiseMatrix

# noise budget constant: sum (d - d')^2 <= B_CONST * eps * d^2
B_CONST = 12289 / 16384

DEFAULT_MEM_BUDGET = 1 << 30

_INF = np.int64(1) << 62
_MAX_T_EXP = 25  # keeps every projection range within the hash output cap


# ----------------------------------------------------------------------------
# parameters
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class RecoveryParams:
    """Effective accuracy eps_eff = 1024/2^t_exp <= epsilon, plus repetitions."""

    epsilon: float
    epsilon_eff: float
    t_exp: int
    reps: int
    seed: int

    @property
    def capacity(self) -> int:
        # ceil(3/eps_eff); eps_eff is a power of two so this is exact
        return 3 << (self.t_exp - 10)

    @property
    def num_scales(self) -> int:
        # scales i = 0 .. log2(1/eps_eff)
        return self.t_exp - 10 + 1

    @property
    def bucket_count(self) -> int:
        return 1 << self.t_exp


def recovery_params(
    epsilon: float, seed: int, n: int | None = None, reps: int | None = None
) -> RecoveryParams:
    if not 0 < epsilon <= 0.5:
        raise ValueError(f"epsilon must be in (0, 1/2], got {epsilon}")
    t = 11
    while (1 << t) * epsilon < 1024.0:
        t += 1
        if t > _MAX_T_EXP:
            raise ValueError(f"epsilon {epsilon} too small; need epsilon >= {1024.0 / (1 << _MAX_T_EXP)}")
    if reps is None:
        if n is None:
            raise ValueError("need text length n to derive the default repetition count")
        reps = default_reps(n)
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    return RecoveryParams(
        epsilon=epsilon, epsilon_eff=1024.0 / (1 << t), t_exp=t, reps=reps, seed=seed
    )


def scale_ranges(params: RecoveryParams, i: int) -> tuple[int, int]:
    """(ell_i, r_i) = (32 * 2^i, 32 * 2^(L-i)); the product is always 1024/eps_eff."""
    L = params.num_scales - 1
    if not 0 <= i <= L:
        raise IndexError(f"scale {i} outside [0, {L}]")
    return 32 << i, 32 << (L - i)


# ----------------------------------------------------------------------------
# coupled projections
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class CoupledProjection:
    """Projection pair tau: [0,sigma) -> [ell], pi: [0,sigma) -> [r].

    The side with the larger range is a fresh 4-wise independent hash; the
    other side is the same values modulo its own range (low bits), so the two
    sides agree on which coarse bucket a symbol occupies.
    """

    ell: int
    r: int
    sigma: int
    scale_index: int
    rep_index: int
    tau_table: np.ndarray
    pi_table: np.ndarray
    drawn: FourWiseHash | None = field(default=None, repr=False)

    def tau(self, s: int) -> int:
        return int(self.tau_table[s])

    def pi(self, s: int) -> int:
        return int(self.pi_table[s])

    def diagonal_ids(self) -> np.ndarray:
        """Sorted bucket ids tau(s)*r + pi(s) over the whole alphabet."""
        ids = self.tau_table.astype(np.int64) * self.r + self.pi_table.astype(np.int64)
        return np.unique(ids)


def make_coupled_projection(
    i: int, params: RecoveryParams, rep: int, sigma: int
) -> CoupledProjection:
    """Deterministic in (params.seed, i, rep); ell >= r draws tau, else pi."""
    ell, r = scale_ranges(params, i)
    seed_h = mix(params.seed, ROLE_PROJECTION, i, rep)
    if ell >= r:
        drawn = fourwise_new(ell.bit_length() - 1, seed_h)
        tau_table = drawn.table(sigma)
        pi_table = tau_table & (r - 1)
    else:
        drawn = fourwise_new(r.bit_length() - 1, seed_h)
        pi_table = drawn.table(sigma)
        tau_table = pi_table & (ell - 1)
    return CoupledProjection(
        ell=ell,
        r=r,
        sigma=sigma,
        scale_index=i,
        rep_index=rep,
        tau_table=tau_table,
        pi_table=pi_table,
        drawn=drawn,
    )


# ----------------------------------------------------------------------------
# bucket tables (literal form; the small-scale oracle)
# ----------------------------------------------------------------------------

@dataclass
class BucketCounts:
    c: np.ndarray          # (nw,) aligned pairs in the bucket per window
    u_planes: np.ndarray   # (nbits, nw) counts restricted to text-symbol bit b set
    v_planes: np.ndarray   # (nbits, nw) same for the pattern symbol


@dataclass
class BucketTable:
    ell: int
    r: int
    nbits: int
    diagonal: frozenset
    buckets: dict[tuple[int, int], BucketCounts]


def compute_bucket_table(
    text: IntString, pattern: IntString, proj: CoupledProjection, backend: str = "auto"
) -> BucketTable:
    """Count vectors for every non-diagonal bucket via one aligned-ones pass
    per count vector. Zero-preimage buckets are omitted (all their counts are
    zero and they can never decode)."""
    sigma = text.sigma
    nbits = (sigma - 1).bit_length()
    tproj = proj.tau_table[text.symbols]
    pproj = proj.pi_table[pattern.symbols]
    diagonal = frozenset(
        (int(proj.tau_table[s]), int(proj.pi_table[s])) for s in range(sigma)
    )
    buckets: dict[tuple[int, int], BucketCounts] = {}
    t_syms = text.symbols
    p_syms = pattern.symbols
    for x in np.unique(tproj):
        t_mask = (tproj == x).astype(np.uint8)
        t_bits = [t_mask & ((t_syms >> b) & 1).astype(np.uint8) for b in range(nbits)]
        for y in np.unique(pproj):
            if (int(x), int(y)) in diagonal:
                continue
            p_mask = (pproj == y).astype(np.uint8)
            p_bits = [p_mask & ((p_syms >> b) & 1).astype(np.uint8) for b in range(nbits)]
            c = count_aligned_ones(t_mask, p_mask, backend)
            u_planes = np.stack(
                [count_aligned_ones(tb, p_mask, backend) for tb in t_bits]
            ) if nbits else np.zeros((0, c.size), dtype=np.int64)
            v_planes = np.stack(
                [count_aligned_ones(t_mask, pb, backend) for pb in p_bits]
            ) if nbits else np.zeros((0, c.size), dtype=np.int64)
            buckets[(int(x), int(y))] = BucketCounts(c=c, u_planes=u_planes, v_planes=v_planes)
    return BucketTable(ell=proj.ell, r=proj.r, nbits=nbits, diagonal=diagonal, buckets=buckets)


def decode_bucket(
    c: int, bit_counts: tuple, proj: CoupledProjection, x: int, y: int
):
    """Recover the candidate pair dominating a bucket, or None.

    Bit b of u is set iff the u-plane count exceeds c/2; a plane hitting c/2
    exactly is ambiguous and rejects the bucket. The decoded pair must be a
    real mismatch pair consistent with the projection.
    """
    if c <= 0:
        return None
    u_planes, v_planes = bit_counts
    u = 0
    for b, p in enumerate(u_planes):
        if 2 * p == c:
            return None
        if 2 * p > c:
            u |= 1 << b
    v = 0
    for b, p in enumerate(v_planes):
        if 2 * p == c:
            return None
        if 2 * p > c:
            v |= 1 << b
    sigma = proj.sigma
    if u == v or u >= sigma or v >= sigma:
        return None
    if int(proj.tau_table[u]) != x or int(proj.pi_table[v]) != y:
        return None
    return (u, v)


# ----------------------------------------------------------------------------
# noise profiles (per-window sparse matrices, CSR layout)
# ----------------------------------------------------------------------------

@dataclass(eq=False)
class NoiseProfile:
    """All windows' sparse noise matrices in one CSR-like structure.

    Window j owns entries indptr[j]:indptr[j+1]; within a window entries are
    sorted by (u, v).
    """

    sigma: int
    capacity: int
    indptr: np.ndarray
    us: np.ndarray
    vs: np.ndarray
    values: np.ndarray

    @property
    def n_windows(self) -> int:
        return self.indptr.size - 1

    def window(self, j: int) -> SparseNoiseMatrix:
        if not 0 <= j < self.n_windows:
            raise IndexError(f"window {j} outside [0, {self.n_windows})")
        lo, hi = int(self.indptr[j]), int(self.indptr[j + 1])
        entries = {
            (int(self.us[e]), int(self.vs[e])): int(self.values[e])
            for e in range(lo, hi)
        }
        return SparseNoiseMatrix(sigma=self.sigma, capacity=self.capacity, entries=entries)

    def entry_windows(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_windows, dtype=np.int64), np.diff(self.indptr))

    def validate(self) -> None:
        if np.any(np.diff(self.indptr) > self.capacity):
            raise ValueError("a window exceeds the entry capacity")
        if self.values.size:
            if self.values.min() <= 0:
                raise ValueError("noise entries must be positive")
            if np.any(self.us == self.vs):
                raise ValueError("diagonal noise entries not allowed")

    def same_as(self, other: "NoiseProfile") -> bool:
        return (
            self.sigma == other.sigma
            and self.capacity == other.capacity
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.us, other.us)
            and np.array_equal(self.vs, other.vs)
            and np.array_equal(self.values, other.values)
        )

    def dump_csv(self, path) -> None:
        wins = self.entry_windows()
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write("window,u,v,dprime\n")
            for w, u, v, val in zip(wins, self.us, self.vs, self.values):
                fh.write(f"{w},{u},{v},{val}\n")


def noise_profile_from_windows(
    window_entries, sigma: int, capacity: int | None = None
) -> NoiseProfile:
    """Build a profile from per-window {(u, v): value} dicts.

    With capacity=None nothing is filtered (used to inject exact matrices);
    otherwise each window keeps its top-capacity values, ties broken toward
    the lexicographically smaller pair.
    """
    if capacity is None:
        cap = max((len(d) for d in window_entries), default=0)
        cap = max(cap, 1)
        filtered = False
    else:
        cap = capacity
        filtered = True
    indptr = [0]
    us: list[int] = []
    vs: list[int] = []
    vals: list[int] = []
    for entries in window_entries:
        items = [(uv, val) for uv, val in entries.items() if val > 0]
        if filtered and len(items) > cap:
            items.sort(key=lambda kv: (-kv[1], kv[0]))
            items = items[:cap]
        items.sort(key=lambda kv: kv[0])
        for (u, v), val in items:
            us.append(u)
            vs.append(v)
            vals.append(int(val))
        indptr.append(len(us))
    return NoiseProfile(
        sigma=sigma,
        capacity=cap,
        indptr=np.asarray(indptr, dtype=np.int64),
        us=np.asarray(us, dtype=np.int32),
        vs=np.asarray(vs, dtype=np.int32),
        values=np.asarray(vals, dtype=np.int64),
    )


# ----------------------------------------------------------------------------
# exact per-window pair counts (shared precompute for the fast path)
# ----------------------------------------------------------------------------

@dataclass
class PairCounts:
    """Exact mismatch-pair counts for all windows, dense or CSR by size."""

    kind: str  # "dense" | "sparse"
    sigma: int
    n_windows: int
    dense: np.ndarray | None = None       # (sigma^2, nw) int32
    indptr: np.ndarray | None = None
    codes: np.ndarray | None = None       # int64, u*sigma+v, sorted per window
    counts: np.ndarray | None = None


def _iter_window_blocks(text, pattern, nw: int, block: int):
    m = pattern.size
    windows = sliding_window_view(text, m)
    for lo in range(0, nw, block):
        hi = min(nw, lo + block)
        wins = windows[lo:hi]
        mism = wins != pattern
        yield lo, hi, wins, mism


def prepare_pair_counts(
    text: IntString, pattern: IntString, mem_budget: int = DEFAULT_MEM_BUDGET
) -> PairCounts:
    sigma = text.sigma
    n, m = len(text), len(pattern)
    nw = n - m + 1
    t_syms = text.symbols.astype(np.int64)
    p_syms = pattern.symbols.astype(np.int64)
    pair_space = sigma * sigma
    dense_ok = pair_space <= (1 << 16) and pair_space * nw * 12 <= mem_budget
    if dense_ok:
        dd = np.zeros((pair_space, nw), dtype=np.int32)
        # block bounded by both the window-view size and the bincount range
        block = max(1, min((1 << 22) // max(m, 1), (1 << 22) // pair_space))
        for lo, hi, wins, mism in _iter_window_blocks(t_syms, p_syms, nw, block):
            bb = hi - lo
            codes = wins * sigma + p_syms[None, :]
            local = codes + (np.arange(bb, dtype=np.int64) * pair_space)[:, None]
            flat = local[mism]
            cnt = np.bincount(flat, minlength=bb * pair_space).reshape(bb, pair_space)
            dd[:, lo:hi] = cnt.T
        return PairCounts(kind="dense", sigma=sigma, n_windows=nw, dense=dd)

    code_chunks: list[np.ndarray] = []
    count_chunks: list[np.ndarray] = []
    sizes = np.zeros(nw, dtype=np.int64)
    block = max(1, (1 << 22) // max(m, 1))
    for lo, hi, wins, mism in _iter_window_blocks(t_syms, p_syms, nw, block):
        wl, il = np.nonzero(mism)
        codes = wins[wl, il] * sigma + p_syms[il]
        order = np.lexsort((codes, wl))
        wl, codes = wl[order], codes[order]
        new = np.ones(wl.size, dtype=bool)
        if wl.size:
            new[1:] = (wl[1:] != wl[:-1]) | (codes[1:] != codes[:-1])
        starts = np.flatnonzero(new)
        runs = np.diff(np.append(starts, wl.size))
        code_chunks.append(codes[starts])
        count_chunks.append(runs.astype(np.int64))
        sizes[lo:hi] += np.bincount(wl[starts], minlength=hi - lo)
    indptr = np.zeros(nw + 1, dtype=np.int64)
    np.cumsum(sizes, out=indptr[1:])
    return PairCounts(
        kind="sparse",
        sigma=sigma,
        n_windows=nw,
        indptr=indptr,
        codes=np.concatenate(code_chunks) if code_chunks else np.zeros(0, np.int64),
        counts=np.concatenate(count_chunks) if count_chunks else np.zeros(0, np.int64),
    )


# ----------------------------------------------------------------------------
# the constructor (fast path)
# ----------------------------------------------------------------------------

def construct_sparse_noise(
    text: IntString,
    pattern: IntString,
    params: RecoveryParams,
    *,
    mem_budget: int = DEFAULT_MEM_BUDGET,
    pair_cache: PairCounts | None = None,
) -> NoiseProfile:
    """Per-window sparse noise matrices from the projection ladder.

    Every (scale, rep) draws a coupled projection; every non-diagonal bucket
    with positive count is decoded and the decoded pair min-updated with the
    bucket count. Unset entries become 0 and each window keeps only its
    capacity largest values.
    """
    if text.sigma != pattern.sigma:
        raise ValueError(f"alphabet mismatch: {text.sigma} vs {pattern.sigma}")
    n, m = len(text), len(pattern)
    if m > n:
        raise ValueError(f"pattern length {m} exceeds text length {n}")
    nw = n - m + 1
    sigma = text.sigma
    if sigma < 2:
        return _empty_profile(sigma, params.capacity, nw)
    if pair_cache is None:
        pair_cache = prepare_pair_counts(text, pattern, mem_budget)
    if pair_cache.kind == "dense":
        return _construct_dense(pair_cache, params)
    return _construct_sparse(pair_cache, params)


def _empty_profile(sigma: int, capacity: int, nw: int) -> NoiseProfile:
    return NoiseProfile(
        sigma=sigma,
        capacity=capacity,
        indptr=np.zeros(nw + 1, dtype=np.int64),
        us=np.zeros(0, dtype=np.int32),
        vs=np.zeros(0, dtype=np.int32),
        values=np.zeros(0, dtype=np.int64),
    )


def _projection_plan(params: RecoveryParams, sigma: int):
    for i in range(params.num_scales):
        for rep in range(params.reps):
            yield make_coupled_projection(i, params, rep, sigma)


def _nondiag_mask(bkt: np.ndarray, diag: np.ndarray) -> np.ndarray:
    pos = np.searchsorted(diag, bkt)
    pos = np.minimum(pos, diag.size - 1)
    return diag[pos] != bkt


def _decode_plane_bits(plane_sums, c):
    """Vectorized majority decode; returns (symbol, tie) arrays."""
    nbits = len(plane_sums)
    sym = np.zeros(c.shape, dtype=np.int64)
    tie = np.zeros(c.shape, dtype=bool)
    for b in range(nbits):
        pl = plane_sums[b]
        tie |= (2 * pl) == c
        sym |= ((2 * pl) > c).astype(np.int64) << b
    return sym, tie


def _construct_dense(cache: PairCounts, params: RecoveryParams) -> NoiseProfile:
    dd = cache.dense
    sigma, nw = cache.sigma, cache.n_windows
    nbits = (sigma - 1).bit_length()
    pair_space = sigma * sigma
    # every running value is a bucket count <= m, so 32-bit cells are safe
    # and halve the memory traffic of the min-update passes
    inf = np.int32(np.iinfo(np.int32).max)
    A = np.full((pair_space, nw), inf, dtype=np.int32)
    occ = np.flatnonzero(dd.any(axis=1))
    if occ.size == 0:
        return _empty_profile(sigma, params.capacity, nw)
    u_occ = occ // sigma
    v_occ = occ % sigma
    ever_single = np.zeros(occ.size, dtype=bool)
    two_a: list = []
    two_b: list = []

    for proj in _projection_plan(params, sigma):
        tau = proj.tau_table.astype(np.int64)
        pi = proj.pi_table.astype(np.int64)
        diag = proj.diagonal_ids()
        bkt = tau[u_occ] * proj.r + pi[v_occ]
        keep = np.flatnonzero(_nondiag_mask(bkt, diag))
        if keep.size == 0:
            continue
        order = keep[np.argsort(bkt[keep], kind="stable")]
        bs = bkt[order]
        new = np.ones(bs.size, dtype=bool)
        new[1:] = bs[1:] != bs[:-1]
        starts = np.flatnonzero(new)
        ends = np.append(starts[1:], bs.size)
        sizes = ends - starts
        ever_single[order[starts[sizes == 1]]] = True
        # two-member buckets decode to the strictly heavier member with
        # value c = d_a + d_b (equal weights tie every differing bit plane
        # and reject), so no plane sums or projection checks are needed;
        # collected across projections and applied per target code below
        pair_starts = starts[sizes == 2]
        if pair_starts.size:
            two_a.append(occ[order[pair_starts]])
            two_b.append(occ[order[pair_starts + 1]])
        for s0, e0 in zip(starts[sizes > 2], ends[sizes > 2]):
            members = occ[order[s0:e0]]
            _decode_group_dense(
                A, dd, members, sigma, nbits,
                int(bs[s0]) // proj.r, int(bs[s0]) % proj.r, tau, pi, inf,
            )

    # two-group updates per target code p: min over instances of
    # d_p + d_q where d_q < d_p, which is d_p + min(partner rows) when that
    # minimum sits strictly below d_p
    if two_a:
        ta = np.concatenate(two_a + two_b)
        tb = np.concatenate(two_b + two_a)
        order2 = np.argsort(ta, kind="stable")
        ta, tb = ta[order2], tb[order2]
        new2 = np.ones(ta.size, dtype=bool)
        new2[1:] = ta[1:] != ta[:-1]
        starts2 = np.flatnonzero(new2)
        ends2 = np.append(starts2[1:], ta.size)
        for s0, e0 in zip(starts2, ends2):
            p = int(ta[s0])
            partner_min = dd[tb[s0:e0]].min(axis=0) if e0 - s0 > 1 else dd[tb[s0]]
            rp_ = dd[p]
            row = A[p]
            np.minimum(row, np.where(partner_min < rp_, rp_ + partner_min, inf), out=row)

    # singleton contributions are the exact pair counts, identical in every
    # repetition where the pair sat alone, so one pass suffices
    single_rows = occ[ever_single]
    for lo in range(0, single_rows.size, 256):
        rows = single_rows[lo : lo + 256]
        vals = dd[rows]
        A[rows] = np.minimum(A[rows], np.where(vals > 0, vals, inf))

    A[A == inf] = 0
    return _filter_dense(A, sigma, params.capacity, nw)


def _decode_group_dense(A, dd, members, sigma, nbits, x, y, tau, pi, inf):
    sub = dd[members]
    c = sub.sum(axis=0)
    act = c > 0
    if not act.any():
        return
    us = members // sigma
    vs = members % sigma
    # one BLAS call replaces 2*nbits masked row sums; counts stay below the
    # float mantissa so the products are exact
    fdt = np.float32 if int(c.max()) < (1 << 24) else np.float64
    sel = np.empty((2 * nbits, members.size), dtype=fdt)
    for b in range(nbits):
        sel[b] = (us >> b) & 1
        sel[nbits + b] = (vs >> b) & 1
    planes = sel @ sub.astype(fdt)
    cf = c.astype(fdt)
    u_dec, tie_u = _decode_plane_bits(planes[:nbits], cf)
    v_dec, tie_v = _decode_plane_bits(planes[nbits:], cf)
    valid = act & ~tie_u & ~tie_v & (u_dec != v_dec) & (u_dec < sigma) & (v_dec < sigma)
    if not valid.any():
        return
    uu = np.where(valid, u_dec, 0)
    vv = np.where(valid, v_dec, 0)
    valid &= (tau[uu] == x) & (pi[vv] == y)
    if not valid.any():
        return
    dest = u_dec * sigma + v_dec
    for code in np.unique(dest[valid]):
        msk = valid & (dest == code)
        row = A[code]
        np.minimum(row, np.where(msk, c, inf), out=row)


def _filter_dense(A: np.ndarray, sigma: int, capacity: int, nw: int) -> NoiseProfile:
    pair_space = A.shape[0]
    if pair_space > capacity:
        code_bits = max(1, (pair_space - 1).bit_length())
        anti_code = (np.int64((1 << code_bits) - 1)
                     - np.arange(pair_space, dtype=np.int64))[:, None]
        key = A * np.int64(1 << code_bits) + anti_code
        top = np.argpartition(-key, capacity - 1, axis=0)[:capacity]
        keep = np.zeros(A.shape, dtype=bool)
        np.put_along_axis(keep, top, True, axis=0)
        A = np.where(keep, A, 0)
    mask = (A.T > 0)
    win_idx, code_idx = np.nonzero(mask)
    values = A.T[mask]
    indptr = np.zeros(nw + 1, dtype=np.int64)
    np.cumsum(mask.sum(axis=1, dtype=np.int64), out=indptr[1:])
    return NoiseProfile(
        sigma=sigma,
        capacity=capacity,
        indptr=indptr,
        us=(code_idx // sigma).astype(np.int32),
        vs=(code_idx % sigma).astype(np.int32),
        values=values.astype(np.int64),
    )


def _construct_sparse(cache: PairCounts, params: RecoveryParams) -> NoiseProfile:
    sigma, nw = cache.sigma, cache.n_windows
    indptr, codes, cnts = cache.indptr, cache.codes, cache.counts
    if codes.size == 0:
        return _empty_profile(sigma, params.capacity, nw)
    nbits = (sigma - 1).bit_length()
    win = np.repeat(np.arange(nw, dtype=np.int64), np.diff(indptr))
    distinct, inv = np.unique(codes, return_inverse=True)
    du = distinct // sigma
    dv = distinct % sigma
    ever_single = np.zeros(distinct.size, dtype=bool)
    pool_w: list[np.ndarray] = []
    pool_c: list[np.ndarray] = []
    pool_v: list[np.ndarray] = []
    pooled = 0

    def consolidate():
        nonlocal pooled
        if not pool_w:
            return
        w = np.concatenate(pool_w)
        cc = np.concatenate(pool_c)
        vv = np.concatenate(pool_v)
        w, cc, vv = _reduce_min_triples(w, cc, vv)
        pool_w[:] = [w]
        pool_c[:] = [cc]
        pool_v[:] = [vv]
        pooled = w.size

    for proj in _projection_plan(params, sigma):
        tau = proj.tau_table.astype(np.int64)
        pi = proj.pi_table.astype(np.int64)
        diag = proj.diagonal_ids()
        bkt_d = tau[du] * proj.r + pi[dv]
        nondiag_d = _nondiag_mask(bkt_d, diag)
        # per-bucket multiplicity over occurring codes
        buckets_nd = bkt_d[nondiag_d]
        if buckets_nd.size == 0:
            continue
        uniq_b, b_inv, b_cnt = np.unique(buckets_nd, return_inverse=True, return_counts=True)
        multi_code = np.zeros(distinct.size, dtype=bool)
        multi_code[np.flatnonzero(nondiag_d)] = b_cnt[b_inv] > 1
        single_code = nondiag_d & ~multi_code
        ever_single |= single_code
        # entries belonging to multi-preimage buckets, grouped per (window, bucket)
        esel = np.flatnonzero(multi_code[inv])
        if esel.size == 0:
            continue
        ew = win[esel]
        eb = bkt_d[inv[esel]]
        ec = cnts[esel]
        eu = du[inv[esel]]
        ev = dv[inv[esel]]
        order = np.lexsort((eb, ew))
        ew, eb, ec, eu, ev = ew[order], eb[order], ec[order], eu[order], ev[order]
        new = np.ones(ew.size, dtype=bool)
        new[1:] = (ew[1:] != ew[:-1]) | (eb[1:] != eb[:-1])
        starts = np.flatnonzero(new)
        c_seg = np.add.reduceat(ec, starts)
        u_planes = [np.add.reduceat(ec * ((eu >> b) & 1), starts) for b in range(nbits)]
        v_planes = [np.add.reduceat(ec * ((ev >> b) & 1), starts) for b in range(nbits)]
        u_dec, tie_u = _decode_plane_bits(u_planes, c_seg)
        v_dec, tie_v = _decode_plane_bits(v_planes, c_seg)
        valid = ~tie_u & ~tie_v & (u_dec != v_dec) & (u_dec < sigma) & (v_dec < sigma)
        if not valid.any():
            continue
        xb = eb[starts] // proj.r
        yb = eb[starts] % proj.r
        uu = np.where(valid, u_dec, 0)
        vv_ = np.where(valid, v_dec, 0)
        valid &= (tau[uu] == xb) & (pi[vv_] == yb)
        if not valid.any():
            continue
        pool_w.append(ew[starts][valid])
        pool_c.append((u_dec * sigma + v_dec)[valid])
        pool_v.append(c_seg[valid])
        pooled += pool_w[-1].size
        if pooled > (1 << 22):
            consolidate()

    sel = ever_single[inv]
    pool_w.append(win[sel])
    pool_c.append(codes[sel])
    pool_v.append(cnts[sel])
    consolidate()
    w, cc, vv = pool_w[0], pool_c[0], pool_v[0]
    return _filter_triples(w, cc, vv, sigma, params.capacity, nw)


def _reduce_min_triples(w, code, val):
    if w.size == 0:
        return w, code, val
    order = np.lexsort((code, w))
    w, code, val = w[order], code[order], val[order]
    new = np.ones(w.size, dtype=bool)
    new[1:] = (w[1:] != w[:-1]) | (code[1:] != code[:-1])
    starts = np.flatnonzero(new)
    return w[starts], code[starts], np.minimum.reduceat(val, starts)


def _filter_triples(w, code, val, sigma, capacity, nw) -> NoiseProfile:
    pos = val > 0
    w, code, val = w[pos], code[pos], val[pos]
    if w.size:
        order = np.lexsort((code, -val, w))
        w, code, val = w[order], code[order], val[order]
        new = np.ones(w.size, dtype=bool)
        new[1:] = w[1:] != w[:-1]
        seg_id = np.cumsum(new) - 1
        starts = np.flatnonzero(new)
        rank = np.arange(w.size) - starts[seg_id]
        keep = rank < capacity
        w, code, val = w[keep], code[keep], val[keep]
        order = np.lexsort((code, w))
        w, code, val = w[order], code[order], val[order]
    indptr = np.zeros(nw + 1, dtype=np.int64)
    np.cumsum(np.bincount(w, minlength=nw), out=indptr[1:])
    return NoiseProfile(
        sigma=sigma,
        capacity=capacity,
        indptr=indptr,
        us=(code // sigma).astype(np.int32),
        vs=(code % sigma).astype(np.int32),
        values=val.astype(np.int64),
    )


# ----------------------------------------------------------------------------
# literal reference constructor (test oracle)
# ----------------------------------------------------------------------------

def construct_reference(
    text: IntString, pattern: IntString, params: RecoveryParams, backend: str = "auto"
) -> NoiseProfile:
    """Straight transcription of the bucket/decode/min-update procedure.

    Quadratic-ish and only meant for small instances; construct_sparse_noise
    must match it entry for entry.
    """
    sigma = text.sigma
    n, m = len(text), len(pattern)
    nw = n - m + 1
    if sigma < 2:
        return _empty_profile(sigma, params.capacity, nw)
    dicts: list[dict] = [dict() for _ in range(nw)]
    for proj in _projection_plan(params, sigma):
        table = compute_bucket_table(text, pattern, proj, backend)
        for (x, y), bc in table.buckets.items():
            for j in range(nw):
                c = int(bc.c[j])
                if c <= 0:
                    continue
                cand = decode_bucket(
                    c, (bc.u_planes[:, j], bc.v_planes[:, j]), proj, x, y
                )
                if cand is None:
                    continue
                prev = dicts[j].get(cand)
                if prev is None or c < prev:
                    dicts[j][cand] = c
    return noise_profile_from_windows(dicts, sigma, capacity=params.capacity)

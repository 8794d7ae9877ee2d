import numpy as np
import pytest

from hamsketch.sparse_recovery import (
    NoiseProfile,
    compute_bucket_table,
    construct_reference,
    construct_sparse_noise,
    decode_bucket,
    make_coupled_projection,
    noise_profile_from_windows,
    prepare_pair_counts,
    recovery_params,
    scale_ranges,
)
from hamsketch.text_model import IntString, generate_instance

from helpers import alignment_dict_brute


def _uniform(n, m, sigma, seed):
    return generate_instance(n, m, sigma, "uniform", seed)


def test_recovery_params_worked_values():
    p = recovery_params(0.25, seed=0, reps=1)
    assert (p.t_exp, p.epsilon_eff, p.capacity, p.num_scales) == (12, 0.25, 12, 3)
    p = recovery_params(0.1, seed=0, reps=1)
    assert (p.t_exp, p.epsilon_eff, p.capacity, p.num_scales) == (14, 0.0625, 48, 5)
    assert p.bucket_count == 1 << 14
    p = recovery_params(0.5, seed=0, reps=1)
    assert (p.t_exp, p.epsilon_eff, p.capacity, p.num_scales) == (11, 0.5, 6, 2)
    # effective accuracy never exceeds the requested one
    for eps in (0.5, 0.3, 0.25, 0.1, 0.07, 0.001):
        assert recovery_params(eps, seed=0, reps=1).epsilon_eff <= eps


def test_recovery_params_default_reps_and_errors():
    assert recovery_params(0.25, seed=0, n=1024).reps == 20
    with pytest.raises(ValueError):
        recovery_params(0.25, seed=0)  # neither n nor reps
    with pytest.raises(ValueError):
        recovery_params(0.25, seed=0, reps=0)
    for bad in (0.0, -0.2, 0.75):
        with pytest.raises(ValueError):
            recovery_params(bad, seed=0, reps=1)
    with pytest.raises(ValueError):
        recovery_params(1e-6, seed=0, reps=1)  # below the bucket-count cap


def test_scale_ranges_cover_the_ladder():
    p = recovery_params(0.1, seed=0, reps=1)
    pairs = [scale_ranges(p, i) for i in range(p.num_scales)]
    assert pairs[0] == (32, 512)
    assert pairs[-1] == (512, 32)
    for ell, r in pairs:
        assert ell * r == p.bucket_count
    with pytest.raises(IndexError):
        scale_ranges(p, p.num_scales)
    with pytest.raises(IndexError):
        scale_ranges(p, -1)


def test_projection_coupling_low_bits():
    sigma = 256
    p = recovery_params(0.03125, seed=5, reps=1)
    assert p.num_scales == 6
    # small ell: pi is the drawn hash, tau its low bits
    proj = make_coupled_projection(0, p, rep=0, sigma=sigma)
    assert (proj.ell, proj.r) == (32, 1024)
    assert np.array_equal(proj.pi_table, proj.drawn.table(sigma))
    assert np.array_equal(proj.tau_table, proj.pi_table & 31)
    # large ell: roles swap
    proj = make_coupled_projection(5, p, rep=0, sigma=sigma)
    assert (proj.ell, proj.r) == (1024, 32)
    assert np.array_equal(proj.tau_table, proj.drawn.table(sigma))
    assert np.array_equal(proj.pi_table, proj.tau_table & 31)
    # equal ranges: tau side is the drawn one
    q = recovery_params(0.0625, seed=5, reps=1)
    proj = make_coupled_projection(2, q, rep=0, sigma=sigma)
    assert proj.ell == proj.r == 128
    assert np.array_equal(proj.tau_table, proj.drawn.table(sigma))


def test_projection_determinism_and_rep_variation():
    p = recovery_params(0.25, seed=9, reps=2)
    a = make_coupled_projection(1, p, rep=0, sigma=64)
    b = make_coupled_projection(1, p, rep=0, sigma=64)
    assert np.array_equal(a.tau_table, b.tau_table)
    assert np.array_equal(a.pi_table, b.pi_table)
    c = make_coupled_projection(1, p, rep=1, sigma=64)
    assert not np.array_equal(a.tau_table, c.tau_table)


def test_bucket_table_partitions_mismatch_mass():
    text, pattern = _uniform(48, 8, 8, seed=31)
    p = recovery_params(0.25, seed=7, reps=1)
    proj = make_coupled_projection(0, p, rep=0, sigma=8)
    table = compute_bucket_table(text, pattern, proj)
    nw = len(text) - len(pattern) + 1
    briefs = [alignment_dict_brute(text, pattern, j) for j in range(nw)]
    assert all(key not in table.diagonal for key in table.buckets)
    for (x, y), bc in table.buckets.items():
        for j in range(nw):
            want = sum(
                cnt
                for (u, v), cnt in briefs[j].items()
                if proj.tau(u) == x and proj.pi(v) == y
            )
            assert int(bc.c[j]) == want
            # plane counts are the same mass restricted to one symbol bit
            for b in range(table.nbits):
                want_u = sum(
                    cnt
                    for (u, v), cnt in briefs[j].items()
                    if proj.tau(u) == x and proj.pi(v) == y and (u >> b) & 1
                )
                assert int(bc.u_planes[b, j]) == want_u


def test_bucket_table_identical_strings_all_zero():
    s = IntString(np.arange(32) % 8, 8)
    p = recovery_params(0.25, seed=3, reps=1)
    proj = make_coupled_projection(1, p, rep=0, sigma=8)
    table = compute_bucket_table(s, s, proj)
    for bc in table.buckets.values():
        assert not bc.c.any()


def test_decode_bucket_worked_examples():
    p = recovery_params(0.25, seed=17, reps=1)
    proj = make_coupled_projection(0, p, rep=0, sigma=8)
    x, y = proj.tau(5), proj.pi(2)
    u_planes = np.array([10, 0, 10])  # bits 0b101 -> symbol 5
    v_planes = np.array([0, 10, 0])   # bits 0b010 -> symbol 2
    assert decode_bucket(10, (u_planes, v_planes), proj, x, y) == (5, 2)
    # a plane hitting exactly c/2 is ambiguous
    assert decode_bucket(10, (np.array([5, 0, 10]), v_planes), proj, x, y) is None
    # decoded diagonal pair rejects
    assert decode_bucket(10, (v_planes, v_planes), proj, proj.tau(2), y) is None
    # empty bucket rejects
    assert decode_bucket(0, (u_planes, v_planes), proj, x, y) is None
    # projection-consistency check rejects a mismatched bucket id
    assert decode_bucket(10, (u_planes, v_planes), proj, (x + 1) % proj.ell, y) is None


def test_decode_bucket_rejects_out_of_alphabet():
    p = recovery_params(0.25, seed=17, reps=1)
    proj = make_coupled_projection(0, p, rep=0, sigma=6)
    full = np.array([10, 10, 10])  # decodes to 7, outside sigma=6
    some = np.array([0, 10, 0])
    # range check fires before the projection-consistency check
    assert decode_bucket(10, (full, some), proj, 0, 0) is None


def test_single_pair_instance_recovers_exactly():
    # text constant u, pattern constant v: every window's noise is {(u,v): m}
    rng = np.random.default_rng(71)
    for _ in range(20):
        u, v = rng.choice(16, size=2, replace=False)
        text = IntString(np.full(64, u), 16)
        pattern = IntString(np.full(16, v), 16)
        params = recovery_params(0.25, seed=int(rng.integers(1 << 30)), reps=4)
        noise = construct_sparse_noise(text, pattern, params)
        assert noise.n_windows == 49
        for j in range(noise.n_windows):
            assert noise.window(j).entries == {(int(u), int(v)): 16}


def test_fast_path_matches_reference():
    # entry-for-entry equality with the literal bucket/decode/min transcription
    cases = [
        ("uniform", 4, 0.25, (0, 1)),
        ("uniform", 16, 0.1, (0,)),
        ("uniform", 3, 0.2, (2,)),
        ("planted_heavy", 16, 0.25, (0,)),
    ]
    for model, sigma, eps, seeds in cases:
        for seed in seeds:
            text, pattern = generate_instance(96, 16, sigma, model, seed)
            params = recovery_params(eps, seed=seed + 100, reps=2)
            fast = construct_sparse_noise(text, pattern, params)
            ref = construct_reference(text, pattern, params)
            assert fast.same_as(ref), (model, sigma, eps, seed)


def test_dense_and_sparse_routes_agree():
    text, pattern = _uniform(200, 24, 40, seed=8)
    params = recovery_params(0.25, seed=12, reps=3)
    dense = construct_sparse_noise(text, pattern, params)
    forced = construct_sparse_noise(text, pattern, params, mem_budget=1)
    assert dense.same_as(forced)


def test_constructed_profile_invariants():
    text, pattern = _uniform(300, 40, 16, seed=44)
    params = recovery_params(0.1, seed=2, reps=3)
    noise = construct_sparse_noise(text, pattern, params)
    noise.validate()
    sizes = np.diff(noise.indptr)
    assert sizes.max() <= params.capacity
    assert np.all(noise.us != noise.vs)
    assert noise.values.min() > 0
    assert noise.values.max() <= len(pattern)
    again = construct_sparse_noise(text, pattern, params)
    assert noise.same_as(again)


def test_recovered_values_never_undershoot_true_pairs():
    # min over bucket counts is >= the pair's true count: collisions only add
    text, pattern = _uniform(120, 20, 8, seed=13)
    params = recovery_params(0.25, seed=40, reps=3)
    noise = construct_sparse_noise(text, pattern, params)
    for j in (0, 17, 60, 100):
        truth = alignment_dict_brute(text, pattern, j)
        for (u, v), val in noise.window(j).entries.items():
            assert val >= truth.get((u, v), 0)


def test_construct_validates_inputs():
    params = recovery_params(0.25, seed=0, reps=1)
    with pytest.raises(ValueError):
        construct_sparse_noise(IntString([0], 2), IntString([0], 3), params)
    with pytest.raises(ValueError):
        construct_sparse_noise(IntString([0], 2), IntString([0, 1], 2), params)
    empty = construct_sparse_noise(IntString([0, 0, 0], 1), IntString([0], 1), params)
    assert empty.n_windows == 3
    assert empty.values.size == 0


def test_pair_counts_routes_match_brute():
    text, pattern = _uniform(60, 9, 5, seed=26)
    nw = 52
    dense = prepare_pair_counts(text, pattern)
    sparse = prepare_pair_counts(text, pattern, mem_budget=1)
    assert dense.kind == "dense" and sparse.kind == "sparse"
    for j in range(nw):
        want = alignment_dict_brute(text, pattern, j)
        got_dense = {
            (c // 5, c % 5): int(dense.dense[c, j])
            for c in np.flatnonzero(dense.dense[:, j])
            if c // 5 != c % 5
        }
        lo, hi = sparse.indptr[j], sparse.indptr[j + 1]
        got_sparse = {
            (int(c) // 5, int(c) % 5): int(k)
            for c, k in zip(sparse.codes[lo:hi], sparse.counts[lo:hi])
            if c // 5 != c % 5
        }
        assert got_dense == want
        assert got_sparse == want


def test_noise_profile_from_windows_capacity_and_ties():
    dicts = [{(0, 1): 5, (1, 0): 5, (2, 3): 9, (3, 2): 1}, {}]
    capped = noise_profile_from_windows(dicts, sigma=4, capacity=2)
    # top two values; the 5-5 tie keeps the lexicographically smaller pair
    assert capped.window(0).entries == {(2, 3): 9, (0, 1): 5}
    assert capped.window(1).entries == {}
    full = noise_profile_from_windows(dicts, sigma=4)
    assert full.window(0).entries == dicts[0]
    # zero and negative values are dropped rather than stored
    dropped = noise_profile_from_windows([{(0, 1): 0, (2, 1): 3}], sigma=4)
    assert dropped.window(0).entries == {(2, 1): 3}


def test_noise_profile_validate_and_window_bounds():
    good = noise_profile_from_windows([{(0, 1): 2}], sigma=4, capacity=3)
    good.validate()
    with pytest.raises(IndexError):
        good.window(1)
    bad = NoiseProfile(
        sigma=4,
        capacity=3,
        indptr=np.array([0, 1]),
        us=np.array([2], dtype=np.int32),
        vs=np.array([2], dtype=np.int32),
        values=np.array([1], dtype=np.int64),
    )
    with pytest.raises(ValueError):
        bad.validate()


def test_dump_csv_layout(tmp_path):
    profile = noise_profile_from_windows(
        [{(0, 1): 4}, {(2, 0): 7, (1, 3): 2}], sigma=4, capacity=3
    )
    path = tmp_path / "noise.csv"
    profile.dump_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "window,u,v,dprime"
    assert lines[1] == "0,0,1,4"
    assert set(lines[2:]) == {"1,2,0,7", "1,1,3,2"}

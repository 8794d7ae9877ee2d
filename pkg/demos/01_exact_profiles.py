"""Exact sliding Hamming profiles: the two baselines and why they agree.

A profile holds HAM(T_j, P) for every window T_j = T[j .. j+m-1]. The naive
backend compares each window directly, O(n*m) element work; the convolution
backend counts aligned matches per symbol with sigma cross-correlations and
subtracts from m, O(sigma * n log n). Both are exact, so they must agree bit
for bit; which is faster depends on m and sigma.
"""

import time

from hamsketch import generate_instance, hamming_profile_convolution, hamming_profile_naive

for n, m, sigma in [(4096, 256, 32), (65536, 8192, 32)]:
    text, pattern = generate_instance(n, m, sigma, "uniform", seed=7)
    t0 = time.perf_counter()
    naive = hamming_profile_naive(text, pattern)
    t1 = time.perf_counter()
    conv = hamming_profile_convolution(text, pattern)
    t2 = time.perf_counter()
    assert (naive.values == conv.values).all()
    print(f"n={n:6d} m={m:5d}: naive {t1 - t0:6.3f}s  convolution {t2 - t1:6.3f}s  (identical)")

vals = conv.values
print(f"\nlast instance: {conv.n_windows} windows, first few {vals[:6].astype(int).tolist()}")
best = int(vals.argmin())
print(f"closest window: j={best} with {int(vals[best])} mismatches out of {m}")
print(f"mean distance {vals.mean():.1f}, expected ~ m(1-1/sigma) = {m * (1 - 1 / sigma):.1f}")

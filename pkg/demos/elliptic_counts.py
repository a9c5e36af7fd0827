"""Matrices in SL2(Z) by size a^2+b^2+c^2+d^2: counts, prime sizes and angle spread.

    python demos/elliptic_counts.py [x]
"""
import math
import sys

from hyperlab import analytics, elliptic

x = int(sys.argv[1]) if len(sys.argv) > 1 else 10**5

# small sizes first: each matrix corresponds to a pair of Gaussian integers
for n in range(2, 12):
    mats = elliptic.enumerate_norm(n)
    print(f"nu_H = {n:2d}: {len(mats):3d} matrices", [m.entries() for m in mats[:3]])

total = elliptic.count_range(x, threads=4)
print(f"\nN_E({x}) = {total.count}, ratio to 6x = {total.ratio:.6f}")

# unshifted prime sizes: no proven asymptotic, so just watch pi_E(x) log x / x
for y in (10**3, 10**4, x):
    r = elliptic.prime_weyl_A(0, 0, 0, y)
    print(f"pi_E({y}) = {r.count}, pi_E log x / x = {r.count * math.log(y) / y:.4f}")

shifted = elliptic.prime_weyl_A(0, 0, 2, x)
print(f"matrices with nu_H + 2 prime <= {x}: {shifted.count}, ratio to K li(x) = {shifted.ratio:.4f}")

# odd frequencies cancel exactly, even ones decay slowly
for m1, m2 in ((1, 0), (2, 0), (2, 2), (0, 4)):
    r = elliptic.prime_weyl_A(m1, m2, 2, x)
    print(f"  normalised Weyl sum at ({m1:+d}, {m2:+d}): {r.ratio:.5f}")

sample = analytics.build_sample("E", x)
print(f"\nbox discrepancy of all angle pairs (G = 8): {analytics.box_discrepancy(sample, 8):.5f}")

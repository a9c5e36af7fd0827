"""Double cosets of the diagonal subgroup in Gamma(2,5): counts, prime counts, Titchmarsh sums.

    python demos/hyperbolic_primes.py [x]
"""
import sys

from hyperlab import analytics, quaternion
from hyperlab.quadratic import N2

x = int(sys.argv[1]) if len(sys.argv) > 1 else 10**5

for n in (7, 14, 17, 23):
    cos = quaternion.enumerate_cosets(n)
    print(f"n = {n:2d}: N2(5n+1) = {N2(5 * n + 1)}, N2(n) = {N2(n)}, cosets = {len(cos)}")
    for q in cos[:2]:
        h = quaternion.hyperbolic_decompose(quaternion.embed(q))
        print(f"    {q.coords()}  delta = {quaternion.delta(q)}  v = {h.v:.6f}  y = ({h.y1:.4f}, {h.y2:.4f})")

print(f"\nC = {analytics.constant_C():.9f}, C' = {analytics.constant_Cprime():.9f}")
print(f"N_h({x}) ratio = {quaternion.count_range_h(x).ratio:.5f}")
print(f"pi_h({x}) / (C li x) = {quaternion.pi_h(x).ratio:.5f}")
print(f"psi_h({x}) / (C x) = {quaternion.psi_h(x).ratio:.5f}")
for a in (1, 7):
    print(f"Titchmarsh sum, n = {a} mod 8: ratio = {quaternion.titchmarsh_sum(x, a).ratio:.5f}")

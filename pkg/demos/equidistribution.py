"""How fast the angle pairs fill the torus, for all sizes and prime sizes.

    python demos/equidistribution.py
"""
import numpy as np

from hyperlab import analytics

M = 3
for case, primes in (("E", False), ("E_shifted", True), ("h", False), ("h", True), ("script_H", True)):
    print(f"\ncase {case}, primes only: {primes}")
    for x in (10**4, 10**5, 10**6):
        s = analytics.build_sample(case, x, primes)
        W = analytics.weyl_table(s, M)
        W[M, M] = 0
        worst = np.unravel_index(W.argmax(), W.shape)
        print(
            f"  x = {x:>7}: weight {s.total_weight:>10.0f}, max Weyl {W.max():.4f} "
            f"at {(int(worst[0]) - M, int(worst[1]) - M)}, box discrepancy {analytics.box_discrepancy(s, 8):.5f}"
        )

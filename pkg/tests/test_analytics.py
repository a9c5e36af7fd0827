import math

import numpy as np
import pytest
from scipy.special import expi

from hyperlab import analytics as an
from hyperlab.analytics import TorusSample


def test_li_against_exponential_integral():
    for x in (3, 10, 1000, 10**6, 10**9):
        assert an.li(x) == pytest.approx(expi(math.log(x)) - expi(math.log(2)), rel=1e-10)
    assert an.li(10) == pytest.approx(5.120436, abs=1e-6)
    assert an.li(10**6) == pytest.approx(78626.504, abs=1e-3)
    assert an.li(2) == 0
    with pytest.raises(ValueError):
        an.li(1.5)


def test_euler_product_small_cutoff():
    # primes 2 and 3 only: chi4(2) = 0, chi4(3) = -1
    ep = an.euler_product("chi4", None, 4)
    assert ep.value == pytest.approx(1 - 1 / 6)
    assert ep.tail_bound == 0.25
    ep8 = an.euler_product("chi8", 5, 6)
    assert ep8.value == pytest.approx(1 - 1 / 6)
    with pytest.raises(ValueError):
        an.euler_product("chi5")


def test_euler_products_converge():
    cutoffs = (10**3, 10**4, 10**5, 10**6)
    for char, omit in (("chi4", None), ("chi8", 5)):
        vals = [an.euler_product(char, omit, P).value for P in cutoffs]
        for P, v in zip(cutoffs, vals):
            assert abs(math.log(v) - math.log(vals[-1])) <= 1 / P


def test_constants():
    assert an.elliptic_prime_constant() == pytest.approx(21.392256, abs=1e-5)
    assert an.constant_C() == pytest.approx(1.258466447, abs=1e-8)
    assert an.constant_Cprime() == pytest.approx(0.629233, abs=1e-6)
    assert an.constant_C() == 2 * an.constant_Cprime()


def test_L1_chi8_partial_sum():
    assert abs(an.dirichlet_partial_sum("chi8", 10**6) - an.L1_chi8()) < 1e-4


def test_torus_sample_reduction():
    s = TorusSample([[1.25, -0.25], [-1e-18, 0.5]])
    np.testing.assert_allclose(s.points, [[0.25, 0.75], [0.0, 0.5]])
    assert s.total_weight == 2
    with pytest.raises(ValueError):
        TorusSample([[0, 0]], weights=[0.0])


def test_weyl_table_examples():
    s = TorusSample([[0.0, 0.0], [0.5, 0.0]])
    W = an.weyl_table(s, 2)
    assert W[2, 2] == pytest.approx(1)
    assert W[3, 2] == pytest.approx(0, abs=1e-15)
    assert W[4, 2] == pytest.approx(1)
    grid = np.array([[i / 4, j / 4] for i in range(4) for j in range(4)])
    W = an.weyl_table(TorusSample(grid), 3)
    expected = np.zeros((7, 7))
    expected[3, 3] = 1
    np.testing.assert_allclose(W, expected, atol=1e-12)
    # chunking does not change the answer
    rng = np.random.default_rng(0)
    pts = rng.random((1000, 2))
    np.testing.assert_allclose(an.weyl_table(TorusSample(pts), 3), an.weyl_table(TorusSample(pts), 3, chunk=17))


def test_box_discrepancy_examples():
    assert an.box_discrepancy(TorusSample([[0.1, 0.1]]), 2) == pytest.approx(0.75)
    G = 4
    centres = np.array([[(i + 0.5) / G, (j + 0.5) / G] for i in range(G) for j in range(G)])
    assert an.box_discrepancy(TorusSample(centres), G) == pytest.approx(0, abs=1e-12)
    with pytest.raises(ValueError):
        an.box_discrepancy(TorusSample(centres), 1)


def test_box_discrepancy_brute_force():
    rng = np.random.default_rng(4)
    s = TorusSample(rng.random((50, 2)), rng.random(50) + 0.1)
    G = 3
    best = 0.0
    w = s.weights / s.weights.sum()
    for i1 in range(G + 1):
        for i2 in range(i1 + 1, G + 1):
            for j1 in range(G + 1):
                for j2 in range(j1 + 1, G + 1):
                    inside = (s.points[:, 0] >= i1 / G) & (s.points[:, 0] < i2 / G)
                    inside &= (s.points[:, 1] >= j1 / G) & (s.points[:, 1] < j2 / G)
                    best = max(best, abs(w[inside].sum() - (i2 - i1) * (j2 - j1) / G**2))
    assert an.box_discrepancy(s, G) == pytest.approx(best)


def test_interval_discrepancy():
    assert an.interval_discrepancy(np.array([0.1]), 2) == pytest.approx(0.5)
    assert an.interval_discrepancy(np.arange(8) / 8 + 1 / 16, 8) == pytest.approx(0, abs=1e-12)


def test_build_sample_examples():
    e = an.build_sample("E", 3)
    assert e.total_weight == 16
    h = an.build_sample("h", 7)
    assert len(h) == 4
    s = an.build_sample("script_E", 50)
    base = an.build_sample("E", 50)
    for got, want in ((s.points[:, 0], base.points[:, 0] + base.points[:, 1]), (s.points[:, 1], base.points[:, 0] - base.points[:, 1])):
        gap = (got - want) % 1.0
        assert np.minimum(gap, 1 - gap).max() < 1e-12
    shifted = an.build_sample("E_shifted", 100, primes_only=True)
    assert shifted.meta == {"case": "E_shifted", "x": 100, "primes_only": True}
    with pytest.raises(ValueError):
        an.build_sample("Q", 10)


def test_elliptic_angle_marginal_is_uniform():
    s = an.build_sample("E", 10**5)
    assert an.interval_discrepancy(s.points[:, 0], 16, s.weights) < 0.01

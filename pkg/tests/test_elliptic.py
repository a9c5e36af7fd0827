import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hyperlab import elliptic as e
from hyperlab.elliptic import UniModularMat
from hyperlab.gaussian import GaussInt


def _mod_dist(x: float, period: float) -> float:
    r = x % period
    return min(r, period - r)


def test_matrix_basics():
    g = UniModularMat(2, 1, 1, 1)
    assert g * g.inverse() == e.IDENTITY
    assert e.OMEGA * e.OMEGA == -e.IDENTITY
    assert e.nu_H(g) == 7
    with pytest.raises(ValueError):
        UniModularMat(1, 1, 1, 1)


def test_gauss_pair_roundtrip_and_norms():
    for n in range(3, 300):
        for g in e.enumerate_norm(n):
            z1, z2 = e.to_gauss_pair(g)
            assert z1.norm() == n + 2 and z2.norm() == n - 2
            assert e.from_gauss_pair(z1, z2) == g


def test_from_gauss_pair_rejects():
    with pytest.raises(ValueError):
        e.from_gauss_pair(GaussInt(2, 1), GaussInt(1, 0))  # parity
    with pytest.raises(ValueError):
        e.from_gauss_pair(GaussInt(3, 1), GaussInt(1, 1))  # norm difference 8


def test_small_counts():
    assert len(e.enumerate_norm(2)) == 4
    assert len(e.enumerate_norm(3)) == 16
    assert e.enumerate_norm(4) == [] and e.enumerate_norm(5) == []
    assert e.count_range(3).count == 20
    assert e.count_range(3).metadata["reference"] == "linear"
    with pytest.raises(ValueError):
        e.count_range(2)


def test_count_terms_match_enumeration():
    t = e._count_terms(1000)
    for n in range(2, 1001):
        assert t[n] == len(e.enumerate_norm(n))


def test_count_range_thread_invariance():
    assert e.count_range(20000, threads=1) == e.count_range(20000, threads=6)


def test_cartan_angles_against_disc_model():
    for n in (3, 6, 7, 11, 18, 47, 102):
        for g in e.enumerate_norm(n):
            c = e.cartan_angles(g)
            w = e.disc_image(g)
            assert abs(abs(w) - math.tanh(c.r / 2)) < 1e-12
            assert _mod_dist(cmath.phase(w) - 2 * c.theta1, 2 * math.pi) < 1e-9
            assert math.cosh(c.r) == pytest.approx(n / 2)
    with pytest.raises(ValueError):
        e.cartan_angles(e.IDENTITY)


def test_inversion_symmetry():
    for n in (3, 7, 10, 23, 70):
        for g in e.enumerate_norm(n):
            a, b = e.cartan_angles(g), e.cartan_angles(g.inverse())
            assert a.r == pytest.approx(b.r)
            # k(t1) a k(t2) inverts to k(-t2) a^-1 k(-t1), and a^-1 is a conjugated by k(pi/2)
            assert _mod_dist(a.theta1 + b.theta2 - math.pi / 2, math.pi) < 1e-9
            assert _mod_dist(a.theta2 + b.theta1 - math.pi / 2, math.pi) < 1e-9


def test_phase_matches_angles():
    for g in e.enumerate_norm(27):
        c = e.cartan_angles(g)
        z1, z2 = e.to_gauss_pair(g)
        u1, u2 = z1.phase(), z2.phase()
        for m1, m2 in ((1, 0), (0, 1), (2, -3)):
            assert abs(cmath.exp(2j * (m1 * c.theta1 + m2 * c.theta2)) - u1 ** (m1 + m2) * u2 ** (m1 - m2)) < 1e-9


@given(st.integers(3, 3000), st.integers(-6, 6), st.integers(-6, 6))
def test_direct_and_factored_agree(n, m1, m2):
    assert abs(e.S_e_direct(m1, m2, n) - e.S_e_factored(m1, m2, n)) < 1e-9


def test_odd_frequencies_vanish_exactly():
    for n in range(3, 400):
        grid = e.S_e_direct_grid(n, 3)
        for m1 in range(-3, 4):
            for m2 in range(-3, 4):
                if m1 % 2 or m2 % 2:
                    assert grid[m1 + 3, m2 + 3] == 0


def test_se_table_matches_point_values():
    for m1, m2 in ((0, 0), (2, 0), (2, -4), (1, 0)):
        t = e._se_table(m1, m2, 2000)
        for n in range(3, 2001):
            assert abs(t[n] - e.S_e_factored(m1, m2, n)) < 1e-9


def test_prime_weyl_brute_force():
    r = e.prime_weyl_A(0, 0, 0, 10)
    assert r.count == sum(len(e.enumerate_norm(p)) for p in (2, 3, 5, 7))
    r = e.prime_weyl_A(2, 2, 2, 200)
    expected = sum(e.S_e_direct(2, 2, p - 2) for p in range(5, 201) if all(p % q for q in range(2, p)))
    assert abs(r.complex_sum - expected) < 1e-9
    assert r.metadata["ratio_of"] == "magnitude"
    with pytest.raises(ValueError):
        e.prime_weyl_A(0, 0, 1, 100)


def test_angle_points_weights():
    pts, w = e.angle_points(np.array([3]), 3)
    assert w.sum() == 16
    assert len(pts) == 8
    sizes = np.arange(3, 301)
    pts, w = e.angle_points(sizes, 300)
    assert w.sum() == e.count_range(300).count - 4  # n = 2 carries no angles
    with pytest.raises(ValueError):
        e.angle_points(np.array([2]), 10)


def test_angle_points_match_cartan_angles():
    pts, w = e.angle_points(np.array([7, 10]), 10)
    got = sorted(zip(np.round(pts[:, 0], 9), np.round(pts[:, 1], 9)))
    want = {}
    for n in (7, 10):
        for g in e.enumerate_norm(n):
            c = e.cartan_angles(g)
            key = (round(c.theta1 / math.pi % 1, 9) % 1, round(c.theta2 / math.pi % 1, 9) % 1)
            want[key] = want.get(key, 0) + 1
    mass = {}
    for (a, b), wt in zip(zip(np.round(pts[:, 0], 9), np.round(pts[:, 1], 9)), w):
        mass[(a % 1, b % 1)] = mass.get((a % 1, b % 1), 0) + wt
    assert len(got) == len(pts)
    assert mass == pytest.approx(want)

import math
import random

import numpy as np
import pytest
import sympy

from hyperlab import quaternion as h
from hyperlab.quadratic import EPS2, N2, QuadInt, in_window
from hyperlab.quaternion import H0, IDENTITY, Cell, QuatMat


def _h0_power(k: int) -> QuatMat:
    out = IDENTITY
    step = H0 if k >= 0 else H0.inverse()
    for _ in range(abs(k)):
        out = out * step
    return out


def test_group_law_matches_real_matrices():
    gens = h.small_elements()
    assert len(gens) == 92
    rng = random.Random(1)
    for _ in range(200):
        a, b = rng.choice(gens), rng.choice(gens)
        prod = h.embed(a * b)
        np.testing.assert_allclose(prod, h.embed(a) @ h.embed(b), rtol=1e-12, atol=1e-9)
        assert a * a.inverse() == IDENTITY
        assert np.linalg.det(h.embed(a)) == pytest.approx(1.0)


def test_rejects_wrong_determinant():
    with pytest.raises(ValueError):
        QuatMat(2, 0, 0, 0)


def test_classify_examples():
    assert h.classify(np.eye(2)) is Cell.in_s
    assert h.classify(h.embed(H0)) is Cell.in_s
    assert h.classify(np.array([[2.0, 1.0], [-1.0, 0.0]])) is Cell.in_s
    assert h.classify(np.array([[1.0, 1.0], [-1.0, 0.0]])) is Cell.in_s
    assert h.classify(np.array([[2.0, 1.0], [-0.5, 0.25]])) is Cell.in_S_not_s
    assert h.classify(np.array([[2.0, 1.0], [1.0, 1.0]])) is Cell.generic
    with pytest.raises(ValueError):
        h.classify(np.array([[2.0, 0.0], [0.0, 2.0]]))
    with pytest.raises(ValueError):
        h.hyperbolic_decompose(np.eye(2))


def test_decomposition_roundtrip_on_generic_matrices():
    rng = np.random.default_rng(5)
    for _ in range(500):
        a, b, c = rng.uniform(-5, 5, 3)
        d = (1 + b * c) / a
        g = np.array([[a, b], [c, d]])
        if h.classify(g) is not Cell.generic:
            continue
        dec = h.hyperbolic_decompose(g)
        np.testing.assert_allclose(h.recompose(dec), g, rtol=1e-10, atol=1e-10)
        assert dec.v > 0 and dec.y1 > 0 and dec.y2 > 0


def test_decomposition_of_group_elements():
    for q in h.random_elements(300, random.Random(2), max_coord=10**5):
        dec = h.hyperbolic_decompose(h.embed(q))
        assert math.cosh(2 * dec.v) == pytest.approx(h.delta(q) / 2, rel=1e-12)


def test_intersection_with_s_is_H():
    # an entry of the real matrix vanishes iff z1 = 0 or z2 = 0; z1 = 0 is impossible
    R = 30
    r = np.arange(-R, R + 1)
    x0, x1 = np.meshgrid(r, r, indexing="ij")
    n1 = x0 * x0 - 2 * x1 * x1
    found = {(int(a), int(b)) for a, b in zip(x0[n1 == 1], x1[n1 == 1])}
    powers = set()
    for k in range(-3, 4):
        p = _h0_power(k)
        powers |= {(p.x0, p.x1), (-p.x0, -p.x1)}
    assert found == {p for p in powers if max(map(abs, p)) <= R}
    for q in h.small_elements(6):
        if h.classify(h.embed(q)) is Cell.in_s:
            assert q.z2 == QuadInt(0, 0)


def test_enumerate_cosets_two_to_one():
    for n in range(1, 300):
        cos = h.enumerate_cosets(n)
        assert len(cos) == 2 * N2(5 * n + 1) * N2(n)
        keys = {h.double_coset_key(q) for q in cos}
        assert len(keys) == len(cos)
        for q in cos:
            assert h.nu(q) == n
            assert h.delta(q) == 20 * n + 2


def test_double_coset_key_invariant():
    rng = random.Random(3)
    for q in h.enumerate_cosets(7) + h.enumerate_cosets(62):
        for _ in range(5):
            k, l = rng.randint(-3, 3), rng.randint(-3, 3)
            moved = _h0_power(k) * q * _h0_power(l)
            assert h.double_coset_key(moved) == h.double_coset_key(q)


def test_partner_coset_is_not_an_H_translate():
    q = h.enumerate_cosets(7)[0]
    partner = QuatMat.from_pair(q.z1 * EPS2, q.z2)
    assert h.double_coset_key(q) != h.double_coset_key(partner)


def test_torus_points_match_table():
    pts, w = h.h_points(40)
    assert w.sum() == h.count_range_h(40).count
    brute = []
    for n in range(1, 41):
        for q in h.enumerate_cosets(n):
            brute.append(np.mod(h.torus_point(q), 1.0))
    a = np.sort(np.round(np.mod(pts, 1.0) % 1.0, 9) % 1.0, axis=0)
    b = np.sort(np.round(np.array(brute), 9) % 1.0, axis=0)
    np.testing.assert_allclose(a, b, atol=1e-8)


def test_S_h_examples_and_oracle():
    assert h.S_h(0, 0, 1) == 0  # 6 is not a norm of a totally positive element
    assert h.S_h(0, 0, 7) == 4
    assert h.S_h(1, 0, 7) == 0
    for n in range(1, 400):
        grid = h.S_h_direct_grid(n, 3) if h.enumerate_cosets(n) else None
        for a in range(-3, 4):
            for b in range(-3, 4):
                val = h.S_h(a, b, n)
                if grid is None:
                    assert val == 0
                else:
                    assert abs(grid[a + 3, b + 3] - val) < 1e-9


def test_range_aggregates_brute_force():
    x = 60
    assert h.count_range_h(x).count == sum(len(h.enumerate_cosets(n)) for n in range(1, x + 1))
    primes = list(sympy.primerange(2, x + 1))
    assert h.pi_h(x).count == sum(len(h.enumerate_cosets(p)) for p in primes)
    psi = sum(len(h.enumerate_cosets(n)) * math.log(p) for p in primes for n in [p**k for k in range(1, 7) if p**k <= x])
    assert h.psi_h(x).weighted_sum == pytest.approx(psi)
    for a in (1, 7):
        t = sum(N2(5 * n + 1) * math.log(p) for p in primes for n in [p**k for k in range(1, 7) if p**k <= x] if n % 8 == a)
        assert h.titchmarsh_sum(x, a).weighted_sum == pytest.approx(t)
    with pytest.raises(ValueError):
        h.titchmarsh_sum(x, 3)
    r = h.prime_weyl_B(2, 0, x)
    assert abs(r.complex_sum - sum(h.S_h(2, 0, p) for p in primes)) < 1e-9


def test_thread_invariance():
    assert h.pi_h(5000, threads=1) == h.pi_h(5000, threads=5)
    assert h.titchmarsh_sum(5000, 7, threads=3) == h.titchmarsh_sum(5000, 7)


def test_random_elements_are_generic_and_bounded():
    els = h.random_elements(200, random.Random(9), max_coord=1000)
    assert len(els) == 200
    for q in els:
        assert max(map(abs, q.coords())) <= 1000
        assert h.classify(h.embed(q)) is Cell.generic
    assert in_window(QuadInt(3, 1))

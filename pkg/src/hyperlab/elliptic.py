"""SL2(Z) side: matrices of fixed size nu_H = a^2+b^2+c^2+d^2 through Gaussian pairs.

A unimodular matrix maps to z1 = (a+d) + i(b-c), z2 = (a-d) - i(b+c) with
N(z1) = nu_H + 2 and N(z2) = nu_H - 2.  Cartan angles are read off the pair:
2*theta1 = arg z1 + arg z2 and 2*theta2 = arg z1 - arg z2 (mod 2 pi), so the
phase attached to (m1, m2) is u1^(m1+m2) * u2^(m1-m2) with u = z/|z|.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .gaussian import (
    GaussInt,
    _weyl_W_ext,
    lattice_groups,
    primary_reps_with_norm,
    r_table,
    reps_with_norm,
    weyl_W_table,
    weyl_WP,
    weyl_WP_table,
)
from .grouping import cross_pairs
from .report import StatReport, run_blocks
from .sieve import check_cap, sieve


@dataclass(frozen=True, slots=True)
class UniModularMat:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant of {self} is not 1")

    def __mul__(self, o: "UniModularMat") -> "UniModularMat":
        return UniModularMat(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )

    def __neg__(self) -> "UniModularMat":
        return UniModularMat(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "UniModularMat":
        return UniModularMat(self.d, -self.b, -self.c, self.a)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


IDENTITY = UniModularMat(1, 0, 0, 1)
OMEGA = UniModularMat(0, -1, 1, 0)  # rotation by pi/2 about i


@dataclass(frozen=True)
class CartanAngles:
    theta1: float
    theta2: float
    r: float


def nu_H(m: UniModularMat) -> int:
    return m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d


def to_gauss_pair(m: UniModularMat) -> tuple[GaussInt, GaussInt]:
    return GaussInt(m.a + m.d, m.b - m.c), GaussInt(m.a - m.d, -(m.b + m.c))


def from_gauss_pair(z1: GaussInt, z2: GaussInt) -> UniModularMat:
    x1, y1, x2, y2 = z1.re, z1.im, z2.re, z2.im
    if (x1 + x2) % 2 or (y1 + y2) % 2:
        raise ValueError(f"pair ({z1}, {z2}) fails the parity condition")
    if z1.norm() - z2.norm() != 4:
        raise ValueError(f"pair ({z1}, {z2}) has norm difference {z1.norm() - z2.norm()}, need 4")
    return UniModularMat((x1 + x2) // 2, (y1 - y2) // 2, (-y1 - y2) // 2, (x1 - x2) // 2)


def cartan_angles(m: UniModularMat) -> CartanAngles:
    """theta1, theta2 in [0, pi) and r with m = k(theta1) a(e^{-r}) k(theta2)."""
    nu = nu_H(m)
    if nu == 2:
        raise ValueError("angles undefined at origin (nu_H = 2)")
    z1, z2 = to_gauss_pair(m)
    a1 = math.atan2(z1.im, z1.re)
    a2 = math.atan2(z2.im, z2.re)
    return CartanAngles(
        ((a1 + a2) / 2) % math.pi,
        ((a1 - a2) / 2) % math.pi,
        math.acosh(nu / 2),
    )


def disc_image(m: UniModularMat) -> complex:
    """Image of m*i in the unit disc under w -> (w - i)/(w + i)."""
    w = (m.a * 1j + m.b) / (m.c * 1j + m.d)
    return (w - 1j) / (w + 1j)


# --------------------------------------------------------------------------
# enumeration


def _double_coset_translates(g: UniModularMat) -> list[UniModularMat]:
    # omega^j1 * g * omega^j2, j1 = 0..3, j2 = 0..1
    left = [IDENTITY, OMEGA, -IDENTITY, -OMEGA]
    return [l * g * r for l in left for r in (IDENTITY, OMEGA)]


def enumerate_norm(n: int) -> list[UniModularMat]:
    """Every gamma in SL2(Z) with nu_H(gamma) = n, via Gaussian pairs."""
    if n < 2:
        raise ValueError("nu_H is at least 2")
    if n % 4 in (0, 1):
        return []
    if n % 4 == 2:
        return [from_gauss_pair(z1, z2) for z1 in reps_with_norm(n + 2) for z2 in reps_with_norm(n - 2)]
    out = []
    for z1 in primary_reps_with_norm(n + 2):
        for z2 in primary_reps_with_norm(n - 2):
            out.extend(_double_coset_translates(from_gauss_pair(z1, z2)))
    return out


def _pow_gauss(z: GaussInt, k: int) -> GaussInt:
    return z**k if k >= 0 else z.conj() ** (-k)


def S_e_direct_grid(n: int, mmax: int) -> np.ndarray:
    """S_e(m1, m2, n) for |m1|, |m2| <= mmax, indexed [m1 + mmax, m2 + mmax].

    All phases at fixed n share the normalisation |z1|^|m1+m2| |z2|^|m1-m2|, so
    the sum is formed over exact Gaussian integers and divided once.
    """
    if n < 3:
        raise ValueError("S_e is defined for n >= 3")
    size = 2 * mmax + 1
    mats = enumerate_norm(n)
    out = np.zeros((size, size), dtype=complex)
    if not mats:
        return out
    pairs = [to_gauss_pair(g) for g in mats]
    N1, N2 = n + 2, n - 2
    kmax = 2 * mmax
    pw1 = [{k: _pow_gauss(z1, k) for k in range(-kmax, kmax + 1)} for z1, _ in pairs]
    pw2 = [{k: _pow_gauss(z2, k) for k in range(-kmax, kmax + 1)} for _, z2 in pairs]
    for m1 in range(-mmax, mmax + 1):
        for m2 in range(-mmax, mmax + 1):
            k1, k2 = m1 + m2, m1 - m2
            re = im = 0
            for p1, p2 in zip(pw1, pw2):
                w = p1[k1] * p2[k2]
                re += w.re
                im += w.im
            scale = math.sqrt(N1 ** abs(k1) * N2 ** abs(k2))
            out[m1 + mmax, m2 + mmax] = complex(re / scale, im / scale)
    return out


def S_e_direct(m1: int, m2: int, n: int) -> complex:
    """Sum of e^{i(2 theta1 m1 + 2 theta2 m2)} over enumerate_norm(n)."""
    mmax = max(abs(m1), abs(m2))
    return complex(S_e_direct_grid(n, mmax)[m1 + mmax, m2 + mmax])


def S_e_factored(m1: int, m2: int, n: int) -> complex:
    """S_e through Weyl sums at the norms n + 2 and n - 2."""
    if m1 % 2 or m2 % 2 or n < 2 or n % 4 in (0, 1):
        return 0j
    if n % 4 == 2:
        return 16 * _weyl_W_ext(m1 + m2, n + 2) * _weyl_W_ext(m1 - m2, n - 2)
    return 8 * weyl_WP(m1 + m2, n + 2) * weyl_WP(m1 - m2, n - 2)


# --------------------------------------------------------------------------
# range aggregates


@lru_cache(maxsize=4)
def _count_terms(limit: int) -> np.ndarray:
    """S_e(0, 0, n) for 0 <= n <= limit as exact integers."""
    r = r_table(limit + 2)
    n = np.arange(limit + 1)
    out = np.zeros(limit + 1, dtype=np.int64)
    two = (n % 4 == 2)
    three = (n % 4 == 3)
    out[two] = r[n[two] + 2] * r[n[two] - 2]
    out[three] = r[n[three] + 2] * r[n[three] - 2] // 2
    return out


def count_range(x: int, threads: int = 1) -> StatReport:
    """N_E(x) = #{gamma : nu_H(gamma) <= x} against 6x."""
    if x < 3:
        raise ValueError("count_range needs x >= 3")
    check_cap(x + 2)
    terms = _count_terms(x)

    def block(lo: int, hi: int) -> StatReport:
        return StatReport(
            (lo, hi),
            "elliptic",
            count=int(terms[lo : hi + 1].sum()),
            reference_constant=6.0,
            metadata={"reference": "linear", "ratio_of": "count"},
        )

    return run_blocks(block, 1, x, threads)


def _se_table(m1: int, m2: int, limit: int) -> np.ndarray:
    """S_e(m1, m2, n) for 0 <= n <= limit from Weyl tables (entries n < 2 are 0)."""
    out = np.zeros(limit + 1, dtype=complex)
    if m1 % 2 or m2 % 2 or limit < 2:
        return out
    k1, k2 = m1 + m2, m1 - m2
    n = np.arange(limit + 1)
    two = np.flatnonzero((n % 4 == 2))
    three = np.flatnonzero((n % 4 == 3))
    if len(two):
        w1, w2 = weyl_W_table(k1, limit + 2), weyl_W_table(k2, limit + 2)
        out[two] = 16 * w1[two + 2] * w2[two - 2]
    if len(three):
        p1, p2 = weyl_WP_table(k1, limit + 2), weyl_WP_table(k2, limit + 2)
        out[three] = 8 * p1[three + 2] * p2[three - 2]
    return out


def prime_weyl_A(m1: int, m2: int, shift: int, x: int, threads: int = 1) -> StatReport:
    """Sum over primes p <= x of S_e(m1, m2, p - shift).

    shift = 0 collects matrices with prime nu_H; shift = 2 those with nu_H + 2
    prime.  ``count`` is the number of matrices, ``complex_sum`` the Weyl sum.
    For (m1, m2) = (0, 0) with shift 2 the report is referenced to K*li(x).
    """
    if shift not in (0, 2):
        raise ValueError("shift must be 0 or 2")
    if x < 3:
        raise ValueError("prime_weyl_A needs x >= 3")
    check_cap(x + 2)
    primes = sieve(max(x, 2)).primes(x)
    n = primes - shift
    n = n[n >= 2]
    counts = _count_terms(x)[n]
    sums = _se_table(m1, m2, x)[n]
    if (m1, m2) == (0, 0):
        from .analytics import elliptic_prime_constant

        meta = {"reference": "li" if shift == 2 else "none", "ratio_of": "count"}
        const = elliptic_prime_constant() if shift == 2 else 0.0
    else:
        meta = {"reference": "none", "ratio_of": "magnitude"}
        const = 0.0
    meta.update({"m1": str(m1), "m2": str(m2), "shift": str(shift)})
    mode = "elliptic" if shift == 0 else "elliptic_shifted"
    p_of = n + shift

    def block(lo: int, hi: int) -> StatReport:
        sel = (p_of >= lo) & (p_of <= hi)
        return StatReport(
            (lo, hi),
            mode,
            count=int(counts[sel].sum()),
            complex_sum=complex(sums[sel].sum()),
            reference_constant=const,
            metadata=dict(meta),
        )

    return run_blocks(block, 1, x, threads)


# --------------------------------------------------------------------------
# torus points


def angle_points(sizes: np.ndarray, limit: int) -> tuple[np.ndarray, np.ndarray]:
    """Points (theta1/pi, theta2/pi) mod 1 over all matrices with nu_H in ``sizes``.

    ``sizes`` must lie in 3..limit; sizes with no matrices are skipped.  Returns
    (points, weights): the eight translates of a primary pair land on four
    distinct points, each stored once with weight 2.
    """
    check_cap(limit + 2)
    ns = np.asarray(sizes, dtype=np.int64)
    if len(ns) and (ns.min() < 3 or ns.max() > limit):
        raise ValueError("sizes must lie in 3..limit")
    pts, wts = [], []
    for residue, primary in ((2, False), (3, True)):
        sel = ns[ns % 4 == residue]
        if not len(sel):
            continue
        g = lattice_groups(limit + 2, primary=primary)
        cnt = g.counts()
        _, i1, i2 = cross_pairs(g.start[sel + 2], cnt[sel + 2], g.start[sel - 2], cnt[sel - 2])
        a1 = np.arctan2(g.im[i1], g.re[i1])
        a2 = np.arctan2(g.im[i2], g.re[i2])
        base = np.column_stack(((a1 + a2) / (2 * np.pi), (a1 - a2) / (2 * np.pi)))
        if primary:
            for s in ((0, 0), (0.5, 0), (0, 0.5), (0.5, 0.5)):
                pts.append(base + s)
                wts.append(np.full(len(base), 2.0))
        else:
            pts.append(base)
            wts.append(np.ones(len(base)))
    if not pts:
        return np.zeros((0, 2)), np.zeros(0)
    return np.mod(np.concatenate(pts), 1.0), np.concatenate(wts)

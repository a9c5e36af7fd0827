"""The cocompact group Gamma(2,5) and its hyperbolic double cosets.

An element is an integer 4-tuple (x0, x1, x2, x3) with z1 = x0 + x1 sqrt 2,
z2 = x2 + x3 sqrt 2 and N(z1) - 5 N(z2) = 1.  It acts as the real matrix

    [[ z1,            sqrt5 * z2 ],
     [ sqrt5 * sig z2, sig z1    ]].

The subgroup H is generated by h0 = diag(eps^2, eps^-2).  Double cosets
H g H with all four entries positive and bc = 5n are parametrised two-to-one
by pairs of classes in D_K(5n + 1) x D_K(n).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .grouping import cross_pairs
from .quadratic import (
    EPS2,
    LOG_EPS,
    D_K,
    N2_table,
    QuadInt,
    U_k,
    U_k_table,
    class_table,
    is_totally_positive,
    reduce_class_exponent,
)
from .report import StatReport, run_blocks
from .sieve import check_cap, sieve

SQRT5 = math.sqrt(5.0)
_OMEGA = np.array([[0.0, -1.0], [1.0, 0.0]])


@dataclass(frozen=True, slots=True)
class QuatMat:
    x0: int
    x1: int
    x2: int
    x3: int

    def __post_init__(self):
        if self.z1.norm() - 5 * self.z2.norm() != 1:
            raise ValueError(f"{self} does not have determinant 1")

    @classmethod
    def from_pair(cls, z1: QuadInt, z2: QuadInt) -> "QuatMat":
        return cls(z1.x, z1.y, z2.x, z2.y)

    @property
    def z1(self) -> QuadInt:
        return QuadInt(self.x0, self.x1)

    @property
    def z2(self) -> QuadInt:
        return QuadInt(self.x2, self.x3)

    def __mul__(self, o: "QuatMat") -> "QuatMat":
        a, b, c, d = self.z1, self.z2, o.z1, o.z2
        return QuatMat.from_pair(a * c + 5 * (b * d.sigma()), a * d + b * c.sigma())

    def __neg__(self) -> "QuatMat":
        return QuatMat(-self.x0, -self.x1, -self.x2, -self.x3)

    def inverse(self) -> "QuatMat":
        return QuatMat.from_pair(self.z1.sigma(), -self.z2)

    def coords(self) -> tuple[int, int, int, int]:
        return (self.x0, self.x1, self.x2, self.x3)


IDENTITY = QuatMat(1, 0, 0, 0)
H0 = QuatMat(3, 2, 0, 0)


class Cell(Enum):
    in_s = "in_s"
    in_S_not_s = "in_S_not_s"
    generic = "generic"


@dataclass(frozen=True)
class HypDecomposition:
    y1: float
    y2: float
    v: float
    delta1: int
    delta2: int
    sign: int


def embed(q: QuatMat) -> np.ndarray:
    a, d = q.z1.embeddings()
    b, c = q.z2.embeddings()
    return np.array([[a, SQRT5 * b], [SQRT5 * c, d]])


def _entries(g) -> tuple[float, float, float, float]:
    g = np.asarray(g, dtype=float)
    if g.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    return float(g[0, 0]), float(g[0, 1]), float(g[1, 0]), float(g[1, 1])


def classify(g, tol: float = 1e-12) -> Cell:
    """Place a determinant-one matrix in s (abcd = 0), S minus s (|ad| + |bc| = 1) or neither."""
    a, b, c, d = _entries(g)
    if abs(a * d - b * c - 1) > tol * max(1.0, abs(a * d), abs(b * c)):
        raise ValueError("matrix does not have determinant 1")
    if a == 0 or b == 0 or c == 0 or d == 0:
        return Cell.in_s
    if abs(abs(a * d) + abs(b * c) - 1) <= tol * max(1.0, abs(a * d)):
        return Cell.in_S_not_s
    return Cell.generic


# sign pattern of (a, b, c, d), up to an overall sign -> (delta1, delta2)
_SIGN_TABLE = {
    (1, 1, 1, 1): (0, 0),
    (1, -1, -1, 1): (1, 1),
    (1, 1, -1, -1): (1, 0),
    (1, -1, 1, -1): (0, 1),
}


def _core(v: float, d1: int, d2: int) -> np.ndarray:
    ch, sh = math.cosh(v), math.sinh(v)
    k = np.array([[ch, sh], [sh, ch]])
    if d1:
        k = _OMEGA @ k
    if d2:
        k = k @ _OMEGA
    return k


def hyperbolic_decompose(g) -> HypDecomposition:
    """g = sign * A(y1) omega^d1 [[cosh v, sinh v], [sinh v, cosh v]] omega^d2 A(y2)."""
    if classify(g) is not Cell.generic:
        raise ValueError("decomposition undefined for matrices in S or s")
    a, b, c, d = _entries(g)
    s0 = 1 if a > 0 else -1
    pattern = tuple(int(np.sign(e)) * s0 for e in (a, b, c, d))
    if pattern not in _SIGN_TABLE:  # pragma: no cover - excluded by det = 1
        raise ArithmeticError(f"sign pattern {pattern} cannot occur")
    d1, d2 = _SIGN_TABLE[pattern]
    y1 = math.sqrt(abs(a * b / (c * d)))
    y2 = math.sqrt(abs(a * c / (b * d)))
    v = math.log(math.sqrt(abs(a * d)) + math.sqrt(abs(b * c)))
    sign = s0 * (1 if _core(1.0, d1, d2)[0, 0] > 0 else -1)
    return HypDecomposition(y1, y2, v, d1, d2, sign)


def recompose(h: HypDecomposition) -> np.ndarray:
    left = np.diag([math.sqrt(h.y1), 1 / math.sqrt(h.y1)])
    right = np.diag([math.sqrt(h.y2), 1 / math.sqrt(h.y2)])
    return h.sign * left @ _core(h.v, h.delta1, h.delta2) @ right


def delta(q: QuatMat) -> int:
    """delta(g) = 2|ad + bc| = 2|N(z1) + 5 N(z2)|, exactly."""
    return 2 * abs(q.z1.norm() + 5 * q.z2.norm())


def nu(q: QuatMat) -> int:
    """bc/5 = N(z2) for elements whose four entries are positive."""
    if not (is_totally_positive(q.z1) and is_totally_positive(q.z2)):
        raise ValueError(f"{q} does not have four positive entries")
    return q.z2.norm()


def double_coset_key(q: QuatMat) -> tuple[QuadInt, QuadInt, int]:
    """Invariant of H q H for totally positive z1, z2.

    h0^k q h0^l multiplies z1 by eps^(2(k+l)) and z2 by eps^(2(k-l)), so the
    classes of z1, z2 and the parity of the exponent difference determine the
    double coset.
    """
    r1, m1 = reduce_class_exponent(q.z1)
    r2, m2 = reduce_class_exponent(q.z2)
    return r1, r2, (m1 - m2) % 2


def enumerate_cosets(n: int) -> list[QuatMat]:
    """Positive representatives of H\\Gamma(2,5)/H with bc = 5n, two per class pair."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    for c1 in D_K(5 * n + 1):
        for c2 in D_K(n):
            out.append(QuatMat.from_pair(c1.rep, c2.rep))
            out.append(QuatMat.from_pair(c1.rep * EPS2, c2.rep))
    return out


def S_h(n1: int, n2: int, n: int) -> complex:
    if (n1 - n2) % 2:
        return 0j
    return 2 * U_k(n1 + n2, 5 * n + 1) * U_k(n1 - n2, n)


def torus_point(q: QuatMat) -> tuple[float, float]:
    """(log y1, log y2) / (2 log eps^2), not reduced."""
    h = hyperbolic_decompose(embed(q))
    scale = 4 * LOG_EPS
    return math.log(h.y1) / scale, math.log(h.y2) / scale


def S_h_direct_grid(n: int, nmax: int) -> np.ndarray:
    """S_h_direct(n1, n2, n) for |n1|, |n2| <= nmax, indexed [n1 + nmax, n2 + nmax]."""
    pts = np.array([torus_point(q) for q in enumerate_cosets(n)]).reshape(-1, 2)
    f = np.arange(-nmax, nmax + 1)
    e1 = np.exp(2j * np.pi * np.outer(f, pts[:, 0]))
    e2 = np.exp(2j * np.pi * np.outer(f, pts[:, 1]))
    return e1 @ e2.T


def S_h_direct(n1: int, n2: int, n: int) -> complex:
    """Phase sum over enumerate_cosets(n) read off the hyperbolic decomposition."""
    nmax = max(abs(n1), abs(n2))
    return complex(S_h_direct_grid(n, nmax)[n1 + nmax, n2 + nmax])


# --------------------------------------------------------------------------
# range aggregates


def _terms(limit: int) -> np.ndarray:
    """S_h(0, 0, n) = 2 N2(5n+1) N2(n) for 0 <= n <= limit."""
    t = N2_table(5 * limit + 1)
    n = np.arange(limit + 1)
    return 2 * t[5 * n + 1] * t[n]


def count_range_h(X: int, threads: int = 1) -> StatReport:
    """Sum of S_h(0, 0, n) over n <= X against 10 (log eps)^2 / pi^2 * X."""
    if X < 1:
        raise ValueError("X must be positive")
    check_cap(5 * X + 1)
    terms = _terms(X)
    const = 10 * LOG_EPS**2 / math.pi**2

    def block(lo: int, hi: int) -> StatReport:
        return StatReport(
            (lo, hi),
            "hyperbolic",
            count=int(terms[lo : hi + 1].sum()),
            reference_constant=const,
            metadata={"reference": "linear", "ratio_of": "count"},
        )

    return run_blocks(block, 1, X, threads)


def _mangoldt(x: int) -> np.ndarray:
    return sieve(max(x, 2)).mangoldt()[: x + 1]


def psi_h(x: int, threads: int = 1) -> StatReport:
    """psi_h(x) = sum of S_h(0,0,n) Lambda(n) against C x; ``count`` is pi_h(x)."""
    from .analytics import constant_C

    if x < 2:
        raise ValueError("x must be at least 2")
    check_cap(5 * x + 1)
    terms = _terms(x)
    lam = _mangoldt(x)
    prime = sieve(max(x, 2)).is_prime[: x + 1]

    def block(lo: int, hi: int) -> StatReport:
        s = slice(lo, hi + 1)
        return StatReport(
            (lo, hi),
            "hyperbolic",
            count=int(terms[s][prime[s]].sum()),
            weighted_sum=float(np.dot(terms[s], lam[s])),
            reference_constant=constant_C(),
            metadata={"reference": "linear", "ratio_of": "weighted_sum"},
        )

    return run_blocks(block, 1, x, threads)


def pi_h(x: int, threads: int = 1) -> StatReport:
    """pi_h(x) = sum of S_h(0,0,p) over primes p <= x against C li(x)."""
    from .analytics import constant_C

    if x < 2:
        raise ValueError("x must be at least 2")
    check_cap(5 * x + 1)
    terms = _terms(x)
    prime = sieve(max(x, 2)).is_prime[: x + 1]

    def block(lo: int, hi: int) -> StatReport:
        s = slice(lo, hi + 1)
        return StatReport(
            (lo, hi),
            "hyperbolic",
            count=int(terms[s][prime[s]].sum()),
            reference_constant=constant_C(),
            metadata={"reference": "li", "ratio_of": "count"},
        )

    return run_blocks(block, 1, x, threads)


def titchmarsh_sum(x: int, a: int, threads: int = 1) -> StatReport:
    """Sum of N2(5n+1) Lambda(n) over n <= x, n = a mod 8, against C' x / 4.

    ``count`` is the unweighted sum of N2(5n+1) over the prime powers involved.
    """
    from .analytics import constant_Cprime

    if a not in (1, 7):
        raise ValueError("residue must be 1 or 7 mod 8")
    if x < 2:
        raise ValueError("x must be at least 2")
    check_cap(5 * x + 1)
    t = N2_table(5 * x + 1)
    n = np.arange(x + 1)
    vals = np.where(n % 8 == a, t[5 * n + 1], 0)
    lam = _mangoldt(x)

    def block(lo: int, hi: int) -> StatReport:
        s = slice(lo, hi + 1)
        return StatReport(
            (lo, hi),
            "titchmarsh",
            count=int(vals[s][lam[s] > 0].sum()),
            weighted_sum=float(np.dot(vals[s], lam[s])),
            reference_constant=constant_Cprime() / 4,
            metadata={"reference": "linear", "ratio_of": "weighted_sum", "residue": str(a)},
        )

    return run_blocks(block, 1, x, threads)


def prime_weyl_B(n1: int, n2: int, x: int, threads: int = 1) -> StatReport:
    """Sum over primes p <= x of S_h(n1, n2, p); ``count`` is pi_h(x)."""
    if x < 2:
        raise ValueError("x must be at least 2")
    check_cap(5 * x + 1)
    primes = sieve(max(x, 2)).primes(x)
    counts = _terms(x)[primes]
    if (n1 - n2) % 2:
        sums = np.zeros(len(primes), dtype=complex)
    else:
        u1 = U_k_table(n1 + n2, 5 * x + 1)
        u2 = U_k_table(n1 - n2, 5 * x + 1)
        sums = 2 * u1[5 * primes + 1] * u2[primes]
    meta = {"reference": "none", "ratio_of": "magnitude", "n1": str(n1), "n2": str(n2)}

    def block(lo: int, hi: int) -> StatReport:
        sel = (primes >= lo) & (primes <= hi)
        return StatReport(
            (lo, hi),
            "hyperbolic",
            count=int(counts[sel].sum()),
            complex_sum=complex(sums[sel].sum()),
            metadata=dict(meta),
        )

    return run_blocks(block, 1, x, threads)


# --------------------------------------------------------------------------
# torus points and random elements


def h_points(x: int, primes_only: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Torus points (log y1, log y2)/(2 log eps^2) mod 1 of the double cosets with n <= x.

    For class representatives z1, z2 with fractions t1, t2 in [0, 1) the point
    is ((t1 + t2)/2, (t1 - t2)/2); the partner coset built from eps^2 z1 sits
    at the same point shifted by (1/2, 1/2).
    """
    check_cap(5 * x + 1)
    tab = class_table(5 * x + 1)
    ns = sieve(max(x, 2)).primes(x) if primes_only else np.arange(1, x + 1)
    cnt = tab.counts()
    _, i1, i2 = cross_pairs(tab.start[5 * ns + 1], cnt[5 * ns + 1], tab.start[ns], cnt[ns])
    t1, t2 = tab.t[i1], tab.t[i2]
    base = np.column_stack(((t1 + t2) / 2, (t1 - t2) / 2))
    pts = np.concatenate((base, base + 0.5))
    return np.mod(pts, 1.0), np.ones(len(pts))


@lru_cache(maxsize=1)
def small_elements(bound: int = 6) -> tuple[QuatMat, ...]:
    """Elements with all |x_i| <= bound, excluding +-1."""
    r = np.arange(-bound, bound + 1)
    x0, x1, x2, x3 = np.meshgrid(r, r, r, r, indexing="ij")
    det = x0 * x0 - 2 * x1 * x1 - 5 * (x2 * x2 - 2 * x3 * x3)
    hits = np.argwhere(det == 1)
    out = [QuatMat(*(int(r[i]) for i in idx)) for idx in hits]
    return tuple(q for q in out if q not in (IDENTITY, -IDENTITY))


def random_elements(count: int, rng: random.Random, max_coord: int = 10**6) -> list[QuatMat]:
    """Random words in small generators, kept while every coordinate is <= max_coord.

    Only elements outside S and s are returned, so each one has a hyperbolic
    decomposition.
    """
    gens = small_elements()
    out: list[QuatMat] = []
    while len(out) < count:
        g = rng.choice(gens)
        for _ in range(rng.randint(1, 40)):
            h = g * rng.choice(gens)
            if max(abs(c) for c in h.coords()) > max_coord:
                break
            g = h
        if classify(embed(g)) is Cell.generic:
            out.append(g)
    return out

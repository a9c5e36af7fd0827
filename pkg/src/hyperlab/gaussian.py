"""Exact arithmetic in the Gaussian integers Z[i].

Point queries (norms, primary associates, factorizations, Weyl sums at a single
n) work on :class:`GaussInt` with Python integers.  Range sweeps go through the
``*_table`` helpers, which bin the whole lattice disc by norm with numpy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import isprime
from sympy.ntheory import sqrt_mod

from .sieve import chi4, divisor_sum_table, factor_int


@dataclass(frozen=True, slots=True, order=True)
class GaussInt:
    re: int
    im: int

    @classmethod
    def of(cls, z) -> "GaussInt":
        if isinstance(z, GaussInt):
            return z
        if isinstance(z, complex):
            return cls(int(z.real), int(z.imag))
        return cls(int(z), 0)

    def __add__(self, other) -> "GaussInt":
        o = GaussInt.of(other)
        return GaussInt(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "GaussInt":
        o = GaussInt.of(other)
        return GaussInt(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> "GaussInt":
        return GaussInt.of(other) - self

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other) -> "GaussInt":
        o = GaussInt.of(other)
        return GaussInt(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "GaussInt":
        if k < 0:
            raise ValueError("negative powers are not in Z[i]")
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __complex__(self) -> complex:
        return complex(self.re, self.im)

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def exact_div(self, other) -> "GaussInt | None":
        """self / other if the quotient lies in Z[i], else None."""
        o = GaussInt.of(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by 0 in Z[i]")
        num = self * o.conj()
        if num.re % n or num.im % n:
            return None
        return GaussInt(num.re // n, num.im // n)

    def phase(self) -> complex:
        """z/|z| as a double-precision complex number."""
        n = self.norm()
        if n == 0:
            raise ValueError("phase of 0 is undefined")
        return complex(self.re, self.im) / math.sqrt(n)

    def __repr__(self) -> str:
        return f"GaussInt({self.re}, {self.im})"


ZERO = GaussInt(0, 0)
ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
ONE_PLUS_I = GaussInt(1, 1)
UNITS = (ONE, I, GaussInt(-1, 0), GaussInt(0, -1))
_PRIMARY_MODULUS = ONE_PLUS_I**3  # -2 + 2i

# e^{i pi k / 4}, k = 0..7, exact on the axes
_H = math.sqrt(0.5)
_EIGHTH_ROOTS = (1 + 0j, complex(_H, _H), 1j, complex(-_H, _H), -1 + 0j, complex(-_H, -_H), -1j, complex(_H, -_H))


def norm(z: GaussInt) -> int:
    return GaussInt.of(z).norm()


def is_primary(z: GaussInt) -> bool:
    """True iff z = 1 mod (1+i)^3."""
    return (GaussInt.of(z) - ONE).exact_div(_PRIMARY_MODULUS) is not None


def primary_associate(z: GaussInt) -> tuple[GaussInt, GaussInt]:
    """The unique unit u with u*z primary, returned as (u, u*z)."""
    z = GaussInt.of(z)
    if z == ZERO or z.norm() % 2 == 0:
        raise ValueError(f"{z} is divisible by 1+i; no primary associate")
    hits = [(u, u * z) for u in UNITS if is_primary(u * z)]
    if len(hits) != 1:  # pragma: no cover - would contradict the structure of Z[i]
        raise ArithmeticError(f"expected one primary associate of {z}, found {len(hits)}")
    return hits[0]


def reps_with_norm(n: int) -> list[GaussInt]:
    """Every z in Z[i] with norm n, sorted; len == r(n)."""
    if n < 0:
        return []
    if n == 0:
        return [ZERO]
    out = set()
    for a in range(math.isqrt(n) + 1):
        b2 = n - a * a
        b = math.isqrt(b2)
        if b * b == b2:
            for sa in (a, -a):
                for sb in (b, -b):
                    out.add(GaussInt(sa, sb))
    return sorted(out)


def primary_reps_with_norm(n: int) -> list[GaussInt]:
    if n % 2 == 0:
        raise ValueError("primary elements have odd norm")
    return [z for z in reps_with_norm(n) if is_primary(z)]


@dataclass(frozen=True)
class GaussFactorization:
    unit: GaussInt
    two_exponent: int
    odd_part: tuple[tuple[GaussInt, int], ...]

    def product(self) -> GaussInt:
        out = self.unit * ONE_PLUS_I**self.two_exponent
        for w, e in self.odd_part:
            out = out * w**e
        return out


@lru_cache(maxsize=None)
def split_prime(p: int) -> GaussInt:
    """Primary irreducible of norm p (p = 1 mod 4 prime) with positive argument."""
    if p % 4 != 1 or not isprime(p):
        raise ValueError(f"{p} is not a prime = 1 mod 4")
    # Hermite-Serret: Euclid on (p, sqrt(-1) mod p) stops at the first remainder below sqrt(p)
    x = int(sqrt_mod(-1, p))
    a, b = p, x
    root = math.isqrt(p)
    while b > root:
        a, b = b, a % b
    c = math.isqrt(p - b * b)
    if b * b + c * c != p:  # pragma: no cover
        raise ArithmeticError(f"two-squares split failed for {p}")
    _, w = primary_associate(GaussInt(b, c))
    return w if w.im > 0 else w.conj()


def prime_angle(p: int) -> float:
    """theta_p in (0, pi): the argument of the primary irreducible above p."""
    w = split_prime(p)
    return math.atan2(w.im, w.re)


def factor(z: GaussInt) -> GaussFactorization:
    """Factor z into a unit, a power of (1+i) and primary irreducibles."""
    z = GaussInt.of(z)
    if z == ZERO:
        raise ValueError("cannot factor 0")
    rest = z
    two = 0
    odd: list[tuple[GaussInt, int]] = []
    for p, e in factor_int(z.norm()):
        if p == 2:
            while (q := rest.exact_div(ONE_PLUS_I)) is not None:
                rest, two = q, two + 1
        elif p % 4 == 3:
            w = GaussInt(-p, 0)
            for _ in range(e // 2):
                rest = rest.exact_div(w)
            odd.append((w, e // 2))
        else:
            pi = split_prime(p)
            for w in (pi, pi.conj()):
                k = 0
                while (q := rest.exact_div(w)) is not None:
                    rest, k = q, k + 1
                if k:
                    odd.append((w, k))
    if rest not in UNITS:  # pragma: no cover
        raise ArithmeticError(f"factorization of {z} left non-unit {rest}")
    return GaussFactorization(rest, two, tuple(odd))


def _two_phase(m: int, l: int) -> complex:
    return _EIGHTH_ROOTS[(l * m) % 8]


def weyl_WP(m: int, n: int) -> complex:
    """W^P_m(n), assembled from the prime factorization of n."""
    if n < 1:
        raise ValueError("n must be positive")
    val = 1 + 0j
    for p, e in factor_int(n):
        if p == 2:
            val *= _two_phase(m, e)
        elif p % 4 == 3:
            if e % 2:
                return 0j
            # primary irreducible is -p, argument pi
            if (m * e // 2) % 2:
                val = -val
        else:
            w = split_prime(p).phase() ** m
            val *= sum(w ** (2 * j - e) for j in range(e + 1))
    return val


def weyl_WP_direct(m: int, n: int) -> complex:
    """W^P_m(n) by summing over primary representatives of the odd part."""
    if n < 1:
        raise ValueError("n must be positive")
    l = (n & -n).bit_length() - 1
    odd = n >> l
    return _two_phase(m, l) * sum((z.phase() ** m for z in primary_reps_with_norm(odd)), 0j)


def weyl_W(m: int, n: int) -> complex:
    """W_m(n) = (1/4) sum over all z of norm n of (z/|z|)^m."""
    if m % 4:
        return 0j
    return weyl_WP(m, n)


def weyl_W_direct(m: int, n: int) -> complex:
    return sum((z.phase() ** m for z in reps_with_norm(n)), 0j) / 4


def _weyl_W_ext(m: int, n: int) -> complex:
    # n = 0: the only point is 0; (0/|0|)^0 := 1 and (0/|0|)^m := 0 otherwise
    if n == 0:
        return 0.25 + 0j if m == 0 else 0j
    return weyl_W(m, n)


# --------------------------------------------------------------------------
# range tables


@dataclass(frozen=True)
class NormGroups:
    """Lattice points sorted by norm; points of norm k are ``re[start[k]:start[k+1]]``."""

    limit: int
    re: np.ndarray
    im: np.ndarray
    start: np.ndarray

    def counts(self) -> np.ndarray:
        return np.diff(self.start)

    def angles(self) -> np.ndarray:
        return np.arctan2(self.im, self.re)


def _group(limit: int, re: np.ndarray, im: np.ndarray) -> NormGroups:
    nrm = re * re + im * im
    order = np.lexsort((im, re, nrm))
    re, im, nrm = re[order], im[order], nrm[order]
    start = np.searchsorted(nrm, np.arange(limit + 2), side="left")
    return NormGroups(limit, re, im, start)


@lru_cache(maxsize=4)
def lattice_groups(limit: int, primary: bool = False) -> NormGroups:
    """All z with norm <= limit (or only the primary ones), grouped by norm.

    Primary z = a + bi are exactly those with b even and a + b = 1 mod 4.
    """
    R = math.isqrt(limit)
    b = np.arange(-R, R + 1, dtype=np.int64)
    res, ims = [], []
    for a in range(-R, R + 1):
        keep = a * a + b * b <= limit
        if primary:
            keep &= (b % 2 == 0) & ((a + b) % 4 == 1)
        bb = b[keep]
        res.append(np.full(len(bb), a, dtype=np.int64))
        ims.append(bb)
    return _group(limit, np.concatenate(res), np.concatenate(ims))


def r_table(limit: int) -> np.ndarray:
    """r(n) = #{z : N(z) = n} for 0 <= n <= limit."""
    n = np.arange(limit + 1, dtype=np.int64)
    out = 4 * divisor_sum_table(chi4(n), limit)
    out[0] = 1
    return out


def _two_adic(limit: int) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(limit + 1, dtype=np.int64)
    n[0] = 1
    low = n & -n
    l = np.log2(low).round().astype(np.int64)
    return l, n // low


def weyl_WP_table(m: int, limit: int) -> np.ndarray:
    """W^P_m(n) for 0 <= n <= limit (entry 0 is 0)."""
    g = lattice_groups(limit, primary=True)
    ang = g.angles()
    nrm = g.re * g.re + g.im * g.im
    odd = np.bincount(nrm, weights=np.cos(m * ang), minlength=limit + 1) + 1j * np.bincount(
        nrm, weights=np.sin(m * ang), minlength=limit + 1
    )
    l, core = _two_adic(limit)
    roots = np.array(_EIGHTH_ROOTS)
    out = roots[(l * m) % 8] * odd[core]
    out[0] = 0
    return out


def weyl_W_table(m: int, limit: int) -> np.ndarray:
    """W_m(n) for 0 <= n <= limit, with the n = 0 convention of the point query."""
    if m % 4:
        out = np.zeros(limit + 1, dtype=complex)
    else:
        out = weyl_WP_table(m, limit)
    out[0] = 0.25 if m == 0 else 0
    return out

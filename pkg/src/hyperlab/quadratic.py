"""Arithmetic in Z[sqrt 2]: norms, total positivity, classes modulo eps^2, N2 and U_k.

Totally positive elements of norm n are taken modulo multiplication by
eps^2 = 3 + 2 sqrt 2.  Each class has exactly one representative z = x + y sqrt 2
in the window sqrt(n) <= z < eps^2 sqrt(n); in coordinates that window is
``y >= 0 and 3*y < 2*x``, which is tested with integers only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .sieve import check_cap, chi8 as _chi8, divisor_sum_table, factor_int

SQRT2 = math.sqrt(2.0)
LOG_EPS = math.log1p(SQRT2)


@dataclass(frozen=True, slots=True, order=True)
class QuadInt:
    x: int
    y: int

    def __add__(self, o: "QuadInt") -> "QuadInt":
        return QuadInt(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "QuadInt") -> "QuadInt":
        return QuadInt(self.x - o.x, self.y - o.y)

    def __neg__(self) -> "QuadInt":
        return QuadInt(-self.x, -self.y)

    def __mul__(self, o) -> "QuadInt":
        if isinstance(o, int):
            return QuadInt(self.x * o, self.y * o)
        return QuadInt(self.x * o.x + 2 * self.y * o.y, self.x * o.y + self.y * o.x)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "QuadInt":
        if k < 0:
            u = self.unit_inverse()
            return u ** (-k)
        out, base = ONE, self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sigma(self) -> "QuadInt":
        return QuadInt(self.x, -self.y)

    def norm(self) -> int:
        return self.x * self.x - 2 * self.y * self.y

    def unit_inverse(self) -> "QuadInt":
        n = self.norm()
        if n not in (1, -1):
            raise ValueError(f"{self} is not a unit")
        return self.sigma() * n

    def embeddings(self) -> tuple[float, float]:
        """(z, sigma z) as floats; the one prone to cancellation comes from the exact norm."""
        n = self.norm()
        if (self.x >= 0) == (self.y >= 0):
            big = self.x + self.y * SQRT2
            return big, (n / big if big else 0.0)
        big = self.x - self.y * SQRT2
        return n / big, big

    def __float__(self) -> float:
        return self.embeddings()[0]

    def __repr__(self) -> str:
        return f"QuadInt({self.x}, {self.y})"


ONE = QuadInt(1, 0)
EPS = QuadInt(1, 1)
EPS2 = QuadInt(3, 2)
EPS2_INV = QuadInt(3, -2)


@dataclass(frozen=True)
class ClassRep:
    rep: QuadInt
    n: int


def norm(z: QuadInt) -> int:
    return z.norm()


def is_totally_positive(z: QuadInt) -> bool:
    """Both x + y sqrt 2 > 0 and x - y sqrt 2 > 0, decided with integers."""
    return z.x > 0 and z.x * z.x > 2 * z.y * z.y


def in_window(z: QuadInt) -> bool:
    """sqrt(N z) <= z < eps^2 sqrt(N z) for totally positive z."""
    return z.y >= 0 and 3 * z.y < 2 * z.x


def reduce_class_exponent(z: QuadInt) -> tuple[QuadInt, int]:
    """(rep, m) with z = eps^(2m) * rep and rep in the canonical window."""
    if not is_totally_positive(z):
        raise ValueError(f"{z} is not totally positive")
    # first jump by the float estimate of m, then settle with exact steps
    m = 0
    t = _log_ratio(z) / (4 * LOG_EPS)
    if abs(t) > 2:
        m = math.floor(t)
        z = z * (EPS2_INV**m if m > 0 else EPS2 ** (-m))
    while z.y < 0:
        z, m = z * EPS2, m - 1
    while 3 * z.y >= 2 * z.x:
        z, m = z * EPS2_INV, m + 1
    return z, m


def reduce_class(z: QuadInt) -> ClassRep:
    rep, _ = reduce_class_exponent(z)
    return ClassRep(rep, rep.norm())


def D_K(n: int) -> list[ClassRep]:
    """Classes of totally positive elements of norm n, by scanning the window."""
    if n < 1:
        raise ValueError("n must be positive")
    out = []
    y = 0
    while 4 * n > y * y:  # 3y < 2x  <=>  y^2 < 4n
        x2 = n + 2 * y * y
        x = math.isqrt(x2)
        if x * x == x2:
            out.append(ClassRep(QuadInt(x, y), n))
        y += 1
    return out


def chi8(n):
    return _chi8(n)


def N2(n: int) -> int:
    """Number of ideals of norm n: sum over d | n of chi8(d)."""
    if n < 1:
        raise ValueError("n must be positive")
    out = 1
    for p, e in factor_int(n):
        c = _chi8(p)
        if c == 1:
            out *= e + 1
        elif c == -1:
            out *= 1 - e % 2
    return out


def _log_ratio(z: QuadInt) -> float:
    """log |z / sigma z|."""
    a, b = z.embeddings()
    if a == 0 or b == 0:
        raise ValueError(f"{z} has a vanishing embedding")
    return math.log(abs(a)) - math.log(abs(b))


def lambda_angle(z: QuadInt) -> float:
    """Angle of lambda(z) = |z/sigma z|^{i pi / (4 log eps)}, reduced to [0, 2 pi)."""
    return (math.pi * _log_ratio(z) / (4 * LOG_EPS)) % (2 * math.pi)


def window_fraction(z: QuadInt) -> float:
    """log(z/sigma z) / (4 log eps), in [0, 1) for window representatives."""
    return _log_ratio(z) / (4 * LOG_EPS)


@lru_cache(maxsize=None)
def split_class(p: int) -> QuadInt:
    """Window representative of one of the two classes above a prime p = +-1 mod 8."""
    if _chi8(p) != 1:
        raise ValueError(f"{p} does not split")
    reps = D_K(p)
    if len(reps) != 2:  # pragma: no cover
        raise ArithmeticError(f"expected two classes above {p}, found {len(reps)}")
    return reps[0].rep


def U_k(k: int, n: int) -> complex:
    """U_k(n) = sum of lambda(z)^k over D_K(n), assembled prime by prime."""
    if k % 2:
        raise ValueError("U_k needs even k")
    if n < 1:
        raise ValueError("n must be positive")
    val = 1 + 0j
    for p, e in factor_int(n):
        if p == 2:
            # lambda(2 + sqrt 2) = i
            val *= (1j) ** ((k * e) % 4)
        elif _chi8(p) == -1:
            if e % 2:
                return 0j
        else:
            ang = k * lambda_angle(split_class(p))
            w = complex(math.cos(ang), math.sin(ang))
            val *= sum(w ** (2 * j - e) for j in range(e + 1))
    return val


def U_k_direct(k: int, n: int) -> complex:
    if k % 2:
        raise ValueError("U_k needs even k")
    return sum((np.exp(1j * k * lambda_angle(c.rep)) for c in D_K(n)), 0j)


# --------------------------------------------------------------------------
# range tables


def N2_table(limit: int) -> np.ndarray:
    """N2(n) for 0 <= n <= limit (entry 0 is 0)."""
    check_cap(limit)
    n = np.arange(limit + 1, dtype=np.int64)
    return divisor_sum_table(_chi8(n), limit)


@dataclass(frozen=True)
class ClassTable:
    """Window representatives of every class with norm <= limit, grouped by norm.

    Representatives of norm k are ``x[start[k]:start[k+1]]`` (and ``y``);
    ``t`` holds log(z/sigma z)/(4 log eps) in [0, 1).
    """

    limit: int
    x: np.ndarray
    y: np.ndarray
    t: np.ndarray
    start: np.ndarray

    def counts(self) -> np.ndarray:
        return np.diff(self.start)


@lru_cache(maxsize=2)
def class_table(limit: int) -> ClassTable:
    check_cap(limit)
    ymax = 2 * math.isqrt(limit) + 2
    xs, ys = [], []
    xmax = 3 * math.isqrt(limit) + 3
    x = np.arange(1, xmax + 1, dtype=np.int64)
    for y in range(ymax + 1):
        nrm = x * x - 2 * y * y
        keep = (3 * y < 2 * x) & (nrm >= 1) & (nrm <= limit)
        xs.append(x[keep])
        ys.append(np.full(int(keep.sum()), y, dtype=np.int64))
    X = np.concatenate(xs)
    Y = np.concatenate(ys)
    nrm = X * X - 2 * Y * Y
    order = np.lexsort((Y, nrm))
    X, Y, nrm = X[order], Y[order], nrm[order]
    # log(z/sigma z) = 2 log z - log n, with z = x + y sqrt 2 the larger embedding
    t = (2 * np.log(X + Y * SQRT2) - np.log(nrm)) / (4 * LOG_EPS)
    t = np.clip(t, 0.0, np.nextafter(1.0, 0.0))
    start = np.searchsorted(nrm, np.arange(limit + 2), side="left")
    return ClassTable(limit, X, Y, t, start)


def U_k_table(k: int, limit: int) -> np.ndarray:
    """U_k(n) for 0 <= n <= limit."""
    if k % 2:
        raise ValueError("U_k needs even k")
    tab = class_table(limit)
    nrm = (tab.x * tab.x - 2 * tab.y * tab.y)
    ang = np.pi * k * tab.t
    return np.bincount(nrm, weights=np.cos(ang), minlength=limit + 1) + 1j * np.bincount(
        nrm, weights=np.sin(ang), minlength=limit + 1
    )

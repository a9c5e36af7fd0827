"""Shared numerics: li, Euler-product constants, torus samples and their diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .sieve import Sieve, chi4, chi8, sieve  # noqa: F401  (sieve is part of this module's surface)

LOG_EPS = math.log1p(math.sqrt(2.0))
#: Default Euler-product cutoff; the relative truncation error is below 1/P.
DEFAULT_CUTOFF = 10**7


def li(x: float) -> float:
    """Integral of 1/log t from 2 to x."""
    if x < 2:
        raise ValueError("li is defined here for x >= 2")
    if x == 2:
        return 0.0
    val, _ = quad(lambda t: 1.0 / math.log(t), 2.0, float(x), epsabs=0.0, epsrel=1e-12, limit=400)
    return val


@dataclass(frozen=True)
class EulerProduct:
    value: float
    tail_bound: float  # |log(full product) - log(value)| <= tail_bound
    cutoff: int


_CHARACTERS = {"chi4": chi4, "chi8": chi8}


@lru_cache(maxsize=16)
def euler_product(character: str, omit: int | None = None, P: int = DEFAULT_CUTOFF) -> EulerProduct:
    """Product over primes p <= P, p != omit, of 1 + chi(p)/(p(p-1)).

    The neglected factors satisfy |sum_{p>P} log(1 + chi(p)/(p(p-1)))| <=
    sum_{n>P} 1/(n(n-1)) = 1/P.
    """
    if character not in _CHARACTERS:
        raise ValueError(f"unknown character {character!r}")
    if P < 3:
        raise ValueError("cutoff must be at least 3")
    p = sieve(P).primes().astype(np.float64)
    if omit is not None:
        p = p[p != omit]
    c = _CHARACTERS[character](p.astype(np.int64)).astype(np.float64)
    # sum small terms first for a reproducible, accurate total
    logs = np.log1p(c / (p * (p - 1)))
    value = math.exp(math.fsum(logs[::-1]))
    return EulerProduct(value, 1.0 / P, P)


def elliptic_prime_constant(P: int = DEFAULT_CUTOFF) -> float:
    """K = 8 pi prod_p (1 + chi4(p)/(p(p-1)))."""
    return 8 * math.pi * euler_product("chi4", None, P).value


def L1_chi8() -> float:
    """L(1, chi8) = log(1 + sqrt 2) / sqrt 2."""
    return LOG_EPS / math.sqrt(2.0)


def constant_C(P: int = DEFAULT_CUTOFF) -> float:
    return 12 / 5 * L1_chi8() * euler_product("chi8", 5, P).value


def constant_Cprime(P: int = DEFAULT_CUTOFF) -> float:
    return 6 / 5 * L1_chi8() * euler_product("chi8", 5, P).value


def dirichlet_partial_sum(character: str, N: int) -> float:
    """sum_{n <= N} chi(n)/n, an independent route to L(1, chi)."""
    n = np.arange(1, N + 1, dtype=np.int64)
    c = _CHARACTERS[character](n)
    return math.fsum((c / n.astype(np.float64))[::-1])


# --------------------------------------------------------------------------
# torus samples


@dataclass
class TorusSample:
    points: np.ndarray
    weights: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.mod(np.asarray(self.points, dtype=float).reshape(-1, 2), 1.0)
        pts[pts >= 1.0] = 0.0  # mod can round tiny negatives up to 1.0
        self.points = pts
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=float)
            if w.shape != (len(pts),) or (w <= 0).any():
                raise ValueError("weights must be positive, one per point")
            self.weights = w

    def __len__(self) -> int:
        return len(self.points)

    @property
    def total_weight(self) -> float:
        return float(len(self.points)) if self.weights is None else float(self.weights.sum())

    def _w(self) -> np.ndarray:
        return np.ones(len(self.points)) if self.weights is None else self.weights


def weyl_table(sample: TorusSample, M: int, chunk: int = 1 << 19) -> np.ndarray:
    """|sum w e(m1 x1 + m2 x2)| / sum w for |m1|, |m2| <= M, indexed [m1 + M, m2 + M]."""
    if len(sample) == 0:
        raise ValueError("empty sample")
    f = np.arange(-M, M + 1)
    acc = np.zeros((2 * M + 1, 2 * M + 1), dtype=complex)
    w = sample._w()
    for s in range(0, len(sample), chunk):
        pts = sample.points[s : s + chunk]
        e1 = np.exp(2j * np.pi * np.outer(f, pts[:, 0]))
        e2 = np.exp(2j * np.pi * np.outer(f, pts[:, 1])) * w[s : s + chunk]
        acc += e1 @ e2.T
    return np.abs(acc) / sample.total_weight


def box_discrepancy(sample: TorusSample, G: int) -> float:
    """max |mass - area| over boxes [i1/G, i2/G) x [j1/G, j2/G)."""
    if G < 2:
        raise ValueError("grid must be at least 2")
    if len(sample) == 0:
        raise ValueError("empty sample")
    idx = np.minimum((sample.points * G).astype(np.int64), G - 1)
    hist = np.zeros((G, G))
    np.add.at(hist, (idx[:, 0], idx[:, 1]), sample._w())
    hist /= sample.total_weight
    cum = np.zeros((G + 1, G + 1))
    cum[1:, 1:] = hist.cumsum(0).cumsum(1)
    g = np.arange(G + 1)
    i1, i2, j1, j2 = np.meshgrid(g, g, g, g, indexing="ij")
    ok = (i1 < i2) & (j1 < j2)
    mass = cum[i2, j2] - cum[i1, j2] - cum[i2, j1] + cum[i1, j1]
    area = (i2 - i1) * (j2 - j1) / G**2
    return float(np.abs(mass - area)[ok].max())


def interval_discrepancy(values: np.ndarray, G: int, weights: np.ndarray | None = None) -> float:
    """max |mass - length| over intervals [i/G, j/G) for values in [0, 1)."""
    values = np.mod(np.asarray(values, dtype=float), 1.0)
    w = np.ones(len(values)) if weights is None else np.asarray(weights, dtype=float)
    idx = np.minimum((values * G).astype(np.int64), G - 1)
    hist = np.bincount(idx, weights=w, minlength=G) / w.sum()
    cum = np.concatenate(([0.0], hist.cumsum()))
    g = np.arange(G + 1)
    i, j = np.meshgrid(g, g, indexing="ij")
    ok = i < j
    return float(np.abs(cum[j] - cum[i] - (j - i) / G)[ok].max())


CASES = ("E", "E_shifted", "h", "script_E", "script_H")


def _sum_difference(points: np.ndarray) -> np.ndarray:
    return np.column_stack((points[:, 0] + points[:, 1], points[:, 0] - points[:, 1]))


def build_sample(case: str, x: int, primes_only: bool = False) -> TorusSample:
    """Torus points of one of the sequences E, E', h or their sum/difference images."""
    from .elliptic import angle_points
    from .quaternion import h_points

    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; expected one of {CASES}")
    if case in ("E", "script_E", "E_shifted"):
        shift = 2 if case == "E_shifted" else 0
        if primes_only:
            sizes = sieve(max(x, 2)).primes(x) - shift
            sizes = sizes[sizes >= 3]
        else:
            sizes = np.arange(3, x - shift + 1)
        pts, w = angle_points(sizes, x)
    else:
        pts, w = h_points(x, primes_only)
    if case.startswith("script"):
        pts = _sum_difference(pts)
    return TorusSample(pts, w, {"case": case, "x": x, "primes_only": primes_only})

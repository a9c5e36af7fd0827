"""Prime tables, von Mangoldt weights and Dirichlet divisor sums over ranges."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np
from sympy import factorint

from . import cache

#: Hard ceiling on table sizes; guards against accidental multi-GB allocations.
TABLE_CAP = 6 * 10**8


class CapExceededError(ValueError):
    """A requested range is larger than the configured memory cap."""


def check_cap(limit: int, cap: int = TABLE_CAP) -> None:
    if limit > cap:
        raise CapExceededError(f"table size {limit} exceeds cap {cap}")


@dataclass(frozen=True)
class Sieve:
    """Smallest-prime-factor table for 0..limit, with derived views."""

    limit: int
    spf: np.ndarray

    @property
    def is_prime(self) -> np.ndarray:
        n = np.arange(self.limit + 1)
        mask = self.spf == n
        mask[:2] = False
        return mask

    def primes(self, upto: int | None = None) -> np.ndarray:
        p = np.flatnonzero(self.is_prime)
        if upto is not None:
            p = p[p <= upto]
        return p

    def mangoldt(self) -> np.ndarray:
        """Lambda(n) for 0 <= n <= limit (log p on prime powers, else 0)."""
        lam = np.zeros(self.limit + 1)
        primes = self.primes()
        lam[primes] = np.log(primes)
        for p in primes[primes <= math.isqrt(self.limit)]:
            p = int(p)
            pk = p * p
            while pk <= self.limit:
                lam[pk] = math.log(p)
                pk *= p
        return lam

    def factor(self, n: int) -> dict[int, int]:
        if not 1 <= n <= self.limit:
            raise ValueError(f"{n} outside sieve range")
        out: dict[int, int] = {}
        while n > 1:
            p = int(self.spf[n])
            out[p] = out.get(p, 0) + 1
            n //= p
        return out


def _build_spf(limit: int) -> np.ndarray:
    spf = np.arange(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] != p:
            continue
        block = spf[p * p :: p]
        untouched = block == np.arange(p * p, limit + 1, p)
        block[untouched] = p
    return spf


def sieve(limit: int) -> Sieve:
    """Smallest-prime-factor sieve up to ``limit``.

    When ``HYPERLAB_CACHE_DIR`` is set the table is stored there and reused.
    """
    if limit < 2:
        raise ValueError("sieve limit must be >= 2")
    check_cap(limit)
    return _sieve_cached(limit)


@lru_cache(maxsize=4)
def _sieve_cached(limit: int) -> Sieve:
    cache_dir = os.environ.get("HYPERLAB_CACHE_DIR")
    path = Path(cache_dir) / f"spf_{limit}.hpl" if cache_dir else None
    if path is not None and path.exists():
        try:
            spf = cache.load_array(path)
            if len(spf) == limit + 1:
                return Sieve(limit, spf)
        except cache.CacheFormatError:
            pass
    spf = _build_spf(limit)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        cache.save_array(path, spf)
    return Sieve(limit, spf)


@lru_cache(maxsize=1 << 16)
def factor_int(n: int) -> tuple[tuple[int, int], ...]:
    """Rational factorization of n >= 1 as sorted (prime, exponent) pairs."""
    if n < 1:
        raise ValueError("factor_int needs n >= 1")
    return tuple(sorted(factorint(n).items()))


def chi4(n):
    """Non-principal character mod 4; works on ints and integer arrays."""
    if isinstance(n, np.ndarray):
        r = n % 4
        return np.where(r == 1, 1, np.where(r == 3, -1, 0)).astype(np.int64)
    r = n % 4
    return 1 if r == 1 else (-1 if r == 3 else 0)


def chi8(n):
    """Primitive even character mod 8: +1 on n = +-1, -1 on n = +-3, 0 on even n."""
    if isinstance(n, np.ndarray):
        r = n % 8
        return np.where((r == 1) | (r == 7), 1, np.where((r == 3) | (r == 5), -1, 0)).astype(np.int64)
    r = n % 8
    if r in (1, 7):
        return 1
    if r in (3, 5):
        return -1
    return 0


def divisor_sum_table(values: np.ndarray, limit: int) -> np.ndarray:
    """out[n] = sum_{d | n} values[d] for 1 <= n <= limit (out[0] = 0).

    Splits the (d, k) pairs with d*k <= limit at sqrt(limit) so that both halves
    are strided numpy updates: O(sqrt(limit)) Python iterations.
    """
    check_cap(limit)
    values = np.asarray(values)
    if len(values) < limit + 1:
        raise ValueError("values table shorter than limit")
    out = np.zeros(limit + 1, dtype=values.dtype)
    s = math.isqrt(limit)
    # k <= s, every d
    for k in range(1, s + 1):
        m = limit // k
        out[k::k][:m] += values[1 : m + 1]
    # k > s forces d <= s
    for d in range(1, s + 1):
        v = values[d]
        if v:
            out[d * (s + 1) :: d] += v
    return out

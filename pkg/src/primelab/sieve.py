"""Segmented sieving of the von Mangoldt function on integer windows."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DEFAULT_SEGMENT = 1 << 20
MAX_CAPACITY = 1 << 32


class CapacityError(ValueError):
    """A request reaches past the integers the sieve was built for."""

    def __init__(self, requested: int, capacity: int):
        super().__init__(f"requested integer {requested} exceeds sieve capacity {capacity}")
        self.requested = requested
        self.capacity = capacity


def small_primes(limit: int) -> np.ndarray:
    """All primes <= limit by the plain sieve of Eratosthenes."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


@dataclass(frozen=True)
class LambdaWindow:
    """Values of the von Mangoldt function on ``[center - half_width, center + half_width]``."""

    center: int
    half_width: int
    values: np.ndarray = field(repr=False)

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)

    @property
    def integers(self) -> np.ndarray:
        return self.center + self.offsets

    def __getitem__(self, offset: int) -> float:
        if abs(offset) > self.half_width:
            raise KeyError(offset)
        return float(self.values[offset + self.half_width])

    def total(self) -> float:
        return float(self.values.sum())


class Sieve:
    """Segmented sieve over ``[0, capacity]``.

    Base primes up to ``sqrt(capacity)`` are computed once; any window is then
    sieved segment by segment, so memory stays O(segment_len) no matter how
    high the window sits.
    """

    def __init__(self, capacity: int, segment_len: int = DEFAULT_SEGMENT):
        if capacity < 2:
            raise ValueError("capacity must be at least 2")
        if capacity > MAX_CAPACITY:
            raise CapacityError(capacity, MAX_CAPACITY)
        if segment_len < 16:
            raise ValueError("segment_len must be at least 16")
        self.capacity = int(capacity)
        self.segment_len = int(segment_len)
        self.base_primes = small_primes(math.isqrt(self.capacity) + 1)
        self._log_base = np.log(self.base_primes.astype(float))

    def _check(self, hi: int) -> None:
        if hi > self.capacity:
            raise CapacityError(hi, self.capacity)

    def _segments(self, lo: int, hi: int):
        start = lo
        while start <= hi:
            stop = min(start + self.segment_len - 1, hi)
            yield start, stop
            start = stop + 1

    def _prime_flags(self, lo: int, hi: int) -> np.ndarray:
        """Primality of every integer in one segment ``[lo, hi]``."""
        flags = np.ones(hi - lo + 1, dtype=bool)
        if lo <= 1:
            flags[: min(2 - lo, flags.size)] = False
        for p in self.base_primes:
            p = int(p)
            if p * p > hi:
                break
            first = max(p * p, -(-lo // p) * p)
            flags[first - lo :: p] = False
        return flags

    def _lambda_segment(self, lo: int, hi: int) -> np.ndarray:
        values = np.zeros(hi - lo + 1)
        flags = self._prime_flags(lo, hi)
        idx = np.flatnonzero(flags)
        values[idx] = np.log((lo + idx).astype(float))
        # higher powers p^k, k >= 2, all have p <= sqrt(hi)
        for p, logp in zip(self.base_primes, self._log_base):
            p = int(p)
            pk = p * p
            if pk > hi:
                break
            while pk <= hi:
                if pk >= lo:
                    values[pk - lo] = logp
                pk *= p
        return values

    def von_mangoldt(self, lo: int, hi: int) -> np.ndarray:
        """Lambda(m) for every integer ``lo <= m <= hi`` (zero for m <= 1)."""
        if lo > hi:
            return np.zeros(0)
        self._check(hi)
        out = np.zeros(hi - lo + 1)
        start = max(lo, 0)
        if start > hi:
            return out
        for s, e in self._segments(start, hi):
            out[s - lo : e - lo + 1] = self._lambda_segment(s, e)
        return out

    def primes_between(self, lo: int, hi: int) -> np.ndarray:
        """Sorted primes p with ``lo <= p <= hi``."""
        self._check(hi)
        lo = max(lo, 0)
        chunks = [s + np.flatnonzero(self._prime_flags(s, e)) for s, e in self._segments(lo, hi)]
        return np.concatenate(chunks).astype(np.int64) if chunks else np.zeros(0, dtype=np.int64)

    def lambda_window(self, n: int, half_width: int) -> LambdaWindow:
        if half_width < 0:
            raise ValueError("half_width must be nonnegative")
        if n - half_width < 0:
            raise ValueError(f"window [{n - half_width}, {n + half_width}] starts below 0")
        values = self.von_mangoldt(n - half_width, n + half_width)
        return LambdaWindow(int(n), int(half_width), values)

    def prime_count_window(self, x: float, sigma: float) -> int:
        """pi(x + sigma) - pi(x - sigma): primes in the half-open ``(x - sigma, x + sigma]``."""
        if sigma <= 0:
            raise ValueError("sigma must be positive")
        if x - sigma < 0:
            raise ValueError("x - sigma must be nonnegative")
        lo = math.floor(x - sigma) + 1
        hi = math.floor(x + sigma)
        if hi < lo:
            return 0
        self._check(hi)
        return int(sum(int(self._prime_flags(s, e).sum()) for s, e in self._segments(lo, hi)))

    def prime_counter(self, lo: float, hi: float) -> "PrimeCounter":
        """Precompute primes on ``[lo, hi]`` for many window counts inside it."""
        return PrimeCounter(self.primes_between(math.floor(lo), math.floor(hi)), lo, hi)


class PrimeCounter:
    """Window prime counts by binary search over a sorted prime list."""

    def __init__(self, primes: np.ndarray, lo: float, hi: float):
        self.primes = primes
        self.lo = lo
        self.hi = hi

    def count(self, x, sigma):
        x = np.asarray(x, dtype=float)
        left, right = x - sigma, x + sigma
        if np.any(left < self.lo - 1) or np.any(right > self.hi):
            raise ValueError(f"window outside precomputed range [{self.lo}, {self.hi}]")
        # primes p with left < p <= right
        counts = np.searchsorted(self.primes, np.floor(right), side="right") \
            - np.searchsorted(self.primes, np.floor(left), side="right")
        return counts if counts.ndim else int(counts)


def lambda_window(n: int, half_width: int, sieve: Sieve | None = None) -> LambdaWindow:
    sieve = sieve or Sieve(max(n + half_width, 2))
    return sieve.lambda_window(n, half_width)


def prime_count_window(x: float, sigma: float, sieve: Sieve | None = None) -> int:
    sieve = sieve or Sieve(max(math.floor(x + sigma), 2))
    return sieve.prime_count_window(x, sigma)


def chebyshev_psi(limit: int, sieve: Sieve | None = None) -> float:
    """psi(limit) = sum of Lambda(m) for m <= limit."""
    sieve = sieve or Sieve(max(limit, 2))
    total = 0.0
    for s, e in sieve._segments(2, limit):
        total += float(sieve._lambda_segment(s, e).sum())
    return total

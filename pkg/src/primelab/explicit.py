"""Weighted prime-power sums and their approximation by sums over zeta zeros.

``s_direct`` evaluates the Gaussian-weighted von Mangoldt sum around an
integer n; ``s_hat`` evaluates the cosine sum over zero ordinates that
approximates it. Both are normalised so their typical value is 1.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import loggamma

from .sieve import Sieve
from .zeros import ZeroTable

SQRT_2PI = math.sqrt(2.0 * math.pi)
SQRT_PI = math.sqrt(math.pi)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """Parameters of one run on the interval (a, b) with a = theta_frac * b.

    sigma and theta are derived: sigma**2 = rho * b * log b is the window
    scale, theta**2 = rho * log b sets the zero cutoff b * theta / sigma.
    """

    b: float
    theta_frac: float = 0.5
    rho: float = 3.1
    eta: float = 4.0
    sample_count: int = 2000
    rng_seed: int = 0

    def __post_init__(self):
        if not self.rho > 3:
            raise ConfigError(f"rho must exceed 3, got {self.rho}")
        if not 0 < self.theta_frac < 1:
            raise ConfigError(f"theta_frac must lie in (0, 1), got {self.theta_frac}")
        if not self.b >= 1e4:
            raise ConfigError(f"b must be at least 1e4, got {self.b}")
        if not 1 <= self.eta <= 10:
            raise ConfigError(f"eta must lie in [1, 10], got {self.eta}")
        if self.sample_count < 1:
            raise ConfigError("sample_count must be positive")
        if not 0 <= self.rng_seed < 2**64:
            raise ConfigError("rng_seed must be a 64-bit unsigned integer")
        if not self.a - self.eta * self.sigma > 1:
            raise ConfigError("a - eta*sigma must exceed 1; raise b or lower eta")

    @property
    def log_b(self) -> float:
        return math.log(self.b)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.rho * self.b * self.log_b)

    @property
    def theta(self) -> float:
        return math.sqrt(self.rho * self.log_b)

    @property
    def a(self) -> float:
        return self.theta_frac * self.b

    @property
    def cutoff(self) -> float:
        """Largest zero ordinate any sample needs."""
        return self.b * self.theta / self.sigma

    @property
    def window(self) -> int:
        """Half-width of the integer window in the direct sum."""
        return math.floor(self.eta * self.sigma)

    def level_variance(self) -> float:
        """Variance of s_hat implied by the level-count density: log(b/4 pi sigma) / (2 sigma sqrt(pi))."""
        return math.log(self.b / (4 * math.pi * self.sigma)) / (2 * self.sigma * SQRT_PI)

    def level_sd(self) -> float:
        return math.sqrt(self.level_variance())

    def replace(self, **changes) -> "ExperimentConfig":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class SeriesSample:
    x: float
    s_hat: float
    s_direct: Optional[float] = None
    r_sigma: Optional[float] = None


@dataclass(frozen=True)
class GammaRatioProbe:
    alpha: float
    y: float
    exact_modulus: float
    exact_phase: float
    approx_modulus: float
    approx_phase: float

    @property
    def modulus_error(self) -> float:
        return abs(self.exact_modulus / self.approx_modulus - 1.0)

    @property
    def phase_error(self) -> float:
        d = (self.exact_phase - self.approx_phase + math.pi) % (2 * math.pi) - math.pi
        return abs(d)


def weighted_prime_sum(n: int, sigma: float, eta: float, sieve: Sieve) -> float:
    """(1/(sigma sqrt(2pi))) * sum_{|j| <= eta sigma} n/(n+j) Lambda(n+j) exp(-(j/sigma)^2/2)."""
    h = math.floor(eta * sigma)
    if n - h < 2:
        raise ValueError(f"window [{n - h}, {n + h}] reaches below 2")
    lam = sieve.von_mangoldt(n - h, n + h)
    j = np.arange(-h, h + 1, dtype=float)
    weights = n / (n + j) * np.exp(-0.5 * (j / sigma) ** 2)
    return float(np.dot(weights, lam)) / (sigma * SQRT_2PI)


def s_direct(n: int, cfg: ExperimentConfig, sieve: Sieve) -> float:
    return weighted_prime_sum(int(n), cfg.sigma, cfg.eta, sieve)


# sieve the whole span at once below this many integers
BATCH_SPAN = 1 << 26


def s_direct_many(ns, cfg: ExperimentConfig, sieve: Sieve) -> np.ndarray:
    """s_direct at many integers, sharing one sieve pass when the span is moderate."""
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size == 0:
        return np.zeros(0)
    h = cfg.window
    lo, hi = int(ns.min()) - h, int(ns.max()) + h
    if hi - lo > BATCH_SPAN:
        return np.array([s_direct(int(n), cfg, sieve) for n in ns])
    if lo < 2:
        raise ValueError(f"window [{lo}, {hi}] reaches below 2")
    lam = sieve.von_mangoldt(lo, hi)
    j = np.arange(-h, h + 1, dtype=float)
    kernel = np.exp(-0.5 * (j / cfg.sigma) ** 2)
    out = np.empty(ns.size)
    for i, n in enumerate(ns):
        seg = lam[n - h - lo : n + h + 1 - lo]
        out[i] = np.dot(n / (n + j) * kernel, seg)
    return out / (cfg.sigma * SQRT_2PI)


def zero_sum(x, sigma: float, theta: float, gammas: np.ndarray, chunk: int = 256):
    """1 - (2/sqrt(x)) * sum_{0 < gamma <= x theta/sigma} exp(-(sigma gamma/x)^2/2) cos(gamma log x).

    Vectorised over ``x``; each x uses its own cutoff x * theta / sigma.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    g = np.asarray(gammas, dtype=float)
    out = np.empty_like(x)
    for start in range(0, x.size, chunk):
        xs = x[start : start + chunk, None]
        u = sigma * g[None, :] / xs
        terms = np.exp(-0.5 * u * u) * np.cos(g[None, :] * np.log(xs))
        terms[g[None, :] > xs * theta / sigma] = 0.0
        out[start : start + chunk] = 1.0 - 2.0 * terms.sum(axis=1) / np.sqrt(xs[:, 0])
    return out


def s_hat(x, cfg: ExperimentConfig, table: ZeroTable):
    """Explicit-formula approximation at x (scalar or array), with the scale set to n = x."""
    xs = np.asarray(x, dtype=float)
    table.require(float(np.max(xs)) * cfg.theta / cfg.sigma)
    gammas = table.upto(float(np.max(xs)) * cfg.theta / cfg.sigma)
    out = zero_sum(xs, cfg.sigma, cfg.theta, gammas)
    return float(out[0]) if xs.ndim == 0 else out


def error_budget(cfg: ExperimentConfig) -> tuple[float, float]:
    """The two error terms with unit constants: window truncation and zero cutoff."""
    lb = cfg.log_b
    term_eta = lb / (cfg.eta * math.exp(cfg.eta**2 / 2))
    th = cfg.theta
    # b^{3/2} e^{-theta^2/2} overflows nothing but underflows early; go through logs
    term_theta = math.exp(1.5 * lb + math.log(lb) - math.log(th) - th * th / 2)
    return term_eta, term_theta


def r_sigma(x, cfg: ExperimentConfig, sieve: Sieve):
    """(pi(x + sigma) - pi(x - sigma)) * log(x) / (2 sigma)."""
    return prime_ratio(x, cfg.sigma, sieve)


def prime_ratio(x, sigma: float, sieve: Sieve):
    xs = np.asarray(x, dtype=float)
    if np.any(xs - sigma < 2):
        raise ValueError("x - sigma must be at least 2")
    if xs.ndim == 0:
        return sieve.prime_count_window(float(xs), sigma) * math.log(xs) / (2 * sigma)
    counter = sieve.prime_counter(xs.min() - sigma, xs.max() + sigma)
    return counter.count(xs, sigma) * np.log(xs) / (2 * sigma)


def gamma_ratio_probe(alpha: float, y: float) -> GammaRatioProbe:
    """Compare Gamma(alpha - 1/2 + iy)/Gamma(alpha) with its Stirling simplification."""
    if alpha < 10:
        raise ValueError("alpha must be at least 10")
    if abs(y) > 10 * math.sqrt(alpha):
        raise ValueError("|y| must not exceed 10 sqrt(alpha)")
    log_ratio = complex(loggamma(complex(alpha - 0.5, y)) - loggamma(alpha))
    two_pi = 2 * math.pi
    return GammaRatioProbe(
        alpha=alpha,
        y=y,
        exact_modulus=math.exp(log_ratio.real),
        exact_phase=log_ratio.imag % two_pi,
        approx_modulus=math.exp(-y * y / (2 * (alpha - 0.5))) / math.sqrt(alpha),
        approx_phase=(y * math.log(alpha)) % two_pi,
    )


def sample_points(cfg: ExperimentConfig, count: int | None = None, random: bool = False) -> np.ndarray:
    """Sample abscissae in (a, b): a midpoint grid, or seeded uniform draws (sorted)."""
    count = cfg.sample_count if count is None else count
    if random:
        rng = np.random.Generator(np.random.Philox(key=cfg.rng_seed))
        return np.sort(rng.uniform(cfg.a, cfg.b, size=count))
    step = (cfg.b - cfg.a) / count
    return cfg.a + step * (np.arange(count) + 0.5)


def integer_samples(cfg: ExperimentConfig, count: int, seed: int | None = None) -> np.ndarray:
    """Distinct integers drawn uniformly from (a, b), sorted."""
    rng = np.random.Generator(np.random.Philox(key=cfg.rng_seed if seed is None else seed))
    lo, hi = math.floor(cfg.a) + 1, math.ceil(cfg.b) - 1
    return np.sort(lo + rng.choice(hi - lo + 1, size=count, replace=False))


def series(cfg: ExperimentConfig, table: ZeroTable, xs=None, sieve: Sieve | None = None,
           with_direct: bool = False, with_ratio: bool = False) -> list[SeriesSample]:
    xs = sample_points(cfg) if xs is None else np.asarray(xs, dtype=float)
    sh = np.atleast_1d(s_hat(xs, cfg, table))
    direct = [None] * xs.size
    ratio = [None] * xs.size
    if with_direct or with_ratio:
        if sieve is None:
            raise ValueError("a sieve is required for direct sums or prime ratios")
    if with_direct:
        direct = list(s_direct_many(np.round(xs).astype(np.int64), cfg, sieve))
    if with_ratio:
        ratio = list(np.atleast_1d(r_sigma(xs, cfg, sieve)))
    return [SeriesSample(float(x), float(s), None if d is None else float(d),
                         None if r is None else float(r))
            for x, s, d, r in zip(xs, sh, direct, ratio)]

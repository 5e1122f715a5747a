"""Expected level counts of the zero sum and a random-phase Monte Carlo check.

Writing s_hat(e^t) = 1 - 2 f(t), with

    f(t) = sum_j a_j(t) cos(gamma_j t),
    a_j(t) = exp(-((sigma / e^t) gamma_j)^2 / 2 - t / 2),

the level s_hat = lam corresponds to f = (1 - lam) / 2. Randomising the
phases of the cosines turns f into a nearly Gaussian process whose expected
number of level crossings has a closed form in the amplitude moments
h1 = sum a_j^2 and h2 = sum a_j^2 gamma_j^2.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy import integrate, special

from .explicit import SQRT_PI, ExperimentConfig
from .zeros import ZeroTable

EULER_GAMMA = 0.5772156649015329
MAX_GRID_POINTS = 10**8


class QuadratureError(ArithmeticError):
    def __init__(self, what: str, achieved: float, wanted: float):
        super().__init__(f"{what}: quadrature reached relative error {achieved:.3g}, "
                         f"wanted {wanted:.3g}")
        self.achieved = achieved
        self.wanted = wanted


class ResourceError(MemoryError):
    pass


def fingerprint(cfg: ExperimentConfig) -> str:
    blob = json.dumps(cfg.to_dict(), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(frozen=True)
class LevelDensity:
    lambdas: np.ndarray
    expected_counts: np.ndarray
    form: Literal["closed", "midform"]
    cfg_fingerprint: str


def amplitudes(t, sigma: float, gammas: np.ndarray) -> np.ndarray:
    """a_j(t) for every ordinate; shape ``t.shape + (k,)``."""
    t = np.asarray(t, dtype=float)[..., None]
    u = sigma * np.exp(-t) * gammas
    return np.exp(-0.5 * u * u - 0.5 * t)


@dataclass(frozen=True)
class RandomPhaseModel:
    """g(t) = -c + sum_j a_j(t) cos(gamma_j t + phi_j) on (A, B) = (log a, log b)."""

    gammas: np.ndarray = field(repr=False)
    sigma: float
    level: float
    A: float
    B: float

    @classmethod
    def from_config(cls, cfg: ExperimentConfig, table: ZeroTable, lam: float) -> "RandomPhaseModel":
        table.require(cfg.cutoff)
        return cls(table.upto(cfg.cutoff), cfg.sigma, (1.0 - lam) / 2.0,
                   math.log(cfg.a), math.log(cfg.b))

    @property
    def k(self) -> int:
        return int(self.gammas.size)

    def amplitude(self, t) -> np.ndarray:
        return amplitudes(t, self.sigma, self.gammas)

    def f(self, t, phases=None) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        ph = np.zeros(self.k) if phases is None else np.asarray(phases, dtype=float)
        return (self.amplitude(t) * np.cos(t[..., None] * self.gammas + ph)).sum(axis=-1)

    def g(self, t, phases=None) -> np.ndarray:
        return self.f(t, phases) - self.level

    def grid(self, step: float | None = None) -> np.ndarray:
        gmax = float(self.gammas[-1]) if self.k else 1.0
        step = 1.0 / (20.0 * gmax) if step is None else step
        n = math.ceil((self.B - self.A) / step) + 1
        if n > MAX_GRID_POINTS:
            raise ResourceError(f"crossing scan needs {n} grid points (limit {MAX_GRID_POINTS}); "
                                "use a smaller b or a truncated zero table")
        return np.linspace(self.A, self.B, n)

    def grid_values(self, ts: np.ndarray, phase_matrix: np.ndarray, chunk: int = 2048) -> np.ndarray:
        """g on the grid for several phase vectors at once; shape ``(ts.size, trials)``.

        Uses cos(gt + phi) = cos(gt) cos(phi) - sin(gt) sin(phi), so the
        phase-free factors are built once per grid chunk.
        """
        cphi, sphi = np.cos(phase_matrix), np.sin(phase_matrix)
        out = np.empty((ts.size, phase_matrix.shape[1]))
        for i in range(0, ts.size, chunk):
            t = ts[i : i + chunk]
            amp = self.amplitude(t)
            arg = t[:, None] * self.gammas
            out[i : i + chunk] = (amp * np.cos(arg)) @ cphi - (amp * np.sin(arg)) @ sphi
        return out - self.level

    def roots_from_grid(self, ts: np.ndarray, gs: np.ndarray, phases=None) -> np.ndarray:
        """Refine the sign changes of sampled values ``gs`` into roots by bisection.

        An exact zero on the grid counts as one root.
        """
        exact = np.flatnonzero(gs == 0.0)
        s = np.sign(gs)
        flips = np.flatnonzero(s[:-1] * s[1:] < 0)
        lo, hi = ts[flips].copy(), ts[flips + 1].copy()
        glo = gs[flips].copy()
        tol = 1e-12 * (self.B - self.A)
        while lo.size and np.max(hi - lo) > tol:
            mid = 0.5 * (lo + hi)
            gm = self.g(mid, phases)
            left = np.sign(gm) == np.sign(glo)
            lo = np.where(left, mid, lo)
            glo = np.where(left, gm, glo)
            hi = np.where(left, hi, mid)
        return np.sort(np.concatenate([ts[exact], 0.5 * (lo + hi)]))

    def roots(self, phases=None, step: float | None = None) -> np.ndarray:
        """Zeros of g on (A, B): sign changes on the grid, each refined by bisection."""
        ts = self.grid(step)
        if self.k == 0:
            if self.level == 0:
                raise ValueError("g vanishes identically: empty table at level 1")
            return np.zeros(0)
        ph = np.zeros(self.k) if phases is None else np.asarray(phases, dtype=float)
        gs = self.grid_values(ts, ph[:, None])[:, 0]
        return self.roots_from_grid(ts, gs, ph)


def h_exact(t, cfg: ExperimentConfig, table: ZeroTable):
    """Amplitude moments (h1, h2) = (sum a_j^2, sum a_j^2 gamma_j^2) at t (log scale)."""
    table.require(cfg.cutoff)
    g = table.upto(cfg.cutoff)
    a2 = amplitudes(t, cfg.sigma, g) ** 2
    h1 = a2.sum(axis=-1)
    h2 = (a2 * g * g).sum(axis=-1)
    if np.ndim(h1) == 0:
        return float(h1), float(h2)
    return h1, h2


def h_asymptotic(t_arg, cfg: ExperimentConfig):
    """Asymptotic (h1, h2) at t = log(t_arg), from the Riemann-von Mangoldt density."""
    t_arg = np.asarray(t_arg, dtype=float)
    sigma = cfg.sigma
    ratio = t_arg / (4 * math.pi * sigma)
    if np.any(ratio <= 1):
        raise ValueError("t_arg / (4 pi sigma) must exceed 1")
    L = np.log(ratio)
    h1 = (L - EULER_GAMMA / 2) / (4 * sigma * SQRT_PI)
    h2 = t_arg**2 / (8 * sigma**3 * SQRT_PI) * (L + (2 - EULER_GAMMA) / 2)
    if h1.ndim == 0:
        return float(h1), float(h2)
    return h1, h2


def _quad(func, lo: float, hi: float, what: str, epsrel: float = 1e-8) -> float:
    val, err, info = integrate.quad(func, lo, hi, epsabs=0.0, epsrel=epsrel,
                                    limit=200, full_output=True)[:3]
    achieved = abs(err / val) if val else abs(err)
    if achieved > epsrel and abs(err) > 1e-300:
        raise QuadratureError(what, achieved, epsrel)
    return float(val)


def expected_level_count_closed(lam: float, cfg: ExperimentConfig) -> float:
    """(1/(sqrt 2 pi sigma)) * int_a^b exp(-sigma sqrt(pi) (lam-1)^2 / log(t / 4 pi sigma)) dt."""
    sigma = cfg.sigma
    if cfg.a <= 4 * math.pi * sigma:
        raise ValueError("closed form needs a > 4 pi sigma; increase b")
    d2 = (lam - 1.0) ** 2
    prefactor = 1.0 / (math.sqrt(2.0) * math.pi * sigma)
    if d2 == 0.0:
        return prefactor * (cfg.b - cfg.a)
    s = sigma * SQRT_PI * d2
    four_pi_sigma = 4 * math.pi * sigma
    val = _quad(lambda t: math.exp(-s / math.log(t / four_pi_sigma)), cfg.a, cfg.b,
                "closed-form level count")
    return prefactor * val


def expected_level_count_midform(lam: float, cfg: ExperimentConfig, table: ZeroTable) -> float:
    """(1/pi) * int_A^B sqrt(h2/h1) exp(-c^2/h1) dt with exact moments and c = (1 - lam)/2."""
    table.require(cfg.cutoff)
    g = table.upto(cfg.cutoff)
    c2 = ((1.0 - lam) / 2.0) ** 2
    if g.size == 0:
        return 0.0
    g2 = g * g
    sigma = cfg.sigma

    def integrand(t):
        u = sigma * math.exp(-t) * g
        a2 = np.exp(-u * u - t)
        h1 = a2.sum()
        h2 = a2 @ g2
        return math.sqrt(h2 / h1) * math.exp(-c2 / h1)

    return _quad(integrand, math.log(cfg.a), math.log(cfg.b), "mid-form level count") / math.pi


def level_density(lambdas, cfg: ExperimentConfig, form: str = "closed",
                  table: ZeroTable | None = None) -> LevelDensity:
    lambdas = np.asarray(lambdas, dtype=float)
    if form == "closed":
        vals = [expected_level_count_closed(l, cfg) for l in lambdas]
    elif form == "midform":
        if table is None:
            raise ValueError("the mid form needs a zero table")
        vals = [expected_level_count_midform(l, cfg, table) for l in lambdas]
    else:
        raise ValueError(f"unknown form {form!r}")
    return LevelDensity(lambdas, np.array(vals), form, fingerprint(cfg))


def phase_stream(seed: int, trial: int) -> np.random.Generator:
    """Counter-based generator keyed by (seed, trial); independent of trial order."""
    return np.random.Generator(np.random.Philox(key=(int(seed) % 2**64) + (int(trial) << 64)))


def simulate_crossings(cfg: ExperimentConfig, table: ZeroTable, lam: float, trials: int,
                       seed: int, step: float | None = None) -> tuple[float, float]:
    """Mean and standard error of the number of level-lam crossings under random phases."""
    if trials < 2:
        raise ValueError("trials must be at least 2")
    model = RandomPhaseModel.from_config(cfg, table, lam)
    if model.k == 0:
        if model.level == 0:
            raise ValueError("g vanishes identically: empty table at level 1")
        return 0.0, 0.0
    ts = model.grid(step)
    counts = np.empty(trials)
    batch = max(1, min(trials, int(2e7 // max(ts.size, 1))))
    for first in range(0, trials, batch):
        ids = range(first, min(first + batch, trials))
        phases = np.stack([phase_stream(seed, i).uniform(-math.pi, math.pi, size=model.k)
                           for i in ids], axis=1)
        gs = model.grid_values(ts, phases)
        for col, i in enumerate(ids):
            counts[i] = model.roots_from_grid(ts, gs[:, col], phases[:, col]).size
    return float(counts.mean()), float(counts.std(ddof=1) / math.sqrt(trials))


def bessel_j0(x):
    """Bessel function of the first kind of order zero."""
    return special.j0(x)

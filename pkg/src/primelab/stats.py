"""Regression, histograms, level counts and goodness of fit for sampled series."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate, special

from .explicit import ExperimentConfig, SeriesSample


class DegenerateInputError(ValueError):
    pass


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class FitReport:
    m: float
    r: float
    variance: float
    band_fraction: float
    gof_stat: float
    p_value: float
    n_points: int

    @property
    def ratio(self) -> float:
        return self.m / self.r


@dataclass(frozen=True)
class Histogram:
    counts: np.ndarray
    edges: np.ndarray
    dropped: int = 0

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def linear_fit(points) -> tuple[float, float]:
    """Least-squares slope and Pearson correlation of (x, y) pairs."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
        raise DegenerateInputError("need at least three (x, y) points")
    x, y = pts[:, 0], pts[:, 1]
    dx, dy = x - x.mean(), y - y.mean()
    sxx, syy, sxy = dx @ dx, dy @ dy, dx @ dy
    if sxx == 0:
        raise DegenerateInputError("all abscissae are equal")
    m = sxy / sxx
    r = sxy / math.sqrt(sxx * syy) if syy > 0 else 0.0
    return float(m), float(np.clip(r, -1.0, 1.0))


def normal_variance(m: float, r: float, cfg: ExperimentConfig) -> float:
    """(m/r)^2 * log(b / 4 pi sigma) / (2 sigma sqrt(pi))."""
    if r == 0:
        raise DegenerateInputError("correlation is zero")
    return (m / r) ** 2 * cfg.level_variance()


def empirical_level_counts(series: Sequence[SeriesSample], lambdas) -> list[int]:
    """Adjacent-sample sign changes of s_hat - lam, one count per level."""
    if len(series) < 2:
        raise InsufficientDataError("need at least two samples")
    xs = np.array([s.x for s in series])
    if np.any(np.diff(xs) < 0):
        raise ValueError("series must be sorted by x")
    return level_crossings(np.array([s.s_hat for s in series]), lambdas)


def level_crossings(values, lambdas) -> list[int]:
    v = np.asarray(values, dtype=float)
    out = []
    for lam in np.atleast_1d(lambdas):
        d = np.sign(v - lam)
        out.append(int(np.count_nonzero(d[:-1] * d[1:] < 0)))
    return out


def histogram(values, bin_count: int, range: tuple[float, float]) -> Histogram:
    """Equal-width bins over ``[lo, hi)``; the last bin also takes ``hi``."""
    lo, hi = range
    if bin_count < 1:
        raise ValueError("bin_count must be positive")
    if not hi > lo:
        raise ValueError("histogram range is degenerate")
    v = np.asarray(values, dtype=float)
    inside = (v >= lo) & (v <= hi)
    counts, edges = np.histogram(v[inside], bins=bin_count, range=(lo, hi))
    return Histogram(counts, edges, int(v.size - inside.sum()))


def chi2_sf(stat: float, dof: int) -> float:
    """Survival function of the chi-square law via the regularized upper incomplete gamma."""
    if dof < 1:
        raise ValueError("degrees of freedom must be positive")
    return float(special.gammaincc(dof / 2.0, stat / 2.0))


def _merge_small(observed: np.ndarray, expected: np.ndarray, minimum: float):
    """Fold the sparsest bin into its smaller neighbour until every bin expects ``minimum``."""
    obs, exp = list(observed), list(expected)
    while len(exp) > 1 and min(exp) < minimum:
        i = int(np.argmin(exp))
        if i == 0:
            j = 1
        elif i == len(exp) - 1:
            j = i - 1
        else:
            j = i - 1 if exp[i - 1] < exp[i + 1] else i + 1
        e, o = exp.pop(i), obs.pop(i)
        j -= j > i
        exp[j] += e
        obs[j] += o
    return np.array(obs, dtype=float), np.array(exp, dtype=float)


def chi_square_gof(observed: Histogram, expected_density: Callable[[float], float],
                   fitted_params: int = 0, min_expected: float = 5.0) -> tuple[float, float]:
    """Pearson chi-square of a histogram against a density, and its p-value.

    Expected masses are the density integrated over each bin, rescaled to the
    observed total; sparse bins are merged until each expects ``min_expected``.
    """
    counts = np.asarray(observed.counts, dtype=float)
    total = counts.sum()
    if total < 2 * min_expected:
        raise InsufficientDataError(f"only {int(total)} observations")
    edges = observed.edges
    mass = np.array([integrate.quad(expected_density, lo, hi, epsabs=0, epsrel=1e-10)[0]
                     for lo, hi in zip(edges[:-1], edges[1:])])
    if mass.sum() <= 0:
        raise DegenerateInputError("expected density has no mass on the histogram range")
    expected = mass / mass.sum() * total
    obs, exp = _merge_small(counts, expected, min_expected)
    dof = obs.size - 1 - fitted_params
    if dof < 1:
        raise InsufficientDataError("too few bins remain after merging")
    stat = float(((obs - exp) ** 2 / exp).sum())
    return stat, chi2_sf(stat, dof)


def band_fraction(values, center: float, halfwidth: float) -> float:
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise InsufficientDataError("no values")
    return float(np.mean((v >= center - halfwidth) & (v <= center + halfwidth)))


def normal_pdf(mean: float, variance: float) -> Callable[[float], float]:
    norm = 1.0 / math.sqrt(2 * math.pi * variance)
    return lambda y: norm * math.exp(-((y - mean) ** 2) / (2 * variance))


def fit_report(s_hat_values, r_values, cfg: ExperimentConfig, bin_count: int = 20) -> FitReport:
    """Scatter statistics of (s_hat, R) pairs: slope, correlation, implied variance, fit of R."""
    sh = np.asarray(s_hat_values, dtype=float)
    rv = np.asarray(r_values, dtype=float)
    m, r = linear_fit(np.column_stack([sh, rv]))
    var = normal_variance(m, r, cfg)
    sd = math.sqrt(var)
    hist = histogram(rv, bin_count, (1 - 4 * sd, 1 + 4 * sd))
    stat, p = chi_square_gof(hist, normal_pdf(1.0, var))
    band = band_fraction(sh, 1.0, 2 * cfg.level_sd())
    return FitReport(m, r, var, band, stat, p, int(sh.size))

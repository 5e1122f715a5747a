"""Invariant suite behind ``primelab validate``.

Each check returns (passed, detail). Checks that need zeros above the
table's reach fail by name instead of aborting the suite.
"""
from __future__ import annotations

import math
import time

import numpy as np
from scipy import integrate

from . import explicit, kacdist, sieve, stats, zeros
from .explicit import ExperimentConfig

SCALE_B = 1e7
MC_B = 1e5


def _trial_division_lambda(m: int) -> float:
    if m < 2:
        return 0.0
    for p in range(2, math.isqrt(m) + 1):
        if m % p == 0:
            while m % p == 0:
                m //= p
            return math.log(p) if m == 1 else 0.0
    return math.log(m)


def check_sieve_oracle(limit: int = 10_000):
    sv = sieve.Sieve(limit)
    got = sv.von_mangoldt(0, limit)
    want = np.array([_trial_division_lambda(m) for m in range(limit + 1)])
    bad = np.flatnonzero(got != want)
    return bad.size == 0, f"{bad.size} mismatches for m <= {limit}"


def check_psi_ratio(limit: int = 10**6):
    ratio = sieve.chebyshev_psi(limit) / limit
    return 0.995 <= ratio <= 1.005, f"psi({limit})/{limit} = {ratio:.6f}"


def check_first_zero(table):
    g = float(table.heights[0])
    return abs(g - 14.134725) <= 1e-3, f"first ordinate {g}"


def check_rvm(table, top: float, points: int = 100):
    grid = np.linspace(20.0, top, points)
    counts = np.searchsorted(table.heights, grid, side="right")
    dev = np.abs(counts - np.array([zeros.rvm_asymptotic(x) for x in grid]))
    return bool(dev.max() <= 3), f"max |N - RvM| = {dev.max():.3f} up to {top:.1f}"


def check_bessel_identity(n: int = 11):
    worst = 0.0
    phi = np.linspace(-math.pi, math.pi, 257)[:-1]
    for x in np.linspace(0, 2, n):
        for y in np.linspace(0, 2, n):
            avg = np.mean(np.exp(1j * (x * np.cos(0.7 + phi) - y * np.sin(0.7 + phi))))
            worst = max(worst, abs(avg - kacdist.bessel_j0(math.hypot(x, y))))
    return worst <= 1e-8, f"max deviation {worst:.2e}"


def check_bessel_log():
    xs = np.linspace(1e-3, 0.3, 300, endpoint=False)
    dev = np.abs(np.log(kacdist.bessel_j0(xs)) + xs**2 / 4) - xs**4
    return bool(np.all(dev <= 0)), f"max |log J0 + x^2/4| - x^4 = {dev.max():.2e}"


def check_amplitude_bound(cfg: ExperimentConfig, table, probes: int = 10_000, seed: int = 7):
    g = table.upto(cfg.cutoff)
    rng = np.random.Generator(np.random.Philox(key=seed))
    j = rng.integers(0, g.size, probes)
    t = rng.uniform(0, math.log(cfg.b), probes)
    a = np.exp(-0.5 * (cfg.sigma * np.exp(-t) * g[j]) ** 2 - 0.5 * t)
    b1 = (2 * math.e) ** -0.25 / np.sqrt(cfg.sigma * g[j])
    b2 = (cfg.b * math.log(cfg.b)) ** -0.25
    ok = bool(np.all(a <= b1) and np.all(a < b2))
    return ok, f"max a/bound = {np.max(a / b1):.4f}"


def check_h_agreement(cfg: ExperimentConfig, table):
    worst = 0.0
    for x in (cfg.a, (cfg.a + cfg.b) / 2, cfg.b * (1 - 1e-6)):
        e1, e2 = kacdist.h_exact(math.log(x), cfg, table)
        s1, s2 = kacdist.h_asymptotic(x, cfg)
        worst = max(worst, abs(e1 / s1 - 1), abs(e2 / s2 - 1))
    return worst <= 0.10, f"max relative error {worst:.4f}"


def check_gamma_modulus():
    worst = 0.0
    for alpha in (1e2, 1e3, 1e4):
        for y in np.linspace(-math.sqrt(alpha), math.sqrt(alpha), 21):
            p = explicit.gamma_ratio_probe(alpha, float(y))
            worst = max(worst, p.modulus_error * alpha)
    return worst <= 10, f"max alpha * modulus error = {worst:.3f}"


def check_gamma_phase():
    # the phase error grows like |y|/alpha, so O(1/alpha) holds for bounded y only
    worst = 0.0
    for alpha in (1e2, 1e3, 1e4):
        for y in np.linspace(-1.0, 1.0, 21):
            p = explicit.gamma_ratio_probe(alpha, float(y))
            worst = max(worst, p.phase_error * alpha)
    return worst <= 10, f"max alpha * phase error (|y| <= 1) = {worst:.3f}"


def check_mc(table, trials: int):
    cfg = ExperimentConfig(MC_B)
    sd = cfg.level_sd()
    worst = []
    ok = True
    for k in (0, 1, -1, 2, -2):
        lam = 1 + k * sd
        mean, se = kacdist.simulate_crossings(cfg, table, lam, trials, seed=42)
        mid = kacdist.expected_level_count_midform(lam, cfg, table)
        ok &= abs(mean - mid) <= max(3 * se, 0.1 * mid)
        worst.append(f"{k:+d}sd: {mean:.3f}+-{se:.3f} vs {mid:.3f}")
    return bool(ok), "; ".join(worst)


def check_distribution(cfg: ExperimentConfig, table, samples: int):
    xs = explicit.sample_points(cfg, samples)
    sh = explicit.s_hat(xs, cfg, table)
    var = cfg.level_variance()
    emp = float(np.var(sh))
    band = stats.band_fraction(sh, 1.0, 2 * math.sqrt(var))
    return ({"variance": abs(emp / var - 1) <= 0.3, "band": 0.90 <= band <= 0.99},
            f"variance ratio {emp / var:.3f}, band fraction {band:.4f}")


def check_agreement(cfg: ExperimentConfig, table, count: int = 50):
    sv = sieve.Sieve(math.ceil(cfg.b + cfg.eta * cfg.sigma) + 2)
    ns = explicit.integer_samples(cfg, count, seed=2024)
    d = np.array([explicit.s_direct(n, cfg, sv) for n in ns])
    h = explicit.s_hat(ns.astype(float), cfg, table)
    r = float(np.corrcoef(d, h)[0, 1])
    mad = float(np.mean(np.abs(d - h)))
    return r >= 0.95 and mad <= cfg.level_sd() / 2, f"corr {r:.4f}, mean |S - S_hat| {mad:.2e}"


def run_suite(zeros_path, quick: bool = False) -> dict:
    cfg = ExperimentConfig(SCALE_B)
    started = time.time()
    checks = []

    def record(name, fn, *args):
        t0 = time.time()
        try:
            passed, detail = fn(*args)
        except (zeros.ZeroTableError, ValueError, ArithmeticError) as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
        checks.append({"name": name, "passed": bool(passed), "detail": detail,
                       "seconds": round(time.time() - t0, 3)})

    table = zeros.load_zeros(zeros_path, check=False)
    record("sieve.trial_division", check_sieve_oracle)
    record("sieve.psi_ratio", check_psi_ratio)
    record("zeros.first_zero", check_first_zero, table)
    record("zeros.rvm_agreement", check_rvm, table, cfg.cutoff)
    record("bessel.phase_average", check_bessel_identity)
    record("bessel.log_expansion", check_bessel_log)
    record("kac.amplitude_bound", check_amplitude_bound, cfg, table)
    record("moments.h_agreement", check_h_agreement, cfg, table)
    record("gamma.modulus", check_gamma_modulus)
    record("gamma.phase_bounded_y", check_gamma_phase)
    record("explicit.agreement", check_agreement, cfg, table)
    record("kac.monte_carlo", check_mc, table, 60 if quick else 200)

    t0 = time.time()
    try:
        flags, detail = check_distribution(cfg, table, 500 if quick else 2000)
    except (zeros.ZeroTableError, ValueError) as exc:
        flags, detail = {"variance": False, "band": False}, f"{type(exc).__name__}: {exc}"
    for key, name in (("variance", "series.variance_match"), ("band", "series.band_fraction")):
        checks.append({"name": name, "passed": bool(flags[key]), "detail": detail,
                       "seconds": round(time.time() - t0, 3)})
    return {"zeros": str(zeros_path), "b": SCALE_B, "quick": quick,
            "seconds": round(time.time() - started, 3), "checks": checks}

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primelab.explicit import (ConfigError, ExperimentConfig, error_budget, gamma_ratio_probe,
                               prime_ratio, r_sigma, s_direct, s_hat, weighted_prime_sum, zero_sum)
from primelab.sieve import Sieve
from primelab.zeros import InsufficientTableError, ZeroTable

from conftest import trial_division_lambda

G1 = 14.134725141734693


def test_config_derived_values():
    cfg = ExperimentConfig(1e7)
    assert cfg.sigma**2 == pytest.approx(3.1 * 1e7 * math.log(1e7), rel=1e-12)
    assert cfg.theta**2 == pytest.approx(3.1 * math.log(1e7), rel=1e-12)
    assert cfg.a == 5e6
    # b theta / sigma collapses to sqrt(b)
    assert cfg.cutoff == pytest.approx(math.sqrt(1e7), rel=1e-12)


@pytest.mark.parametrize("kwargs", [
    dict(b=1e7, rho=3.0), dict(b=1e7, theta_frac=1.0), dict(b=1e7, theta_frac=0.0),
    dict(b=9e3), dict(b=1e7, eta=0.5), dict(b=1e7, eta=11), dict(b=1e7, sample_count=0),
    dict(b=1e4, theta_frac=0.05),
])
def test_config_rejects(kwargs):
    with pytest.raises(ConfigError):
        ExperimentConfig(**kwargs)


def test_config_dict_round_trip():
    cfg = ExperimentConfig(1e6, theta_frac=0.4, rho=3.5, eta=3, sample_count=10, rng_seed=9)
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"b": 1e6, "bogus": 1})


def test_direct_sum_empty_support():
    # 118..120 holds no prime power
    assert weighted_prime_sum(119, 1.0, 1.0, Sieve(200)) == 0.0


def test_direct_sum_single_term():
    val = weighted_prime_sum(101, 10.0, 0.09, Sieve(200))
    assert val == pytest.approx(0.184116670331609063, rel=1e-14)


def test_direct_sum_matches_naive_loop():
    n, sigma, eta = 3001, 37.5, 3.0
    h = math.floor(eta * sigma)
    naive = sum(n / (n + j) * trial_division_lambda(n + j) * math.exp(-0.5 * (j / sigma) ** 2)
                for j in range(-h, h + 1)) / (sigma * math.sqrt(2 * math.pi))
    assert weighted_prime_sum(n, sigma, eta, Sieve(5000)) == pytest.approx(naive, rel=1e-13)


def test_direct_sum_near_one():
    cfg = ExperimentConfig(1e6, eta=4)
    sv = Sieve(math.ceil(1e6 + 3 + cfg.eta * cfg.sigma) + 1)
    assert abs(s_direct(10**6 + 3, cfg, sv) - 1) <= 2e-2


def test_direct_window_underflow():
    with pytest.raises(ValueError):
        weighted_prime_sum(5, 10.0, 1.0, Sieve(100))


def test_zero_sum_empty_table():
    xs = np.linspace(1e4, 2e4, 7)
    np.testing.assert_array_equal(zero_sum(xs, 100.0, 5.0, np.array([])), np.ones(7))


def test_zero_sum_vanishing_cosine():
    # gamma1 log x = pi/2 + 2 pi * 3
    x = math.exp((math.pi / 2 + 6 * math.pi) / G1)
    val = zero_sum(x, 0.01, 100.0, np.array([G1]))[0]
    assert abs(val - 1) < 1e-15


def _loop_oracle(x, sigma, theta, gammas):
    """Symmetric +-gamma sum written out term by term."""
    total = 0.0
    for g in gammas:
        for sg in (g, -g):
            if abs(sg) <= x * theta / sigma:
                total += math.exp(-0.5 * (sigma * sg / x) ** 2) * math.cos(sg * math.log(x))
    return 1 - total / math.sqrt(x)


def test_s_hat_matches_loop(table):
    cfg = ExperimentConfig(1e7)
    x = 7.5e6
    gammas = table.upto(cfg.cutoff)
    val = s_hat(x, cfg, table)
    assert val == pytest.approx(_loop_oracle(x, cfg.sigma, cfg.theta, gammas), abs=1e-12)
    assert abs(val - 1) <= 5 * cfg.level_sd()


@settings(max_examples=30, deadline=None)
@given(x=st.floats(2e3, 5e4), sigma=st.floats(5.0, 500.0), theta=st.floats(1.0, 8.0))
def test_pairing_identity(table, x, sigma, theta):
    g = table.heights[:200]
    got = zero_sum(x, sigma, theta, g)[0]
    assert got == pytest.approx(_loop_oracle(x, sigma, theta, g), abs=1e-12)


def test_s_hat_array_matches_scalar(table):
    cfg = ExperimentConfig(1e6)
    xs = np.linspace(cfg.a, cfg.b, 9)
    arr = s_hat(xs, cfg, table)
    np.testing.assert_allclose(arr, [s_hat(x, cfg, table) for x in xs], rtol=0, atol=1e-13)


def test_s_hat_needs_table():
    cfg = ExperimentConfig(1e7)
    short = ZeroTable(np.array([G1, 21.022039638771555]))
    with pytest.raises(InsufficientTableError):
        s_hat(7e6, cfg, short)


def test_error_budget_values():
    te, tt = error_budget(ExperimentConfig(1e9, eta=4))
    assert te == pytest.approx(1.73797030409609737e-3, rel=1e-12)
    assert tt == pytest.approx(0.917377854706761104, rel=1e-10)


def test_error_budget_monotone_in_eta():
    vals = [error_budget(ExperimentConfig(1e9, eta=e))[0] for e in np.linspace(1, 10, 50)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_r_sigma_values():
    sv = Sieve(2_000_000)
    assert prime_ratio(30, 0.5, sv) == 0.0
    assert prime_ratio(100, 10, sv) == pytest.approx(1.15129254649702284, rel=1e-14)
    assert abs(prime_ratio(1e6, 1e4, sv) - 1) <= 0.15


def test_r_sigma_vector_matches_scalar():
    cfg = ExperimentConfig(1e6)
    sv = Sieve(2_000_000)
    xs = np.linspace(cfg.a, cfg.b, 11)
    np.testing.assert_allclose(r_sigma(xs, cfg, sv), [r_sigma(x, cfg, sv) for x in xs], rtol=1e-15)


def test_gamma_probe_at_zero():
    p = gamma_ratio_probe(100, 0.0)
    assert p.exact_modulus == pytest.approx(0.100376963429774052, rel=1e-13)
    assert p.approx_modulus == pytest.approx(0.1, rel=1e-15)
    assert p.exact_phase == 0.0 and p.approx_phase == 0.0
    assert p.modulus_error <= 1 / 100


@pytest.mark.parametrize("alpha", [10.0, 123.4, 1e4, 1e6])
def test_gamma_probe_real_axis(alpha):
    p = gamma_ratio_probe(alpha, 0.0)
    assert p.exact_phase == 0.0 == p.approx_phase


def test_gamma_probe_large_alpha():
    p = gamma_ratio_probe(1e4, 50.0)
    assert p.modulus_error <= 10 / 1e4


def test_gamma_probe_matches_mpmath():
    import mpmath as mp
    mp.mp.dps = 40
    alpha, y = 2500.0, 31.0
    ref = mp.gamma(mp.mpc(alpha - 0.5, y)) / mp.gamma(alpha)
    p = gamma_ratio_probe(alpha, y)
    assert p.exact_modulus == pytest.approx(float(abs(ref)), rel=1e-11)
    want = float(mp.arg(ref)) % (2 * math.pi)
    assert abs(p.exact_phase - want) < 1e-8 or abs(abs(p.exact_phase - want) - 2 * math.pi) < 1e-8


def test_gamma_modulus_error_halves():
    for frac in (0.0, 0.5, 1.0):
        errs = [gamma_ratio_probe(a, frac * math.sqrt(a)).modulus_error for a in (1e2, 2e2, 4e2, 8e2)]
        assert all(e2 <= e1 / 2 * 1.01 for e1, e2 in zip(errs, errs[1:]))


def test_gamma_probe_domain():
    with pytest.raises(ValueError):
        gamma_ratio_probe(5, 0)
    with pytest.raises(ValueError):
        gamma_ratio_probe(100, 101)

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from primelab.sieve import CapacityError, Sieve, chebyshev_psi, lambda_window, prime_count_window

from conftest import is_prime, trial_division_lambda


def test_prime_power_values():
    assert lambda_window(8, 0)[0] == pytest.approx(math.log(2), abs=1e-15)
    assert lambda_window(12, 0)[0] == 0.0
    assert lambda_window(9, 0)[0] == pytest.approx(math.log(3))
    assert lambda_window(97, 0)[0] == pytest.approx(math.log(97))


def test_window_around_100():
    w = lambda_window(100, 10)
    nonzero = {int(m): v for m, v in zip(w.integers, w.values) if v}
    assert set(nonzero) == {97, 101, 103, 107, 109}
    for m, v in nonzero.items():
        assert v == pytest.approx(math.log(m), rel=1e-15)


def test_window_low_end_is_zero():
    w = lambda_window(3, 3)
    assert w[-3] == 0.0 and w[-2] == 0.0  # integers 0 and 1
    assert w[-1] == pytest.approx(math.log(2))
    assert w.total() == pytest.approx(sum(trial_division_lambda(m) for m in range(7)))


def test_agrees_with_trial_division_to_10k():
    got = Sieve(10_000).von_mangoldt(0, 10_000)
    want = np.array([trial_division_lambda(m) for m in range(10_001)])
    np.testing.assert_array_equal(got, want)


def test_psi_ratio_at_one_million():
    assert 0.995 <= chebyshev_psi(10**6) / 10**6 <= 1.005


def test_window_sum_is_psi_difference():
    n, h = 5000, 137
    w = lambda_window(n, h)
    assert w.total() == pytest.approx(chebyshev_psi(n + h) - chebyshev_psi(n - h - 1), rel=1e-12)


@pytest.mark.parametrize("x, sigma, expected", [
    (100, 10, 5),
    (10, 0.5, 0),
    # brute force gives 30 primes in (900, 1100]
    (1000, 100, 30),
    (13, 0.5, 1),
])
def test_prime_count_window(x, sigma, expected):
    assert prime_count_window(x, sigma) == expected
    brute = sum(1 for m in range(math.floor(x - sigma) + 1, math.floor(x + sigma) + 1) if is_prime(m))
    assert brute == expected


def test_half_open_convention():
    # (7, 11]: 11 in, 7 out
    assert prime_count_window(9, 2) == 1


def test_capacity_error_names_limit():
    sv = Sieve(1000)
    with pytest.raises(CapacityError, match="1000"):
        sv.lambda_window(995, 10)
    with pytest.raises(CapacityError):
        sv.prime_count_window(995, 10)


def test_window_below_zero_rejected():
    with pytest.raises(ValueError):
        Sieve(100).lambda_window(3, 5)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(20, 20_000), h=st.integers(1, 300), seg=st.integers(16, 200))
def test_segment_boundaries_do_not_matter(n, h, seg):
    if n - h < 0:
        return
    whole = Sieve(25_000, segment_len=1 << 20).lambda_window(n, h).values
    pieces = Sieve(25_000, segment_len=seg).lambda_window(n, h).values
    np.testing.assert_array_equal(whole, pieces)


@settings(max_examples=40, deadline=None)
@given(x=st.floats(200, 9000), sigma=st.floats(0.3, 150))
def test_prime_count_matches_window_primes(x, sigma):
    sv = Sieve(10_000)
    w = sv.lambda_window(round(x), math.ceil(sigma) + 1)
    primes = [int(m) for m, v in zip(w.integers, w.values)
              if v and is_prime(int(m)) and x - sigma < m <= x + sigma]
    assert sv.prime_count_window(x, sigma) == len(primes)


def test_prime_counter_matches_scalar_counts():
    sv = Sieve(50_000)
    xs = np.linspace(1000, 40_000, 37)
    counter = sv.prime_counter(xs.min() - 250, xs.max() + 250)
    np.testing.assert_array_equal(counter.count(xs, 250.0),
                                  [sv.prime_count_window(x, 250.0) for x in xs])

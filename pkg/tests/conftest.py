import math
from pathlib import Path

import pytest

from primelab.zeros import load_zeros

ROOT = Path(__file__).resolve().parents[1]
ZEROS_PATH = ROOT / "data" / "zeros_33k.txt"


def trial_division_lambda(m: int) -> float:
    """Von Mangoldt by trial division; independent of the sieve."""
    if m < 2:
        return 0.0
    for p in range(2, math.isqrt(m) + 1):
        if m % p == 0:
            while m % p == 0:
                m //= p
            return math.log(p) if m == 1 else 0.0
    return math.log(m)


def is_prime(m: int) -> bool:
    return m >= 2 and all(m % p for p in range(2, math.isqrt(m) + 1))


@pytest.fixture(scope="session")
def zeros_path():
    if not ZEROS_PATH.exists():
        pytest.fail(f"{ZEROS_PATH} missing; run scripts/make_zero_table.py")
    return ZEROS_PATH


@pytest.fixture(scope="session")
def table(zeros_path):
    return load_zeros(zeros_path)

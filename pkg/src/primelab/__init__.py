"""Clusters and deserts of primes: explicit-formula sums over zeta zeros and their level statistics."""

__version__ = "0.1.0"

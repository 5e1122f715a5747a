# %% [markdown]
# # Primes and zeta zeros
#
# Two pieces of ground truth feed everything else: the von Mangoldt function
# from a segmented sieve, and a table of ordinates of zeta zeros.

# %%
import numpy as np

from primelab.sieve import Sieve, chebyshev_psi, lambda_window, prime_count_window
from primelab.zeros import load_zeros, rvm_asymptotic, zero_counting_N
from _paths import ZEROS

# %% [markdown]
# A window of Lambda values around 100. Prime powers carry log p, everything
# else is zero.

# %%
w = lambda_window(100, 5)
for m, v in zip(w.integers, w.values):
    print(m, round(float(v), 4))

# %% [markdown]
# Chebyshev's psi(x)/x drifts toward 1, the prime number theorem in action.

# %%
for x in (10**4, 10**5, 10**6, 10**7):
    print(f"psi({x:>8}) / x = {chebyshev_psi(x) / x:.5f}")

# %%
print("primes in (900, 1100]:", prime_count_window(1000, 100))
sv = Sieve(10**8 + 10**5)
counter = sv.prime_counter(10**8 - 10**5, 10**8 + 10**5)
print("primes within 1000 of 1e8:", counter.count(1e8, 1000))

# %% [markdown]
# The zero table agrees with the Riemann-von Mangoldt main term to within a
# couple of zeros at every height.

# %%
table = load_zeros(ZEROS)
print(len(table), "ordinates up to", table.max_height)
print("first three:", table.heights[:3])
for x in (100.0, 1000.0, 10000.0, 30000.0):
    print(f"N({x:g}) = {zero_counting_N(x, table)}, main term {rvm_asymptotic(x):.2f}")
grid = np.linspace(20, table.max_height, 200)
dev = np.searchsorted(table.heights, grid) - np.array([rvm_asymptotic(x) for x in grid])
print("largest deviation on a 200-point grid:", np.abs(dev).max().round(3))

# %% [markdown]
# # How often does the sum cross a level?
#
# Treating the phases gamma*log x as independent uniform angles turns the
# zero-side sum into a random trigonometric series. The Kac-Rice formula then
# predicts how many times it crosses a level lambda. This script compares
# three numbers at a small scale: a closed form, an integral over exact
# amplitude moments, and a Monte Carlo count over random phases.

# %%
import numpy as np

from primelab.explicit import ExperimentConfig
from primelab.kacdist import (expected_level_count_closed, expected_level_count_midform,
                              h_asymptotic, h_exact, simulate_crossings)
from primelab.zeros import load_zeros
from _paths import ZEROS

cfg = ExperimentConfig(b=1e5)
table = load_zeros(ZEROS)
sd = cfg.level_sd()

# %%
print("level      closed   moments   Monte Carlo (200 trials)")
for k in (-2, -1, 0, 1, 2):
    lam = 1 + k * sd
    mean, err = simulate_crossings(cfg, table, lam, trials=200, seed=42)
    print(f"1 {k:+d} sd   {expected_level_count_closed(lam, cfg):7.3f}  "
          f"{expected_level_count_midform(lam, cfg, table):7.3f}   {mean:.3f} +- {err:.3f}")

# %% [markdown]
# The closed form relies on asymptotic moments, which converge slowly in
# log b. Comparing them to the exact moments shows where the gap comes from.

# %%
big = ExperimentConfig(b=1e7)
for x in (big.a, big.b):
    exact = h_exact(np.log(x), big, table)
    approx = h_asymptotic(x, big)
    print(f"x = {x:.3g}: h1 {exact[0]:.4e} vs {approx[0]:.4e}, h2 {exact[1]:.4e} vs {approx[1]:.4e}")

# %% [markdown]
# # Prime density against the zero-side sum
#
# R(x) compares the number of primes within sigma of x with the prime number
# theorem's prediction. Plotting it against the zero-side sum gives a tight
# linear cloud, and the ratio of slope to correlation pins down the variance
# of R. Sieving to 1e8 takes a few seconds.

# %%
import math

from primelab.explicit import ExperimentConfig, r_sigma, s_hat, sample_points
from primelab.sieve import Sieve
from primelab.stats import fit_report
from primelab.zeros import load_zeros
from _paths import ZEROS

cfg = ExperimentConfig(b=1e8, sample_count=2005)
table = load_zeros(ZEROS, max_height=cfg.cutoff)
sieve = Sieve(math.ceil(cfg.b + cfg.sigma) + 2)
xs = sample_points(cfg)
sh = s_hat(xs, cfg, table)
rs = r_sigma(xs, cfg, sieve)

# %%
rep = fit_report(sh, rs, cfg)
print(f"slope m = {rep.m:.4f}, correlation r = {rep.r:.4f}, m/r = {rep.ratio:.4f}")
print(f"implied variance of R: {rep.variance:.3e}")
print(f"chi-square {rep.gof_stat:.2f}, p-value {rep.p_value:.4f} on {rep.n_points} points")

# %% [markdown]
# # Where do prior samples live?
#
# Draw from a 100-dimensional standard normal and look at the lengths.
# Almost nothing lands near the origin, even though the density peaks there.

# %%
import numpy as np

from latentprior import PriorSpec, norm_approx_params, norm_summary, sample

normal = sample(PriorSpec("normal", 100), 10_000, seed=7)
r = normal.norms()
r.mean(), r.std()          # about 10 and 0.70
r.min()                    # nowhere near 0

# %% [markdown]
# The CLT approximation: with mu and sigma^2 the mean and variance of one
# squared coordinate, ||Z|| is roughly N(sqrt(D mu), sigma^2 / (4 mu)).
# For the normal prior mu = 1 and sigma^2 = 2, so the variance is 1/2.

# %%
norm_approx_params(PriorSpec("normal", 100))     # (10.0, 0.5)
norm_approx_params(PriorSpec("uniform", 100))    # (sqrt(100/3), 1/15)

# %%
# The spread does not grow with D, only the radius does.
for D in (2, 10, 100, 1000):
    rr = sample(PriorSpec("normal", D), 10_000, seed=7).norms()
    print(f"D={D:5d}  mean={rr.mean():8.3f}  std={rr.std():.3f}")

# %% [markdown]
# The Cauchy prior is different: no moments, no shell.

# %%
for D in (2, 10, 100, 1000):
    rr = sample(PriorSpec("cauchy", D), 10_000, seed=7).norms()
    med, p99 = np.percentile(rr, [50, 99])
    print(f"D={D:5d}  median={med:12.1f}  p99/median={p99 / med:6.1f}")

# %%
# A text histogram of the normal norms, straight from norm_summary.
summary = norm_summary(normal, bins=20)
top = max(d for _, d in summary.histogram)
for center, density in summary.histogram:
    print(f"{center:6.2f} {'#' * int(40 * density / top)}")

# %% [markdown]
# `latentprior figure1 -o figure1/` writes the same histograms as CSV for
# normal, uniform and Cauchy priors at D = 2, 10, 100, 1000.

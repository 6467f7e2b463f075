# %% [markdown]
# # Five ways to walk between two latent codes
#
# A good interpolation between two prior draws should produce points that
# look like prior draws themselves.  Linear interpolation fails that test for
# the normal prior: the midpoint of two independent N(0, I) vectors is
# N(0, I/2), so its norm is about sqrt(D/2) instead of sqrt(D).

# %%
import math

import numpy as np

from latentprior import (InterpolationScheme, PriorSpec, chi_norm_transform,
                         interpolation_path, property4_audit, sample)

prior = PriorSpec("normal", 100)
x1, x2 = sample(prior, 2, seed=3).data

schemes = {
    "linear": InterpolationScheme("linear"),
    "spherical_linear": InterpolationScheme("spherical_linear"),
    "normalized": InterpolationScheme("normalized"),
    "cauchy_linear": InterpolationScheme("cauchy_linear", prior),
    "spherical_cauchy_linear": InterpolationScheme("spherical_cauchy_linear", prior),
}

lams = np.linspace(0, 1, 11)
for name, scheme in schemes.items():
    path = interpolation_path(scheme, x1, x2, lams)
    norms = np.linalg.norm(path.points, axis=1)
    print(f"{name:24s}", " ".join(f"{v:5.2f}" for v in norms))

# %% [markdown]
# Only linear interpolation dips towards sqrt(50) = 7.07 in the middle.
#
# The Cauchy trick: map each coordinate through CDF_C^-1 o CDF_Z, interpolate
# linearly there (Cauchy is closed under convex combinations), and map back.

# %%
c = sample(PriorSpec("cauchy", 100), 2, seed=3).data
mix = 0.3 * c[0] + 0.7 * c[1]          # still Cauchy(0, 1) per coordinate

# %%
# The spherical variant does the same to the norm via the chi law.
chi_norm_transform(100, np.array([8.0, 9.97, 12.0]))    # median maps to 0

# %% [markdown]
# Audits: KS tests on ten coordinates plus the norm, at five values of lambda.

# %%
grid = [0.1, 0.25, 0.5, 0.75, 0.9]
for name in ("linear", "normalized", "cauchy_linear"):
    report = property4_audit(schemes[name], prior, grid, n=10_000, seed=7)
    worst = max(p.coordinate_ks.statistic for p in report.per_lambda)
    print(f"{name:14s} pass={report.overall_pass}  worst coordinate KS={worst:.4f}")

# %%
mid = property4_audit(schemes["linear"], prior, [0.5], n=10_000, seed=7).per_lambda[0]
mid.mean_norm, math.sqrt(50)

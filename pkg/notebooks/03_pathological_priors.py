# %% [markdown]
# # Priors with holes
#
# A sparse prior zeroes a random D-K subset of coordinates per sample; a
# subspace prior always zeroes the last D-K.  A model trained on either has
# never seen a dense code, and a dense test code also has the wrong length
# unless it is rescaled by sqrt(K/D).

# %%
import math

import numpy as np

from latentprior import Modifier, PriorSpec, dense_test_batch, sample

D, K = 100, 50
sparse = sample(PriorSpec("normal", D, Modifier("sparse", K)), 10_000, seed=7)
(sparse.data == 0).sum(axis=1)[:5]     # exactly 50 zeros in every row
sparse.norms().mean(), math.sqrt(K)

# %%
sub = sample(PriorSpec("normal", D, Modifier("subspace", K)), 10_000, seed=7)
np.abs(sub.data[:, K:]).max()          # 0.0

# %%
corrected = PriorSpec("normal", D, Modifier("sparse", K), scale_correction=True)
dense = dense_test_batch(corrected, 10_000, seed=8)
dense.scale, dense.norms().mean()      # 0.707..., close to the sparse norms

# %% [markdown]
# The other two odd priors: the unit sphere and the corners of the cube.

# %%
sphere = sample(PriorSpec("sphere_uniform", 30), 5, seed=1)
sphere.norms()

corners = sample(PriorSpec("discrete_corners", 8), 3, seed=1)
corners.data

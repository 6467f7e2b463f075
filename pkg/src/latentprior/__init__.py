"""Latent-space priors and distribution-preserving interpolations.

Normal and uniform priors concentrate their mass near a sphere, so linear
interpolation between two draws passes through regions the prior almost
never produces.  This package provides the priors (including the Cauchy
prior, which is closed under convex combination), five interpolation
schemes, and KS-based audits of whether interpolated points are distributed
like the prior.
"""
from .errors import (AntiparallelError, ConvergenceError, DimensionMismatchError,
                     DomainError, UnsupportedFamilyError, ZeroVectorError)
from .interp import (InterpolationPath, InterpolationScheme, Kind, cauchy_linear,
                     chi_median, chi_norm_transform, chi_norm_transform_inv,
                     from_cauchy, interpolation_path, linear, multi_point_combination,
                     normalized, spherical_cauchy_linear, spherical_linear, to_cauchy)
from .priors import (Family, Modifier, PriorSpec, SampleBatch, coordinate_cdf,
                     coordinate_quantile, dense_test_batch, norm_approx_params,
                     norm_cdf, norm_cdf_is_exact, sample, scale_batch)
from .stats import (KSResult, NormSummary, Property4Report, ks_one_sample,
                    ks_two_sample, norm_summary, property4_audit,
                    sphere_projection_cdf)

__version__ = "0.1.0"

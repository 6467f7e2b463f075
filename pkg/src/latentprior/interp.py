"""
Interpolation schemes between latent points.

All functions take endpoints as arrays whose last axis is the latent
dimension, so a single pair of D-vectors and a stack of ``n`` pairs
(shape ``(n, D)``) go through the same code.  ``lam`` is a scalar in [0, 1].

The two composed schemes map points into a space where a Cauchy variable
lives, interpolate linearly there and map back:

* ``cauchy_linear`` does this per coordinate with
  ``to_cauchy = CDF_C^-1 o CDF_Z`` and ``from_cauchy`` its inverse;
* ``spherical_cauchy_linear`` slerps directions and moves the norm through
  :func:`chi_norm_transform` / :func:`chi_norm_transform_inv` (normal prior).
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .errors import (AntiparallelError, DimensionMismatchError, DomainError,
                     UnsupportedFamilyError, ZeroVectorError)
from .priors import (COORDINATE_FAMILIES, SQRT2, Family, PriorSpec,
                     _cauchy_to_signed, _signed_to_cauchy)
from .specfun import (_gamma_inv, _gamma_pq, erf, erf_inv, erfc, erfc_inv,
                      DEFAULT_PRECISION)

__all__ = [
    "Kind",
    "InterpolationScheme",
    "InterpolationPath",
    "linear",
    "spherical_linear",
    "normalized",
    "cauchy_linear",
    "spherical_cauchy_linear",
    "to_cauchy",
    "from_cauchy",
    "chi_median",
    "chi_norm_transform",
    "chi_norm_transform_inv",
    "multi_point_combination",
    "interpolation_path",
]

# below this sin(angle) the slerp weights are numerically unusable
SIN_OMEGA_MIN = 1e-7


def _check(x1, x2, lam):
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.shape != x2.shape:
        raise DimensionMismatchError(f"endpoint shapes differ: {x1.shape} vs {x2.shape}")
    if x1.ndim == 0:
        raise DimensionMismatchError("endpoints must be vectors")
    lam = float(lam)
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam}")
    return x1, x2, lam


def linear(x1, x2, lam):
    """``(1 - lam) x1 + lam x2``."""
    x1, x2, lam = _check(x1, x2, lam)
    return (1.0 - lam) * x1 + lam * x2


def normalized(x1, x2, lam):
    """Linear interpolation divided by ``sqrt((1 - lam)^2 + lam^2)``.

    Keeps N(0, I) samples N(0, I); note it does not reproduce ``x`` when
    ``x1 == x2 == x`` (the midpoint is ``sqrt(2) x``).
    """
    x1, x2, lam = _check(x1, x2, lam)
    return ((1.0 - lam) * x1 + lam * x2) / math.hypot(1.0 - lam, lam)


def _slerp_weights(u1, u2, lam):
    """Weights (w1, w2) for unit vectors, with the near-parallel fallback."""
    cos = np.clip(np.sum(u1 * u2, axis=-1), -1.0, 1.0)
    omega = np.arccos(cos)
    sin = np.sin(omega)
    near = sin < SIN_OMEGA_MIN
    if np.any(near & (cos < 0)):
        raise AntiparallelError("spherical interpolation between antiparallel vectors")
    safe = np.where(near, 1.0, sin)
    w1 = np.where(near, 1.0 - lam, np.sin((1.0 - lam) * omega) / safe)
    w2 = np.where(near, lam, np.sin(lam * omega) / safe)
    return w1[..., None], w2[..., None], near


def _norms(x):
    r = np.linalg.norm(x, axis=-1)
    if np.any(r == 0):
        raise ZeroVectorError("spherical interpolation needs nonzero endpoints")
    return r


def spherical_linear(x1, x2, lam):
    """Slerp: ``sin((1-lam) W)/sin W x1 + sin(lam W)/sin W x2``.

    ``W`` is the angle between the endpoints.  For nearly parallel
    endpoints (``sin W < 1e-7``) this falls back to linear interpolation,
    its limit; nearly antiparallel endpoints raise :class:`AntiparallelError`.
    """
    x1, x2, lam = _check(x1, x2, lam)
    r1, r2 = _norms(x1), _norms(x2)
    w1, w2, _ = _slerp_weights(x1 / r1[..., None], x2 / r2[..., None], lam)
    return w1 * x1 + w2 * x2


# --------------------------------------------------------------------------
# coordinate-wise Cauchy composition


def to_cauchy(family, x):
    """``CDF_C^-1(CDF_Z(x))`` elementwise, for Z in normal/uniform/cauchy.

    Each branch is written to keep relative accuracy in both tails.
    """
    family = Family(family)
    x = np.asarray(x, dtype=float)
    if family is Family.CAUCHY:
        return x.copy()
    if family is Family.UNIFORM:
        if np.any(~(np.abs(x) < 1.0)):
            raise DomainError("uniform coordinates must lie strictly inside (-1, 1)")
        return _signed_to_cauchy(x)
    if family is not Family.NORMAL:
        raise UnsupportedFamilyError(f"{family.value} has no coordinate-wise CDF")
    flat = x.reshape(-1)
    out = np.empty_like(flat)
    # 2 CDF - 1 = erf(x / sqrt 2); in the tails use 1 - |2 CDF - 1| = erfc
    mid = np.abs(flat) < 1.0
    out[mid] = _signed_to_cauchy(erf(flat[mid] / SQRT2))
    tail = ~mid
    if np.any(tail):
        xt = flat[tail]
        with np.errstate(divide="ignore"):
            out[tail] = np.sign(xt) / np.tan(0.5 * math.pi * erfc(np.abs(xt) / SQRT2))
    if not np.all(np.isfinite(out)):
        raise DomainError("coordinate too far in the tail to map to Cauchy space")
    return out.reshape(x.shape)


def from_cauchy(family, t):
    """Inverse of :func:`to_cauchy`: ``q_Z(CDF_C(t))``."""
    family = Family(family)
    t = np.asarray(t, dtype=float)
    if family is Family.CAUCHY:
        return t.copy()
    if family is Family.UNIFORM:
        return _cauchy_to_signed(t)
    if family is not Family.NORMAL:
        raise UnsupportedFamilyError(f"{family.value} has no coordinate-wise CDF")
    flat = t.reshape(-1)
    out = np.empty_like(flat)
    mid = np.abs(flat) <= 1.0
    if np.any(mid):
        out[mid] = SQRT2 * erf_inv(_cauchy_to_signed(flat[mid]))
    tail = ~mid
    if np.any(tail):
        tt = flat[tail]
        q2 = (2.0 / math.pi) * np.arctan(1.0 / np.abs(tt))  # = 2 (1 - CDF_C(|t|))
        out[tail] = np.sign(tt) * SQRT2 * erfc_inv(q2)
    return out.reshape(t.shape)


def _require_family(prior, allowed, what):
    if prior is None:
        raise ValueError(f"{what} needs a prior")
    if prior.family not in allowed:
        raise UnsupportedFamilyError(
            f"{what} is not defined for the {prior.family.value} family")


def cauchy_linear(prior: PriorSpec, x1, x2, lam):
    """Coordinate-wise ``g((1 - lam) g^-1(x1) + lam g^-1(x2))`` with
    ``g^-1 = to_cauchy`` and ``g = from_cauchy`` for the prior's family."""
    _require_family(prior, COORDINATE_FAMILIES, "cauchy_linear")
    x1, x2, lam = _check(x1, x2, lam)
    fam = prior.family
    t = (1.0 - lam) * to_cauchy(fam, x1) + lam * to_cauchy(fam, x2)
    return from_cauchy(fam, t)


# --------------------------------------------------------------------------
# chi-norm transform for the spherical variant


@functools.lru_cache(maxsize=None)
def chi_median(D: int) -> float:
    """Median of the chi distribution with D degrees of freedom."""
    x = _gamma_inv(0.5 * D, np.array([0.5]), False, DEFAULT_PRECISION)
    return math.sqrt(2.0 * x[0])


def _cauchy_quantile_from_pq(p, q):
    # tan(pi (p - 1/2)) given both tails
    out = np.tan(math.pi * (p - 0.5))
    lo = p < 0.25
    hi = q < 0.25
    with np.errstate(divide="ignore"):
        out = np.where(lo, -1.0 / np.tan(math.pi * p), out)
        out = np.where(hi, 1.0 / np.tan(math.pi * q), out)
    return out


def chi_norm_transform(D: int, r):
    """``CDF_C^-1(CDF_chi2_D(r^2))``: a chi_D-distributed norm to a Cauchy value."""
    ra = np.asarray(r, dtype=float)
    if np.any(~(ra > 0)):
        raise DomainError("chi_norm_transform requires r > 0")
    flat = ra.reshape(-1)
    p, q = _gamma_pq(np.full_like(flat, 0.5 * D), 0.5 * flat * flat)
    out = _cauchy_quantile_from_pq(p, q)
    if not np.all(np.isfinite(out)):
        raise DomainError("norm too far in the tail of chi_D")
    out = out.reshape(ra.shape)
    return float(out) if ra.ndim == 0 else out


def chi_norm_transform_inv(D: int, c):
    """``sqrt(CDF_chi2_D^-1(CDF_C(c)))``, the inverse of :func:`chi_norm_transform`."""
    ca = np.asarray(c, dtype=float)
    flat = ca.reshape(-1)
    out = np.empty_like(flat)
    a = 0.5 * D
    zero = flat == 0.0
    out[zero] = chi_median(D)
    neg = flat < 0
    pos = flat > 0
    if np.any(neg):
        # lower tail: CDF_C(c) = atan(-1/c) / pi for c < 0
        p = np.arctan2(1.0, -flat[neg]) / math.pi
        out[neg] = np.sqrt(2.0 * _gamma_inv(a, p, False, DEFAULT_PRECISION))
    if np.any(pos):
        q = np.arctan2(1.0, flat[pos]) / math.pi
        out[pos] = np.sqrt(2.0 * _gamma_inv(a, q, True, DEFAULT_PRECISION))
    out = out.reshape(ca.shape)
    return float(out) if ca.ndim == 0 else out


def spherical_cauchy_linear(prior: PriorSpec, x1, x2, lam):
    """Slerp the directions, Cauchy-linearly interpolate the norms.

    Only defined for the standard normal prior, where ``||Z||`` is chi_D.
    Endpoints of equal norm give a path of constant norm.
    """
    _require_family(prior, (Family.NORMAL,), "spherical_cauchy_linear")
    x1, x2, lam = _check(x1, x2, lam)
    D = x1.shape[-1]
    r1, r2 = _norms(x1), _norms(x2)
    u1, u2 = x1 / r1[..., None], x2 / r2[..., None]
    w1, w2, near = _slerp_weights(u1, u2, lam)
    direction = w1 * u1 + w2 * u2
    if np.any(near):
        # linear fallback of unit vectors is short by O(angle^2); renormalize
        fix = direction[near] / np.linalg.norm(direction[near], axis=-1)[..., None]
        direction = np.where(near[..., None], 0.0, direction)
        direction[near] = fix
    t = (1.0 - lam) * chi_norm_transform(D, r1) + lam * chi_norm_transform(D, r2)
    radius = chi_norm_transform_inv(D, t)
    return direction * np.asarray(radius)[..., None]


# --------------------------------------------------------------------------


def multi_point_combination(points, weights):
    """Convex combination ``sum_i w_i x_i``.

    ``points`` has shape ``(k, ..., D)``; ``weights`` is either ``(k,)`` or
    one weight vector per combined row, shape ``(k, n)`` for points of
    shape ``(k, n, D)``.  Weights must be nonnegative and sum to one.
    """
    pts = np.asarray(points, dtype=float)
    w = np.asarray(weights, dtype=float)
    if pts.ndim < 2:
        raise DimensionMismatchError("points must be a stack of vectors")
    if w.shape[0] != pts.shape[0] or w.ndim > pts.ndim - 1:
        raise DimensionMismatchError("one weight (vector) per point is required")
    if np.any(w < 0):
        raise DomainError("weights must be nonnegative")
    if np.any(np.abs(w.sum(axis=0) - 1.0) > 1e-12):
        raise DomainError("weights must sum to 1")
    w = w.reshape(w.shape + (1,) * (pts.ndim - w.ndim))
    return np.sum(w * pts, axis=0)


class Kind(str, Enum):
    LINEAR = "linear"
    SPHERICAL_LINEAR = "spherical_linear"
    NORMALIZED = "normalized"
    CAUCHY_LINEAR = "cauchy_linear"
    SPHERICAL_CAUCHY_LINEAR = "spherical_cauchy_linear"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class InterpolationScheme:
    """One of the five schemes, bound to a prior where the scheme needs one."""

    kind: Kind
    prior: Optional[PriorSpec] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.CAUCHY_LINEAR:
            _require_family(self.prior, COORDINATE_FAMILIES, "cauchy_linear")
        elif self.kind is Kind.SPHERICAL_CAUCHY_LINEAR:
            _require_family(self.prior, (Family.NORMAL,), "spherical_cauchy_linear")

    def __call__(self, x1, x2, lam):
        k = self.kind
        if k is Kind.LINEAR:
            return linear(x1, x2, lam)
        if k is Kind.SPHERICAL_LINEAR:
            return spherical_linear(x1, x2, lam)
        if k is Kind.NORMALIZED:
            return normalized(x1, x2, lam)
        if k is Kind.CAUCHY_LINEAR:
            return cauchy_linear(self.prior, x1, x2, lam)
        return spherical_cauchy_linear(self.prior, x1, x2, lam)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value,
                "prior": None if self.prior is None else self.prior.to_dict()}


@dataclass(frozen=True)
class InterpolationPath:
    endpoints: tuple
    lambdas: tuple
    points: np.ndarray


def interpolation_path(scheme: InterpolationScheme, x1, x2,
                       lambdas: Sequence[float]) -> InterpolationPath:
    """Evaluate ``scheme`` along sorted ``lambdas`` between two D-vectors."""
    lams = tuple(float(v) for v in lambdas)
    if list(lams) != sorted(lams):
        raise ValueError("lambdas must be sorted")
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x1.ndim != 1:
        raise DimensionMismatchError("path endpoints must be single vectors")
    pts = np.array([scheme(x1, x2, lam) for lam in lams]).reshape(len(lams), x1.shape[0])
    return InterpolationPath((x1.copy(), x2.copy()), lams, pts)

"""
Latent prior distributions.

A :class:`PriorSpec` describes a D-dimensional prior declaratively: the
one-dimensional family of its (independent) coordinates, or one of the two
genuinely multivariate laws (uniform on the unit sphere, uniform on the
corners ``{-1, 1}^D``), optionally followed by a pathological modifier that
zeroes coordinates.  :func:`sample` turns a spec plus a seed into a
:class:`SampleBatch` by inverse-transform sampling from a counter-based
stream, so batches are reproducible bit for bit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from . import _rng
from .errors import DomainError, UnsupportedFamilyError
from .specfun import erf_inv, erfc, erfc_inv, reg_lower_gamma

__all__ = [
    "Family",
    "Modifier",
    "PriorSpec",
    "SampleBatch",
    "sample",
    "dense_test_batch",
    "scale_batch",
    "coordinate_cdf",
    "coordinate_quantile",
    "norm_approx_params",
    "norm_cdf",
    "norm_cdf_is_exact",
]

SQRT2 = math.sqrt(2.0)
MAX_SEED = 2 ** 64 - 1
# Cauchy tail truncation: probabilities are kept this far from 0 and 1
CAUCHY_P_CLAMP = 1e-15

# stream ids within one seed
_VALUES = 1
_SPARSE = 2
_SPHERE_RETRY = 16


class Family(str, Enum):
    NORMAL = "normal"
    UNIFORM = "uniform"
    CAUCHY = "cauchy"
    SPHERE_UNIFORM = "sphere_uniform"
    DISCRETE_CORNERS = "discrete_corners"

    def __str__(self):
        return self.value


#: families whose D-dimensional law is a product of identical 1-D laws with a
#: continuous CDF
COORDINATE_FAMILIES = (Family.NORMAL, Family.UNIFORM, Family.CAUCHY)


@dataclass(frozen=True)
class Modifier:
    """Pathological modification applied after sampling.

    ``sparse``: each row keeps a uniformly random K-subset of coordinates and
    the remaining D - K are set to zero.  ``subspace``: the last D - K
    coordinates of every row are set to zero.
    """

    kind: str
    K: int

    def __post_init__(self):
        if self.kind not in ("sparse", "subspace"):
            raise ValueError(f"unknown modifier {self.kind!r}")
        if int(self.K) != self.K or self.K < 1:
            raise ValueError("modifier K must be a positive integer")
        object.__setattr__(self, "K", int(self.K))


@dataclass(frozen=True)
class PriorSpec:
    family: Family
    D: int
    modifier: Optional[Modifier] = None
    scale_correction: bool = False

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if int(self.D) != self.D or self.D < 1:
            raise ValueError("latent dimension D must be a positive integer")
        object.__setattr__(self, "D", int(self.D))
        if self.modifier is not None and self.modifier.K > self.D:
            raise ValueError(f"modifier K={self.modifier.K} exceeds D={self.D}")

    @property
    def effective_dim(self) -> int:
        """Number of coordinates that can be nonzero."""
        return self.D if self.modifier is None else self.modifier.K

    def dense(self) -> "PriorSpec":
        """The same family without modifier."""
        return PriorSpec(self.family, self.D)

    def to_dict(self) -> dict:
        mod = None
        if self.modifier is not None:
            mod = {"kind": self.modifier.kind, "K": self.modifier.K}
        return {
            "family": self.family.value,
            "D": self.D,
            "modifier": mod,
            "scale_correction": self.scale_correction,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PriorSpec":
        mod = d.get("modifier")
        return cls(
            family=d["family"],
            D=d["D"],
            modifier=Modifier(mod["kind"], mod["K"]) if mod else None,
            scale_correction=bool(d.get("scale_correction", False)),
        )


@dataclass(frozen=True, eq=False)
class SampleBatch:
    """``n x D`` latent points (one per row) plus where they came from.

    ``scale`` records any multiplication applied after sampling and
    ``lambdas`` is set when the rows are points along an interpolation path.
    """

    data: np.ndarray
    prior: PriorSpec
    seed: int
    scale: float = 1.0
    lambdas: Optional[tuple] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64, order="C")
        if data.ndim != 2 or data.shape[1] != self.prior.D:
            raise ValueError(
                f"data must have shape (n, {self.prior.D}), got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("batch entries must be finite")
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.lambdas is not None:
            lam = tuple(float(v) for v in self.lambdas)
            if len(lam) != data.shape[0]:
                raise ValueError("need one lambda per row")
            object.__setattr__(self, "lambdas", lam)
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def D(self) -> int:
        return self.data.shape[1]

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.data, axis=1)

    def metadata(self) -> dict:
        meta = {"prior": self.prior.to_dict(), "seed": int(self.seed),
                "scale": float(self.scale)}
        if self.lambdas is not None:
            meta["lambdas"] = list(self.lambdas)
        meta.update(self.extra)
        return meta

    def __eq__(self, other):
        if not isinstance(other, SampleBatch):
            return NotImplemented
        return (self.metadata() == other.metadata()
                and np.array_equal(self.data, other.data))


# --------------------------------------------------------------------------
# one-dimensional laws


def _signed_to_cauchy(s):
    """tan(pi s / 2) for s in (-1, 1), accurate near both ends."""
    s = np.asarray(s, dtype=float)
    out = np.empty_like(s)
    mid = np.abs(s) <= 0.5
    out[mid] = np.tan(0.5 * math.pi * s[mid])
    tail = ~mid
    st = s[tail]
    # 1 - |s| is exact for |s| >= 1/2
    out[tail] = np.sign(st) / np.tan(0.5 * math.pi * (1.0 - np.abs(st)))
    return out


def _cauchy_to_signed(t):
    """Inverse of :func:`_signed_to_cauchy`: (2/pi) atan(t)."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    mid = np.abs(t) <= 1.0
    out[mid] = (2.0 / math.pi) * np.arctan(t[mid])
    tail = ~mid
    tt = t[tail]
    out[tail] = np.sign(tt) * (1.0 - (2.0 / math.pi) * np.arctan(1.0 / np.abs(tt)))
    return out


def _require_coordinate_family(family) -> Family:
    family = Family(family)
    if family not in COORDINATE_FAMILIES:
        raise UnsupportedFamilyError(
            f"{family.value} has no coordinate-wise continuous CDF")
    return family


def _as_out(x, arr):
    return float(arr) if np.ndim(x) == 0 else arr


def coordinate_cdf(family, x):
    """CDF of a single coordinate: N(0,1), U(-1,1) or C(0,1)."""
    family = _require_coordinate_family(family)
    xa = np.asarray(x, dtype=float)
    if family is Family.NORMAL:
        out = 0.5 * erfc(-xa / SQRT2)
    elif family is Family.UNIFORM:
        out = np.clip(0.5 * (xa + 1.0), 0.0, 1.0)
    else:
        # atan2 form keeps both tails accurate
        out = np.arctan2(1.0, -xa) / math.pi
    return _as_out(x, np.asarray(out, dtype=float))


def coordinate_sf(family, x):
    """Survival function ``1 - CDF``, without cancellation in the right tail."""
    family = _require_coordinate_family(family)
    xa = np.asarray(x, dtype=float)
    if family is Family.NORMAL:
        out = 0.5 * erfc(xa / SQRT2)
    elif family is Family.UNIFORM:
        out = np.clip(0.5 * (1.0 - xa), 0.0, 1.0)
    else:
        out = np.arctan2(1.0, xa) / math.pi
    return _as_out(x, np.asarray(out, dtype=float))


def coordinate_quantile(family, p):
    """Inverse of :func:`coordinate_cdf` on the open interval (0, 1).

    For the Cauchy family ``p`` is clamped to ``[1e-15, 1 - 1e-15]``, which
    truncates the tails beyond about ``|x| = 3.2e14``.
    """
    family = _require_coordinate_family(family)
    pa = np.asarray(p, dtype=float)
    if np.any(~((pa > 0) & (pa < 1))):
        raise DomainError("quantile requires 0 < p < 1")
    flat = pa.reshape(-1)
    out = np.empty_like(flat)
    if family is Family.UNIFORM:
        out = 2.0 * flat - 1.0
    elif family is Family.NORMAL:
        lo = flat < 0.25
        hi = flat > 0.75
        mid = ~(lo | hi)
        if np.any(lo):
            out[lo] = -SQRT2 * erfc_inv(2.0 * flat[lo])
        if np.any(hi):
            out[hi] = SQRT2 * erfc_inv(2.0 * (1.0 - flat[hi]))
        if np.any(mid):
            out[mid] = SQRT2 * erf_inv(2.0 * flat[mid] - 1.0)
    else:
        pc = np.clip(flat, CAUCHY_P_CLAMP, 1.0 - CAUCHY_P_CLAMP)
        # 2p - 1 is exact for p >= 1/4; below that go through 1/tan
        lo = pc < 0.25
        out[~lo] = _signed_to_cauchy(2.0 * pc[~lo] - 1.0)
        out[lo] = -1.0 / np.tan(math.pi * pc[lo])
    return _as_out(p, out.reshape(pa.shape))


# --------------------------------------------------------------------------
# sampling


def _check_seed(seed: int) -> int:
    seed = int(seed)
    if not 0 <= seed <= MAX_SEED:
        raise ValueError("seed must be an unsigned 64-bit integer")
    return seed


def _family_values(family: Family, s: np.ndarray) -> np.ndarray:
    if family in (Family.NORMAL, Family.SPHERE_UNIFORM):
        return SQRT2 * erf_inv(s)
    if family is Family.UNIFORM:
        return s
    if family is Family.CAUCHY:
        clamp = 1.0 - 2.0 * CAUCHY_P_CLAMP
        return _signed_to_cauchy(np.clip(s, -clamp, clamp))
    return np.where(s < 0.0, -1.0, 1.0)


def sample(prior: PriorSpec, n: int, seed: int) -> SampleBatch:
    """Draw ``n`` latent points from ``prior``.

    Coordinate ``(i, j)`` depends only on ``(seed, i * D + j)``, so the result
    does not depend on how the work is split.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    seed = _check_seed(seed)
    n, D = int(n), prior.D
    counters = np.arange(n * D, dtype=np.uint64)
    s = _rng.signed_unit(_rng.stream_key(seed, _VALUES), counters)
    data = _family_values(prior.family, s).reshape(n, D)

    if prior.family is Family.SPHERE_UNIFORM and n:
        norms = np.linalg.norm(data, axis=1)
        attempt = 0
        while np.any(norms == 0.0):
            # measure-zero event; redraw the offending rows from a fresh stream
            bad = np.flatnonzero(norms == 0.0)
            key = _rng.stream_key(seed, _SPHERE_RETRY + attempt)
            idx = (bad[:, None] * D + np.arange(D)).reshape(-1).astype(np.uint64)
            data[bad] = (SQRT2 * erf_inv(_rng.signed_unit(key, idx))).reshape(-1, D)
            norms[bad] = np.linalg.norm(data[bad], axis=1)
            attempt += 1
        data /= norms[:, None]

    mod = prior.modifier
    if mod is not None and mod.K < D and n:
        if mod.kind == "subspace":
            data[:, mod.K:] = 0.0
        else:
            keys = _rng.words(_rng.stream_key(seed, _SPARSE), counters).reshape(n, D)
            # a uniformly random permutation per row; its first D - K entries
            # are a uniformly random (D - K)-subset
            drop = np.argsort(keys, axis=1, kind="stable")[:, : D - mod.K]
            np.put_along_axis(data, drop, 0.0, axis=1)
    return SampleBatch(data, prior, seed)


def scale_batch(batch: SampleBatch, alpha: float) -> SampleBatch:
    """Multiply every entry by ``alpha`` (recorded in ``batch.scale``)."""
    alpha = float(alpha)
    if not math.isfinite(alpha):
        raise ValueError("alpha must be finite")
    return SampleBatch(batch.data * alpha, batch.prior, batch.seed,
                       scale=batch.scale * alpha, lambdas=batch.lambdas,
                       extra=dict(batch.extra))


def dense_test_batch(prior: PriorSpec, n: int, seed: int) -> SampleBatch:
    """Dense samples used to probe a model trained on a pathological prior.

    Draws from the unmodified family; with ``prior.scale_correction`` the
    rows are multiplied by sqrt(K / D) so their norms match the training
    distribution.
    """
    if prior.modifier is None:
        raise ValueError("dense test batches need a prior with a modifier")
    dense = sample(prior.dense(), n, seed)
    if prior.scale_correction:
        return scale_batch(dense, math.sqrt(prior.modifier.K / prior.D))
    return dense


# --------------------------------------------------------------------------
# norms

# mean and variance of Z^2 for one coordinate
_SQUARE_MOMENTS = {
    Family.NORMAL: (1.0, 2.0),
    Family.UNIFORM: (1.0 / 3.0, 4.0 / 45.0),
}


def norm_approx_params(prior: PriorSpec) -> tuple[float, float]:
    """Mean and variance of the normal law that ``||Z||`` approaches.

    With ``mu`` and ``sigma^2`` the mean and variance of one squared
    coordinate, the CLT gives ``||Z|| ~ N(sqrt(D mu), sigma^2 / (4 mu))``.
    Only meaningful for large D.
    """
    if prior.modifier is not None:
        raise UnsupportedFamilyError("norm approximation is for unmodified priors")
    try:
        mu, var = _SQUARE_MOMENTS[prior.family]
    except KeyError:
        raise UnsupportedFamilyError(
            f"Z^2 has no finite mean and variance table for {prior.family.value}"
        ) from None
    return math.sqrt(prior.D * mu), var / (4.0 * mu)


def norm_cdf_is_exact(prior: PriorSpec) -> bool:
    """Whether :func:`norm_cdf` is exact (True) or the CLT approximation."""
    norm_cdf(prior, 0.0)  # raises for unsupported priors
    return prior.family is not Family.UNIFORM


def norm_cdf(prior: PriorSpec, r):
    """CDF of the Euclidean norm of a prior draw.

    Exact for the normal family (chi law with ``prior.effective_dim`` degrees
    of freedom) and for the two degenerate-norm families; the uniform family
    falls back to the normal approximation of :func:`norm_approx_params`
    (see :func:`norm_cdf_is_exact`).
    """
    ra = np.asarray(r, dtype=float)
    if np.any(ra < 0):
        raise DomainError("norm_cdf requires r >= 0")
    fam = prior.family
    k = prior.effective_dim
    if fam is Family.NORMAL:
        out = reg_lower_gamma(0.5 * k, 0.5 * ra * ra)
    elif fam is Family.UNIFORM:
        mean, var = norm_approx_params(prior)
        out = 0.5 * erfc(-(ra - mean) / math.sqrt(2.0 * var))
    elif fam is Family.SPHERE_UNIFORM and prior.modifier is None:
        out = (ra >= 1.0).astype(float)
    elif fam is Family.DISCRETE_CORNERS:
        out = (ra >= math.sqrt(k)).astype(float)
    else:
        raise UnsupportedFamilyError(f"no norm CDF for {prior}")
    return _as_out(r, np.asarray(out, dtype=float))

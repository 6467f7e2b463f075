"""
Statistical checks for priors and interpolations.

Kolmogorov-Smirnov tests use asymptotic critical values
``c(alpha) = sqrt(-ln(alpha / 2) / 2)``, scaled by ``1/sqrt(n)`` for one
sample and ``sqrt((n + m) / (n m))`` for two.  :func:`property4_audit`
checks whether points along an interpolation between two independent prior
draws are again distributed like the prior.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import _rng
from .errors import UnsupportedFamilyError
from .interp import InterpolationScheme
from .priors import (COORDINATE_FAMILIES, Family, PriorSpec, SampleBatch,
                     coordinate_cdf, norm_approx_params, norm_cdf,
                     norm_cdf_is_exact, sample)

__all__ = [
    "KSResult",
    "ks_one_sample",
    "ks_two_sample",
    "NormSummary",
    "norm_summary",
    "sphere_projection_cdf",
    "LambdaAudit",
    "Property4Report",
    "property4_audit",
]

SPHERE_NORM_TOL = 1e-9


def _c_alpha(alpha: float) -> float:
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return math.sqrt(-math.log(alpha / 2.0) / 2.0)


@dataclass(frozen=True)
class KSResult:
    statistic: float
    critical_value: float
    alpha: float
    n: int
    m: Optional[int] = None
    reject: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "reject", bool(self.statistic > self.critical_value))

    def to_dict(self) -> dict:
        return {"statistic": self.statistic, "critical_value": self.critical_value,
                "alpha": self.alpha, "n": self.n, "m": self.m, "reject": self.reject}


def ks_one_sample(data, cdf: Callable, alpha: float = 0.01) -> KSResult:
    """One-sample KS test of ``data`` against a continuous ``cdf``.

    ``cdf`` is called once on the sorted sample as an array.
    """
    x = np.sort(np.asarray(data, dtype=float).reshape(-1))
    n = x.size
    if n == 0:
        raise ValueError("KS test needs at least one observation")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    stat = float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
    return KSResult(stat, _c_alpha(alpha) / math.sqrt(n), alpha, n)


def ks_two_sample(a, b, alpha: float = 0.01) -> KSResult:
    """Two-sample KS test: ``sup |F_a - F_b|`` over the pooled sample."""
    a = np.sort(np.asarray(a, dtype=float).reshape(-1))
    b = np.sort(np.asarray(b, dtype=float).reshape(-1))
    n, m = a.size, b.size
    if n == 0 or m == 0:
        raise ValueError("KS test needs two nonempty samples")
    z = np.concatenate([a, b])
    fa = np.searchsorted(a, z, side="right") / n
    fb = np.searchsorted(b, z, side="right") / m
    stat = float(np.max(np.abs(fa - fb)))
    crit = _c_alpha(alpha) * math.sqrt((n + m) / (n * m))
    return KSResult(stat, crit, alpha, n, m)


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class NormSummary:
    empirical_mean: float
    empirical_std: float
    analytic_mean: Optional[float]
    analytic_std: Optional[float]
    histogram: list

    def to_dict(self) -> dict:
        return {
            "empirical_mean": self.empirical_mean,
            "empirical_std": self.empirical_std,
            "analytic_mean": self.analytic_mean,
            "analytic_std": self.analytic_std,
            "histogram": [list(h) for h in self.histogram],
        }


def norm_summary(batch: SampleBatch, bins: int = 50) -> NormSummary:
    """Histogram (unit area) and moments of the row norms of ``batch``.

    The analytic fields hold the CLT approximation when the prior supports
    it and are None otherwise.
    """
    if batch.n == 0:
        raise ValueError("cannot summarize an empty batch")
    if bins < 1:
        raise ValueError("bins must be positive")
    r = batch.norms()
    lo, hi = float(r.min()), float(r.max())
    if hi - lo <= 1e-9 * max(1.0, abs(hi)):
        # (near-)constant norms, e.g. sphere_uniform: a unit-wide window with
        # the common value at the centre of one bin
        h = 1.0 / bins
        lo = 0.5 * (lo + hi) - h * (bins // 2) - 0.5 * h
        hi = lo + 1.0
    density, edges = np.histogram(r, bins=bins, range=(lo, hi), density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    try:
        mean, var = norm_approx_params(batch.prior)
        mean, std = mean * abs(batch.scale), math.sqrt(var) * abs(batch.scale)
    except UnsupportedFamilyError:
        mean = std = None
    return NormSummary(
        empirical_mean=float(r.mean()),
        empirical_std=float(r.std(ddof=1)) if batch.n > 1 else 0.0,
        analytic_mean=mean,
        analytic_std=std,
        histogram=[(float(c), float(d)) for c, d in zip(centers, density)],
    )


@functools.lru_cache(maxsize=None)
def _sphere_projection_table(D: int, points: int):
    # x = sin(theta) has density proportional to cos(theta)^(D-2) in theta
    theta = np.linspace(-0.5 * math.pi, 0.5 * math.pi, points)
    dens = np.cos(theta) ** (D - 2)
    dens[[0, -1]] = 1.0 if D == 2 else 0.0
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * np.diff(theta))])
    cum /= cum[-1]
    return theta, cum


def sphere_projection_cdf(D: int, points: int = 200001) -> Callable:
    """CDF of one coordinate of a point uniform on the unit sphere in R^D.

    Obtained by brute-force trapezoid integration of the marginal density
    after substituting ``x = sin(theta)``, which removes the endpoint
    singularity for small D.
    """
    if D < 2:
        raise ValueError("the sphere marginal needs D >= 2")
    theta, cum = _sphere_projection_table(int(D), int(points))

    def cdf(x):
        return np.interp(np.arcsin(np.clip(x, -1.0, 1.0)), theta, cum)

    return cdf


# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LambdaAudit:
    lam: float
    coordinate_ks: KSResult
    coordinate_indices: tuple
    norm_ks: Optional[KSResult]
    norm_reference: str
    mean_norm: float
    max_norm_deviation: Optional[float]
    passed: bool

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "coordinate_ks": self.coordinate_ks.to_dict(),
            "coordinate_indices": list(self.coordinate_indices),
            "norm_ks": None if self.norm_ks is None else self.norm_ks.to_dict(),
            "norm_reference": self.norm_reference,
            "mean_norm": self.mean_norm,
            "max_norm_deviation": self.max_norm_deviation,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class Property4Report:
    scheme: Union[InterpolationScheme, str]
    prior: PriorSpec
    lambdas: tuple
    per_lambda: tuple
    overall_pass: bool

    def to_dict(self) -> dict:
        scheme = (self.scheme.to_dict() if isinstance(self.scheme, InterpolationScheme)
                  else {"kind": str(self.scheme), "prior": None})
        return {
            "scheme": scheme,
            "prior": self.prior.to_dict(),
            "lambdas": list(self.lambdas),
            "per_lambda": [p.to_dict() for p in self.per_lambda],
            "overall_pass": self.overall_pass,
        }


def _coordinate_law(prior: PriorSpec) -> Callable:
    if prior.modifier is not None:
        raise UnsupportedFamilyError("audits need an unmodified prior")
    if prior.family in COORDINATE_FAMILIES:
        fam = prior.family
        return lambda x: coordinate_cdf(fam, x)
    if prior.family is Family.SPHERE_UNIFORM and prior.D >= 2:
        return sphere_projection_cdf(prior.D)
    raise UnsupportedFamilyError(f"no coordinate law to audit against for {prior.family}")


def _random_axis(seed: int, D: int) -> np.ndarray:
    key = _rng.stream_key(seed, 0xA715)
    v = _rng.signed_unit(key, np.arange(D, dtype=np.uint64))
    return v / np.linalg.norm(v)


def property4_audit(scheme, prior: PriorSpec, lambdas: Sequence[float],
                    n: int = 10_000, seed: int = 7, alpha: float = 0.01,
                    max_coords: int = 10) -> Property4Report:
    """Test whether ``scheme(Z1, Z2, lam)`` is distributed like ``Z``.

    For every ``lam`` a fresh set of ``n`` endpoint pairs is drawn and the
    interpolated points are checked by

    * one-sample KS on ``min(D, max_coords)`` fixed, evenly spaced
      coordinates against the prior's coordinate CDF (for the sphere prior:
      the exact one-dimensional marginal, plus one projection onto a fixed
      random axis);
    * a test on the Euclidean norms: one-sample KS against the exact norm
      CDF where there is one, otherwise two-sample KS against the norms of
      an independent prior batch; for the sphere prior, norms must equal 1
      within 1e-9.

    The KS tests at one ``lam`` share ``alpha`` by Bonferroni correction.
    ``scheme`` may also be any callable ``f(x1, x2, lam)`` acting on
    ``(n, D)`` arrays.
    """
    law = _coordinate_law(prior)
    fn = scheme
    D = prior.D
    idx = tuple(int(j) for j in
                np.unique(np.linspace(0, D - 1, min(D, max_coords)).round().astype(int)))
    sphere = prior.family is Family.SPHERE_UNIFORM
    axis = _random_axis(seed, D) if sphere else None
    exact_norm = (not sphere) and prior.family is not Family.CAUCHY \
        and norm_cdf_is_exact(prior)

    results = []
    lams = tuple(float(v) for v in lambdas)
    for i, lam in enumerate(lams):
        pair = sample(prior, 2 * n, _rng.derive_seed(seed, i)).data
        pts = np.asarray(fn(pair[:n], pair[n:], lam))
        columns = [pts[:, j] for j in idx]
        if sphere:
            columns.append(pts @ axis)
        r = np.linalg.norm(pts, axis=1)

        n_tests = len(columns) + (0 if sphere else 1)
        a_each = alpha / n_tests
        coord = [ks_one_sample(c, law, a_each) for c in columns]
        worst = max(coord, key=lambda k: k.statistic)
        agg = KSResult(worst.statistic, worst.critical_value, a_each, n)

        deviation = None
        norm_ks = None
        if sphere:
            deviation = float(np.max(np.abs(r - 1.0)))
            ref = "unit"
            norm_ok = deviation <= SPHERE_NORM_TOL
        elif exact_norm:
            norm_ks = ks_one_sample(r, lambda v: norm_cdf(prior, v), a_each)
            ref = "exact"
            norm_ok = not norm_ks.reject
        else:
            other = sample(prior, n, _rng.derive_seed(seed, i, 1)).norms()
            norm_ks = ks_two_sample(r, other, a_each)
            ref = "two_sample"
            norm_ok = not norm_ks.reject

        results.append(LambdaAudit(
            lam=lam, coordinate_ks=agg, coordinate_indices=idx, norm_ks=norm_ks,
            norm_reference=ref, mean_norm=float(r.mean()),
            max_norm_deviation=deviation, passed=bool(not agg.reject and norm_ok),
        ))

    label = scheme if isinstance(scheme, InterpolationScheme) \
        else getattr(scheme, "__name__", "custom")
    return Property4Report(label, prior, lams, tuple(results),
                           all(r.passed for r in results))

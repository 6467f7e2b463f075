import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy import stats as sps

from latentprior import (InterpolationScheme, Kind, PriorSpec, cauchy_linear,
                         chi_median, chi_norm_transform, chi_norm_transform_inv,
                         from_cauchy, interpolation_path, linear, multi_point_combination,
                         normalized, sample, spherical_cauchy_linear, spherical_linear,
                         to_cauchy)
from latentprior.errors import (AntiparallelError, DimensionMismatchError, DomainError,
                                UnsupportedFamilyError, ZeroVectorError)

NORMAL = PriorSpec("normal", 100)
E1, E2 = np.eye(3)[0], np.eye(3)[1]


def _scheme(kind, D=6):
    prior = PriorSpec("normal", D) if kind in ("cauchy_linear", "spherical_cauchy_linear") else None
    return InterpolationScheme(kind, prior)


def _pair(D=6, seed=3):
    return sample(PriorSpec("normal", D), 2, seed).data


# --- simple schemes ---------------------------------------------------------

def test_linear_examples():
    x1, x2 = np.array([0.0, 0.0]), np.array([2.0, 2.0])
    assert np.array_equal(linear(x1, x2, 0.0), x1)
    assert np.array_equal(linear(x1, x2, 0.5), [1.0, 1.0])
    v = np.array([1.5, -2.0, 0.25])
    assert not np.any(linear(v, -v, 0.5))


def test_normalized_examples():
    x = np.array([0.3, -1.2, 2.0])
    assert np.allclose(normalized(x, x, 0.5), math.sqrt(2) * x, atol=1e-15)
    assert np.array_equal(normalized(x, 2 * x, 0.0), x)
    assert np.allclose(normalized(E1, E2, 0.5), (E1 + E2) / math.sqrt(2), atol=1e-15)
    assert np.allclose(normalized(E1, E2, 0.5), spherical_linear(E1, E2, 0.5), atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(0, 1), st.floats(0.1, 10))
def test_normalized_on_orthogonal_equal_norms(lam, R):
    # same circle as slerp, but a different speed: the points agree only at 0, 1/2, 1
    a, b = R * E1, R * E2
    out = normalized(a, b, lam)
    assert abs(np.linalg.norm(out) - R) <= 1e-12 * R
    for t in (0.0, 0.5, 1.0):
        assert np.allclose(normalized(a, b, t), spherical_linear(a, b, t), atol=1e-12 * R)


def test_slerp_examples():
    assert np.allclose(spherical_linear(E1, E2, 0.0), E1, atol=1e-15)
    mid = spherical_linear(E1, E2, 0.5)
    assert np.allclose(mid, (math.sqrt(2) / 2) * (E1 + E2), atol=1e-15)
    assert np.linalg.norm(mid) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(AntiparallelError):
        spherical_linear(E1, -E1, 0.5)
    with pytest.raises(ZeroVectorError):
        spherical_linear(np.zeros(3), E1, 0.5)


def test_slerp_near_parallel_falls_back_to_linear():
    x2 = E1 + np.array([0.0, 1e-9, 0.0])
    assert np.allclose(spherical_linear(E1, x2, 0.3), linear(E1, x2, 0.3), atol=1e-15)


@settings(max_examples=150, deadline=None)
@given(arrays(float, 5, elements=st.floats(-5, 5)), arrays(float, 5, elements=st.floats(-5, 5)),
       st.floats(0, 1), st.floats(0.1, 20))
def test_slerp_keeps_common_norm(a, b, lam, R):
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na < 1e-3 or nb < 1e-3 or np.dot(a, b) / (na * nb) < -0.999:
        return
    out = spherical_linear(R * a / na, R * b / nb, lam)
    assert abs(np.linalg.norm(out) - R) <= 1e-9 * R


@pytest.mark.parametrize("fn", [linear, normalized, spherical_linear])
def test_argument_checks(fn):
    with pytest.raises(DimensionMismatchError):
        fn(np.ones(3), np.ones(4), 0.5)
    for lam in (-0.01, 1.01, float("nan")):
        with pytest.raises(ValueError):
            fn(np.ones(3), np.ones(3), lam)


def test_batched_rows():
    pair = sample(PriorSpec("normal", 8), 40, 1).data
    x1, x2 = pair[:20], pair[20:]
    for kind in Kind:
        s = _scheme(kind.value, 8)
        rows = s(x1, x2, 0.35)
        assert rows.shape == (20, 8)
        assert np.allclose(rows[4], s(x1[4], x2[4], 0.35), atol=1e-13)


# --- Cauchy composition ---------------------------------------------------------

def test_cauchy_prior_reduces_to_linear():
    x1, x2 = sample(PriorSpec("cauchy", 5), 2, 2).data
    p = PriorSpec("cauchy", 5)
    for lam in (0.0, 0.2, 0.5, 0.9, 1.0):
        assert np.allclose(cauchy_linear(p, x1, x2, lam), linear(x1, x2, lam), rtol=1e-15)


def test_uniform_symmetric_coordinates_meet_at_zero():
    a = np.array([0.2, 0.7, -0.95])
    out = cauchy_linear(PriorSpec("uniform", 3), a, -a, 0.5)
    assert np.allclose(out, 0.0, atol=1e-15)


def test_normal_cauchy_linear_against_scipy_composition():
    t1 = sps.cauchy.ppf(sps.norm.cdf(0.5))
    t2 = sps.cauchy.ppf(sps.norm.cdf(-1.2))
    ref = sps.norm.ppf(sps.cauchy.cdf(0.7 * t1 + 0.3 * t2))
    out = cauchy_linear(PriorSpec("normal", 1), np.array([0.5]), np.array([-1.2]), 0.3)
    assert out[0] == pytest.approx(ref, abs=1e-9)


@pytest.mark.parametrize("family", ["normal", "uniform", "cauchy"])
def test_cauchy_transform_round_trip(family):
    lim = {"normal": 8.0, "uniform": 1 - 1e-12, "cauchy": 1e8}[family]
    x = np.linspace(-lim, lim, 4001)
    assert np.allclose(from_cauchy(family, to_cauchy(family, x)), x, rtol=1e-12, atol=1e-12)


def test_to_cauchy_tails_against_scipy():
    x = np.linspace(-30, 30, 301)
    ref = np.where(x < 0, sps.cauchy.ppf(sps.norm.cdf(x)), sps.cauchy.isf(sps.norm.sf(x)))
    assert np.allclose(to_cauchy("normal", x), ref, rtol=1e-10)


def test_uniform_boundary_is_domain_error():
    p = PriorSpec("uniform", 2)
    with pytest.raises(DomainError):
        cauchy_linear(p, np.array([1.0, 0.0]), np.array([0.5, 0.0]), 0.5)


@pytest.mark.parametrize("family", ["sphere_uniform", "discrete_corners"])
def test_cauchy_linear_rejects_families(family):
    with pytest.raises(UnsupportedFamilyError):
        InterpolationScheme("cauchy_linear", PriorSpec(family, 4))
    with pytest.raises(UnsupportedFamilyError):
        cauchy_linear(PriorSpec(family, 2), np.ones(2) * 0.1, np.ones(2) * 0.2, 0.5)


def test_scheme_requires_prior():
    with pytest.raises(ValueError):
        InterpolationScheme("spherical_cauchy_linear")
    with pytest.raises(UnsupportedFamilyError):
        InterpolationScheme("spherical_cauchy_linear", PriorSpec("uniform", 4))
    assert InterpolationScheme("linear").to_dict() == {"kind": "linear", "prior": None}


# --- chi-norm transform ---------------------------------------------------------

@pytest.mark.parametrize("D", [1, 2, 5, 100, 1000])
def test_chi_median(D):
    assert chi_median(D) == pytest.approx(sps.chi(D).median(), rel=1e-12)
    assert chi_norm_transform(D, chi_median(D)) == pytest.approx(0.0, abs=1e-12)
    assert chi_norm_transform_inv(D, 0.0) == chi_median(D)


def test_chi_transform_two_dims_closed_form():
    assert chi_norm_transform(2, math.sqrt(2 * math.log(2))) == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("D", [1, 3, 100, 400])
def test_chi_transform_round_trip(D):
    r = np.linspace(sps.chi(D).ppf(1e-6), sps.chi(D).ppf(1 - 1e-6), 500)
    back = chi_norm_transform_inv(D, chi_norm_transform(D, r))
    assert np.max(np.abs(back / r - 1)) <= 1e-8


def test_chi_transform_against_scipy():
    r = np.linspace(7, 13, 25)
    ref = sps.cauchy.ppf(sps.chi2(100).cdf(r * r))
    assert np.allclose(chi_norm_transform(100, r), ref, rtol=1e-9)


def test_chi_transform_domain():
    with pytest.raises(DomainError):
        chi_norm_transform(10, 0.0)
    with pytest.raises(DomainError):
        chi_norm_transform(10, np.array([1.0, -2.0]))


# --- spherical Cauchy-linear ------------------------------------------------------

def test_spherical_cauchy_linear_endpoints():
    x1, x2 = _pair(100)
    assert np.allclose(spherical_cauchy_linear(NORMAL, x1, x2, 0.0), x1, atol=1e-9)
    assert np.allclose(spherical_cauchy_linear(NORMAL, x1, x2, 1.0), x2, atol=1e-9)


@pytest.mark.parametrize("lam", [0.1, 0.37, 0.5, 0.9])
def test_spherical_cauchy_linear_equal_norms(lam):
    x1, x2 = _pair(100)
    R = 9.3
    out = spherical_cauchy_linear(NORMAL, R * x1 / np.linalg.norm(x1),
                                  R * x2 / np.linalg.norm(x2), lam)
    assert abs(np.linalg.norm(out) - R) <= 1e-8


def test_spherical_cauchy_linear_norm_example():
    x1 = 9.0 * np.eye(100)[0]
    x2 = 11.0 * np.eye(100)[1]
    out = spherical_cauchy_linear(NORMAL, x1, x2, 0.5)
    c = 0.5 * (chi_norm_transform(100, 9.0) + chi_norm_transform(100, 11.0))
    assert np.linalg.norm(out) == pytest.approx(chi_norm_transform_inv(100, c), rel=1e-12)
    # the same radius through scipy's chi-square law
    t = [sps.cauchy.ppf(sps.chi2(100).cdf(v * v)) for v in (9.0, 11.0)]
    ref = math.sqrt(sps.chi2(100).ppf(sps.cauchy.cdf(0.5 * sum(t))))
    assert np.linalg.norm(out) == pytest.approx(ref, rel=1e-9)
    # direction is the slerp midpoint
    assert np.allclose(out / np.linalg.norm(out), (np.eye(100)[0] + np.eye(100)[1]) / math.sqrt(2))


def test_spherical_cauchy_linear_errors():
    x = np.ones(100)
    with pytest.raises(AntiparallelError):
        spherical_cauchy_linear(NORMAL, x, -x, 0.5)
    with pytest.raises(ZeroVectorError):
        spherical_cauchy_linear(NORMAL, np.zeros(100), x, 0.5)
    with pytest.raises(UnsupportedFamilyError):
        spherical_cauchy_linear(PriorSpec("cauchy", 100), x, 2 * x, 0.5)


# --- path properties -------------------------------------------------------------

@pytest.mark.parametrize("kind", [k.value for k in Kind])
def test_endpoint_identity(kind):
    x1, x2 = _pair()
    s = _scheme(kind)
    assert np.allclose(s(x1, x2, 0.0), x1, atol=1e-9)
    assert np.allclose(s(x1, x2, 1.0), x2, atol=1e-9)


@pytest.mark.parametrize("kind", [k.value for k in Kind])
def test_continuity(kind):
    x1, x2 = _pair(seed=11)
    lams = np.linspace(0, 1, 1001)
    path = interpolation_path(_scheme(kind), x1, x2, lams)
    steps = np.linalg.norm(np.diff(path.points, axis=0), axis=1)
    assert steps.max() <= 10 * np.median(steps)


def test_segment_nesting_linear():
    x1, x2 = _pair()
    la, lb = 0.2, 0.7
    a, b = linear(x1, x2, la), linear(x1, x2, lb)
    for t in (0.0, 0.3, 0.5, 1.0):
        assert np.allclose(linear(a, b, t), linear(x1, x2, la + t * (lb - la)), atol=1e-9)


def test_segment_nesting_cauchy_linear_in_cauchy_space():
    x1, x2 = _pair()
    p = PriorSpec("normal", 6)
    la, lb = 0.15, 0.8
    a, b = cauchy_linear(p, x1, x2, la), cauchy_linear(p, x1, x2, lb)
    for t in (0.0, 0.4, 1.0):
        lhs = to_cauchy("normal", cauchy_linear(p, a, b, t))
        rhs = to_cauchy("normal", cauchy_linear(p, x1, x2, la + t * (lb - la)))
        assert np.allclose(lhs, rhs, atol=1e-9)


def test_interpolation_path():
    x1, x2 = _pair()
    path = interpolation_path(InterpolationScheme("normalized"), x1, x2, [0, 0.5, 1])
    assert np.array_equal(path.points[0], x1)
    assert np.allclose(path.points[-1], x2)
    with pytest.raises(ValueError):
        interpolation_path(InterpolationScheme("linear"), x1, x2, [0.5, 0.1])


# --- convex combinations -----------------------------------------------------------

def test_multi_point_examples():
    x = np.array([1.0, -2.0, 3.0])
    assert np.array_equal(multi_point_combination([x], [1.0]), x)
    out = multi_point_combination([x, x, x], [1 / 3, 1 / 3, 1 / 3])
    assert np.allclose(out, x, rtol=1e-15)


def test_multi_point_per_row_weights():
    pts = np.arange(24, dtype=float).reshape(3, 4, 2)
    w = np.array([[1, 0, 0.5, 0.2], [0, 1, 0.5, 0.3], [0, 0, 0, 0.5]])
    out = multi_point_combination(pts, w)
    assert np.allclose(out, np.einsum("kn,knd->nd", w, pts))


def test_multi_point_errors():
    x = np.ones(3)
    with pytest.raises(DomainError):
        multi_point_combination([x, x], [0.5, 0.6])
    with pytest.raises(DomainError):
        multi_point_combination([x, x], [1.5, -0.5])
    with pytest.raises(DimensionMismatchError):
        multi_point_combination([x, x], [1.0])
    with pytest.raises(ValueError):
        multi_point_combination([np.ones(3), np.ones(4)], [0.5, 0.5])

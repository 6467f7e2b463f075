import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from latentprior import specfun as sf
from latentprior.errors import ConvergenceError, DomainError

mpmath.mp.dps = 30


def _bisect(f, lo, hi, target, tol=1e-14):
    while hi - lo > tol * max(1.0, abs(hi)):
        mid = 0.5 * (lo + hi)
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# --- oracle values ---------------------------------------------------------

def test_erf_one_against_quadrature():
    ref, _ = integrate.quad(lambda t: 2 / math.sqrt(math.pi) * math.exp(-t * t), 0, 1,
                            epsabs=1e-15)
    assert sf.erf(1.0) == pytest.approx(ref, abs=1e-14)
    assert sf.erf(1.0) == pytest.approx(0.8427007929497149, abs=1e-15)


def test_erf_inv_half_against_bisection():
    ref = _bisect(math.erf, 0.0, 1.0, 0.5)
    assert sf.erf_inv(0.5) == pytest.approx(ref, abs=1e-13)
    assert sf.erf_inv(0.5) == pytest.approx(0.4769362762044699, abs=1e-14)


def test_erf_trivial_values():
    assert sf.erf(0.0) == 0.0
    assert sf.erf_inv(0.0) == 0.0
    assert abs(sf.erf(8.0) - 1.0) <= 1e-15
    assert abs(sf.erf(-8.0) + 1.0) <= 1e-15
    assert sf.erf_inv(sf.erf(0.7)) == pytest.approx(0.7, abs=1e-12)


def test_erf_matches_mpmath_on_grid():
    x = np.linspace(-6, 6, 2401)
    ref = np.array([float(mpmath.erf(v)) for v in x])
    assert np.max(np.abs(sf.erf(x) - ref)) < 2e-15


def test_erfc_relative_accuracy_in_tail():
    x = np.linspace(0.5, 26, 400)
    ref = np.array([float(mpmath.erfc(v)) for v in x])
    assert np.max(np.abs(sf.erfc(x) / ref - 1)) < 1e-13


@pytest.mark.parametrize("a,expected", [
    (1.0, 0.0),
    (0.5, math.log(math.sqrt(math.pi))),
    (10.0, math.log(362880.0)),
])
def test_log_gamma_closed_forms(a, expected):
    assert sf.log_gamma(a) == pytest.approx(expected, abs=1e-13)


def test_log_gamma_against_stdlib():
    a = np.concatenate([np.linspace(0.01, 5, 200), np.linspace(5, 500, 200)])
    ref = np.array([math.lgamma(v) for v in a])
    assert np.allclose(sf.log_gamma(a), ref, rtol=1e-13, atol=1e-13)


def test_reg_lower_gamma_examples():
    assert sf.reg_lower_gamma(1.0, math.log(2)) == pytest.approx(0.5, abs=1e-14)
    for a in (0.3, 1.0, 7.5, 80.0):
        assert sf.reg_lower_gamma(a, 0.0) == 0.0
    assert sf.reg_lower_gamma(0.5, 1.0) == pytest.approx(sf.erf(1.0), abs=1e-14)


@pytest.mark.parametrize("a", [0.5, 1, 3.7, 25, 50, 100, 500])
def test_reg_lower_gamma_against_mpmath(a):
    x = np.linspace(0, a + 12 * math.sqrt(a) + 10, 60)
    ref = np.array([float(mpmath.gammainc(a, 0, v, regularized=True)) for v in x])
    assert np.max(np.abs(sf.reg_lower_gamma(a, x) - ref)) < 1e-12


def test_reg_lower_gamma_inv_examples():
    assert sf.reg_lower_gamma_inv(1.0, 0.5) == pytest.approx(math.log(2), rel=1e-13)
    assert sf.reg_lower_gamma_inv(3.0, 0.0) == 0.0


def test_gamma_median_fifty():
    # bisection on the implemented P and an mpmath root agree
    bis = _bisect(lambda x: sf.reg_lower_gamma(50.0, x), 0.0, 200.0, 0.5, tol=1e-15)
    mp = float(mpmath.findroot(
        lambda x: mpmath.gammainc(50, 0, x, regularized=True) - mpmath.mpf("0.5"), 49.6))
    assert bis == pytest.approx(mp, rel=1e-12)
    assert sf.reg_lower_gamma_inv(50.0, 0.5) == pytest.approx(mp, rel=1e-12)
    assert mp == pytest.approx(49.6670646179942, rel=1e-13)


# --- invariants -------------------------------------------------------------

def test_erf_odd_and_monotone():
    x = np.linspace(-7, 7, 10_000)
    y = sf.erf(x)
    assert np.array_equal(sf.erf(-x), -y)
    assert np.all(np.diff(y) >= 0)
    assert np.all(np.abs(y) <= 1)


@pytest.mark.parametrize("p", [-0.999, -0.9, -0.5, -0.1, 0.0, 0.1, 0.5, 0.9, 0.999])
def test_erf_round_trip(p):
    assert abs(sf.erf(sf.erf_inv(p)) - p) <= 1e-10


@pytest.mark.parametrize("a", [0.5, 1, 5, 50, 100])
@pytest.mark.parametrize("p", [0.001, 0.25, 0.5, 0.75, 0.999])
def test_gamma_round_trip(a, p):
    assert abs(sf.reg_lower_gamma(a, sf.reg_lower_gamma_inv(a, p)) - p) <= 1e-10


def test_half_gamma_is_erf_of_square():
    x = np.linspace(0, 5, 501)
    assert np.max(np.abs(sf.reg_lower_gamma(0.5, x * x) - sf.erf(x))) <= 1e-10


@pytest.mark.parametrize("a", [0.1, 0.5, 2, 30, 250])
def test_gamma_monotone(a):
    x = np.linspace(0, 4 * a + 40, 5000)
    assert np.all(np.diff(sf.reg_lower_gamma(a, x)) >= 0)


@settings(max_examples=200, deadline=None)
@given(st.floats(-0.9999999, 0.9999999))
def test_erf_inv_round_trip_property(p):
    assert abs(sf.erf(sf.erf_inv(p)) - p) <= 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-12, 1.0, exclude_max=True))
def test_erfc_inv_round_trip_relative(q):
    x = sf.erfc_inv(q)
    assert sf.erfc(x) == pytest.approx(q, rel=1e-11)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.05, 400), st.floats(1e-9, 1 - 1e-9))
def test_gamma_inv_property(a, p):
    x = sf.reg_lower_gamma_inv(a, p)
    assert abs(sf.reg_lower_gamma(a, x) - p) <= 1e-10


def test_vectorized_matches_scalar():
    p = np.array([[-0.3, 0.2], [0.9, -0.99]])
    out = sf.erf_inv(p)
    assert out.shape == p.shape
    assert all(out[i, j] == sf.erf_inv(float(p[i, j])) for i in range(2) for j in range(2))
    assert isinstance(sf.erf(0.3), float)


# --- errors -----------------------------------------------------------------

@pytest.mark.parametrize("p", [1.0, -1.0, 1.5, float("nan")])
def test_erf_inv_domain(p):
    with pytest.raises(DomainError):
        sf.erf_inv(p)


@pytest.mark.parametrize("a", [0.0, -1.0])
def test_log_gamma_domain(a):
    with pytest.raises(DomainError):
        sf.log_gamma(a)


@pytest.mark.parametrize("a,x", [(0.0, 1.0), (-2.0, 1.0), (1.0, -0.1)])
def test_reg_lower_gamma_domain(a, x):
    with pytest.raises(DomainError):
        sf.reg_lower_gamma(a, x)


@pytest.mark.parametrize("p", [1.0, -0.1])
def test_reg_lower_gamma_inv_domain(p):
    with pytest.raises(DomainError):
        sf.reg_lower_gamma_inv(2.0, p)


def test_convergence_error_when_budget_exhausted():
    with pytest.raises(ConvergenceError):
        sf.reg_lower_gamma_inv(50.0, 0.3, sf.Precision(1e-12, 1e-15, max_iter=1))


@pytest.mark.parametrize("kw", [dict(abs_tol=0), dict(rel_tol=-1), dict(max_iter=0)])
def test_precision_validation(kw):
    with pytest.raises(ValueError):
        sf.Precision(**kw)

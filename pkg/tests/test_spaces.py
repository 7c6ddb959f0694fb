import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dalpha_ergodic.series import CoeffSeries, from_coeffs, horner, monomial
from dalpha_ergodic.spaces import (
    SpaceParams,
    coeff_norm_sq,
    integral_norm_sq,
    kernel,
    kernel_coeffs,
    kernel_norm_sq,
    pointwise_bound,
)


def test_alpha_validation():
    with pytest.raises(ValueError):
        SpaceParams(-1.0)
    with pytest.raises(TypeError):
        SpaceParams(float("nan"))


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 0.5, 1.0, 2.0])
def test_monomial_norms(alpha):
    sp = SpaceParams(alpha)
    for n in (0, 1, 5, 40):
        assert math.isclose(coeff_norm_sq(monomial(n), sp), (n + 1) ** (1 - alpha), rel_tol=1e-14)


def test_small_examples():
    f = from_coeffs([1, 1], 1)
    assert coeff_norm_sq(f, SpaceParams(0.0)) == pytest.approx(3.0)
    assert coeff_norm_sq(f, SpaceParams(1.0)) == pytest.approx(2.0)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.0])
def test_integral_norm_on_monomials(alpha):
    # |f(0)|^2 + (1/pi) int |f'|^2 (1-|z|^2)^alpha dA = n^2 B(n, alpha+1) for z^n
    sp = SpaceParams(alpha)
    for n in (1, 3, 8):
        r = integral_norm_sq(monomial(n), sp)
        ref = n**2 * math.exp(math.lgamma(n) + math.lgamma(alpha + 1) - math.lgamma(n + alpha + 1))
        assert r.converged
        assert r.value == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("alpha", [-0.5, 0.3, 0.9])
def test_norm_ratio_on_monomials_tends_to_gamma(alpha):
    # integral / coefficient norm on z^n -> Gamma(alpha + 1), error O(1/n)
    sp = SpaceParams(alpha)
    errs = []
    for n in (16, 64, 256, 1024):
        ratio = integral_norm_sq(monomial(n), sp).value / coeff_norm_sq(monomial(n), sp)
        errs.append(abs(ratio / math.gamma(alpha + 1) - 1))
    assert errs[3] < errs[2] < errs[1] < errs[0]
    assert errs[3] < 2e-3


def test_integral_norm_dirichlet_closed_form(rng):
    # at alpha = 0 the integral form is |a_0|^2 + sum n |a_n|^2
    a = rng.standard_normal(20) + 1j * rng.standard_normal(20)
    r = integral_norm_sq(CoeffSeries(a), SpaceParams(0.0))
    n = np.arange(20)
    ref = abs(a[0]) ** 2 + np.sum(n * np.abs(a) ** 2)
    assert r.value == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("alpha", [0.0, 1.0])
def test_kernel_coefficients_reproduce(alpha):
    sp = SpaceParams(alpha)
    w = 0.4 - 0.3j
    kc = kernel_coeffs(w, sp, 400)
    # <f, k_w> = f(w) in the coefficient inner product
    f = from_coeffs([1.0, -2.0, 0.5j, 3.0], 3)
    weights = sp.norm_weights(4)
    inner = np.sum(weights * f.coeffs * np.conj(kc[:4]))
    assert inner == pytest.approx(complex(horner(f, w)), abs=1e-12)
    k = CoeffSeries(kc)
    assert coeff_norm_sq(k, sp) == pytest.approx(kernel_norm_sq(w, sp), rel=1e-10)
    z = np.array([0.1, -0.5j, 0.7])
    np.testing.assert_allclose(kernel(w, z, sp), horner(k, z), rtol=1e-10)


def test_intermediate_kernel_is_an_equivalent_norm_kernel():
    # (1 - conj(w) z)^(-alpha) reproduces sum n!/(alpha)_n |a_n|^2, which is
    # comparable to (but not equal to) the coefficient norm
    sp = SpaceParams(0.3)
    w = 0.6 + 0.2j
    kc = kernel_coeffs(w, sp, 2000)
    n = np.arange(kc.size)
    pochhammer_ratio = np.exp(np.cumsum(np.log(np.maximum(n - 1 + 0.3, 1e-300) / np.maximum(n, 1)) * (n > 0)))
    own = np.sum(np.abs(kc) ** 2 / pochhammer_ratio)
    assert own == pytest.approx(kernel_norm_sq(w, sp), rel=1e-10)
    ratio = coeff_norm_sq(CoeffSeries(kc), sp) / kernel_norm_sq(w, sp)
    assert 0.1 < ratio < 10
    z = np.array([0.1, -0.5j, 0.7])
    np.testing.assert_allclose(kernel(w, z, sp), horner(CoeffSeries(kc), z), rtol=1e-10)


def test_kernel_needs_closed_form_range():
    with pytest.raises(ValueError):
        kernel_norm_sq(0.1, SpaceParams(-0.5))
    with pytest.raises(ValueError):
        kernel(1.0, np.array([0.0]), SpaceParams(0.5))


@given(st.floats(min_value=-0.95, max_value=0.95), st.floats(min_value=-0.95, max_value=0.95),
       st.sampled_from([0.0, 0.5, 1.0]))
@settings(max_examples=50, deadline=None)
def test_pointwise_bound_holds(x, y, alpha):
    w = complex(x, y)
    if abs(w) >= 0.99:
        return
    f = from_coeffs([0.3, -1.0, 0.25j, 2.0, -0.5], 4)
    lhs, rhs = pointwise_bound(f, w, SpaceParams(alpha))
    assert lhs <= rhs * (1 + 1e-12)

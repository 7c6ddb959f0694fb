"""Weighted Dirichlet spaces ``D_alpha``: coefficient norm, integral norm, kernels."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_alpha, check_in_disc
from .series import CoeffSeries, derivative, horner


@dataclass(frozen=True)
class SpaceParams:
    """Weight exponent of ``D_alpha``; ``||f||^2 = sum (n+1)^(1-alpha) |a_n|^2``.

    ``alpha = 0, 1, 2`` give the Dirichlet, Hardy and Bergman spaces.
    """

    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))

    def norm_weights(self, n_terms: int) -> np.ndarray:
        """``w_n = (n+1)^(1-alpha)`` for ``n < n_terms``."""
        return np.arange(1, n_terms + 1, dtype=float) ** (1.0 - self.alpha)

    def basis_scale(self, n_terms: int) -> np.ndarray:
        """``||z^n|| = (n+1)^((1-alpha)/2)``; ``e_n = z^n / basis_scale[n]`` is orthonormal."""
        return np.arange(1, n_terms + 1, dtype=float) ** ((1.0 - self.alpha) / 2.0)

    @property
    def has_kernel_formula(self) -> bool:
        return 0.0 <= self.alpha <= 1.0


def as_space(sp) -> SpaceParams:
    return sp if isinstance(sp, SpaceParams) else SpaceParams(sp)


def coeff_norm_sq(f: CoeffSeries, sp: SpaceParams) -> float:
    """``sum (n+1)^(1-alpha) |a_n|^2`` (numpy's pairwise summation)."""
    sp = as_space(sp)
    c = f.trimmed()
    return float(np.sum(sp.norm_weights(c.size) * (c.real**2 + c.imag**2)))


def integral_norm_sq(f: CoeffSeries, sp: SpaceParams, tol: float = 1e-10):
    """``|f(0)|^2 + (1/pi) int_D |f'|^2 (1-|z|^2)^alpha dA`` as a QuadResult.

    This is an equivalent norm, not equal to :func:`coeff_norm_sq`;
    on monomials the ratio tends to ``Gamma(alpha+1)``.
    """
    from .quadrature import QuadResult, integrate_disc, polynomial_modulus_sq

    sp = as_space(sp)
    df = derivative(f)
    res = integrate_disc(polynomial_modulus_sq(df), sp, tol, singular_points=())
    f0 = abs(complex(f.coeffs[0])) ** 2
    return QuadResult(
        value=res.value + f0,
        abs_error_estimate=res.abs_error_estimate,
        converged=res.converged,
        refinement_depth=res.refinement_depth,
        divergent=res.divergent,
    )


def kernel_norm_sq(w: complex, sp: SpaceParams) -> float:
    """Squared norm of the reproducing kernel at ``w`` for ``0 <= alpha <= 1``."""
    sp = as_space(sp)
    w = check_in_disc(w)
    if not sp.has_kernel_formula:
        raise ValueError(f"kernel formulas are only available for 0 <= alpha <= 1, got {sp.alpha}")
    t = abs(w) ** 2
    if sp.alpha > 0:
        return (1.0 - t) ** (-sp.alpha)
    if t == 0.0:
        return 1.0
    return -math.log1p(-t) / t


def kernel(w: complex, z, sp: SpaceParams) -> np.ndarray:
    """Reproducing kernel ``k_w`` evaluated at points ``z`` of the disc."""
    sp = as_space(sp)
    w = check_in_disc(w)
    if not sp.has_kernel_formula:
        raise ValueError(f"kernel formulas are only available for 0 <= alpha <= 1, got {sp.alpha}")
    u = np.conj(w) * np.asarray(z, dtype=complex)
    if sp.alpha > 0:
        return (1.0 - u) ** (-sp.alpha)
    out = np.ones_like(u)
    big = np.abs(u) > 1e-8
    out[big] = -np.log1p(-u[big]) / u[big]
    small = ~big
    out[small] = 1.0 + u[small] / 2.0
    return out


def kernel_coeffs(w: complex, sp: SpaceParams, cap: int) -> np.ndarray:
    """Taylor coefficients of ``k_w`` up to ``cap``."""
    sp = as_space(sp)
    w = check_in_disc(w)
    n = np.arange(cap + 1)
    wb = np.conj(w) ** n
    if sp.alpha > 0:
        # (alpha)_n / n! by a running product
        ratio = np.ones(cap + 1)
        ratio[1:] = np.cumprod((n[1:] - 1 + sp.alpha) / n[1:])
        return ratio * wb
    return wb / (n + 1)


def pointwise_bound(f: CoeffSeries, w: complex, sp: SpaceParams) -> tuple[float, float]:
    """``(|f(w)|^2, ||k_w||^2 * ||f||^2)``; the ratio stays bounded over the disc."""
    sp = as_space(sp)
    lhs = abs(complex(horner(f, check_in_disc(w)))) ** 2
    return lhs, kernel_norm_sq(w, sp) * coeff_norm_sq(f, sp)

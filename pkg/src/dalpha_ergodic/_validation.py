"""Small argument checks shared by the estimators and the numeric kernels."""

from __future__ import annotations

import math
from numbers import Integral, Real

import numpy as np

UNIMODULAR_TOL = 1e-12


def check_nonneg_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, Integral):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return int(value)


def check_positive_int(value, name: str) -> int:
    value = check_nonneg_int(value, name)
    if value == 0:
        raise ValueError(f"{name} must be >= 1")
    return value


def check_positive(value, name: str) -> float:
    if isinstance(value, bool) or not isinstance(value, Real) or not math.isfinite(value):
        raise TypeError(f"{name} must be a finite real number, got {value!r}")
    if value <= 0:
        raise ValueError(f"{name} must be > 0, got {value}")
    return float(value)


def check_alpha(alpha) -> float:
    if isinstance(alpha, bool) or not isinstance(alpha, Real) or not math.isfinite(alpha):
        raise TypeError(f"alpha must be a finite real number, got {alpha!r}")
    if alpha <= -1:
        raise ValueError(f"weighted Dirichlet spaces need alpha > -1, got {alpha}")
    return float(alpha)


def check_unimodular(lam, tol: float = UNIMODULAR_TOL) -> complex:
    lam = complex(lam)
    if not abs(abs(lam) - 1.0) <= tol:
        raise ValueError(f"lambda must satisfy |lambda| = 1 (got |lambda| = {abs(lam)!r})")
    return lam


def check_in_disc(w, name: str = "w") -> complex:
    w = complex(w)
    if not abs(w) < 1.0:
        raise ValueError(f"{name} must lie in the open unit disc, got |{name}| = {abs(w)}")
    return w


def check_dyadic_list(n_values) -> np.ndarray:
    arr = np.asarray(list(n_values), dtype=np.int64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("need a non-empty list of integers")
    if np.any(arr < 0):
        raise ValueError("n values must be nonnegative")
    if np.any(np.diff(arr) <= 0):
        raise ValueError("n values must be strictly increasing")
    return arr


def dyadic(n_max: int, start: int = 1) -> list[int]:
    """``[start, 2*start, 4*start, ...]`` up to and including ``n_max``."""
    n_max = check_positive_int(n_max, "n_max")
    out = []
    n = start
    while n <= n_max:
        out.append(n)
        n *= 2
    return out

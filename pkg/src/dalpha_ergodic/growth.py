"""Norm sequences indexed by ``n`` and their power-law fits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_dyadic_list, check_positive


@dataclass(frozen=True)
class GrowthSeq:
    """Operator norms ``norms[i]`` at ``n_values[i]`` (one ``lam`` if Cesaro means).

    ``flags[i]`` marks a value that failed a numerical acceptance rule
    (truncation not converged, power iteration not converged).
    """

    n_values: np.ndarray
    norms: np.ndarray
    lam: complex | None = None
    meta: dict = field(default_factory=dict)
    flags: np.ndarray | None = None

    def __post_init__(self):
        n = check_dyadic_list(self.n_values)
        v = np.asarray(self.norms, dtype=float).ravel()
        if v.shape != n.shape:
            raise ValueError("n_values and norms must have the same length")
        if np.any(v < 0) or not np.all(np.isfinite(v)):
            raise ValueError("norms must be finite and nonnegative")
        f = np.zeros(n.size, dtype=bool) if self.flags is None else np.asarray(self.flags, dtype=bool)
        if f.shape != n.shape:
            raise ValueError("flags must match n_values")
        object.__setattr__(self, "n_values", n)
        object.__setattr__(self, "norms", v)
        object.__setattr__(self, "flags", f)

    def __len__(self):
        return self.n_values.size

    @property
    def flagged(self) -> bool:
        return bool(self.flags.any())

    def as_dict(self) -> dict:
        out = {
            "n": [int(n) for n in self.n_values],
            "norm": [float(v) for v in self.norms],
            "flag": [bool(f) for f in self.flags],
        }
        if self.lam is not None:
            out["lambda"] = [float(np.real(self.lam)), float(np.imag(self.lam))]
        return out


@dataclass(frozen=True)
class GrowthReport:
    """Least-squares fit ``log norm ~ exponent * log n + c``.

    ``plateau`` compares the last two values of the running maximum, so a
    decaying (hence bounded) sequence counts as a plateau.
    """

    exponent: float
    intercept: float
    r_squared: float
    plateau: bool
    last_change: float
    plateau_tol: float
    window: tuple[int, int]

    def as_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "plateau": self.plateau,
            "last_change": self.last_change,
            "plateau_tol": self.plateau_tol,
            "window": list(self.window),
        }


def _select(n, v, window):
    if window is None:
        return n, v
    lo, hi = window
    keep = (n >= lo) & (n <= hi)
    return n[keep], v[keep]


def growth_fit(seq, norms=None, *, window: tuple[int, int] | None = None,
               plateau_tol: float = 0.01) -> GrowthReport:
    """Fit a power law to a norm sequence.

    Parameters
    ----------
    seq : GrowthSeq or array_like
        The sequence, or the ``n`` values when ``norms`` is given.
    window : (int, int), optional
        Inclusive range of ``n`` used for both the fit and the plateau test.
    plateau_tol : float
        Relative change allowed between the last two running-max values.
    """
    plateau_tol = check_positive(plateau_tol, "plateau_tol")
    if isinstance(seq, GrowthSeq):
        n, v = seq.n_values, seq.norms
    else:
        n = check_dyadic_list(seq)
        v = np.asarray(norms, dtype=float).ravel()
        if v.shape != n.shape:
            raise ValueError("n_values and norms must have the same length")
    n, v = _select(np.asarray(n), np.asarray(v, dtype=float), window)
    if n.size < 4:
        raise ValueError(f"growth fits need at least 4 points in the window, got {n.size}")
    if np.any(n <= 0) or np.any(v <= 0):
        raise ValueError("growth fits need n >= 1 and strictly positive norms")
    x, y = np.log(n.astype(float)), np.log(v)
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 if ss_tot <= 1e-30 else max(0.0, 1.0 - ss_res / ss_tot)
    run = np.maximum.accumulate(v)
    change = abs(run[-1] - run[-2]) / run[-2]
    return GrowthReport(float(slope), float(icpt), float(min(r2, 1.0)), bool(change < plateau_tol),
                        float(change), plateau_tol, (int(n[0]), int(n[-1])))


def growth_verdict(rep: GrowthReport, growth_threshold: float = 0.05, min_r2: float = 0.9) -> str:
    """``'bounded'``, ``'growing'`` or ``'inconclusive'`` under the thresholds."""
    if rep.plateau:
        return "bounded"
    if rep.exponent > growth_threshold and rep.r_squared > min_r2:
        return "growing"
    return "inconclusive"


class GrowthFit(RegressorMixin, BaseEstimator):
    """Estimator wrapper around :func:`growth_fit`.

    ``fit(n, norms)`` stores ``exponent_``, ``intercept_``, ``r_squared_`` and
    ``plateau_``; ``predict(n)`` evaluates the fitted power law.
    """

    def __init__(self, plateau_tol: float = 0.01, window=None):
        self.plateau_tol = plateau_tol
        self.window = window

    def fit(self, X, y):
        n = np.asarray(X).ravel()
        rep = growth_fit(n, y, window=self.window, plateau_tol=self.plateau_tol)
        self.report_ = rep
        self.exponent_ = rep.exponent
        self.intercept_ = rep.intercept
        self.r_squared_ = rep.r_squared
        self.plateau_ = rep.plateau
        return self

    def predict(self, X):
        check_is_fitted(self, "exponent_")
        n = np.asarray(X, dtype=float).ravel()
        return np.exp(self.intercept_) * n**self.exponent_

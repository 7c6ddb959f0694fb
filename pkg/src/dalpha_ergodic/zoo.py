"""Named operators and symbols with their expected ergodic behaviour.

Each :class:`ZooEntry` carries claims that can be executed: running a claim
computes the relevant diagnostic and compares it with the expected outcome.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Callable

import numpy as np
import scipy.sparse as sps

from ._validation import check_positive_int
from .citations import cite
from .growth import growth_fit, growth_verdict
from .operators import (
    OperatorMatrix,
    acb_probe,
    cesaro_norm_seq,
    dense_cesaro_sup,
    dense_operator,
    multiplier_matrix,
    operator_norm,
    power_norm_seq,
    weighted_backward_shift,
)
from .quadrature import ClosedForm, DiscIntegrand, integrate_disc, sup_norm_check
from .series import DEFAULT_CAP, CoeffSeries, binomial_one_minus_z, exp_series, from_coeffs, mul
from .spaces import SpaceParams, as_space

DEFAULT_THETA = math.pi / 2


def _check_theta(theta: float) -> float:
    theta = float(theta)
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    if math.isclose(math.remainder(theta, 2 * math.pi), 0.0, abs_tol=1e-15):
        raise ValueError("theta must be nonzero modulo 2*pi")
    return theta


# ----------------------------------------------------------------------------
# operators


def make_assani() -> OperatorMatrix:
    """The 2x2 matrix ``[[-1, 2], [0, -1]]``."""
    return dense_operator(np.array([[-1.0, 2.0], [0.0, -1.0]]), "Assani matrix [[-1,2],[0,-1]]")


def assani_power(n: int) -> np.ndarray:
    """Closed form ``T^n = [[(-1)^n, (-1)^(n-1) 2n], [0, (-1)^n]]`` (exact integers)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    s = -1 if n % 2 else 1
    return np.array([[s, -s * 2 * n], [0, s]], dtype=np.int64)


def make_backward_shift(a: float, N: int) -> OperatorMatrix:
    """Weighted backward shift ``T e_k = (k/(k-1))^a e_(k-1)`` on ``l^2``, ``0 < a <= 1/2``."""
    a = float(a)
    if not 0.0 < a <= 0.5:
        raise ValueError(f"the shift exponent must lie in (0, 1/2], got {a}")
    if N < 2:
        raise ValueError("N must be >= 2")
    return weighted_backward_shift(a, N)


def _backward_unweighted(N: int) -> np.ndarray:
    B = np.zeros((N, N))
    B[np.arange(N - 1), np.arange(1, N)] = 1.0
    return B


def make_tz_block(N: int) -> OperatorMatrix:
    """``T = [[B, B - I], [0, B]]`` with ``B`` the backward shift on ``N`` coordinates.

    Stored sparse: every power has at most three nonzero diagonals per block.
    """
    if N < 2:
        raise ValueError("N must be >= 2")
    B = sps.diags([np.ones(N - 1)], [1], shape=(N, N), format="csr")
    T = sps.bmat([[B, B - sps.identity(N)], [None, B]], format="csr")
    return dense_operator(T, f"block operator [[B, B-I], [0, B]], N={N}")


def tz_block_power(N: int, n: int) -> np.ndarray:
    """Closed form ``T^n = [[B^n, n B^(n-1) (B - I)], [0, B^n]]``."""
    n = check_positive_int(n, "n")
    B = _backward_unweighted(N)
    Bn1 = np.linalg.matrix_power(B, n - 1)
    Bn = Bn1 @ B
    return np.block([[Bn, n * Bn1 @ (B - np.eye(N))], [np.zeros((N, N)), Bn]])


# ----------------------------------------------------------------------------
# symbols


def phi_mz() -> CoeffSeries:
    """``phi(z) = z``."""
    return CoeffSeries(np.array([0.0, 1.0]))


def phi_power_half(theta: float = DEFAULT_THETA, k: int = 1) -> CoeffSeries:
    """``e^(i theta) ((1 - z)/2)^k`` from exact binomials."""
    theta = _check_theta(theta)
    k = check_positive_int(k, "k")
    return binomial_one_minus_z(k) * complex(np.exp(1j * theta))


def _cusp_exponent(cap: int) -> CoeffSeries:
    # -(1+z)/(1-z) = -1 - 2 sum_{k>=1} z^k, expanded by hand (no series division)
    c = np.full(cap + 1, -2.0)
    c[0] = -1.0
    return CoeffSeries(c, tail_flag=True)


def phi_cusp(theta: float = DEFAULT_THETA, cap: int = DEFAULT_CAP) -> CoeffSeries:
    """``e^(i theta) (1 - z)/2 exp(-(1+z)/(1-z))`` truncated at ``cap`` (``>= 512``)."""
    theta = _check_theta(theta)
    if cap < 512:
        raise ValueError(f"the cusp symbol needs cap >= 512, got {cap}")
    g = exp_series(_cusp_exponent(cap), cap)
    half = from_coeffs([0.5, -0.5], cap)
    out = mul(half, g, cap) * complex(np.exp(1j * theta))
    return CoeffSeries(out.coeffs, True)


def cusp_closed_form(theta: float = DEFAULT_THETA) -> ClosedForm:
    """Formulas for the cusp symbol and its derivative on the open disc."""
    c = complex(np.exp(1j * _check_theta(theta)))

    def value(z):
        z = np.asarray(z, dtype=complex)
        return c * 0.5 * (1 - z) * np.exp(-(1 + z) / (1 - z))

    def deriv(z):
        z = np.asarray(z, dtype=complex)
        return c * np.exp(-(1 + z) / (1 - z)) * (-0.5 - 1.0 / (1 - z))

    return ClosedForm(value, deriv, f"cusp(theta={theta!r})")


@lru_cache(maxsize=2)
def _exp_cusp_coeffs(K: int) -> np.ndarray:
    """Coefficients of ``exp(-(1+z)/(1-z))`` up to ``K`` (real).

    From ``(1-z)^2 g' = -2 g``:
    ``(k+1) g_(k+1) = (2k - 2) g_k - (k-1) g_(k-1)``.
    """
    g = np.empty(K + 1)
    g[0] = math.exp(-1.0)
    if K >= 1:
        g[1] = -2.0 * g[0]
    for k in range(1, K):
        g[k + 1] = ((2 * k - 2) * g[k] - (k - 1) * g[k - 1]) / (k + 1)
    return g


def cusp_tail_mass(cap: int, sp: SpaceParams | float = 0.0, horizon: int = 1 << 20) -> float:
    """``sum_{k > cap} (k+1)^(1-alpha) |p_k|^2`` for the cusp symbol ``p``.

    Terms up to ``horizon`` are summed exactly; beyond it the tail is
    extrapolated from the power law ``|p_k|^2 ~ k^(-5/2)``.
    """
    sp = as_space(sp)
    g = _exp_cusp_coeffs(horizon)
    p = 0.5 * (g[1:] - g[:-1])  # p_k for k = 1..horizon
    k = np.arange(1, horizon + 1)
    terms = (k + 1.0) ** (1 - sp.alpha) * p**2
    head = float(np.sum(terms[cap:]))
    q = sp.alpha + 0.5  # terms decay like k^-(q+1)
    last = float(np.sum(terms[horizon // 2 :]))
    return head + (last / (2**q - 1) if q > 0 else math.inf)


# ----------------------------------------------------------------------------
# Chu-Vandermonde


def half_power_norm_sq_direct(m: int) -> Fraction:
    """``||((1 - z)/2)^m||^2`` in ``D_0`` from integer polynomial multiplication."""
    coeffs = [1]
    for _ in range(m):
        coeffs = [a - b for a, b in zip(coeffs + [0], [0] + coeffs)]
    return Fraction(sum((k + 1) * c * c for k, c in enumerate(coeffs)), 4**m)


def chu_vandermonde_sum(m: int, start: int = 0) -> Fraction:
    """``2^(-2m) sum_{k=start..m} C(m,k)^2 (k+1)``."""
    return Fraction(sum(comb(m, k) ** 2 * (k + 1) for k in range(start, m + 1)), 4**m)


def chu_vandermonde_closed(m: int) -> Fraction:
    """``2^(-2m) (C(2m, m) + m C(2m-1, m-1))``, the closed form of the sum from ``k = 0``."""
    extra = m * comb(2 * m - 1, m - 1) if m >= 1 else 0
    return Fraction(comb(2 * m, m) + extra, 4**m)


def half_power_norm_sq(m: int, sp: SpaceParams | float = 0.0) -> float:
    """Floating-point ``||((1 - z)/2)^m||^2`` via the exact binomial coefficients."""
    from .spaces import coeff_norm_sq

    return coeff_norm_sq(binomial_one_minus_z(m), as_space(sp))


# ----------------------------------------------------------------------------
# entries


@dataclass
class ClaimResult:
    name: str
    expected: str
    passed: bool
    measured: dict
    citation: str

    def as_dict(self):
        return {"claim": self.name, "expected": self.expected, "passed": self.passed,
                "measured": self.measured, "citation": self.citation}


@dataclass(frozen=True)
class Claim:
    name: str
    expected: str
    citation: str
    check: Callable[[], tuple[bool, dict]]

    def run(self) -> ClaimResult:
        passed, measured = self.check()
        return ClaimResult(self.name, self.expected, bool(passed), measured, self.citation)


@dataclass(frozen=True)
class ZooEntry:
    """A named example: a factory, the space it lives on and executable claims."""

    name: str
    kind: str  # 'operator' or 'symbol'
    factory: Callable[[], object]
    description: str
    alpha: float | None = None
    claims: tuple[Claim, ...] = field(default_factory=tuple)
    table: Callable[[], dict] | None = None


def _dyadic(n_max):
    return [2**k for k in range(int(math.log2(n_max)) + 1)]


def _table(power_seq, cesaro_seq):
    rows = []
    for i, n in enumerate(power_seq.n_values):
        rows.append({"n": int(n), "power_norm": float(power_seq.norms[i]),
                     "cesaro_norm": float(cesaro_seq.norms[i]) if cesaro_seq is not None else None})
    out = {"rows": rows, "power_fit": growth_fit(power_seq).as_dict()}
    if cesaro_seq is not None:
        out["cesaro_fit"] = growth_fit(cesaro_seq).as_dict()
    return out


# --- assani


def _assani_table():
    A = make_assani()
    ns = _dyadic(1024)
    return _table(power_norm_seq(A, ns), cesaro_norm_seq(A, lambda_grid=[1], n_list=ns)[0])


def _assani_cb():
    sup, arg = dense_cesaro_sup(make_assani().entries, 10**5)
    return sup < 3.0, {"sup_cesaro_norm": sup, "argmax_n": arg, "n_max": 10**5}


def _assani_not_pb():
    seq = power_norm_seq(make_assani(), _dyadic(1024))
    rep = growth_fit(seq)
    return growth_verdict(rep) == "growing", {"exponent": rep.exponent, "r_squared": rep.r_squared}


def _assani_ratio():
    n = 10**4
    val = operator_norm(assani_power(n).astype(float)).value
    r = val / (2 * n)
    return 0.99 <= r <= 1.01, {"n": n, "power_norm_over_2n": r}


# --- backward shifts


def _shift_table(a, n_max, N):
    def build():
        A = make_backward_shift(a, N)
        ns = _dyadic(n_max)
        return _table(power_norm_seq(A, ns), cesaro_norm_seq(A, lambda_grid=[1], n_list=ns)[0])

    return build


def backward_shift_acb(a: float, N_max: int) -> float:
    """ACB probe over ``e_1 .. e_(N_max)`` with averages up to ``N_max`` (exact section)."""
    A = make_backward_shift(a, N_max + 1)
    return acb_probe(A, np.eye(N_max + 1)[:, 1:], N_max)


def _quarter_acb():
    v1, v2 = backward_shift_acb(0.25, 256), backward_shift_acb(0.25, 512)
    return abs(v2 / v1 - 1) <= 0.05, {"acb_256": v1, "acb_512": v2}


def _quarter_not_pb():
    seq = power_norm_seq(make_backward_shift(0.25, 1100), _dyadic(1024))
    rep = growth_fit(seq)
    return growth_verdict(rep) == "growing", {"exponent": rep.exponent, "r_squared": rep.r_squared}


def backward_shift_cesaro(a: float, n_max: int = 2048, N: int = 1 << 14):
    return cesaro_norm_seq(make_backward_shift(a, N), lambda_grid=[1], n_list=_dyadic(n_max))[0]


def _half_not_cb():
    seq = backward_shift_cesaro(0.5)
    rep = growth_fit(seq)
    increasing = bool(np.all(np.diff(seq.norms) > 0))
    return increasing and rep.exponent > 0.05, {"norms": [float(v) for v in seq.norms],
                                                "exponent": rep.exponent, "flagged": seq.flagged}


# --- TZ block


def tz_ratios(N: int = 1024, n_list=(8, 16, 32, 64)):
    seq = power_norm_seq(make_tz_block(N), list(n_list))
    return seq, seq.norms / seq.n_values


def _tz_claim():
    seq, r = tz_ratios()
    return bool(np.all(r >= 1.9)), {"ratios": [float(x) for x in r], "min_ratio": float(r.min()),
                                     "flagged": seq.flagged}


def _tz_table():
    seq, r = tz_ratios()
    return {"rows": [{"n": int(n), "power_norm": float(v), "ratio": float(x)}
                     for n, v, x in zip(seq.n_values, seq.norms, r)]}


# --- symbols


def _symbol_table(factory, alpha, n_max, N):
    def build():
        phi = factory()
        A = multiplier_matrix(phi, alpha, N)
        ns = _dyadic(n_max)
        return _table(power_norm_seq(A, ns), cesaro_norm_seq(A, lambda_grid=[1], n_list=ns)[0])

    return build


def _half_exponent():
    A = multiplier_matrix(phi_power_half(), 0.0, 8192)
    rep = growth_fit(power_norm_seq(A, _dyadic(512)))
    return 0.22 <= rep.exponent <= 0.28, {"exponent": rep.exponent, "r_squared": rep.r_squared}


def _half_cb():
    seq = cesaro_norm_seq(phi_power_half(), 0.0, [1], _dyadic(512), N=8192)[0]
    rep = growth_fit(seq)
    return rep.plateau, {"last_change": rep.last_change, "flagged": seq.flagged}


def _mz_half_pb():
    rep = growth_fit(power_norm_seq(multiplier_matrix(phi_mz(), 0.5, 4096), _dyadic(512)))
    return growth_verdict(rep) == "growing", {"exponent": rep.exponent}


def _mz_half_cb():
    seq = cesaro_norm_seq(phi_mz(), 0.5, [1], _dyadic(2048), N=1 << 14)[0]
    rep = growth_fit(seq)
    return rep.plateau, {"last_change": rep.last_change, "flagged": seq.flagged}


def cusp_boundary_checks(theta: float = DEFAULT_THETA, n_theta: int = 2048):
    """Grid sup of ``|phi|`` and grid min of ``|1 - phi|`` from the closed form."""
    cf = cusp_closed_form(theta)
    sup = sup_norm_check(cf, n_theta=n_theta)
    radii = 1.0 - np.geomspace(1.0, 2.0**-20, 60)
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    z = radii[:, None] * np.exp(1j * th[None, :])
    min_gap = float(np.min(np.abs(1 - cf.value(z))))
    return sup, min_gap


def cusp_log_cb_integral(theta: float = DEFAULT_THETA, tol: float = 1e-8):
    """``(1/pi) int log(1/(1-|z|^2)) |phi'/(1-phi)|^2 dA`` for the cusp symbol."""
    dens = DiscIntegrand("cb_density", cusp_closed_form(theta), SpaceParams(0.0), log_weighted=True)
    return integrate_disc(dens, 0.0, tol)


def _cusp_sup():
    sup, gap = cusp_boundary_checks()
    return sup.value <= 1 + 1e-6 and gap > 0, {"sup_abs_phi": sup.value, "stable": sup.stable,
                                               "min_abs_one_minus_phi": gap}


def _cusp_integral():
    r = cusp_log_cb_integral()
    return r.converged, r.as_dict()


def _cusp_cb():
    seq = cesaro_norm_seq(phi_cusp(), 0.0, [1], _dyadic(256))[0]
    rep = growth_fit(seq)
    return rep.plateau, {"norms": [float(v) for v in seq.norms], "last_change": rep.last_change,
                         "flagged": seq.flagged}


ZOO: dict[str, ZooEntry] = {}


def _register(entry: ZooEntry):
    ZOO[entry.name] = entry


_register(ZooEntry(
    "assani", "operator", make_assani, "2x2 matrix [[-1,2],[0,-1]]", None,
    (Claim("CB", "sup_{n<=1e5} ||M_n(T)|| < 3", cite("assani"), _assani_cb),
     Claim("not PB", "||T^n|| grows with exponent > 0.05", cite("assani"), _assani_not_pb),
     Claim("linear growth", "||T^n||/(2n) in [0.99, 1.01] at n = 1e4", cite("assani"), _assani_ratio)),
    _assani_table))
_register(ZooEntry(
    "backward_shift_quarter", "operator", lambda: make_backward_shift(0.25, 1024),
    "weighted backward shift, a = 1/4", None,
    (Claim("ACB", "acb probe stable within 5% from N_max 256 to 512", cite("backward_shift"), _quarter_acb),
     Claim("not PB", "||T^n|| = (n+1)^(1/4) grows", cite("backward_shift"), _quarter_not_pb)),
    _shift_table(0.25, 512, 4096)))
_register(ZooEntry(
    "backward_shift_half", "operator", lambda: make_backward_shift(0.5, 1024),
    "weighted backward shift, a = 1/2", None,
    (Claim("not CB", "Cesaro norms increase over dyadic n <= 2048 with exponent > 0.05",
           cite("backward_shift"), _half_not_cb),),
    _shift_table(0.5, 2048, 1 << 14)))
_register(ZooEntry(
    "tz_block", "operator", lambda: make_tz_block(1024), "block operator [[B, B-I], [0, B]], N = 1024", None,
    (Claim("linear growth", "||T^n||/n >= 1.9 for n in {8,16,32,64}", cite("tz_block"), _tz_claim),),
    _tz_table))
_register(ZooEntry(
    "mz", "symbol", phi_mz, "phi(z) = z on D_0.5", 0.5,
    (Claim("not PB", "||M_z^n|| grows", cite("shift"), _mz_half_pb),
     Claim("CB", "||M_n(M_z)|| plateaus for n <= 2048", cite("shift"), _mz_half_cb)),
    _symbol_table(phi_mz, 0.5, 512, 4096)))
_register(ZooEntry(
    "power_half_k1", "symbol", phi_power_half, "phi(z) = i (1-z)/2 on D_0", 0.0,
    (Claim("not PB", "power-norm exponent in [0.22, 0.28]", cite("power_half"), _half_exponent),
     Claim("ME", "Cesaro norms plateau (ME via CB)", cite("me_cb"), _half_cb)),
    _symbol_table(phi_power_half, 0.0, 512, 8192)))
_register(ZooEntry(
    "cusp", "symbol", phi_cusp, "phi(z) = i (1-z)/2 exp(-(1+z)/(1-z)) on D_0", 0.0,
    (Claim("sup bound", "sup|phi| <= 1 + 1e-6 and |1 - phi| > 0 on the grid", cite("cusp"), _cusp_sup),
     Claim("log-weighted CB integral", "integral converges", cite("cb_integral"), _cusp_integral),
     Claim("CB", "Cesaro norms plateau for n <= 256 at cap 4096", cite("cusp"), _cusp_cb)),
    _symbol_table(phi_cusp, 0.0, 256, 4097)))

SYMBOL_ZOO = {name: e for name, e in ZOO.items() if e.kind == "symbol"}


def zoo_symbol(name: str):
    """``(series, closed_form_or_None)`` for a symbol entry."""
    if name not in SYMBOL_ZOO:
        raise KeyError(f"unknown zoo symbol {name!r}; known: {sorted(SYMBOL_ZOO)}")
    if name == "cusp":
        return phi_cusp(), cusp_closed_form()
    return SYMBOL_ZOO[name].factory(), None

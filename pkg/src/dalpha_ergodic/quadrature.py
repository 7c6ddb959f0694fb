"""Disc integrals with ``(1-|z|^2)^alpha`` weights and Carleson-type probes.

Every integral here is normalized by ``1/pi``, so ``integrate_disc(1, alpha=0)``
is 1. The radial direction is split into geometric segments accumulating at
the circle (``1 - r`` in ``[2^-(k+1), 2^-k]``) with a geometric-tail
extrapolation past the deepest segment. The angular direction uses either a
trapezoid rule (exact for trigonometric polynomials, evaluated by FFT for
series integrands) or Gauss-Legendre panels graded toward declared boundary
singularities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import betaln, gammaln

from ._validation import check_positive, check_unimodular
from .growth import GrowthReport, growth_fit
from .series import CoeffSeries, derivative, eval_polar, horner
from .spaces import SpaceParams, as_space, coeff_norm_sq, kernel, kernel_coeffs, kernel_norm_sq

DEFAULT_ORDER = 32
DEFAULT_MAX_DEPTH = 40
DEFAULT_SINGULAR_POINTS = (1.0 + 0.0j,)
_MIN_DEPTH = 6
_MAX_THETA = 1 << 15


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    converged: bool
    refinement_depth: int
    divergent: bool = False

    def __float__(self):
        return float(self.value)

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "abs_error_estimate": self.abs_error_estimate,
            "converged": self.converged,
            "refinement_depth": self.refinement_depth,
            "divergent": self.divergent,
        }


@dataclass(frozen=True)
class ClosedForm:
    """A symbol given by formulas instead of coefficients (used near the circle,
    where a truncated series is useless)."""

    value: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    name: str = "closed-form"


def symbol_values(phi, z) -> tuple[np.ndarray, np.ndarray]:
    """``(phi(z), phi'(z))`` for a CoeffSeries or a ClosedForm."""
    z = np.asarray(z, dtype=complex)
    if isinstance(phi, ClosedForm):
        return phi.value(z), phi.deriv(z)
    return horner(phi, z), horner(derivative(phi), z)


_KINDS = ("plain", "pb_density", "cb_density", "ukb_density")


@dataclass(frozen=True)
class DiscIntegrand:
    """Density built from a symbol, to be integrated against ``(1-|z|^2)^alpha dA/pi``.

    ``plain`` is ``|phi'|^2``; ``pb_density`` ``|phi'|^2/(1-|phi|^2)^2``;
    ``cb_density`` ``|phi'/(1-phi)|^2``; ``ukb_density`` ``|phi'/(1-lam phi)|^2``.
    ``log_weighted`` multiplies by ``log(1/(1-|z|^2))`` and needs ``alpha = 0``.
    """

    kind: str
    phi: CoeffSeries | ClosedForm
    alpha: SpaceParams = field(default_factory=lambda: SpaceParams(0.0))
    lam: complex = 1.0
    log_weighted: bool = False

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown integrand kind {self.kind!r}; expected one of {_KINDS}")
        object.__setattr__(self, "alpha", as_space(self.alpha))
        object.__setattr__(self, "lam", check_unimodular(self.lam))
        if self.log_weighted and self.alpha.alpha != 0.0:
            raise ValueError("log-weighted densities are only defined for alpha = 0")

    def _density(self, f, df, omr2):
        if self.kind == "plain":
            out = np.abs(df) ** 2
        elif self.kind == "pb_density":
            out = np.abs(df) ** 2 / (1.0 - np.abs(f) ** 2) ** 2
        elif self.kind == "cb_density":
            out = np.abs(df / (1.0 - f)) ** 2
        else:
            out = np.abs(df / (1.0 - self.lam * f)) ** 2
        if self.log_weighted:
            out = out * -np.log(omr2)
        return out

    def __call__(self, z, omr2=None):
        z = np.asarray(z, dtype=complex)
        if omr2 is None:
            omr2 = 1.0 - np.abs(z) ** 2
        f, df = symbol_values(self.phi, z)
        return self._density(f, df, omr2)

    def polar(self, radii, omr2, n_theta):
        if isinstance(self.phi, ClosedForm):
            return None
        f = eval_polar(self.phi, radii, n_theta)
        df = eval_polar(derivative(self.phi), radii, n_theta)
        return self._density(f, df, np.asarray(omr2)[:, None])


class _Wrapped:
    """Adapter giving plain callables the ``(z, omr2)`` signature."""

    def __init__(self, g):
        self.g = g

    def __call__(self, z, omr2):
        return self.g(z)

    def polar(self, radii, omr2, n_theta):
        return None


class PolynomialModulusSq:
    """``|p(z)|^2`` for a series ``p``; FFT-evaluated on trapezoid grids."""

    def __init__(self, p: CoeffSeries):
        self.p = p

    def __call__(self, z, omr2=None):
        return np.abs(horner(self.p, z)) ** 2

    def polar(self, radii, omr2, n_theta):
        return np.abs(eval_polar(self.p, radii, n_theta)) ** 2


def polynomial_modulus_sq(p: CoeffSeries) -> PolynomialModulusSq:
    return PolynomialModulusSq(p)


def log_weight(omr2):
    """``log(1/(1-|z|^2))`` from the precomputed ``1-|z|^2``."""
    return -np.log(omr2)


def _as_integrand(g):
    if isinstance(g, (DiscIntegrand, PolynomialModulusSq)):
        return g
    if hasattr(g, "polar") and callable(g):
        return g
    if callable(g):
        return _Wrapped(g)
    raise TypeError("integrand must be callable")


# ----------------------------------------------------------------------------
# rules


def _gl(order):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def _radial_segment(k: int, order: int):
    """Nodes ``r``, exact ``1-r^2`` and ``dr`` weights for segment ``k``."""
    x, w = _gl(order)
    if k == 0:
        r = 0.25 * (1.0 + x)
        return r, 1.0 - r * r, 0.25 * w
    t_lo, t_hi = 2.0 ** -(k + 1), 2.0**-k
    half = 0.5 * (t_hi - t_lo)
    t = t_lo + half * (1.0 + x)
    return 1.0 - t, t * (2.0 - t), half * w


def _angular_breaks(k: int, n_panels: int, sing_angles: np.ndarray) -> np.ndarray:
    base = 2.0 * np.pi / n_panels
    start = sing_angles[0] if sing_angles.size else 0.0
    pts = [start + base * np.arange(n_panels + 1)]
    # smallest panel width near a singular angle ~ (1 - r) / 4 on this segment
    smallest = 2.0 ** -(k + 2)
    levels = max(1, int(math.ceil(math.log2(base / smallest))))
    offsets = base * 2.0 ** -np.arange(1, levels + 1)
    for s in sing_angles:
        s = start + np.mod(s - start, 2.0 * np.pi)
        for c in (s, s + 2 * np.pi, s - 2 * np.pi):
            pts.append(c + offsets)
            pts.append(c - offsets)
    allp = np.concatenate(pts)
    allp = allp[(allp >= start) & (allp <= start + 2 * np.pi)]
    allp = np.unique(np.round(allp, 15))
    return allp


def _angular_panels(k, order, n_panels, sing_angles, sub: int = 1):
    br = _angular_breaks(k, n_panels, sing_angles)
    if sub > 1:
        # split every graded panel into `sub` equal pieces
        frac = np.arange(sub) / sub
        br = np.append((br[:-1, None] + (br[1:] - br[:-1])[:, None] * frac[None, :]).ravel(), br[-1])
    x, w = _gl(order)
    a, b = br[:-1], br[1:]
    half = 0.5 * (b - a)
    theta = (a[:, None] + half[:, None] * (1.0 + x[None, :])).ravel()
    wt = (half[:, None] * w[None, :]).ravel()
    return theta, wt


@dataclass
class _Segment:
    value: float
    alt: float  # same panels, half the Gauss order (or half the trapezoid grid)


def _panel_value(g, sp, k, q, n_panels, sing_angles, sub, q_theta=None):
    r, omr2, dr = _radial_segment(k, q)
    rw = dr * r * omr2**sp.alpha / np.pi
    th, tw = _angular_panels(k, q if q_theta is None else q_theta, n_panels, sing_angles, sub)
    z = r[:, None] * np.exp(1j * th[None, :])
    grid = np.real(g(z, np.broadcast_to(omr2[:, None], z.shape)))
    return float(rw @ (grid @ tw))


_MAX_SUB = 64
_MAX_PANEL_NODES = 1 << 17


def _segment_value(g, sp, k, order, n_panels, n_theta, sing_angles, atol=0.0) -> _Segment:
    alpha = sp.alpha
    if sing_angles is not None:
        # Graded panels, each split further until doubling the split stops
        # mattering (oscillatory integrands near the singular points need it);
        # the radial error is read off a half-order radial rule on the final panels.
        sub = 1
        v = _panel_value(g, sp, k, order, n_panels, sing_angles, sub)
        diff = abs(v)
        n_base = _angular_breaks(k, n_panels, sing_angles).size * order
        while sub < _MAX_SUB and 2 * sub * n_base <= _MAX_PANEL_NODES:
            v2 = _panel_value(g, sp, k, order, n_panels, sing_angles, 2 * sub)
            diff = abs(v2 - v)
            v, sub = v2, 2 * sub
            if diff <= atol:
                break
        alt = _panel_value(g, sp, k, max(2, order // 2), n_panels, sing_angles, sub, q_theta=order)
        return _Segment(v, alt if abs(alt - v) > diff else v + diff)
    vals = []
    for q in (order, max(2, order // 2)):
        r, omr2, dr = _radial_segment(k, q)
        rw = dr * r * omr2**alpha / np.pi
        th = 2.0 * np.pi * np.arange(n_theta) / n_theta
        grid = g.polar(r, omr2, n_theta)
        if grid is None:
            z = r[:, None] * np.exp(1j * th[None, :])
            grid = g(z, np.broadcast_to(omr2[:, None], z.shape))
        grid = np.real(grid)
        full = (2.0 * np.pi / n_theta) * grid.sum(axis=1)
        vals.append(float(rw @ full))
        if q == order:
            # trapezoid on every other node: the half-resolution companion
            coarse = (4.0 * np.pi / n_theta) * grid[:, ::2].sum(axis=1)
            vals.append(float(rw @ coarse))
    v, v_theta, v_r = vals
    alt = v_theta if abs(v_theta - v) > abs(v_r - v) else v_r
    return _Segment(v, alt)


_DIVERGENT_RUN = 6
_FLAT_RATIO = 1.5


def _non_decaying(last: Sequence[float], max_ratio: float = math.inf) -> bool:
    """Segment contributions that no longer shrink (ratio >= 0.98 throughout).

    ``max_ratio`` restricts this to flat runs: the rising edge of a peaked
    but finite integrand (``z^n`` near ``1 - r ~ 1/n``) has ratios far above 1.
    """
    c = np.abs(np.asarray(last, dtype=float))
    if c.size < _DIVERGENT_RUN or np.any(c == 0):
        return False
    r = c[1:] / c[:-1]
    return bool(np.all(r >= 0.98) and np.all(r <= max_ratio))


def _tail(c_prev: float, c_last: float) -> tuple[float, bool]:
    """Geometric extrapolation of the segments past the deepest one."""
    if c_last == 0.0:
        return 0.0, True
    if c_prev == 0.0:
        return 0.0, False
    rho = c_last / c_prev
    if 0.0 <= rho < 1.0:
        return c_last * rho / (1.0 - rho), True
    return 0.0, False


def _wynn(partials: Sequence[float]) -> float:
    """Wynn epsilon limit of a short run of partial sums (nan if it breaks down).

    Handles contributions like ``k rho^k`` where a single geometric ratio lags.
    """
    cur = np.asarray(partials, dtype=float)
    prev = np.zeros(cur.size + 1)
    out = float(cur[-1])
    step = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        while cur.size > 1:
            d = np.diff(cur)
            if not np.all(np.isfinite(d)) or np.any(d == 0.0):
                break
            nxt = prev[1 : cur.size] + 1.0 / d
            prev, cur = cur, nxt
            step += 1
            if step % 2 == 0:
                out = float(cur[-1])
    return out if math.isfinite(out) else float("nan")


_WYNN_RUN = 11


def integrate_disc(
    g,
    sp: SpaceParams | float = 0.0,
    tol: float = 1e-10,
    *,
    singular_points: Sequence[complex] | None = DEFAULT_SINGULAR_POINTS,
    max_depth: int = DEFAULT_MAX_DEPTH,
    order: int = DEFAULT_ORDER,
    n_panels: int = 16,
    n_theta: int = 64,
) -> QuadResult:
    """Approximate ``(1/pi) int_D g(z) (1-|z|^2)^alpha dA``.

    Parameters
    ----------
    g : callable or DiscIntegrand
        Real-valued integrand. Objects with a ``polar(radii, omr2, n_theta)``
        method are evaluated on the polar grid directly.
    singular_points : sequence of complex, optional
        Boundary points where ``g`` concentrates; angular panels are graded
        toward them. An empty sequence selects the trapezoid rule in angle,
        which is refined by doubling ``n_theta`` until it resolves ``g``.
    max_depth : int
        Deepest radial segment (``1 - r`` down to ``2^-(max_depth+1)``).

    Returns
    -------
    QuadResult
        ``divergent`` is set when segment contributions stop decaying.
    """
    sp = as_space(sp)
    tol = check_positive(tol, "tol")
    g = _as_integrand(g)
    if singular_points:
        sing = np.sort(np.mod(np.angle(np.asarray(list(singular_points), dtype=complex)), 2 * np.pi))
        return _integrate(g, sp, tol, max_depth, order, n_panels, None, sing)
    # trapezoid mode: double the angular grid until halving it changes nothing
    m = max(8, int(n_theta))
    while True:
        res, theta_err = _integrate(g, sp, tol, max_depth, order, n_panels, m, None, report_theta=True)
        if theta_err <= tol * max(abs(res.value), 1e-300) or m >= _MAX_THETA:
            if theta_err > tol * max(abs(res.value), 1e-300):
                res = QuadResult(res.value, max(res.abs_error_estimate, theta_err), False,
                                 res.refinement_depth, res.divergent)
            return res
        m *= 2


def _integrate(g, sp, tol, max_depth, order, n_panels, n_theta, sing, report_theta=False):
    contribs: list[float] = []
    alts: list[float] = []
    prev_est = None
    est = 0.0
    converged = False
    tail_ok = True
    stable = 0
    depth = 0
    partials: list[float] = []
    prev_geo = prev_wynn = None
    for k in range(max_depth + 1):
        # per-segment angular budget: a small share of the total tolerance
        atol = 0.02 * tol * abs(math.fsum(contribs)) if contribs else 0.0
        seg = _segment_value(g, sp, k, order, n_panels, n_theta, sing, atol)
        contribs.append(seg.value)
        alts.append(seg.alt)
        depth = k
        partial = math.fsum(contribs)
        partials.append(partial)
        if k >= 2:
            tail, tail_ok = _tail(contribs[-2], contribs[-1])
        else:
            tail, tail_ok = 0.0, False
        geo = partial + tail
        wynn = _wynn(partials[-_WYNN_RUN:]) if k + 1 >= _WYNN_RUN else float("nan")
        # keep whichever extrapolation is currently the steadier one
        est = geo
        if math.isfinite(wynn) and prev_wynn is not None and math.isfinite(prev_wynn) and prev_geo is not None:
            if abs(wynn - prev_wynn) < abs(geo - prev_geo):
                est = wynn
                prev_est = prev_wynn
            else:
                prev_est = prev_geo
        else:
            prev_est = prev_geo
        prev_geo, prev_wynn = geo, wynn
        if k >= 2 * _MIN_DEPTH and _non_decaying(contribs[-_DIVERGENT_RUN:], _FLAT_RATIO):
            break
        if k >= _MIN_DEPTH and prev_est is not None:
            scale = max(abs(est), 1e-300)
            if tail_ok and abs(est - prev_est) <= tol * scale:
                stable += 1
                if stable >= 2:
                    converged = True
                    break
            else:
                stable = 0
    pair_err = abs(math.fsum(contribs) - math.fsum(alts))
    depth_err = abs(est - prev_est) if prev_est is not None else abs(est)
    err = max(depth_err, pair_err if pair_err > tol * abs(est) else 0.0)
    if pair_err > tol * max(abs(est), 1e-300):
        converged = False
    divergent = not converged and _non_decaying(contribs[-_DIVERGENT_RUN:])
    if divergent:
        # extrapolating a divergent series is meaningless; keep the partial sum
        est = math.fsum(contribs)
    res = QuadResult(float(est), float(err), bool(converged), depth, divergent)
    if report_theta:
        theta_err = abs(math.fsum(contribs) - math.fsum(alts)) if n_theta else 0.0
        return res, theta_err
    return res


def disc_nodes(
    sp: SpaceParams | float,
    depth: int,
    *,
    singular_points: Sequence[complex] | None = DEFAULT_SINGULAR_POINTS,
    order: int = 24,
    n_panels: int = 16,
    n_theta: int = 256,
):
    """Flattened nodes ``z``, ``1-|z|^2`` and weights of a fixed rule.

    The weights already include ``(1-|z|^2)^alpha r dr dtheta / pi``; the
    region ``1 - r < 2^-(depth+1)`` is left out. Used when many integrands
    share one rule (Carleson and UBSCM probes).
    """
    sp = as_space(sp)
    sing = None
    if singular_points:
        sing = np.sort(np.mod(np.angle(np.asarray(list(singular_points), dtype=complex)), 2 * np.pi))
    zs, om, ws = [], [], []
    for k in range(depth + 1):
        r, omr2, dr = _radial_segment(k, order)
        rw = dr * r * omr2**sp.alpha / np.pi
        if sing is None:
            th = 2.0 * np.pi * np.arange(n_theta) / n_theta
            tw = np.full(n_theta, 2.0 * np.pi / n_theta)
        else:
            th, tw = _angular_panels(k, order, n_panels, sing)
        zs.append((r[:, None] * np.exp(1j * th[None, :])).ravel())
        om.append(np.broadcast_to(omr2[:, None], (r.size, th.size)).ravel())
        ws.append((rw[:, None] * tw[None, :]).ravel())
    return np.concatenate(zs), np.concatenate(om), np.concatenate(ws)


# ----------------------------------------------------------------------------
# named integrals


def cb_integral_mz(sp: SpaceParams | float, tol: float = 1e-10, **kw) -> QuadResult:
    """``(1/pi) int_D (1-|z|^2)^alpha / |1-z|^2 dA`` (finite for alpha > 0)."""
    sp = as_space(sp)
    if sp.alpha <= 0:
        raise ValueError("the integral diverges unless alpha > 0")
    z = CoeffSeries(np.array([0.0, 1.0]))
    return integrate_disc(DiscIntegrand("cb_density", z, sp), sp, tol, **kw)


def cb_series_oracle(alpha: float, terms: int = 10**6) -> float:
    """``Gamma(alpha+1) * sum_n Gamma(n+1)/Gamma(n+alpha+2)`` summed termwise.

    The terms are ``B(n+1, alpha+1)``; the tail past ``terms`` is
    ``int_0^1 t^terms (1-t)^(alpha-1) dt = B(terms+1, alpha)`` exactly.
    """
    if alpha <= 0:
        raise ValueError("series diverges unless alpha > 0")
    n = np.arange(terms, dtype=float)
    head = np.exp(gammaln(alpha + 1) + gammaln(n + 1) - gammaln(n + alpha + 2))
    return float(np.sum(head) + np.exp(betaln(terms + 1, alpha)))


def boundary_singular_points(phi, lam: complex = 1.0, *, mode: str = "cb", n_theta: int = 4096,
                             threshold: float = 0.05) -> tuple[complex, ...]:
    """Boundary points where a density's denominator nearly vanishes.

    ``mode='cb'`` looks at ``|1 - lam*phi|``, ``mode='pb'`` at ``1 - |phi|^2``.
    """
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    if isinstance(phi, ClosedForm):
        vals = phi.value((1 - 1e-9) * np.exp(1j * th))
    else:
        vals = eval_polar(phi, [1.0], n_theta)[0]
    den = np.abs(1.0 - lam * vals) if mode != "pb" else np.abs(1.0 - np.abs(vals) ** 2)
    out = []
    for j in np.flatnonzero(den < threshold):
        if den[j] <= den[j - 1] and den[j] <= den[(j + 1) % n_theta]:
            out.append(complex(np.exp(1j * th[j])))
    return tuple(out)


# ----------------------------------------------------------------------------
# sup norm


@dataclass(frozen=True)
class SupNorm:
    value: float
    argmax: complex
    stable: bool

    def __float__(self):
        return self.value


def sup_norm_check(phi, radii: Sequence[float] | None = None, n_theta: int = 1024,
                   stability_tol: float = 1e-6) -> SupNorm:
    """Max of ``|phi|`` over a polar grid (a lower bound for the sup norm).

    ``stable`` records whether doubling the angular grid moved the max by
    less than ``stability_tol``.
    """
    if radii is None:
        radii = 1.0 - np.geomspace(0.5, 2.0**-20, 40)
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0) or np.any(radii >= 1):
        raise ValueError("radii must lie in (0, 1)")

    def grid_max(m):
        if isinstance(phi, ClosedForm) or callable(phi) and not isinstance(phi, CoeffSeries):
            th = 2 * np.pi * np.arange(m) / m
            z = radii[:, None] * np.exp(1j * th[None, :])
            fn = phi.value if isinstance(phi, ClosedForm) else phi
            vals = np.abs(fn(z))
        else:
            vals = np.abs(eval_polar(phi, radii, m))
        i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
        return float(vals[i, j]), complex(radii[i] * np.exp(2j * np.pi * j / m))

    v1, _ = grid_max(n_theta)
    v2, arg = grid_max(2 * n_theta)
    return SupNorm(v2, arg, abs(v2 - v1) < stability_tol)


# ----------------------------------------------------------------------------
# Carleson probes


@dataclass(frozen=True)
class CarlesonProbe:
    ratio_sup: float
    argmax_w: complex
    samples: int
    poly_ratio_sup: float = float("nan")
    flagged: int = 0

    def as_dict(self):
        return {
            "ratio_sup": self.ratio_sup,
            "argmax_w": [self.argmax_w.real, self.argmax_w.imag],
            "samples": self.samples,
            "poly_ratio_sup": self.poly_ratio_sup,
            "flagged": self.flagged,
        }


def polar_grid(n_r: int, n_theta: int, r_max: float = 1 - 2.0**-6) -> np.ndarray:
    """``n_r x n_theta`` polar sample points with radii spread up to ``r_max``."""
    radii = r_max * (1 - (1 - np.linspace(0, 1, n_r + 1)[1:]) ** 2)
    radii = np.concatenate([[0.0], radii[:-1], [r_max]])[: n_r] if n_r > 1 else np.array([0.0])
    th = 2 * np.pi * np.arange(n_theta) / n_theta
    return (radii[:, None] * np.exp(1j * th[None, :])).ravel()


def random_polynomial_pool(sp: SpaceParams | float, count: int = 32, max_degree: int = 256,
                           seed: int = 7) -> list[CoeffSeries]:
    """Seeded test polynomials with unit-disc-uniform coefficients, unit D_alpha norm."""
    sp = as_space(sp)
    rng = np.random.default_rng(seed)
    pool = []
    for _ in range(count):
        deg = int(rng.integers(1, max_degree + 1))
        rad = np.sqrt(rng.random(deg + 1))
        ang = 2 * np.pi * rng.random(deg + 1)
        c = CoeffSeries(rad * np.exp(1j * ang))
        pool.append(c / math.sqrt(coeff_norm_sq(c, sp)))
    return pool


def carleson_probe(mu_density: Callable, sp: SpaceParams | float, w_grid, *, tol: float = 1e-8,
                   polys: Sequence[CoeffSeries] = (), singular_points=DEFAULT_SINGULAR_POINTS,
                   max_depth: int = 30) -> CarlesonProbe:
    """Lower bound for the Carleson constant of ``mu_density dA / pi``.

    Tests ``(1/pi) int |k_w|^2 dmu / ||k_w||^2`` over ``w_grid`` and, reported
    separately, ``(1/pi) int |p|^2 dmu / ||p||^2`` over ``polys``.
    """
    sp = as_space(sp)
    flat = SpaceParams(0.0)
    best, arg, flagged = 0.0, 0j, 0
    w_grid = np.atleast_1d(np.asarray(w_grid, dtype=complex))
    for w in w_grid:
        pts = list(singular_points or ())
        if abs(w) > 0.5:
            pts.append(w / abs(w))

        def integrand(z, omr2, w=w):
            return np.abs(kernel(w, z, sp)) ** 2 * mu_density(z)

        res = integrate_disc(_Fn(integrand), flat, tol, singular_points=pts or None, max_depth=max_depth)
        if not res.converged:
            flagged += 1
        ratio = res.value / kernel_norm_sq(w, sp)
        if ratio > best:
            best, arg = ratio, complex(w)
    poly_best = float("nan")
    for p in polys:
        def integrand(z, omr2, p=p):
            return np.abs(horner(p, z)) ** 2 * mu_density(z)

        res = integrate_disc(_Fn(integrand), flat, tol, singular_points=list(singular_points or ()) or None,
                             max_depth=max_depth)
        if not res.converged:
            flagged += 1
        ratio = res.value / coeff_norm_sq(p, sp)
        poly_best = ratio if math.isnan(poly_best) else max(poly_best, ratio)
    return CarlesonProbe(float(best), arg, int(w_grid.size), float(poly_best), flagged)


class _Fn:
    def __init__(self, fn):
        self.fn = fn

    def __call__(self, z, omr2):
        return self.fn(z, omr2)

    def polar(self, radii, omr2, n_theta):
        return None


# ----------------------------------------------------------------------------
# UBSCM probe


@dataclass
class UbscmTable:
    """Per-``n`` sup of embedding ratios for one density sequence."""

    mode: str
    n_values: np.ndarray
    ratios: np.ndarray
    argmax: list[str]
    report: GrowthReport | None
    verdict: str
    test_set_size: int

    def as_dict(self):
        return {
            "mode": self.mode,
            "n": [int(n) for n in self.n_values],
            "ratio": [float(r) for r in self.ratios],
            "argmax": self.argmax,
            "verdict": self.verdict,
            "test_set_size": self.test_set_size,
            "fit": self.report.as_dict() if self.report else None,
        }


@dataclass
class TestSet:
    """Test functions for embedding probes: values come from ``evaluate``."""

    labels: list[str]
    kernels: list[complex]
    polys: list[CoeffSeries]
    sp: SpaceParams

    __test__ = False  # not a pytest class

    def norms_sq(self) -> np.ndarray:
        out = []
        for w in self.kernels:
            if w == 0:
                out.append(1.0)
                continue
            cap = int(min(1 << 16, max(64, math.ceil(-40.0 / math.log(abs(w))))))
            c = CoeffSeries(kernel_coeffs(w, self.sp, cap))
            out.append(coeff_norm_sq(c, self.sp))
        out.extend(coeff_norm_sq(p, self.sp) for p in self.polys)
        return np.asarray(out)

    def evaluate(self, z) -> np.ndarray:
        rows = [np.abs(kernel(w, z, self.sp)) ** 2 for w in self.kernels]
        rows.extend(np.abs(horner(p, z)) ** 2 for p in self.polys)
        return np.asarray(rows)

    def evaluate_polar(self, radii, n_theta: int) -> np.ndarray:
        """``|f|^2`` on a polar grid, shape ``(len(self), len(radii), n_theta)``."""
        radii = np.atleast_1d(np.asarray(radii, dtype=float))
        z = radii[:, None] * np.exp(2j * np.pi * np.arange(n_theta) / n_theta)[None, :]
        rows = [np.abs(kernel(w, z, self.sp)) ** 2 for w in self.kernels]
        rows.extend(np.abs(eval_polar(p, radii, n_theta)) ** 2 for p in self.polys)
        return np.asarray(rows)

    @property
    def max_degree(self) -> int:
        return max((p.degree for p in self.polys), default=0)

    def __len__(self):
        return len(self.labels)


def default_test_set(sp: SpaceParams | float, *, radii=(0.0, 0.5, 0.8, 0.95), n_angles: int = 8,
                     n_polys: int = 32, max_degree: int = 256, seed: int = 7) -> TestSet:
    sp = as_space(sp)
    kern = []
    for r in radii:
        if r == 0:
            kern.append(0j)
        else:
            kern.extend(r * np.exp(2j * np.pi * np.arange(n_angles) / n_angles))
    if not sp.has_kernel_formula:
        kern = []
    polys = random_polynomial_pool(sp, n_polys, max_degree, seed) if n_polys else []
    labels = [f"k_w(w={w.real:+.4f}{w.imag:+.4f}j)" for w in kern]
    labels += [f"poly[{i}]" for i in range(len(polys))]
    return TestSet(labels, [complex(w) for w in kern], polys, sp)


def constant_test_set(sp: SpaceParams | float) -> TestSet:
    """The single test function ``f = 1``."""
    sp = as_space(sp)
    return TestSet(["f=1"], [], [CoeffSeries(np.array([1.0]))], sp)


def _cesaro_derivative_factors(x: np.ndarray, n_values: Sequence[int]):
    """Yield ``(n, sum_{k=1..n} k x^(k-1) / (n+1))`` for increasing ``n``."""
    acc = np.zeros_like(x)
    pw = np.ones_like(x)
    k = 0
    for n in n_values:
        while k < n:
            k += 1
            acc = acc + k * pw
            pw = pw * x
        yield n, acc / (n + 1)


def _ubscm_n_theta(phi, test_set: TestSet, n_max: int) -> int:
    # enough angular nodes to integrate |f|^2 |d_n| exactly for polynomial data
    deg = phi.degree if isinstance(phi, CoeffSeries) else _MAX_UBSCM_THETA
    need = 2 * (test_set.max_degree + n_max * max(deg, 1)) + 1
    return int(min(_MAX_UBSCM_THETA, max(256, 1 << int(math.ceil(math.log2(need))))))


_MAX_UBSCM_THETA = 4096


def ubscm_ratios(phi, sp: SpaceParams | float, mode: str, n_values: Sequence[int], test_set: TestSet,
                 lams: Sequence[complex] = (1.0,), *, depth: int = 24, order: int = 16,
                 n_theta: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Embedding ratios for every ``lam`` and ``n`` on a shared polar rule.

    Returns ``(ratios, argmax)`` of shape ``(len(lams), len(n_values))``;
    ``argmax`` indexes the test set. The rule is Gauss-Legendre on the radial
    segments (down to ``1 - r = 2^-(depth+1)``) times a uniform angular grid.
    """
    sp = as_space(sp)
    n_values = np.asarray(sorted(set(int(n) for n in n_values)))
    lams = [complex(l) for l in lams]
    if n_theta is None:
        n_theta = _ubscm_n_theta(phi, test_set, int(n_values[-1]))
    th = 2.0 * np.pi * np.arange(n_theta) / n_theta
    dphi = derivative(phi) if isinstance(phi, CoeffSeries) else None
    acc = np.zeros((len(lams), n_values.size, len(test_set)))
    for k in range(depth + 1):
        r, omr2, dr = _radial_segment(k, order)
        rw = dr * r * omr2**sp.alpha / np.pi * (2.0 * np.pi / n_theta)
        if dphi is not None:
            f, df = eval_polar(phi, r, n_theta), eval_polar(dphi, r, n_theta)
        else:
            f, df = symbol_values(phi, r[:, None] * np.exp(1j * th[None, :]))
        F = (test_set.evaluate_polar(r, n_theta) * rw[None, :, None]).reshape(len(test_set), -1)
        f, df = f.ravel(), df.ravel()
        for li, lam in enumerate(lams):
            if mode == "pb":
                seq = ((n, n * f ** (n - 1)) for n in n_values)
            else:
                seq = _cesaro_derivative_factors(lam * f, n_values)
            for i, (n, factor) in enumerate(seq):
                acc[li, i] += F @ (np.abs(factor * df) ** 2)
    vals = acc / test_set.norms_sq()[None, None, :]
    return vals.max(axis=2), vals.argmax(axis=2)


def _ubscm_table(mode, n_values, ratios, argmax, test_set, plateau_tol, growth_threshold, min_r2):
    report = None
    verdict = "inconclusive"
    positive = ratios > 0
    if np.all(~positive):
        verdict = "uniformly bounded (plausible)"
    elif positive.sum() >= 4:
        report = growth_fit(n_values[positive], ratios[positive], plateau_tol=plateau_tol)
        if report.plateau:
            verdict = "uniformly bounded (plausible)"
        elif report.exponent > growth_threshold and report.r_squared > min_r2:
            verdict = "unbounded (lower bound grows)"
    labels = [test_set.labels[j] for j in argmax]
    return UbscmTable(mode, n_values, ratios, labels, report, verdict, len(test_set))


def ubscm_probe(phi, sp: SpaceParams | float, mode: str = "pb", n_list: Sequence[int] = (1, 2, 4, 8, 16, 32, 64),
                test_set: TestSet | None = None, *, lam=1.0, depth: int = 24, order: int = 16,
                n_theta: int | None = None, plateau_tol: float = 0.01, growth_threshold: float = 0.05,
                min_r2: float = 0.9):
    """Embedding ratios of the measures ``d_n (1-|z|^2)^alpha dA / pi``.

    ``d_n`` is ``|(phi^n)'|^2`` (``pb``), or ``|c_n'|^2`` with ``c_n`` the
    Cesaro symbol at ``lam = 1`` (``cb``) or the given ``lam`` (``ukb``).
    For each ``n`` the sup over the test set of
    ``(1/pi) int |f|^2 d_n (1-|z|^2)^alpha dA / ||f||^2`` is recorded.

    Returns
    -------
    UbscmTable, or a list of them when ``mode="ukb"`` and ``lam`` is a sequence.
    """
    sp = as_space(sp)
    if mode not in ("pb", "cb", "ukb"):
        raise ValueError(f"mode must be pb, cb or ukb, got {mode!r}")
    many = mode == "ukb" and np.ndim(lam) > 0
    lams = [check_unimodular(l) for l in np.atleast_1d(lam)] if mode == "ukb" else [1.0]
    test_set = default_test_set(sp) if test_set is None else test_set
    n_values = np.asarray(sorted(set(int(n) for n in n_list)))
    ratios, argmax = ubscm_ratios(phi, sp, mode, n_values, test_set, lams, depth=depth, order=order,
                                  n_theta=n_theta)
    tables = [_ubscm_table(mode, n_values, ratios[i], argmax[i], test_set, plateau_tol, growth_threshold, min_r2)
              for i in range(len(lams))]
    return tables if many else tables[0]

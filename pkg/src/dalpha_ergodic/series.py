"""Truncated Taylor series on the unit disc.

A :class:`CoeffSeries` holds the coefficients ``a_0 .. a_cap`` of an analytic
function. Every operation truncates (never wraps) at the requested cap and
records in ``tail_flag`` whether nonzero mass was thrown away, so downstream
norm estimates can tell an exact polynomial from a cut-off infinite series.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Iterable, Iterator, Sequence

import numpy as np
from scipy.signal import fftconvolve

from ._validation import check_nonneg_int, check_unimodular

DEFAULT_CAP = 4096

# Above this many multiply-adds, products switch from direct to FFT convolution.
_DIRECT_CONV_LIMIT = 2_000_000


@dataclass(frozen=True, eq=False)
class CoeffSeries:
    """Taylor coefficients ``a_0..a_cap`` of a function analytic on the disc.

    Parameters
    ----------
    coeffs : array_like of complex
        Coefficients; ``len(coeffs) == cap + 1``.
    tail_flag : bool
        True when the series stands for a longer (or infinite) expansion
        whose higher coefficients were discarded.
    """

    coeffs: np.ndarray
    tail_flag: bool = False

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex, copy=True).ravel()
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "tail_flag", bool(self.tail_flag))

    @property
    def cap(self) -> int:
        return self.coeffs.size - 1

    @property
    def degree(self) -> int:
        """Index of the last nonzero coefficient (0 for the zero series)."""
        nz = np.flatnonzero(self.coeffs)
        return int(nz[-1]) if nz.size else 0

    def trimmed(self) -> np.ndarray:
        return self.coeffs[: self.degree + 1]

    def __len__(self):
        return self.coeffs.size

    def __repr__(self):
        head = np.array2string(self.coeffs[:6], precision=4)
        more = "..." if self.cap >= 6 else ""
        return f"CoeffSeries(cap={self.cap}, tail_flag={self.tail_flag}, coeffs={head}{more})"

    # Linear structure. Results keep the larger cap.
    def _binary(self, other, sign):
        if isinstance(other, Number):
            other = constant(other, self.cap)
        if not isinstance(other, CoeffSeries):
            return NotImplemented
        cap = max(self.cap, other.cap)
        out = np.zeros(cap + 1, dtype=complex)
        out[: self.cap + 1] += self.coeffs
        out[: other.cap + 1] += sign * other.coeffs
        return CoeffSeries(out, self.tail_flag or other.tail_flag)

    def __add__(self, other):
        return self._binary(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CoeffSeries(-self.coeffs, self.tail_flag)

    def __mul__(self, other):
        if isinstance(other, Number):
            return CoeffSeries(self.coeffs * other, self.tail_flag)
        if isinstance(other, CoeffSeries):
            return mul(self, other, max(self.cap, other.cap))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return CoeffSeries(self.coeffs / other, self.tail_flag)
        return NotImplemented


def from_coeffs(values: Iterable[complex], cap: int) -> CoeffSeries:
    """Build a series from raw coefficients, zero-filling or truncating to ``cap``."""
    cap = check_nonneg_int(cap, "cap")
    vals = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=complex).ravel()
    if not np.all(np.isfinite(vals)):
        raise ValueError("coefficients must be finite (got NaN or Inf)")
    out = np.zeros(cap + 1, dtype=complex)
    keep = min(cap + 1, vals.size)
    out[:keep] = vals[:keep]
    dropped = bool(np.any(vals[keep:] != 0))
    return CoeffSeries(out, dropped)


def constant(c: complex, cap: int = 0) -> CoeffSeries:
    return from_coeffs([c], cap)


def monomial(n: int, cap: int | None = None, coeff: complex = 1.0) -> CoeffSeries:
    """``coeff * z**n``, truncated at ``cap`` (default ``n``)."""
    n = check_nonneg_int(n, "n")
    cap = n if cap is None else cap
    vals = np.zeros(n + 1, dtype=complex)
    vals[n] = coeff
    return from_coeffs(vals, cap)


def _convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size * b.size <= _DIRECT_CONV_LIMIT or min(a.size, b.size) <= 64:
        return np.convolve(a, b)
    return fftconvolve(a, b)


def mul(a: CoeffSeries, b: CoeffSeries, cap: int) -> CoeffSeries:
    """Cauchy product of two series truncated at ``cap``."""
    cap = check_nonneg_int(cap, "cap")
    full = _convolve(a.trimmed(), b.trimmed())
    out = np.zeros(cap + 1, dtype=complex)
    keep = min(cap + 1, full.size)
    out[:keep] = full[:keep]
    dropped = bool(np.any(full[keep:] != 0))
    return CoeffSeries(out, a.tail_flag or b.tail_flag or dropped)


def power(a: CoeffSeries, n: int, cap: int) -> CoeffSeries:
    """``a**n`` by binary exponentiation, truncated at ``cap``."""
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise TypeError(f"exponent must be an integer, got {type(n).__name__}")
    if n < 0:
        raise ValueError(f"negative exponent {n} is not supported (no series reciprocal)")
    result = constant(1.0, cap)
    base = from_coeffs(a.coeffs, cap) if a.cap > cap else a
    base = CoeffSeries(base.coeffs, base.tail_flag or a.tail_flag)
    while n:
        if n & 1:
            result = mul(result, base, cap)
        n >>= 1
        if n:
            base = mul(base, base, cap)
    return result


def derivative(a: CoeffSeries) -> CoeffSeries:
    """Termwise derivative; the cap is kept and the top coefficient zero-filled."""
    k = np.arange(1, a.cap + 1)
    out = np.zeros(a.cap + 1, dtype=complex)
    out[: a.cap] = k * a.coeffs[1:]
    return CoeffSeries(out, a.tail_flag)


def exp_series(a: CoeffSeries, cap: int) -> CoeffSeries:
    """Coefficients of ``exp(a(z))`` from ``g' = a' g``.

    Uses ``k g_k = sum_{j=1..k} j a_j g_{k-j}`` with ``g_0 = exp(a_0)``.
    """
    cap = check_nonneg_int(cap, "cap")
    a0 = complex(a.coeffs[0])
    if a0.real > 709.0:
        raise ValueError(f"exp(a_0) overflows for a_0 = {a0}")
    ja = np.zeros(cap + 1, dtype=complex)
    m = min(cap, a.cap)
    ja[1 : m + 1] = np.arange(1, m + 1) * a.coeffs[1 : m + 1]
    g = np.zeros(cap + 1, dtype=complex)
    g[0] = np.exp(a0)
    deg = min(a.degree, cap)
    for k in range(1, cap + 1):
        hi = min(k, deg)
        if hi < 1:
            break
        # pairs j*a_j with g_{k-1}, ..., g_{k-hi}
        g[k] = np.dot(ja[1 : hi + 1], g[k - 1 :: -1][:hi]) / k
    # exp of a nonconstant series never terminates
    return CoeffSeries(g, a.tail_flag or a.degree > 0)


def cesaro_symbol(phi: CoeffSeries, n: int, lam: complex = 1.0, cap: int = DEFAULT_CAP) -> CoeffSeries:
    """``(1/(n+1)) * sum_{k=0..n} (lam*phi)**k`` via Horner nesting.

    The multiplication operator of this symbol is the Cesaro mean
    ``M_n(lam * M_phi)``.
    """
    n = check_nonneg_int(n, "n")
    lam = check_unimodular(lam)
    lphi = CoeffSeries(lam * phi.coeffs, phi.tail_flag)
    acc = constant(1.0, cap)
    for _ in range(n):
        acc = mul(lphi, acc, cap) + 1.0
    return acc / (n + 1)


def cesaro_symbols(
    phi: CoeffSeries, n_values: Sequence[int], lam: complex = 1.0, cap: int = DEFAULT_CAP
) -> Iterator[tuple[int, CoeffSeries]]:
    """Yield ``(n, cesaro_symbol(phi, n, lam, cap))`` for increasing ``n_values``.

    One pass accumulates the powers, so a whole dyadic list costs
    ``max(n_values)`` products instead of one Horner chain per entry.
    """
    lam = check_unimodular(lam)
    targets = sorted(set(check_nonneg_int(n, "n") for n in n_values))
    lphi = CoeffSeries(lam * phi.coeffs, phi.tail_flag)
    term = constant(1.0, cap)
    total = constant(1.0, cap)
    k = 0
    for n in targets:
        while k < n:
            term = mul(term, lphi, cap)
            total = total + term
            k += 1
        yield n, total / (n + 1)


def powers(phi: CoeffSeries, n_values: Sequence[int], cap: int) -> Iterator[tuple[int, CoeffSeries]]:
    """Yield ``(n, phi**n)`` for increasing ``n_values``, reusing earlier powers."""
    prev_n, prev = 0, constant(1.0, cap)
    for n in sorted(set(check_nonneg_int(n, "n") for n in n_values)):
        step = n - prev_n
        prev = mul(prev, power(phi, step, cap), cap) if step else prev
        prev_n = n
        yield n, prev


def horner(a: CoeffSeries | np.ndarray, z):
    """Evaluate the truncated polynomial at an array of points (no domain check)."""
    c = a.trimmed() if isinstance(a, CoeffSeries) else np.asarray(a, dtype=complex)
    z = np.asarray(z, dtype=complex)
    out = np.full(z.shape, c[-1], dtype=complex)
    for coef in c[-2::-1]:
        out *= z
        out += coef
    return out


def eval_at(a: CoeffSeries, z: complex) -> complex:
    """Value of the truncated polynomial at a point of the closed disc."""
    z = complex(z)
    if abs(z) > 1.0 + 1e-15:
        raise ValueError(f"|z| = {abs(z)} > 1: truncated series are only evaluated on the closed disc")
    return complex(horner(a, z))


def eval_polar(a: CoeffSeries | np.ndarray, radii, n_theta: int) -> np.ndarray:
    """Values on the polar grid ``r_i * exp(2 pi i j / n_theta)``.

    Returns an array of shape ``(len(radii), n_theta)``. Coefficients are
    folded modulo ``n_theta`` before the FFT, which is exact for any degree.
    """
    c = a.trimmed() if isinstance(a, CoeffSeries) else np.asarray(a, dtype=complex)
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    k = np.arange(c.size)
    scaled = c[None, :] * radii[:, None] ** k[None, :]
    pad = (-c.size) % n_theta
    folded = np.pad(scaled, ((0, 0), (0, pad))).reshape(radii.size, -1, n_theta).sum(axis=1)
    # ifft gives sum_k c_k exp(+2 pi i j k / n); undo its 1/n factor.
    return np.fft.ifft(folded, axis=1) * n_theta


def binomial_one_minus_z(m: int, cap: int | None = None) -> CoeffSeries:
    """``((1 - z)/2)**m`` from exact binomials."""
    from math import comb

    m = check_nonneg_int(m, "m")
    cap = m if cap is None else cap
    # int / int division is correctly rounded even where 2**m overflows a float
    vals = [(-1) ** k * comb(m, k) / 2**m for k in range(m + 1)]
    return from_coeffs(vals, cap)

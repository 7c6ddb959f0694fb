"""Finite sections of operators and their power / Cesaro norm sequences.

Multiplication operators are stored by symbol and applied with FFT
convolutions; weighted backward shifts by their diagonal similarity to the
unweighted shift. Dense entries are only formed on request.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.sparse as sps
from scipy.linalg import toeplitz
from scipy.sparse.linalg import LinearOperator, matrix_power as sparse_matrix_power, svds
from scipy.optimize import minimize_scalar
from scipy.signal import fftconvolve

from ._validation import check_positive, check_positive_int, check_unimodular
from .growth import GrowthSeq
from .series import CoeffSeries, cesaro_symbols, horner, powers
from .spaces import SpaceParams, as_space

BASIS_DALPHA = "orthonormal-D_alpha"
BASIS_L2 = "abstract-l2"
BASIS_FINITE = "finite"

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 5000
TRUNCATION_RTOL = 0.005
_SMALL_DENSE = 64


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """``N x N`` section of an operator in an orthonormal basis.

    Parameters
    ----------
    kind : {'multiplier', 'backward_shift', 'dense'}
        How the operator is stored and applied.
    N : int
        Truncation size.
    basis : str
        ``orthonormal-D_alpha``, ``abstract-l2`` or ``finite``.
    provenance : str
        Human-readable description of where the operator comes from.
    """

    kind: str
    N: int
    basis: str
    provenance: str
    alpha: SpaceParams | None = None
    symbol: CoeffSeries | None = None
    shift_exponent: float | None = None
    dense: np.ndarray | None = None
    adjointed: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        check_positive_int(self.N, "N")
        if self.kind == "dense":
            d = self.dense if sps.issparse(self.dense) else np.asarray(self.dense)
            if d.shape != (self.N, self.N):
                raise ValueError(f"dense entries must be {self.N}x{self.N}")
            if not np.all(np.isfinite(d.data if sps.issparse(d) else d)):
                raise ValueError("operator entries must be finite")

    @property
    def shape(self):
        return (self.N, self.N)

    @property
    def is_multiplier(self) -> bool:
        return self.kind == "multiplier" and not self.adjointed

    @property
    def entries(self) -> np.ndarray:
        if "entries" not in self._cache:
            if self.kind == "dense":
                e = self.dense.toarray() if sps.issparse(self.dense) else np.asarray(self.dense)
            elif self.kind == "multiplier":
                e = _multiplier_dense(self.symbol, self.alpha, self.N)
            else:
                e = _shift_dense(self.shift_exponent, self.N)
            if self.adjointed:
                e = e.conj().T
            e = np.array(e)
            e.setflags(write=False)
            self._cache["entries"] = e
        return self._cache["entries"]

    def resized(self, N: int) -> "OperatorMatrix":
        """Same operator at another truncation (structured kinds only)."""
        if self.kind == "dense":
            raise ValueError("dense operators have a fixed size")
        return OperatorMatrix(self.kind, N, self.basis, self.provenance, self.alpha, self.symbol,
                              self.shift_exponent, None, self.adjointed)

    def _apply(self, x, adjoint: bool):
        if self.kind == "dense":
            e = self.dense
            return (e.conj().T @ x) if adjoint else (e @ x)
        if self.kind == "multiplier":
            b = _symbol_coeffs(self.symbol, self.N)
            w = self.alpha.basis_scale(self.N)
            return _toeplitz_apply(b, w, x, adjoint)
        return _shift_power_apply(self.shift_exponent, 1, x, adjoint)

    def matvec(self, x):
        return self._apply(np.asarray(x, dtype=complex), self.adjointed)

    def rmatvec(self, y):
        return self._apply(np.asarray(y, dtype=complex), not self.adjointed)

    def __matmul__(self, x):
        return self.matvec(x)


# ----------------------------------------------------------------------------
# structured kernels


def _col(d, x):
    return d[:, None] if x.ndim == 2 else d


def _symbol_coeffs(phi: CoeffSeries, N: int) -> np.ndarray:
    c = phi.trimmed()
    return c[:N]


def _toeplitz_apply(b, w, x, adjoint):
    """``W T_b W^-1 x`` (or its adjoint) with ``T_b`` lower-triangular Toeplitz."""
    N = w.size
    if not adjoint:
        u = x / _col(w, x)
        full = fftconvolve(b[:, None] if x.ndim == 2 else b, u, axes=0) if b.size > 1 else b[0] * u
        return _col(w, x) * full[:N]
    u = _col(w, x) * x
    rb = np.conj(b)[::-1]
    full = fftconvolve(rb[:, None] if x.ndim == 2 else rb, u, axes=0) if b.size > 1 else rb[0] * u
    return full[b.size - 1 : b.size - 1 + N] / _col(w, x)


def _multiplier_dense(phi: CoeffSeries, sp: SpaceParams, N: int) -> np.ndarray:
    b = np.zeros(N, dtype=complex)
    c = _symbol_coeffs(phi, N)
    b[: c.size] = c
    w = sp.basis_scale(N)
    T = toeplitz(b, np.zeros(N, dtype=complex))
    return T * (w[:, None] / w[None, :])


def _shift_scale(a, N):
    """``D = diag(k^a)`` for the 1-based index ``k``."""
    return np.arange(1, N + 1, dtype=float) ** a


def _shift_dense(a, N):
    e = np.zeros((N, N))
    k = np.arange(1, N)
    e[k - 1, k] = ((k + 1) / k) ** a
    return e


def _shift_power_apply(a, n, x, adjoint):
    """``T^n = D^-1 S*^n D`` for the weighted backward shift ``T``."""
    N = x.shape[0]
    d = _col(_shift_scale(a, N), x)
    y = np.zeros_like(x)
    if n >= N:
        return y
    if not adjoint:
        u = d * x
        y[: N - n] = u[n:]
        return y / d
    u = x / d
    y[n:] = u[: N - n]
    return d * y


def _unit_powers(lam: complex, N: int) -> np.ndarray:
    return np.exp(1j * np.angle(lam) * np.arange(N)) if lam != 1 else np.ones(N, dtype=complex)


def _shift_cesaro_apply(a, n, lam, x, adjoint):
    """``M_n(lam T) = D^-1 M_n(lam S*) D`` via windowed prefix sums."""
    N = x.shape[0]
    d = _col(_shift_scale(a, N), x)
    lp = _col(_unit_powers(lam, N), x)
    zero = np.zeros((1,) + x.shape[1:], dtype=complex)
    j = np.arange(N)
    if not adjoint:
        z = lp * (d * x)
        P = np.concatenate([zero, np.cumsum(z, axis=0)])
        hi = np.minimum(j + n + 1, N)
        y = np.conj(lp) * (P[hi] - P[j]) / (n + 1)
        return y / d
    z = lp * (x / d)
    P = np.concatenate([zero, np.cumsum(z, axis=0)])
    lo = np.maximum(j - n, 0)
    y = np.conj(lp) * (P[j + 1] - P[lo]) / (n + 1)
    return d * y


# ----------------------------------------------------------------------------
# constructors


def multiplier_matrix(phi: CoeffSeries, sp: SpaceParams | float, N: int) -> OperatorMatrix:
    """``M_phi`` on ``D_alpha`` in the basis ``e_n = z^n / (n+1)^((1-alpha)/2)``.

    Entry ``(m, k)`` is ``b_(m-k) * ((m+1)/(k+1))^((1-alpha)/2)`` for ``m >= k``.
    """
    sp = as_space(sp)
    N = check_positive_int(N, "N")
    return OperatorMatrix("multiplier", N, BASIS_DALPHA, f"multiplier(deg={phi.degree}, tail={phi.tail_flag})",
                          alpha=sp, symbol=phi)


def dense_operator(entries, provenance: str = "dense", basis: str = BASIS_FINITE) -> OperatorMatrix:
    """Explicit matrix; scipy sparse input is kept sparse."""
    if sps.issparse(entries):
        e = sps.csr_matrix(entries)
        if e.shape[0] != e.shape[1]:
            raise ValueError("entries must be a square matrix")
        return OperatorMatrix("dense", e.shape[0], basis, provenance, dense=e)
    e = np.array(entries, dtype=complex if np.iscomplexobj(entries) else float)
    if e.ndim != 2 or e.shape[0] != e.shape[1]:
        raise ValueError("entries must be a square matrix")
    return OperatorMatrix("dense", e.shape[0], basis, provenance, dense=e)


def weighted_backward_shift(a: float, N: int) -> OperatorMatrix:
    """``T e_1 = 0``, ``T e_k = (k/(k-1))^a e_(k-1)`` on the first ``N`` coordinates."""
    return OperatorMatrix("backward_shift", check_positive_int(N, "N"), BASIS_L2,
                          f"weighted backward shift a={a!r}", shift_exponent=float(a))


def adjoint(A: OperatorMatrix) -> OperatorMatrix:
    """Conjugate transpose; ``adjoint(adjoint(A))`` restores ``A``."""
    if A.kind == "dense":
        d = A.dense.conj().T.tocsr() if sps.issparse(A.dense) else np.asarray(A.dense).conj().T
        return OperatorMatrix("dense", A.N, A.basis, _flip(A.provenance), A.alpha, A.symbol,
                              A.shift_exponent, d, not A.adjointed)
    return OperatorMatrix(A.kind, A.N, A.basis, _flip(A.provenance), A.alpha, A.symbol, A.shift_exponent,
                          None, not A.adjointed)


def _flip(p: str) -> str:
    return p[len("adjoint of "):] if p.startswith("adjoint of ") else "adjoint of " + p


# ----------------------------------------------------------------------------
# norms


@dataclass(frozen=True)
class NormResult:
    value: float
    converged: bool
    iterations: int
    method: str = "power-iteration"

    def __float__(self):
        return self.value


def _power_iteration(mv, rmv, N, tol, max_iter):
    v = np.full(N, 1.0 / np.sqrt(N), dtype=complex)
    hist: list[float] = []
    for it in range(1, max_iter + 1):
        w = mv(v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0, True, it
        u = rmv(w)
        nu = np.linalg.norm(u)
        # ||A* w|| / ||w|| is a lower bound for the top singular value
        hist.append(float(nu / nw))
        if nu == 0.0:
            return float(nw), True, it
        v = u / nu
        if len(hist) >= 4:
            h = hist[-1]
            if abs(h - hist[-2]) <= tol * h and abs(h - hist[-4]) < tol * h:
                return max(hist), True, it
    return max(hist), False, max_iter


def operator_norm(A, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> NormResult:
    """Largest singular value of ``A``.

    Small dense matrices (``N <= 64``) go straight to LAPACK; everything else
    uses power iteration on ``A* A`` from the normalized all-ones vector.
    A non-converged run returns a lower bound with ``converged=False``.
    """
    tol = check_positive(tol, "tol")
    max_iter = check_positive_int(max_iter, "max_iter")
    if isinstance(A, np.ndarray):
        A = dense_operator(A)
    if A.kind == "dense" and A.N <= _SMALL_DENSE:
        return NormResult(float(np.linalg.norm(A.entries, 2)), True, 0, "svd")
    return _linop_norm(A.matvec, A.rmatvec, A.N, tol, max_iter)


def _linop_norm(mv, rmv, N, tol, max_iter):
    """Power iteration, with a Lanczos (ARPACK) retry if it stalls.

    Clustered top singular values make power iteration crawl; the retry's
    value is accepted only if ARPACK converges, and the larger of the two
    lower bounds is reported.
    """
    val, ok, it = _power_iteration(mv, rmv, N, tol, max_iter)
    if ok or N < 3:
        return NormResult(val, ok, it)
    op = LinearOperator((N, N), matvec=mv, rmatvec=rmv, dtype=complex)
    try:
        s = svds(op, k=1, tol=tol, v0=np.full(N, 1.0 / np.sqrt(N), dtype=complex),
                 return_singular_vectors=False, maxiter=max_iter)
    except Exception:  # ArpackNoConvergence and friends: keep the flagged lower bound
        return NormResult(val, False, it)
    return NormResult(max(val, float(s[0])), True, it, "lanczos")


# ----------------------------------------------------------------------------
# boundary sup for the alpha in {1, 2} collapse


def _exact_boundary_norm(alpha: float) -> bool:
    # For alpha = 1 (Hardy) and alpha = 2 (Bergman) the coefficient norm is
    # exactly the integral norm, so ||M_g|| = sup |g| on the circle.
    return alpha in (1.0, 2.0)


def boundary_sup(values_fn, n_grid: int) -> float:
    """Max of ``|values_fn(theta)|`` over a uniform grid, polished locally."""
    th = 2 * np.pi * np.arange(n_grid) / n_grid
    v = np.abs(values_fn(th))
    j = int(np.argmax(v))
    h = 2 * np.pi / n_grid
    res = minimize_scalar(lambda t: -float(np.abs(values_fn(np.array([t])))[0]),
                          bounds=(th[j] - h, th[j] + h), method="bounded", options={"xatol": 1e-12})
    return float(max(v[j], -res.fun))


def _circle_grid(deg: int) -> int:
    return int(max(4096, 16 * 2 ** int(np.ceil(np.log2(deg + 2)))))


# ----------------------------------------------------------------------------
# sequences


def _adaptive(norm_at, N0: int, N_max: int, exact_at_start: bool, tol, max_iter, trunc_rtol):
    """Double the truncation until the norm moves less than ``trunc_rtol``.

    Returns ``(value, N, converged)``; ``exact_at_start`` marks cases where the
    first truncation is already exact (validity rule for polynomial powers).
    """
    N = max(1, min(N0, N_max))
    if N >= N_max and not exact_at_start and N_max >= 128:
        # already at the cap: compare against half of it instead of nothing
        N = N_max // 2
    prev = norm_at(N, tol, max_iter)
    ok_iter = prev.converged
    if exact_at_start and N0 <= N_max:
        return prev.value, N, ok_iter
    while N < N_max:
        N = min(2 * N, N_max)
        cur = norm_at(N, tol, max_iter)
        ok_iter = cur.converged
        if abs(cur.value - prev.value) <= trunc_rtol * max(cur.value, 1e-300):
            return cur.value, N, ok_iter
        prev = cur
    return prev.value, N, False


def _symbol_norm(phi_n: CoeffSeries, sp: SpaceParams):
    b_full = phi_n.trimmed()

    def norm_at(N, tol, max_iter):
        b = b_full[:N]
        w = sp.basis_scale(N)
        return _linop_norm(lambda x: _toeplitz_apply(b, w, x, False),
                           lambda y: _toeplitz_apply(b, w, y, True), N, tol, max_iter)

    return norm_at


def _symbol_cap(phi: CoeffSeries, N_max: int) -> int:
    return min(N_max, phi.cap + 1) if phi.tail_flag else N_max


def power_norm_seq(A: OperatorMatrix, n_list: Sequence[int], *, tol: float = DEFAULT_TOL,
                   max_iter: int = DEFAULT_MAX_ITER, trunc_rtol: float = TRUNCATION_RTOL) -> GrowthSeq:
    """``||A^n||`` for each ``n`` in ``n_list``.

    Multipliers are handled through the symbol ``phi^n``. The truncation
    starts at ``deg(phi) * n + 64`` (exact for polynomial symbols when it fits
    in ``A.N``) and is otherwise doubled up to ``A.N`` until it moves the value
    by less than ``trunc_rtol``; unconverged entries are flagged. For
    ``alpha`` in ``{1, 2}`` the norm is ``sup |phi|^n`` on the circle.
    """
    n_values = [check_positive_int(int(n), "n") for n in n_list]
    norms, flags, trunc, method = [], [], [], []
    if A.is_multiplier:
        phi, sp = A.symbol, A.alpha
        if _exact_boundary_norm(sp.alpha):
            s = boundary_sup(lambda t: horner(phi, np.exp(1j * t)), _circle_grid(phi.degree))
            for n in n_values:
                norms.append(s**n)
                flags.append(False)
                trunc.append(0)
                method.append("boundary-sup")
        else:
            N_max = _symbol_cap(phi, A.N)
            for n, pn in powers(phi, n_values, N_max - 1):
                N0 = phi.degree * n + 64
                exact = not phi.tail_flag and N0 <= N_max
                val, N, ok = _adaptive(_symbol_norm(pn, sp), N0, N_max, exact, tol, max_iter, trunc_rtol)
                norms.append(val)
                flags.append(not ok)
                trunc.append(N)
                method.append("symbol-power")
    elif A.kind == "backward_shift" and not A.adjointed:
        for n in n_values:
            r = _linop_norm(lambda x, n=n: _shift_power_apply(A.shift_exponent, n, x, False),
                            lambda y, n=n: _shift_power_apply(A.shift_exponent, n, y, True), A.N, tol, max_iter)
            norms.append(r.value)
            flags.append(not r.converged or n >= A.N)
            trunc.append(A.N)
            method.append("shift-power")
    else:
        E = A.dense if (A.kind == "dense" and sps.issparse(A.dense) and not A.adjointed) else A.entries
        sparse = sps.issparse(E)
        P = sps.identity(A.N, format="csr") if sparse else np.eye(A.N, dtype=E.dtype)
        k = 0
        for n in n_values:
            step = sparse_matrix_power(E, n - k) if sparse else np.linalg.matrix_power(E, n - k)
            P = (P @ step).tocsr() if sparse else P @ step
            k = n
            r = operator_norm(dense_operator(P), tol, max_iter)
            norms.append(r.value)
            flags.append(not r.converged)
            trunc.append(A.N)
            method.append("dense-power")
    return GrowthSeq(np.asarray(n_values), np.asarray(norms), None,
                     {"provenance": A.provenance, "truncation": trunc, "method": method}, np.asarray(flags))


def roots_of_unity(count: int) -> np.ndarray:
    count = check_positive_int(count, "lambda_count")
    out = np.exp(2j * np.pi * np.arange(count) / count)
    out[0] = 1.0
    return out


def cesaro_norm_seq(A_or_phi, sp: SpaceParams | float | None = None, lambda_grid=None,
                    n_list: Sequence[int] = (1, 2, 4, 8, 16, 32, 64), N: int | None = None, *,
                    tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER,
                    trunc_rtol: float = TRUNCATION_RTOL) -> list[GrowthSeq]:
    """``||M_n(lam A)||`` for every ``lam`` in ``lambda_grid`` and ``n`` in ``n_list``.

    Parameters
    ----------
    A_or_phi : OperatorMatrix or CoeffSeries
        A symbol (needs ``sp``) or an operator. Multipliers use the Cesaro
        symbol; weighted shifts their prefix-sum form; dense matrices the
        running sum of powers.
    lambda_grid : sequence of complex, optional
        Defaults to the 64th roots of unity.
    N : int, optional
        Largest truncation for symbols (defaults to the symbol cap + 1, or
        4096 for polynomials).

    Returns
    -------
    list of GrowthSeq
        One per ``lam``, in grid order.
    """
    lams = roots_of_unity(64) if lambda_grid is None else [check_unimodular(l) for l in np.atleast_1d(lambda_grid)]
    if len(lams) == 0:
        raise ValueError("lambda grid must be non-empty")
    n_values = sorted(set(check_positive_int(int(n), "n") for n in n_list))
    if isinstance(A_or_phi, CoeffSeries):
        if sp is None:
            raise ValueError("a symbol needs the space parameter alpha")
        phi = A_or_phi
        A = multiplier_matrix(phi, sp, N or (phi.cap + 1 if phi.tail_flag else 4096))
    else:
        A = A_or_phi
        if N is not None and A.kind != "dense":
            A = A.resized(N)
    return [_cesaro_one(A, complex(lam), n_values, tol, max_iter, trunc_rtol) for lam in lams]


def _cesaro_one(A, lam, n_values, tol, max_iter, trunc_rtol) -> GrowthSeq:
    norms, flags, trunc = [], [], []
    meta = {"provenance": A.provenance}
    if A.is_multiplier:
        phi, sp = A.symbol, A.alpha
        if _exact_boundary_norm(sp.alpha):
            meta["method"] = "boundary-sup"
            for n in n_values:
                norms.append(_boundary_cesaro_sup(phi, lam, n))
                flags.append(False)
                trunc.append(0)
        else:
            meta["method"] = "cesaro-symbol"
            N_max = _symbol_cap(phi, A.N)
            for n, cn in cesaro_symbols(phi, n_values, lam, N_max - 1):
                N0 = min(cn.degree + 64, N_max)
                val, Nf, ok = _adaptive(_symbol_norm(cn, sp), N0, N_max, False, tol, max_iter, trunc_rtol)
                norms.append(val)
                flags.append(not ok)
                trunc.append(Nf)
    elif A.kind == "backward_shift" and not A.adjointed:
        meta["method"] = "shift-cesaro"
        a = A.shift_exponent
        for n in n_values:

            def norm_at(N, tol, max_iter, n=n):
                return _linop_norm(lambda x: _shift_cesaro_apply(a, n, lam, x, False),
                                   lambda y: _shift_cesaro_apply(a, n, lam, y, True), N, tol, max_iter)

            val, Nf, ok = _adaptive(norm_at, min(4 * n + 64, A.N), A.N, False, tol, max_iter, trunc_rtol)
            norms.append(val)
            flags.append(not ok)
            trunc.append(Nf)
    else:
        meta["method"] = "dense-cesaro"
        for n, M in _dense_cesaro_means(np.asarray(A.entries), lam, n_values):
            r = operator_norm(dense_operator(M), tol, max_iter)
            norms.append(r.value)
            flags.append(not r.converged)
            trunc.append(A.N)
    meta["truncation"] = trunc
    return GrowthSeq(np.asarray(n_values), np.asarray(norms), lam, meta, np.asarray(flags))


def _boundary_cesaro_sup(phi, lam, n):
    def vals(t):
        x = lam * horner(phi, np.exp(1j * t))
        acc = np.ones_like(x)
        for _ in range(n):
            acc = acc * x + 1.0
        return acc / (n + 1)

    return boundary_sup(vals, _circle_grid(phi.degree * max(n, 1)))


def _dense_cesaro_means(E, lam, n_values):
    """Yield ``(n, M_n(lam E))`` from one running sum of powers."""
    P = np.eye(E.shape[0], dtype=complex)
    S = P.copy()
    lE = lam * E
    k = 0
    for n in n_values:
        while k < n:
            P = P @ lE
            S = S + P
            k += 1
        yield n, S / (n + 1)


def dense_cesaro_sup(E, n_max: int, lam: complex = 1.0) -> tuple[float, int]:
    """``max_{1<=n<=n_max} ||M_n(lam E)||`` for a small dense matrix, batched.

    Returns the sup and the ``n`` attaining it.
    """
    E = np.asarray(E, dtype=complex)
    n_max = check_positive_int(n_max, "n_max")
    lam = check_unimodular(lam)
    best, arg = 0.0, 0
    block = 4096
    P = np.eye(E.shape[0], dtype=complex)
    S = P.copy()
    lE = lam * E
    n = 0
    while n < n_max:
        m = min(block, n_max - n)
        stack = np.empty((m,) + E.shape, dtype=complex)
        for i in range(m):
            P = P @ lE
            S = S + P
            n += 1
            stack[i] = S / (n + 1)
        norms = np.linalg.norm(stack, 2, axis=(1, 2))
        j = int(np.argmax(norms))
        if norms[j] > best:
            best, arg = float(norms[j]), n - m + 1 + j
    return best, arg


# ----------------------------------------------------------------------------
# probes


def acb_probe(A: OperatorMatrix, vectors=None, N_max: int = 512) -> float:
    """``sup_x sup_{M <= N_max} (1/M) sum_{j=1..M} ||A^j x|| / ||x||``.

    ``vectors`` is an ``(N, K)`` array of columns; by default the basis
    vectors of the truncation.
    """
    N_max = check_positive_int(N_max, "N_max")
    X = np.eye(A.N, dtype=complex) if vectors is None else np.asarray(vectors, dtype=complex)
    if X.ndim == 1:
        X = X[:, None]
    norms0 = np.linalg.norm(X, axis=0)
    if np.any(norms0 == 0):
        raise ValueError("sample vectors must be nonzero")
    Y = X / norms0
    total = np.zeros(Y.shape[1])
    best = 0.0
    for j in range(1, N_max + 1):
        Y = A.matvec(Y)
        total += np.linalg.norm(Y, axis=0)
        best = max(best, float(np.max(total)) / j)
    return best


def media_residual(A: OperatorMatrix, n: int) -> float:
    """``||M_n(A) - n/(n+1) M_(n-1)(A) - A^n/(n+1)||`` on the dense section."""
    n = check_positive_int(n, "n")
    E = np.asarray(A.entries, dtype=complex)
    P = np.eye(A.N, dtype=complex)
    S = P.copy()
    for _ in range(n - 1):
        P = P @ E
        S = S + P
    prev = S / n
    P = P @ E
    cur = (S + P) / (n + 1)
    R = cur - (n / (n + 1)) * prev - P / (n + 1)
    return float(np.linalg.norm(R, 2))


def cesaro_lower_bound_holds(power_norm: float, prev_mean: float, mean: float, n: int, slack: float = 1e-9) -> bool:
    """Check ``||M_n|| >= ||A^n||/(n+1) - ||M_(n-1)||`` (up to ``slack``)."""
    return mean >= power_norm / (n + 1) - prev_mean - slack * max(1.0, power_norm)



__all__ = [
    "OperatorMatrix", "NormResult", "multiplier_matrix", "dense_operator", "weighted_backward_shift", "adjoint",
    "operator_norm", "power_norm_seq", "cesaro_norm_seq", "roots_of_unity", "acb_probe", "media_residual",
    "dense_cesaro_sup", "boundary_sup",
]

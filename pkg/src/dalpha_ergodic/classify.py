"""Classification pipeline: symbol spec in, verdicts and evidence out.

The pipeline runs a sup-norm check, then (below ``alpha = 1``) power, Cesaro
and unimodular-rotated Cesaro norm sequences with growth verdicts, integral
sufficient conditions and UBSCM embedding tables. Reports are plain dicts
written as JSON or CSV; no field depends on wall-clock time or thread order.
"""

from __future__ import annotations

import ast
import csv
import io
import json
import math
import operator
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .citations import cite
from .growth import GrowthSeq, growth_fit, growth_verdict
from .operators import cesaro_norm_seq, multiplier_matrix, power_norm_seq, roots_of_unity
from .quadrature import (
    ClosedForm,
    DiscIntegrand,
    boundary_singular_points,
    default_test_set,
    integrate_disc,
    sup_norm_check,
    ubscm_probe,
)
from .series import CoeffSeries, cesaro_symbols, from_coeffs
from .spaces import SpaceParams, coeff_norm_sq
from .zoo import SYMBOL_ZOO, ZOO, cusp_closed_form, cusp_tail_mass, phi_cusp, phi_mz, phi_power_half

SCHEMA_VERSION = "1.0"
DIAGNOSTICS = ("pb", "cb", "ukb", "acb", "integrals", "ubscm")
SUP_TOL = 1e-6

HOLDS = "holds (plausible)"
FAILS = "fails (certified lower bound)"
INCONCLUSIVE = "inconclusive"

CSV_COLUMNS = ("n", "lambda_re", "lambda_im", "norm", "flag")


class ConfigError(ValueError):
    """Invalid experiment configuration (CLI exit code 3)."""


# ----------------------------------------------------------------------------
# config


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything that determines a report.

    Parameters
    ----------
    symbol : str
        Symbol spec: ``coeffs:[re,im;...]``, ``zoo:<name>``,
        ``builder:power_half(theta,k)``, ``builder:cusp(theta)`` or ``builder:mz``.
    alpha : float
        Space parameter, ``alpha > -1``.
    diagnostics : tuple of str
        Subset of ``pb, cb, ukb, acb, integrals, ubscm``.
    n_max : int
        Largest ``n`` of the dyadic sequences.
    lambda_count : int
        Number of roots of unity in the UKB grid.
    trunc : int
        Matrix truncation cap (also the series cap for non-polynomial symbols).
    """

    symbol: str
    alpha: float
    diagnostics: tuple[str, ...] = DIAGNOSTICS
    n_max: int = 512
    lambda_count: int = 64
    trunc: int = 4096
    tol: float = 1e-8
    seed: int = 7
    out: str | None = None
    format: str = "json"
    plateau_tol: float = 0.01
    growth_threshold: float = 0.05
    min_r2: float = 0.9

    def __post_init__(self):
        try:
            alpha = float(self.alpha)
        except (TypeError, ValueError):
            raise ConfigError(f"alpha must be a number, got {self.alpha!r}") from None
        if not math.isfinite(alpha) or alpha <= -1:
            raise ConfigError(f"alpha must be > -1, got {self.alpha!r}")
        object.__setattr__(self, "alpha", alpha)
        for name, lo in (("n_max", 1), ("lambda_count", 1), ("trunc", 2)):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or v < lo:
                raise ConfigError(f"{name} must be an integer >= {lo}, got {v!r}")
            object.__setattr__(self, name, int(v))
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ConfigError(f"seed must be a nonnegative integer, got {self.seed!r}")
        for name in ("tol", "plateau_tol", "growth_threshold"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)!r}")
            object.__setattr__(self, name, v)
        if not 0 <= float(self.min_r2) <= 1:
            raise ConfigError(f"min_r2 must lie in [0, 1], got {self.min_r2!r}")
        diags = tuple(self.diagnostics)
        bad = [d for d in diags if d not in DIAGNOSTICS]
        if bad or not diags:
            raise ConfigError(f"diagnostics must be a non-empty subset of {DIAGNOSTICS}, got {diags!r}")
        object.__setattr__(self, "diagnostics", tuple(d for d in DIAGNOSTICS if d in diags))
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}")
        if self.n_max < 8 and any(d in diags for d in ("pb", "cb", "ukb")):
            raise ConfigError("growth fits need n_max >= 8 (four dyadic points)")

    def as_dict(self) -> dict:
        d = asdict(self)
        d["diagnostics"] = list(self.diagnostics)
        d.pop("out")
        return d


# ----------------------------------------------------------------------------
# symbol specs

_NAMES = {"pi": math.pi, "e": math.e}
_FUNCS = {"sqrt": math.sqrt, "cos": math.cos, "sin": math.sin, "exp": math.exp, "log": math.log}
_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv,
           ast.Pow: operator.pow}
_UNOPS = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def parse_number(text: str) -> float:
    """Evaluate a small real arithmetic expression (``pi/2``, ``-sqrt(2)/4``)."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            return _UNOPS[type(node.op)](ev(node.operand))
        if (isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS
                and len(node.args) == 1 and not node.keywords):
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ConfigError(f"unsupported expression {text!r}")

    try:
        val = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ValueError, ZeroDivisionError, OverflowError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot evaluate {text!r}: {exc}") from None
    if not math.isfinite(val):
        raise ConfigError(f"{text!r} is not finite")
    return val


@dataclass
class ParsedSymbol:
    spec: str
    series: CoeffSeries
    closed_form: ClosedForm | None = None
    tail_mass: float | None = None


_BUILDER = re.compile(r"^(\w+)\s*(?:\((.*)\))?$")


def parse_symbol(spec: str, trunc: int = 4096, alpha: float = 0.0) -> ParsedSymbol:
    """Turn a symbol spec into a series (plus closed form where one exists)."""
    if not isinstance(spec, str) or ":" not in spec:
        raise ConfigError(f"symbol spec must look like kind:value, got {spec!r}")
    kind, body = spec.split(":", 1)
    kind, body = kind.strip(), body.strip()
    if kind == "coeffs":
        if not (body.startswith("[") and body.endswith("]")):
            raise ConfigError("coeffs spec must be coeffs:[re,im;re,im;...]")
        vals = []
        for item in body[1:-1].split(";"):
            parts = [p for p in item.split(",")]
            if not item.strip() or len(parts) > 2:
                raise ConfigError(f"bad coefficient entry {item!r}; expected re,im")
            re_ = parse_number(parts[0])
            im_ = parse_number(parts[1]) if len(parts) == 2 else 0.0
            vals.append(complex(re_, im_))
        return ParsedSymbol(spec, from_coeffs(vals, len(vals) - 1))
    if kind == "zoo":
        if body not in SYMBOL_ZOO:
            hint = " (an operator example; use the examples command)" if body in ZOO else ""
            raise ConfigError(f"unknown zoo symbol {body!r}{hint}; known: {sorted(SYMBOL_ZOO)}")
        if body == "cusp":
            return _cusp(spec, math.pi / 2, trunc, alpha)
        return ParsedSymbol(spec, SYMBOL_ZOO[body].factory())
    if kind == "builder":
        m = _BUILDER.match(body)
        if not m:
            raise ConfigError(f"bad builder spec {body!r}")
        name, args = m.group(1), m.group(2)
        argv = [parse_number(a) for a in args.split(",")] if args and args.strip() else []
        try:
            if name == "mz" and not argv:
                return ParsedSymbol(spec, phi_mz())
            if name == "power_half" and len(argv) <= 2:
                theta = argv[0] if argv else math.pi / 2
                k = argv[1] if len(argv) > 1 else 1
                if k != int(k) or k < 1:
                    raise ConfigError(f"power_half needs an integer k >= 1, got {k}")
                return ParsedSymbol(spec, phi_power_half(theta, int(k)))
            if name == "cusp" and len(argv) <= 1:
                return _cusp(spec, argv[0] if argv else math.pi / 2, trunc, alpha)
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from None
        raise ConfigError(f"unknown builder {body!r}; use power_half(theta,k), cusp(theta) or mz")
    raise ConfigError(f"unknown symbol kind {kind!r}; use coeffs, zoo or builder")


def _cusp(spec, theta, trunc, alpha):
    if trunc < 512:
        raise ConfigError(f"the cusp symbol needs trunc >= 512, got {trunc}")
    cap = trunc - 1
    try:
        series = phi_cusp(theta, cap)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return ParsedSymbol(spec, series, cusp_closed_form(theta), cusp_tail_mass(cap, alpha))


# ----------------------------------------------------------------------------
# verdicts


@dataclass
class Verdict:
    """Status of one property with the evidence behind it.

    A ``fails`` status always carries a witness (the ``n``, ``lambda`` or
    test function achieving the violation).
    """

    property: str
    status: str
    evidence: dict = field(default_factory=dict)
    citations: list[str] = field(default_factory=list)
    witness: dict | None = None
    note: str = ""

    def __post_init__(self):
        if self.status not in (HOLDS, FAILS, INCONCLUSIVE):
            raise ValueError(f"bad status {self.status!r}")
        if self.status == FAILS and not self.witness:
            raise ValueError("a failing verdict needs a witness")
        if not self.citations:
            raise ValueError("a verdict needs at least one citation")

    def as_dict(self) -> dict:
        return {"property": self.property, "status": self.status, "evidence": self.evidence,
                "citations": list(self.citations), "witness": self.witness, "note": self.note}


def _fit_dict(seq: GrowthSeq, cfg: ExperimentConfig):
    rep = growth_fit(seq, plateau_tol=cfg.plateau_tol)
    return rep, growth_verdict(rep, cfg.growth_threshold, cfg.min_r2)


def _seq_verdict(prop, seq, cfg, citation, what):
    if np.any(seq.norms <= 0):
        # no power law to fit: a vanishing section is either nilpotent or a truncation artifact
        ev = {"sequence": what, "norms": [float(v) for v in seq.norms]}
        if seq.flagged:
            return Verdict(prop, INCONCLUSIVE, ev, [citation], note="zero norms from an invalid truncation")
        return Verdict(prop, HOLDS, ev, [citation], note="the sequence vanishes (nilpotent)")
    rep, v = _fit_dict(seq, cfg)
    ev = {"fit": rep.as_dict(), "sequence": what}
    if v == "bounded":
        if seq.flagged:
            # flagged values are lower bounds: a plateau among them proves nothing
            return Verdict(prop, INCONCLUSIVE, ev, [citation], note="plateau built on flagged values")
        return Verdict(prop, HOLDS, ev, [citation])
    if v == "growing":
        j = int(np.argmax(seq.norms))
        wit = {"n": int(seq.n_values[j]), "norm": float(seq.norms[j])}
        if seq.lam is not None:
            wit["lambda"] = [float(np.real(seq.lam)), float(np.imag(seq.lam))]
        return Verdict(prop, FAILS, ev, [citation], wit)
    return Verdict(prop, INCONCLUSIVE, ev, [citation])


# ----------------------------------------------------------------------------
# pipeline pieces


def _dyadic(n_max):
    return [2**k for k in range(int(math.log2(n_max)) + 1)]


def _cb_witness(phi: CoeffSeries, sp: SpaceParams, n_values, cap):
    """``||M_n(M_phi) 1|| = ||c_n||``: the D_alpha norms of the Cesaro symbols."""
    norms = [math.sqrt(coeff_norm_sq(c, sp)) for _, c in cesaro_symbols(phi, n_values, 1.0, cap)]
    return GrowthSeq(np.asarray(n_values), np.asarray(norms), 1.0, {"method": "cesaro-symbol norm, f = 1"})


def _acb_sequence(phi: CoeffSeries, sp: SpaceParams, n_max: int, N: int, seed: int, count: int = 16):
    """Running ``(1/M) sum_{j<=M} ||M_phi^j x||`` over sample vectors, at dyadic ``M``.

    The leading section of a multiplier is multiplicative (lower triangular),
    so every value is a lower bound for the untruncated average.
    """
    A = multiplier_matrix(phi, sp, N)
    rng = np.random.default_rng(seed)
    X = np.zeros((N, count), dtype=complex)
    k = min(count // 2, N)
    X[np.arange(k), np.arange(k)] = 1.0
    X[:, k:] = rng.standard_normal((N, count - k)) + 1j * rng.standard_normal((N, count - k))
    X /= np.linalg.norm(X, axis=0)
    labels = [f"e_{i}" for i in range(k)] + [f"random[{i}]" for i in range(count - k)]
    targets = set(_dyadic(n_max))
    total = np.zeros(count)
    n_vals, vals, args = [], [], []
    Y = X
    for j in range(1, n_max + 1):
        Y = A.matvec(Y)
        total += np.linalg.norm(Y, axis=0)
        if j in targets:
            i = int(np.argmax(total))
            n_vals.append(j)
            vals.append(float(total[i]) / j)
            args.append(labels[i])
    return GrowthSeq(np.asarray(n_vals), np.asarray(vals), None, {"method": "acb sample vectors", "N": N}), args


_MAX_SING = 16


def _integral(kind, sym: ParsedSymbol, alpha: float, tol: float, lam: complex = 1.0):
    """Sufficient-condition integral: unweighted for ``0 < alpha < 1``, log-weighted at 0."""
    phi = sym.closed_form if sym.closed_form is not None else sym.series
    log_w = alpha == 0.0
    density = {"pb": "pb_density", "cb": "cb_density", "ukb": "ukb_density", "plain": "plain"}[kind]
    g = DiscIntegrand(density, phi, SpaceParams(0.0), lam, log_weighted=log_w)
    sing = boundary_singular_points(phi, lam, mode="pb" if kind == "pb" else "cb")
    if kind == "plain" or not sing or len(sing) > _MAX_SING:
        # no isolated boundary singularity: the angular trapezoid rule applies
        sing = (1.0 + 0j,) if sym.closed_form is not None else ()
    return integrate_disc(g, 0.0, tol, singular_points=sing)


def _integrals(sym: ParsedSymbol, cfg: ExperimentConfig):
    a = cfg.alpha
    if a >= 1:
        return {"evaluated": False, "reason": "alpha >= 1: the sup-norm test is already a characterization"}
    if a < 0:
        return {"evaluated": False,
                "reason": "alpha < 0: the sufficient conditions need log(1 - phi) in D_alpha, which is not implemented"}
    weight = "log(1/(1-|z|^2)) dA" if a == 0 else "dA"
    out = {"evaluated": True, "weight": weight}
    out["pb"] = _integral("pb", sym, a, cfg.tol).as_dict()
    out["cb"] = _integral("cb", sym, a, cfg.tol).as_dict()
    if "ukb" in cfg.diagnostics:
        lams = roots_of_unity(min(cfg.lambda_count, 16))
        res = [_integral("ukb", sym, a, cfg.tol, lam) for lam in lams]
        vals = [r.value if r.converged else math.inf for r in res]
        j = int(np.argmax(vals))
        out["ukb"] = {"sup_value": res[j].value, "argmax_lambda": [float(lams[j].real), float(lams[j].imag)],
                      "converged": all(r.converged for r in res), "lambda_count": len(lams),
                      "divergent": any(r.divergent for r in res)}
    # hypothesis of the adjoint mean-ergodicity theorem
    out["phi_prime_sq"] = _integral("plain", sym, a, cfg.tol).as_dict()
    return out


def _ubscm(sym: ParsedSymbol, cfg: ExperimentConfig):
    sp = SpaceParams(cfg.alpha)
    # kernels enter only where closed forms exist (0 <= alpha <= 1)
    test = default_test_set(sp, seed=cfg.seed)
    n_list = _dyadic(min(cfg.n_max, 64))
    phi = sym.closed_form if sym.closed_form is not None else sym.series
    out = {"n_max": n_list[-1], "test_set_size": len(test)}
    if "pb" in cfg.diagnostics:
        out["pb"] = ubscm_probe(phi, sp, "pb", n_list, test).as_dict()
    if "cb" in cfg.diagnostics:
        out["cb"] = ubscm_probe(phi, sp, "cb", n_list, test).as_dict()
    if "ukb" in cfg.diagnostics:
        lams = roots_of_unity(cfg.lambda_count)
        tabs = ubscm_probe(phi, sp, "ukb", n_list, test, lam=lams)
        sup = np.max([t.ratios for t in tabs], axis=0)
        worst = int(np.argmax([t.ratios[-1] for t in tabs]))
        d = tabs[worst].as_dict()
        d["sup_over_lambda"] = [float(x) for x in sup]
        d["argmax_lambda"] = [float(lams[worst].real), float(lams[worst].imag)]
        out["ukb"] = d
    return out


def _chunks(seq, k):
    return [seq[i::k] for i in range(k)]


# ----------------------------------------------------------------------------
# run


def run_classify(cfg: ExperimentConfig, *, workers: int = 4) -> dict:
    """Run the pipeline for one config and return the report document."""
    if not isinstance(cfg, ExperimentConfig):
        raise ConfigError("run_classify needs an ExperimentConfig")
    sym = parse_symbol(cfg.symbol, cfg.trunc, cfg.alpha)
    sp = SpaceParams(cfg.alpha)
    phi = sym.series
    n_values = _dyadic(cfg.n_max)
    flags: list[str] = []
    report: dict[str, Any] = {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.as_dict(),
        "thresholds": {"plateau_tol": cfg.plateau_tol, "growth_threshold": cfg.growth_threshold,
                       "min_r2": cfg.min_r2, "sup_tol": SUP_TOL},
        "symbol": {"spec": sym.spec, "degree": phi.degree, "cap": phi.cap, "truncated_tail": phi.tail_flag,
                   "tail_mass": sym.tail_mass,
                   "closed_form": sym.closed_form.name if sym.closed_form is not None else None},
    }
    sup = sup_norm_check(sym.closed_form if sym.closed_form is not None else phi)
    report["sup_norm"] = {"value": sup.value, "argmax": [sup.argmax.real, sup.argmax.imag], "stable": sup.stable}
    if not sup.stable:
        flags.append("sup_norm: grid maximum not stable under refinement")
    verdicts: dict[str, Verdict] = {}
    sequences: dict[str, Any] = {}

    if sup.value > 1 + SUP_TOL:
        report["regime"] = "spectral"
        wit = {"z": [sup.argmax.real, sup.argmax.imag], "abs_phi": sup.value}
        for prop in ("PB", "CB", "UKB"):
            verdicts[prop] = Verdict(prop, FAILS, {"sup_norm": sup.value}, [cite("spectral")], wit)
        verdicts["ME"] = _me_from_cb(verdicts["CB"], cfg.alpha)
        verdicts["ME_adjoint"] = Verdict("ME_adjoint", INCONCLUSIVE, {}, [cite("adjoint_me")],
                                         note="not evaluated when sup|phi| > 1")
    else:
        report["regime"] = "large-alpha" if cfg.alpha >= 1 else "sequences"
        A = multiplier_matrix(phi, sp, cfg.trunc)
        lams = roots_of_unity(cfg.lambda_count) if "ukb" in cfg.diagnostics else np.array([1.0 + 0j])
        tasks = {}
        with ThreadPoolExecutor(max_workers=workers) as pool:
            if "pb" in cfg.diagnostics:
                tasks["power"] = pool.submit(power_norm_seq, A, n_values, tol=cfg.tol)
            if "cb" in cfg.diagnostics or "ukb" in cfg.diagnostics:
                tasks["cesaro"] = [pool.submit(cesaro_norm_seq, A, None, list(ch), n_values, tol=cfg.tol)
                                   for ch in _chunks(list(lams), workers) if len(ch)]
            if "cb" in cfg.diagnostics and cfg.alpha < 1:
                tasks["cb_witness"] = pool.submit(_cb_witness, phi, sp, n_values, cfg.trunc - 1)
            if "acb" in cfg.diagnostics and cfg.alpha < 1:
                tasks["acb"] = pool.submit(_acb_sequence, phi, sp, cfg.n_max,
                                           min(cfg.trunc, max(256, cfg.n_max * max(phi.degree, 1) + 64)), cfg.seed)
            if "integrals" in cfg.diagnostics:
                tasks["integrals"] = pool.submit(_integrals, sym, cfg)
            if "ubscm" in cfg.diagnostics and cfg.alpha < 1:
                tasks["ubscm"] = pool.submit(_ubscm, sym, cfg)
            done = {k: ([f.result() for f in v] if isinstance(v, list) else v.result()) for k, v in tasks.items()}
        ces: list[GrowthSeq] = []
        if "cesaro" in done:
            # undo the round-robin chunking so sequences follow the lambda grid
            parts = done["cesaro"]
            for i in range(len(lams)):
                ces.append(parts[i % len(parts)][i // len(parts)])
        if "power" in done:
            sequences["power"] = done["power"].as_dict()
            if done["power"].flagged:
                flags.append("power: truncation or iteration not converged")
        if ces:
            sequences["cesaro"] = [s.as_dict() for s in ces]
            for s in ces:
                if s.flagged:
                    flags.append(f"cesaro: not converged at lambda={s.lam:.6f}")
        if cfg.alpha >= 1:
            for prop in ("PB", "CB", "UKB"):
                if prop.lower() in cfg.diagnostics:
                    verdicts[prop] = Verdict(prop, HOLDS, {"sup_norm": sup.value}, [cite("large_alpha")],
                                             note="sup|phi| <= 1 on the grid; equivalent to the property for alpha >= 1")
        else:
            if "power" in done:
                verdicts["PB"] = _seq_verdict("PB", done["power"], cfg, cite("pb_ubscm"), "||M_phi^n||")
            if "cb" in cfg.diagnostics:
                verdicts["CB"] = _cb_verdict(ces[0], done["cb_witness"], cfg)
                sequences["cb_witness"] = done["cb_witness"].as_dict()
            if "ukb" in cfg.diagnostics:
                verdicts["UKB"] = _ukb_verdict(ces, cfg)
        if "CB" in verdicts:
            verdicts["ME"] = _me_from_cb(verdicts["CB"], cfg.alpha)
        if "acb" in done:
            seq, args = done["acb"]
            sequences["acb"] = seq.as_dict()
            v = _seq_verdict("ACB", seq, cfg, cite("acb"), "acb averages")
            if v.status == FAILS:
                v.witness["vector"] = args[int(np.argmax(seq.norms))]
            v.note = "sample vectors only; a plateau is evidence, not proof"
            verdicts["ACB"] = v
        if "integrals" in done:
            report["integrals"] = done["integrals"]
            _apply_integrals(verdicts, done["integrals"], flags)
        if "CB" in verdicts:
            verdicts["ME_adjoint"] = _me_adjoint(verdicts["CB"], cfg.alpha, done.get("integrals"))
        if "ubscm" in done:
            report["ubscm"] = done["ubscm"]
    report["sequences"] = sequences
    report["verdicts"] = {k: v.as_dict() for k, v in verdicts.items()}
    report["flags"] = flags
    report["flagged"] = bool(flags)
    return report


def _cb_verdict(ces1: GrowthSeq, witness: GrowthSeq, cfg) -> Verdict:
    rep_w, v_w = _fit_dict(witness, cfg)
    if v_w == "growing":
        j = len(witness.n_values) - 1
        return Verdict("CB", FAILS, {"fit": rep_w.as_dict(), "sequence": "||M_n(M_phi) 1||"}, [cite("cb_ubscm")],
                       {"test_function": "f=1", "n": int(witness.n_values[j]), "norm": float(witness.norms[j])})
    v = _seq_verdict("CB", ces1, cfg, cite("cb_ubscm"), "||M_n(M_phi)||")
    v.evidence["witness_fit"] = rep_w.as_dict()
    return v


def _ukb_verdict(ces: list[GrowthSeq], cfg) -> Verdict:
    stack = np.array([s.norms for s in ces])
    best = stack.argmax(axis=0)
    sup = GrowthSeq(ces[0].n_values, stack.max(axis=0), flags=np.any([s.flags for s in ces], axis=0))
    v = _seq_verdict("UKB", sup, cfg, cite("ukb_ubscm"), "sup over lambda of ||M_n(lambda M_phi)||")
    v.evidence["lambda_count"] = len(ces)
    if v.status == FAILS:
        lam = ces[int(best[-1])].lam
        v.witness["lambda"] = [float(np.real(lam)), float(np.imag(lam))]
    return v


def _me_from_cb(cb: Verdict, alpha: float) -> Verdict:
    if alpha >= 1:
        return Verdict("ME", INCONCLUSIVE, {}, [cite("me_cb")],
                       note="the ME-CB equivalence is stated for -1 < alpha < 1")
    return Verdict("ME", cb.status, {"derived_from": "CB"}, [cite("me_cb")], cb.witness,
                   note="copied from the CB verdict")


def _me_adjoint(cb: Verdict, alpha: float, integrals) -> Verdict:
    if not 0 <= alpha < 1 or not integrals or not integrals.get("evaluated"):
        return Verdict("ME_adjoint", INCONCLUSIVE, {}, [cite("adjoint_me")],
                       note="hypotheses only checked for 0 <= alpha < 1 with integrals enabled")
    hyp = integrals["phi_prime_sq"]
    if not hyp["converged"]:
        return Verdict("ME_adjoint", INCONCLUSIVE, {"hypothesis": hyp}, [cite("adjoint_me")],
                       note="integral hypothesis on phi' not verified")
    return Verdict("ME_adjoint", cb.status, {"hypothesis": hyp, "derived_from": "CB"}, [cite("adjoint_me")],
                   cb.witness, note="conditional on the adjoint ME theorem; its integral hypothesis holds")


def _apply_integrals(verdicts, integrals, flags):
    """Converged sufficient integrals imply the property; divergence implies nothing."""
    if not integrals.get("evaluated"):
        return
    for key, prop, c in (("pb", "PB", "pb_integral"), ("cb", "CB", "cb_integral"), ("ukb", "UKB", "ukb_integral")):
        r = integrals.get(key)
        if r is None:
            continue
        if not r["converged"] and not r.get("divergent"):
            flags.append(f"integral {key}: not converged")
        v = verdicts.get(prop)
        if v is None or not r["converged"]:
            continue
        v.citations.append(cite(c))
        v.evidence["sufficient_integral"] = r
        if v.status == INCONCLUSIVE:
            v.status = HOLDS
            v.note = "sufficient integral condition is finite"
        elif v.status == FAILS:
            flags.append(f"integral {key}: finite sufficient integral contradicts a failing {prop} sequence")


# ----------------------------------------------------------------------------
# zoo examples


def run_paper_examples(name: str) -> dict:
    """Run every claim of a zoo entry and tabulate its norm sequences."""
    if name not in ZOO:
        raise ConfigError(f"unknown example {name!r}; known: {sorted(ZOO)}")
    e = ZOO[name]
    claims = [c.run() for c in e.claims]
    doc = {
        "schema_version": SCHEMA_VERSION,
        "example": name,
        "kind": e.kind,
        "description": e.description,
        "alpha": e.alpha,
        "claims": [c.as_dict() for c in claims],
        "table": e.table() if e.table is not None else None,
        "all_passed": all(c.passed for c in claims),
    }
    return doc


# ----------------------------------------------------------------------------
# writers


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def to_json(doc: dict) -> str:
    return json.dumps(_clean(doc), indent=2, sort_keys=False) + "\n"


def to_csv(doc: dict) -> str:
    """Sequence table: power rows have blank lambda fields, Cesaro rows carry lambda."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    seqs = doc.get("sequences", {})
    if "power" in seqs:
        p = seqs["power"]
        for n, v, f in zip(p["n"], p["norm"], p["flag"]):
            w.writerow([n, "", "", repr(float(v)), int(f)])
    for s in seqs.get("cesaro", []):
        lr, li = s["lambda"]
        for n, v, f in zip(s["n"], s["norm"], s["flag"]):
            w.writerow([n, repr(float(lr)), repr(float(li)), repr(float(v)), int(f)])
    return buf.getvalue()


def write_report(doc: dict, path: str, fmt: str = "json") -> None:
    text = to_json(doc) if fmt == "json" else to_csv(doc)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ----------------------------------------------------------------------------
# estimator


class ErgodicClassifier(BaseEstimator):
    """Estimator front end for :func:`run_classify`.

    ``X`` is a sequence of symbol specs. ``transform`` returns the report
    documents, ``predict`` an array of statuses with columns ``properties_``.
    """

    properties_ = ("PB", "CB", "UKB", "ME", "ACB")

    def __init__(self, alpha: float = 0.0, n_max: int = 512, lambda_count: int = 64, trunc: int = 4096,
                 tol: float = 1e-8, seed: int = 7, diagnostics: Sequence[str] = ("pb", "cb", "ukb")):
        self.alpha = alpha
        self.n_max = n_max
        self.lambda_count = lambda_count
        self.trunc = trunc
        self.tol = tol
        self.seed = seed
        self.diagnostics = diagnostics

    def _config(self, spec):
        return ExperimentConfig(spec, self.alpha, tuple(self.diagnostics), self.n_max, self.lambda_count,
                                self.trunc, self.tol, self.seed)

    def fit(self, X=None, y=None):
        # validates the parameters (and the specs, if given); nothing is learned
        self._config("builder:mz")
        for spec in _as_specs(X):
            parse_symbol(spec, self.trunc, self.alpha)
        self.n_features_in_ = 1
        return self

    def transform(self, X) -> list[dict]:
        return [run_classify(self._config(spec)) for spec in _as_specs(X)]

    def predict(self, X) -> np.ndarray:
        docs = self.transform(X)
        out = np.full((len(docs), len(self.properties_)), "not run", dtype=object)
        for i, d in enumerate(docs):
            for j, p in enumerate(self.properties_):
                if p in d["verdicts"]:
                    out[i, j] = d["verdicts"][p]["status"]
        return out


def _as_specs(X) -> list[str]:
    if X is None:
        return []
    if isinstance(X, str):
        return [X]
    return [str(x) for x in np.asarray(X, dtype=object).ravel()]

"""Command line entry point: ``classify``, ``examples`` and ``integrals``.

Exit codes: 0 clean, 2 flagged numerics (or a failed example claim),
3 configuration error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .classify import (
    DIAGNOSTICS,
    ConfigError,
    ExperimentConfig,
    _integral,
    parse_symbol,
    run_classify,
    run_paper_examples,
    to_json,
    write_report,
)
from .citations import cite
from .operators import roots_of_unity
from .zoo import ZOO

EXIT_OK, EXIT_FLAGGED, EXIT_CONFIG = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dalpha-ergodic", description="Ergodic diagnostics for multipliers on D_alpha.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("classify", help="classify M_phi on D_alpha")
    c.add_argument("--symbol", required=True, help="coeffs:[re,im;...] | zoo:<name> | builder:<name>(args)")
    c.add_argument("--alpha", required=True, type=float)
    c.add_argument("--n-max", type=int, default=512)
    c.add_argument("--lambda-count", type=int, default=64)
    c.add_argument("--trunc", type=int, default=4096)
    c.add_argument("--tol", type=float, default=1e-8)
    c.add_argument("--seed", type=int, default=7)
    c.add_argument("--diagnostics", default=",".join(DIAGNOSTICS),
                   help="comma separated subset of " + ",".join(DIAGNOSTICS))
    c.add_argument("--out", required=True)
    c.add_argument("--format", choices=("json", "csv"), default="json")

    e = sub.add_parser("examples", help="run the claims of a named example")
    e.add_argument("--name", required=True, help="one of: " + ", ".join(sorted(ZOO)))
    e.add_argument("--out", required=True)

    i = sub.add_parser("integrals", help="sufficient-condition integral for a symbol")
    i.add_argument("--kind", required=True, choices=("pb", "cb", "ukb"))
    i.add_argument("--symbol", required=True)
    i.add_argument("--alpha", required=True, type=float)
    i.add_argument("--tol", type=float, default=1e-8)
    i.add_argument("--lambda-count", type=int, default=16)
    i.add_argument("--trunc", type=int, default=4096)
    i.add_argument("--out", default=None, help="write JSON here instead of stdout")
    return p


def _classify(args) -> int:
    diags = tuple(d.strip() for d in args.diagnostics.split(",") if d.strip())
    cfg = ExperimentConfig(args.symbol, args.alpha, diags, args.n_max, args.lambda_count, args.trunc,
                           args.tol, args.seed, args.out, args.format)
    doc = run_classify(cfg)
    write_report(doc, args.out, args.format)
    return EXIT_FLAGGED if doc["flagged"] else EXIT_OK


def _examples(args) -> int:
    doc = run_paper_examples(args.name)
    write_report(doc, args.out, "json")
    return EXIT_OK if doc["all_passed"] else EXIT_FLAGGED


def _integrals(args) -> int:
    if args.alpha >= 1:
        raise ConfigError("integral conditions are used for 0 <= alpha < 1; for alpha >= 1 the sup-norm test decides")
    if args.alpha < 0:
        raise ConfigError("alpha < 0 needs log(1 - phi) in D_alpha, which is not implemented")
    if args.lambda_count < 1 or args.tol <= 0:
        raise ConfigError("lambda-count must be >= 1 and tol > 0")
    sym = parse_symbol(args.symbol, args.trunc, args.alpha)
    doc = {"schema_version": "1.0", "kind": args.kind, "symbol": args.symbol, "alpha": args.alpha,
           "weight": "log(1/(1-|z|^2)) dA" if args.alpha == 0 else "dA",
           "citation": cite(f"{args.kind}_integral")}
    if args.kind == "ukb":
        lams = roots_of_unity(args.lambda_count)
        res = [_integral("ukb", sym, args.alpha, args.tol, lam) for lam in lams]
        doc["per_lambda"] = [{"lambda": [float(l.real), float(l.imag)], **r.as_dict()} for l, r in zip(lams, res)]
        vals = [r.value if r.converged else np.inf for r in res]
        j = int(np.argmax(vals))
        doc["result"] = res[j].as_dict()
        doc["argmax_lambda"] = [float(lams[j].real), float(lams[j].imag)]
        results = res
    else:
        r = _integral(args.kind, sym, args.alpha, args.tol)
        doc["result"] = r.as_dict()
        results = [r]
    flagged = any(not r.converged and not r.divergent for r in results)
    doc["flagged"] = flagged
    text = to_json(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_FLAGGED if flagged else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        handler = {"classify": _classify, "examples": _examples, "integrals": _integrals}[args.command]
        return handler(args)
    except ConfigError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG
    except OSError as exc:
        sys.stderr.write(f"cannot write output: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())

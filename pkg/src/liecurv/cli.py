"""Command-line interface: every operation behind one batch-oriented binary.

Inputs are structure/metric literals or paths to files containing them;
output is human-readable text or JSON (schema version "1").  Exit codes:
0 success, 1 a checked claim failed (non-Einstein metric, failed catalog
claim), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

import numpy as np

from . import catalog as catalog_mod
from . import curvature, derivations, linalg, moment, nice
from .errors import LieCurvError
from .metric import Metric, parse_metric, signature
from .scalars import DEFAULT_TOL, format_scalar, parse_scalar
from .structure import classify, parse_structure, print_structure

SCHEMA = "1"
_DECIMAL = re.compile(r"\d+\.\d+")


def _read_arg(text: str) -> str:
    """A literal, or the contents of a file if the argument names one."""
    if text and os.path.exists(text) and os.path.isfile(text):
        with open(text) as fh:
            return fh.read().strip()
    return text


def _fmt_matrix(M) -> list:
    return [[format_scalar(x) for x in row] for row in M]


def _print_matrix(M, indent="  "):
    widths = [max(len(format_scalar(M[i, j])) for i in range(M.shape[0]))
              for j in range(M.shape[1])]
    for i in range(M.shape[0]):
        row = "  ".join(format_scalar(M[i, j]).rjust(widths[j])
                        for j in range(M.shape[1]))
        print(indent + row)


class _Inputs:
    """Resolved structure/metric/backend for one invocation."""

    def __init__(self, args, need_metric=True):
        backend = args.backend or os.environ.get("RICCI_BACKEND") or "exact"
        if backend not in ("exact", "float"):
            raise LieCurvError(f"unknown backend {backend!r}")
        stext = _read_arg(args.structure)
        mtext = _read_arg(args.metric) if need_metric and args.metric else None
        if backend == "exact":
            texts = [stext] + ([mtext] if mtext else [])
            if any(_DECIMAL.search(t or "") for t in texts):
                print("warning: decimal literals in input; using float backend",
                      file=sys.stderr)
                backend = "float"
        self.exact = backend == "exact"
        self.backend = backend
        self.tol = args.tolerance
        self.a = parse_structure(stext, exact=self.exact, tol=self.tol)
        self.S = None
        if need_metric:
            if mtext is None:
                raise LieCurvError("this command needs --metric")
            self.S = parse_metric(mtext, self.a.n, exact=self.exact, tol=self.tol)


def _emit(args, payload: dict, text_fn):
    if args.output == "json":
        print(json.dumps({"schema": SCHEMA, **payload}, sort_keys=True))
    else:
        text_fn()


def cmd_classify(args):
    inp = _Inputs(args, need_metric=False)
    rep = classify(inp.a).to_json()
    def text():
        print(f"structure {print_structure(inp.a)}")
        for k, v in rep.items():
            print(f"  {k}: {v}")
    _emit(args, {"command": "classify", "report": rep}, text)
    return 0


def cmd_ricci(args):
    inp = _Inputs(args)
    data = curvature.ricci_general(inp.a, inp.S)
    def text():
        print("ricci tensor:")
        _print_matrix(data.ric_form)
        print("ricci operator:")
        _print_matrix(data.ric_op)
        print(f"scalar curvature: {format_scalar(data.scalar)}")
        if data.einstein is not None:
            print(f"einstein: lambda = {format_scalar(data.einstein)}")
    _emit(args, {"command": "ricci", "report": data.to_json()}, text)
    return 0


def cmd_bforms(args):
    inp = _Inputs(args)
    B, traces = curvature.b_forms(inp.a, inp.S)
    payload = {"command": "bforms",
               "forms": {str(k): _fmt_matrix(B[k]) for k in sorted(B)},
               "traces": {str(k): format_scalar(traces[k]) for k in sorted(traces)}}
    def text():
        for k in sorted(B):
            print(f"B{k}:")
            _print_matrix(B[k])
        for k in sorted(traces):
            print(f"tr B{k}: {format_scalar(traces[k])}")
    _emit(args, payload, text)
    return 0


def cmd_einstein(args):
    inp = _Inputs(args)
    data = curvature.ricci_general(inp.a, inp.S)
    ok = data.einstein is not None
    def text():
        if ok:
            print(f"Einstein, lambda = {format_scalar(data.einstein)}, "
                  f"s = {format_scalar(data.scalar)}")
        else:
            print("not Einstein")
    _emit(args, {"command": "einstein", "einstein": ok,
                 "report": data.to_json()}, text)
    return 0 if ok else 1


def cmd_mn(args):
    inp = _Inputs(args)
    rep = curvature.mn_criterion(inp.a, inp.S)
    def text():
        for k, v in rep.items():
            print(f"{k}: {v}")
    _emit(args, {"command": "mn", "report": rep}, text)
    return 0


def cmd_holonomy(args):
    inp = _Inputs(args)
    rep = curvature.holonomy_span(inp.a, inp.S)
    def text():
        for k, v in rep.items():
            print(f"{k}: {v}")
    _emit(args, {"command": "holonomy", "report": rep}, text)
    return 0


def cmd_moment(args):
    inp = _Inputs(args)
    b = moment.q_map(inp.a, inp.S)
    c1, c2 = moment.contractions(inp.a, b)
    mu, pair = moment.moment_map(inp.a, b)
    s = moment.scalar_functional(inp.a, inp.S)
    payload = {"command": "moment", "q": b.to_json(),
               "c1": _fmt_matrix(c1), "c2": _fmt_matrix(c2),
               "mu": _fmt_matrix(mu), "pairing": format_scalar(pair),
               "s": format_scalar(s)}
    def text():
        print("c1:")
        _print_matrix(c1)
        print("c2:")
        _print_matrix(c2)
        print("mu = c1 - 2 c2:")
        _print_matrix(mu)
        print(f"<a, q(a,S)> = {format_scalar(pair)}")
        print(f"s = {format_scalar(s)}")
    _emit(args, payload, text)
    return 0


def cmd_scalar(args):
    inp = _Inputs(args)
    s = moment.scalar_functional(inp.a, inp.S)
    _emit(args, {"command": "scalar", "s": format_scalar(s)},
          lambda: print(f"s = {format_scalar(s)}"))
    return 0


def _parse_direction(text, n, exact):
    text = _read_arg(text)
    if text == "identity":
        return linalg.eye(n, exact)
    data = json.loads(text)
    X = linalg.zeros((n, n), exact)
    if len(data) != n or any(len(row) != n for row in data):
        raise LieCurvError(f"direction matrix is not {n}x{n}")
    for i, row in enumerate(data):
        for j, x in enumerate(row):
            X[i, j] = parse_scalar(str(x), exact)
    return X


def cmd_gauge_derivative(args):
    inp = _Inputs(args)
    X = _parse_direction(args.direction, inp.a.n, inp.exact)
    val = moment.gauge_derivative(inp.a, inp.S, X)
    _emit(args, {"command": "gauge-derivative", "value": format_scalar(val)},
          lambda: print(f"X+s = {format_scalar(val)}"))
    return 0


def cmd_critical(args):
    inp = _Inputs(args)
    rep = moment.jacobi_tangent_critical(inp.a, inp.S)
    def text():
        for k, v in rep.items():
            print(f"{k}: {v}")
    _emit(args, {"command": "critical", "report": rep}, text)
    return 0


def cmd_derivations(args):
    inp = _Inputs(args, need_metric=False)
    der = derivations.derivation_space(inp.a)
    payload = {"command": "derivations", "dim": der.dim,
               "has_nonzero_trace": der.has_nonzero_trace,
               "witness": None if der.trace_witness is None
               else _fmt_matrix(der.trace_witness)}
    def text():
        print(f"dim Der = {der.dim}")
        if der.trace_witness is None:
            print("all derivations are traceless")
        else:
            print(f"derivation with trace "
                  f"{format_scalar(np.trace(der.trace_witness))}:")
            _print_matrix(der.trace_witness)
    _emit(args, payload, text)
    return 0


def cmd_nice(args):
    inp = _Inputs(args, need_metric=False)
    rep = nice.nice_basis_check(inp.a)
    def text():
        print(f"nice basis: {rep.is_nice}")
        for v in rep.violations:
            print(f"  {v[-1]}")
    _emit(args, {"command": "nice", "report": rep.to_json()}, text)
    return 0


def _parse_patterns(text, n):
    if text == "all":
        return [None]
    pats = []
    for chunk in text.split(";"):
        signs = [s.strip() for s in chunk.split(",")]
        if len(signs) != n or any(s not in ("+", "-", "+1", "-1", "1") for s in signs):
            raise LieCurvError(
                f"pattern {chunk!r} must be {n} comma-separated signs")
        pats.append(tuple(-1 if s.startswith("-") else 1 for s in signs))
    return pats


def cmd_einstein_search(args):
    inp = _Inputs(args, need_metric=False)
    results = []
    for pattern in _parse_patterns(args.patterns, inp.a.n):
        results.extend(nice.diagonal_einstein_search(
            inp.a, sign_pattern=pattern, seed=args.seed,
            restarts=args.restarts))
    payload = {"command": "einstein-search", "seed": args.seed,
               "results": [r.to_json() for r in results]}
    def text():
        if not results:
            print("no diagonal Einstein metric found under the search budget")
        for r in results:
            print(f"diag({', '.join(format_scalar(x) for x in r.diag)})"
                  f"  lambda = {format_scalar(r.lam)}"
                  f"  s = {format_scalar(r.scalar)}"
                  f"  {'exact' if r.exact else 'float'}")
    _emit(args, payload, text)
    return 0


def cmd_catalog(args):
    if args.action != "verify":
        raise LieCurvError(f"unknown catalog action {args.action!r}")
    entries = catalog_mod.load_catalog(args.path)
    reports = catalog_mod.verify_catalog(entries, jobs=args.jobs,
                                         name_filter=args.filter)
    ok = all(r.passed for r in reports)
    payload = {"command": "catalog", "passed": ok,
               "reports": [r.to_json() for r in reports]}
    def text():
        for r in reports:
            status = "ok" if r.passed else "FAIL"
            print(f"[{status}] {r.name}")
            if not r.passed:
                for c in r.checks:
                    if not c.passed:
                        print(f"    {c.claim}: expected {c.expected}, "
                              f"got {c.computed}")
        print(f"{sum(r.passed for r in reports)}/{len(reports)} entries pass")
    _emit(args, payload, text)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps subcommand defaults from clobbering values parsed from
    # the shared options when they appear before the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=("exact", "float"),
                        default=argparse.SUPPRESS,
                        help="scalar backend (default: exact, or $RICCI_BACKEND)")
    common.add_argument("--tolerance", type=float, default=argparse.SUPPRESS)
    common.add_argument("--output", choices=("text", "json"),
                        default=argparse.SUPPRESS)
    parser = argparse.ArgumentParser(
        prog="liecurv", parents=[common],
        description="curvature of left-invariant pseudoriemannian metrics "
                    "on Lie groups")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, metric=False, structure=True):
        p = sub.add_parser(name, parents=[common])
        if structure:
            p.add_argument("--structure", required=True,
                           help="structure literal or file")
        if metric:
            p.add_argument("--metric", required=metric == "required",
                           help="metric literal or file")
        p.set_defaults(fn=fn)
        return p

    add("classify", cmd_classify)
    add("ricci", cmd_ricci, metric="required")
    add("bforms", cmd_bforms, metric="required")
    add("einstein", cmd_einstein, metric="required")
    add("mn", cmd_mn, metric="required")
    add("holonomy", cmd_holonomy, metric="required")
    add("moment", cmd_moment, metric="required")
    add("scalar", cmd_scalar, metric="required")
    p = add("gauge-derivative", cmd_gauge_derivative, metric="required")
    p.add_argument("--direction", required=True,
                   help='gl(n) direction: JSON matrix, file, or "identity"')
    add("critical", cmd_critical, metric="required")
    add("derivations", cmd_derivations)
    add("nice", cmd_nice)
    p = add("einstein-search", cmd_einstein_search)
    p.add_argument("--patterns", default="all",
                   help='"all" or semicolon-separated sign lists like "+,+,-"')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--restarts", type=int, default=200)
    p = sub.add_parser("catalog", parents=[common])
    p.add_argument("action", choices=("verify",))
    p.add_argument("--path", default=None, help="catalog file (default: shipped)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--filter", default=None, help="substring filter on names")
    p.set_defaults(fn=cmd_catalog)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    for name, default in (("backend", None), ("tolerance", DEFAULT_TOL),
                          ("output", "text")):
        if not hasattr(args, name):
            setattr(args, name, default)
    try:
        return args.fn(args)
    except (LieCurvError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

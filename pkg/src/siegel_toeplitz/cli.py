"""Command-line front end: ``sample``, ``verify``, ``eigencurves``, ``separate``.

Exit codes: 0 success, 1 evaluation or check failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from .algebra import eigencurves, fiber_vector_test, separation_exponent
from .errors import DomainError, UnsupportedClassError
from .sampling import BOUNDARY_CASES, CASES, DEFAULT_T1, GridSpec, parse_grid, sample
from .specfun import N_MAX, SMAX_DEFAULT
from .spectral import TOL_DEFAULT
from .verify import SUITES, run_suite

log = logging.getLogger("siegel_toeplitz")


class UsageError(Exception):
    pass


def fmt_float(x):
    """``repr`` for finite values, ``-inf``/``+inf`` otherwise (lossless round trip)."""
    x = float(x)
    if math.isinf(x):
        return "+inf" if x > 0 else "-inf"
    return repr(x)


# ---------------------------------------------------------------------------
# writers
# ---------------------------------------------------------------------------

def _coords(case, s):
    t1 = None if case == "b-1n" else s.point.t1
    if case == "b-1n" and s.provenance == "boundary-formula":
        t2 = 0.0 if s.point.kind == "bottom" else math.inf
    else:
        t2 = s.point.t2
    return t1, t2


def _kind(case, s):
    if case == "b-1n":
        return "interior" if s.provenance == "quadrature" else s.point.kind
    return s.point.kind


def samples_to_csv(case, samples):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "t1", "t2", "j", "k", "value"])
    for s in samples:
        t1, t2 = _coords(case, s)
        kind = _kind(case, s)
        c1 = "" if t1 is None else fmt_float(t1)
        c2 = fmt_float(t2)
        for j in range(s.n):
            for k in range(s.n):
                w.writerow([kind, c1, c2, j + 1, k + 1, fmt_float(s.entries[j, k])])
    return buf.getvalue()


def samples_to_json(case, n, symbol, grid, samples):
    out = {"case": case, "n": n, "symbol": symbol,
           "grid": {"spec": grid.describe(), "include_boundary": grid.include_boundary},
           "samples": []}
    for s in samples:
        t1, t2 = _coords(case, s)
        out["samples"].append({
            "point": {"kind": _kind(case, s),
                      "t1": None if t1 is None else (fmt_float(t1) if math.isinf(t1) else t1),
                      "t2": fmt_float(t2) if math.isinf(t2) else t2},
            "matrix": s.entries.tolist(),
        })
    return json.dumps(out, indent=1) + "\n"


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_sample(args):
    if args.case != "phi-plus" and not args.symbol:
        raise UsageError(f"--symbol is required for case {args.case}")
    include = args.include_boundary
    if include and args.case not in BOUNDARY_CASES:
        raise UsageError(f"--include-boundary is not available for case {args.case}")
    if include is None:
        include = args.grid is None and args.case in BOUNDARY_CASES
    try:
        grid = parse_grid(args.grid, include) if args.grid else GridSpec(include_boundary=include)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    try:
        samples = sample(args.case, args.symbol or "", args.n, grid, args.tol, args.smax)
    except (DomainError, UnsupportedClassError) as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        _emit(samples_to_json(args.case, args.n, args.symbol, grid, samples), args.out)
    else:
        _emit(samples_to_csv(args.case, samples), args.out)
    if args.plot:
        from .plotting import plot_samples

        plot_samples(args.case, samples, args.plot)
    return 0


def cmd_verify(args):
    overrides = {}
    for item in args.override or []:
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"override must be name=value, got {item!r}")
        try:
            overrides[name] = float(value)
        except ValueError:
            raise UsageError(f"bad override value {value!r}") from None
    report = run_suite(args.suite, overrides, nodes=args.nodes, smax=args.smax)
    if args.format == "json":
        _emit(json.dumps(report.to_dict(), indent=1) + "\n", args.out)
    else:
        _emit(report.to_text() + "\n", args.out)
    return 0 if report.passed else 1


def cmd_eigencurves(args):
    try:
        lo, hi, count = parse_grid(args.grid).t1 if args.grid else DEFAULT_T1
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if count < 2 or not lo < hi:
        raise UsageError("eigencurves needs min < max and count >= 2")
    grid = np.concatenate([[-math.inf], np.linspace(lo, hi, count), [math.inf]])
    table = eigencurves(args.n, grid)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "j", "lambda"])
    for k, t in enumerate(grid):
        for j in range(args.n):
            w.writerow([fmt_float(t), j + 1, fmt_float(table.lambdas[j, k])])
    _emit(buf.getvalue(), args.out)
    if args.out not in (None, "-"):
        out = Path(args.out)
        bpath = out.with_name(f"{out.stem}_B.csv")
        with bpath.open("w", newline="") as fh:
            bw = csv.writer(fh, lineterminator="\n")
            bw.writerow(["t", "i", "j", "value"])
            for k, t in enumerate(grid):
                for i in range(args.n):
                    for j in range(args.n):
                        bw.writerow([fmt_float(t), i + 1, j + 1,
                                     fmt_float(table.diagonalizers[k][i, j])])
    log.info("continuity defect %.3g", table.continuity_defect)
    if args.plot:
        from .plotting import plot_eigencurves

        plot_eigencurves(table, args.plot)
    return 0


def _pair(text, name):
    try:
        a, b = (float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"{name} must be two comma-separated numbers") from None
    return a, b


def _vector(text, name):
    try:
        v = np.array([complex(x.strip().replace(" ", "")) for x in text.split(",")])
    except ValueError:
        raise UsageError(f"cannot parse vector {name}={text!r}") from None
    norm = np.linalg.norm(v)
    if norm == 0:
        raise UsageError(f"vector {name} is zero")
    return v / norm


def cmd_separate(args):
    p = _pair(args.p, "--p")
    q = _pair(args.q, "--q")
    if (args.v is None) != (args.w is None):
        raise UsageError("--v and --w go together")
    vectors = None
    if args.v is not None:
        v, w = _vector(args.v, "v"), _vector(args.w, "w")
        if len(v) != len(w):
            raise UsageError("--v and --w must have the same length")
        if args.n is not None and args.n != len(v):
            raise UsageError("--n does not match the vector length")
        vectors = v, w
    r_grid = None
    if args.r_grid:
        try:
            lo, hi, count = args.r_grid.split(":")
            r_grid = np.linspace(float(lo), float(hi), int(count))
        except ValueError:
            raise UsageError("--r-grid must be min:max:count") from None
    try:
        res = separation_exponent(p, q)
    except DomainError as exc:
        raise UsageError(str(exc)) from None

    verdict = "separable" if res.separable else "not separable"
    print(f"{verdict}, c2={res.c2:g}, c1={res.c1:g}, c0={res.c0:g}")
    if vectors is not None:
        same = fiber_vector_test(len(vectors[0]), *vectors, p[0], p[1], r_grid)
        print("states coincide" if same else "states differ")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _n(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid n {text!r}") from None
    if not 1 <= n <= N_MAX:
        raise argparse.ArgumentTypeError(f"n must be in 1..{N_MAX}")
    return n


def build_parser():
    parser = argparse.ArgumentParser(
        prog="siegel-toeplitz",
        description="Spectral matrix functions of Toeplitz operators with nilpotent symbols.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--out", default="-", help="output path (default stdout)")
    shared.add_argument("--nodes", type=int, default=200,
                        help="node count of fixed Gauss rules used by verify")
    shared.add_argument("--smax", type=float, default=SMAX_DEFAULT,
                        help="Hermite truncation half-width (default 8)")
    shared.add_argument("--tol", type=float, default=TOL_DEFAULT,
                        help="absolute quadrature tolerance")

    sp = sub.add_parser("sample", parents=[shared], help="sample a spectral function on a grid")
    sp.add_argument("--case", required=True, choices=CASES)
    sp.add_argument("--symbol", help="symbol in the mini-language, e.g. sigmoid or b:inv1p")
    sp.add_argument("--n", type=_n, default=1)
    sp.add_argument("--grid", help="t1=min:max:count[,t2=min:max:count[:log]]")
    sp.add_argument("--include-boundary", action=argparse.BooleanOptionalAction, default=None,
                    help="add the boundary strata (default: on for the default grid where supported)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--plot", help="also write a figure to this path")
    sp.set_defaults(func=cmd_sample)

    vp = sub.add_parser("verify", parents=[shared], help="run self-check suites")
    vp.add_argument("--suite", choices=SUITES + ("all",), default="all")
    vp.add_argument("--format", choices=("text", "json"), default="text")
    vp.add_argument("--override", action="append", metavar="CHECK=TOL",
                    help="replace the tolerance of one check")
    vp.set_defaults(func=cmd_verify)

    ep = sub.add_parser("eigencurves", parents=[shared], help="eigenvalue curves of phi+")
    ep.add_argument("--n", type=_n, default=2)
    ep.add_argument("--grid", help="t1=min:max:count (the +-inf columns are always added)")
    ep.add_argument("--plot", help="also write a figure to this path")
    ep.set_defaults(func=cmd_eigencurves)

    xp = sub.add_parser("separate", help="separation experiments for interior states")
    xp.add_argument("--p", required=True, help="first point x1,x2")
    xp.add_argument("--q", required=True, help="second point t1,t2")
    xp.add_argument("--v", help="state vector at --p, comma separated (complex allowed)")
    xp.add_argument("--w", help="second state vector at --p")
    xp.add_argument("--n", type=_n, help="expected vector length")
    xp.add_argument("--r-grid", help="min:max:count grid for the fiber test")
    xp.set_defaults(func=cmd_separate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # evaluation failure
        print(f"evaluation failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

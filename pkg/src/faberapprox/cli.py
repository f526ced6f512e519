"""faberapprox command-line driver."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import budget as bud
from .codec import ManifoldCode, encode
from .corpus import FunctionSpec, make_function
from .suites import SUITES, SuiteConfig, default_plan, run_suite, to_csv, to_jsonl


def _cmd_encode(args) -> int:
    spec = FunctionSpec.parse(args.function, d=args.dim, alpha=args.alpha)
    if spec.d != args.dim:
        raise SystemExit(f"function dimension {spec.d} does not match --dim {args.dim}")
    f = make_function(spec)
    code = encode(f, args.m, args.n, args.alpha, args.dim)
    Path(args.out).write_text(code.to_text())
    print(f"wrote {args.out}: {code.parameter_count()} parameters, "
          f"bound {bud.lemma_budget_bound(args.m, args.n, args.dim)}")
    return 0


def _cmd_decode(args) -> int:
    code = ManifoldCode.from_text(Path(args.code).read_text())
    pts = np.loadtxt(args.points, delimiter=",", ndmin=2)
    vals = code(pts)
    lines = "".join(repr(float(v)) + "\n" for v in vals)
    if args.out == "-":
        sys.stdout.write(lines)
    else:
        Path(args.out).write_text(lines)
    return 0


def _cmd_params(args) -> int:
    sel = bud.select_params(args.N, args.dim)
    print(f"N={sel.N} d={sel.d}")
    if not sel.feasible:
        print(f"infeasible: {sel.reason}")
        return 1
    print(f"m={sel.m} n={sel.n} m*={sel.m_star}")
    print(f"threshold N(d)={bud.threshold_N(args.dim)} {'reached' if sel.above_threshold else 'not reached'}")
    print(f"theorem regime n >= m >= d+1: {'yes' if sel.in_regime else 'no'}")
    b = bud.budget(sel.m, sel.n, args.dim)
    print(f"N_mn={b.N_mn_bound} closed-form bound={b.lemma_bound}")
    print(f"pipeline error bound (alpha={args.alpha!r})={bud.pipeline_error_bound(args.alpha, args.dim, sel.m, sel.n)!r}")
    return 0


def _emit(reports, out: str | None, fmt: str) -> int:
    text = to_csv(reports) if fmt == "csv" else to_jsonl(reports)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    bad = [r for r in reports if r.violation]
    for r in bad:
        print(f"VIOLATION {r.suite}/{r.check}: {r.measured_error!r} > {r.bound!r} ({r.spec})", file=sys.stderr)
    return 1 if bad else 0


def _cmd_verify(args) -> int:
    cfg = SuiteConfig(
        dim=args.dim,
        alpha=args.alpha,
        m=args.m,
        n=args.n,
        seed=args.seed,
        grid_level=args.grid_level,
        random_points=args.random_points,
        functions=args.functions,
        N=args.N,
        timing=args.timing,
    )
    return _emit(run_suite(args.suite, cfg), args.out, args.format)


def _cmd_report(args) -> int:
    reports = []
    for name, cfg in default_plan():
        if args.timing:
            cfg = SuiteConfig(**{**cfg.__dict__, "timing": True})
        reports.extend(run_suite(name, cfg))
    status = _emit(reports, args.out, "csv")
    Path(args.out).with_suffix(".jsonl").write_text(to_jsonl(reports))
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="faberapprox", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("encode", help="encode a corpus function into a manifold code file")
    e.add_argument("--dim", type=int, required=True)
    e.add_argument("--alpha", type=float, required=True)
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--function", required=True, help="JSON FunctionSpec or family[:key=value,...]")
    e.add_argument("--out", required=True)
    e.set_defaults(func=_cmd_encode)

    d = sub.add_parser("decode", help="evaluate a code at CSV points")
    d.add_argument("--code", required=True)
    d.add_argument("--points", required=True, help="CSV, one row of d coordinates per point")
    d.add_argument("--out", default="-")
    d.set_defaults(func=_cmd_decode)

    q = sub.add_parser("params", help="select (m, n) for a parameter budget N")
    q.add_argument("--N", type=int, required=True)
    q.add_argument("--dim", type=int, required=True)
    q.add_argument("--alpha", type=float, default=1.0)
    q.set_defaults(func=_cmd_params)

    v = sub.add_parser("verify", help="run one bound-verification suite")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--dim", type=int, default=2)
    v.add_argument("--alpha", type=float, default=1.0)
    v.add_argument("--m", type=int, default=2)
    v.add_argument("--n", type=int, default=3)
    v.add_argument("--N", type=int, default=10**6)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--grid-level", type=int, default=None)
    v.add_argument("--random-points", type=int, default=1000)
    v.add_argument("--functions", type=int, default=3)
    v.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    v.add_argument("--timing", action="store_true", help="record runtime_ms (breaks byte-identical output)")
    v.add_argument("--out", default=None)
    v.set_defaults(func=_cmd_verify)

    r = sub.add_parser("report", help="run the default plan of every suite")
    r.add_argument("--out", required=True, help="CSV path; a .jsonl twin is written alongside")
    r.add_argument("--timing", action="store_true")
    r.set_defaults(func=_cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

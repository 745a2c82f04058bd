"""Command-line entry point: ``kerneldyn analyze|simulate|demo|verify``."""

import argparse
import os
import sys

from .errors import KernelDynError, SpecError
from .report import (
    RefusedError,
    analyze,
    demo_counterexample,
    dumps,
    load_spec,
    simulate,
    verify,
    write_atomic,
)
from .seqdsl import parse_sequence_arg


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        write_atomic(out, text)


def _periodic_path(out):
    root, ext = os.path.splitext(out)
    return f"{root}.periodic{ext or '.csv'}"


def cmd_analyze(args):
    spec = load_spec(args.spec)
    report = analyze(spec, order=args.order)
    _emit(dumps(report), args.out)
    return 0


def cmd_simulate(args):
    spec = load_spec(args.spec)
    periods = [int(p) for p in args.periods.split(",") if p.strip()] if args.periods else []
    sim = simulate(spec, args.vector, args.steps, periods, order=args.order)
    _emit(sim.orbit_csv, args.out)
    if sim.periodic_csv is not None:
        if args.out is None or args.out == "-":
            sys.stdout.write("\n" + sim.periodic_csv)
        else:
            write_atomic(_periodic_path(args.out), sim.periodic_csv)
    return 0


def cmd_demo(args):
    beta = parse_sequence_arg(args.beta)
    _emit(dumps(demo_counterexample(beta, args.order)), args.out)
    return 0


def cmd_verify(args):
    checks = verify(args.suite)
    failed = 0
    for c in checks:
        mark = "PASS" if c.passed else "FAIL"
        failed += not c.passed
        line = f"{mark}  [{c.suite}] {c.name}"
        print(line + (f"  ({c.detail})" if c.detail else ""))
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 1 if failed else 0


def build_parser():
    ap = argparse.ArgumentParser(prog="kerneldyn", description="Dynamics of the adjoint shift on analytic kernel spaces.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="run all applicable criteria on a kernel spec")
    a.add_argument("--spec", required=True)
    a.add_argument("--order", type=int, default=None, help="truncation order (default: spec order, else 256)")
    a.add_argument("--out", default=None, help="report path (default: stdout)")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("simulate", help="orbit trace and periodic points")
    s.add_argument("--spec", required=True)
    s.add_argument("--vector", required=True, help="basis index (e.g. 5) or coordinates (e.g. 1,0.5,2-1j)")
    s.add_argument("--steps", type=int, default=16)
    s.add_argument("--periods", default="", help="comma-separated periods, e.g. 1,2,4,8,16")
    s.add_argument("--order", type=int, default=None, help="truncation order (default: spec order, else 64)")
    s.add_argument("--out", default=None, help="orbit CSV path; the periodic table goes next to it")
    s.set_defaults(func=cmd_simulate)

    d = sub.add_parser("demo", help="worked demonstrations")
    dsub = d.add_subparsers(dest="demo", required=True)
    ce = dsub.add_parser("counterexample", help="hypercyclic operator whose diagonal stays away from zero")
    ce.add_argument("--beta", default="power(-1)", help="named family or expression in n")
    ce.add_argument("--order", type=int, default=256)
    ce.add_argument("--out", default=None)
    ce.set_defaults(func=cmd_demo)

    v = sub.add_parser("verify", help="run the built-in verification suites")
    v.add_argument("--suite", default="all",
                   choices=["structural", "oracles", "criteria-consistency", "dynamics", "all"])
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"kerneldyn: spec error: {exc}", file=sys.stderr)
        return 2
    except RefusedError as exc:
        print(f"kerneldyn: refused: {exc}", file=sys.stderr)
        return 3
    except KernelDynError as exc:
        print(f"kerneldyn: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface: ``tcq solve | classify | reproduce | proptest``."""
import argparse
import secrets
import sys

import numpy as np

from . import campaign, reproduce
from .classify import classify
from .config import get_tolerances
from .decomp import DependentGenerators
from .io import TensorParseError, dumps, load_tensor, parse_vector
from .tcp_solver import UnsupportedDimension, solve_tcp_n2
from .tensor_core import DimensionMismatch, SymOuterDecomp

EXIT_SOLVED, EXIT_NO_SOLUTION, EXIT_INCONCLUSIVE = 0, 1, 2
EXIT_PARSE, EXIT_UNSUPPORTED = 64, 65


def _load(path):
    A = load_tensor(path)
    if A.dim > 2:
        raise UnsupportedDimension(f"dimension {A.dim} is not supported (need n <= 2)")
    return A


def cmd_solve(args):
    A = _load(args.input)
    q = parse_vector(args.q)
    if q.shape[0] != A.dim:
        raise DimensionMismatch(f"q has length {q.shape[0]}, tensor dimension is {A.dim}")
    if A.dim == 1:
        raise UnsupportedDimension("the solver handles dimension two")
    out = solve_tcp_n2(A, q)
    print(dumps(out.to_json()))
    if out.has_solution:
        return EXIT_SOLVED
    return EXIT_NO_SOLUTION if out.exhaustive else EXIT_INCONCLUSIVE


def cmd_classify(args):
    A = _load(args.input)
    rep = classify(A)
    doc = rep.to_json()
    doc["input"] = {"kind": "decomp" if isinstance(A, SymOuterDecomp) else "dense"}
    print(dumps(doc))
    return 0


def cmd_reproduce(args):
    if args.only is not None and args.only not in reproduce.ROWS:
        print(f"unknown row {args.only!r}; choose from: {', '.join(reproduce.ROWS)}",
              file=sys.stderr)
        return EXIT_PARSE
    rows = reproduce.run(args.only)
    if args.json:
        print(dumps({"rows": [r.to_json() for r in rows],
                     "passed": sum(r.passed for r in rows), "total": len(rows)}))
    else:
        print(reproduce.format_table(rows))
    return 0 if all(r.passed for r in rows) else 1


def cmd_proptest(args):
    seed = args.seed
    if seed is None:
        seed = secrets.randbits(63)
        print(f"seed {seed}", file=sys.stderr)
    names = args.property or list(campaign.PROPERTIES)
    summary, failures = {}, []
    for name in names:
        bad = campaign.run_property(name, seed, args.cases)
        summary[name] = {"cases": args.cases, "failures": len(bad)}
        failures.extend(bad)
    for f in failures:
        print(dumps({"reproducer": {"seed": seed, "property": f.prop, "case": f.case,
                                    "instance": f.instance}, "message": f.message}),
              file=sys.stderr)
    print(dumps({"seed": seed, "properties": summary, "failures": len(failures)}))
    return 0 if not failures else 1


def build_parser():
    p = argparse.ArgumentParser(prog="tcq", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve TCP(A, q) for a dimension-two tensor")
    s.add_argument("-i", "--input", required=True, help="tensor JSON document")
    s.add_argument("-q", required=True, help='q as a JSON list, e.g. "[-1,3]"')
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("classify", help="positive / nonnegative / S / R0 / Q verdicts")
    c.add_argument("-i", "--input", required=True)
    c.set_defaults(func=cmd_classify)

    r = sub.add_parser("reproduce", help="run the fixed reproduction suite")
    r.add_argument("--only", metavar="NAME")
    r.add_argument("--json", action="store_true")
    r.set_defaults(func=cmd_reproduce)

    t = sub.add_parser("proptest", help="randomized property campaigns")
    t.add_argument("--seed", type=int)
    t.add_argument("--cases", type=int, default=500)
    t.add_argument("--property", action="append", choices=list(campaign.PROPERTIES))
    t.set_defaults(func=cmd_proptest)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else 0
    np.seterr(all="ignore")
    try:
        get_tolerances()
        if getattr(args, "cases", 0) < 0:
            raise TensorParseError("--cases must be nonnegative")
        return args.func(args)
    except (UnsupportedDimension, DependentGenerators) as exc:
        print(f"tcq: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (TensorParseError, DimensionMismatch, OSError, ValueError) as exc:
        print(f"tcq: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

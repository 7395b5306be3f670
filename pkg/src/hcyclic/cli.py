"""
Command-line interface.

    hcyclic analyze MATRIX [--json OUT]
    hcyclic components MATRIX
    hcyclic perron MATRIX
    hcyclic rotate MATRIX CHAIN -k K
    hcyclic selftest [--seed S] [--sizes N]

Exit codes: 0 ok, 2 parse/usage error, 3 reducible (or primitive without
``--allow-primitive``), 4 decomposition failure, 5 verification failure.
"""

import argparse
import json
import sys
import warnings

import numpy as np

from . import __version__
from .analysis import (
    EXIT_DECOMPOSITION, EXIT_OK, EXIT_PARSE, EXIT_REDUCIBLE, EXIT_VERIFICATION,
    Tolerances, analyze,
)
from .chain_rotation import JordanChain, rotate_chain, verify_chain
from .graph_structure import (
    AperiodicUndefinedError, NotStronglyConnectedError, detect_cyclic_structure,
)
from .matrix_core import inf_norm
from .matrix_io import MatrixParseError, chain_to_json, read_chain, read_matrix
from .selftest import DEFAULT_COUNTS, SUITES, run_selftest


def _common(p, defaults=True):
    """Global flags.  Subcommands repeat them with suppressed defaults, so a
    flag given before the subcommand is not overwritten."""
    def d(value):
        return value if defaults else argparse.SUPPRESS

    p.add_argument("--format", choices=["auto", "matrix-market", "json"], default=d("auto"),
                   help="input matrix format (default: by extension)")
    p.add_argument("--json", metavar="PATH", dest="json_out", default=d(None),
                   help="also write the report as JSON")
    p.add_argument("--zero-tol", type=float, default=d(None),
                   help="pattern threshold (default 0 for integer input, else 1e-12*max|a|)")
    p.add_argument("--chain-tol", type=float, default=d(1e-9), help="relative chain/check tolerance")
    p.add_argument("--orbit-tol", type=float, default=d(1e-8), help="relative orbit pairing tolerance")
    p.add_argument("--allow-primitive", action="store_true", default=d(False),
                   help="report h = 1 informationally instead of failing")
    p.add_argument("--seed", type=int, default=d(0), help="random seed (selftest)")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    _common(common, defaults=False)
    parser = argparse.ArgumentParser(prog="hcyclic", description=__doc__.split("\n\n")[0])
    _common(parser)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in [("analyze", "full structural and spectral analysis"),
                        ("components", "component matrices A_lam and their checks"),
                        ("perron", "Perron-Frobenius checks for nonnegative input")]:
        p = sub.add_parser(name, help=help_, parents=[common])
        p.add_argument("matrix")

    p = sub.add_parser("rotate", help="rotate a Jordan chain to lam*w^k", parents=[common])
    p.add_argument("matrix")
    p.add_argument("chain", help="chain JSON: {side, eigenvalue: [re, im], vectors: [[[re, im], ...], ...]}")
    p.add_argument("-k", type=int, required=True)

    p = sub.add_parser("selftest", help="randomized property suites", parents=[common])
    p.add_argument("--sizes", type=int, default=24, help="largest matrix dimension (default 24)")
    p.add_argument("--suite", action="append", choices=SUITES, help="run only these suites")
    p.add_argument("--count", type=int, default=None, help="instances per suite (default: suite-specific)")
    return parser


def _tolerances(args):
    return Tolerances(zero_tol=args.zero_tol, chain_tol=args.chain_tol, orbit_tol=args.orbit_tol)


def _read(args, path):
    fmt = None if args.format == "auto" else args.format
    return read_matrix(path, fmt)


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=1)
        fh.write("\n")


def _cmd_report(args, out):
    A = _read(args, args.matrix)
    rep = analyze(A, args.matrix, _tolerances(args), allow_primitive=args.allow_primitive,
                  perron=args.command != "components")
    if args.command == "components":
        rep.perron = None
    if args.command == "perron":
        if rep.perron is None:
            if rep.exit_code == EXIT_OK:
                rep.error = "matrix is not nonnegative irreducible"
                rep.exit_code = EXIT_REDUCIBLE
        else:
            rep.components = []
            rep.orbits = []
            rep.checks = [c for c in rep.checks if c.name.startswith(("perron", "peripheral", "spectrum", "rho"))]
            rep.exit_code = EXIT_OK if all(c.passed for c in rep.checks) else EXIT_VERIFICATION
            rep.error = None
    print(rep.render_text(), file=out)
    if args.json_out:
        _write_json(args.json_out, rep.to_dict())
    return rep.exit_code


def _cmd_rotate(args, out):
    A = _read(args, args.matrix)
    chain = read_chain(args.chain)
    if chain.dim != A.shape[0]:
        raise MatrixParseError(f"chain dimension {chain.dim} does not match matrix size {A.shape[0]}",
                               path=args.chain)
    try:
        S = detect_cyclic_structure(A, args.zero_tol)
    except (NotStronglyConnectedError, AperiodicUndefinedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REDUCIBLE
    if S.h < 2:
        print("error: primitive matrix: no cyclic structure with h >= 2", file=sys.stderr)
        return EXIT_REDUCIBLE
    if not 0 <= args.k < S.h:
        print(f"error: k must lie in 0..{S.h - 1}", file=sys.stderr)
        return EXIT_PARSE

    def tol_for(c):
        return args.chain_tol * max(1.0, inf_norm(A)) * max(1.0, max(inf_norm(v) for v in c.vectors))

    before = verify_chain(A, chain, tol_for(chain))
    if not before.passed:
        print(f"error: input chain fails verification (residual {before.max_residual:.3e} "
              f"> {before.tol:.3e})", file=sys.stderr)
        return EXIT_VERIFICATION
    perm = S.consecutive_permutation
    P = S.consecutive_partition()
    inv = np.argsort(perm)
    if args.k == 0:
        rotated = chain
    else:
        permuted = JordanChain(chain.side, chain.eigenvalue, [v[perm] for v in chain.vectors])
        r = rotate_chain(permuted, args.k, P)
        rotated = JordanChain(r.side, r.eigenvalue, [v[inv] for v in r.vectors])
    after = verify_chain(A, rotated, tol_for(rotated))
    obj = chain_to_json(rotated)
    obj.update({"k": args.k, "h": S.h, "residuals": after.residuals, "tol": after.tol,
                "passed": after.passed})
    print(json.dumps(obj), file=out)
    if args.json_out:
        _write_json(args.json_out, obj)
    return EXIT_OK if after.passed else EXIT_VERIFICATION


def _cmd_selftest(args, out):
    counts = dict(DEFAULT_COUNTS)
    if args.count is not None:
        counts = {k: args.count for k in counts}
    res = run_selftest(args.seed, args.sizes, counts, tuple(args.suite or SUITES))
    print(res.render(), file=out)
    if args.json_out:
        _write_json(args.json_out, {
            "schema": 1, "seed": res.seed, "passed": res.passed,
            "suites": [{"name": s.name, "passed": s.passed, "failed": s.failed,
                        "worst": s.worst, "seconds": s.seconds, "failures": s.failures}
                       for s in res.suites],
        })
    return EXIT_OK if res.passed else EXIT_VERIFICATION


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"analyze": _cmd_report, "components": _cmd_report, "perron": _cmd_report,
                "rotate": _cmd_rotate, "selftest": _cmd_selftest}
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return handlers[args.command](args, out)
    except MatrixParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (OSError, UnicodeDecodeError) as exc:
        print(f"error reading input: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()

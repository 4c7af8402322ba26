"""Command-line entry point: ``extlag {eigs,source,recover,study}``.

Examples
--------
::

    extlag eigs --domain cube --order 1 --levels 2
    extlag study --domain square --order 2 --levels 4..64 --format json --out square.json
    extlag source --order 1 --levels 2..6
    extlag recover --domain thick-lshape --levels 3..6 --count 3
"""
import argparse
import logging
import sys
import warnings

import numpy as np

from . import harness
from .exceptions import ExtLagError
from .mesh import normalize_domain

DOMAIN_CHOICES = ("square", "lshape2d", "cube", "thick-lshape", "tetra")
TWO_D = ("square", "lshape2d")


def parse_levels(text, domain):
    """Expand ``a..b`` or ``a,b,c`` into a list of mesh levels.

    On 2D domains ``a..b`` doubles from ``a`` up to ``b`` (``4..64`` gives
    4, 8, 16, 32, 64); elsewhere it is every integer from ``a`` to ``b``.
    """
    if text is None:
        return None
    text = text.strip()
    if ".." in text:
        a, b = (int(t) for t in text.split("..", 1))
        if a < 1 or b < a:
            raise argparse.ArgumentTypeError(f"bad level range {text!r}")
        if normalize_domain(domain) in TWO_D:
            out = []
            n = a
            while n <= b:
                out.append(n)
                n *= 2
            return out
        return list(range(a, b + 1))
    levels = [int(t) for t in text.split(",") if t]
    if not levels or min(levels) < 1:
        raise argparse.ArgumentTypeError(f"bad level list {text!r}")
    return levels


def build_parser():
    parser = argparse.ArgumentParser(prog="extlag", description="Extended Lagrange element Maxwell solver.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, domain=True, order=True):
        if domain:
            p.add_argument("--domain", choices=DOMAIN_CHOICES, default="square")
        if order:
            p.add_argument("--order", type=int, choices=(1, 2), default=1)
        p.add_argument("--levels", default=None,
                       help="'a..b' (doubling in 2D, consecutive in 3D) or a comma list")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--deterministic", action="store_true",
                       help="drop timing metadata so reruns are byte-identical")
        p.add_argument("-v", "--verbose", action="store_true")

    def eig_opts(p):
        p.add_argument("--count", type=int, default=8)
        p.add_argument("--shift", type=float, default=None)
        p.add_argument("--filter-tol", type=float, default=None)
        p.add_argument("--backend", choices=("dense", "shift-invert"), default="shift-invert")

    p = sub.add_parser("eigs", help="eigenvalues on one or more levels (default: coarsest level)")
    common(p)
    eig_opts(p)
    p = sub.add_parser("study", help="eigenvalue convergence study over the standard levels")
    common(p)
    eig_opts(p)
    p = sub.add_parser("source", help="manufactured source problem on the unit cube")
    common(p, domain=False)
    p = sub.add_parser("recover", help="recovery-corrected eigenvalues of the linear element")
    common(p, order=False)
    p.add_argument("--count", type=int, default=3)
    p.add_argument("--shift", type=float, default=None)
    return parser


def _run(args):
    if args.command == "source":
        levels = parse_levels(args.levels, "cube")
        return harness.run_source_study(args.order, levels)
    levels = parse_levels(args.levels, args.domain)
    if args.command == "recover":
        return harness.run_recovery_study(args.domain, levels, count=args.count, shift=args.shift)
    if args.command == "eigs" and levels is None:
        levels = harness.DEFAULT_LEVELS[normalize_domain(args.domain)][:1]
    return harness.run_eigen_study(args.domain, args.order, levels, count=args.count,
                                   backend=args.backend, shift=args.shift, filter_tol=args.filter_tol)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        parse_levels(args.levels, getattr(args, "domain", "cube"))
    except (argparse.ArgumentTypeError, ValueError) as exc:
        parser.error(str(exc))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.deterministic:
        np.random.seed(0)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            table = _run(args)
    except (ExtLagError, ArithmeticError) as exc:
        print(f"extlag: solver failure: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"extlag: {exc}", file=sys.stderr)
        return 2
    if args.deterministic:
        table.metadata.pop("seconds", None)
    text = table.to_json() + "\n" if args.format == "json" else table.to_csv()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if table.metadata.get("warning"):
        print(f"extlag: warning: {table.metadata['warning']}", file=sys.stderr)
    if table.metadata.get("partial"):
        print("extlag: solver failure: fewer converged eigenpairs than requested", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())

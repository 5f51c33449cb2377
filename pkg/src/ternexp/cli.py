"""Command-line front end.

    ternexp search --a 3 --b 5 --k 2 --zmax 10
    ternexp search --grid-max 20 --kmin 2 --kmax 12 --zmax 12 --workers 8
    ternexp classify-2p --xmax 300 --lmax 6
    ternexp lemma --name catalan --vmax 300 --emax 10
    ternexp census --n 100 --format csv

Exit status: 0 clean, 1 usage error, 2 lemma falsification, 3 ceiling exceeded.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .batch import EXIT_USAGE, LEMMA_NAMES, RunPlan, execute
from .errors import DomainError
from .search import EquationInstance


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _int_at_least(lo: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be at least {lo}, got {v}")
        return v

    parse.__name__ = f"integer >= {lo}"
    return parse


POS = _int_at_least(1)
GT1 = _int_at_least(2)

# Required bound flags per lemma name.
LEMMA_BOUNDS = {
    "nl": ("xmax", "mmax", "nmax"),
    "catalan": ("vmax", "emax"),
    "lemma3": ("xmax", "mmax", "nmax"),
    "lemma4": ("xmax", "lmax"),
    "lemma5": ("xmax", "lmax"),
}


def _build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--workers", type=POS, default=1, help="parallel worker processes")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", default=None, help="report path (default: standard output)")

    parser = _Parser(prog="ternexp", description="Verifiers for (ak)^x + (bk)^y = ((a+b)k)^z.")
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    for name in ("search", "pruned-search"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--a", type=GT1, help="a > 1")
        p.add_argument("--b", type=GT1, help="b > 1, coprime to a")
        p.add_argument("--k", type=POS)
        p.add_argument("--zmax", type=POS, required=True)
        p.add_argument("--grid-max", type=GT1, help="sweep every pair with max(a, b) <= this")
        p.add_argument("--family", choices=("prime-powers", "coprime"), default="prime-powers")
        p.add_argument("--kmin", type=POS, default=2)
        p.add_argument("--kmax", type=POS, default=12)

    for name in ("classify-2p", "classify-pq"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("--xmax", type=GT1, required=True)
        p.add_argument("--lmax", type=GT1, required=True)

    p = sub.add_parser("lemma", parents=[common])
    p.add_argument("--name", choices=LEMMA_NAMES, required=True)
    for flag in ("xmax", "mmax", "nmax", "vmax", "emax", "lmax"):
        p.add_argument(f"--{flag}", type=POS)
    p.add_argument("--primes", type=POS, nargs="+", help="lemma5 primes (default 3 5 7)")

    p = sub.add_parser("census", parents=[common])
    p.add_argument("--n", type=_int_at_least(4), required=True)

    p = sub.add_parser("guard", parents=[common])
    p.add_argument("--a", type=GT1, required=True)
    p.add_argument("--b", type=GT1, required=True)
    p.add_argument("--k", type=POS, required=True)
    return parser


def parse_plan(argv: Sequence[str]) -> RunPlan:
    """Validate an argument vector into a RunPlan; raises UsageError."""
    ns = _build_parser().parse_args(list(argv))
    params = {k: v for k, v in vars(ns).items() if k not in ("subcommand", "workers", "format", "output")}
    cmd = ns.subcommand
    if cmd in ("search", "pruned-search"):
        if params["grid_max"] is None:
            missing = [f"--{f}" for f in ("a", "b", "k") if params[f] is None]
            if missing:
                raise UsageError(f"{cmd}: missing {', '.join(missing)} (or use --grid-max)")
            for f in ("family", "kmin", "kmax", "grid_max"):
                params.pop(f)
            try:
                EquationInstance(params["a"], params["b"], params["k"])
            except DomainError as exc:
                raise UsageError(f"{cmd}: {exc}")
        else:
            if params["kmin"] > params["kmax"]:
                raise UsageError(f"{cmd}: --kmin exceeds --kmax")
            for f in ("a", "b", "k"):
                params.pop(f)
    elif cmd == "lemma":
        need = LEMMA_BOUNDS[params["name"]]
        missing = [f"--{f}" for f in need if params[f] is None]
        if missing:
            raise UsageError(f"lemma --name {params['name']}: missing {', '.join(missing)}")
        params = {k: v for k, v in params.items()
                  if k == "name" or k in need or (k == "primes" and params["name"] == "lemma5")}
    elif cmd == "guard":
        try:
            EquationInstance(params["a"], params["b"], params["k"])
        except DomainError as exc:
            raise UsageError(f"guard: {exc}")
    return RunPlan(cmd, params, ns.workers, ns.format, ns.output)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        plan = parse_plan(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    env = execute(plan)
    text = env.render()
    if plan.output:
        with open(plan.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for f in env.findings:
        if f.kind in ("falsification", "ceiling"):
            print(f"{f.kind}: {f.source}: {f.message}", file=sys.stderr)
    return env.exit_status

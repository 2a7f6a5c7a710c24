"""Command line entry point: ``genfactor <subcommand> ...``.

Exit codes: 0 yes/valid, 1 no/invalid, 2 usage or input error, 3 oracle
budget exhausted.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import egcc, gadgets
from .fpt import all_singleton_ones, solve, solve_singleton_ones
from .instance import (
    StructuralError,
    parse_factor,
    parse_instance,
    serialize_factor,
    serialize_instance,
    verify_factor,
)
from .oracle import DEFAULT_BUDGET, BudgetExceeded, enumerate_all_factors, solve_bruteforce
from .transforms import PreconditionError

EXIT_YES, EXIT_NO, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _run_solve(inst, args):
    fast = args.fast_path == "on" or (args.fast_path == "auto" and all_singleton_ones(inst))
    if fast:
        return solve_singleton_ones(inst)
    return solve(inst, workers=args.parallel, deterministic=args.deterministic)


def cmd_solve(args, out) -> int:
    inst = parse_instance(_read(args.instance))
    dec, stats = _run_solve(inst, args)
    if args.stats:
        for line in stats.lines():
            print(line, file=sys.stderr)
    if not dec:
        print("NO", file=out)
        return EXIT_NO
    text = serialize_factor(dec.witness)
    if args.out:
        Path(args.out).write_text(text)
        print("YES", file=out)
    else:
        out.write(text)
    return EXIT_YES


def cmd_verify(args, out) -> int:
    inst = parse_instance(_read(args.instance))
    phi = parse_factor(_read(args.factor))
    verdict = verify_factor(inst, phi)
    if verdict:
        print("valid", file=out)
        return EXIT_YES
    print(f"invalid: {verdict.message}", file=out)
    return EXIT_NO


def cmd_oracle(args, out) -> int:
    inst = parse_instance(_read(args.instance))
    if args.enumerate:
        factors = enumerate_all_factors(inst, args.budget)
        print(f"# {len(factors)} factors", file=out)
        for phi in factors:
            out.write(serialize_factor(phi))
        return EXIT_YES if factors else EXIT_NO
    dec = solve_bruteforce(inst, args.budget)
    if not dec:
        print("NO", file=out)
        return EXIT_NO
    out.write(serialize_factor(dec.witness))
    return EXIT_YES


def cmd_egcc(args, out) -> int:
    m = egcc.parse_model(_read(args.model))
    alpha, _ = egcc.check_consistency(m)
    if alpha is None:
        print("inconsistent", file=out)
        return EXIT_NO
    for x in sorted(alpha):
        print(f"assign {x} {alpha[x]}", file=out)
    return EXIT_YES


def cmd_gen(args, out) -> int:
    if args.rprime is None:
        g = gadgets.selection_gadget(args.A, args.r)
        print(f"# selection gadget A={sorted(g.A)} r={g.r} hub=v{g.hub}", file=out)
    else:
        g = gadgets.double_selection_gadget(args.A, args.r, args.rprime)
        print(
            f"# double selection gadget A={sorted(g.A)} r={g.r} r'={g.r_prime} "
            f"lower={list(g.lower)} upper={list(g.upper)} q={g.q}",
            file=out,
        )
    out.write(serialize_instance(g.instance))
    return EXIT_YES


def cmd_reduce(args, out) -> int:
    G = gadgets.parse_pclique(_read(args.pclique))
    red = gadgets.reduce_clique(G)
    print(f"# partitioned clique k={G.k} n={G.n}: N={red.N}", file=out)
    for (i, j), v in sorted(red.shared.items()):
        print(f"# h_{i},{j} = v {v}", file=out)
    out.write(serialize_instance(red.instance))
    return EXIT_YES


def cmd_bench(args, out) -> int:
    paths = sorted(p for p in Path(args.dir).iterdir() if p.is_file())
    if not paths:
        raise UsageError(f"no instance files in {args.dir}")
    for path in paths:
        try:
            inst = parse_instance(path.read_text())
        except StructuralError as exc:
            print(f"{path.name} error {exc}", file=out)
            continue
        start = time.perf_counter()
        try:
            dec, stats = _run_solve(inst, args)
        except PreconditionError as exc:
            print(f"{path.name} skipped {exc}", file=out)
            continue
        elapsed = time.perf_counter() - start
        fields = " ".join(stats.lines())
        print(f"{path.name} {'YES' if dec else 'NO'} time={elapsed:.6f} {fields}", file=out)
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="genfactor", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def solver_flags(p):
        p.add_argument("--fast-path", choices=("auto", "on", "off"), default="auto")
        p.add_argument("--parallel", type=int, default=1, metavar="N")
        p.add_argument("--deterministic", action="store_true")
        p.add_argument("--stats", action="store_true")

    p = sub.add_parser("solve", help="decide an instance with the FPT solver")
    p.add_argument("instance")
    p.add_argument("--out", help="write the witness here instead of stdout")
    solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a factor file against an instance")
    p.add_argument("instance")
    p.add_argument("factor")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force decision or factor enumeration")
    p.add_argument("instance")
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("egcc", help="check consistency of an EGC model")
    p.add_argument("model")
    p.set_defaults(func=cmd_egcc)

    p = sub.add_parser("gen", help="generate gadget instances")
    gsub = p.add_subparsers(dest="what", required=True)
    g = gsub.add_parser("gadget")
    g.add_argument("--A", type=_int_list, required=True)
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--rprime", type=int)
    g.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="build hardness reductions")
    rsub = p.add_subparsers(dest="what", required=True)
    r = rsub.add_parser("clique")
    r.add_argument("pclique")
    r.set_defaults(func=cmd_reduce)

    p = sub.add_parser("bench", help="solve every instance in a directory")
    p.add_argument("dir")
    solver_flags(p)
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_YES
    try:
        return args.func(args, out)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, StructuralError, PreconditionError, egcc.ModelError, gadgets.GadgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

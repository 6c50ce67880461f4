"""Command-line interface: compute, solve, verify, oracle, generate, bench, bounds.

Exit codes: 0 ok, 1 violation or unmet bound, 2 malformed input,
3 internal verification failure, 4 size cap exceeded.
"""

from __future__ import annotations

import argparse
import gc
import sys
import time
from typing import Sequence

from .bounds import check_bounds
from .caps import Caps, CapExceeded, load_caps
from .certify import (MalformedSolution, check_consistent, thinness_by_characterization,
                      thinness_by_order_enumeration)
from .layout import ConsistentSolution, consistent_solution
from .thinness_engine import compute_thinness, dump_table_csv
from .tree_core import (Tree, TreeError, format_edge_list, gen_complete_mary, gen_random_tree,
                        gen_smallest_tree, path_tree, read_edge_list, star_tree, to_dot)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_MALFORMED = 2
EXIT_INTERNAL = 3
EXIT_CAP = 4

GEN_HELP = ("generator spec: binary:H, mary:M:H, smallest:K, random:N[:SEED], "
            "path:N, star:LEAVES")


class UsageError(ValueError):
    pass


class InternalError(RuntimeError):
    pass


def generate(spec: str, caps: Caps | None = None) -> Tree:
    """Build a tree from a compact generator spec such as ``mary:3:5``."""
    name, *args = spec.split(":")
    try:
        nums = [int(a) for a in args]
    except ValueError:
        raise UsageError(f"bad generator spec {spec!r}") from None
    arity = {"binary": (1,), "mary": (2,), "smallest": (1,), "random": (1, 2),
             "path": (1,), "star": (1,)}
    if name not in arity:
        raise UsageError(f"unknown generator {name!r}; {GEN_HELP}")
    if len(nums) not in arity[name]:
        raise UsageError(f"wrong number of arguments in {spec!r}; {GEN_HELP}")
    if name == "binary":
        return gen_complete_mary(2, nums[0], caps)
    if name == "mary":
        return gen_complete_mary(nums[0], nums[1], caps)
    if name == "smallest":
        return gen_smallest_tree(nums[0], caps)
    if name == "random":
        return gen_random_tree(nums[0], nums[1] if len(nums) > 1 else 0, caps)
    if name == "path":
        return path_tree(nums[0])
    return star_tree(nums[0])


def _load_tree(args: argparse.Namespace, caps: Caps) -> Tree:
    if args.input is not None:
        return read_edge_list(args.input)
    return generate(args.gen, caps)


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(text)


def cmd_compute(args: argparse.Namespace, caps: Caps) -> int:
    tree = _load_tree(args, caps)
    k, table = compute_thinness(tree, args.root)
    print(k)
    if args.dump_table:
        _write(args.dump_table, dump_table_csv(table))
    return EXIT_OK


def cmd_solve(args: argparse.Namespace, caps: Caps) -> int:
    tree = _load_tree(args, caps)
    k, table = compute_thinness(tree, args.root)
    sol = consistent_solution(tree, args.root, table)
    bad = check_consistent(tree, sol)
    if bad is not None:
        raise InternalError(f"solution failed verification at {tuple(bad)}")
    if sol.num_classes != k:
        raise InternalError(f"solution uses {sol.num_classes} classes, thinness is {k}")
    text = sol.to_json() + "\n" if args.format == "json" else sol.to_text()
    _write(args.out, text)
    if args.out not in (None, "-"):
        print(k)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, caps: Caps) -> int:
    tree = read_edge_list(args.input)
    with open(args.sol, encoding="ascii") as fh:
        try:
            sol = ConsistentSolution.from_text(fh.read())
        except (ValueError, KeyError) as exc:
            raise MalformedSolution(str(exc)) from None
    bad = check_consistent(tree, sol)
    if bad is None:
        print(f"ok classes={sol.num_classes}")
        return EXIT_OK
    print(f"violation {bad.u} {bad.v} {bad.w}")
    return EXIT_VIOLATION


def cmd_oracle(args: argparse.Namespace, caps: Caps) -> int:
    tree = _load_tree(args, caps)
    enum = thinness_by_order_enumeration(tree, caps)
    char = thinness_by_characterization(tree, caps)
    verdict = "agree" if enum == char else "disagree"
    print(f"enumeration={enum} characterization={char} {verdict}")
    return EXIT_OK if enum == char else EXIT_INTERNAL


def cmd_generate(args: argparse.Namespace, caps: Caps) -> int:
    tree = generate(args.gen, caps)
    text = to_dot(tree) if args.format == "dot" else format_edge_list(tree)
    _write(args.out, text)
    return EXIT_OK


def bench_rows(sizes: Sequence[int], trials: int, seed: int,
               caps: Caps | None = None) -> list[tuple[int, float, int]]:
    """(n, min wall seconds over trials, thinness) for one random tree per size.

    One untimed run per size precedes the trials so that every timed run
    starts from a warmed allocator.
    """
    rows = []
    for n in sizes:
        tree = gen_random_tree(n, seed, caps)
        compute_thinness(tree, 0)
        best = float("inf")
        k = 0
        for _ in range(trials):
            gc.collect()
            start = time.perf_counter()
            k, _table = compute_thinness(tree, 0)
            best = min(best, time.perf_counter() - start)
            del _table
        rows.append((n, best, k))
        del tree
    return rows


def cmd_bench(args: argparse.Namespace, caps: Caps) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad --sizes {args.sizes!r}") from None
    if not sizes or min(sizes) < 1 or args.trials < 1:
        raise UsageError("sizes and trials must be positive")
    print("n,seconds,thinness")
    for n, secs, k in bench_rows(sizes, args.trials, args.seed, caps):
        print(f"{n},{secs:.6f},{k}", flush=True)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace, caps: Caps) -> int:
    tree = _load_tree(args, caps)
    k, _ = compute_thinness(tree, 0)
    report = check_bounds(tree, k)
    sys.stdout.write(report.to_csv())
    return EXIT_OK if report.all_satisfied else EXIT_VIOLATION


def _add_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="input", metavar="FILE", help="edge-list file")
    src.add_argument("--gen", metavar="SPEC", help=GEN_HELP)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thinlab", description="Exact thinness of trees, with certificates.",
        epilog="Exit codes: 0 ok, 1 violation/unmet bound, 2 malformed input, "
               "3 internal verification failure, 4 cap exceeded. "
               "Caps can be set with --caps or THINLAB_CAPS, e.g. 'enum=10,oracle=800'.")
    parser.add_argument("--caps", metavar="SPEC", default=None,
                        help="override size caps, e.g. 'enum=10,aux=8000'")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="print the thinness")
    _add_input(p)
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--dump-table", metavar="FILE",
                   help="write the per-vertex table as CSV (vertex,thin_list,crit_list); '-' for stdout")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("solve", help="write an optimal consistent solution")
    _add_input(p)
    p.add_argument("--root", type=int, default=0)
    p.add_argument("--out", metavar="FILE", help="solution file (default stdout)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a solution against a tree")
    p.add_argument("--in", dest="input", metavar="FILE", required=True)
    p.add_argument("--sol", metavar="FILE", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="thinness by both brute-force oracles")
    _add_input(p)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", help="write a generated tree")
    p.add_argument("--gen", metavar="SPEC", required=True, help=GEN_HELP)
    p.add_argument("--out", metavar="FILE")
    p.add_argument("--format", choices=("edges", "dot"), default="edges")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="time the thinness computation on random trees",
                       description="Prints CSV columns n,seconds,thinness; seconds is "
                                   "the minimum wall time over the trials.")
    p.add_argument("--sizes", default="100000,1000000")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("bounds", help="check the thinness bounds (CSV report)")
    _add_input(p)
    p.set_defaults(func=cmd_bounds)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        caps = load_caps(args.caps)
        return args.func(args, caps)
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (TreeError, MalformedSolution, UsageError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry point.

Exit codes follow one convention everywhere: 0 = yes / success, 1 = no,
2 = bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import figures
from .bench import bench_rows, corpus_files, rows_to_csv, rows_to_json
from .core import ApplyError, BipartiteGraph, Variant, check_solution
from .generate import GenSpec, SpecError, gen_planted
from .kernel import kernelize, no_instance
from .oracle import OracleSizeError, assignment_oracle, bfs_oracle
from .solver import solve
from .textio import ParseError, compact, format_graph, format_witness, parse_graph, read_witness

EXIT_YES, EXIT_NO, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def _load_graph(spec: str) -> BipartiteGraph:
    try:
        if spec.startswith("fixture:"):
            return figures.load_fixture(spec.split(":", 1)[1])
        return parse_graph(Path(spec).read_text())
    except (OSError, KeyError) as exc:
        raise InputError(f"{spec}: {exc}") from None
    except ParseError as exc:
        raise InputError(f"{spec}: {exc}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _budget(k: int) -> int:
    if k < 0:
        raise InputError("budget -k must be non-negative")
    return k


def cmd_solve(args) -> int:
    g = _load_graph(args.input)
    k = _budget(args.k)
    res = solve(g, k, Variant(args.variant), threads=args.threads)
    if res.decision:
        print(f"yes {res.opt_cost}")
        if args.witness:
            _write(args.witness, format_witness(res.lifted_witness or []))
        if args.kernel_witness:
            _write(args.kernel_witness, format_witness(res.witness or []))
    else:
        print("no")
    if args.stats_json:
        stats = dict(res.stats, decision="yes" if res.decision else "no", opt_cost=res.opt_cost, k=k)
        _write(args.stats_json, json.dumps(stats, indent=2, sort_keys=True) + "\n")
    return EXIT_YES if res.decision else EXIT_NO


def cmd_kernelize(args) -> int:
    g = _load_graph(args.input)
    k = _budget(args.k)
    kr = kernelize(g, k)
    if args.output:
        if kr.reduced:
            assert kr.graph is not None
            small, old_of = compact(kr.graph)
            notes = [f"kernel for k={k}; renumbered vertex -> input vertex:"]
            notes += [f"map {new} {old}" for new, old in sorted(old_of.items()) if new != old]
            _write(args.output, format_graph(small, notes))
        else:
            _write(args.output, format_graph(no_instance(k), [f"trivial no-instance for k={k}"]))
    if args.stats_json:
        stats = dict(kr.stats.as_dict(), verdict=kr.verdict.value)
        _write(args.stats_json, json.dumps(stats, indent=2, sort_keys=True) + "\n")
    print(kr.verdict.value)
    return EXIT_YES if kr.reduced else EXIT_NO


def cmd_oracle(args) -> int:
    g = _load_graph(args.input)
    k = _budget(args.k)
    variant = Variant(args.variant)
    try:
        if args.mode == "bfs":
            res = bfs_oracle(g, k, variant, force=args.force)
        else:
            res = assignment_oracle(g, k, variant, allow_splits=not args.no_split, force=args.force)
    except OracleSizeError as exc:
        raise InputError(f"{exc} (use --force to override)") from None
    print(f"yes {res.opt_cost}" if res.decision else "no")
    return EXIT_YES if res.decision else EXIT_NO


def cmd_verify(args) -> int:
    g = _load_graph(args.input)
    try:
        ops = read_witness(args.witness)
    except (OSError, ParseError) as exc:
        raise InputError(f"{args.witness}: {exc}") from None
    problem = check_solution(g, ops, _budget(args.k), Variant(args.variant))
    if problem is None:
        print(f"ok: {len(ops)} operations")
        return EXIT_YES
    print(problem)
    return EXIT_NO


def cmd_gen(args) -> int:
    spec = GenSpec(
        left_clusters=args.left_clusters,
        right_clusters=args.right_clusters if args.right_clusters is not None else args.left_clusters,
        min_size=args.min_size,
        max_size=args.max_size,
        overlap_vertices=args.overlap,
        noise_edits=args.noise,
        seed=args.seed,
    )
    try:
        inst = gen_planted(spec)
    except SpecError as exc:
        raise InputError(str(exc)) from None
    _write(args.output, inst.to_text())
    return EXIT_YES


def cmd_bench(args) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        raise InputError(f"{corpus} is not a directory")
    errors: list[str] = []
    rows = bench_rows(corpus_files(corpus), args.k, Variant(args.variant), errors)
    for e in errors:
        print(f"skipped {e}", file=sys.stderr)
    _write(args.output, rows_to_json(rows) if args.json else rows_to_csv(rows))
    return EXIT_YES


def cmd_fixtures(args) -> int:
    if args.name is None:
        print("\n".join(figures.NAMES))
        return EXIT_YES
    try:
        text = figures.fixture_text(args.name, "witness" if args.witness else "graph")
    except (FileNotFoundError, KeyError):
        raise InputError(f"no such fixture {args.name!r}") from None
    sys.stdout.write(text)
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bisplit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    variants = [v.value for v in Variant]

    def graph_args(p, variant=True):
        p.add_argument("--input", required=True, help="graph file, or fixture:<name>")
        p.add_argument("-k", type=int, required=True, help="edit budget")
        if variant:
            p.add_argument("--variant", choices=variants, default=Variant.TWO_SIDED.value)

    p = sub.add_parser("solve", help="decide an instance and emit a witness")
    graph_args(p)
    p.add_argument("--witness", help="write the witness for the input graph here")
    p.add_argument("--kernel-witness", help="write the witness for the kernel graph here")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--stats-json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("kernelize", help="apply the reduction rules")
    graph_args(p, variant=False)
    p.add_argument("--output")
    p.add_argument("--stats-json")
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("oracle", help="brute-force reference answer for tiny graphs")
    graph_args(p)
    p.add_argument("--mode", choices=["bfs", "assignment"], default="assignment")
    p.add_argument("--force", action="store_true", help="ignore the size guard")
    p.add_argument("--no-split", action="store_true", help="assignment mode without splits")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="check a witness against a graph")
    graph_args(p)
    p.add_argument("--witness", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a planted instance")
    p.add_argument("--left-clusters", type=int, required=True)
    p.add_argument("--right-clusters", type=int)
    p.add_argument("--min-size", type=int, default=1)
    p.add_argument("--max-size", type=int, default=3)
    p.add_argument("--overlap", type=int, default=0)
    p.add_argument("--noise", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="benchmark a corpus directory")
    p.add_argument("--corpus", required=True)
    p.add_argument("-k", type=int, nargs="+", required=True)
    p.add_argument("--variant", choices=variants, default=Variant.TWO_SIDED.value)
    p.add_argument("--output")
    p.add_argument("--json", action="store_true", help="JSON instead of CSV")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("fixtures", help="list or print the shipped fixtures")
    p.add_argument("name", nargs="?")
    p.add_argument("--witness", action="store_true", help="print the shipped witness instead")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_YES
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ApplyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

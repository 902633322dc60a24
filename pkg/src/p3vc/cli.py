"""Command-line front end: ``p3vc solve|kernelize|verify|gen|bench|factors``."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .generators import MODELS, gen_random_graph
from .graph import Graph, GraphParseError, parse_graph, serialize_graph
from .kernel import kernelize
from .oracle import InstanceTooLarge, min_p3vc_oracle
from .recurrence import factor_table
from .solver import solve, verify_cover

EXIT_YES, EXIT_NO, EXIT_USAGE = 0, 1, 2
ORACLE_LIMIT = 20


class UsageError(Exception):
    pass


def _load_graph(path: str) -> Graph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return parse_graph(text)
    except GraphParseError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load_cover(path: str, n: int) -> list[int]:
    """Reads a 1-indexed cover: a solve JSON document, a JSON list, or whitespace-separated ints."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        doc = json.loads(text)
        items = doc.get("cover") if isinstance(doc, dict) else doc
        if items is None:
            raise UsageError(f"{path}: JSON document has no cover")
        if not isinstance(items, list):
            items = [items]
    except json.JSONDecodeError:
        items = text.split()
    try:
        cover = [int(x) for x in items]
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{path}: cover entries must be integers") from exc
    bad = [x for x in cover if not 1 <= x <= n]
    if bad:
        raise UsageError(f"{path}: vertex {bad[0]} outside 1..{n}")
    return [x - 1 for x in cover]


def _emit(doc: dict) -> None:
    json.dump(doc, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


def _result_doc(answer: bool, k: int, cover) -> dict:
    return {"answer": "yes" if answer else "no", "k": k, "cover": sorted(v + 1 for v in cover or ())}


# ------------------------------------------------------------- subcommands


def cmd_solve(args) -> int:
    g = _load_graph(args.file)
    out = solve(g, args.k, paper_literal_step9=args.paper_literal_step9)
    doc = _result_doc(out.answer, args.k, out.cover)
    if args.stats:
        doc["stats"] = out.stats.as_dict()
    _emit(doc)
    return EXIT_YES if out.answer else EXIT_NO


def kernelize_and_solve(g: Graph, k: int, mode: str):
    """Kernelize, solve the kernel, and lift its cover back to input ids."""
    res = kernelize(g, k, mode=mode)
    if res.halted or res.reduced_k < 0:
        return res, False, None
    inner = solve(res.reduced_graph, res.reduced_k)
    if not inner.answer:
        return res, False, None
    cover = sorted(res.forced_cover | {res.labels[v] for v in inner.cover})
    return res, True, cover


def cmd_kernelize(args) -> int:
    g = _load_graph(args.file)
    res, answer, cover = kernelize_and_solve(g, args.k, args.mode)
    if answer and (len(cover) > args.k or not verify_cover(g, cover)):
        raise AssertionError("lifted kernel cover failed verification")
    doc = _result_doc(answer, args.k, cover)
    doc["kernel"] = {
        "n": res.reduced_graph.n,
        "k": res.reduced_k,
        "mode": res.mode,
        "bound": res.bound,
    }
    _emit(doc)
    if args.emit:
        Path(args.emit).write_text(serialize_graph(res.reduced_graph, comment=f"kernel k={res.reduced_k}"))
    return EXIT_YES if answer else EXIT_NO


def cmd_verify(args) -> int:
    g = _load_graph(args.file)
    if args.oracle:
        try:
            size, cover = min_p3vc_oracle(g, limit=ORACLE_LIMIT)
        except InstanceTooLarge as exc:
            raise UsageError(str(exc)) from exc
        k = size if args.k is None else args.k
        _emit(_result_doc(size <= k, k, cover if size <= k else None))
        return EXIT_YES if size <= k else EXIT_NO
    cover = _load_cover(args.cover, g.n)
    ok = verify_cover(g, cover)
    if args.k is not None:
        ok = ok and len(set(cover)) <= args.k
    _emit({"valid": ok, "size": len(set(cover))})
    return EXIT_YES if ok else EXIT_NO


def cmd_gen(args) -> int:
    try:
        g = gen_random_graph(args.model, args.n, args.p, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    sys.stdout.write(serialize_graph(g, comment=f"{args.model} n={args.n} p={args.p} seed={args.seed}"))
    return EXIT_YES


def _bench_rows(task: tuple[int, int, float, int]) -> list[dict]:
    seed, n, p, kmax = task
    g = gen_random_graph("gnp", n, p, seed)
    rows = []
    for k in range(kmax + 1):
        out = solve(g, k)
        res, answer, _ = kernelize_and_solve(g, k, "crucial")
        if answer != out.answer:
            raise AssertionError(f"kernel disagrees with direct solve (seed={seed}, k={k})")
        kn = 0 if res.halted else res.reduced_graph.n
        rows.append({
            "seed": seed,
            "n": n,
            "p": p,
            "k": k,
            "answer": "yes" if out.answer else "no",
            "nodes": out.stats.nodes_total,
            "kernel_n": kn,
            "ratio_kernel_n_over_k": f"{kn / k:.4f}" if k else "",
        })
    return rows


def cmd_bench(args) -> int:
    if args.kmax < 0 or args.trials < 0 or args.n < 0 or not 0 <= args.p <= 1:
        raise UsageError("bench needs kmax, trials, n >= 0 and p in [0, 1]")
    tasks = [(args.seed + t, args.n, args.p, args.kmax) for t in range(args.trials)]
    writer = csv.DictWriter(sys.stdout, fieldnames=[
        "seed", "n", "p", "k", "answer", "nodes", "kernel_n", "ratio_kernel_n_over_k",
    ], lineterminator="\n")
    writer.writeheader()
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_bench_rows, tasks))
    else:
        results = [_bench_rows(t) for t in tasks]
    for rows in results:
        writer.writerows(rows)
    return EXIT_YES


def cmd_factors(args) -> int:
    table = factor_table()
    if args.json:
        _emit({"factors": [
            {"step": step, "branch": title, "decrements": list(vec), "factor": round(x, 6)}
            for step, title, vec, x in table
        ]})
        return EXIT_YES
    print(f"{'step':>4}  {'factor':>8}  {'decrements':<20} branch")
    for step, title, vec, x in table:
        # round up: a factor is an upper bound on the growth rate
        print(f"{step:>4}  {math.ceil(x * 1e4) / 1e4:8.4f}  {str(list(vec)):<20} {title}")
    return EXIT_YES


# ------------------------------------------------------------------ parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="p3vc", description="3-path vertex cover toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="decide whether a cover of size <= k exists")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--stats", action="store_true", help="include search-tree statistics")
    p.add_argument("--paper-literal-step9", action="store_true",
                   help="use the uncorrected bipartite (2,3) rule; may give wrong answers")
    p.add_argument("file")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("kernelize", help="kernelize, then solve the kernel")
    p.add_argument("--mode", choices=("simple", "crucial"), default="crucial")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--emit", metavar="PATH", help="also write the kernel graph in DIMACS form")
    p.add_argument("file")
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("verify", help="check a cover, or compute the exact optimum on a small graph")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--cover", metavar="COVERFILE")
    how.add_argument("--oracle", action="store_true", help=f"brute force, n <= {ORACLE_LIMIT}")
    p.add_argument("-k", type=int, default=None)
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="print a random graph in DIMACS form")
    p.add_argument("--model", choices=MODELS, default="gnp")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="CSV of search-tree nodes and kernel size against k")
    p.add_argument("--kmax", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0, help="seed of the first trial")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("factors", help="branching factors of the search rules")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_factors)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "k", None) is not None and args.k < 0:
            raise UsageError("k must be non-negative")
        return args.func(args)
    except UsageError as exc:
        print(f"p3vc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

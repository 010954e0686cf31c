"""Benchmark a directory of graph files: kernel size against its bounds, and solve."""
from __future__ import annotations

import csv
import io
import json
import time
from pathlib import Path
from typing import Iterable, Sequence

from .core import Variant, critical_independent_sets
from .solver import solve
from .textio import ParseError, read_graph

COLUMNS = [
    "instance",
    "k",
    "n",
    "m",
    "classes",
    "kernel_classes",
    "kernel_vertices",
    "bound_6k",
    "bound_6k_k1",
    "decision",
    "opt_cost",
    "candidates_explored",
    "wall_time",
]


def corpus_files(corpus: str | Path) -> list[Path]:
    return sorted(p for p in Path(corpus).iterdir() if p.is_file() and p.suffix in (".graph", ".txt", ".gr"))


def bench_rows(
    files: Iterable[Path], budgets: Sequence[int], variant: Variant, errors: list[str] | None = None
) -> list[dict]:
    rows = []
    for path in sorted(files):
        try:
            g = read_graph(path)
        except (OSError, ParseError, ValueError) as exc:
            if errors is not None:
                errors.append(f"{path.name}: {exc}")
            continue
        classes = len(critical_independent_sets(g))
        for k in sorted(budgets):
            t0 = time.perf_counter()
            res = solve(g, k, variant)
            elapsed = time.perf_counter() - t0
            kr = res.kernel
            reduced = kr is not None and kr.reduced
            rows.append(
                {
                    "instance": path.name,
                    "k": k,
                    "n": g.n,
                    "m": g.m,
                    "classes": classes,
                    "kernel_classes": kr.stats.classes_after if reduced else "",
                    "kernel_vertices": kr.graph.n if reduced else "",
                    "bound_6k": 6 * k,
                    "bound_6k_k1": 6 * k * (k + 1),
                    "decision": "yes" if res.decision else "no",
                    "opt_cost": res.opt_cost if res.decision else "",
                    "candidates_explored": res.stats.get("candidates_explored", 0),
                    "wall_time": f"{elapsed:.6f}",
                }
            )
    return rows


def rows_to_csv(rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()


def rows_to_json(rows: Sequence[dict]) -> str:
    return json.dumps(list(rows), indent=2) + "\n"

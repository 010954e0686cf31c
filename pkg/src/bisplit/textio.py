"""Graph and witness text formats.

Graph files::

    c optional comment
    p bsplit <n1> <n2> <m>
    e <u> <v>          # 1 <= u <= n1 (left), 1 <= v <= n2 (right)

Witness files hold one operation per line::

    del L1 R4
    add L2 R3
    split L3 | R1 R2 | R4 R5
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

from .core import LEFT, RIGHT, BipartiteGraph, DeleteEdge, EditOp, InsertEdge, L, R, Split, Vertex


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"expected an integer, got {tok!r}") from None


def parse_graph(text: str) -> BipartiteGraph:
    header = None
    edges: list[tuple[Vertex, Vertex]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if header is not None:
                raise ParseError(lineno, "second problem line")
            if len(toks) != 5 or toks[1] != "bsplit":
                raise ParseError(lineno, "problem line must read 'p bsplit <n1> <n2> <m>'")
            n1, n2, m = (_int(t, lineno) for t in toks[2:])
            if min(n1, n2, m) < 0:
                raise ParseError(lineno, "negative count in problem line")
            header = (n1, n2, m)
        elif toks[0] == "e":
            if header is None:
                raise ParseError(lineno, "edge before problem line")
            if len(toks) != 3:
                raise ParseError(lineno, "edge line must read 'e <u> <v>'")
            u, v = _int(toks[1], lineno), _int(toks[2], lineno)
            if not 1 <= u <= header[0]:
                raise ParseError(lineno, f"left index {u} out of range 1..{header[0]}")
            if not 1 <= v <= header[1]:
                raise ParseError(lineno, f"right index {v} out of range 1..{header[1]}")
            if (u, v) in seen:
                raise ParseError(lineno, f"duplicate edge {u} {v}")
            seen.add((u, v))
            edges.append((L(u), R(v)))
        else:
            raise ParseError(lineno, f"unknown line type {toks[0]!r}")
    if header is None:
        raise ParseError(0, "missing problem line")
    n1, n2, m = header
    if len(edges) != m:
        raise ParseError(0, f"problem line announces {m} edges, found {len(edges)}")
    vertices = [L(i) for i in range(1, n1 + 1)] + [R(j) for j in range(1, n2 + 1)]
    return BipartiteGraph(vertices, edges)


def read_graph(path: str | Path) -> BipartiteGraph:
    return parse_graph(Path(path).read_text())


def _side_count(g: BipartiteGraph, side: str) -> int:
    vs = g.left if side == LEFT else g.right
    if any(not v.is_original for v in vs):
        raise ValueError("graph contains split copies; only original vertices can be written")
    n = len(vs)
    if {v.origin for v in vs} != set(range(1, n + 1)):
        raise ValueError(f"{side} vertices are not numbered 1..{n}; compact the graph first")
    return n


def format_graph(g: BipartiteGraph, comments: Iterable[str] = ()) -> str:
    n1, n2 = _side_count(g, LEFT), _side_count(g, RIGHT)
    lines = [f"c {c}" if c else "c" for c in comments]
    lines.append(f"p bsplit {n1} {n2} {g.m}")
    lines.extend(f"e {u.origin} {v.origin}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def write_graph(g: BipartiteGraph, path: str | Path, comments: Iterable[str] = ()) -> None:
    Path(path).write_text(format_graph(g, comments))


def compact(g: BipartiteGraph) -> tuple[BipartiteGraph, dict[Vertex, Vertex]]:
    """Renumber each side to 1..n in id order; returns (graph, new -> old)."""
    new_of: dict[Vertex, Vertex] = {}
    for side, vs in ((LEFT, g.left), (RIGHT, g.right)):
        for i, v in enumerate(sorted(vs), start=1):
            new_of[v] = Vertex(side, i)
    edges = [(new_of[u], new_of[v]) for u, v in g.edges()]
    return BipartiteGraph(new_of.values(), edges), {b: a for a, b in new_of.items()}


def _vertex(tok: str, lineno: int) -> Vertex:
    try:
        return Vertex.parse(tok)
    except ValueError as exc:
        raise ParseError(lineno, str(exc)) from None


def parse_witness(text: str) -> list[EditOp]:
    ops: list[EditOp] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line == "c" or line.startswith("c "):
            continue
        kind = line.split(None, 1)[0]
        if kind in ("add", "del"):
            toks = line.split()
            if len(toks) != 3:
                raise ParseError(lineno, f"'{kind}' takes exactly two vertices")
            u, v = _vertex(toks[1], lineno), _vertex(toks[2], lineno)
            if {u.side, v.side} != {LEFT, RIGHT}:
                raise ParseError(lineno, "edge endpoints must be one left and one right vertex")
            ops.append(InsertEdge(u, v) if kind == "add" else DeleteEdge(u, v))
        elif kind == "split":
            parts = line[len("split"):].split("|")
            if len(parts) != 3:
                raise ParseError(lineno, "split must read 'split <v> | <nbrs> | <nbrs>'")
            head = parts[0].split()
            if len(head) != 1:
                raise ParseError(lineno, "split names exactly one vertex")
            v = _vertex(head[0], lineno)
            n1 = [_vertex(t, lineno) for t in parts[1].split()]
            n2 = [_vertex(t, lineno) for t in parts[2].split()]
            ops.append(Split(v, n1, n2))
        else:
            raise ParseError(lineno, f"unknown operation {kind!r}")
    return ops


def format_witness(ops: Sequence[EditOp]) -> str:
    return "".join(str(op) + "\n" for op in ops)


def read_witness(path: str | Path) -> list[EditOp]:
    return parse_witness(Path(path).read_text())


def write_witness(ops: Sequence[EditOp], path: str | Path) -> None:
    Path(path).write_text(format_witness(ops))


"""Linear-time kernelization.

Two reduction rules are applied exhaustively:

1. drop every connected component that already is a biclique (in the twin
   quotient these are isolated nodes and isolated edges);
2. shrink every twin class to at most ``k + 1`` vertices.

If more than ``6k`` twin classes survive, the instance is a no-instance.
The reduced graph then has at most ``6k(k+1)`` vertices.
"""
from __future__ import annotations

import enum
from dataclasses import asdict, dataclass

from .core import BipartiteGraph, L, R, component_is_biclique, twin_groups


class Verdict(str, enum.Enum):
    REDUCED = "reduced"
    TRIVIALLY_NO = "trivially-no"


@dataclass(frozen=True)
class KernelStats:
    classes_before: int
    classes_after: int
    vertices_removed_rule1: int
    vertices_removed_rule2: int

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class KernelResult:
    verdict: Verdict
    graph: BipartiteGraph | None
    stats: KernelStats

    @property
    def reduced(self) -> bool:
        return self.verdict is Verdict.REDUCED


def rule_strip_isolated_bicliques(g: BipartiteGraph) -> BipartiteGraph:
    removed = [v for comp in g.components() if component_is_biclique(g, comp) for v in comp]
    return g.without(removed)


def rule_cap_class_sizes(g: BipartiteGraph, k: int) -> BipartiteGraph:
    if k < 0:
        raise ValueError("budget must be non-negative")
    cap = k + 1
    removed = [v for members in twin_groups(g) for v in members[cap:]]
    return g.without(removed)


def kernelize(g: BipartiteGraph, k: int) -> KernelResult:
    if k < 0:
        raise ValueError("budget must be non-negative")
    classes_before = len(twin_groups(g))
    g1 = rule_strip_isolated_bicliques(g)
    g2 = rule_cap_class_sizes(g1, k)
    # capping keeps every component's quotient intact, so this is a no-op
    g3 = g2 if g2 is g1 else rule_strip_isolated_bicliques(g2)
    classes_after = len(twin_groups(g3))
    stats = KernelStats(
        classes_before=classes_before,
        classes_after=classes_after,
        vertices_removed_rule1=g.n - g1.n + g2.n - g3.n,
        vertices_removed_rule2=g1.n - g2.n,
    )
    if classes_after > 6 * k:
        return KernelResult(Verdict.TRIVIALLY_NO, None, stats)
    return KernelResult(Verdict.REDUCED, g3, stats)


def no_instance(k: int) -> BipartiteGraph:
    """``k + 1`` disjoint copies of P4: every copy needs its own edit."""
    vertices, edges = [], []
    for i in range(k + 1):
        a, c = L(2 * i + 1), L(2 * i + 2)
        b, d = R(2 * i + 1), R(2 * i + 2)
        vertices += [a, c, b, d]
        edges += [(a, b), (c, b), (c, d)]
    return BipartiteGraph(vertices, edges)

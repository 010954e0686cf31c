"""Bipartite graphs, edit operations and twin-class structure.

Vertices are identified by ``(side, origin, path)``: the side of the
bipartition, the 1-based index of the original vertex on that side, and the
branch choices of every split that produced this copy.  Splitting ``L3``
yields ``L3.1`` and ``L3.2``; splitting ``L3.2`` yields ``L3.2.1`` and
``L3.2.2``.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple, Sequence, Union

LEFT = "L"
RIGHT = "R"


class Variant(str, enum.Enum):
    TWO_SIDED = "two-sided"
    ONE_SIDED = "one-sided"


class Vertex(NamedTuple):
    side: str
    origin: int
    path: tuple[int, ...] = ()

    def child(self, branch: int) -> "Vertex":
        return Vertex(self.side, self.origin, self.path + (branch,))

    @property
    def is_original(self) -> bool:
        return not self.path

    def __str__(self) -> str:
        return self.side + str(self.origin) + "".join("." + str(b) for b in self.path)

    @classmethod
    def parse(cls, token: str) -> "Vertex":
        """Parse ``L3`` / ``R12.1.2`` style tokens."""
        if len(token) < 2 or token[0] not in (LEFT, RIGHT):
            raise ValueError(f"bad vertex token {token!r}")
        head, *rest = token[1:].split(".")
        try:
            origin = int(head)
            path = tuple(int(b) for b in rest)
        except ValueError:
            raise ValueError(f"bad vertex token {token!r}") from None
        if origin < 1 or any(b not in (1, 2) for b in path):
            raise ValueError(f"bad vertex token {token!r}")
        return cls(token[0], origin, path)


def L(i: int) -> Vertex:
    return Vertex(LEFT, i)


def R(i: int) -> Vertex:
    return Vertex(RIGHT, i)


class GraphError(ValueError):
    pass


class BipartiteGraph:
    """Immutable bipartite graph with side-tagged vertices.

    Adjacency is stored as a dict of frozensets so membership queries are
    O(1) expected and neighborhoods can be hashed directly.
    """

    __slots__ = ("_adj", "_left", "_right", "_m")

    def __init__(self, vertices: Iterable[Vertex] = (), edges: Iterable[tuple[Vertex, Vertex]] = ()):
        adj: dict[Vertex, set[Vertex]] = {}
        for v in vertices:
            if v.side not in (LEFT, RIGHT):
                raise GraphError(f"vertex {v} has no valid side")
            adj[v] = set()
        for u, v in edges:
            if u not in adj or v not in adj:
                raise GraphError(f"edge {u}-{v} has an endpoint outside the vertex set")
            if u.side == v.side:
                raise GraphError(f"edge {u}-{v} joins two vertices on the same side")
            if v in adj[u]:
                raise GraphError(f"duplicate edge {u}-{v}")
            adj[u].add(v)
            adj[v].add(u)
        self._init({v: frozenset(ns) for v, ns in adj.items()})

    def _init(self, adj: dict[Vertex, frozenset[Vertex]]) -> None:
        self._adj = adj
        self._left: frozenset[Vertex] | None = None
        self._right: frozenset[Vertex] | None = None
        self._m: int | None = None

    @classmethod
    def _from_adj(cls, adj: dict[Vertex, frozenset[Vertex]]) -> "BipartiteGraph":
        # trusted constructor: adj must already be symmetric and bipartite
        g = cls.__new__(cls)
        g._init(adj)
        return g

    @classmethod
    def complete(cls, n1: int, n2: int) -> "BipartiteGraph":
        left = [L(i) for i in range(1, n1 + 1)]
        right = [R(j) for j in range(1, n2 + 1)]
        return cls(left + right, [(u, v) for u in left for v in right])

    @property
    def left(self) -> frozenset[Vertex]:
        if self._left is None:
            self._left = frozenset(v for v in self._adj if v.side == LEFT)
        return self._left

    @property
    def right(self) -> frozenset[Vertex]:
        if self._right is None:
            self._right = frozenset(v for v in self._adj if v.side == RIGHT)
        return self._right

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        if self._m is None:
            self._m = sum(len(self._adj[v]) for v in self.left)
        return self._m

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self._adj)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash(frozenset(self._adj.items()))

    def __repr__(self) -> str:
        return f"BipartiteGraph(n1={len(self.left)}, n2={len(self.right)}, m={self.m})"

    def vertices(self) -> list[Vertex]:
        return sorted(self._adj)

    def neighbors(self, v: Vertex) -> frozenset[Vertex]:
        return self._adj[v]

    def degree(self, v: Vertex) -> int:
        return len(self._adj[v])

    def has_edge(self, u: Vertex, v: Vertex) -> bool:
        ns = self._adj.get(u)
        return ns is not None and v in ns

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        """All edges as sorted ``(left, right)`` pairs."""
        return sorted((u, v) for u in self.left for v in self._adj[u])

    def adjacency(self) -> dict[Vertex, frozenset[Vertex]]:
        return dict(self._adj)

    def without(self, removed: Iterable[Vertex]) -> "BipartiteGraph":
        removed = set(removed)
        if not removed:
            return self
        touched = set()
        for v in removed:
            touched.update(self._adj[v])
        touched -= removed
        adj = {v: ns for v, ns in self._adj.items() if v not in removed}
        for u in touched:
            adj[u] = adj[u] - removed
        return BipartiteGraph._from_adj(adj)

    def induced(self, keep: Iterable[Vertex]) -> "BipartiteGraph":
        keep = set(keep)
        return self.without(v for v in self._adj if v not in keep)

    def components(self) -> list[list[Vertex]]:
        """Connected components, each sorted, ordered by smallest vertex."""
        seen: set[Vertex] = set()
        comps = []
        for s in sorted(self._adj):
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comp.sort()
            comps.append(comp)
        return comps

    def disjoint_union(self, other: "BipartiteGraph", shift: bool = True) -> "BipartiteGraph":
        """Union with ``other``; with ``shift`` its origins are renumbered past ours."""
        dl = max((v.origin for v in self.left), default=0) if shift else 0
        dr = max((v.origin for v in self.right), default=0) if shift else 0

        def move(v: Vertex) -> Vertex:
            return Vertex(v.side, v.origin + (dl if v.side == LEFT else dr), v.path)

        adj = dict(self._adj)
        for v, ns in other._adj.items():
            mv = move(v)
            if mv in adj:
                raise GraphError(f"vertex {mv} occurs in both graphs")
            adj[mv] = frozenset(move(u) for u in ns)
        return BipartiteGraph._from_adj(adj)


def component_is_biclique(g: BipartiteGraph, comp: Sequence[Vertex]) -> bool:
    nl = sum(1 for v in comp if v.side == LEFT)
    nr = len(comp) - nl
    return sum(g.degree(v) for v in comp if v.side == LEFT) == nl * nr


def is_bicluster(g: BipartiteGraph) -> bool:
    """True iff every connected component is a complete bipartite graph.

    A bipartite graph has no triangles, so being free of induced P4 is the
    same as every component being complete.
    """
    return all(component_is_biclique(g, comp) for comp in g.components())


# ---------------------------------------------------------------------------
# edit operations


@dataclass(frozen=True)
class InsertEdge:
    u: Vertex
    v: Vertex

    def __str__(self) -> str:
        a, b = sorted((self.u, self.v))
        return f"add {a} {b}"


@dataclass(frozen=True)
class DeleteEdge:
    u: Vertex
    v: Vertex

    def __str__(self) -> str:
        a, b = sorted((self.u, self.v))
        return f"del {a} {b}"


@dataclass(frozen=True)
class Split:
    """Replace ``v`` by ``v.1`` adjacent to ``n1`` and ``v.2`` adjacent to ``n2``."""

    v: Vertex
    n1: frozenset[Vertex]
    n2: frozenset[Vertex]

    def __init__(self, v: Vertex, n1: Iterable[Vertex], n2: Iterable[Vertex]):
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "n1", frozenset(n1))
        object.__setattr__(self, "n2", frozenset(n2))

    def __str__(self) -> str:
        parts = [f"split {self.v}", " ".join(map(str, sorted(self.n1))), " ".join(map(str, sorted(self.n2)))]
        return " | ".join(parts).rstrip()


EditOp = Union[InsertEdge, DeleteEdge, Split]


class ApplyError(ValueError):
    def __init__(self, index: int, op: EditOp, reason: str):
        super().__init__(f"op {index} ({op}): {reason}")
        self.index = index
        self.op = op
        self.reason = reason


def apply(g: BipartiteGraph, ops: Sequence[EditOp]) -> BipartiteGraph:
    """Return the graph obtained by applying ``ops`` to ``g`` in order."""
    adj = g.adjacency()
    # vertices whose neighborhood was rebuilt as a mutable set during this call
    owned: set[Vertex] = set()

    def mut(x: Vertex) -> set:
        if x not in owned:
            adj[x] = set(adj[x])
            owned.add(x)
        return adj[x]  # type: ignore[return-value]

    for i, op in enumerate(ops):
        if isinstance(op, (InsertEdge, DeleteEdge)):
            u, v = op.u, op.v
            for x in (u, v):
                if x not in adj:
                    raise ApplyError(i, op, f"vertex {x} is not present")
            if u.side == v.side:
                raise ApplyError(i, op, "endpoints lie on the same side")
            present = v in adj[u]
            if isinstance(op, InsertEdge):
                if present:
                    raise ApplyError(i, op, "edge already present")
                mut(u).add(v)
                mut(v).add(u)
            else:
                if not present:
                    raise ApplyError(i, op, "edge not present")
                mut(u).discard(v)
                mut(v).discard(u)
        elif isinstance(op, Split):
            v = op.v
            if v not in adj:
                raise ApplyError(i, op, f"vertex {v} is not present")
            nv = adj[v]
            if (op.n1 | op.n2) != nv:
                extra = sorted((op.n1 | op.n2) - nv)
                if extra:
                    raise ApplyError(i, op, f"{extra[0]} is not a neighbor of {v}")
                missing = sorted(nv - op.n1 - op.n2)
                raise ApplyError(i, op, f"neighbor {missing[0]} is covered by neither copy")
            c1, c2 = v.child(1), v.child(2)
            del adj[v]
            owned.discard(v)
            adj[c1] = set(op.n1)
            adj[c2] = set(op.n2)
            owned.update((c1, c2))
            for u in nv:
                s = mut(u)
                s.discard(v)
                if u in op.n1:
                    s.add(c1)
                if u in op.n2:
                    s.add(c2)
        else:
            raise ApplyError(i, op, "unknown operation")
    for x in owned:
        adj[x] = frozenset(adj[x])
    return BipartiteGraph._from_adj(adj)


def check_solution(g: BipartiteGraph, ops: Sequence[EditOp], k: int, variant: Variant) -> str | None:
    """Return the first violated condition, or None if ``ops`` solves ``(g, k)``."""
    if len(ops) > k:
        return f"length {len(ops)} exceeds budget {k}"
    if Variant(variant) is Variant.ONE_SIDED:
        for i, op in enumerate(ops):
            if isinstance(op, Split) and op.v.side != LEFT:
                return f"variant violation: op {i} splits {op.v}, which is not a left vertex"
    try:
        result = apply(g, ops)
    except ApplyError as exc:
        return f"inapplicable: {exc}"
    if not is_bicluster(result):
        return "result is not a bicluster graph"
    return None


def verify_solution(g: BipartiteGraph, ops: Sequence[EditOp], k: int, variant: Variant) -> bool:
    return check_solution(g, ops, k, variant) is None


# ---------------------------------------------------------------------------
# twin classes


@dataclass(frozen=True)
class CisClass:
    side: str
    members: tuple[Vertex, ...]
    neighborhood: frozenset[int] = frozenset()

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass
class CisPartition:
    classes: list[CisClass]
    class_of: dict[Vertex, int] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not self.class_of:
            self.class_of = {v: i for i, c in enumerate(self.classes) for v in c.members}

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def sizes(self) -> list[int]:
        return [c.size for c in self.classes]


def twin_groups(g: BipartiteGraph) -> list[list[Vertex]]:
    """Members of each twin class, without the class-level adjacency."""
    groups: dict[tuple[str, frozenset[Vertex]], list[Vertex]] = {}
    for v in sorted(g._adj):
        groups.setdefault((v.side, g._adj[v]), []).append(v)
    return list(groups.values())


def critical_independent_sets(g: BipartiteGraph) -> CisPartition:
    """Group vertices into maximal false-twin classes.

    Classes never mix sides, even for isolated vertices.  Classes are ordered
    by their smallest member.
    """
    members_list = twin_groups(g)
    class_of: dict[Vertex, int] = {}
    for i, members in enumerate(members_list):
        for v in members:
            class_of[v] = i
    lookup = class_of.__getitem__
    classes = [
        CisClass(members[0].side, tuple(members), frozenset(map(lookup, g._adj[members[0]])))
        for members in members_list
    ]
    return CisPartition(classes, class_of)


@dataclass(frozen=True)
class QuotientGraph:
    sides: tuple[str, ...]
    weights: tuple[int, ...]
    adj: tuple[frozenset[int], ...]

    def __len__(self) -> int:
        return len(self.weights)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return sorted((i, j) for i, ns in enumerate(self.adj) for j in ns if i < j)

    def components(self) -> list[list[int]]:
        seen = [False] * len(self)
        comps = []
        for s in range(len(self)):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [], [s]
            while stack:
                u = stack.pop()
                comp.append(u)
                for w in self.adj[u]:
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comps.append(sorted(comp))
        return comps


def quotient_graph(g: BipartiteGraph, p: CisPartition) -> QuotientGraph:
    """Build the class-level graph; rejects ``p`` unless it is g's twin partition."""
    seen: set[Vertex] = set()
    for i, c in enumerate(p.classes):
        if not c.members:
            raise GraphError(f"class {i} is empty")
        for v in c.members:
            if v not in g:
                raise GraphError(f"class {i} contains {v}, which is not in the graph")
            if v in seen:
                raise GraphError(f"{v} occurs in more than one class")
            if v.side != c.side or p.class_of.get(v) != i:
                raise GraphError(f"{v} is misfiled in class {i}")
            seen.add(v)
        first = g.neighbors(c.members[0])
        if any(g.neighbors(v) != first for v in c.members[1:]):
            raise GraphError(f"class {i} members do not share one neighborhood")
    if len(seen) != g.n:
        missing = min(set(g) - seen)
        raise GraphError(f"{missing} is not covered by the partition")
    keys = {(c.side, g.neighbors(c.members[0])) for c in p.classes}
    if len(keys) != len(p.classes):
        raise GraphError("two classes on one side share a neighborhood (partition not maximal)")
    adj = tuple(frozenset(p.class_of[u] for u in g.neighbors(c.members[0])) for c in p.classes)
    return QuotientGraph(tuple(c.side for c in p.classes), tuple(c.size for c in p.classes), adj)

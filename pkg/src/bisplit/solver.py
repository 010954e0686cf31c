"""Exact search over class-to-biclique assignments.

Every twin class of the kernel is mapped to a non-empty set of biclique
*slots*.  Slot ``j`` of the left classes and slot ``j`` of the right classes
together form one biclique of the target graph.  A class with more than one
slot has all of its vertices split, once per extra slot.

For a fixed assignment the cheapest edit sequence has a closed form:

* ``w_I * (|S_I| - 1)`` splits per class ``I``;
* ``w_I * w_J`` deletions for each adjacent cross pair with disjoint slots;
* ``w_I * w_J`` insertions for each non-adjacent cross pair sharing a slot.

Slot sets are handled as integer bitmasks inside the search; the public
:class:`Assignment` uses 1-based slot numbers.
"""
from __future__ import annotations

import multiprocessing as mp
import time
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .core import (
    LEFT,
    BipartiteGraph,
    CisPartition,
    DeleteEdge,
    EditOp,
    InsertEdge,
    QuotientGraph,
    Split,
    Variant,
    Vertex,
    critical_independent_sets,
    is_bicluster,
    quotient_graph,
    verify_solution,
)
from .kernel import KernelResult, kernelize


@dataclass(frozen=True)
class Assignment:
    """Slot sets per twin class, indexed like the quotient's nodes."""

    ell: int
    memberships: tuple[frozenset[int], ...]

    @classmethod
    def from_lists(cls, ell: int, memberships: Sequence[Sequence[int]]) -> "Assignment":
        return cls(ell, tuple(frozenset(m) for m in memberships))

    def masks(self) -> list[int]:
        return [_mask(m) for m in self.memberships]


@dataclass(frozen=True)
class CostBreakdown:
    splits: int
    insertions: int
    deletions: int

    @property
    def total(self) -> int:
        return self.splits + self.insertions + self.deletions


@dataclass
class SolveResult:
    decision: bool
    opt_cost: int | None
    witness: list[EditOp] | None
    assignment: Assignment | None = None
    kernel: KernelResult | None = None
    lifted_witness: list[EditOp] | None = None
    stats: dict = field(default_factory=dict)


def _mask(slots) -> int:
    m = 0
    for s in slots:
        m |= 1 << (s - 1)
    return m


def _slots(mask: int) -> frozenset[int]:
    out = []
    s = 1
    while mask:
        if mask & 1:
            out.append(s)
        mask >>= 1
        s += 1
    return frozenset(out)


def slot_count(n_classes: int, k: int) -> int:
    # at most 2k bicliques in a kernel solution; at most one slot per class
    # plus one per split
    return min(2 * k, n_classes + k)


def canonical(memberships: Sequence[int]) -> tuple[int, ...]:
    """Renumber slots so their class-incidence columns are lexicographically descending."""
    used = 0
    for m in memberships:
        used |= m
    cols = []
    s = 0
    while used >> s:
        if used >> s & 1:
            col = tuple(m >> s & 1 for m in memberships)
            cols.append((col, s))
        s += 1
    cols.sort(key=lambda c: c[0], reverse=True)
    new_bit = {old: i for i, (_, old) in enumerate(cols)}
    out = []
    for m in memberships:
        nm = 0
        for old, i in new_bit.items():
            if m >> old & 1:
                nm |= 1 << i
        out.append(nm)
    return tuple(out)


def assignment_cost(q: QuotientGraph, a: Assignment) -> CostBreakdown:
    if len(a.memberships) != len(q):
        raise ValueError(f"assignment covers {len(a.memberships)} classes, quotient has {len(q)}")
    for i, m in enumerate(a.memberships):
        if not m:
            raise ValueError(f"class {i} has an empty membership")
        if min(m) < 1 or max(m) > a.ell:
            raise ValueError(f"class {i} uses a slot outside 1..{a.ell}")
    masks = a.masks()
    splits = sum(w * (len(m) - 1) for w, m in zip(q.weights, a.memberships))
    ins = dels = 0
    left = [i for i, s in enumerate(q.sides) if s == LEFT]
    right = [j for j, s in enumerate(q.sides) if s != LEFT]
    for i in left:
        for j in right:
            share = masks[i] & masks[j]
            if j in q.adj[i]:
                if not share:
                    dels += q.weights[i] * q.weights[j]
            elif share:
                ins += q.weights[i] * q.weights[j]
    return CostBreakdown(splits, ins, dels)


# ---------------------------------------------------------------------------
# search


def _search_order(q: QuotientGraph) -> list[int]:
    """Greedy order: next class is the one most heavily tied to those placed."""
    n = len(q)
    if n == 0:
        return []
    wdeg = [sum(q.weights[j] for j in q.adj[i]) * q.weights[i] for i in range(n)]
    placed = [False] * n
    pull = [0] * n
    order = []
    for _ in range(n):
        best = max((i for i in range(n) if not placed[i]), key=lambda i: (pull[i], wdeg[i], -i))
        placed[best] = True
        order.append(best)
        for j in q.adj[best]:
            pull[j] += q.weights[best] * q.weights[j]
    return order


def _blocks(tied: int, ell: int) -> list[tuple[int, int]]:
    blocks = []
    start = 0
    for j in range(1, ell):
        if not tied >> (j - 1) & 1:
            blocks.append((start, j - start))
            start = j
    if ell:
        blocks.append((start, ell - start))
    return blocks


class _Search:
    def __init__(self, q: QuotientGraph, k: int, variant: Variant, ell: int | None = None):
        self.q = q
        self.k = k
        self.variant = Variant(variant)
        self.order = _search_order(q)
        self.ell = slot_count(len(q), k) if ell is None else ell
        n = len(self.order)
        self.weights = [q.weights[c] for c in self.order]
        self.multi_ok = [
            self.variant is Variant.TWO_SIDED or q.sides[c] == LEFT for c in self.order
        ]
        self.pairs: list[list[tuple[int, bool, int]]] = []
        for p, c in enumerate(self.order):
            row = []
            for qpos in range(p):
                d = self.order[qpos]
                if q.sides[d] != q.sides[c]:
                    row.append((qpos, d in q.adj[c], self.weights[p] * self.weights[qpos]))
            self.pairs.append(row)
        self.n = n
        self._opt_cache: dict[tuple[int, int], list[int]] = {}
        self.full = (1 << max(self.ell - 1, 0)) - 1
        self.nodes = 0
        self.leaves = 0
        self.pruned = 0

    def options(self, tied: int, max_size: int) -> list[int]:
        """Canonical slot masks: within each tie block, a prefix of the block."""
        key = (tied, max_size)
        cached = self._opt_cache.get(key)
        if cached is not None:
            return cached
        blocks = _blocks(tied, self.ell)
        out: list[tuple[int, tuple[int, ...], int]] = []

        def rec(b: int, size: int, mask: int, chosen: tuple[int, ...]) -> None:
            if b == len(blocks):
                if size:
                    out.append((size, chosen, mask))
                return
            start, length = blocks[b]
            for t in range(0, min(length, max_size - size) + 1):
                part = ((1 << t) - 1) << start
                rec(b + 1, size + t, mask | part, chosen + tuple(range(start, start + t)))

        rec(0, 0, 0, ())
        out.sort()
        res = [m for _, _, m in out]
        self._opt_cache[key] = res
        return res

    def step_cost(self, p: int, mask: int, masks: Sequence[int]) -> int:
        cost = self.weights[p] * (bin(mask).count("1") - 1)
        for qpos, adj, ww in self.pairs[p]:
            if mask & masks[qpos]:
                if not adj:
                    cost += ww
            elif adj:
                cost += ww
        return cost

    def max_size(self, p: int, budget: int) -> int:
        if not self.multi_ok[p]:
            return 1
        return 1 + max(budget, 0) // self.weights[p]

    # -- branch and bound ---------------------------------------------------

    def run(self, prefix: Sequence[int] = (), shared=None) -> tuple[int, tuple[int, ...]] | None:
        """Minimum-cost completion of ``prefix`` with cost <= k (first in DFS order)."""
        n = self.n
        masks = [0] * n
        tied = self.full
        cost = 0
        for p, m in enumerate(prefix):
            cost += self.step_cost(p, m, masks)
            masks[p] = m
            tied &= ~(m ^ (m >> 1))
        best: list = [self.k + 1, None]
        if cost > self.k:
            return None
        pairs = self.pairs
        weights = self.weights
        options = self.options
        ell_full = self.full

        def dfs(p: int, tied: int, cost: int) -> None:
            self.nodes += 1
            if p == n:
                self.leaves += 1
                if cost < best[0]:
                    best[0] = cost
                    best[1] = tuple(masks)
                    if shared is not None:
                        with shared.get_lock():
                            if cost < shared.value:
                                shared.value = cost
                return
            limit = best[0] - 1
            if shared is not None and shared.value < limit:
                limit = shared.value
            w = weights[p]
            row = pairs[p]
            budget = limit - cost
            size_cap = 1 if not self.multi_ok[p] else 1 + budget // w
            for m in options(tied, size_cap):
                c = cost + w * (bin(m).count("1") - 1)
                for qpos, adj, ww in row:
                    if m & masks[qpos]:
                        if not adj:
                            c += ww
                    elif adj:
                        c += ww
                if c > limit:
                    self.pruned += 1
                    continue
                masks[p] = m
                dfs(p + 1, tied & ~(m ^ (m >> 1)) & ell_full, c)
                masks[p] = 0
                # the bound may have tightened below us
                limit = best[0] - 1
                if shared is not None and shared.value < limit:
                    limit = shared.value
                if cost > limit:
                    return

        if len(prefix) == n:
            self.nodes += 1
            self.leaves += 1
            return (cost, tuple(masks))
        dfs(len(prefix), tied & ell_full, cost)
        if best[1] is None:
            return None
        return best[0], best[1]

    def prefixes(self, want: int) -> list[tuple[int, ...]]:
        """Shallow DFS-ordered frontier of feasible prefixes, at least ``want`` long if possible."""
        frontier: list[tuple[tuple[int, ...], int, int]] = [((), self.full, 0)]
        depth = 0
        while len(frontier) < want and depth < self.n:
            nxt = []
            for prefix, tied, cost in frontier:
                budget = self.k - cost
                for m in self.options(tied, self.max_size(depth, budget)):
                    c = cost + self.step_cost(depth, m, list(prefix) + [0] * (self.n - depth))
                    if c <= self.k:
                        nxt.append((prefix + (m,), tied & ~(m ^ (m >> 1)) & self.full, c))
            frontier = nxt
            depth += 1
        return [p for p, _, _ in frontier]

    def to_assignment(self, masks_in_order: Sequence[int]) -> Assignment:
        by_class = [0] * self.n
        for p, c in enumerate(self.order):
            by_class[c] = masks_in_order[p]
        return Assignment(self.ell, tuple(_slots(m) for m in canonical(by_class)))


def enumerate_candidates(q: QuotientGraph, k: int, variant: Variant) -> Iterator[Assignment]:
    """Stream all canonical assignments whose multi-slot classes weigh at most k in total."""
    search = _Search(q, k, variant)
    n = search.n
    masks = [0] * n

    def rec(p: int, tied: int, cweight: int) -> Iterator[Assignment]:
        if p == n:
            yield search.to_assignment(masks)
            return
        w = search.weights[p]
        cap = search.ell if search.multi_ok[p] and cweight + w <= k else 1
        for m in search.options(tied, cap):
            extra = w if m & (m - 1) else 0
            masks[p] = m
            yield from rec(p + 1, tied & ~(m ^ (m >> 1)) & search.full, cweight + extra)
        masks[p] = 0

    if n == 0:
        yield Assignment(search.ell, ())
        return
    yield from rec(0, search.full, 0)


# ---------------------------------------------------------------------------
# witnesses


def edits_for_memberships(g: BipartiteGraph, mem: Mapping[Vertex, int]) -> list[EditOp]:
    """Edit sequence realizing per-vertex slot masks: deletions, insertions, then splits."""
    dels: list[EditOp] = []
    for u, v in g.edges():
        if not mem[u] & mem[v]:
            dels.append(DeleteEdge(u, v))
    by_slot: dict[int, tuple[list[Vertex], list[Vertex]]] = {}
    for x in g.vertices():
        m, s = mem[x], 0
        if not m:
            raise ValueError(f"vertex {x} has an empty membership")
        while m:
            if m & 1:
                by_slot.setdefault(s, ([], []))[0 if x.side == LEFT else 1].append(x)
            m >>= 1
            s += 1
    inserted: set[tuple[Vertex, Vertex]] = set()
    for lefts, rights in by_slot.values():
        for u in lefts:
            nu = g.neighbors(u)
            for v in rights:
                if v not in nu:
                    inserted.add((u, v))
    ins: list[EditOp] = [InsertEdge(u, v) for u, v in sorted(inserted)]
    partners: dict[Vertex, set[Vertex]] = {}
    for u, v in inserted:
        partners.setdefault(u, set()).add(v)
        partners.setdefault(v, set()).add(u)

    # live copies per original vertex, each with its remaining slot mask
    copies: dict[Vertex, list[tuple[Vertex, int]]] = {}
    splits: list[EditOp] = []
    for x in g.vertices():
        sx = mem[x]
        if not sx & (sx - 1):
            continue
        nbrs = [y for y in g.neighbors(x) if mem[y] & sx]
        nbrs.extend(partners.get(x, ()))
        current = set()
        for y in nbrs:
            for cy, sy in copies.get(y, [(y, mem[y])]):
                if sy & sx:
                    current.add(cy)
        slot_of = {cy: sy for y in nbrs for cy, sy in copies.get(y, [(y, mem[y])])}
        own: list[tuple[Vertex, int]] = []
        cur, rest = x, sx
        while rest & (rest - 1):
            low = rest & -rest
            rest ^= low
            n1 = {cy for cy in current if slot_of[cy] & low}
            n2 = {cy for cy in current if slot_of[cy] & rest}
            splits.append(Split(cur, n1, n2))
            own.append((cur.child(1), low))
            current = n2
            cur = cur.child(2)
        own.append((cur, rest))
        copies[x] = own
    return dels + ins + splits


def reconstruct_witness(g: BipartiteGraph, p: CisPartition, a: Assignment) -> list[EditOp]:
    masks = a.masks()
    mem = {v: masks[p.class_of[v]] for v in g}
    return edits_for_memberships(g, mem)


def lift_memberships(
    g: BipartiteGraph, kernel_graph: BipartiteGraph, kernel_mem: Mapping[Vertex, int]
) -> dict[Vertex, int]:
    """Extend kernel slot masks to the full input graph.

    Twins dropped by class capping copy a surviving twin's mask; components
    dropped as finished bicliques each get a fresh slot.
    """
    mem: dict[Vertex, int] = {}
    top = 0
    for m in kernel_mem.values():
        top = max(top, m.bit_length())
    for cls in critical_independent_sets(g).classes:
        present = next((v for v in cls.members if v in kernel_graph), None)
        if present is not None:
            for v in cls.members:
                mem[v] = kernel_mem[present]
    for comp in g.components():
        if comp[0] in mem:
            continue
        if any(v in mem for v in comp):
            raise AssertionError("component only partly covered by the kernel")
        for v in comp:
            mem[v] = 1 << top
        top += 1
    return mem


# ---------------------------------------------------------------------------
# driver

_SHARED = None


def _worker_init(shared) -> None:
    global _SHARED
    _SHARED = shared


def _worker_run(args):
    q, k, variant, prefix = args
    search = _Search(q, k, variant)
    res = search.run(prefix, shared=_SHARED)
    return res, search.nodes, search.leaves, search.pruned


def solve(g: BipartiteGraph, k: int, variant: Variant = Variant.TWO_SIDED, threads: int = 1) -> SolveResult:
    if k < 0:
        raise ValueError("budget must be non-negative")
    variant = Variant(variant)
    t0 = time.perf_counter()
    kres = kernelize(g, k)
    stats: dict = {"kernel": kres.stats.as_dict(), "verdict": kres.verdict.value}

    def done(result: SolveResult) -> SolveResult:
        stats["wall_time"] = time.perf_counter() - t0
        result.stats = stats
        return result

    if k == 0:
        yes = is_bicluster(g)
        stats.update(candidates_explored=0, nodes=0, pruned_branches=0)
        return done(SolveResult(yes, 0 if yes else None, [] if yes else None, None, kres, [] if yes else None))
    if not kres.reduced:
        stats.update(candidates_explored=0, nodes=0, pruned_branches=0)
        return done(SolveResult(False, None, None, None, kres))

    kg = kres.graph
    assert kg is not None
    part = critical_independent_sets(kg)
    q = quotient_graph(kg, part)
    search = _Search(q, k, variant)
    stats.update(classes=len(q), slots=search.ell)
    if threads > 1 and search.n > 1:
        prefixes = search.prefixes(4 * threads)
        ctx = mp.get_context("fork")
        shared = ctx.Value("q", k)
        with ctx.Pool(threads, initializer=_worker_init, initargs=(shared,)) as pool:
            outs = pool.map(_worker_run, [(q, k, variant, pre) for pre in prefixes])
        found = None
        for res, nodes, leaves, pruned in outs:
            search.nodes += nodes
            search.leaves += leaves
            search.pruned += pruned
            if res is not None and (found is None or res[0] < found[0]):
                found = res
    else:
        found = search.run()
    stats.update(candidates_explored=search.leaves, nodes=search.nodes, pruned_branches=search.pruned)
    if found is None:
        return done(SolveResult(False, None, None, None, kres))

    cost, masks = found
    assignment = search.to_assignment(masks)
    witness = reconstruct_witness(kg, part, assignment)
    if len(witness) != cost or not verify_solution(kg, witness, k, variant):
        raise AssertionError("reconstructed witness does not match the assignment cost")
    kmasks = assignment.masks()
    kernel_mem = {v: kmasks[part.class_of[v]] for v in kg}
    lifted = edits_for_memberships(g, lift_memberships(g, kg, kernel_mem))
    if len(lifted) != cost:
        raise AssertionError("lifted witness length differs from the kernel witness")
    return done(SolveResult(True, cost, witness, assignment, kres, lifted))

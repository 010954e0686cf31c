"""Brute-force reference solvers for tiny instances.

``bfs_oracle`` explores raw edit sequences breadth first.  States are
bipartite graphs up to side-preserving isomorphism, which is sound because
neither the target property nor the available operations look at vertex
names, only at sides.

``assignment_oracle`` enumerates, per vertex, the set of clusters its copies
end up in and charges the per-vertex edit cost.  It knows nothing about twin
classes.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product

from .core import LEFT, BipartiteGraph, Variant


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    decision: bool
    opt_cost: int | None  # None means "greater than the budget"


BFS_MAX_VERTICES = 8
BFS_MAX_BUDGET = 3
ASSIGNMENT_MAX_VERTICES = 14


# ---------------------------------------------------------------------------
# raw edit-sequence search


def _to_rows(g: BipartiteGraph) -> tuple[tuple[int, ...], int]:
    left = sorted(g.left)
    right = sorted(g.right)
    col = {v: j for j, v in enumerate(right)}
    rows = tuple(sum(1 << col[v] for v in g.neighbors(u)) for u in left)
    return rows, len(right)


def _columns(rows: tuple[int, ...], nr: int) -> list[int]:
    return [sum(1 << i for i, r in enumerate(rows) if r >> j & 1) for j in range(nr)]


def _rows_bicluster(rows: tuple[int, ...], nr: int) -> bool:
    # every left vertex's neighborhood must be empty or equal to the
    # neighborhood of each of its neighbors' neighbors
    cols = _columns(rows, nr)
    for r in rows:
        if not r:
            continue
        j = (r & -r).bit_length() - 1
        for i in range(len(rows)):
            if cols[j] >> i & 1 and rows[i] != r:
                return False
        # all columns in r must see the same left set
        c = cols[j]
        rr = r
        while rr:
            b = rr & -rr
            if cols[b.bit_length() - 1] != c:
                return False
            rr ^= b
    return True


def _cells(vecs: list[int], other: list[int]) -> list[list[int]]:
    """Group indices by an isomorphism-invariant signature."""
    def deg(x: int) -> int:
        return bin(x).count("1")

    sig = []
    for i, v in enumerate(vecs):
        nd = sorted(deg(other[j]) for j in range(len(other)) if v >> j & 1)
        sig.append((deg(v), tuple(nd), i))
    sig.sort()
    cells: list[list[int]] = []
    last = None
    for d, nd, i in sig:
        if (d, nd) != last:
            cells.append([])
            last = (d, nd)
        cells[-1].append(i)
    return cells


def _canon(rows: tuple[int, ...], nr: int) -> tuple:
    """Canonical form under independent permutations of rows and of columns.

    The smaller side is permuted explicitly (only within signature cells);
    for each such order the other side is sorted, which canonizes it.
    """
    cols = _columns(rows, nr)
    nl = len(rows)
    if nl <= nr:
        perm_vecs, other_vecs, tag = list(rows), cols, 0
    else:
        perm_vecs, other_vecs, tag = cols, list(rows), 1
    cells = _cells(perm_vecs, other_vecs)
    best = None
    for choice in product(*(permutations(c) for c in cells)):
        order = [i for part in choice for i in part]
        key = tuple(sorted(sum(1 << p for p, i in enumerate(order) if o >> i & 1) for o in other_vecs))
        if best is None or key < best:
            best = key
    return (nl, nr, tag, best)


def _successors(rows: tuple[int, ...], nr: int, variant: Variant):
    nl = len(rows)
    for i in range(nl):
        for j in range(nr):
            yield rows[:i] + (rows[i] ^ (1 << j),) + rows[i + 1:], nr
    # left splits
    for i in range(nl):
        n = rows[i]
        for a, b in _covering_pairs(n):
            yield rows[:i] + (a,) + rows[i + 1:] + (b,), nr
    if variant is Variant.ONE_SIDED:
        return
    cols = _columns(rows, nr)
    for j in range(nr):
        n = cols[j]
        for a, b in _covering_pairs(n):
            new_rows = []
            for i, r in enumerate(rows):
                r &= ~(1 << j)
                if a >> i & 1:
                    r |= 1 << j
                if b >> i & 1:
                    r |= 1 << nr
                new_rows.append(r)
            yield tuple(new_rows), nr + 1


def _covering_pairs(n: int):
    """Unordered pairs (a, b) of subsets of n with a | b == n."""
    seen = set()
    sub = n
    while True:
        rest = n & ~sub
        extra = sub
        while True:
            b = rest | extra
            key = (min(sub, b), max(sub, b))
            if key not in seen:
                seen.add(key)
                yield key
            if extra == 0:
                break
            extra = (extra - 1) & sub
        if sub == 0:
            break
        sub = (sub - 1) & n


def bfs_oracle(g: BipartiteGraph, k: int, variant: Variant = Variant.TWO_SIDED, force: bool = False) -> OracleResult:
    variant = Variant(variant)
    if not force and (g.n > BFS_MAX_VERTICES or k > BFS_MAX_BUDGET):
        raise OracleSizeError(f"bfs_oracle is limited to {BFS_MAX_VERTICES} vertices and k <= {BFS_MAX_BUDGET}")
    start = _to_rows(g)
    if _rows_bicluster(*start):
        return OracleResult(True, 0)
    seen = {_canon(*start)}
    level = [start]
    for depth in range(1, k + 1):
        nxt = []
        for rows, nr in level:
            for s in _successors(rows, nr, variant):
                if _rows_bicluster(*s):
                    return OracleResult(True, depth)
                if depth == k:
                    continue
                key = _canon(*s)
                if key not in seen:
                    seen.add(key)
                    nxt.append(s)
        level = nxt
    return OracleResult(False, None)


# ---------------------------------------------------------------------------
# per-vertex cluster assignment search


def assignment_oracle(
    g: BipartiteGraph,
    k: int,
    variant: Variant = Variant.TWO_SIDED,
    allow_splits: bool = True,
    force: bool = False,
) -> OracleResult:
    variant = Variant(variant)
    if not force and g.n > ASSIGNMENT_MAX_VERTICES:
        raise OracleSizeError(f"assignment_oracle is limited to {ASSIGNMENT_MAX_VERTICES} vertices")
    # greedy order: next vertex has the most edges into the placed prefix
    order: list = []
    placed: set = set()
    remaining = sorted(g)
    while remaining:
        v = max(remaining, key=lambda x: (len(g.neighbors(x) & placed), g.degree(x)))
        remaining.remove(v)
        placed.add(v)
        order.append(v)
    n = len(order)
    can_split = [allow_splits and (variant is Variant.TWO_SIDED or v.side == LEFT) for v in order]
    earlier = [
        [(q, g.has_edge(order[p], order[q])) for q in range(p) if order[q].side != order[p].side]
        for p in range(n)
    ]
    sets = [0] * n
    best = [k + 1]
    # admissible bound: each unplaced vertex pays at least its cheapest
    # placement against the placed prefix (pairs among unplaced are free)
    later = [
        [(r, g.has_edge(order[p], order[r])) for r in range(p + 1, n) if order[r].side != order[p].side]
        for p in range(n)
    ]
    width = n + k + 2
    adj_placed = [0] * n
    score = [[0] * width for _ in range(n)]

    def bound(p: int, used: int) -> int:
        total = 0
        for r in range(p, n):
            top = max(score[r][:used], default=0)
            lb = adj_placed[r] - max(top, 0)
            if can_split[r] and lb > 1:
                lb = 1
            total += lb
        return total

    def place(p: int, m: int, sign: int) -> None:
        bits = [c for c in range(width) if m >> c & 1]
        for r, adj in later[p]:
            row = score[r]
            if adj:
                adj_placed[r] += sign
                for c in bits:
                    row[c] += sign
            else:
                for c in bits:
                    row[c] -= sign

    def options(used: int, extra: int):
        # any non-empty subset of used clusters plus t fresh ones, t >= 0
        for t in range(0, extra + 2):
            fresh = ((1 << t) - 1) << used
            sub = (1 << used) - 1
            while True:
                m = sub | fresh
                if m and bin(m).count("1") - 1 <= extra:
                    yield m, used + t
                if sub == 0:
                    break
                sub = (sub - 1) & ((1 << used) - 1)

    def dfs(p: int, used: int, cost: int) -> None:
        if p == n:
            if cost < best[0]:
                best[0] = cost
            return
        if cost + bound(p, used) >= best[0]:
            return
        extra = best[0] - 1 - cost if can_split[p] else 0
        for m, new_used in options(used, extra):
            c = cost + bin(m).count("1") - 1
            for q, adj in earlier[p]:
                if bool(m & sets[q]) != adj:
                    c += 1
            if c >= best[0]:
                continue
            sets[p] = m
            place(p, m, 1)
            dfs(p + 1, new_used, c)
            place(p, m, -1)
        sets[p] = 0

    dfs(0, 0, 0)
    if best[0] <= k:
        return OracleResult(True, best[0])
    return OracleResult(False, None)

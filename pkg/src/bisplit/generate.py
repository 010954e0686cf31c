"""Planted instances: disjoint bicliques, some overlapping left vertices, noise."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .core import BipartiteGraph, Vertex, L, R
from .solver import edits_for_memberships
from .textio import format_graph


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class GenSpec:
    left_clusters: int
    right_clusters: int
    min_size: int = 1
    max_size: int = 3
    overlap_vertices: int = 0
    noise_edits: int = 0
    seed: int = 0


@dataclass
class PlantedInstance:
    graph: BipartiteGraph
    memberships: dict[Vertex, int]  # planted slot mask per vertex
    cost: int  # length of the edit sequence realizing the planted clusters

    def clusters(self) -> list[list[Vertex]]:
        out: dict[int, list[Vertex]] = {}
        for v in sorted(self.memberships):
            m, s = self.memberships[v], 0
            while m:
                if m & 1:
                    out.setdefault(s, []).append(v)
                m >>= 1
                s += 1
        return [out[s] for s in sorted(out)]

    def to_text(self) -> str:
        comments = [f"planted certificate cost {self.cost}"]
        for i, members in enumerate(self.clusters(), start=1):
            comments.append(f"cluster {i}: " + " ".join(map(str, members)))
        return format_graph(self.graph, comments)


def gen_planted(spec: GenSpec) -> PlantedInstance:
    if min(spec.left_clusters, spec.right_clusters, spec.overlap_vertices, spec.noise_edits) < 0:
        raise SpecError("counts must be non-negative")
    if not 1 <= spec.min_size <= spec.max_size:
        raise SpecError("cluster sizes need 1 <= min_size <= max_size")
    rng = random.Random(spec.seed)
    nb = max(spec.left_clusters, spec.right_clusters)
    lparts: list[list[Vertex]] = []
    rparts: list[list[Vertex]] = []
    nl = nr = 0
    for i in range(nb):
        a = rng.randint(spec.min_size, spec.max_size) if i < spec.left_clusters else 0
        b = rng.randint(spec.min_size, spec.max_size) if i < spec.right_clusters else 0
        lparts.append([L(nl + j + 1) for j in range(a)])
        rparts.append([R(nr + j + 1) for j in range(b)])
        nl += a
        nr += b

    mem: dict[Vertex, int] = {}
    adj: dict[Vertex, set[Vertex]] = {}
    for i in range(nb):
        for v in lparts[i] + rparts[i]:
            mem[v] = 1 << i
        for u in lparts[i]:
            adj[u] = set(rparts[i])

    lefts = [v for part in lparts for v in part]
    if spec.overlap_vertices > len(lefts):
        raise SpecError(f"{spec.overlap_vertices} overlap vertices requested, only {len(lefts)} left vertices")
    for x in rng.sample(lefts, spec.overlap_vertices):
        home = mem[x].bit_length() - 1
        targets = [j for j in range(nb) if j != home and rparts[j]]
        if not targets:
            raise SpecError("overlap needs a second cluster with right vertices")
        j = rng.choice(targets)
        mem[x] |= 1 << j
        adj[x] |= set(rparts[j])

    rights = [v for part in rparts for v in part]
    if spec.noise_edits and not (lefts and rights):
        raise SpecError("noise needs vertices on both sides")
    for _ in range(spec.noise_edits):
        u, v = rng.choice(lefts), rng.choice(rights)
        adj[u] ^= {v}

    g = BipartiteGraph(lefts + rights, [(u, v) for u in lefts for v in sorted(adj[u])])
    cost = len(edits_for_memberships(g, mem))
    return PlantedInstance(g, mem, cost)

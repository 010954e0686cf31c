import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from bisplit.core import (
    BipartiteGraph,
    DeleteEdge,
    L,
    R,
    Split,
    Variant,
    apply,
    critical_independent_sets,
    is_bicluster,
    quotient_graph,
    verify_solution,
)
from bisplit.figures import load_fixture, load_fixture_witness
from bisplit.kernel import kernelize
from bisplit.solver import (
    Assignment,
    assignment_cost,
    canonical,
    enumerate_candidates,
    reconstruct_witness,
    slot_count,
    solve,
)

from graphs import graphs, random_graph

BOTH = [Variant.TWO_SIDED, Variant.ONE_SIDED]


def quotient_of(g):
    p = critical_independent_sets(g)
    return p, quotient_graph(g, p)


# --- enumeration


def fig1_kernel():
    return kernelize(load_fixture("fig1"), 1).graph


def test_fig1_stream_contains_split_assignment():
    p, q = quotient_of(fig1_kernel())
    # classes: {a1,a2}, {a3}, {a4,a5}, {b1,b2}, {b4,b5}
    assert [c.members for c in p.classes][1] == (L(3),)
    want = canonical(Assignment.from_lists(2, [[1], [1, 2], [2], [1], [2]]).masks())
    stream = [tuple(a.masks()) for a in enumerate_candidates(q, 1, Variant.TWO_SIDED)]
    assert want in stream


@pytest.mark.parametrize("variant", BOTH)
@pytest.mark.parametrize("name, k", [("fig1", 1), ("fig2a", 2), ("fig2b", 2)])
def test_stream_has_no_slot_relabelings(name, k, variant):
    _, q = quotient_of(kernelize(load_fixture(name), k).graph)
    seen = set()
    for a in enumerate_candidates(q, k, variant):
        masks = tuple(a.masks())
        assert canonical(masks) == masks
        assert masks not in seen
        seen.add(masks)
    assert seen


def test_stream_rejects_heavy_multi_slot_class():
    # fig2b capped at k=2 has four classes of weight 3 = k + 1
    _, q = quotient_of(kernelize(load_fixture("fig2b"), 2).graph)
    assert q.weights == (3, 3, 3, 3)
    for a in enumerate_candidates(q, 2, Variant.TWO_SIDED):
        assert all(len(m) == 1 for m in a.memberships)


def test_one_sided_stream_keeps_right_single():
    _, q = quotient_of(fig1_kernel())
    for a in enumerate_candidates(q, 1, Variant.ONE_SIDED):
        for side, m in zip(q.sides, a.memberships):
            if side == "R":
                assert len(m) == 1


def naive_min_cost(q, k, variant, ell):
    best = None
    subsets = [m for m in range(1, 1 << ell)]
    singles = [1 << s for s in range(ell)]
    pools = []
    for side in q.sides:
        pools.append(singles if variant is Variant.ONE_SIDED and side == "R" else subsets)
    for masks in product(*pools):
        cweight = sum(w for w, m in zip(q.weights, masks) if m & (m - 1))
        if cweight > k:
            continue
        a = Assignment(ell, tuple(frozenset(s + 1 for s in range(ell) if m >> s & 1) for m in masks))
        c = assignment_cost(q, a).total
        if best is None or c < best:
            best = c
    return best


@settings(max_examples=60, deadline=None)
@given(graphs(3, 3, min_side=1), st.integers(1, 2), st.sampled_from(BOTH))
def test_canonical_stream_minimum_matches_naive(g, k, variant):
    _, q = quotient_of(g)
    if len(q) > 4:
        q = quotient_of(g.induced(g.vertices()[:4]))[1]
    ell = slot_count(len(q), k)
    stream = [assignment_cost(q, a).total for a in enumerate_candidates(q, k, variant)]
    assert min(stream) == naive_min_cost(q, k, variant, ell)


# --- cost and reconstruction


def test_cost_fig1():
    _, q = quotient_of(fig1_kernel())
    c = assignment_cost(q, Assignment.from_lists(2, [[1], [1, 2], [2], [1], [2]]))
    assert (c.splits, c.insertions, c.deletions, c.total) == (1, 0, 0, 1)


def test_cost_fig2b():
    _, q = quotient_of(load_fixture("fig2b"))
    # classes A, C, B, D
    c = assignment_cost(q, Assignment.from_lists(2, [[1, 2], [1], [1], [2]]))
    assert (c.splits, c.insertions, c.deletions, c.total) == (7, 0, 0, 7)


FIG3_ASSIGNMENT = [[1], [1, 2], [2, 5], [3, 4], [4], [5], [1], [2], [3], [3], [4], [5]]


def test_cost_fig3():
    _, q = quotient_of(load_fixture("fig3"))
    c = assignment_cost(q, Assignment.from_lists(5, FIG3_ASSIGNMENT))
    assert (c.splits, c.insertions, c.deletions, c.total) == (3, 0, 1, 4)


def test_cost_zero_on_bicluster():
    g = BipartiteGraph.complete(2, 3).disjoint_union(BipartiteGraph.complete(1, 2))
    p, q = quotient_of(g)
    slot = {v: i + 1 for i, comp in enumerate(g.components()) for v in comp}
    a = Assignment.from_lists(2, [[slot[c.members[0]]] for c in p.classes])
    assert assignment_cost(q, a).total == 0
    assert reconstruct_witness(g, p, a) == []


@pytest.mark.parametrize(
    "lists", [[[1], [], [2], [1], [2]], [[1], [1, 3], [2], [1], [2]], [[1], [2], [1], [2]]]
)
def test_cost_rejects_malformed(lists):
    _, q = quotient_of(fig1_kernel())
    with pytest.raises(ValueError):
        assignment_cost(q, Assignment.from_lists(2, lists))


def test_reconstruct_fig1():
    g = load_fixture("fig1")
    p, _ = quotient_of(g)
    # full fig1 has the isolated R3 as a sixth class; it gets a slot of its own
    a = Assignment.from_lists(3, [[1], [1, 2], [2], [1], [3], [2]])
    assert [c.members for c in p.classes][4] == (R(3),)
    assert reconstruct_witness(g, p, a) == load_fixture_witness("fig1")


def test_reconstruct_fig3():
    g = load_fixture("fig3")
    p, q = quotient_of(g)
    w = reconstruct_witness(g, p, Assignment.from_lists(5, FIG3_ASSIGNMENT))
    assert w[0] == DeleteEdge(L(3), R(11))
    assert all(isinstance(op, Split) for op in w[1:]) and len(w) == 4
    assert {op.v for op in w[1:]} == {L(2), L(3), L(4)}
    assert verify_solution(g, w, 4, Variant.ONE_SIDED)


@st.composite
def graph_and_assignment(draw):
    g = draw(graphs(4, 4))
    p, q = quotient_of(g)
    ell = draw(st.integers(1, 4))
    mem = [draw(st.sets(st.integers(1, ell), min_size=1, max_size=ell)) for _ in range(len(q))]
    return g, p, q, Assignment.from_lists(ell, mem)


@settings(max_examples=150, deadline=None)
@given(graph_and_assignment())
def test_witness_length_equals_cost(case):
    g, p, q, a = case
    w = reconstruct_witness(g, p, a)
    assert len(w) == assignment_cost(q, a).total
    assert is_bicluster(apply(g, w))


# --- solve


@pytest.mark.parametrize("variant", BOTH)
def test_solve_fig1(variant):
    g = load_fixture("fig1")
    res = solve(g, 1, variant)
    assert res.decision and res.opt_cost == 1
    assert res.lifted_witness == load_fixture_witness("fig1")
    assert not solve(g, 0, variant).decision


def test_solve_fig3_one_sided():
    g = load_fixture("fig3")
    res = solve(g, 4, Variant.ONE_SIDED)
    assert res.decision and res.opt_cost == 4
    assert not solve(g, 3, Variant.ONE_SIDED).decision


@pytest.mark.parametrize("variant", BOTH)
def test_solve_fig2a(variant):
    g = load_fixture("fig2a")
    assert solve(g, 2, variant).opt_cost == 2
    assert not solve(g, 1, variant).decision


def test_solve_fig2b():
    g = load_fixture("fig2b")
    assert solve(g, 7).opt_cost == 7
    assert not solve(g, 6).decision
    assert solve(g.without([L(1)]), 6).opt_cost == 6


def test_solve_fig2b_one_sided():
    # same trend as the oracle-checked crossed family in test_oracle.py
    g = load_fixture("fig2b")
    one = Variant.ONE_SIDED
    assert solve(g, 7, one).opt_cost == 7
    assert solve(g.without([L(1)]), 7, one).opt_cost == 6
    assert solve(g.without([R(1)]), 7, one).opt_cost == 7


def test_solve_stats_keys():
    res = solve(load_fixture("fig3"), 4)
    for key in ("kernel", "candidates_explored", "pruned_branches", "wall_time", "nodes"):
        assert key in res.stats
    assert res.stats["kernel"]["classes_after"] == 12


def test_solve_negative_budget():
    with pytest.raises(ValueError):
        solve(load_fixture("fig1"), -1)


def check_result(g, k, variant, res):
    if res.decision:
        assert res.opt_cost <= k
        kg = res.kernel.graph
        assert verify_solution(kg if kg is not None and k else g, res.witness, k, variant)
        assert verify_solution(g, res.lifted_witness, k, variant)
        assert len(res.witness) == len(res.lifted_witness) == res.opt_cost


@settings(max_examples=60, deadline=None)
@given(graphs(4, 4), st.sampled_from(BOTH))
def test_monotone_and_dominance(g, variant):
    costs = {}
    for v in BOTH:
        prev = False
        for k in range(4):
            res = solve(g, k, v)
            check_result(g, k, v, res)
            assert res.decision or not prev
            prev = res.decision
            if res.decision and v not in costs:
                costs[v] = res.opt_cost
    if Variant.ONE_SIDED in costs:
        assert costs[Variant.ONE_SIDED] >= costs[Variant.TWO_SIDED]


def test_solve_is_deterministic_across_threads():
    rng = random.Random(3)
    cases = [(load_fixture("fig3"), 4), (load_fixture("fig2b"), 7)]
    cases += [(random_graph(rng, 5, 5, 0.5), 4) for _ in range(4)]
    for g, k in cases:
        one = solve(g, k)
        again = solve(g, k)
        many = solve(g, k, threads=2)
        assert one.witness == again.witness == many.witness
        assert one.lifted_witness == many.lifted_witness
        assert one.opt_cost == many.opt_cost


def test_lifting_restores_removed_vertices():
    # a P4 whose end class has five twins, plus a finished biclique
    ends = [L(i) for i in range(1, 6)]
    c, b, d = L(6), R(1), R(2)
    g = BipartiteGraph(ends + [c, b, d], [(a, b) for a in ends] + [(c, b), (c, d)])
    g = g.disjoint_union(BipartiteGraph.complete(2, 2))
    res = solve(g, 1)
    st = res.kernel.stats
    assert st.vertices_removed_rule1 == 4 and st.vertices_removed_rule2 == 3
    assert res.opt_cost == 1 and res.kernel.graph.n == 5
    assert verify_solution(g, res.lifted_witness, 1, Variant.TWO_SIDED)

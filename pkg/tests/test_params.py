from fractions import Fraction
from itertools import combinations, permutations, product

import pytest
from hypothesis import given, settings

from gulf import params as P
from gulf.constructions import build_grid_family, shift_graph
from gulf.graph import (DiGraph, Graph, complete_bipartite, complete_graph, cycle_graph, path_graph,
                        star_graph)

from strategies import forests, graphs


def _brute_chi(g):
    for k in range(1, g.n + 1):
        for col in product(range(k), repeat=g.n):
            if all(col[u] != col[v] for u, v in g.edges):
                return k
    return 0


def _brute_mad(g):
    best = Fraction(0)
    for k in range(1, g.n + 1):
        for S in combinations(range(g.n), k):
            e = sum(1 for u, v in g.edges if u in S and v in S)
            best = max(best, Fraction(2 * e, k))
    return best


def _brute_nash_williams(g):
    best = 0
    for k in range(2, g.n + 1):
        for S in combinations(range(g.n), k):
            e = sum(1 for u, v in g.edges if u in S and v in S)
            best = max(best, -(-e // (k - 1)))
    return best


def _brute_treewidth(g):
    if g.n == 0:
        return -1
    best = g.n - 1
    for order in permutations(range(g.n)):
        adj = [set(a) for a in g.adj]
        width = 0
        alive = set(range(g.n))
        for v in order:
            nb = adj[v] & alive
            width = max(width, len(nb))
            for a, b in combinations(nb, 2):
                adj[a].add(b)
                adj[b].add(a)
            alive.discard(v)
        best = min(best, width)
    return best


@pytest.mark.parametrize("g,chi", [(complete_graph(4), 4), (cycle_graph(5), 3), (path_graph(4), 2), (Graph(3), 1)])
def test_chromatic_examples(g, chi):
    r = P.chromatic_number(g)
    assert r.value == chi
    assert P.is_proper_coloring(g, r.coloring)


def test_chromatic_of_small_shift_graph():
    g = shift_graph(DiGraph.complete(3))
    assert P.chromatic_number(g).value == 3


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=7))
def test_chromatic_against_brute_force(g):
    r = P.chromatic_number(g)
    assert r.value == _brute_chi(g)
    assert P.is_proper_coloring(g, r.coloring)
    assert max(r.coloring, default=-1) + 1 == r.value


def test_chromatic_budget_reports_undecided():
    g = Graph(9, [(i, j) for i in range(9) for j in range(i + 1, 9) if (i + j) % 3])
    r = P.chromatic_number(g, node_limit=1)
    if r.decided:
        assert r.value == _brute_chi(g)
    else:
        assert r.lower <= _brute_chi(g) <= r.upper


@pytest.mark.parametrize("g,m", [(cycle_graph(5), Fraction(2)), (complete_graph(4), Fraction(3)),
                                 (star_graph(4), Fraction(8, 5))])
def test_mad_examples(g, m):
    assert P.mad(g) == m


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=8))
def test_mad_both_routes_and_witness(g):
    brute = P.mad(g, brute_limit=100)
    flow = P.mad(g, brute_limit=0)
    assert brute == flow == _brute_mad(g)
    value, S = P.mad_with_witness(g, brute_limit=0)
    e = sum(1 for u, v in g.edges if u in S and v in S)
    assert Fraction(2 * e, len(S)) == value
    assert value >= Fraction(2 * g.m, g.n)


@pytest.mark.parametrize("g,a", [(path_graph(6), 1), (complete_graph(5), 3), (complete_graph(4), 2)])
def test_arboricity_examples(g, a):
    assert P.arboricity_nash_williams(g) == a


def test_arboricity_of_edgeless_graph_is_zero():
    assert P.arboricity_nash_williams(Graph(4)) == 0


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=8))
def test_arboricity_both_routes(g):
    expect = _brute_nash_williams(g)
    assert P.arboricity_nash_williams(g, brute_limit=100) == expect
    assert P.arboricity_nash_williams(g, brute_limit=0) == expect


@pytest.mark.parametrize("g,w", [(complete_graph(5), 4), (cycle_graph(5), 2), (star_graph(6), 1),
                                 (complete_bipartite(3, 3), 3)])
def test_treewidth_examples(g, w):
    width, td = P.treewidth(g)
    assert width == w
    assert td.is_valid(g)
    assert td.optimal


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6))
def test_treewidth_against_elimination_orders(g):
    width, td = P.treewidth(g)
    assert td.is_valid(g)
    assert width == _brute_treewidth(g)


@settings(max_examples=40, deadline=None)
@given(forests())
def test_forests_have_treewidth_one(g):
    width, td = P.treewidth(g)
    assert td.is_valid(g)
    assert width == (1 if g.m else 0)


def test_large_cycle_above_limit_is_still_certified_by_lower_bound():
    g = cycle_graph(30)
    width, td = P.treewidth(g, limit=10)
    assert td.is_valid(g)
    assert width == 2 and td.optimal


def test_tree_decomposition_problems_are_reported():
    g = path_graph(3)
    bad = P.TreeDecomposition(path_graph(2), (frozenset({0, 1}), frozenset({2})))
    assert any("edge" in p for p in bad.problems(g))


def test_planarity():
    assert P.is_planar(complete_graph(4))
    assert not P.is_planar(complete_graph(5))
    assert P.is_planar(build_grid_family(4).host)


def test_structural_predicates_examples():
    s = P.structural_predicates(star_graph(5))
    assert s.is_star and s.is_star_forest and s.is_forest
    hairy = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4)])
    assert P.structural_predicates(hairy).is_hairy_cycle
    p4 = P.structural_predicates(path_graph(4))
    assert p4.is_linear_forest and p4.is_forest and not p4.is_star
    s = P.structural_predicates(complete_bipartite(2, 3))
    assert s.is_bipartite and s.is_complete_bipartite and s.bipartition is not None


@pytest.mark.parametrize("g,k,ok", [(cycle_graph(4), 1, True), (complete_graph(4), 1, False), (path_graph(7), 1, True)])
def test_orientation_examples(g, k, ok):
    o = P.orientation_with_max_outdegree(g, k)
    assert (o is not None) == ok


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7))
def test_orientation_matches_density_condition(g):
    for k in range(0, 4):
        o = P.orientation_with_max_outdegree(g, k)
        dense = any(sum(1 for u, v in g.edges if u in S and v in S) > k * len(S)
                    for r in range(1, g.n + 1) for S in combinations(range(g.n), r))
        assert (o is None) == dense
        if o is not None:
            out = [0] * g.n
            for e, (tail, head) in o.items():
                assert {tail, head} == set(e)
                out[tail] += 1
            assert max(out, default=0) <= k


def test_ceil_log2():
    assert [P.ceil_log2(k) for k in range(1, 10)] == [0, 1, 2, 2, 3, 3, 3, 3, 4]

from itertools import combinations, permutations

import networkx as nx
import pytest
from hypothesis import given, settings
from networkx.algorithms.isomorphism import GraphMatcher

from gulf.graph import (DiGraph, Graph, GraphFormatError, complete_graph, cycle_graph, cycle_lengths,
                        disjoint_union, enumerate_copies, from_graph6, is_isomorphic,
                        is_weak_induced_subgraph, parse_digraph, parse_graph, path_graph,
                        serialize_digraph, serialize_graph, star_graph, summands, to_graph6)

from strategies import graphs


def test_graph_normalises_edges():
    g = Graph(3, [(2, 0), (0, 2), (1, 2)])
    assert g.edges == frozenset({(0, 2), (1, 2)})
    assert g.m == 2


@pytest.mark.parametrize("bad", [[(0, 0)], [(0, 3)], [(-1, 0)]])
def test_graph_rejects_bad_edges(bad):
    with pytest.raises(ValueError):
        Graph(3, bad)


def test_labels_do_not_affect_equality():
    assert Graph(2, [(0, 1)], {0: "a"}) == Graph(2, [(0, 1)], {1: "b"})


def test_graph6_roundtrip_known_string():
    g = from_graph6("D?{")
    assert g.n == 5
    assert to_graph6(g) == "D?{"


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=12))
def test_roundtrip_both_formats(g):
    assert parse_graph(serialize_graph(g, "graph6"), "graph6") == g
    assert parse_graph(serialize_graph(g, "edge-list"), "edge-list") == g


def test_edge_list_path():
    assert parse_graph("n 3\n0 1\n1 2", "edge-list") == path_graph(3)


@pytest.mark.parametrize("text", ["n 2\n0 0", "n 2\n0 1\n1 0", "n 2\n0 2", "3\n0 1", "n 2\n0 x", "n 3\n0 1 2"])
def test_edge_list_rejects(text):
    with pytest.raises(GraphFormatError):
        parse_graph(text, "edge-list")


def test_graph6_rejects_garbage():
    with pytest.raises(GraphFormatError):
        parse_graph("\x01\x02", "graph6")


def test_digraph_roundtrip_and_loops():
    d = DiGraph(3, [(0, 1), (1, 0), (1, 2)])
    assert parse_digraph(serialize_digraph(d)) == d
    with pytest.raises(ValueError):
        DiGraph(2, [(1, 1)])


def test_disjoint_union_examples():
    two = disjoint_union([complete_graph(2), complete_graph(2)])
    assert (two.n, two.m) == (4, 2)
    assert disjoint_union([]).n == 0
    g = disjoint_union([complete_graph(3), complete_graph(2)])
    assert (g.n, g.m) == (5, 4)
    assert [h.n for h in summands(g)] == [3, 2]


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=5), graphs(max_n=5), graphs(max_n=5))
def test_disjoint_union_recovers_summands(a, b, c):
    g = disjoint_union([a, b, c])
    assert all(is_isomorphic(x, y) for x, y in zip(summands(g), [a, b, c]))
    assert g.m == a.m + b.m + c.m


def _brute_copies(p, h, induced):
    keys = set()
    for vs in permutations(range(h.n), p.n):
        if all(h.has_edge(vs[u], vs[v]) for u, v in p.edges):
            if induced and any(h.has_edge(vs[a], vs[b]) and not p.has_edge(a, b)
                               for a, b in combinations(range(p.n), 2)):
                continue
            keys.add((frozenset(vs), frozenset(tuple(sorted((vs[u], vs[v]))) for u, v in p.edges)))
    return keys


def test_triangle_copies_in_k4():
    assert len(enumerate_copies(complete_graph(3), complete_graph(4))) == 4


def test_c4_in_k7_and_k2_in_edgeless():
    assert enumerate_copies(cycle_graph(4), complete_graph(7))
    assert enumerate_copies(complete_graph(2), Graph(5)) == []


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=4), graphs(max_n=6))
def test_copies_match_brute_force(p, h):
    for mode in ("subgraph", "induced"):
        got = enumerate_copies(p, h, mode)
        keys = {(frozenset(e), frozenset(tuple(sorted((e[u], e[v]))) for u, v in p.edges)) for e in got}
        assert len(keys) == len(got)
        assert keys == _brute_copies(p, h, mode == "induced")
        assert got == sorted(got)


@settings(max_examples=60, deadline=None)
@given(graphs(min_n=1, max_n=4), graphs(max_n=6))
def test_copy_count_against_networkx_monomorphisms(p, h):
    # networkx counts labelled monomorphisms; each copy accounts for |Aut(p)| of them
    if p.n > h.n:
        return
    auts = sum(1 for _ in GraphMatcher(p.to_networkx(), p.to_networkx()).isomorphisms_iter())
    mono = sum(1 for _ in GraphMatcher(h.to_networkx(), p.to_networkx()).subgraph_monomorphisms_iter())
    assert mono == auts * len(enumerate_copies(p, h))


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=4), graphs(max_n=6))
def test_induced_copies_are_subgraph_copies(p, h):
    assert set(enumerate_copies(p, h, "induced")) <= set(enumerate_copies(p, h, "subgraph"))


def test_weak_induced_examples():
    host = star_graph(4)
    assert is_weak_induced_subgraph(star_graph(2), host, (0, 1, 2))
    assert not is_weak_induced_subgraph(path_graph(3), complete_graph(3), (0, 1, 2))
    two_k2 = Graph(4, [(0, 1), (2, 3)])
    assert is_weak_induced_subgraph(two_k2, cycle_graph(4), (0, 1, 2, 3))


def test_weak_induced_rejects_non_embedding():
    with pytest.raises(ValueError):
        is_weak_induced_subgraph(complete_graph(2), Graph(2), (0, 1))


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7))
def test_cycle_lengths_against_networkx(g):
    expect = {len(c) for c in nx.simple_cycles(g.to_networkx())}
    assert cycle_lengths(g) == expect

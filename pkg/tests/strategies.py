"""Hypothesis strategies for small graphs."""

from itertools import combinations

from hypothesis import strategies as st

from gulf.graph import Graph


@st.composite
def graphs(draw, min_n=1, max_n=6, min_edges=0):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=min(min_edges, len(pairs)))
                  if pairs else st.just([]))
    return Graph(n, chosen)


@st.composite
def forests(draw, min_n=2, max_n=14):
    n = draw(st.integers(min_n, max_n))
    edges = []
    for v in range(1, n):
        if draw(st.booleans()) or v == 1:
            edges.append((draw(st.integers(0, v - 1)), v))
    return Graph(n, edges)

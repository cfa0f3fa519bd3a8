"""Simple undirected graphs, digraphs, file formats and copy enumeration."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Mapping, Sequence

import networkx as nx


class GraphFormatError(ValueError):
    pass


def _norm(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Vertices are 0..n-1. Labels and summand blocks never affect equality."""

    n: int
    edges: frozenset = frozenset()
    labels: Mapping[int, str] = field(default_factory=dict, compare=False, hash=False, repr=False)
    blocks: tuple = field(default=(), compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("negative vertex count")
        es = set()
        for e in self.edges:
            u, v = e
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {e} out of range for n={self.n}")
            es.add(_norm(u, v))
        object.__setattr__(self, "edges", frozenset(es))

    @cached_property
    def adj(self) -> tuple[frozenset, ...]:
        nb = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nb[u].add(v)
            nb[v].add(u)
        return tuple(frozenset(s) for s in nb)

    @cached_property
    def edge_list(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self.edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm(u, v) in self.edges

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        out = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [s], [s]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        stack.append(y)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return self.n <= 1 or len(self.components()) == 1

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph on `vertices` (sorted); returns it with the new->old vertex map."""
        vs = tuple(sorted(set(vertices)))
        idx = {v: i for i, v in enumerate(vs)}
        es = [(idx[u], idx[v]) for u, v in self.edges if u in idx and v in idx]
        labels = {idx[v]: t for v, t in self.labels.items() if v in idx}
        return Graph(len(vs), es, labels), vs

    def edge_subgraph(self, edges: Iterable[tuple[int, int]]) -> tuple["Graph", tuple[int, ...]]:
        """Graph formed by `edges` on their endpoints, with the new->old vertex map."""
        es = [_norm(*e) for e in edges]
        for e in es:
            if e not in self.edges:
                raise ValueError(f"{e} is not an edge")
        vs = tuple(sorted({x for e in es for x in e}))
        idx = {v: i for i, v in enumerate(vs)}
        return Graph(len(vs), [(idx[u], idx[v]) for u, v in es]), vs

    def without_isolated(self) -> tuple["Graph", tuple[int, ...]]:
        return self.induced(v for v in range(self.n) if self.adj[v])

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Vertex v becomes perm[v]."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        nodes = sorted(g.nodes())
        idx = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), [(idx[u], idx[v]) for u, v in g.edges()])

    def __str__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class DiGraph:
    n: int
    arcs: frozenset = frozenset()

    def __post_init__(self):
        arcs = set()
        for u, v in self.arcs:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc {(u, v)} out of range")
            arcs.add((u, v))
        object.__setattr__(self, "arcs", frozenset(arcs))

    def underlying(self) -> Graph:
        return Graph(self.n, self.arcs)

    @classmethod
    def complete(cls, n: int) -> "DiGraph":
        return cls(n, [(u, v) for u in range(n) for v in range(n) if u != v])


# ---------------------------------------------------------------- builders

def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycles need at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with centre 0."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def empty_graph(n: int) -> Graph:
    return Graph(n)


def disjoint_union(gs: Sequence[Graph]) -> Graph:
    """Disjoint union; `blocks` records the vertex range of each summand."""
    edges, labels, blocks = [], {}, []
    off = 0
    for g in gs:
        edges.extend((u + off, v + off) for u, v in g.edges)
        labels.update({v + off: t for v, t in g.labels.items()})
        blocks.append((off, off + g.n))
        off += g.n
    return Graph(off, edges, labels, tuple(blocks))


def summands(g: Graph) -> list[Graph]:
    if not g.blocks:
        return [g]
    return [g.induced(range(a, b))[0] for a, b in g.blocks]


def component_graphs(g: Graph) -> list[tuple[Graph, tuple[int, ...]]]:
    return [g.induced(c) for c in g.components()]


# ---------------------------------------------------------------- formats

def to_graph6(g: Graph) -> str:
    return nx.to_graph6_bytes(g.to_networkx(), nodes=range(g.n), header=False).decode().strip()


def from_graph6(text: str | bytes) -> Graph:
    if isinstance(text, str):
        text = text.encode()
    text = text.strip()
    if text.startswith(b">>graph6<<"):
        text = text[len(b">>graph6<<"):]
    if not text:
        raise GraphFormatError("empty graph6 string")
    try:
        g = nx.from_graph6_bytes(text)
    except (nx.NetworkXError, ValueError, IndexError) as exc:
        raise GraphFormatError(f"bad graph6: {exc}") from exc
    return Graph(g.number_of_nodes(), g.edges())


def _parse_pairs(text: str, what: str) -> tuple[int, list[tuple[int, int]]]:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GraphFormatError("missing header line 'n <count>'")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "n" or not head[1].isdigit():
        raise GraphFormatError(f"malformed header {lines[0]!r}")
    n = int(head[1])
    pairs = []
    for k, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphFormatError(f"line {k}: expected two vertex indices, got {ln!r}")
        u, v = int(parts[0]), int(parts[1])
        if u >= n or v >= n:
            raise GraphFormatError(f"line {k}: vertex index out of range (n={n})")
        if u == v:
            raise GraphFormatError(f"line {k}: loop at vertex {u} rejected")
        pairs.append((u, v))
    return n, pairs


def parse_graph(text: str | bytes, format: str = "graph6") -> Graph:
    if isinstance(text, bytes):
        text = text.decode()
    if format == "graph6":
        return from_graph6(text)
    if format != "edge-list":
        raise ValueError(f"unknown format {format!r}")
    n, pairs = _parse_pairs(text, "edge")
    seen = set()
    for u, v in pairs:
        e = _norm(u, v)
        if e in seen:
            raise GraphFormatError(f"duplicate edge {e} rejected")
        seen.add(e)
    return Graph(n, seen)


def serialize_graph(g: Graph, format: str = "graph6") -> str:
    if format == "graph6":
        return to_graph6(g)
    if format != "edge-list":
        raise ValueError(f"unknown format {format!r}")
    return "\n".join([f"n {g.n}"] + [f"{u} {v}" for u, v in g.edge_list]) + "\n"


def parse_digraph(text: str | bytes) -> DiGraph:
    if isinstance(text, bytes):
        text = text.decode()
    n, pairs = _parse_pairs(text, "arc")
    if len(set(pairs)) != len(pairs):
        raise GraphFormatError("duplicate arc rejected")
    return DiGraph(n, pairs)


def serialize_digraph(d: DiGraph) -> str:
    return "\n".join([f"n {d.n}"] + [f"{u} {v}" for u, v in sorted(d.arcs)]) + "\n"


def read_graph_file(path) -> Graph:
    with open(path, "rb") as fh:
        data = fh.read().decode()
    first = data.lstrip().split("\n", 1)[0].strip()
    fmt = "edge-list" if first.startswith("n ") or first == "n" else "graph6"
    return parse_graph(data, fmt)


# ---------------------------------------------------------------- isomorphism

def is_isomorphic(a: Graph, b: Graph) -> bool:
    if a.n != b.n or a.m != b.m:
        return False
    if sorted(map(len, a.adj)) != sorted(map(len, b.adj)):
        return False
    return nx.is_isomorphic(a.to_networkx(), b.to_networkx())


def find_isomorphism(a: Graph, b: Graph) -> tuple[int, ...] | None:
    """A map a-vertex -> b-vertex, or None."""
    if a.n != b.n or a.m != b.m:
        return None
    gm = nx.algorithms.isomorphism.GraphMatcher(a.to_networkx(), b.to_networkx())
    for iso in gm.isomorphisms_iter():
        return tuple(iso[v] for v in range(a.n))
    return None


def invariant_key(g: Graph) -> tuple:
    return (g.n, g.m, tuple(sorted(map(len, g.adj))))


def automorphisms(g: Graph, cap: int = 20000) -> list[tuple[int, ...]] | None:
    """All automorphisms as permutation tuples, or None if there are more than `cap`."""
    gm = nx.algorithms.isomorphism.GraphMatcher(g.to_networkx(), g.to_networkx())
    out = []
    for iso in gm.isomorphisms_iter():
        out.append(tuple(iso[v] for v in range(g.n)))
        if len(out) > cap:
            return None
    return out


# ---------------------------------------------------------------- copies

def _twin_classes(p: Graph) -> list[int | None]:
    """prev[v] = the previous vertex with the same open neighbourhood, if any."""
    prev: list[int | None] = [None] * p.n
    last: dict[frozenset, int] = {}
    for v in range(p.n):
        key = p.adj[v]
        if key in last:
            prev[v] = last[key]
        last[key] = v
    return prev


def _search_order(p: Graph) -> list[int]:
    order, placed = [], set()
    for comp in sorted(p.components(), key=lambda c: (-len(c), c)):
        start = max(comp, key=lambda v: (p.degree(v), -v))
        order.append(start)
        placed.add(start)
        while len(placed & set(comp)) < len(comp):
            best = max((v for v in comp if v not in placed),
                       key=lambda v: (len(p.adj[v] & placed), p.degree(v), -v))
            order.append(best)
            placed.add(best)
    return order


def embeddings(pattern: Graph, host: Graph, induced: bool = False,
               fixed: Mapping[int, int] | None = None,
               forbidden: Iterable[int] = (), twin_break: bool = True) -> Iterator[tuple[int, ...]]:
    """Injective edge-preserving maps pattern -> host by backtracking.

    With twin_break, pattern vertices with equal neighbourhoods get increasing
    images, which removes exactly the twin automorphisms."""
    n = pattern.n
    if n > host.n:
        return
    forbidden = set(forbidden)
    fixed = dict(fixed or {})
    prev = _twin_classes(pattern) if twin_break else [None] * n
    order = _search_order(pattern)
    pos = {v: i for i, v in enumerate(order)}
    back = [[w for w in pattern.adj[v] if pos[w] < pos[v]] for v in order]
    nonback = [[w for w in range(n) if pos[w] < pos[v] and w not in pattern.adj[v]] for v in order]
    pdeg = [pattern.degree(v) for v in range(n)]
    hadj = host.adj
    img = [-1] * n
    used = set()

    def candidates(i):
        v = order[i]
        if v in fixed:
            return [fixed[v]]
        if back[i]:
            w = min(back[i], key=lambda x: len(hadj[img[x]]))
            return sorted(hadj[img[w]])
        return range(host.n)

    def rec(i):
        if i == n:
            yield tuple(img)
            return
        v = order[i]
        tw = prev[v]
        for x in candidates(i):
            if x in used or x in forbidden or len(hadj[x]) < pdeg[v]:
                continue
            if tw is not None and img[tw] != -1 and x < img[tw]:
                continue
            ok = all(img[w] in hadj[x] for w in back[i])
            if ok and induced:
                ok = not any(img[w] in hadj[x] for w in nonback[i])
            if not ok:
                continue
            img[v] = x
            used.add(x)
            yield from rec(i + 1)
            used.discard(x)
            img[v] = -1

    yield from rec(0)


def image_key(pattern: Graph, emb: Sequence[int]) -> tuple:
    return (frozenset(emb), frozenset(_norm(emb[u], emb[v]) for u, v in pattern.edges))


def enumerate_copies(pattern: Graph, host: Graph, mode: str = "subgraph",
                     limit: int | None = None) -> list[tuple[int, ...]]:
    """Copies of pattern in host, one map per copy (the lexicographically
    smallest), sorted lexicographically."""
    if mode not in ("subgraph", "induced"):
        raise ValueError(f"unknown mode {mode!r}")
    best: dict[tuple, tuple[int, ...]] = {}
    for emb in embeddings(pattern, host, induced=(mode == "induced")):
        k = image_key(pattern, emb)
        if k not in best or emb < best[k]:
            best[k] = emb
        if limit is not None and len(best) > limit:
            break
    return sorted(best.values())


def has_copy(pattern: Graph, host: Graph, induced: bool = False, **kw) -> bool:
    return next(embeddings(pattern, host, induced=induced, **kw), None) is not None


def is_weak_induced_subgraph(sub: Graph, host: Graph, embedding: Sequence[int]) -> bool:
    if len(embedding) != sub.n or len(set(embedding)) != sub.n:
        raise ValueError("embedding is not injective on the vertices of sub")
    for u, v in sub.edges:
        if not host.has_edge(embedding[u], embedding[v]):
            raise ValueError(f"embedding does not preserve edge {(u, v)}")
    for comp in sub.components():
        for a, b in combinations(comp, 2):
            if host.has_edge(embedding[a], embedding[b]) and not sub.has_edge(a, b):
                return False
    return True


def is_induced_embedding(sub: Graph, host: Graph, embedding: Sequence[int]) -> bool:
    for u, v in sub.edges:
        if not host.has_edge(embedding[u], embedding[v]):
            return False
    return all(sub.has_edge(a, b) == host.has_edge(embedding[a], embedding[b])
               for a, b in combinations(range(sub.n), 2))


def cycle_lengths(g: Graph, max_length: int | None = None) -> set[int]:
    """Lengths of simple cycles, searched block by block."""
    out = set()
    bound = max_length or g.n
    nxg = g.to_networkx()
    for block in nx.biconnected_components(nxg):
        if len(block) < 3:
            continue
        sub = nxg.subgraph(block)
        for cyc in nx.simple_cycles(sub, length_bound=bound):
            out.add(len(cyc))
    return out

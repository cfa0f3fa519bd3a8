"""Explicit graph families with hand-built covers.

Every builder returns graphs together with a certificate that passes
verify_cover against the family's guest class."""

from __future__ import annotations

from dataclasses import dataclass, field

from .classes import ClassFlags, GuestClass, finite_class, registry_lookup
from .covers import Cover, Guest, make_cover
from .graph import DiGraph, Graph, complete_graph, star_graph


@dataclass
class Family:
    name: str
    param: int
    host: Graph
    guests: list[Graph]
    cover: Cover
    guest_class: GuestClass
    extras: dict = field(default_factory=dict)


class _Builder:
    """Accumulates a labelled graph vertex by vertex."""

    def __init__(self):
        self.ids: dict = {}
        self.edges: list[tuple[int, int]] = []

    def v(self, key) -> int:
        if key not in self.ids:
            self.ids[key] = len(self.ids)
        return self.ids[key]

    def e(self, a, b):
        self.edges.append((self.v(a), self.v(b)))

    def graph(self) -> Graph:
        return Graph(len(self.ids), self.edges, {i: str(k) for k, i in self.ids.items()})


# ---------------------------------------------------------------- treewidth separation

def _hat_guest(t: int, i: int, b: _Builder, tag, root=None) -> None:
    """Path p_0..p_2t with t leaves at each end and one pendant at p_i.
    `root`, when given, is the key used for p_0."""
    p = lambda a: root if a == 0 and root is not None else (tag, "p", a)
    for a in range(2 * t):
        b.e(p(a), p(a + 1))
    for k in range(t):
        b.e(p(0), (tag, "l", k))
        b.e(p(2 * t), (tag, "r", k))
    b.e(p(i), (tag, "x"))


def hat_guest(t: int, i: int) -> Graph:
    b = _Builder()
    _hat_guest(t, i, b, ())
    return b.graph()


def build_tw_family(t: int) -> Family:
    """Forest hosts whose union covering number grows while a 2-local cover exists."""
    if t < 4:
        raise ValueError("the treewidth family needs t >= 4")
    hb = _Builder()
    # side (i, j, i) is the copy of the hat guest for i inside component {i, j}; p_0 is shared
    for i in range(1, t + 1):
        for j in range(i + 1, t + 1):
            for side in (i, j):
                _hat_guest(t, side, hb, (i, j, side), root=(i, j, "root"))
    host = hb.graph()
    guests, covers = [], []
    for i in range(1, t + 1):
        gb = _Builder()
        pairs = [(min(i, j), max(i, j)) for j in range(1, t + 1) if j != i]
        for k in range(t - 1):
            _hat_guest(t, i, gb, (k,))
        g = gb.graph()
        mp = [0] * g.n
        for key, v in gb.ids.items():
            (k,), rest = key[0], key[1:]
            a, b = pairs[k]
            mp[v] = hb.ids[(a, b, "root") if rest == ("p", 0) else ((a, b, i),) + rest]
        guests.append(g)
        covers.append(Guest(g, tuple(mp)))
    cls = finite_class(f"tw-sep-{t}", guests + [complete_graph(2)], ClassFlags(component_closed=False),
                       justification="finite list: treewidth family guests and K2")
    return Family("tw-sep", t, host, guests, make_cover(host, cls.name, covers), cls,
                  {"hat_guests": [hat_guest(t, i) for i in range(1, t + 1)]})


# ---------------------------------------------------------------- grid separation

def grid_guest(l: int, i: int) -> tuple[Graph, dict]:
    """Path v_0..v_{l+1}; v_0 lies on a triangle, v_{l+1} on a (2l+1)-cycle and
    v_i is the centre of l pendant edges."""
    b = _Builder()
    for a in range(l + 1):
        b.e(("v", a), ("v", a + 1))
    b.e(("v", 0), ("t", 1))
    b.e(("t", 1), ("t", 2))
    b.e(("t", 2), ("v", 0))
    cyc = 2 * l + 1
    ring = [("v", l + 1)] + [("c", k) for k in range(1, cyc)]
    for k in range(cyc):
        b.e(ring[k], ring[(k + 1) % cyc])
    for k in range(l):
        b.e(("v", i), ("s", k))
    return b.graph(), b.ids


def build_grid_family(l: int) -> Family:
    """Planar hosts from a triangular grid with stars, triangles and odd cycles attached."""
    if l < 4:
        raise ValueError("the grid family needs l >= 4")
    hb = _Builder()
    cells = [(i, j) for i in range(1, l + 1) for j in range(1, l + 1) if i + j <= l + 1]
    for i, j in cells:
        hb.v((i, j))
    for i, j in cells:
        if (i + 1, j) in hb.ids:
            hb.e((i, j), (i + 1, j))
        if (i, j + 1) in hb.ids:
            hb.e((i, j), (i, j + 1))
    for i, j in cells:
        if i + j == l + 1:
            for k in range(l):
                hb.e((i, j), ("hair", i, j, k))
    cyc = 2 * l + 1
    for j in range(1, l + 1):
        hb.e((1, j), ("tri", j, 0))
        for k in range(3):
            hb.e(("tri", j, k), ("tri", j, (k + 1) % 3))
    for i in range(1, l + 1):
        hb.e((i, 1), ("cyc", i, 0))
        for k in range(cyc):
            hb.e(("cyc", i, k), ("cyc", i, (k + 1) % cyc))
    host = hb.graph()

    guests, covers = [], []
    for i in range(1, l + 1):
        g, ids = grid_guest(l, i)
        mp = [0] * g.n
        for key, v in ids.items():
            kind, k = key
            if kind == "v":
                if k == 0:
                    tgt = ("tri", l + 1 - i, 0)
                elif k == l + 1:
                    tgt = ("cyc", i, 0)
                elif k <= i:
                    tgt = (k, l + 1 - i)
                else:
                    tgt = (i, l + 1 - k)
            elif kind == "t":
                tgt = ("tri", l + 1 - i, k)
            elif kind == "c":
                tgt = ("cyc", i, k)
            else:
                tgt = ("hair", i, l + 1 - i, k)
            mp[v] = hb.ids[tgt]
        guests.append(g)
        covers.append(Guest(g, tuple(mp)))
    cls = finite_class(f"grid-sep-{l}", guests + [complete_graph(2)], ClassFlags(component_closed=True),
                       justification="finite list: grid family guests and K2")
    coords = {v: k for k, v in hb.ids.items() if isinstance(k[0], int)}
    return Family("grid-sep", l, host, guests, make_cover(host, cls.name, covers), cls,
                  {"coordinates": coords})


# ---------------------------------------------------------------- hairy cycles on stars

def build_hairy_star_cover(n: int) -> Cover:
    """Folded 2-local cover of K_{1,n} by one hairy cycle (K2 when n = 1)."""
    if n < 1:
        raise ValueError("need n >= 1")
    host = star_graph(n)
    if n == 1:
        return make_cover(host, "hairy-cycles+K2", [Guest(complete_graph(2), (0, 1))])
    # C4 a-x-b-y with n-2 pendants at a; a and b both land on the centre
    es = [(0, 1), (1, 2), (2, 3), (3, 0)] + [(0, 4 + k) for k in range(n - 2)]
    g = Graph(n + 2, es)
    mp = (0, 1, 0, 2) + tuple(3 + k for k in range(n - 2))
    return make_cover(host, "hairy-cycles+K2", [Guest(g, mp)])


# ---------------------------------------------------------------- shift graphs

def shift_graph(d: DiGraph) -> Graph:
    """Arcs of d become vertices; arcs uv and xy are adjacent when v = x or y = u."""
    arcs = sorted(d.arcs)
    idx = {a: i for i, a in enumerate(arcs)}
    es = []
    for (u, v) in arcs:
        for (x, y) in arcs:
            if (u, v) < (x, y) and (v == x or y == u):
                es.append((idx[(u, v)], idx[(x, y)]))
    return Graph(len(arcs), es, {i: f"{u}->{v}" for (u, v), i in idx.items()})


def shift_bipartite_local_cover(d: DiGraph) -> Cover:
    """One complete bipartite guest per vertex of d: incoming arcs against outgoing arcs."""
    host = shift_graph(d)
    arcs = sorted(d.arcs)
    idx = {a: i for i, a in enumerate(arcs)}
    guests = []
    for v in range(d.n):
        ins = [idx[a] for a in arcs if a[1] == v]
        outs = [idx[a] for a in arcs if a[0] == v]
        if not ins or not outs:
            continue
        g = Graph(len(ins) + len(outs), [(a, len(ins) + b) for a in range(len(ins)) for b in range(len(outs))])
        guests.append(Guest(g, tuple(ins + outs)))
    return make_cover(host, "bipartite", guests)


# ---------------------------------------------------------------- double cover

def bipartite_double_folded_cover(h: Graph) -> Cover:
    """The bipartite double cover of h, folded back onto h: locality 2."""
    if h.m == 0:
        raise ValueError("host has no edges")
    n = h.n
    es = []
    for u, v in h.edges:
        es.append((u, n + v))
        es.append((v, n + u))
    g = Graph(2 * n, es)
    return make_cover(h, "bipartite", [Guest(g, tuple(range(n)) + tuple(range(n)))])


# ---------------------------------------------------------------- dispatcher

FAMILIES = ("tw-sep", "grid-sep", "hairy-star", "shift", "double-cover")


def construct(family: str, param: int, digraph: DiGraph | None = None) -> Family:
    if family == "tw-sep":
        return build_tw_family(param)
    if family == "grid-sep":
        return build_grid_family(param)
    if family == "hairy-star":
        c = build_hairy_star_cover(param)
        return Family(family, param, c.host, [g.graph for g in c.guests], c,
                      registry_lookup("hairy-cycles+K2"))
    if family == "shift":
        d = digraph if digraph is not None else DiGraph.complete(param)
        c = shift_bipartite_local_cover(d)
        return Family(family, param, c.host, [g.graph for g in c.guests], c, registry_lookup("bipartite"))
    if family == "double-cover":
        c = bipartite_double_folded_cover(complete_graph(param))
        return Family(family, param, c.host, [g.graph for g in c.guests], c, registry_lookup("bipartite"))
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")

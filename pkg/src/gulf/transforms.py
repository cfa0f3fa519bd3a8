"""Cover-to-cover transforms. Each consumes a certificate, never re-solves,
and returns a certificate that is verified before it is handed back."""

from __future__ import annotations

from itertools import combinations
from math import ceil
from typing import Callable, Mapping, Sequence

from . import params as P
from .classes import GuestClass
from .covers import Cover, Guest, make_cover, restrict_cover, verify_cover
from .graph import Graph, is_isomorphic, is_weak_induced_subgraph, find_isomorphism


class TransformError(ValueError):
    pass


def _check_input(c: Cover, cls: GuestClass | None) -> None:
    rep = verify_cover(c, cls)
    if not rep.valid:
        raise TransformError(f"input cover is invalid: {rep.first_violation()}")


def _checked(c: Cover, cls: GuestClass | None, bound: int | None = None) -> Cover:
    rep = verify_cover(c, cls)
    if not rep.valid:
        raise AssertionError(f"transform produced an invalid cover: {rep.first_violation()}")
    if bound is not None and rep.achieved_globality > bound:
        raise AssertionError(f"transform used {rep.achieved_globality} layers, bound is {bound}")
    return c


def _layers_cover(host: Graph, class_name: str, layers: Sequence[Sequence[Guest]]) -> Cover:
    guests, idx = [], []
    for L in layers:
        if not L:
            continue
        idx.append(list(range(len(guests), len(guests) + len(L))))
        guests.extend(L)
    return make_cover(host, class_name, guests, idx)


def _split_components(g: Guest) -> list[Guest]:
    out = []
    for comp in g.graph.components():
        h, vs = g.graph.induced(comp)
        if h.m:
            out.append(Guest(h, tuple(g.map[v] for v in vs)))
    return out


# ---------------------------------------------------------------- union to global

def layer_graphs(c: Cover) -> list[tuple[Graph, tuple[int, ...], list[int]]]:
    """Each layer as one graph (the disjoint union of its guests) with its map
    into the host and the guest index where each summand starts."""
    from .graph import disjoint_union
    layers = c.claims.layers if c.claims.layers is not None else tuple((i,) for i in range(len(c.guests)))
    out = []
    for L in layers:
        J = disjoint_union([c.guests[i].graph for i in L])
        mp = tuple(x for i in L for x in c.guests[i].map)
        out.append((J, mp, list(L)))
    return out


def union_to_global_compose(host: Graph, union_cover: Cover, cls: GuestClass,
                            per_member_global: Mapping[Graph, Cover] | Callable[[Graph], Cover] | None = None
                            ) -> Cover:
    """Replace every layer by a global cover of the layer graph.

    `per_member_global` maps layer graphs (matched up to isomorphism) to
    injective global covers of them, or is a callable producing one. By
    default a layer is covered by its own summands."""
    if union_cover.host != host:
        raise TransformError("cover is for a different host")
    _check_input(union_cover, cls)
    if not union_cover.is_injective():
        raise TransformError("union covers are injective by definition")
    table = list(per_member_global.items()) if isinstance(per_member_global, Mapping) else None
    guests: list[Guest] = []
    worst = 0
    for J, jmap, ids in layer_graphs(union_cover):
        if per_member_global is None:
            off, parts = 0, []
            for i in ids:
                g = union_cover.guests[i].graph
                parts.append(Guest(g, tuple(range(off, off + g.n))))
                off += g.n
            member = make_cover(J, cls.name, parts)
            perm = tuple(range(J.n))
        elif table is None:
            member = per_member_global(J)
            perm = find_isomorphism(member.host, J)
        else:
            member, perm = None, None
            for K, cov in table:
                perm = find_isomorphism(K, J)
                if perm is not None:
                    member = cov
                    break
            if member is None:
                raise TransformError(f"no member cover supplied for a layer with {J.n} vertices and {J.m} edges")
        if perm is None:
            raise TransformError("member cover is for a graph not isomorphic to the layer")
        rep = verify_cover(member, cls)
        if not rep.valid or not rep.injective:
            raise TransformError(f"member cover is not a valid injective cover: {rep.first_violation()}")
        worst = max(worst, len(member.guests))
        for g in member.guests:
            guests.append(Guest(g.graph, tuple(jmap[perm[x]] for x in g.map)))
    t = union_cover.globality()
    return _checked(make_cover(host, cls.name, guests), cls, t * worst)


# ---------------------------------------------------------------- treewidth

def _mcs_order(n: int, adj: Sequence[set]) -> list[int]:
    """Maximum cardinality search, ties to the lowest index."""
    weight = [0] * n
    done = [False] * n
    order = []
    for _ in range(n):
        v = max((x for x in range(n) if not done[x]), key=lambda x: (weight[x], -x))
        done[v] = True
        order.append(v)
        for w in adj[v]:
            if not done[w]:
                weight[w] += 1
    return order


def chordal_coloring(n: int, adj: Sequence[set]) -> list[int]:
    """Greedy colouring in maximum-cardinality-search order; optimal on chordal graphs."""
    col = [-1] * n
    for v in _mcs_order(n, adj):
        used = {col[w] for w in adj[v] if col[w] >= 0}
        c = 0
        while c in used:
            c += 1
        col[v] = c
    return col


def local_to_union_via_treewidth(host: Graph, local_cover: Cover, cls: GuestClass,
                                 td: P.TreeDecomposition) -> Cover:
    """Layer the guests by colouring the intersection graph of their subtrees
    in the decomposition: at most (w+1)s layers."""
    if not cls.component_closed:
        raise TransformError(f"class {cls.name} is not component-closed")
    _check_input(local_cover, cls)
    if not local_cover.is_injective():
        raise TransformError("input cover must be injective")
    probs = td.problems(host)
    if probs:
        raise TransformError(f"tree decomposition is invalid: {probs[0]}")
    pieces = [p for g in local_cover.guests for p in _split_components(g)]
    subtrees = []
    for p in pieces:
        nodes = set()
        for x in p.map:
            nodes |= td.vertex_nodes(x)
        subtrees.append(frozenset(nodes))
    adj = [set() for _ in pieces]
    for a, b in combinations(range(len(pieces)), 2):
        if subtrees[a] & subtrees[b]:
            adj[a].add(b)
            adj[b].add(a)
    col = chordal_coloring(len(pieces), adj)
    k = max(col, default=-1) + 1
    layers = [[p for p, c in zip(pieces, col) if c == j] for j in range(k)]
    for L in layers:
        seen = set()
        for p in L:
            if seen & set(p.map):
                raise AssertionError("guests in one layer overlap")
            seen |= set(p.map)
    s = local_cover.locality()
    return _checked(_layers_cover(host, cls.name, layers), cls, (td.width + 1) * s)


# ---------------------------------------------------------------- bipartite hosts

def folded_to_union_bipartite(host: Graph, folded_cover: Cover, cls: GuestClass) -> Cover:
    """Number the preimages of each host vertex; the guest vertices that are
    the i-th copy on one side or the j-th copy on the other form layer (i, j)."""
    if not cls.hereditary:
        raise TransformError(f"class {cls.name} is not hereditary")
    sides = P.bipartition(host)
    if sides is None:
        raise TransformError("host is not bipartite")
    X = sides[0]
    _check_input(folded_cover, cls)
    rank: dict[tuple[int, int], int] = {}
    seen = [0] * host.n
    for gi, g in enumerate(folded_cover.guests):
        for a, x in enumerate(g.map):
            rank[(gi, a)] = seen[x]
            seen[x] += 1
    s = max(seen, default=0)
    layers = []
    for i in range(s):
        for j in range(s):
            L = []
            for gi, g in enumerate(folded_cover.guests):
                keep = [a for a in range(g.graph.n)
                        if rank[(gi, a)] == (i if g.map[a] in X else j)]
                h, vs = g.graph.induced(keep)
                if h.m:
                    L.append(Guest(h, tuple(g.map[a] for a in vs)))
            layers.append(L)
    return _checked(_layers_cover(host, cls.name, layers), cls, s * s)


def decompose_induced_bipartite(host: Graph, node_limit: int = 10**6) -> list[tuple[Graph, tuple[int, ...]]]:
    """Induced subgraphs on pairs of colour classes of an optimal colouring."""
    chi = P.chromatic_number(host, node_limit)
    if not chi.decided:
        raise P.Undecided("chromatic number undecided at this budget")
    classes = [[v for v in range(host.n) if chi.coloring[v] == c] for c in range(chi.value)]
    out = []
    for a, b in combinations(range(chi.value), 2):
        g, vs = host.induced(classes[a] + classes[b])
        if g.m:
            out.append((g, vs))
    return out


def decompose_bipartite_log(host: Graph, node_limit: int = 10**6) -> list[tuple[Graph, tuple[int, ...]]]:
    """Part b holds the edges whose endpoint colours differ in bit b."""
    chi = P.chromatic_number(host, node_limit)
    if not chi.decided:
        raise P.Undecided("chromatic number undecided at this budget")
    bits = P.ceil_log2(chi.value) if chi.value else 0
    out = []
    for b in range(bits):
        es = [(u, v) for u, v in host.edge_list if (chi.coloring[u] ^ chi.coloring[v]) >> b & 1]
        out.append(host.edge_subgraph(es))
    return out


# ---------------------------------------------------------------- star forests

def _is_weak_induced_star_forest(host: Graph, edges: Sequence[tuple[int, int]]) -> bool:
    g, vs = host.edge_subgraph(edges)
    return P.is_star_forest(g) and is_weak_induced_subgraph(g, host, vs)


def star_forest_decomposition(host: Graph, d: int, node_limit: int = 10**6
                              ) -> list[tuple[Graph, tuple[int, ...]]]:
    """At most 2d weak induced star forests covering host, for mad(host) <= d.

    First fit over the edges grouped by out-stars of a low out-degree
    orientation; when that needs more than 2d forests, backtracking over
    forest assignments with 2d forests."""
    if P.mad(host) > d:
        raise TransformError(f"mad(host) = {P.mad(host)} exceeds {d}")
    if host.m == 0:
        return []
    k = max(1, ceil(d / 2))
    orient = P.orientation_with_max_outdegree(host, k)
    if orient is None:
        raise AssertionError("no orientation with the degree bound mad guarantees")
    order = sorted(host.edge_list, key=lambda e: (orient[e][0], orient[e][1]))
    forests: list[list[tuple[int, int]]] = []
    for e in order:
        for F in forests:
            if _is_weak_induced_star_forest(host, F + [e]):
                F.append(e)
                break
        else:
            forests.append([e])
    if len(forests) > 2 * d:
        forests = _star_forest_search(host, 2 * d, order, node_limit)
    return [host.edge_subgraph(F) for F in forests]


def _star_forest_search(host, limit, order, node_limit):
    forests: list[list] = []
    nodes = [0]

    def rec(i):
        if i == len(order):
            return True
        nodes[0] += 1
        if nodes[0] > node_limit:
            raise P.Undecided("star forest search exhausted its node budget")
        e = order[i]
        for F in forests:
            if _is_weak_induced_star_forest(host, F + [e]):
                F.append(e)
                if rec(i + 1):
                    return True
                F.pop()
        if len(forests) < limit:
            forests.append([e])
            if rec(i + 1):
                return True
            forests.pop()
        return False

    if not rec(0):
        raise AssertionError(f"no decomposition into {limit} weak induced star forests")
    return forests


# ---------------------------------------------------------------- stars

def folded_to_local_star(host: Graph, folded_cover: Cover, cls: GuestClass) -> Cover:
    """Injective cover of a star by sub-stars of the folded guests, one chosen
    preimage per edge: as many guests as preimages of the centre in use."""
    if not cls.hereditary:
        raise TransformError(f"class {cls.name} is not hereditary")
    if not P.is_star(host.without_isolated()[0]):
        raise TransformError("host is not a star")
    _check_input(folded_cover, cls)
    core, vs = host.without_isolated()
    if core.m == 1:
        centre = vs[0]
    else:
        centre = next(v for v in range(host.n) if host.degree(v) > 1)
    groups: dict[tuple[int, int], list[int]] = {}
    for leaf in sorted(host.adj[centre]):
        found = None
        for gi, g in enumerate(folded_cover.guests):
            for a, b in g.graph.edge_list:
                for x, y in ((a, b), (b, a)):
                    if g.map[x] == centre and g.map[y] == leaf:
                        found = (gi, x, y)
                        break
                if found:
                    break
            if found:
                break
        groups.setdefault(found[:2], []).append(found[2])
    guests = []
    for (gi, a), leaves in sorted(groups.items()):
        g = folded_cover.guests[gi]
        sub, kept = g.graph.induced([a] + leaves)
        guests.append(Guest(sub, tuple(g.map[x] for x in kept)))
    out = make_cover(host, cls.name, guests)
    return _checked(out, cls, folded_cover.locality())


def folded_to_union_sparse(host: Graph, folded_cover: Cover, cls: GuestClass) -> Cover:
    """Star forests of the host, the cover restricted to each, and each star
    covered by at most s injective sub-stars: at most 2*ceil(mad)*s layers,
    which is at most 2d s^2 for a class of mad at most d."""
    if not cls.hereditary or cls.mad_bound is None:
        raise TransformError(f"class {cls.name} needs to be hereditary with a mad bound")
    _check_input(folded_cover, cls)
    s = folded_cover.locality()
    m = P.mad(host)
    if m > s * cls.mad_bound:
        raise AssertionError(f"mad(host) = {m} exceeds s*d = {s * cls.mad_bound}")
    D = ceil(m)
    forests = star_forest_decomposition(host, D)
    layers = []
    for F, fvs in forests:
        sub = restrict_cover(folded_cover, cls, F, fvs, mode="weak-induced", target="local")
        per_rank: dict[int, list[Guest]] = {}
        for comp in F.components():
            K, kvs = F.induced(comp)
            back = {x: i for i, x in enumerate(kvs)}
            inside = [Guest(g.graph, tuple(back[x] for x in g.map))
                      for g in sub.guests if g.graph.m and g.map[0] in back]
            star_cover = make_cover(K, cls.name, inside)
            local = folded_to_local_star(K, star_cover, cls)
            for r, g in enumerate(local.guests):
                per_rank.setdefault(r, []).append(Guest(g.graph, tuple(fvs[kvs[x]] for x in g.map)))
        layers.extend(per_rank[r] for r in sorted(per_rank))
    bound = 2 * D * s
    assert bound <= 2 * cls.mad_bound * s * s
    return _checked(_layers_cover(host, cls.name, layers), cls, bound)


# ---------------------------------------------------------------- chromatic route

def folded_to_union_chromatic(host: Graph, folded_cover: Cover, cls: GuestClass) -> Cover:
    """Bipartite parts of the host (log many for monotone classes, colour-class
    pairs otherwise), the folded cover restricted to each, then the bipartite
    transform on every part."""
    if not cls.hereditary:
        raise TransformError(f"class {cls.name} is not hereditary")
    _check_input(folded_cover, cls)
    s = folded_cover.locality()
    chi = P.chromatic_number(host)
    if not chi.decided:
        raise P.Undecided("chromatic number undecided")
    if cls.monotone:
        parts, mode = decompose_bipartite_log(host), "subgraph"
        bound = P.ceil_log2(chi.value) * s * s
    else:
        parts, mode = decompose_induced_bipartite(host), "induced"
        bound = chi.value * chi.value * s * s
    layers = []
    for part, vs in parts:
        sub = restrict_cover(folded_cover, cls, part, vs, mode=mode, target="local")
        sub = make_cover(part, cls.name, [g for g in sub.guests if g.graph.m])
        res = folded_to_union_bipartite(part, sub, cls)
        for L in res.claims.layers:
            layers.append([Guest(res.guests[i].graph, tuple(vs[x] for x in res.guests[i].map)) for i in L])
    return _checked(_layers_cover(host, cls.name, layers), cls, bound)


TRANSFORMS = {
    "union-to-global": "union_to_global_compose",
    "local-to-union-tw": "local_to_union_via_treewidth",
    "folded-to-union-bipartite": "folded_to_union_bipartite",
    "folded-to-local-star": "folded_to_local_star",
    "folded-to-union-sparse": "folded_to_union_sparse",
    "folded-to-union-chromatic": "folded_to_union_chromatic",
}

"""Guest classes: membership, structural flags, and candidate-guest enumerators."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterable, Iterator, Sequence

import networkx as nx

from . import params as P
from .graph import (Graph, complete_graph, cycle_graph, disjoint_union, embeddings,
                    enumerate_copies, from_graph6, invariant_key, is_isomorphic, to_graph6)


class UnknownClassError(KeyError):
    pass


class EnumerationLimit(RuntimeError):
    """A candidate enumerator produced more candidates than allowed."""


@dataclass(frozen=True)
class ClassFlags:
    hereditary: bool = False
    monotone: bool = False
    component_closed: bool = False
    union_closed: bool = False

    def __post_init__(self):
        if self.monotone and not self.hereditary:
            raise ValueError("monotone classes are hereditary")
        if self.hereditary and not self.component_closed:
            raise ValueError("hereditary classes are component-closed")


# A candidate is a guest graph with a vertex map into the host.
Candidate = tuple[Graph, tuple[int, ...]]
Enumerator = Callable[[Graph, bool, int, int], Iterable[Candidate]]


@dataclass(frozen=True, eq=False)
class GuestClass:
    name: str
    kind: str  # "finite-list" or "named-predicate"
    flags: ClassFlags
    predicate: Callable[[Graph], bool] | None = None
    members: tuple[Graph, ...] = ()
    mad_bound: Fraction | None = None
    chi_bound: int | None = None
    justification: str = ""
    enumerator: Enumerator | None = None
    max_degree: int | None = None
    max_edges: Callable[[int], int] | None = None
    # edge_check(adj, u, v): may edge uv join the member whose adjacency is adj?
    edge_check: Callable[[dict, int, int], bool] | None = None
    # every class must contain K2 unless this is switched off explicitly
    requires_k2: bool = True
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.kind not in ("finite-list", "named-predicate"):
            raise ValueError(f"unknown class kind {self.kind!r}")
        if self.kind == "finite-list":
            for g in self.members:
                self._index.setdefault(invariant_key(g), []).append(g)
        elif self.predicate is None:
            raise ValueError("named-predicate classes need a predicate")
        if self.requires_k2 and not self.contains(complete_graph(2)):
            raise ValueError(f"class {self.name} does not contain K2")

    @property
    def hereditary(self) -> bool:
        return self.flags.hereditary

    @property
    def monotone(self) -> bool:
        return self.flags.monotone

    @property
    def component_closed(self) -> bool:
        return self.flags.component_closed

    @property
    def union_closed(self) -> bool:
        return self.flags.union_closed

    def contains(self, g: Graph) -> bool:
        if self.kind == "finite-list":
            return any(is_isomorphic(g, h) for h in self._index.get(invariant_key(g), ()))
        return bool(self.predicate(g))

    def member_sizes(self) -> set[int] | None:
        return {g.n for g in self.members} if self.kind == "finite-list" else None


def membership(c: GuestClass, g: Graph) -> bool:
    return c.contains(g)


def closure_partition(c: GuestClass, g: Graph) -> list[list[int]] | None:
    """Groups of vertices, each a union of components of g inducing a member, or None."""
    comps = g.components()
    if not comps:
        return []
    if c.union_closed:
        return [list(range(g.n))] if c.contains(g) else None
    if c.component_closed:
        if all(c.contains(g.induced(cp)[0]) for cp in comps):
            return comps
        # a non-member component can still belong to a bigger member only
        # in classes that are not component-closed, so we are done
        return None
    sizes = c.member_sizes()
    cache: dict[frozenset, bool] = {}

    def ok(group: tuple[int, ...]) -> bool:
        key = frozenset(group)
        if key not in cache:
            vs = [v for i in group for v in comps[i]]
            cache[key] = (sizes is None or len(vs) in sizes) and c.contains(g.induced(vs)[0])
        return cache[key]

    def rec(rest: tuple[int, ...]) -> list[tuple[int, ...]] | None:
        if not rest:
            return []
        first, others = rest[0], rest[1:]
        for k in range(len(others) + 1):
            for extra in combinations(others, k):
                group = (first,) + extra
                if not ok(group):
                    continue
                tail = rec(tuple(i for i in others if i not in extra))
                if tail is not None:
                    return [group] + tail
        return None

    parts = rec(tuple(range(len(comps))))
    if parts is None:
        return None
    return [sorted(v for i in grp for v in comps[i]) for grp in parts]


def union_closure_membership(c: GuestClass, g: Graph) -> bool:
    return closure_partition(c, g) is not None


# ---------------------------------------------------------------- enumerators

def _check_cap(count: int, cap: int):
    if count > cap:
        raise EnumerationLimit(f"more than {cap} candidate guests")


def homomorphisms(pattern: Graph, host: Graph, max_load: int | None = None) -> Iterator[tuple[int, ...]]:
    """All homomorphisms pattern -> host, optionally with every fibre of size <= max_load."""
    order = []
    seen = set()
    for comp in pattern.components():
        start = max(comp, key=lambda v: (pattern.degree(v), -v))
        queue = [start]
        seen.add(start)
        while queue:
            x = queue.pop(0)
            order.append(x)
            for y in sorted(pattern.adj[x]):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    pos = {v: i for i, v in enumerate(order)}
    back = [[w for w in pattern.adj[v] if pos[w] < pos[v]] for v in order]
    img = [-1] * pattern.n
    load = [0] * host.n

    def rec(i):
        if i == len(order):
            yield tuple(img)
            return
        v = order[i]
        cands = sorted(host.adj[img[back[i][0]]]) if back[i] else range(host.n)
        for x in cands:
            if max_load is not None and load[x] >= max_load:
                continue
            if pattern.degree(v) and not host.adj[x]:
                continue
            if all(img[w] in host.adj[x] for w in back[i]):
                img[v] = x
                load[x] += 1
                yield from rec(i + 1)
                load[x] -= 1
                img[v] = -1

    yield from rec(0)


def _image_signature(guest: Graph, mp: Sequence[int]) -> tuple:
    loads: dict[int, int] = {}
    for x in mp:
        loads[x] = loads.get(x, 0) + 1
    edges = frozenset((min(mp[u], mp[v]), max(mp[u], mp[v])) for u, v in guest.edges)
    return edges, tuple(sorted(loads.items()))


def finite_list_enumerator(members: Sequence[Graph]) -> Enumerator:
    useful = [g for g in members if g.m > 0]

    def enum(host: Graph, folded: bool, s: int, cap: int) -> Iterator[Candidate]:
        count = 0
        for g in useful:
            if folded:
                seen = set()
                for mp in homomorphisms(g, host, max_load=s):
                    sig = _image_signature(g, mp)
                    if sig in seen:
                        continue
                    seen.add(sig)
                    count += 1
                    _check_cap(count, cap)
                    yield g, mp
            else:
                for mp in enumerate_copies(g, host, limit=cap):
                    count += 1
                    _check_cap(count, cap)
                    yield g, mp
    return enum


def _star_candidates(host: Graph, folded: bool, s: int, cap: int) -> Iterator[Candidate]:
    # folded images of stars are dominated by injective stars, so both coincide
    count = 0
    for c in range(host.n):
        nb = sorted(host.adj[c])
        for k in range(len(nb), 0, -1):
            for leaves in combinations(nb, k):
                if k == 1 and leaves[0] < c:
                    continue  # K2 already produced from its smaller end
                count += 1
                _check_cap(count, cap)
                yield Graph(k + 1, [(0, i) for i in range(1, k + 1)]), (c,) + leaves


def _cliques(host: Graph) -> Iterator[list[int]]:
    def rec(clique, cand):
        if len(clique) >= 2:
            yield list(clique)
        for v in sorted(cand):
            if clique and v < clique[-1]:
                continue
            yield from rec(clique + [v], cand & host.adj[v])
    for v in range(host.n):
        yield from rec([v], set(x for x in host.adj[v] if x > v))


def _clique_candidates(host: Graph, folded: bool, s: int, cap: int) -> Iterator[Candidate]:
    count = 0
    for cl in _cliques(host):
        count += 1
        _check_cap(count, cap)
        yield complete_graph(len(cl)), tuple(cl)


def _bicliques(host: Graph, complete: bool) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs (A, B) of disjoint nonempty vertex sets, min(A) < min(B).

    complete=True: every A-B pair adjacent. Otherwise every vertex has a
    neighbour on the other side."""
    n = host.n
    active = [v for v in range(n) if host.adj[v]]
    for assign in product((0, 1, 2), repeat=len(active)):
        A = tuple(v for v, a in zip(active, assign) if a == 1)
        B = tuple(v for v, a in zip(active, assign) if a == 2)
        if not A or not B or A[0] > B[0]:
            continue
        if complete:
            if all(b in host.adj[a] for a in A for b in B):
                yield A, B
        else:
            Bs = set(B)
            As = set(A)
            if all(host.adj[a] & Bs for a in A) and all(host.adj[b] & As for b in B):
                yield A, B


def _bipartite_folded(host: Graph, s: int, cap: int) -> Iterator[Candidate]:
    """Folded bipartite images: each host vertex sits on side 0, side 1 or both.

    Merging same-side copies of a vertex keeps a guest bipartite, so two
    copies per vertex realise every image up to dominance. Each host edge is
    used once."""
    active = [v for v in range(host.n) if host.adj[v]]
    options = ((), (0,), (1,), (0, 1)) if s >= 2 else ((), (0,), (1,))
    work = 0
    seen = set()
    for assign in product(range(len(options)), repeat=len(active)):
        work += 1
        _check_cap(work, cap)
        first = next((a for a in assign if a), 0)
        if first == 2:
            continue  # mirror image of an assignment starting on side 0
        sides = {v: options[a] for v, a in zip(active, assign)}
        pairs = []
        for u, v in host.edge_list:
            for a in sides[u]:
                b = next((b for b in sides[v] if b != a), None)
                if b is not None:
                    pairs.append(((u, a), (v, b)))
                    break
        if not pairs:
            continue
        nodes = sorted({x for p in pairs for x in p})
        idx = {x: i for i, x in enumerate(nodes)}
        g = Graph(len(nodes), [(idx[x], idx[y]) for x, y in pairs])
        mp = tuple(v for v, _ in nodes)
        sig = _image_signature(g, mp)
        if sig not in seen:
            seen.add(sig)
            yield g, mp


def _biclique_candidates(complete: bool):
    def enum(host: Graph, folded: bool, s: int, cap: int) -> Iterator[Candidate]:
        if folded and not complete:
            yield from _bipartite_folded(host, s, cap)
            return
        # a complete bipartite image never puts a vertex on both sides
        # (that would need a loop), so folding gains nothing there
        count = 0
        for A, B in _bicliques(host, complete):
            vs = A + B
            idx = {v: i for i, v in enumerate(vs)}
            es = [(idx[a], idx[b]) for a in A for b in B if host.has_edge(a, b)]
            count += 1
            _check_cap(count, cap)
            yield Graph(len(vs), es), vs
    return enum


def _simple_cycles(host: Graph) -> Iterator[list[int]]:
    nxg = host.to_networkx()
    for block in nx.biconnected_components(nxg):
        if len(block) >= 3:
            for cyc in nx.simple_cycles(nxg.subgraph(block)):
                yield cyc


def _hairy_graph(cycle_len: int, pendant_at: Sequence[int]) -> Graph:
    es = [(i, (i + 1) % cycle_len) for i in range(cycle_len)]
    es += [(p, cycle_len + j) for j, p in enumerate(pendant_at)]
    return Graph(cycle_len + len(pendant_at), es)


def _hairy_injective(host: Graph, cap: int) -> Iterator[Candidate]:
    count = 0
    for cyc in _simple_cycles(host):
        on = {v: i for i, v in enumerate(cyc)}
        outside = sorted({w for v in cyc for w in host.adj[v] if w not in on})
        options = [[None] + sorted(on[v] for v in host.adj[w] if v in on) for w in outside]
        for choice in product(*options):
            pend = [(p, w) for p, w in zip(choice, outside) if p is not None]
            count += 1
            _check_cap(count, cap)
            g = _hairy_graph(len(cyc), [p for p, _ in pend])
            yield g, tuple(cyc) + tuple(w for _, w in pend)


def _closed_walks(host: Graph, s: int, max_len: int) -> Iterator[list[int]]:
    load = [0] * host.n

    def rec(walk):
        if len(walk) >= 3 and walk[0] in host.adj[walk[-1]]:
            yield list(walk)
        if len(walk) == max_len:
            return
        for y in sorted(host.adj[walk[-1]]):
            if y < walk[0] or load[y] >= s:
                continue
            load[y] += 1
            walk.append(y)
            yield from rec(walk)
            walk.pop()
            load[y] -= 1

    for v in range(host.n):
        if host.adj[v]:
            load[v] += 1
            yield from rec([v])
            load[v] -= 1


def _hairy_folded(host: Graph, s: int, cap: int) -> Iterator[Candidate]:
    # count walks and pendant choices too, not only emitted guests, so that
    # dense hosts hit the cap instead of spinning on duplicates
    work = 0
    seen = set()
    walks_seen = set()
    for walk in _closed_walks(host, s, s * host.n):
        work += 1
        _check_cap(work, cap)
        L = len(walk)
        load: dict[int, int] = {}
        for x in walk:
            load[x] = load.get(x, 0) + 1
        wedges = frozenset((min(walk[i], walk[(i + 1) % L]), max(walk[i], walk[(i + 1) % L]))
                           for i in range(L))
        # pendant choices depend only on the covered edges and the loads
        key = (wedges, tuple(sorted(load.items())))
        if key in walks_seen:
            continue
        walks_seen.add(key)
        first_pos = {}
        for i, x in enumerate(walk):
            first_pos.setdefault(x, i)
        # each uncovered edge at the walk gets at most one pendant, in either
        # direction allowed by the loads; two pendants on one edge never help
        spare = {x: s - load.get(x, 0) for x in range(host.n)}
        opts = sorted({(min(u, y), max(u, y)) for u in first_pos for y in host.adj[u]} - wedges)
        pend: list[tuple[int, int]] = []

        def rec(i):
            nonlocal work
            if i == len(opts):
                work += 1
                _check_cap(work, cap)
                g = _hairy_graph(L, [first_pos[u] for u, _ in pend])
                mp = tuple(walk) + tuple(y for _, y in pend)
                sig = _image_signature(g, mp)
                if sig not in seen:
                    seen.add(sig)
                    yield g, mp
                return
            yield from rec(i + 1)
            a, b = opts[i]
            for u, y in ((a, b), (b, a)):
                if u in first_pos and spare[y] > 0:
                    spare[y] -= 1
                    pend.append((u, y))
                    yield from rec(i + 1)
                    pend.pop()
                    spare[y] += 1

        yield from rec(0)


def _hairy_candidates(host: Graph, folded: bool, s: int, cap: int) -> Iterator[Candidate]:
    for u, v in host.edge_list:
        yield complete_graph(2), (u, v)
    if folded:
        yield from _hairy_folded(host, s, cap)
    else:
        yield from _hairy_injective(host, cap)


# ---------------------------------------------------------------- incremental checks
# adj maps vertex -> set of neighbours of a graph already in the class

def _connected(adj: dict, u: int, v: int) -> bool:
    if u not in adj or v not in adj:
        return False
    seen, stack = {u}, [u]
    while stack:
        x = stack.pop()
        if x == v:
            return True
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def _forest_check(adj: dict, u: int, v: int) -> bool:
    return not _connected(adj, u, v)


def _linear_forest_check(adj: dict, u: int, v: int) -> bool:
    return len(adj.get(u, ())) < 2 and len(adj.get(v, ())) < 2 and not _connected(adj, u, v)


def _star_forest_check(adj: dict, u: int, v: int) -> bool:
    du, dv = len(adj.get(u, ())), len(adj.get(v, ()))
    if du and dv:
        return False
    if du == 0 and dv == 0:
        return True
    centre = v if dv else u
    nb = adj[centre]
    # centre must be the star centre: fine if every neighbour is a leaf
    return all(len(adj[w]) == 1 for w in nb)


def _bipartite_check(adj: dict, u: int, v: int) -> bool:
    if u not in adj or v not in adj:
        return True
    side = {u: 0}
    stack = [u]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in side:
                side[y] = 1 - side[x]
                stack.append(y)
    return v not in side or side[v] != side[u]


def _c4_check(adj: dict, u: int, v: int) -> bool:
    nu, nv = adj.get(u, set()), adj.get(v, set())
    for x in nu:
        if x == v:
            continue
        for y in adj[x]:
            if y != u and y != v and y in nv:
                return False
    return True


# ---------------------------------------------------------------- registry

def _reiman(k: int) -> int:
    # upper bound on the edges of a C4-free graph with k vertices
    return int(k * (1 + math.isqrt(4 * k - 3) + 1) // 4) if k > 0 else 0


def _has_c4(g: Graph) -> bool:
    for a, b in combinations(range(g.n), 2):
        if len(g.adj[a] & g.adj[b]) >= 2:
            return True
    return False


def finite_class(name: str, graphs: Sequence[Graph], flags: ClassFlags | None = None,
                 mad_bound: Fraction | None = None, chi_bound: int | None = None,
                 justification: str = "finite list", requires_k2: bool = True) -> GuestClass:
    flags = flags or ClassFlags(component_closed=all(g.is_connected() for g in graphs))
    members = tuple(graphs)
    for g in members:
        if g.n:
            if mad_bound is not None and P.mad(g) > mad_bound:
                raise ValueError(f"member {to_graph6(g)} exceeds mad bound {mad_bound}")
            if chi_bound is not None and P.chromatic_number(g).value > chi_bound:
                raise ValueError(f"member {to_graph6(g)} exceeds chromatic bound {chi_bound}")
    maxdeg = max((g.max_degree() for g in members), default=0)
    maxn = max((g.n for g in members), default=0)
    best_edges = {}
    for g in members:
        best_edges[g.n] = max(best_edges.get(g.n, 0), g.m)

    def max_edges(k: int) -> int:
        return max((e for size, e in best_edges.items() if size <= k), default=0)

    return GuestClass(name, "finite-list", flags, members=members, mad_bound=mad_bound,
                      chi_bound=chi_bound, justification=justification,
                      enumerator=finite_list_enumerator(members), max_degree=maxdeg,
                      max_edges=max_edges, requires_k2=requires_k2)


def _builtins() -> dict[str, Callable[[], GuestClass]]:
    K2, K3 = complete_graph(2), complete_graph(3)
    mono = ClassFlags(hereditary=True, monotone=True, component_closed=True, union_closed=True)
    cc = ClassFlags(component_closed=True)
    forest_edges = lambda k: max(k - 1, 0)
    return {
        "k2-only": lambda: finite_class("k2-only", [K2], cc, Fraction(1), 2),
        "triangles": lambda: finite_class("triangles", [K3, K2], cc, Fraction(2), 3),
        # the one class without K2: hosts with an edge outside every triangle have no cover
        "k3-only": lambda: finite_class("k3-only", [K3], cc, Fraction(2), 3,
                                        justification="triangles without K2", requires_k2=False),
        "at-most-two-vertices": lambda: finite_class(
            "at-most-two-vertices", [K2, Graph(1), Graph(2)],
            ClassFlags(hereditary=True, monotone=True, component_closed=True), Fraction(1), 2),
        "stars": lambda: GuestClass(
            "stars", "named-predicate", cc, P.is_star, mad_bound=Fraction(2), chi_bound=2,
            justification="stars are trees; K1 and edgeless graphs are not stars, so not hereditary",
            enumerator=_star_candidates, max_edges=forest_edges),
        "star-forests": lambda: GuestClass(
            "star-forests", "named-predicate", mono, P.is_star_forest, mad_bound=Fraction(2),
            chi_bound=2, justification="forests have average degree below 2",
            max_edges=forest_edges),
        "forests": lambda: GuestClass(
            "forests", "named-predicate", mono, P.is_forest, mad_bound=Fraction(2), chi_bound=2,
            justification="a forest on k vertices has at most k-1 edges", max_edges=forest_edges,
            edge_check=_forest_check),
        "linear-forests": lambda: GuestClass(
            "linear-forests", "named-predicate", mono, P.is_linear_forest, mad_bound=Fraction(2),
            chi_bound=2, justification="paths have average degree below 2", max_degree=2,
            max_edges=forest_edges, edge_check=_linear_forest_check),
        "bipartite": lambda: GuestClass(
            "bipartite", "named-predicate", mono, lambda g: P.bipartition(g) is not None,
            chi_bound=2, justification="two colour classes",
            enumerator=_biclique_candidates(complete=False), max_edges=lambda k: k * k // 4,
            edge_check=_bipartite_check),
        "complete-bipartite": lambda: GuestClass(
            "complete-bipartite", "named-predicate", cc, P.is_complete_bipartite, chi_bound=2,
            justification="two colour classes", enumerator=_biclique_candidates(complete=True),
            max_edges=lambda k: k * k // 4),
        "complete-graphs": lambda: GuestClass(
            "complete-graphs", "named-predicate",
            ClassFlags(hereditary=True, component_closed=True), P.is_complete,
            justification="no bounds: cliques have unbounded mad and chromatic number",
            enumerator=_clique_candidates, max_edges=lambda k: k * (k - 1) // 2),
        "hairy-cycles+K2": lambda: GuestClass(
            "hairy-cycles+K2", "named-predicate", cc,
            lambda g: P.is_hairy_cycle(g) or (g.n == 2 and g.m == 1), mad_bound=Fraction(2),
            chi_bound=3, justification="unicyclic graphs have mad at most 2",
            enumerator=_hairy_candidates, max_edges=lambda k: k),
        "forb-c4": lambda: GuestClass(
            "forb-c4", "named-predicate", mono, lambda g: not _has_c4(g),
            justification="no bounds: C4-free graphs have unbounded chromatic number",
            max_edges=_reiman, edge_check=_c4_check),
    }


_BUILTINS = _builtins()
_CACHE: dict[str, GuestClass] = {}


def register(c: GuestClass) -> GuestClass:
    _CACHE[c.name] = c
    return c


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)


def registry_lookup(name: str) -> GuestClass:
    """Built-in names, "tw-sep-<t>", "grid-sep-<l>", registered classes, or a class directory."""
    if name in _CACHE:
        return _CACHE[name]
    if name in _BUILTINS:
        return register(_BUILTINS[name]())
    for prefix in ("tw-sep-", "grid-sep-"):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            from . import constructions
            k = int(name[len(prefix):])
            fam = constructions.build_tw_family(k) if prefix == "tw-sep-" else constructions.build_grid_family(k)
            return register(fam.guest_class)
    if os.path.isdir(name):
        return register(load_class_dir(name))
    raise UnknownClassError(name)


def load_class_dir(path: str) -> GuestClass:
    """A directory with manifest.json and one or more *.g6 files (one graph per line).

    manifest keys: name, flags (hereditary, monotone, component_closed,
    union_closed), optional mad_bound ("p/q") and chi_bound."""
    with open(os.path.join(path, "manifest.json")) as fh:
        man = json.load(fh)
    graphs = []
    for fn in sorted(os.listdir(path)):
        if fn.endswith(".g6"):
            with open(os.path.join(path, fn)) as fh:
                graphs.extend(from_graph6(ln) for ln in fh if ln.strip())
    flags = ClassFlags(**man.get("flags", {}))
    mad_b = Fraction(man["mad_bound"]) if man.get("mad_bound") is not None else None
    return finite_class(man.get("name", os.path.basename(path.rstrip("/"))), graphs, flags,
                        mad_b, man.get("chi_bound"), man.get("justification", "finite list"))


def write_class_dir(c: GuestClass, path: str) -> None:
    os.makedirs(path, exist_ok=True)
    f = c.flags
    man = {"name": c.name,
           "flags": {"hereditary": f.hereditary, "monotone": f.monotone,
                     "component_closed": f.component_closed, "union_closed": f.union_closed},
           "mad_bound": None if c.mad_bound is None else str(c.mad_bound),
           "chi_bound": c.chi_bound, "justification": c.justification}
    with open(os.path.join(path, "manifest.json"), "w") as fh:
        json.dump(man, fh, indent=2)
    with open(os.path.join(path, "members.g6"), "w") as fh:
        for g in c.members:
            fh.write(to_graph6(g) + "\n")

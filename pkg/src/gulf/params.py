"""Exact graph parameters: chromatic number, mad, treewidth, arboricity, planarity."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import networkx as nx

from .graph import Graph


class Undecided(Exception):
    """Raised when an exact computation runs out of budget."""


# ---------------------------------------------------------------- colouring

@dataclass(frozen=True)
class ChromaticResult:
    value: int | None
    coloring: tuple[int, ...]
    lower: int
    upper: int
    nodes: int

    @property
    def decided(self) -> bool:
        return self.value is not None


def is_proper_coloring(g: Graph, coloring: Sequence[int]) -> bool:
    return len(coloring) == g.n and all(coloring[u] != coloring[v] for u, v in g.edges)


def greedy_clique(g: Graph) -> list[int]:
    best: list[int] = []
    for s in range(g.n):
        clique, cand = [s], set(g.adj[s])
        while cand:
            v = max(cand, key=lambda x: (len(g.adj[x] & cand), -x))
            clique.append(v)
            cand &= g.adj[v]
        if len(clique) > len(best):
            best = clique
    return sorted(best)


def dsatur(g: Graph) -> list[int]:
    col = [-1] * g.n
    sat = [set() for _ in range(g.n)]
    for _ in range(g.n):
        v = max((x for x in range(g.n) if col[x] < 0), key=lambda x: (len(sat[x]), g.degree(x), -x))
        c = 0
        while c in sat[v]:
            c += 1
        col[v] = c
        for w in g.adj[v]:
            sat[w].add(c)
    return col


def _k_coloring(g: Graph, k: int, budget: list[int]) -> list[int] | None:
    col = [-1] * g.n
    counts = [[0] * k for _ in range(g.n)]  # counts[v][c]: neighbours of v coloured c

    def pick():
        best, key = -1, None
        for v in range(g.n):
            if col[v] < 0:
                s = sum(1 for c in range(k) if counts[v][c])
                kk = (s, g.degree(v))
                if key is None or kk > key:
                    best, key = v, kk
        return best

    def rec(done, used):
        if done == g.n:
            return True
        budget[0] -= 1
        if budget[0] < 0:
            raise Undecided("colouring node limit")
        v = pick()
        for c in range(min(used + 1, k)):
            if counts[v][c]:
                continue
            col[v] = c
            for w in g.adj[v]:
                counts[w][c] += 1
            if rec(done + 1, max(used, c + 1)):
                return True
            for w in g.adj[v]:
                counts[w][c] -= 1
            col[v] = -1
        return False

    return col if rec(0, 0) else None


def chromatic_number(g: Graph, node_limit: int = 10**6) -> ChromaticResult:
    if g.n == 0:
        return ChromaticResult(0, (), 0, 0, 0)
    ub_col = dsatur(g)
    ub = max(ub_col) + 1
    lb = max(len(greedy_clique(g)), 1)
    best = ub_col
    budget = [node_limit]
    k = ub - 1
    try:
        # descend from the greedy bound; each success tightens it
        while k >= lb:
            c = _k_coloring(g, k, budget)
            if c is None:
                break
            best, ub = c, max(c) + 1
            k = ub - 1
    except Undecided:
        return ChromaticResult(None, tuple(best), lb, ub, node_limit - budget[0])
    return ChromaticResult(ub, tuple(best), ub, ub, node_limit - budget[0])


# ---------------------------------------------------------------- density

def _max_closure(g: Graph, p: int, q: int, forced: int | None = None) -> tuple[int, set[int]]:
    """max over vertex sets S of q|E(S)| - p|S| (S must contain `forced` if given)."""
    big = q * g.m + p * g.n + 1
    net = nx.DiGraph()
    net.add_node("s")
    net.add_node("t")
    for i, (u, v) in enumerate(g.edge_list):
        net.add_edge("s", ("e", i), capacity=q)
        net.add_edge(("e", i), ("v", u), capacity=big)
        net.add_edge(("e", i), ("v", v), capacity=big)
    for v in range(g.n):
        net.add_edge(("v", v), "t", capacity=p)
    if forced is not None:
        net.add_edge("s", ("v", forced), capacity=big)
    cut, (side, _) = nx.minimum_cut(net, "s", "t")
    chosen = {x[1] for x in side if isinstance(x, tuple) and x[0] == "v"}
    return q * g.m - cut, chosen


def _edges_within(g: Graph, s: set[int]) -> int:
    return sum(1 for u, v in g.edges if u in s and v in s)


def _mad_brute(g: Graph) -> tuple[Fraction, frozenset]:
    best, wit = Fraction(0), frozenset([0])
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    for S in range(1, 1 << g.n):
        k = S.bit_count()
        e2 = sum((masks[v] & S).bit_count() for v in range(g.n) if S >> v & 1)
        val = Fraction(e2, k)
        if val > best:
            best, wit = val, frozenset(v for v in range(g.n) if S >> v & 1)
    return best, wit


def _mad_flow(g: Graph) -> tuple[Fraction, frozenset]:
    # Dinkelbach iteration on |E(S)|/|S|, each step an exact max-closure
    lam = Fraction(g.m, g.n)
    wit = set(range(g.n))
    while True:
        gain, S = _max_closure(g, lam.numerator, lam.denominator)
        if gain <= 0 or not S:
            return 2 * lam, frozenset(wit)
        lam, wit = Fraction(_edges_within(g, S), len(S)), S


def mad(g: Graph, brute_limit: int = 16) -> Fraction:
    return mad_with_witness(g, brute_limit)[0]


def mad_with_witness(g: Graph, brute_limit: int = 16) -> tuple[Fraction, frozenset]:
    if g.n == 0:
        raise ValueError("mad of the empty graph is undefined")
    if g.m == 0:
        return Fraction(0), frozenset([0])
    if g.n <= brute_limit:
        return _mad_brute(g)
    return _mad_flow(g)


def orientation_with_max_outdegree(g: Graph, k: int) -> dict[tuple[int, int], tuple[int, int]] | None:
    """Map each edge to (tail, head) with every outdegree <= k, or None."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if g.m == 0:
        return {}
    net = nx.DiGraph()
    for i, (u, v) in enumerate(g.edge_list):
        net.add_edge("s", ("e", i), capacity=1)
        net.add_edge(("e", i), ("v", u), capacity=1)
        net.add_edge(("e", i), ("v", v), capacity=1)
    for v in range(g.n):
        net.add_edge(("v", v), "t", capacity=k)
    value, flow = nx.maximum_flow(net, "s", "t")
    if value < g.m:
        return None
    out = {}
    for i, (u, v) in enumerate(g.edge_list):
        tail = u if flow[("e", i)][("v", u)] == 1 else v
        out[(u, v)] = (tail, v if tail == u else u)
    return out


# ---------------------------------------------------------------- arboricity

def _arb_brute(g: Graph) -> int:
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    best = 1
    for S in range(1, 1 << g.n):
        k = S.bit_count()
        if k < 2:
            continue
        e = sum((masks[v] & S).bit_count() for v in range(g.n) if S >> v & 1) // 2
        best = max(best, -(-e // (k - 1)))
    return best


def _arb_flow(g: Graph) -> int:
    # exists S with |S|>=2 and |E(S)| > k(|S|-1)  <=>  for some r, max over S containing r
    # of |E(S)| - k|S| exceeds -k
    k = 1
    while True:
        if all(_max_closure(g, k, 1, forced=r)[0] <= -k for r in range(g.n)):
            return k
        k += 1


def _two_core(g: Graph) -> Graph:
    deg = [g.degree(v) for v in range(g.n)]
    alive = [True] * g.n
    stack = [v for v in range(g.n) if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if not alive[v]:
            continue
        alive[v] = False
        for w in g.adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] <= 1:
                    stack.append(w)
    return g.induced(v for v in range(g.n) if alive[v])[0]


def arboricity_nash_williams(g: Graph, brute_limit: int = 16) -> int:
    """max ceil(|E'|/(|V'|-1)) over subgraphs; 0 for edgeless graphs."""
    if g.m == 0:
        return 0
    # vertices of degree <= 1 never raise the maximum above 1
    core = _two_core(g)
    best = 1
    for comp, _ in (core.induced(c) for c in core.components()):
        if comp.m == 0:
            continue
        best = max(best, _arb_brute(comp) if comp.n <= brute_limit else _arb_flow(comp))
    return best


# ---------------------------------------------------------------- treewidth

@dataclass(frozen=True)
class TreeDecomposition:
    tree: Graph
    bags: tuple[frozenset, ...]
    optimal: bool = True

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def problems(self, g: Graph) -> list[str]:
        out = []
        if len(self.bags) != self.tree.n:
            out.append("bag count differs from tree size")
            return out
        if self.tree.n and (self.tree.m != self.tree.n - 1 or not self.tree.is_connected()):
            out.append("decomposition tree is not a tree")
        covered = set().union(*self.bags) if self.bags else set()
        for v in range(g.n):
            if v not in covered:
                out.append(f"vertex {v} in no bag")
        for u, v in g.edge_list:
            if not any(u in b and v in b for b in self.bags):
                out.append(f"edge {(u, v)} in no bag")
        for v in range(g.n):
            nodes = [i for i, b in enumerate(self.bags) if v in b]
            if nodes:
                sub, _ = self.tree.induced(nodes)
                if not sub.is_connected():
                    out.append(f"bags containing {v} are not connected")
        return out

    def is_valid(self, g: Graph) -> bool:
        return not self.problems(g)

    def vertex_nodes(self, v: int) -> frozenset:
        return frozenset(i for i, b in enumerate(self.bags) if v in b)


def decomposition_from_order(g: Graph, order: Sequence[int], optimal: bool = True) -> TreeDecomposition:
    if g.n == 0:
        return TreeDecomposition(Graph(1), (frozenset(),), optimal)
    pos = {v: i for i, v in enumerate(order)}
    nb = [set(a) for a in g.adj]
    later = []
    for v in order:
        hi = {w for w in nb[v] if pos[w] > pos[v]}
        later.append(hi)
        for a, b in combinations(hi, 2):
            nb[a].add(b)
            nb[b].add(a)
    bags = [frozenset({v} | later[i]) for i, v in enumerate(order)]
    edges = []
    roots = []
    for i, v in enumerate(order):
        if later[i]:
            j = min(pos[w] for w in later[i])
            edges.append((i, j))
        else:
            roots.append(i)
    # join the per-component trees into one tree
    for a, b in zip(roots, roots[1:]):
        edges.append((a, b))
    return TreeDecomposition(Graph(g.n, edges), tuple(bags), optimal)


def _min_fill_order(g: Graph) -> list[int]:
    nb = [set(a) for a in g.adj]
    alive = set(range(g.n))
    order = []
    while alive:
        def fill(v):
            ns = nb[v] & alive
            return sum(1 for a, b in combinations(ns, 2) if b not in nb[a])
        v = min(alive, key=lambda x: (fill(x), len(nb[x] & alive), x))
        ns = nb[v] & alive
        for a, b in combinations(ns, 2):
            nb[a].add(b)
            nb[b].add(a)
        alive.discard(v)
        order.append(v)
    return order


def _order_width(g: Graph, order: Sequence[int]) -> int:
    return decomposition_from_order(g, order).width


def _minor_min_width(g: Graph) -> int:
    nb = {v: set(g.adj[v]) for v in range(g.n)}
    lb = 0
    while len(nb) > 1:
        v = min(nb, key=lambda x: (len(nb[x]), x))
        lb = max(lb, len(nb[v]))
        if not nb[v]:
            del nb[v]
            continue
        u = min(nb[v], key=lambda x: (len(nb[x]), x))
        for w in nb[v]:
            nb[w].discard(v)
            if w != u:
                nb[w].add(u)
                nb[u].add(w)
        nb[u].discard(u)
        del nb[v]
    return lb


def _tw_dp(g: Graph, ub: int, state_limit: int) -> list[int] | None:
    """Exact subset DP; returns an ordering of width < ub, or None if none exists."""
    n = g.n
    adjm = [0] * n
    for u, v in g.edges:
        adjm[u] |= 1 << v
        adjm[v] |= 1 << u
    full = (1 << n) - 1

    def q_size(S, v):
        seen, frontier, out = 1 << v, 1 << v, 0
        while frontier:
            x = (frontier & -frontier).bit_length() - 1
            frontier &= frontier - 1
            nbr = adjm[x] & ~seen
            seen |= nbr
            out |= nbr & ~S
            frontier |= nbr & S
        return out.bit_count()

    layer = {0: (-1, None)}
    parents: dict[int, tuple[int, int]] = {}
    states = 0
    for _ in range(n):
        nxt = {}
        for S, (val, _) in layer.items():
            rest = full & ~S
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                T = S | 1 << v
                w = max(val, q_size(S, v))
                if w >= ub:
                    continue
                if T not in nxt or w < nxt[T][0]:
                    nxt[T] = (w, (S, v))
        states += len(nxt)
        if states > state_limit:
            raise Undecided("treewidth state limit")
        if not nxt:
            return None
        for T, (w, par) in nxt.items():
            parents[T] = par
        layer = nxt
    order = []
    S = full
    while S:
        prevS, v = parents[S]
        order.append(v)
        S = prevS
    return order[::-1]


def _component_treewidth(g: Graph, limit: int, state_limit: int) -> tuple[list[int], bool]:
    order = _min_fill_order(g)
    ub = _order_width(g, order)
    if g.m == g.n - 1:
        return order, True  # tree: min-fill eliminates leaves first, width 1
    lb = max(_minor_min_width(g), 2)
    if ub <= lb:
        return order, True
    if g.n > limit:
        return order, False
    try:
        while ub > lb:
            better = _tw_dp(g, ub, state_limit)
            if better is None:
                break
            order, ub = better, _order_width(g, better)
    except Undecided:
        return order, False
    return order, True


def treewidth(g: Graph, limit: int = 25, state_limit: int = 2_000_000) -> tuple[int, TreeDecomposition]:
    """Exact width per component by subset DP, falling back to min-fill
    (flagged optimal=False) beyond `limit` vertices or `state_limit` states."""
    order: list[int] = []
    optimal = True
    for comp in g.components():
        sub, back = g.induced(comp)
        o, ok = _component_treewidth(sub, limit, state_limit)
        optimal &= ok
        order.extend(back[v] for v in o)
    td = decomposition_from_order(g, order, optimal)
    return td.width, td


# ---------------------------------------------------------------- planarity and structure

def is_planar(g: Graph) -> bool:
    ok, _ = nx.check_planarity(g.to_networkx())
    return ok


def bipartition(g: Graph) -> tuple[frozenset, frozenset] | None:
    side = [-1] * g.n
    for s in range(g.n):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if side[y] < 0:
                    side[y] = 1 - side[x]
                    stack.append(y)
                elif side[y] == side[x]:
                    return None
    return (frozenset(v for v in range(g.n) if side[v] == 0),
            frozenset(v for v in range(g.n) if side[v] == 1))


def is_forest(g: Graph) -> bool:
    return g.m == g.n - len(g.components())


def is_star(g: Graph) -> bool:
    if g.n < 2 or g.m != g.n - 1:
        return False
    return any(g.degree(v) == g.n - 1 for v in range(g.n))


def is_star_forest(g: Graph) -> bool:
    if not is_forest(g):
        return False
    return all(len(c) == 1 or is_star(g.induced(c)[0]) for c in g.components())


def is_linear_forest(g: Graph) -> bool:
    return is_forest(g) and g.max_degree() <= 2


def is_complete(g: Graph) -> bool:
    return g.n >= 1 and g.m == g.n * (g.n - 1) // 2


def is_complete_bipartite(g: Graph) -> bool:
    if g.n < 2 or not g.is_connected():
        return False
    bp = bipartition(g)
    return bp is not None and g.m == len(bp[0]) * len(bp[1])


def is_cycle(g: Graph) -> bool:
    return g.n >= 3 and g.m == g.n and g.is_connected() and all(g.degree(v) == 2 for v in range(g.n))


def is_hairy_cycle(g: Graph) -> bool:
    """A cycle (length >= 3) plus pendant vertices each attached to a cycle vertex."""
    if g.n < 3 or g.m != g.n or not g.is_connected():
        return False
    leaves = {v for v in range(g.n) if g.degree(v) == 1}
    core = [v for v in range(g.n) if v not in leaves]
    if any(next(iter(g.adj[x])) in leaves for x in leaves):
        return False
    return is_cycle(g.induced(core)[0])


@dataclass(frozen=True)
class Structure:
    is_forest: bool
    is_star: bool
    is_star_forest: bool
    is_bipartite: bool
    bipartition: tuple[frozenset, frozenset] | None
    is_hairy_cycle: bool
    is_linear_forest: bool
    is_complete: bool
    is_complete_bipartite: bool


def structural_predicates(g: Graph) -> Structure:
    bp = bipartition(g)
    return Structure(
        is_forest=is_forest(g),
        is_star=is_star(g),
        is_star_forest=is_star_forest(g),
        is_bipartite=bp is not None,
        bipartition=bp,
        is_hairy_cycle=is_hairy_cycle(g),
        is_linear_forest=is_linear_forest(g),
        is_complete=is_complete(g),
        is_complete_bipartite=is_complete_bipartite(g),
    )


def ceil_log2(k: int) -> int:
    return max(k - 1, 0).bit_length()

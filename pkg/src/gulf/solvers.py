"""Exact covering numbers by bounded search, and the copy-based lower bound.

Two engines:

* candidate search, for classes with an enumerator of candidate guests (copies
  for injective variants, homomorphic images for the folded variant);
* split search, for monotone union-closed classes given by a predicate: edges
  are coloured (injective variants) or assigned to copy pairs of their
  endpoints (folded variant), keeping every colour class inside the class.

Both deepen iteratively on the objective and stop at the first feasible value,
so every returned value comes with a verified certificate and every smaller
value has been refuted."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .classes import EnumerationLimit, GuestClass, closure_partition
from .covers import Cover, Guest, make_cover, verify_cover
from .graph import Graph, automorphisms, enumerate_copies

VARIANTS = ("global", "union", "local", "folded")


class UnsupportedClassError(ValueError):
    pass


class _OutOfBudget(Exception):
    def __init__(self, which: str):
        super().__init__(which)
        self.which = which


@dataclass(frozen=True)
class SolveBudget:
    node_limit: int = 10**7
    time_limit: float = 60.0
    multiplicity_cap: int | None = None
    edge_repetition: bool | None = None  # None: allowed exactly for non-monotone classes
    candidate_cap: int = 200_000
    automorphism_cap: int = 20_000

    def __post_init__(self):
        if self.node_limit <= 0 or self.time_limit <= 0 or self.candidate_cap <= 0:
            raise ValueError("budget caps must be positive")
        if self.multiplicity_cap is not None and self.multiplicity_cap <= 0:
            raise ValueError("multiplicity cap must be positive")


@dataclass
class SolveResult:
    variant: str
    class_name: str
    value: int | None
    certificate: Cover | None
    lower_bound: int
    upper_bound: int | None
    lower_bound_proof: str
    engine: str = ""
    nodes: int = 0
    seconds: float = 0.0
    binding_budget: str | None = None
    caps: dict = field(default_factory=dict)

    @property
    def decided(self) -> bool:
        return self.value is not None

    def to_dict(self) -> dict:
        from .covers import cover_to_dict
        return {
            "variant": self.variant,
            "class": self.class_name,
            "value": self.value if self.value is not None else "undecided",
            "lower_bound": self.lower_bound,
            "upper_bound": self.upper_bound,
            "lower_bound_proof": self.lower_bound_proof,
            "engine": self.engine,
            "nodes": self.nodes,
            "seconds": round(self.seconds, 3),
            "binding_budget": self.binding_budget,
            "caps": self.caps,
            "certificate": None if self.certificate is None else cover_to_dict(self.certificate),
        }


class _Clock:
    def __init__(self, budget: SolveBudget):
        self.nodes = 0
        self.limit = budget.node_limit
        self.start = time.monotonic()
        self.deadline = self.start + budget.time_limit

    def tick(self):
        self.nodes += 1
        if self.nodes > self.limit:
            raise _OutOfBudget("node_limit")
        if not self.nodes & 1023 and time.monotonic() > self.deadline:
            raise _OutOfBudget("time_limit")

    def elapsed(self) -> float:
        return time.monotonic() - self.start


def _ceil(a: int, b: int) -> int:
    return -(-a // b)


def _popcount(x: int) -> int:
    return x.bit_count()


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


# ---------------------------------------------------------------- candidate engine

class _Cand:
    __slots__ = ("emask", "vmask", "loads", "ge", "total", "guest", "map", "nedges")

    def __init__(self, emask, loads, guest, mp):
        self.emask = emask
        self.loads = loads  # tuple of (vertex, count), sorted
        self.vmask = 0
        for v, _ in loads:
            self.vmask |= 1 << v
        top = max((c for _, c in loads), default=0)
        # ge[l] = vertices where this candidate puts load >= l
        self.ge = [0] * (top + 1)
        for v, c in loads:
            for l in range(1, c + 1):
                self.ge[l] |= 1 << v
        self.total = sum(c for _, c in loads)
        self.guest = guest
        self.map = mp
        self.nedges = _popcount(emask)


def _dominated(a: _Cand, b: _Cand, variant: str, exact: bool) -> bool:
    """Is a never needed when b is available?"""
    if exact:
        if a.emask != b.emask:
            return False
    elif a.emask & ~b.emask:
        return False
    if variant == "global":
        return True
    if variant in ("union", "local"):
        return b.vmask & ~a.vmask == 0
    la = dict(a.loads)
    return all(la.get(v, 0) >= c for v, c in b.loads)


class _CandidateEngine:
    def __init__(self, host: Graph, cls: GuestClass, budget: SolveBudget, clock: _Clock):
        self.host, self.cls, self.budget, self.clock = host, cls, budget, clock
        self.edges = host.edge_list
        self.eidx = {e: i for i, e in enumerate(self.edges)}
        self.m = len(self.edges)
        self.full = (1 << self.m) - 1
        self.inc = [0] * host.n
        for i, (u, v) in enumerate(self.edges):
            self.inc[u] |= 1 << i
            self.inc[v] |= 1 << i
        self._auts = None

    # -- candidates

    def candidates(self, variant: str, s: int, exact: bool) -> list[_Cand]:
        folded = variant == "folded"
        raw = self.cls.enumerator(self.host, folded, s, self.budget.candidate_cap)
        seen = {}
        for guest, mp in raw:
            self.clock.tick()
            if guest.m == 0:
                continue
            em = 0
            imgs = []
            for a, b in guest.edges:
                x, y = mp[a], mp[b]
                imgs.append(self.eidx[(min(x, y), max(x, y))])
            if exact and len(set(imgs)) != len(imgs):
                continue
            for i in imgs:
                em |= 1 << i
            ld: dict[int, int] = {}
            for x in mp:
                ld[x] = ld.get(x, 0) + 1
            if max(ld.values()) > s:
                continue
            key = (em, tuple(sorted(ld.items())))
            if key not in seen:
                seen[key] = _Cand(em, key[1], guest, tuple(mp))
        cands = list(seen.values())
        cands.sort(key=lambda c: (-c.nedges, c.total, c.loads))
        kept: list[_Cand] = []
        for c in cands:
            if not any(_dominated(c, k, variant, exact) for k in kept if k.nedges >= c.nedges):
                kept.append(c)
        return kept

    def automorphisms(self):
        if self._auts is None:
            a = automorphisms(self.host, cap=self.budget.automorphism_cap)
            self._auts = a if a is not None else []
        return self._auts

    def root_representatives(self, e0: int, ids: list[int], cands: list[_Cand]) -> list[int]:
        """Keep one candidate per orbit of the stabiliser of edge e0."""
        auts = self.automorphisms()
        if len(auts) <= 1:
            return ids
        u0, v0 = self.edges[e0]
        stab = [p for p in auts if {p[u0], p[v0]} == {u0, v0}]
        if len(stab) <= 1:
            return ids
        key_of = {}
        for i in ids:
            key_of[(cands[i].emask, cands[i].loads)] = i
        eperm = []
        for p in stab:
            eperm.append([self.eidx[(min(p[u], p[v]), max(p[u], p[v]))] for u, v in self.edges])
        reps, seen = [], set()
        for i in ids:
            if i in seen:
                continue
            reps.append(i)
            c = cands[i]
            for p, ep in zip(stab, eperm):
                em = 0
                for b in _bits(c.emask):
                    em |= 1 << ep[b]
                ld = tuple(sorted((p[v], k) for v, k in c.loads))
                j = key_of.get((em, ld))
                if j is not None:
                    seen.add(j)
        return reps

    def _lists(self, cands):
        lists = [[] for _ in range(self.m)]
        for i, c in enumerate(cands):
            for b in _bits(c.emask):
                lists[b].append(i)
        maxcov = [0] * self.host.n
        for c in cands:
            for v, _ in c.loads:
                maxcov[v] = max(maxcov[v], _popcount(c.emask & self.inc[v]))
        return lists, maxcov

    def vertex_bound(self, uncov: int, maxcov: list[int]) -> int:
        best = 0
        for v in range(self.host.n):
            d = _popcount(uncov & self.inc[v])
            if d:
                if not maxcov[v]:
                    return 10**9
                best = max(best, _ceil(d, maxcov[v]))
        return best

    # -- global

    def solve_global(self, cands, t: int) -> list[int] | None:
        lists, maxcov = self._lists(cands)
        maxe = max(c.nedges for c in cands)
        order = sorted(range(self.m), key=lambda e: (len(lists[e]), e))
        chosen: list[int] = []

        def rec(uncov: int) -> bool:
            if not uncov:
                return True
            self.clock.tick()
            left = t - len(chosen)
            if left * maxe < _popcount(uncov) or self.vertex_bound(uncov, maxcov) > left:
                return False
            e = next(x for x in order if uncov >> x & 1)
            ids = lists[e]
            if not chosen:
                ids = self.root_representatives(e, ids, cands)
            for i in ids:
                chosen.append(i)
                if rec(uncov & ~cands[i].emask):
                    return True
                chosen.pop()
            return False

        return list(chosen) if rec(self.full) else None

    # -- union

    def solve_union(self, cands, t: int) -> list[list[int]] | None:
        lists, maxcov = self._lists(cands)
        n = self.host.n
        # cap[k]: most edges that disjoint candidates fit on k vertices
        shapes = {}
        for c in cands:
            k = _popcount(c.vmask)
            shapes[k] = max(shapes.get(k, 0), c.nedges)
        cap = [0] * (n + 1)
        for k in range(1, n + 1):
            cap[k] = max([cap[k - 1]] + [e + cap[k - a] for a, e in shapes.items() if a <= k])
        layers: list[int] = []  # occupied vertices per layer
        members: list[list[int]] = []
        allv = (1 << n) - 1

        def within(free: int) -> int:
            out = self.full
            for v in _bits(allv & ~free):
                out &= ~self.inc[v]
            return out

        def bound_ok(uncov: int) -> bool:
            need = _popcount(uncov)
            fresh = t - len(layers)
            room = fresh * cap[n]
            for occ in layers:
                free = allv & ~occ
                room += min(cap[_popcount(free)], _popcount(uncov & within(free)))
            if room < need:
                return False
            for v in range(n):
                d = _popcount(uncov & self.inc[v])
                if d:
                    avail = fresh + sum(1 for occ in layers if not occ >> v & 1)
                    if avail * maxcov[v] < d:
                        return False
            return True

        def options(e: int):
            out = []
            for i in lists[e]:
                vm = cands[i].vmask
                for li, occ in enumerate(layers):
                    if not occ & vm:
                        out.append((i, li))
                if len(layers) < t:
                    out.append((i, len(layers)))
            return out

        def rec(uncov: int) -> bool:
            if not uncov:
                return True
            self.clock.tick()
            if not bound_ok(uncov):
                return False
            best = None
            for e in _bits(uncov):
                opts = options(e)
                if best is None or len(opts) < len(best[1]):
                    best = (e, opts)
                    if len(opts) <= 1:
                        break
            e, opts = best
            if not layers:
                reps = set(self.root_representatives(e, lists[e], cands))
                opts = [o for o in opts if o[0] in reps]
            for i, li in opts:
                if li == len(layers):
                    layers.append(cands[i].vmask)
                    members.append([i])
                else:
                    layers[li] |= cands[i].vmask
                    members[li].append(i)
                if rec(uncov & ~cands[i].emask):
                    return True
                members[li].pop()
                if not members[li]:
                    members.pop()
                    layers.pop()
                else:
                    layers[li] &= ~cands[i].vmask
            return False

        return [list(L) for L in members] if rec(self.full) else None

    # -- local and folded

    def solve_local(self, cands, s: int, exact: bool) -> list[int] | None:
        lists, maxcov = self._lists(cands)
        n = self.host.n
        loads = [0] * n
        # over[k] = vertices with load >= k
        over = [0] * (s + 2)
        chosen: list[int] = []

        def fits(c: _Cand) -> bool:
            for l in range(1, len(c.ge)):
                if s - l + 1 <= 0 or c.ge[l] & over[s - l + 1]:
                    return False
            return True

        def apply(c: _Cand, sign: int):
            for v, k in c.loads:
                old = loads[v]
                loads[v] = old + sign * k
                lo, hi = sorted((old, loads[v]))
                for j in range(lo + 1, hi + 1):
                    if j <= s + 1:
                        over[j] ^= 1 << v

        def rec(uncov: int, covered: int) -> bool:
            if not uncov:
                return True
            self.clock.tick()
            for v in range(n):
                d = _popcount(uncov & self.inc[v])
                if d and (not maxcov[v] or loads[v] + _ceil(d, maxcov[v]) > s):
                    return False
            best = None
            for e in _bits(uncov):
                opts = [i for i in lists[e] if fits(cands[i]) and not (exact and cands[i].emask & covered)]
                if best is None or len(opts) < len(best[1]):
                    best = (e, opts)
                    if len(opts) <= 1:
                        break
            e, opts = best
            if not chosen:
                reps = set(self.root_representatives(e, lists[e], cands))
                opts = [i for i in opts if i in reps]
            for i in opts:
                c = cands[i]
                chosen.append(i)
                apply(c, 1)
                if rec(uncov & ~c.emask, covered | c.emask):
                    return True
                apply(c, -1)
                chosen.pop()
            return False

        return list(chosen) if rec(self.full, 0) else None

    # -- greedy upper bounds

    def greedy(self, cands) -> list[int]:
        uncov, chosen = self.full, []
        while uncov:
            i = max(range(len(cands)), key=lambda j: (_popcount(cands[j].emask & uncov), -cands[j].total, -j))
            chosen.append(i)
            uncov &= ~cands[i].emask
        return chosen

    def greedy_layers(self, cands, ids) -> list[list[int]]:
        layers, occ = [], []
        for i in ids:
            for li, o in enumerate(occ):
                if not o & cands[i].vmask:
                    layers[li].append(i)
                    occ[li] |= cands[i].vmask
                    break
            else:
                layers.append([i])
                occ.append(cands[i].vmask)
        return layers


# ---------------------------------------------------------------- split engine

class _SplitEngine:
    """Edge colouring (global, union, local) or copy-pair splitting (folded)
    for monotone union-closed classes."""

    def __init__(self, host: Graph, cls: GuestClass, clock: _Clock):
        self.host, self.cls, self.clock = host, cls, clock
        self.edges = list(host.edge_list)

    def addable(self, adj: dict, u, v) -> bool:
        if self.cls.edge_check is not None:
            return self.cls.edge_check(adj, u, v)
        # generic: test the component that the new edge creates
        comp, stack = {u, v}, [u, v]
        while stack:
            x = stack.pop()
            for y in adj.get(x, ()):
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        idx = {x: i for i, x in enumerate(sorted(comp, key=repr))}
        es = {(min(idx[a], idx[b]), max(idx[a], idx[b])) for a in comp for b in adj.get(a, ())}
        es.add((min(idx[u], idx[v]), max(idx[u], idx[v])))
        return self.cls.contains(Graph(len(comp), es))

    @staticmethod
    def _add(adj, u, v):
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)

    @staticmethod
    def _remove(adj, u, v):
        adj[u].discard(v)
        adj[v].discard(u)
        if not adj[u]:
            del adj[u]
        if not adj[v]:
            del adj[v]

    def colour(self, limit: int, local: bool) -> list[int] | None:
        """Colour edges so every colour class is a member. local=False: at most
        `limit` colours; local=True: at most `limit` colours at each vertex."""
        n = self.host.n
        colours: list[dict] = []
        sizes: list[int] = []
        vcol = [set() for _ in range(n)]
        assign: dict[int, int] = {}
        cap_n = self.cls.max_edges(n) if self.cls.max_edges else None
        D = self.cls.max_degree
        deg_left = [self.host.degree(v) for v in range(n)]

        def opts(e):
            u, v = self.edges[e]
            out = []
            for c, adj in enumerate(colours):
                if local and ((c not in vcol[u] and len(vcol[u]) >= limit)
                              or (c not in vcol[v] and len(vcol[v]) >= limit)):
                    continue
                if self.addable(adj, u, v):
                    out.append(c)
            if local:
                if len(vcol[u]) < limit and len(vcol[v]) < limit:
                    out.append(len(colours))
            elif len(colours) < limit:
                out.append(len(colours))
            return out

        def bound_ok(left: int) -> bool:
            if not local and cap_n is not None:
                room = sum(max(cap_n - sz, 0) for sz in sizes) + (limit - len(colours)) * cap_n
                if room < left:
                    return False
            if D is not None:
                for v in range(n):
                    if deg_left[v]:
                        used = sum(D - len(colours[c].get(v, ())) for c in vcol[v])
                        fresh = (limit - len(vcol[v])) if local else (limit - len(colours))
                        if used + fresh * D < deg_left[v]:
                            return False
            return True

        def rec(left: int) -> bool:
            if not left:
                return True
            self.clock.tick()
            if not bound_ok(left):
                return False
            best = None
            for e in range(len(self.edges)):
                if e in assign:
                    continue
                o = opts(e)
                if best is None or len(o) < len(best[1]):
                    best = (e, o)
                    if len(o) <= 1:
                        break
            e, o = best
            u, v = self.edges[e]
            for c in o:
                if c == len(colours):
                    colours.append({})
                    sizes.append(0)
                self._add(colours[c], u, v)
                sizes[c] += 1
                assign[e] = c
                new_u, new_v = c not in vcol[u], c not in vcol[v]
                vcol[u].add(c)
                vcol[v].add(c)
                deg_left[u] -= 1
                deg_left[v] -= 1
                if rec(left - 1):
                    return True
                deg_left[u] += 1
                deg_left[v] += 1
                if new_u:
                    vcol[u].discard(c)
                if new_v:
                    vcol[v].discard(c)
                del assign[e]
                sizes[c] -= 1
                self._remove(colours[c], u, v)
                if not sizes[c] and c == len(colours) - 1:
                    colours.pop()
                    sizes.pop()
            return False

        if rec(len(self.edges)):
            return [assign[e] for e in range(len(self.edges))]
        return None

    def split(self, s: int) -> list[tuple[int, int]] | None:
        """Assign edge uv to copies (a, b) of u and v, at most s copies per
        vertex, with the split graph inside the class."""
        n = self.host.n
        adj: dict = {}
        ncopies = [0] * n
        assign: dict[int, tuple[int, int]] = {}
        D = self.cls.max_degree
        deg_left = [self.host.degree(v) for v in range(n)]

        def opts(e):
            u, v = self.edges[e]
            out = []
            for a in range(min(ncopies[u] + 1, s)):
                for b in range(min(ncopies[v] + 1, s)):
                    if self.addable(adj, (u, a), (v, b)):
                        out.append((a, b))
            return out

        def bound_ok() -> bool:
            if D is None:
                return True
            for v in range(n):
                if deg_left[v]:
                    room = sum(D - len(adj.get((v, a), ())) for a in range(ncopies[v]))
                    if room + (s - ncopies[v]) * D < deg_left[v]:
                        return False
            return True

        def rec(left: int) -> bool:
            if not left:
                return True
            self.clock.tick()
            if not bound_ok():
                return False
            best = None
            for e in range(len(self.edges)):
                if e in assign:
                    continue
                o = opts(e)
                if best is None or len(o) < len(best[1]):
                    best = (e, o)
                    if len(o) <= 1:
                        break
            e, o = best
            u, v = self.edges[e]
            for a, b in o:
                grew = (a == ncopies[u], b == ncopies[v])
                if grew[0]:
                    ncopies[u] += 1
                if grew[1]:
                    ncopies[v] += 1
                self._add(adj, (u, a), (v, b))
                assign[e] = (a, b)
                deg_left[u] -= 1
                deg_left[v] -= 1
                if rec(left - 1):
                    return True
                deg_left[u] += 1
                deg_left[v] += 1
                del assign[e]
                self._remove(adj, (u, a), (v, b))
                if grew[0]:
                    ncopies[u] -= 1
                if grew[1]:
                    ncopies[v] -= 1
            return False

        if rec(len(self.edges)):
            return [assign[e] for e in range(len(self.edges))]
        return None

    def first_fit(self) -> list[int]:
        colours: list[dict] = []
        out = []
        for u, v in self.edges:
            for c, adj in enumerate(colours):
                if self.addable(adj, u, v):
                    break
            else:
                colours.append({})
                c = len(colours) - 1
            self._add(colours[c], u, v)
            out.append(c)
        return out

    # -- certificates

    def colour_guests(self, colouring: Sequence[int]) -> list[Guest]:
        groups: dict[int, list[tuple[int, int]]] = {}
        for e, c in zip(self.edges, colouring):
            groups.setdefault(c, []).append(e)
        out = []
        for c in sorted(groups):
            g, vs = self.host.edge_subgraph(groups[c])
            out.append(Guest(g, vs))
        return out

    def split_guests(self, assignment: Sequence[tuple[int, int]]) -> list[Guest]:
        nodes = sorted({(u, a) for (u, v), (a, b) in zip(self.edges, assignment)}
                       | {(v, b) for (u, v), (a, b) in zip(self.edges, assignment)})
        idx = {x: i for i, x in enumerate(nodes)}
        es = [(idx[(u, a)], idx[(v, b)]) for (u, v), (a, b) in zip(self.edges, assignment)]
        whole = Graph(len(nodes), es)
        out = []
        for comp in whole.components():
            g, vs = whole.induced(comp)
            out.append(Guest(g, tuple(nodes[i][0] for i in vs)))
        return out


# ---------------------------------------------------------------- front end

def _engine_for(cls: GuestClass, variant: str) -> str:
    # colouring is much faster than candidate search whenever it is sound
    if cls.monotone and cls.union_closed and cls.predicate is not None:
        return "split"
    if cls.enumerator is None:
        raise UnsupportedClassError(
            f"class {cls.name} has no candidate enumerator and is not monotone and union-closed")
    return "candidates"


def _result(variant, cls, value, cover, lb, ub, proof, engine, clock, binding=None, caps=None):
    if cover is not None:
        rep = verify_cover(cover, cls)
        if not rep.valid:
            raise AssertionError(f"solver produced an invalid certificate: {rep.first_violation()}")
    return SolveResult(variant, cls.name, value, cover, lb, ub, proof, engine,
                       clock.nodes, clock.elapsed(), binding, caps or {})


def solve(host: Graph, cls: GuestClass, variant: str, budget: SolveBudget | None = None,
          engine: str | None = None) -> SolveResult:
    """Exact covering number of `host` by `cls`. `engine` forces "candidates"
    or "split" instead of the automatic choice."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    budget = budget or SolveBudget()
    clock = _Clock(budget)
    if host.m == 0:
        cover = make_cover(host, cls.name, [], [] if variant == "union" else None)
        return _result(variant, cls, 0, cover, 0, 0, "host has no edges", "none", clock)
    if engine is None:
        engine = _engine_for(cls, variant)
    elif engine == "split" and not (cls.monotone and cls.union_closed and cls.predicate is not None):
        raise UnsupportedClassError("split search needs a monotone union-closed predicate class")
    elif engine == "candidates" and cls.enumerator is None:
        raise UnsupportedClassError(f"class {cls.name} has no candidate enumerator")
    elif engine not in ("candidates", "split"):
        raise ValueError(f"unknown engine {engine!r}")
    try:
        if engine == "candidates":
            return _solve_candidates(host, cls, variant, budget, clock)
        return _solve_split(host, cls, variant, budget, clock)
    except EnumerationLimit as exc:
        return SolveResult(variant, cls.name, None, None, 1, None,
                           f"candidate enumeration stopped: {exc}", engine, clock.nodes,
                           clock.elapsed(), "candidate_cap", {})


def _solve_candidates(host, cls, variant, budget, clock) -> SolveResult:
    eng = _CandidateEngine(host, cls, budget, clock)
    rep = budget.edge_repetition
    if rep is None:
        rep = not cls.monotone
    exact = variant == "folded" and not rep
    caps = {}
    if variant == "folded":
        caps = {"edge_repetition": rep, "multiplicity_cap": budget.multiplicity_cap}
    inj = eng.candidates("local" if variant == "folded" else variant, host.n, False)
    covered = 0
    for c in inj:
        covered |= c.emask
    if covered != eng.full:
        # some edge lies in no candidate, so no cover exists at all
        return _result(variant, cls, None, None, 1, None,
                       "some host edge lies in no candidate guest: no cover exists",
                       "candidates", clock, "infeasible", caps)

    greedy = eng.greedy(inj)
    if variant == "global":
        ub, best = len(greedy), [inj[i] for i in greedy]
    elif variant == "union":
        layers = eng.greedy_layers(inj, greedy)
        ub = len(layers)
        best = [[inj[i] for i in L] for L in layers]
    else:
        ld = [0] * host.n
        for i in greedy:
            for v, k in inj[i].loads:
                ld[v] += k
        ub, best = max(ld), [inj[i] for i in greedy]

    def cover_from(chosen, layered=False):
        if layered:
            guests, lay = [], []
            for L in chosen:
                lay.append(list(range(len(guests), len(guests) + len(L))))
                guests.extend(Guest(c.guest, c.map) for c in L)
            return make_cover(host, cls.name, guests, lay)
        return make_cover(host, cls.name, [Guest(c.guest, c.map) for c in chosen])

    if variant == "folded":
        # folded candidates are generated level by level inside the loop
        lb, proof = 1, "trivial"
    else:
        _, maxcov = eng._lists(inj)
        vb = eng.vertex_bound(eng.full, maxcov)
        maxe = max(c.nedges for c in inj)
        if variant == "global":
            lb = max(1, _ceil(eng.m, maxe), vb)
            proof = f"counting: {eng.m} edges, at most {maxe} per guest; per-vertex degree bound {vb}"
        else:
            lb = max(1, vb)
            proof = f"per-vertex degree bound {vb}"

    level = lb
    try:
        while level < ub:
            if variant == "global":
                sol = eng.solve_global(inj, level)
                if sol is not None:
                    return _result(variant, cls, level, cover_from([inj[i] for i in sol]), level, level,
                                   proof, "candidates", clock, caps=caps)
            elif variant == "union":
                sol = eng.solve_union(inj, level)
                if sol is not None:
                    return _result(variant, cls, level,
                                   cover_from([[inj[i] for i in L] for L in sol], True),
                                   level, level, proof, "candidates", clock, caps=caps)
            else:
                if variant == "local":
                    cands = inj
                else:
                    if budget.multiplicity_cap is not None and level > budget.multiplicity_cap:
                        break
                    cands = eng.candidates("folded", level, exact)
                sol = eng.solve_local(cands, level, exact)
                if sol is not None:
                    return _result(variant, cls, level, cover_from([cands[i] for i in sol]), level, level,
                                   proof, "candidates", clock, caps=caps)
            proof = f"exhaustive search refuted every value up to {level} ({clock.nodes} nodes)"
            level += 1
    except _OutOfBudget as exc:
        return _result(variant, cls, None, cover_from(best, variant == "union"), level, ub,
                       proof, "candidates", clock, exc.which, caps)
    except EnumerationLimit as exc:
        return _result(variant, cls, None, cover_from(best, variant == "union"), level, ub,
                       f"{proof}; candidate enumeration stopped at level {level}: {exc}",
                       "candidates", clock, "candidate_cap", caps)
    if variant == "folded" and budget.multiplicity_cap is not None and ub > budget.multiplicity_cap:
        return _result(variant, cls, None, None, level, ub, proof, "candidates", clock,
                       "multiplicity_cap", caps)
    return _result(variant, cls, ub, cover_from(best, variant == "union"), ub, ub, proof,
                   "candidates", clock, caps=caps)


def _solve_split(host, cls, variant, budget, clock) -> SolveResult:
    eng = _SplitEngine(host, cls, clock)
    caps = {"edge_repetition": False} if variant == "folded" else {}
    ff = eng.first_fit()
    n_act = sum(1 for v in range(host.n) if host.adj[v])
    core, _ = host.without_isolated()
    in_class = cls.contains(core)
    D = cls.max_degree
    deg_lb = _ceil(host.max_degree(), D) if D else 1
    if variant in ("global", "union"):
        ub = len(set(ff))
        capn = cls.max_edges(n_act) if cls.max_edges else None
        lb = max(1 if in_class else 2, deg_lb, _ceil(host.m, capn) if capn else 1)
        proof = "counting and degree bounds" + ("; union equals global for a union-closed class"
                                                 if variant == "union" else "")
    else:
        colours_at = [set() for _ in range(host.n)]
        for (u, v), c in zip(eng.edges, ff):
            colours_at[u].add(c)
            colours_at[v].add(c)
        ub = max(len(x) for x in colours_at)
        lb = max(1 if in_class else 2, deg_lb)
        proof = "host is not in the class" if not in_class else "trivial"
        if D:
            proof += f"; degree bound {deg_lb}"

    def colour_cover(col, layered):
        guests = eng.colour_guests(col)
        return make_cover(host, cls.name, guests, [[i] for i in range(len(guests))] if layered else None)

    level = lb
    try:
        while level < ub:
            if variant == "folded":
                sol = eng.split(level)
                if sol is not None:
                    cover = make_cover(host, cls.name, eng.split_guests(sol))
                    return _result(variant, cls, level, cover, level, level, proof, "split", clock, caps=caps)
            else:
                sol = eng.colour(level, local=(variant == "local"))
                if sol is not None:
                    return _result(variant, cls, level, colour_cover(sol, variant == "union"), level, level,
                                   proof, "split", clock, caps=caps)
            proof = f"exhaustive split search refuted every value up to {level} ({clock.nodes} nodes)"
            level += 1
    except _OutOfBudget as exc:
        return _result(variant, cls, None, colour_cover(ff, variant == "union"), level, ub, proof,
                       "split", clock, exc.which, caps)
    return _result(variant, cls, ub, colour_cover(ff, variant == "union"), ub, ub, proof, "split",
                   clock, caps=caps)


# ---------------------------------------------------------------- chain

@dataclass
class ChainReport:
    results: dict[str, SolveResult]
    holds: bool
    violations: list[str]

    def values(self) -> tuple:
        return tuple(self.results[v].value for v in VARIANTS)

    def to_dict(self) -> dict:
        return {"values": {v: (r.value if r.value is not None else "undecided")
                           for v, r in self.results.items()},
                "bounds": {v: [r.lower_bound, r.upper_bound] for v, r in self.results.items()},
                "chain_holds": self.holds, "violations": self.violations}


def chain_check(host: Graph, cls: GuestClass, budget: SolveBudget | None = None) -> ChainReport:
    res = {v: solve(host, cls, v, budget) for v in VARIANTS}
    bad = []
    for a, b in combinations(VARIANTS, 2):
        x, y = res[a], res[b]
        # a >= b must hold; compare whatever is decided, using bounds otherwise
        hi_a = x.value if x.decided else x.upper_bound
        lo_b = y.value if y.decided else y.lower_bound
        if x.decided and y.decided and x.value < y.value:
            bad.append(f"{a}={x.value} < {b}={y.value}")
        elif hi_a is not None and lo_b is not None and hi_a < lo_b:
            bad.append(f"{a}<={hi_a} < {b}>={lo_b}")
    return ChainReport(res, not bad, bad)


# ---------------------------------------------------------------- copy lower bound

class HypothesisFailure(ValueError):
    def __init__(self, message: str, pair: tuple[int, ...]):
        super().__init__(message)
        self.pair = pair


@dataclass
class LowerBoundCertificate:
    value: int
    trace: dict


def _component_types(g: Graph) -> list[tuple[Graph, int]]:
    from .graph import is_isomorphic
    types: list[list] = []
    for comp in g.components():
        h, _ = g.induced(comp)
        for t in types:
            if is_isomorphic(t[0], h):
                t[1] += 1
                break
        else:
            types.append([h, 1])
    return [(h, k) for h, k in types]


class _Packer:
    """Disjoint placements of all components of one guest, from copy lists."""

    def __init__(self, types, copies, clock: _Clock):
        self.types = types
        self.copies = copies  # per type: list of frozenset vertex sets
        self.clock = clock

    @staticmethod
    def _group_bound(sets: list[frozenset]) -> int:
        rest = list(sets)
        groups = 0
        while rest:
            count: dict[int, int] = {}
            for s in rest:
                for x in s:
                    count[x] = count.get(x, 0) + 1
            x = max(count, key=lambda y: (count[y], -y))
            rest = [s for s in rest if x not in s]
            groups += 1
        return groups

    def find(self, avoid: int | None = None) -> list[list[frozenset]] | None:
        pools = [[s for s in cs if avoid not in s] for cs in self.copies]
        chosen: list[list[frozenset]] = [[] for _ in self.types]

        def rec(t: int, start: int, used: frozenset) -> bool:
            self.clock.tick()
            if t == len(self.types):
                return True
            need = self.types[t][1] - len(chosen[t])
            if need == 0:
                return rec(t + 1, 0, used)
            pool = [s for s in pools[t][start:] if not s & used]
            if self._group_bound(pool) < need:
                return False
            for k in range(start, len(pools[t])):
                s = pools[t][k]
                if s & used:
                    continue
                chosen[t].append(s)
                if rec(t, k + 1, used | s):
                    return True
                chosen[t].pop()
            return False

        return [list(c) for c in chosen] if rec(0, 0, frozenset()) else None


def lower_bound_unique_copies(host: Graph, special_guests: Sequence[Graph],
                              budget: SolveBudget | None = None) -> LowerBoundCertificate:
    """Certify that every union cover of `host` needs len(special_guests) layers,
    for any class whose members embeddable in host are K2 and these guests.

    Certified when (1) each guest has a copy, (2) for i != j some vertex lies
    in every copy of guest i and every copy of guest j, and (3) each guest i
    has a hub: a vertex with at least k pendant edges that no copy of any
    component of another guest covers. Then a cover either uses every guest,
    and they pairwise meet, or misses some guest i, and the pendant edges at
    its hub need k single edges through one vertex."""
    budget = budget or SolveBudget()
    clock = _Clock(budget)
    k = len(special_guests)
    trace: dict = {"guests": [], "intersections": {}, "hubs": {}}
    cores = []
    comp_copies = []
    try:
        for i, g in enumerate(special_guests):
            types = _component_types(g)
            copies, maps = [], []
            for h, _ in types:
                cs = enumerate_copies(h, host)
                maps.append((h, cs))
                copies.append(sorted({frozenset(c) for c in cs}, key=sorted))
            comp_copies.append(maps)
            packer = _Packer(types, copies, clock)
            found = packer.find()
            if found is None:
                raise HypothesisFailure(f"guest {i} has no copy in the host", (i,))
            image = sorted(set().union(*[s for grp in found for s in grp]))
            core = frozenset(v for v in image if packer.find(avoid=v) is None)
            unique = all(len(cs) == mult for cs, (_, mult) in zip(copies, types))
            if unique:
                # exactly `mult` copies per type; they must also be pairwise disjoint
                unique = all(len(set().union(*cs)) == sum(len(x) for x in cs) for cs in copies if cs)
            trace["guests"].append({
                "component_copies": [len(cs) for _, cs in maps],
                "component_multiplicity": [m for _, m in types],
                "unique_copy": unique,
                "core_size": len(core),
                "image_size": len(image),
            })
            cores.append(core)
        for i, j in combinations(range(k), 2):
            common = cores[i] & cores[j]
            if not common:
                raise HypothesisFailure(
                    f"copies of guests {i} and {j} are not forced to meet "
                    f"(copies per component: {trace['guests'][i]['component_copies']} and "
                    f"{trace['guests'][j]['component_copies']})", (i, j))
            trace["intersections"][f"{i},{j}"] = min(common)
        pendants = {v: [w for w in host.adj[v] if host.degree(w) == 1] for v in range(host.n)}
        for i in range(k):
            hub = None
            for v in range(host.n):
                if len(pendants[v]) < k:
                    continue
                if not _covered_by_others(host, comp_copies, i, v, pendants[v]):
                    hub = v
                    break
            if hub is None:
                copies_i = trace["guests"][i]["component_copies"]
                raise HypothesisFailure(
                    f"guest {i} (copies per component: {copies_i}) has no pendant hub with "
                    f"{k} pendant edges outside the other guests", (i,))
            trace["hubs"][str(i)] = {"vertex": hub, "pendant_edges": len(pendants[hub])}
    except _OutOfBudget as exc:
        raise HypothesisFailure(f"budget exhausted ({exc.which}); bound not certified", ())
    trace["nodes"] = clock.nodes
    return LowerBoundCertificate(k, trace)


def _covered_by_others(host, comp_copies, i, v, leaves) -> bool:
    leafset = set(leaves)
    for j, maps in enumerate(comp_copies):
        if j == i:
            continue
        for h, cs in maps:
            for mp in cs:
                for a, b in h.edges:
                    x, y = mp[a], mp[b]
                    if (x == v and y in leafset) or (y == v and x in leafset):
                        return True
    return False

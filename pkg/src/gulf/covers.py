"""Cover certificates: verification, restriction to subgraphs, JSON I/O."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Sequence

from .classes import GuestClass, union_closure_membership
from .graph import Graph, from_graph6, is_induced_embedding, is_weak_induced_subgraph, to_graph6


class RestrictionRefused(ValueError):
    pass


@dataclass(frozen=True)
class Guest:
    graph: Graph
    map: tuple[int, ...]


@dataclass(frozen=True)
class Claims:
    injective: bool
    locality: int
    globality: int
    layers: tuple[tuple[int, ...], ...] | None = None


@dataclass(frozen=True)
class Cover:
    host: Graph
    class_name: str
    guests: tuple[Guest, ...]
    claims: Claims

    def loads(self) -> list[int]:
        out = [0] * self.host.n
        for g in self.guests:
            for x in g.map:
                if 0 <= x < self.host.n:
                    out[x] += 1
        return out

    def locality(self) -> int:
        return max(self.loads(), default=0)

    def globality(self) -> int:
        return len(self.claims.layers) if self.claims.layers is not None else len(self.guests)

    def is_injective(self) -> bool:
        return all(len(set(g.map)) == len(g.map) for g in self.guests)


def make_cover(host: Graph, class_name: str, guests: Sequence[Guest],
               layers: Sequence[Sequence[int]] | None = None) -> Cover:
    """Cover whose claims are exactly the achieved values."""
    lay = None if layers is None else tuple(tuple(sorted(L)) for L in layers)
    tmp = Cover(host, class_name, tuple(guests), Claims(True, 0, 0, lay))
    claims = Claims(tmp.is_injective(), tmp.locality(), tmp.globality(), lay)
    return replace(tmp, claims=claims)


@dataclass(frozen=True)
class Report:
    valid: bool
    achieved_locality: int
    achieved_globality: int
    injective: bool
    membership: tuple[bool, ...]
    diagnostics: tuple[str, ...] = field(default=())

    def first_violation(self) -> str | None:
        return self.diagnostics[0] if self.diagnostics else None


def verify_cover(c: Cover, cls: GuestClass | None, closure: bool = False) -> Report:
    """Check every claim of `c` independently. With closure=True guests only
    need to lie in the union closure of the class."""
    diag: list[str] = []
    host = c.host
    covered = set()
    member = []
    loads = [0] * host.n
    injective = True
    for i, gst in enumerate(c.guests):
        g, mp = gst.graph, gst.map
        if len(mp) != g.n:
            diag.append(f"guest {i}: map has {len(mp)} entries for {g.n} vertices")
            member.append(False)
            continue
        bad = [x for x in mp if not 0 <= x < host.n]
        if bad:
            diag.append(f"guest {i}: map entry {bad[0]} is not a host vertex")
            member.append(False)
            continue
        for x in mp:
            loads[x] += 1
        if len(set(mp)) != len(mp):
            injective = False
        for u, v in g.edge_list:
            a, b = mp[u], mp[v]
            if a == b or not host.has_edge(a, b):
                diag.append(f"edge not preserved: guest {i} edge ({u},{v}) -> ({a},{b})")
            else:
                covered.add((min(a, b), max(a, b)))
        if cls is None:
            member.append(True)
        else:
            ok = union_closure_membership(cls, g) if closure else cls.contains(g)
            member.append(ok)
            if not ok:
                diag.append(f"guest {i} ({to_graph6(g)}) is not in class {cls.name}")
    for e in host.edge_list:
        if e not in covered:
            diag.append(f"host edge {e} not covered")
            break
    loc = max(loads, default=0)
    lay = c.claims.layers
    glob = len(lay) if lay is not None else len(c.guests)
    if lay is not None:
        flat = [i for L in lay for i in L]
        if sorted(flat) != list(range(len(c.guests))):
            diag.append("layers do not partition the guest indices")
        else:
            for li, L in enumerate(lay):
                used: dict[int, int] = {}
                for i in L:
                    for x in set(c.guests[i].map):
                        if x in used:
                            diag.append(f"layer {li}: guests {used[x]} and {i} both use host vertex {x}")
                        used[x] = i
    if c.claims.injective and not injective:
        diag.append("injective claimed but some map is not injective")
    if loc > c.claims.locality:
        v = loads.index(loc)
        diag.append(f"locality claim {c.claims.locality} exceeded at host vertex {v} (load {loc})")
    if glob > c.claims.globality:
        diag.append(f"globality claim {c.claims.globality} exceeded ({glob})")
    return Report(not diag, loc, glob, injective, tuple(member), tuple(diag))


# ---------------------------------------------------------------- restriction

def restrict_cover(c: Cover, cls: GuestClass, sub: Graph, embedding: Sequence[int],
                   mode: str = "induced", target: str = "local") -> Cover:
    """Restrict a cover of the host to a subgraph `sub` placed by `embedding`.

    Guests keep the vertices mapped into the image of sub and the edges mapped
    onto edges of sub. In weak-induced mode each guest is split along the
    components of sub and the pieces of one guest form one layer."""
    emb = tuple(embedding)
    if mode == "subgraph":
        if not cls.monotone:
            raise RestrictionRefused(f"subgraph restriction needs a monotone class; {cls.name} is not")
        for u, v in sub.edges:
            if not c.host.has_edge(emb[u], emb[v]):
                raise RestrictionRefused("embedding does not preserve edges")
    elif mode == "induced":
        if not cls.hereditary:
            raise RestrictionRefused(f"induced restriction needs a hereditary class; {cls.name} is not")
        if not is_induced_embedding(sub, c.host, emb):
            raise RestrictionRefused("sub is not an induced subgraph under this embedding")
    elif mode == "weak-induced":
        if not cls.hereditary:
            raise RestrictionRefused(f"weak-induced restriction needs a hereditary class; {cls.name} is not")
        if target == "global":
            raise RestrictionRefused("weak-induced restriction does not preserve the global covering number")
        try:
            ok = is_weak_induced_subgraph(sub, c.host, emb)
        except ValueError as exc:
            raise RestrictionRefused(str(exc)) from exc
        if not ok:
            raise RestrictionRefused("sub is not weak induced under this embedding")
    else:
        raise ValueError(f"unknown mode {mode!r}")
    if len(set(emb)) != sub.n:
        raise RestrictionRefused("embedding is not injective")

    back = {h: i for i, h in enumerate(emb)}
    comp_of = {}
    comps = sub.components()
    for k, cp in enumerate(comps):
        for v in cp:
            comp_of[v] = k

    def piece(g: Graph, mp: Sequence[int], keep) -> Guest | None:
        vs = [x for x in range(g.n) if mp[x] in back and keep(back[mp[x]])]
        if not vs:
            return None
        idx = {x: i for i, x in enumerate(vs)}
        es = [(idx[a], idx[b]) for a, b in g.edges
              if a in idx and b in idx and sub.has_edge(back[mp[a]], back[mp[b]])]
        return Guest(Graph(len(vs), es), tuple(back[mp[x]] for x in vs))

    guests: list[Guest] = []
    layers: list[list[int]] = []
    old_layers = c.claims.layers
    split = mode == "weak-induced"
    per_guest: list[list[int]] = []
    for gst in c.guests:
        ids = []
        keeps = [lambda v, k=k: comp_of[v] == k for k in range(len(comps))] if split else [lambda v: True]
        for keep in keeps:
            p = piece(gst.graph, gst.map, keep)
            if p is not None:
                ids.append(len(guests))
                guests.append(p)
        per_guest.append(ids)
    if old_layers is not None:
        layers = [[i for g in L for i in per_guest[g]] for L in old_layers]
        layers = [L for L in layers if L]
    elif split:
        layers = [ids for ids in per_guest if ids]
    else:
        layers = None
    out = make_cover(sub, c.class_name, guests, layers)
    # restriction never increases load or layer count, so the old claims still hold
    claims = Claims(c.claims.injective, c.claims.locality,
                    max(c.claims.globality, out.claims.globality), out.claims.layers)
    return replace(out, claims=claims)


def relocate(c: Cover, host: Graph, embedding: Sequence[int]) -> list[Guest]:
    """Guests of a cover of a subgraph, re-expressed in the coordinates of `host`."""
    return [Guest(g.graph, tuple(embedding[x] for x in g.map)) for g in c.guests]


# ---------------------------------------------------------------- JSON

def cover_to_dict(c: Cover) -> dict:
    return {
        "host": to_graph6(c.host),
        "class": c.class_name,
        "guests": [{"graph": to_graph6(g.graph), "map": list(g.map)} for g in c.guests],
        "claims": {
            "injective": c.claims.injective,
            "locality": c.claims.locality,
            "globality": c.claims.globality,
            "layers": None if c.claims.layers is None else [list(L) for L in c.claims.layers],
        },
    }


def cover_to_json(c: Cover, indent: int | None = None) -> str:
    return json.dumps(cover_to_dict(c), indent=indent)


class CertificateFormatError(ValueError):
    pass


def cover_from_dict(d: dict) -> Cover:
    try:
        host = from_graph6(d["host"])
        guests = tuple(Guest(from_graph6(g["graph"]), tuple(int(x) for x in g["map"])) for g in d["guests"])
        cl = d["claims"]
        layers = cl.get("layers")
        claims = Claims(bool(cl["injective"]), int(cl["locality"]), int(cl["globality"]),
                        None if layers is None else tuple(tuple(int(i) for i in L) for L in layers))
        return Cover(host, str(d["class"]), guests, claims)
    except (KeyError, TypeError) as exc:
        raise CertificateFormatError(f"malformed certificate: {exc!r}") from exc


def cover_from_json(text: str) -> Cover:
    try:
        return cover_from_dict(json.loads(text))
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"not JSON: {exc}") from exc

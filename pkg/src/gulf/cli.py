"""Command line: gulf {compute,chain,verify,construct,transform,params}.

Every command prints exactly one JSON document on stdout. Exit status:
0 success, 1 invalid certificate or infeasible, 2 undecided within budget,
3 usage error. Flags can be preset through GULF_* environment variables
(for example GULF_BUDGET_NODES); explicit flags win."""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import params as P
from .classes import UnknownClassError, registry_lookup
from .constructions import FAMILIES, construct
from .covers import CertificateFormatError, cover_from_json, cover_to_dict, verify_cover
from .graph import GraphFormatError, parse_digraph, read_graph_file, to_graph6
from .solvers import VARIANTS, SolveBudget, UnsupportedClassError, chain_check, solve
from . import transforms as T

EXIT_OK, EXIT_INVALID, EXIT_UNDECIDED, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env(name: str, cast=str, default=None):
    raw = os.environ.get("GULF_" + name.upper().replace("-", "_"))
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"GULF_{name.upper()}={raw!r} is not a valid {cast.__name__}")


def _budget_args(p):
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--budget-seconds", type=float, default=None)
    p.add_argument("--multiplicity-cap", type=int, default=None)
    p.add_argument("--edge-repetition", choices=["on", "off", "auto"], default=None)


def _budget(a) -> SolveBudget:
    nodes = a.budget_nodes if a.budget_nodes is not None else _env("budget_nodes", int, 10**7)
    secs = a.budget_seconds if a.budget_seconds is not None else _env("budget_seconds", float, 60.0)
    cap = a.multiplicity_cap if a.multiplicity_cap is not None else _env("multiplicity_cap", int)
    rep = a.edge_repetition or _env("edge_repetition", str, "auto")
    if rep not in ("on", "off", "auto"):
        raise UsageError("edge repetition must be on, off or auto")
    try:
        return SolveBudget(node_limit=nodes, time_limit=secs, multiplicity_cap=cap,
                           edge_repetition=None if rep == "auto" else rep == "on")
    except ValueError as exc:
        raise UsageError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gulf", description="covering numbers of graphs: compute, certify, construct, transform")
    sub = p.add_subparsers(dest="cmd", parser_class=_Parser)

    c = sub.add_parser("compute", help="exact covering number with certificate")
    c.add_argument("host")
    c.add_argument("--class", dest="cls", default=None)
    c.add_argument("--variant", choices=VARIANTS, default=None)
    _budget_args(c)

    c = sub.add_parser("chain", help="all four covering numbers and the chain check")
    c.add_argument("host")
    c.add_argument("--class", dest="cls", default=None)
    _budget_args(c)

    c = sub.add_parser("verify", help="check a certificate")
    c.add_argument("certificate")
    c.add_argument("--class", dest="cls", default=None, help="class to check against (default: the one named inside)")

    c = sub.add_parser("construct", help="build a family with its certificate")
    c.add_argument("family", choices=FAMILIES)
    c.add_argument("--param", type=int, default=None)
    c.add_argument("--digraph", default=None)
    c.add_argument("--out", default=None)

    c = sub.add_parser("transform", help="turn one certificate into another")
    c.add_argument("name", choices=sorted(T.TRANSFORMS))
    c.add_argument("--in", dest="inp", default=None)
    c.add_argument("--aux", default=None, help="tree decomposition JSON for local-to-union-tw")
    c.add_argument("--out", default=None)
    c.add_argument("--class", dest="cls", default=None)

    c = sub.add_parser("params", help="graph parameters")
    c.add_argument("host")
    for flag in ("chi", "mad", "tw", "arboricity", "planar"):
        c.add_argument("--" + flag, action="store_true")
    return p


def _need(value, name: str):
    if value is None:
        raise UsageError(f"missing {name}")
    return value


def _load_host(path):
    try:
        return read_graph_file(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


def _load_class(name):
    try:
        return registry_lookup(name)
    except UnknownClassError:
        raise UsageError(f"unknown class {name!r}")


def _load_cover(path):
    try:
        with open(path) as fh:
            return cover_from_json(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


def _cmd_compute(a):
    host = _load_host(a.host)
    cls = _load_class(_need(a.cls or _env("class"), "--class"))
    variant = _need(a.variant or _env("variant"), "--variant")
    if variant not in VARIANTS:
        raise UsageError(f"unknown variant {variant!r}")
    res = solve(host, cls, variant, _budget(a))
    if res.decided:
        code = EXIT_OK
    elif res.binding_budget == "infeasible":
        code = EXIT_INVALID
    else:
        code = EXIT_UNDECIDED
    return res.to_dict(), code


def _cmd_chain(a):
    host = _load_host(a.host)
    cls = _load_class(_need(a.cls or _env("class"), "--class"))
    rep = chain_check(host, cls, _budget(a))
    out = rep.to_dict()
    out["class"] = cls.name
    out["host"] = to_graph6(host)
    if not rep.holds:
        return out, EXIT_INVALID
    return out, EXIT_OK if all(r.decided for r in rep.results.values()) else EXIT_UNDECIDED


def _cmd_verify(a):
    cover = _load_cover(a.certificate)
    name = a.cls or cover.class_name
    cls = _load_class(name)
    rep = verify_cover(cover, cls)
    out = {"valid": rep.valid, "class": name, "achieved_locality": rep.achieved_locality,
           "achieved_globality": rep.achieved_globality, "injective": rep.injective,
           "first_violation": rep.first_violation(), "diagnostics": list(rep.diagnostics)}
    if not rep.valid:
        print(rep.first_violation(), file=sys.stderr)
    return out, EXIT_OK if rep.valid else EXIT_INVALID


def _cmd_construct(a):
    param = a.param if a.param is not None else _env("param", int)
    param = _need(param, "--param")
    d = None
    if a.digraph:
        try:
            with open(a.digraph) as fh:
                d = parse_digraph(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read {a.digraph}: {exc.strerror}")
    try:
        fam = construct(a.family, param, d)
    except ValueError as exc:
        raise UsageError(str(exc))
    rep = verify_cover(fam.cover, fam.guest_class)
    out = {"family": a.family, "param": param, "class": fam.guest_class.name,
           "host": to_graph6(fam.host), "guests": [to_graph6(g) for g in fam.guests],
           "valid": rep.valid, "locality": rep.achieved_locality, "globality": rep.achieved_globality}
    outdir = a.out or _env("out")
    if outdir:
        os.makedirs(outdir, exist_ok=True)
        hostname = f"H_{param}.g6" if a.family in ("tw-sep", "grid-sep") else "host.g6"
        files = {hostname: to_graph6(fam.host) + "\n",
                 "guests.g6": "".join(to_graph6(g) + "\n" for g in fam.guests),
                 "cover.json": json.dumps(cover_to_dict(fam.cover), indent=2) + "\n"}
        for fn, text in files.items():
            with open(os.path.join(outdir, fn), "w") as fh:
                fh.write(text)
        out["files"] = sorted(files)
    return out, EXIT_OK if rep.valid else EXIT_INVALID


def _load_td(path, host):
    """Tree decomposition JSON: {"bags": [[...], ...], "tree": [[a, b], ...]}."""
    from .graph import Graph
    try:
        with open(path) as fh:
            d = json.load(fh)
        bags = tuple(frozenset(int(x) for x in b) for b in d["bags"])
        tree = Graph(len(bags), [tuple(e) for e in d["tree"]])
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read tree decomposition {path}: {exc}")
    return P.TreeDecomposition(tree, bags, optimal=False)


def _cmd_transform(a):
    cover = _load_cover(_need(a.inp or _env("in"), "--in"))
    cls = _load_class(a.cls or cover.class_name)
    host = cover.host
    try:
        if a.name == "union-to-global":
            out = T.union_to_global_compose(host, cover, cls)
        elif a.name == "local-to-union-tw":
            td = _load_td(a.aux, host) if a.aux else P.treewidth(host)[1]
            out = T.local_to_union_via_treewidth(host, cover, cls, td)
        elif a.name == "folded-to-union-bipartite":
            out = T.folded_to_union_bipartite(host, cover, cls)
        elif a.name == "folded-to-local-star":
            out = T.folded_to_local_star(host, cover, cls)
        elif a.name == "folded-to-union-sparse":
            out = T.folded_to_union_sparse(host, cover, cls)
        else:
            out = T.folded_to_union_chromatic(host, cover, cls)
    except T.TransformError as exc:
        print(str(exc), file=sys.stderr)
        return {"error": str(exc)}, EXIT_INVALID
    except P.Undecided as exc:
        return {"error": str(exc)}, EXIT_UNDECIDED
    doc = cover_to_dict(out)
    dest = a.out or _env("out")
    if dest:
        with open(dest, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    return doc, EXIT_OK


def _cmd_params(a):
    host = _load_host(a.host)
    want = {f for f in ("chi", "mad", "tw", "arboricity", "planar") if getattr(a, f)}
    if not want:
        want = {"chi", "mad", "tw", "arboricity", "planar"}
    out = {"host": to_graph6(host), "n": host.n, "m": host.m}
    code = EXIT_OK
    if "chi" in want:
        r = P.chromatic_number(host)
        out["chi"] = r.value if r.decided else {"lower": r.lower, "upper": r.upper}
        if not r.decided:
            code = EXIT_UNDECIDED
    if "mad" in want:
        out["mad"] = str(P.mad(host))
    if "tw" in want:
        w, td = P.treewidth(host)
        out["tw"] = w if td.optimal else {"upper": w}
        out["tree_decomposition"] = {"bags": [sorted(b) for b in td.bags], "tree": sorted(td.tree.edges)}
        if not td.optimal:
            code = EXIT_UNDECIDED
    if "arboricity" in want:
        out["arboricity"] = P.arboricity_nash_williams(host)
    if "planar" in want:
        out["planar"] = P.is_planar(host)
    return out, code


COMMANDS = {"compute": _cmd_compute, "chain": _cmd_chain, "verify": _cmd_verify,
            "construct": _cmd_construct, "transform": _cmd_transform, "params": _cmd_params}


def main(argv=None) -> int:
    try:
        a = build_parser().parse_args(argv)
        if not a.cmd:
            raise UsageError("missing subcommand")
        doc, code = COMMANDS[a.cmd](a)
    except UsageError as exc:
        doc, code = {"error": str(exc)}, EXIT_USAGE
        print(f"usage error: {exc}", file=sys.stderr)
    except (GraphFormatError, CertificateFormatError) as exc:
        doc, code = {"error": str(exc)}, EXIT_INVALID
        print(str(exc), file=sys.stderr)
    except UnsupportedClassError as exc:
        doc, code = {"error": str(exc)}, EXIT_USAGE
        print(str(exc), file=sys.stderr)
    json.dump(doc, sys.stdout)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Turning one kind of cover into another, each step re-verified."""

from gulf import params as P
from gulf import transforms as T
from gulf.classes import registry_lookup
from gulf.covers import verify_cover
from gulf.graph import Graph, complete_graph, cycle_graph, star_graph
from gulf.solvers import solve

lin = registry_lookup("linear-forests")
host = Graph(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (0, 4)])

folded = solve(host, lin, "folded").certificate
print("folded locality:", folded.locality(), " mad:", P.mad(host))
union = T.folded_to_union_sparse(host, folded, lin)
print("sparse route -> union layers:", verify_cover(union, lin).achieved_globality)

forests = registry_lookup("forests")
folded = solve(complete_graph(7), forests, "folded").certificate
union = T.folded_to_union_chromatic(complete_graph(7), folded, forests)
print("K7 chromatic route -> union layers:", verify_cover(union, forests).achieved_globality)

stars = registry_lookup("stars")
local = solve(cycle_graph(8), stars, "local").certificate
w, td = P.treewidth(cycle_graph(8))
union = T.local_to_union_via_treewidth(cycle_graph(8), local, stars, td)
print(f"C8 stars: local {local.locality()}, tw {w} -> union layers {verify_cover(union, stars).achieved_globality}")

bip = registry_lookup("bipartite")
folded = solve(star_graph(5), bip, "folded").certificate
print("K_1,5 folded -> local:", T.folded_to_local_star(star_graph(5), folded, bip).locality())

parts = T.decompose_bipartite_log(complete_graph(10))
print("K10 into", len(parts), "bipartite parts")

"""Four covering numbers of K7, with the certificates behind them."""

from gulf.classes import registry_lookup
from gulf.covers import cover_to_json, verify_cover
from gulf.graph import complete_graph
from gulf.solvers import chain_check, solve

k7 = complete_graph(7)

# triangles only: the Fano plane gives 7 guests, and 5 layers of disjoint triangles
tri = registry_lookup("k3-only")
for variant in ("global", "union", "local", "folded"):
    r = solve(k7, tri, variant)
    print(f"{variant:>6}: {r.value}  (lower bound {r.lower_bound}: {r.lower_bound_proof})")

# letting single edges in changes the union number
print("union with K2 allowed:", solve(k7, registry_lookup("triangles"), "union").value)

# the local certificate, checked independently of the solver
cert = solve(k7, tri, "local").certificate
rep = verify_cover(cert, tri)
print("local certificate valid:", rep.valid, "max load", rep.achieved_locality)
print(cover_to_json(cert)[:160], "...")

# C4-free guests: folding helps, 2 instead of 3
c4free = registry_lookup("forb-c4")
print("C4-free folded/local:", solve(k7, c4free, "folded").value, solve(k7, c4free, "local").value)

rep = chain_check(k7, tri)
print("chain holds:", rep.holds, rep.values())

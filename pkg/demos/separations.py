"""Hosts where a 2-local cover exists but union covers need many layers."""

from gulf import params as P
from gulf.constructions import build_grid_family, build_tw_family
from gulf.covers import verify_cover
from gulf.graph import cycle_lengths
from gulf.solvers import lower_bound_unique_copies

for t in (4, 5):
    fam = build_tw_family(t)
    rep = verify_cover(fam.cover, fam.guest_class)
    cert = lower_bound_unique_copies(fam.host, fam.guests)
    print(f"forest family t={t}: {fam.host.n} vertices, forest={P.is_forest(fam.host)}, "
          f"cover locality {rep.achieved_locality}, union needs >= {cert.value}")
    print("   forced meeting points:", cert.trace["intersections"])

fam = build_grid_family(4)
rep = verify_cover(fam.cover, fam.guest_class)
cert = lower_bound_unique_copies(fam.host, fam.guests)
print(f"planar family l=4: planar={P.is_planar(fam.host)}, locality {rep.achieved_locality}, "
      f"union needs >= {cert.value}, cycle lengths {sorted(cycle_lengths(fam.host))}")

"""
Periods, ranks and torus covers
===============================

The period map sends relative homology classes to vectors in the plane.
For S(a) with irrational a the absolute periods span a rational space of
dimension 4; for a square-tiled surface they collapse to dimension 2 and
the surface covers a torus.
"""

from fractions import Fraction

from flatlab import (
    build_mcmullen_surface,
    detect_torus_cover,
    homology_bases,
    l_shaped_surface,
    left_inverse_r,
    tau_rank,
)
from flatlab.errors import DegenerateTau

S = build_mcmullen_surface(Fraction(1, 2))
d = homology_bases(S)
print("relative rank", d.rel_rank, "absolute rank", d.abs_rank)
for w, x, y in zip(d.rel_basis, *d.period_matrix):
    print("  edge word", w, "->", (str(x), str(y)))

print(tau_rank(S, d))

# r inverts the inclusion on rational homology and kills one relative class
r = left_inverse_r(S, d)
for row in r.matrix:
    print("  ", [str(x) for x in row])
print("ker r:", r.kernel)

# The L-shaped surface of three unit squares is a degree-3 torus cover.
L = l_shaped_surface()
rep = tau_rank(L)
print("L:", "q_dim", rep.q_dim, "lattice", [(str(x), str(y)) for x, y in rep.torus_lattice])
cover = detect_torus_cover(L)
print("covering degree", cover.degree, "branch points", cover.branch_points)

try:
    left_inverse_r(L)
except DegenerateTau as exc:
    print("no left inverse on L:", exc)

for b in (2, 3, 5, Fraction(1, 2)):
    rep = tau_rank(build_mcmullen_surface(b))
    print(f"b = {b}: Z-rank {rep.z_rank}, Q-dimension {rep.q_dim}")

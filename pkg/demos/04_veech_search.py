"""
Searching for Veech group elements
==================================

Periodic directions with commensurable cylinder moduli give parabolic
elements.  Products of these inside a hyperbolic ball are checked one by
one against the surface, and the counts feed a growth-rate estimate.
"""

import time

from flatlab import (
    build_mcmullen_surface,
    critical_exponent_estimate,
    cylinder_decomposition,
    enumerate_stabilizer,
    l_shaped_surface,
    parabolic_in_direction,
    sl2z_ball,
    square_torus,
)

L = l_shaped_surface()
for v in ((1, 0), (0, 1), (1, 1)):
    dec = cylinder_decomposition(L, v)
    print("L, direction", v, "moduli", [str(m) for m in dec.moduli])
    P = parabolic_in_direction(L, v)
    print("   parabolic", [[str(x) for x in row] for row in P])

S = build_mcmullen_surface(2)
dec = cylinder_decomposition(S, (1, 0))
for c in dec.cylinders:
    print("S(a) horizontal cylinder: circumference %.4f height %.4f modulus %s" % (c.circumference, c.height, c.modulus))

t = time.perf_counter()
en = enumerate_stabilizer(S, 5)
print(f"S(a): {len(en.elements)} verified elements from {len(en.generators)} generators in {time.perf_counter() - t:.1f}s")

# On the square torus every element of SL2(Z) is found, so the estimate
# log #ball / R follows the lattice count, which grows like e^R.
en = enumerate_stabilizer(square_torus(), 6)
est = critical_exponent_estimate(en.elements, [2, 4, 6])
for R, n, dh in est.rows():
    print(f"R={R:g}: {n} elements (SL2(Z) has {len(sl2z_ball(R))}), delta_hat {dh:.4f}")

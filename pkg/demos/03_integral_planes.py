"""
Integral symplectic planes
==========================

A plane V in R^n is D-integral when V meets Z^n in a lattice of
symplectic covolume D.  Then A_V, which is D times the identity on V and
zero on its symplectic complement, is an integer matrix.
"""

from fractions import Fraction

from flatlab import (
    SizeInput,
    SymplecticPlane,
    build_AV,
    classify_size,
    discreteness_probe,
    eigenplane_decomposition,
    is_D_integral,
    is_eta_integral,
    split_form,
    standard_form,
    sqrt_rational,
)

w = standard_form(4)
V = SymplecticPlane.span([1, 0, 1, 0], [0, 2, 0, -1])
res = is_D_integral(w, V, 1)
print("covolume:", res.covolume, "reason:", res.reason)
res = is_D_integral(w, V, res.covolume)
print("certificate A_V:")
for row in res.operator:
    print("  ", row)

print("A_V for e1, 2 e2:", build_AV(w, [1, 0, 0, 0], [0, 2, 0, 0]))

# an irrational plane meets Z^4 in too little
s2 = sqrt_rational(2)
K = s2.field
irr = SymplecticPlane.span([K.one(), s2, K.zero(), K.zero()], [K.zero(), K.one(), K.one(), K.zero()])
print("irrational plane:", is_D_integral(w, irr, 1).reason)

# Real multiplication by the golden ratio: two copies of the Fibonacci matrix.
# With the pairing e1^e3 + e2^e4 the two eigenplanes are symplectic.
A = [[0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 1]]
J = split_form(4)
dec = eigenplane_decomposition(A, J)
for p in dec.planes:
    print("eta =", p.eta, "plane", [[str(x) for x in v] for v in p.basis])
phi = max(dec.planes, key=lambda p: p.eta)
print("eta-integral:", is_eta_integral(J, phi.plane(), phi.eta, phi.eta.conjugate()).operator)

# Integral planes are isolated: nothing else within a small angle.
E = SymplecticPlane.span([1, 0, 0, 0], [0, 1, 0, 0])
for radius in (Fraction(1, 1000), Fraction(1, 2), Fraction(2)):
    print("radius", radius, "->", discreteness_probe(w, E, D=1, radius=radius, bound=2).count, "other members")

for x in (SizeInput(1, 1, 4, 2, 0), SizeInput(1, 2, 4, 2, 0), SizeInput(2, 1, 4, 2, 0), SizeInput(1, 2, 6, 3, 0)):
    print(x, "->", classify_size(x))

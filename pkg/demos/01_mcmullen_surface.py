"""
The three-square surface S(a)
=============================

Build the surface of three squares with sides 1, 1 + a and a, glue
opposite edges, and look at what comes out: the stratum, the area and the
action of a few matrices.
"""

from fractions import Fraction

from flatlab import (
    apply_matrix,
    area,
    build_mcmullen_surface,
    canonical_form,
    classify_stratum,
    dumps,
    make_mcmullen_parameter,
    rational,
)

# a is the positive root of a^2 - a - b = 0, so b = 2 gives a = 1 + sqrt(3)
a = make_mcmullen_parameter(2)
print("a =", a, "~", float(a))

S = build_mcmullen_surface(2)
print(S)
for p, poly in enumerate(S.polygons):
    print(f"  polygon {p}:", [(str(x), str(y)) for x, y in poly])

# two cone points of angle 4 pi, genus 2
sig = classify_stratum(S)
print("stratum:", sig, "cone angles / 2pi:", sig.cone_angles)

# 1 + (1 + a)^2 + a^2
print("area:", area(S))

# The SL2 action keeps the area and the stratum.  u(1) is a horizontal shear.
Q = rational
u1 = ((Q(1), Q(1)), (Q(0), Q(1)))
T = apply_matrix(u1, S)
print("area after u(1):", area(T), "stratum:", classify_stratum(T))
print("u(1) S equals S up to cut and paste?", canonical_form(T) == canonical_form(S))

# -I always comes back: genus-2 surfaces are hyperelliptic
minus = ((Q(-1), Q(0)), (Q(0), Q(-1)))
print("-I S equals S?", canonical_form(apply_matrix(minus, S)) == canonical_form(S))

# rational b with a perfect-square discriminant is refused
try:
    build_mcmullen_surface(Fraction(1))
except Exception as exc:
    print(type(exc).__name__ + ":", exc)

# the JSON form used by the command line
print(dumps(S)[:200], "...")

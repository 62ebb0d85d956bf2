"""Veech group elements: membership, cylinders, parabolics, enumeration and growth.

All matrices are ``((a, b), (c, d))`` tuples of exact scalars.  The ball
function is ``||g||_B = arccosh(||g||_F^2 / 2)``, the hyperbolic displacement
of ``i`` under ``g``; an element lies in the ball of radius ``R`` iff
``||g||_F^2 <= 2 cosh R``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import EmptyInput, IncommensurableModuli, IncompatibleFields, NotPeriodicDirection
from .exact_scalar import ExactScalar, common_field, rational
from .surface import FlatSurface, _coerce_matrix, apply_matrix, area, cross, mat_det
from .triangulation import CanonicalForm, Triangulation, canonical_form

Matrix = tuple[tuple[ExactScalar, ExactScalar], tuple[ExactScalar, ExactScalar]]


def _mat(g) -> Matrix:
    (a, b), (c, d) = _coerce_matrix(g)
    return ((a, b), (c, d))


def mat_mul(g: Matrix, h: Matrix) -> Matrix:
    (a, b), (c, d) = g
    (e, f), (x, y) = h
    return ((a * e + b * x, a * f + b * y), (c * e + d * x, c * f + d * y))


def mat_inv(g: Matrix) -> Matrix:
    (a, b), (c, d) = g
    det = a * d - b * c
    return ((d / det, -b / det), (-c / det, a / det))


def frobenius_sq(g: Matrix) -> ExactScalar:
    (a, b), (c, d) = g
    return a * a + b * b + c * c + d * d


def ball_norm(g: Matrix) -> float:
    """``arccosh(||g||_F^2 / 2)``."""
    return math.acosh(max(1.0, float(frobenius_sq(g)) / 2))


def in_ball(g: Matrix, R: float) -> bool:
    return frobenius_sq(g) <= _ball_threshold(R)


def _ball_threshold(R: float) -> Fraction:
    # 2 cosh R, rounded outward by a relative 1e-12 so float rounding never drops a boundary element
    return Fraction(2 * math.cosh(R)) * (1 + Fraction(1, 10**12))


def matrix_key(g: Matrix) -> tuple:
    return tuple(x.key() for row in g for x in row)


def matrix_sort_key(g: Matrix) -> tuple:
    return (float(frobenius_sq(g)), tuple(float(x) for row in g for x in row), matrix_key(g))


def identity_matrix() -> Matrix:
    one, zero = rational(1), rational(0)
    return ((one, zero), (zero, one))


# -- membership ------------------------------------------------------------------------------

def is_stabilizer_element(g, s: FlatSurface, reference: CanonicalForm | None = None) -> bool:
    """True iff ``g`` (det 1) maps ``s`` to a translation-equivalent surface."""
    g = _mat(g)
    K = common_field(*g[0], *g[1])
    if K.degree > 1 and s.field.degree > 1 and K is not s.field:
        raise IncompatibleFields(f"matrix over {K!r}, surface over {s.field!r}")
    if mat_det(g) != 1:
        raise ValueError("stabilizer candidates must have determinant 1")
    ref = reference or canonical_form(s)
    return canonical_form(apply_matrix(g, s)) == ref


# -- cylinders -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Cylinder:
    holonomy: tuple[ExactScalar, ExactScalar]  # core curve holonomy, parallel to the direction
    area: ExactScalar
    modulus: ExactScalar  # height / circumference

    @property
    def circumference(self) -> float:
        return math.hypot(float(self.holonomy[0]), float(self.holonomy[1]))

    @property
    def height(self) -> float:
        return float(self.area) / self.circumference


@dataclass(frozen=True)
class CylinderDecomposition:
    direction: tuple[ExactScalar, ExactScalar]
    cylinders: tuple[Cylinder, ...]
    saddle_connections: tuple[tuple[ExactScalar, ExactScalar], ...]

    @property
    def moduli(self) -> tuple[ExactScalar, ...]:
        return tuple(c.modulus for c in self.cylinders)


def _direction(direction, field) -> tuple[ExactScalar, ExactScalar]:
    vx, vy = _coerce_matrix((direction, (0, 0)))[0]
    if not vx and not vy:
        raise ValueError("direction must be nonzero")
    return vx, vy


def _rotation_to_horizontal(v) -> Matrix:
    vx, vy = v
    return ((vx, vy), (-vy, vx))


def cylinder_decomposition(s: FlatSurface, direction, max_steps: int = 2000) -> CylinderDecomposition:
    """Cylinders of a completely periodic direction.

    The surface is rotated and scaled so the direction becomes horizontal.
    Every outgoing horizontal separatrix must end at a vertex within
    ``max_steps`` triangle crossings; otherwise :class:`NotPeriodicDirection`
    is raised (an inconclusive verdict, not a proof of non-periodicity).
    """
    v = _direction(direction, s.field)
    M = _rotation_to_horizontal(v)
    norm2 = v[0] * v[0] + v[1] * v[1]
    sm = apply_matrix(M, s)
    tri = Triangulation.from_surface(sm).make_delaunay()
    K = tri.field
    zero, one = K.zero(), K.one()
    east, north = (one, zero), (zero, one)

    # saddle connections: east rays from every corner sector containing east
    saddles = []  # list of segment lists
    seg_by_tri: dict[int, list] = {}
    for t in range(len(tri)):
        for i in range(3):
            if not tri.corner_for_direction(t, i, east):
                continue
            p = tri.vertex(t, i)
            segs = list(_run(tri.trace(t, p, east, max_steps)))
            saddles.append(segs)
            for seg in segs:
                seg_by_tri.setdefault(seg[0], []).append(seg)

    def hits_saddle(t, p, q, s0, s1):
        # vertical segment p -> q in triangle t against horizontal saddle pieces
        best = None
        for (tt, a, b, _u0, _u1) in seg_by_tri.get(t, ()):
            y = a[1]
            if not (y <= q[1] and (p[1] < y or (s0 > 0 and p[1] == y))):
                continue
            lo, hi = (a[0], b[0]) if a[0] <= b[0] else (b[0], a[0])
            if lo <= p[0] <= hi:
                h = s0 + (y - p[1])
                if best is None or h < best:
                    best = h
        return None if best is None else ("saddle", best)

    cylinders = {}
    for segs in saddles:
        total = segs[-1][4]
        half = total / 2
        for (t, a, b, s0, s1) in segs:
            if s0 <= half <= s1:
                mid = (a[0] + (half - s0), a[1])
                break
        kind, H = _finish(tri.trace(t, mid, north, max_steps, stop=hits_saddle))

        def at_height(t2, p, q, s0, s1, target=H / 2):
            if s0 < target <= s1:
                return ("point", t2, (p[0], p[1] + (target - s0)))
            return None

        _, tc, c = _finish(tri.trace(t, mid, north, max_steps, stop=at_height))
        tc, c = tri.orient_start(tc, c, east)

        crossings = []

        def back_home(t2, p, q, s0, s1):
            if s0 > 0:
                crossings.append((t2, p[0].key(), p[1].key()))
                if t2 == tc and p[1] == c[1] and p[0] <= c[0] <= q[0]:
                    return ("closed", s0 + (c[0] - p[0]))
            return None

        res = _finish(tri.trace(tc, c, east, max_steps, stop=back_home))
        if res[0] != "closed":
            raise NotPeriodicDirection("cylinder core leaf hit a vertex")
        L = res[1]
        key = frozenset(crossings)
        if key not in cylinders:
            cylinders[key] = (H, L)

    cyls = []
    total_area = zero
    for key in sorted(cylinders, key=lambda k: sorted(k)):
        H, L = cylinders[key]
        hol = (L * v[0] / norm2, L * v[1] / norm2)
        cyl_area = H * L / norm2
        total_area = total_area + cyl_area
        cyls.append(Cylinder(hol, cyl_area, H / L))
    if total_area != area(s):
        raise NotPeriodicDirection(
            "cylinders do not fill the surface", found=str(total_area), area=str(area(s))
        )
    sc = []
    for segs in saddles:
        length = segs[-1][4]
        sc.append((length * v[0] / norm2, length * v[1] / norm2))
    cyls.sort(key=lambda c: (float(c.modulus), float(c.area)))
    return CylinderDecomposition(v, tuple(cyls), tuple(sc))


def _run(gen):
    """Collect yielded segments of a trace that must end at a vertex."""
    out = []
    while True:
        try:
            out.append(next(gen))
        except StopIteration as stop:
            if stop.value is None or stop.value[0] != "vertex":
                raise NotPeriodicDirection("separatrix trace ended unexpectedly")
            return out


def _finish(gen):
    while True:
        try:
            next(gen)
        except StopIteration as stop:
            return stop.value


# -- parabolic elements -------------------------------------------------------------------------

def _rational_lcm_twist(moduli) -> ExactScalar:
    m1 = moduli[0]
    den = 1
    bad = []
    for m in moduli:
        r = m / m1
        if not r.is_rational():
            bad.append(str(m))
            continue
        q = r.to_fraction()
        den = den * q.denominator // gcd(den, q.denominator)
    if bad:
        raise IncommensurableModuli(
            "moduli have irrational ratios", moduli=[str(m) for m in moduli]
        )
    return den / m1


def parabolic_in_direction(s: FlatSurface, direction, max_steps: int = 2000, verify: bool = True):
    """Multitwist fixing a completely periodic direction, or ``None`` for incommensurable moduli."""
    dec = cylinder_decomposition(s, direction, max_steps)
    try:
        t = _rational_lcm_twist(dec.moduli)
    except IncommensurableModuli:
        return None
    v = dec.direction
    M = _rotation_to_horizontal(v)
    one, zero = t * 0 + 1, t * 0
    U = ((one, t), (zero, one))
    P = mat_mul(mat_inv(M), mat_mul(U, M))
    if verify and not is_stabilizer_element(P, s):
        raise AssertionError("constructed parabolic failed the membership test")
    return P


# -- enumeration ---------------------------------------------------------------------------------

@dataclass(frozen=True)
class Enumeration:
    elements: tuple[Matrix, ...]
    generators: tuple[Matrix, ...]
    budget_exhausted: bool
    products_tried: int


def _direction_key(v):
    x, y = v
    if x:
        return (0, (y / x).key())
    return (1,)


def candidate_directions(s: FlatSurface, limit: int = 12):
    """Short holonomy vectors of Delaunay edges and their pairwise sums, one per direction."""
    tri = Triangulation.from_surface(s).make_delaunay()
    vecs = {}
    base = [tri.vecs[t][i] for t in range(len(tri)) for i in range(3)]
    pool = list(base)
    for a in base:
        for b in base:
            pool.append((a[0] + b[0], a[1] + b[1]))
    for v in pool:
        if not v[0] and not v[1]:
            continue
        k = _direction_key(v)
        n = float(v[0] * v[0] + v[1] * v[1])
        if k not in vecs or n < vecs[k][0]:
            vecs[k] = (n, v)
    ordered = sorted(vecs.values(), key=lambda nv: (nv[0], _direction_key(nv[1])))
    return [v for _n, v in ordered[:limit]]


def _verify_batch(args):
    s, ref_enc, mats = args
    ref = CanonicalForm(ref_enc, ())
    return [canonical_form(apply_matrix(g, s)) == ref for g in mats]


def enumerate_stabilizer(
    s: FlatSurface,
    R: float,
    budget: int = 10**6,
    directions: int = 12,
    max_steps: int = 2000,
    threads: int = 1,
) -> Enumeration:
    """Verified stabilizer elements with ``||g||_B <= R``.

    Generators are parabolics in short periodic directions (plus ``-I`` when
    it stabilizes).  Products are closed breadth-first inside the ball; every
    returned element passes the membership test.  Completeness is not claimed.
    """
    if R <= 0:
        raise ValueError("R must be positive")
    ref = canonical_form(s)
    gens = []
    for v in candidate_directions(s, directions):
        try:
            P = parabolic_in_direction(s, v, max_steps, verify=False)
        except NotPeriodicDirection:
            continue
        if P is None:
            continue
        gens.append(P)
        gens.append(mat_inv(P))
    minus = ((rational(-1), rational(0)), (rational(0), rational(-1)))
    if is_stabilizer_element(minus, s, ref):
        gens.append(minus)
    uniq = {}
    for g in gens:
        uniq.setdefault(matrix_key(g), g)
    gens = sorted(uniq.values(), key=matrix_sort_key)

    thr = _ball_threshold(R)
    ident = identity_matrix()
    found = {matrix_key(ident): ident}
    frontier = [ident]
    tried = 0
    exhausted = False
    while frontier and not exhausted:
        nxt = []
        for g in frontier:
            for h in gens:
                tried += 1
                if tried > budget:
                    exhausted = True
                    break
                p = mat_mul(g, h)
                if frobenius_sq(p) > thr:
                    continue
                k = matrix_key(p)
                if k not in found:
                    found[k] = p
                    nxt.append(p)
            if exhausted:
                break
        frontier = sorted(nxt, key=matrix_sort_key)

    candidates = sorted(found.values(), key=matrix_sort_key)
    ok = _verify(s, ref, candidates, threads)
    elements = tuple(g for g, good in zip(candidates, ok) if good)
    return Enumeration(elements, tuple(gens), exhausted, tried)


def _verify(s, ref, mats, threads):
    if threads <= 1 or len(mats) < 64:
        return _verify_batch((s, ref.encoding, mats))
    size = (len(mats) + threads - 1) // threads
    chunks = [mats[i:i + size] for i in range(0, len(mats), size)]
    with ProcessPoolExecutor(threads) as ex:
        parts = list(ex.map(_verify_batch, [(s, ref.encoding, c) for c in chunks]))
    return [x for part in parts for x in part]


# -- critical exponent ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalExponentEstimate:
    radii: tuple[float, ...]
    counts: tuple[int, ...]
    delta_hat: tuple[float, ...]

    def rows(self):
        return list(zip(self.radii, self.counts, self.delta_hat))


def critical_exponent_estimate(elements, radii) -> CriticalExponentEstimate:
    """``log #(B(R) cap Lambda) / R`` for each radius."""
    elements = [_mat(g) for g in elements]
    if not elements:
        raise EmptyInput("no elements given")
    radii = [float(r) for r in radii]
    if any(b <= a for a, b in zip(radii, radii[1:])) or any(r <= 0 for r in radii):
        raise ValueError("radii must be positive and increasing")
    norms = sorted(frobenius_sq(g) for g in elements)
    counts = []
    for R in radii:
        thr = _ball_threshold(R)
        counts.append(sum(1 for n in norms if n <= thr))
    delta = tuple(math.log(c) / R if c > 0 else float("-inf") for c, R in zip(counts, radii))
    return CriticalExponentEstimate(tuple(radii), tuple(counts), delta)


def sl2z_ball(R: float) -> list[Matrix]:
    """All of ``SL_2(Z)`` with ``||g||_F^2 <= 2 cosh R`` (exhaustive)."""
    X = 2 * math.cosh(R)
    m = int(math.isqrt(int(X))) + 1
    out = []
    for a in range(-m, m + 1):
        for b in range(-m, m + 1):
            if a * a + b * b > X:
                continue
            for c in range(-m, m + 1):
                if a * a + b * b + c * c > X:
                    continue
                for d in range(-m, m + 1):
                    if a * d - b * c == 1 and a * a + b * b + c * c + d * d <= X:
                        out.append(_mat(((a, b), (c, d))))
    return out


__all__ = [
    "Cylinder",
    "CylinderDecomposition",
    "CriticalExponentEstimate",
    "Enumeration",
    "ball_norm",
    "candidate_directions",
    "critical_exponent_estimate",
    "cylinder_decomposition",
    "enumerate_stabilizer",
    "frobenius_sq",
    "is_stabilizer_element",
    "mat_inv",
    "mat_mul",
    "parabolic_in_direction",
    "sl2z_ball",
]

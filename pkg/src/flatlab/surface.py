"""Translation surfaces as polygons with edge gluings.

A :class:`FlatSurface` is a tuple of positively oriented simple polygons
with exact vertex coordinates and a perfect matching on their edges.  Edge
``e`` of polygon ``p`` runs from vertex ``e`` to vertex ``e + 1``; a gluing
``(p, e) <-> (q, f)`` identifies the two edges by a translation, so their
edge vectors must be negatives of each other.

Vertices lying on an edge (angle ``pi`` corners) are allowed.  They are how
an edge is broken into segments so that every identification is
segment-to-segment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import (
    Disconnected,
    LengthMismatch,
    NonMultipleConeAngle,
    NonParallelGluing,
    NonSimplePolygon,
    SingularMatrix,
    UnpairedEdge,
)
from .exact_scalar import (
    QQ,
    ExactScalar,
    NumberField,
    as_scalar,
    common_field,
    make_mcmullen_parameter,
    rational,
)

Point = tuple[ExactScalar, ExactScalar]
Edge = tuple[int, int]


# -- planar predicates ---------------------------------------------------------------

def cross(u: Point, v: Point) -> ExactScalar:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Point, v: Point) -> ExactScalar:
    return u[0] * v[0] + u[1] * v[1]


def sub(u: Point, v: Point) -> Point:
    return (u[0] - v[0], u[1] - v[1])


def add(u: Point, v: Point) -> Point:
    return (u[0] + v[0], u[1] + v[1])


def scale(c, u: Point) -> Point:
    return (c * u[0], c * u[1])


def half_plane(v: Point) -> int:
    """0 for directions with angle in [0, pi), 1 for [pi, 2 pi)."""
    sy = v[1].sign()
    if sy > 0 or (sy == 0 and v[0].sign() > 0):
        return 0
    return 1


def angle_less(u: Point, v: Point) -> bool:
    """Strict comparison of polar angles in [0, 2 pi)."""
    hu, hv = half_plane(u), half_plane(v)
    if hu != hv:
        return hu < hv
    return cross(u, v).sign() > 0


def _segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Closed segments ab and cd share a point."""
    o1 = cross(sub(b, a), sub(c, a)).sign()
    o2 = cross(sub(b, a), sub(d, a)).sign()
    o3 = cross(sub(d, c), sub(a, c)).sign()
    o4 = cross(sub(d, c), sub(b, c)).sign()
    if o1 != o2 and o3 != o4 and o1 * o2 <= 0 and o3 * o4 <= 0:
        if o1 == 0 and o2 == 0:
            pass
        else:
            return True

    def on_seg(p, q, r):  # r on segment pq, given collinear
        return (
            min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
            and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])
        )

    if o1 == 0 and on_seg(a, b, c):
        return True
    if o2 == 0 and on_seg(a, b, d):
        return True
    if o3 == 0 and on_seg(c, d, a):
        return True
    if o4 == 0 and on_seg(c, d, b):
        return True
    return False


# -- the surface value ---------------------------------------------------------------

@dataclass(frozen=True)
class StratumSignature:
    genus: int
    zero_orders: tuple[int, ...]
    cone_angles: tuple[int, ...]  # total angle of each singular point, in units of 2*pi
    marked_points: int = 0  # vertex classes of angle exactly 2*pi

    def __str__(self) -> str:
        if not self.zero_orders:
            return f"H() genus {self.genus}"
        return f"H({','.join(map(str, self.zero_orders))}) genus {self.genus}"


class FlatSurface:
    """Immutable translation surface given by glued polygons."""

    __slots__ = ("field", "polygons", "gluings", "label", "__dict__")

    def __init__(self, field: NumberField, polygons, gluings: dict, label: str | None = None):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "polygons", polygons)
        object.__setattr__(self, "gluings", gluings)
        object.__setattr__(self, "label", label)

    def __setattr__(self, name, value):
        if name in FlatSurface.__slots__[:4]:
            raise AttributeError("FlatSurface is immutable")
        object.__setattr__(self, name, value)

    # -- combinatorics ----------------------------------------------------------------
    def edges(self) -> Iterable[Edge]:
        for p, poly in enumerate(self.polygons):
            for e in range(len(poly)):
                yield (p, e)

    def edge_vector(self, p: int, e: int) -> Point:
        poly = self.polygons[p]
        return sub(poly[(e + 1) % len(poly)], poly[e])

    def partner(self, p: int, e: int) -> Edge:
        return self.gluings[(p, e)]

    @cached_property
    def edge_pairs(self) -> tuple[Edge, ...]:
        """One representative per glued pair: the lexicographically smaller side."""
        return tuple(pe for pe in self.edges() if pe <= self.gluings[pe])

    @cached_property
    def edge_index(self) -> dict[Edge, tuple[int, int]]:
        """Map a polygon edge to ``(pair index, +1 | -1)`` relative to its representative."""
        out = {}
        for i, rep in enumerate(self.edge_pairs):
            out[rep] = (i, 1)
            out[self.gluings[rep]] = (i, -1)
        return out

    @cached_property
    def vertex_classes(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Corners ``(p, i)`` grouped by the surface point they represent.

        Each class is listed in counterclockwise order around its point.
        """
        seen = set()
        classes = []
        for p, poly in enumerate(self.polygons):
            for i in range(len(poly)):
                if (p, i) in seen:
                    continue
                cyc = []
                cur = (p, i)
                while cur not in seen:
                    seen.add(cur)
                    cyc.append(cur)
                    cur = self._next_corner_ccw(*cur)
                classes.append(tuple(cyc))
        return tuple(classes)

    def _next_corner_ccw(self, p: int, i: int) -> tuple[int, int]:
        n = len(self.polygons[p])
        q, f = self.gluings[(p, (i - 1) % n)]
        return (q, f)

    @cached_property
    def corner_class(self) -> dict[tuple[int, int], int]:
        out = {}
        for k, cls in enumerate(self.vertex_classes):
            for c in cls:
                out[c] = k
        return out

    def corner_directions(self, p: int, i: int) -> tuple[Point, Point]:
        """Outgoing edge direction and reversed incoming edge direction at a corner."""
        poly = self.polygons[p]
        n = len(poly)
        return sub(poly[(i + 1) % n], poly[i]), sub(poly[(i - 1) % n], poly[i])

    @cached_property
    def cone_angle_multiples(self) -> tuple[int, ...]:
        """Total angle of each vertex class divided by ``2 pi``."""
        out = []
        for cls in self.vertex_classes:
            turns = 0
            for p, i in cls:
                d_out, d_in = self.corner_directions(p, i)
                if angle_less(d_in, d_out):
                    turns += 1
            if turns < 1:
                raise NonMultipleConeAngle(
                    "vertex class with total angle below 2*pi", corners=[list(c) for c in cls]
                )
            out.append(turns)
        return tuple(out)

    @cached_property
    def singular_classes(self) -> tuple[int, ...]:
        """Indices of vertex classes with cone angle above ``2 pi`` (the zeros)."""
        return tuple(k for k, m in enumerate(self.cone_angle_multiples) if m > 1)

    # -- equality / display -------------------------------------------------------------
    def _key(self):
        return (
            self.field.key,
            tuple(tuple((x.key(), y.key()) for x, y in poly) for poly in self.polygons),
            tuple(sorted(self.gluings.items())),
        )

    def __eq__(self, other):
        return isinstance(other, FlatSurface) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self) -> str:
        name = f" {self.label!r}" if self.label else ""
        return f"<FlatSurface{name}: {len(self.polygons)} polygon(s) over {self.field!r}>"

    def __reduce__(self):
        return (_rebuild, (to_dict(self),))


def _rebuild(d):
    return from_dict(d)


# -- validation -------------------------------------------------------------------------

def _coerce_point(pt, field) -> Point:
    return (as_scalar(_parse_scalar(pt[0]), field), as_scalar(_parse_scalar(pt[1]), field))


def _parse_scalar(x):
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, (int, Fraction)):
        return rational(x)
    if isinstance(x, str):
        return rational(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floating point coordinates are not exact; use Fraction or str")
    raise TypeError(f"cannot interpret {x!r} as an exact scalar")


def _check_polygon(p: int, poly: Sequence[Point]) -> None:
    n = len(poly)
    if n < 3:
        raise NonSimplePolygon(f"polygon {p} has fewer than 3 vertices", polygon=p)
    area2 = rational(0).lift(poly[0][0].field)
    for i in range(n):
        area2 = area2 + cross(poly[i], poly[(i + 1) % n])
    if area2.sign() <= 0:
        raise NonSimplePolygon(f"polygon {p} is not positively oriented", polygon=p)
    for i in range(n):
        d_out = sub(poly[(i + 1) % n], poly[i])
        d_in = sub(poly[(i - 1) % n], poly[i])
        if not d_out[0] and not d_out[1]:
            raise NonSimplePolygon(f"polygon {p} has a zero-length edge {i}", polygon=p, edge=i)
        if cross(d_out, d_in).sign() == 0 and dot(d_out, d_in).sign() > 0:
            raise NonSimplePolygon(f"polygon {p} folds back at vertex {i}", polygon=p, vertex=i)
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            c, d = poly[j], poly[(j + 1) % n]
            if _segments_intersect(a, b, c, d):
                raise NonSimplePolygon(
                    f"polygon {p}: edges {i} and {j} intersect", polygon=p, edges=[i, j]
                )


def build_polygon_surface(polygons, gluings, label: str | None = None) -> FlatSurface:
    """Validate polygons and gluings and return a :class:`FlatSurface`.

    ``polygons`` is a sequence of vertex lists; coordinates may be ints,
    Fractions, ``"p/q"`` strings or :class:`ExactScalar`.  ``gluings`` is a
    sequence of ``((p, e), (q, f))`` pairs or a dict mapping each edge to its
    partner.  Violations raise a subclass of
    :class:`~flatlab.errors.InvalidSurface` whose ``report`` names the
    offending polygon/edge.
    """
    raw = [[(_parse_scalar(x), _parse_scalar(y)) for x, y in poly] for poly in polygons]
    field = common_field(*(c for poly in raw for pt in poly for c in pt))
    polys = tuple(tuple(_coerce_point(pt, field) for pt in poly) for poly in raw)
    for p, poly in enumerate(polys):
        _check_polygon(p, poly)

    pairs = gluings.items() if isinstance(gluings, dict) else gluings
    glue: dict[Edge, Edge] = {}
    for a, b in pairs:
        a, b = (int(a[0]), int(a[1])), (int(b[0]), int(b[1]))
        for pe in (a, b):
            if not (0 <= pe[0] < len(polys) and 0 <= pe[1] < len(polys[pe[0]])):
                raise UnpairedEdge(f"edge {pe} does not exist", edge=list(pe))
        if a == b:
            raise NonParallelGluing(f"edge {a} glued to itself", edge=list(a))
        for x, y in ((a, b), (b, a)):
            if x in glue and glue[x] != y:
                raise UnpairedEdge(f"edge {x} glued twice", edge=list(x))
            glue[x] = y
    for p, poly in enumerate(polys):
        for e in range(len(poly)):
            if (p, e) not in glue:
                raise UnpairedEdge(f"edge {(p, e)} is not glued", edge=[p, e])

    def vec(p, e):
        poly = polys[p]
        return sub(poly[(e + 1) % len(poly)], poly[e])

    for a, b in glue.items():
        if a > b:
            continue
        u, v = vec(*a), vec(*b)
        if u[0] + v[0] == 0 and u[1] + v[1] == 0:
            continue
        report = {"edges": [list(a), list(b)]}
        if cross(u, v).sign() != 0:
            raise NonParallelGluing(f"edges {a} and {b} are not parallel", **report)
        if dot(u, v).sign() > 0:
            raise NonParallelGluing(f"edges {a} and {b} have the same orientation", **report)
        raise LengthMismatch(f"edges {a} and {b} have different lengths", **report)

    parent = list(range(len(polys)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in glue.items():
        parent[find(a[0])] = find(b[0])
    if len({find(i) for i in range(len(polys))}) > 1:
        raise Disconnected("the glued complex is disconnected")

    s = FlatSurface(field, polys, glue, label)
    s.cone_angle_multiples  # raises NonMultipleConeAngle on inconsistent data
    return s


# -- builders ---------------------------------------------------------------------------

def build_opposite_edge_polygon(vertices, label: str | None = None) -> FlatSurface:
    """Single centrally symmetric polygon with each edge glued to its opposite."""
    n = len(vertices)
    if n % 2:
        raise NonParallelGluing("opposite-edge gluing needs an even number of edges")
    gl = [((0, i), (0, i + n // 2)) for i in range(n // 2)]
    return build_polygon_surface([vertices], gl, label)


def square_torus() -> FlatSurface:
    return build_opposite_edge_polygon([(0, 0), (1, 0), (1, 1), (0, 1)], "square torus")


def regular_octagon() -> FlatSurface:
    """Regular octagon with unit sides over ``Q(sqrt 2)``, opposite edges glued."""
    K = NumberField.quadratic(2)
    h = K([0, Fraction(1, 2)])  # sqrt(2)/2
    verts = [
        (0, 0), (1, 0), (1 + h, h), (1 + h, 1 + h),
        (1, 1 + 2 * h), (0, 1 + 2 * h), (-h, 1 + h), (-h, h),
    ]
    return build_opposite_edge_polygon(verts, "regular octagon")


def build_origami(right: Sequence[int], up: Sequence[int], label: str | None = None) -> FlatSurface:
    """Square-tiled surface: square ``i`` has ``right[i]`` to its right and ``up[i]`` above."""
    n = len(right)
    sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
    gl = []
    for i in range(n):
        gl.append(((i, 1), (right[i], 3)))
        gl.append(((i, 2), (up[i], 0)))
    return build_polygon_surface([sq] * n, gl, label)


def l_shaped_surface() -> FlatSurface:
    """Three unit squares in an L, opposite edges glued (a surface in H(2))."""
    return build_origami([1, 0, 2], [2, 1, 0], "L-shaped 3-square surface")


def build_mcmullen_surface(b, allow_rational: bool = False) -> FlatSurface:
    """Three squares of sides 1, 1+a, a with opposite boundary edges glued.

    Coordinates: ``[-1,0]x[0,1]``, ``[0,1+a]x[0,1+a]`` and
    ``[1+a,1+2a]x[1,1+a]`` with ``a = b - 1 + sqrt(b^2 - b + 1)``.  The edges
    of the big square are split where the small squares touch it.
    """
    a = make_mcmullen_parameter(b, allow_rational=allow_rational)
    A = 1 + a
    left = [(-1, 0), (0, 0), (0, 1), (-1, 1)]
    big = [(0, 0), (A, 0), (A, 1), (A, A), (0, A), (0, 1)]
    small = [(A, 1), (A + a, 1), (A + a, A), (A, A)]
    gl = [
        ((0, 0), (0, 2)),  # left square: bottom / top
        ((0, 1), (1, 5)),  # shared side x = 0, y in [0, 1]
        ((0, 3), (1, 1)),  # x = -1 with x = 1+a, y in [0, 1]
        ((1, 0), (1, 3)),  # big square: bottom / top
        ((1, 2), (2, 3)),  # shared side x = 1+a, y in [1, 1+a]
        ((1, 4), (2, 1)),  # x = 0 with x = 1+2a, y in [1, 1+a]
        ((2, 0), (2, 2)),  # small square: bottom / top
    ]
    return build_polygon_surface([left, big, small], gl, f"S(a), b={Fraction(b)}")


# -- GL(2) action, area, stratum ----------------------------------------------------------

def _coerce_matrix(g) -> tuple[tuple[ExactScalar, ExactScalar], tuple[ExactScalar, ExactScalar]]:
    (a, b), (c, d) = g
    return (
        (_parse_scalar(a), _parse_scalar(b)),
        (_parse_scalar(c), _parse_scalar(d)),
    )


def mat_det(g):
    (a, b), (c, d) = g
    return a * d - b * c


def apply_matrix(g, s: FlatSurface) -> FlatSurface:
    """Image of ``s`` under the linear map ``g``; orientation-reversing ``g`` reverses polygons."""
    g = _coerce_matrix(g)
    field = common_field(*g[0], *g[1])
    if field.degree == 1:
        field = s.field
    elif s.field.degree > 1 and field is not s.field:
        common_field(s.field.gen, field.gen)  # raises IncompatibleFields
    (a, b), (c, d) = [[x.lift(field) if x.is_rational() else x for x in row] for row in g]
    det = a * d - b * c
    if not det:
        raise SingularMatrix("matrix is singular")
    polys = []
    for poly in s.polygons:
        polys.append(tuple((a * x + b * y, c * x + d * y) for x, y in poly))
    gluings = s.gluings
    if det.sign() < 0:
        new_polys = []
        for poly in polys:
            n = len(poly)
            new_polys.append(tuple(poly[(-k) % n] for k in range(n)))
        lens = [len(p) for p in polys]

        def flip(pe):
            p, e = pe
            return (p, (-e - 1) % lens[p])

        gluings = {flip(k): flip(v) for k, v in s.gluings.items()}
        polys = new_polys
    polys = tuple(tuple((x.lift(field), y.lift(field)) for x, y in poly) for poly in polys)
    return FlatSurface(field, polys, dict(gluings), s.label)


def polygon_area(poly: Sequence[Point]) -> ExactScalar:
    n = len(poly)
    acc = poly[0][0] * 0
    for i in range(n):
        acc = acc + cross(poly[i], poly[(i + 1) % n])
    return acc / 2


def area(s: FlatSurface) -> ExactScalar:
    """Exact total area (shoelace formula)."""
    total = s.field.zero()
    for poly in s.polygons:
        total = total + polygon_area(poly)
    return total


def euler_characteristic(s: FlatSurface) -> int:
    return len(s.vertex_classes) - len(s.edge_pairs) + len(s.polygons)


def classify_stratum(s: FlatSurface) -> StratumSignature:
    """Genus and zero orders from vertex classes and the Euler characteristic.

    Zero orders satisfy ``sum(k_i) = 2*genus - 2``.
    """
    chi = euler_characteristic(s)
    if chi % 2:
        raise NonMultipleConeAngle("odd Euler characteristic")
    genus = (2 - chi) // 2
    mults = s.cone_angle_multiples
    orders = tuple(sorted((m - 1 for m in mults if m > 1), reverse=True))
    marked = sum(1 for m in mults if m == 1)
    if sum(orders) != 2 * genus - 2 and genus >= 1 and (orders or genus != 1):
        raise NonMultipleConeAngle(
            "cone angles inconsistent with the Euler characteristic",
            genus=genus,
            orders=list(orders),
        )
    return StratumSignature(genus, orders, tuple(sorted((m for m in mults if m > 1), reverse=True)), marked)


# -- serialization --------------------------------------------------------------------------

def _scalar_coords(x: ExactScalar) -> list[str]:
    return [f"{c.numerator}/{c.denominator}" for c in x.coordinates]


def to_dict(s: FlatSurface) -> dict:
    pairs = [[list(a), list(s.gluings[a])] for a in s.edge_pairs]
    return {
        "field": s.field.to_dict(),
        "polygons": [[[_scalar_coords(x), _scalar_coords(y)] for x, y in poly] for poly in s.polygons],
        "gluings": pairs,
        "label": s.label,
    }


def from_dict(d: dict) -> FlatSurface:
    field = NumberField.from_dict(d["field"]) if "field" in d else QQ

    def parse(c):
        if isinstance(c, list):
            return ExactScalar(field, [Fraction(x) for x in c])
        return as_scalar(_parse_scalar(c), field)

    polys = [[(parse(x), parse(y)) for x, y in poly] for poly in d["polygons"]]
    gl = [(tuple(a), tuple(b)) for a, b in d["gluings"]]
    return build_polygon_surface(polys, gl, d.get("label"))


def dumps(s: FlatSurface) -> str:
    return json.dumps(to_dict(s), indent=1, sort_keys=True)


def loads(text: str) -> FlatSurface:
    return from_dict(json.loads(text))


__all__ = [
    "FlatSurface",
    "StratumSignature",
    "build_polygon_surface",
    "build_opposite_edge_polygon",
    "build_origami",
    "build_mcmullen_surface",
    "square_torus",
    "regular_octagon",
    "l_shaped_surface",
    "apply_matrix",
    "area",
    "classify_stratum",
    "to_dict",
    "from_dict",
    "dumps",
    "loads",
]

"""Integral homology, relative homology and the period map.

The glued polygons form a CW complex: vertex classes are 0-cells, glued
edge pairs are 1-cells (oriented like their representative edge) and
polygons are 2-cells.  Homology classes are stored as integer edge words,
one coefficient per edge pair.

Relative homology is taken relative to the zeros ``Sigma`` (vertex classes
with cone angle above ``2 pi``): their rows are deleted from the boundary
map.  Marked points of angle ``2 pi`` are not part of ``Sigma``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateTau
from .exact_scalar import ExactScalar
from .linalg import (
    integer_inverse,
    integer_kernel,
    lattice_basis,
    matvec,
    nullspace,
    primitive,
    rank,
    smith_normal_form,
    solve,
    common_denominator,
)
from .surface import FlatSurface, add, area, classify_stratum, cross, dot, sub


@dataclass(frozen=True)
class PeriodData:
    """Homology bases of a surface and their periods.

    ``inclusion_matrix[i][j]`` is the ``i``-th relative coordinate of the
    ``j``-th absolute basis class, so its columns are the images under ``p*``.
    """

    rel_basis: tuple[tuple[int, ...], ...]
    abs_basis: tuple[tuple[int, ...], ...]
    inclusion_matrix: tuple[tuple[int, ...], ...]
    period_matrix: tuple[tuple[ExactScalar, ...], tuple[ExactScalar, ...]]
    abs_period_matrix: tuple[tuple[ExactScalar, ...], tuple[ExactScalar, ...]]
    sigma: tuple[int, ...]  # vertex-class indices of the zeros
    genus: int

    @property
    def rel_rank(self) -> int:
        return len(self.rel_basis)

    @property
    def abs_rank(self) -> int:
        return len(self.abs_basis)


@dataclass(frozen=True)
class TauRankReport:
    z_rank: int
    q_dim: int
    q_dim_rel: int
    holonomy_field_degree: int
    torus_lattice: tuple[tuple[ExactScalar, ExactScalar], ...] | None = None


@dataclass(frozen=True)
class TorusCover:
    lattice: tuple[tuple[ExactScalar, ExactScalar], tuple[ExactScalar, ExactScalar]]
    covolume: ExactScalar
    degree: int
    branch_points: tuple[tuple[Fraction, Fraction], ...]  # zeros in lattice coordinates mod 1


@dataclass(frozen=True)
class LeftInverse:
    matrix: tuple[tuple[Fraction, ...], ...]  # abs_rank x rel_rank
    kernel: tuple[tuple[int, ...], ...]  # primitive integer vectors in relative coordinates
    data: PeriodData = field(repr=False, compare=False)


# -- cellular chain complex -----------------------------------------------------------

def boundary_matrices(s: FlatSurface) -> tuple[list[list[int]], list[list[int]]]:
    """``d1`` (vertex classes x edge pairs) and ``d2`` (edge pairs x polygons)."""
    cls = s.corner_class
    nv, ne, nf = len(s.vertex_classes), len(s.edge_pairs), len(s.polygons)
    d1 = [[0] * ne for _ in range(nv)]
    for j, (p, e) in enumerate(s.edge_pairs):
        n = len(s.polygons[p])
        d1[cls[(p, (e + 1) % n)]][j] += 1
        d1[cls[(p, e)]][j] -= 1
    d2 = [[0] * nf for _ in range(ne)]
    for p, poly in enumerate(s.polygons):
        for e in range(len(poly)):
            j, sgn = s.edge_index[(p, e)]
            d2[j][p] += sgn
    return d1, d2


def _quotient_basis(d1_rows: list[list[int]], d2: list[list[int]], ne: int):
    """Free basis of ``ker d1 / im d2`` as edge words, plus a coordinate map."""
    K = integer_kernel(d1_rows, ncols=ne) if d1_rows else integer_kernel([], ncols=ne)
    k = len(K)
    Kcols = [[K[c][i] for c in range(k)] for i in range(ne)]  # ne x k
    nf = len(d2[0]) if d2 else 0
    B = []
    for f in range(nf):
        col = [Fraction(d2[i][f]) for i in range(ne)]
        x = solve([[Fraction(v) for v in row] for row in Kcols], col)
        B.append([int(v) for v in x])
    Bmat = [[B[f][i] for f in range(nf)] for i in range(k)]  # k x nf
    if nf:
        D, U, _V = smith_normal_form(Bmat)
        r = sum(1 for i in range(min(k, nf)) if D[i][i])
        if any(D[i][i] != 1 for i in range(r)):
            raise ArithmeticError("torsion in surface homology")
    else:
        U, r = [[int(i == j) for j in range(k)] for i in range(k)], 0
    Uinv = integer_inverse(U)
    basis = []
    for c in range(r, k):
        basis.append(tuple(sum(Kcols[i][t] * Uinv[t][c] for t in range(k)) for i in range(ne)))

    def coords(word):
        x = solve([[Fraction(v) for v in row] for row in Kcols], [Fraction(v) for v in word])
        y = matvec(U, [int(v) for v in x])
        return tuple(int(v) for v in y[r:])

    return tuple(basis), coords


def edge_word_period(s: FlatSurface, word) -> tuple[ExactScalar, ExactScalar]:
    x, y = s.field.zero(), s.field.zero()
    for c, (p, e) in zip(word, s.edge_pairs):
        if c:
            vx, vy = s.edge_vector(p, e)
            x, y = x + c * vx, y + c * vy
    return (x, y)


def homology_bases(s: FlatSurface) -> PeriodData:
    """Bases of ``H_1(S; Z)`` and ``H_1(S, Sigma; Z)`` with the inclusion and periods."""
    sig = classify_stratum(s)
    d1, d2 = boundary_matrices(s)
    ne = len(s.edge_pairs)
    sigma = s.singular_classes
    abs_basis, _ = _quotient_basis(d1, d2, ne)
    rel_rows = [row for i, row in enumerate(d1) if i not in sigma]
    rel_basis, rel_coords = _quotient_basis(rel_rows, d2, ne)
    incl_cols = [rel_coords(w) for w in abs_basis]
    incl = tuple(tuple(col[i] for col in incl_cols) for i in range(len(rel_basis)))
    per = [edge_word_period(s, w) for w in rel_basis]
    aper = [edge_word_period(s, w) for w in abs_basis]
    return PeriodData(
        rel_basis=rel_basis,
        abs_basis=abs_basis,
        inclusion_matrix=incl,
        period_matrix=(tuple(p[0] for p in per), tuple(p[1] for p in per)),
        abs_period_matrix=(tuple(p[0] for p in aper), tuple(p[1] for p in aper)),
        sigma=tuple(sigma),
        genus=sig.genus,
    )


def relative_coordinates(s: FlatSurface, word) -> tuple[int, ...]:
    """Coordinates of a relative cycle (edge word) in the basis of :func:`homology_bases`."""
    d1, d2 = boundary_matrices(s)
    rel_rows = [row for i, row in enumerate(d1) if i not in s.singular_classes]
    _, coords = _quotient_basis(rel_rows, d2, len(s.edge_pairs))
    return coords(word)


def period_map(s: FlatSurface, d: PeriodData | None = None):
    """Exact ``2 x rel_rank`` matrix of periods of the relative basis, computed on ``s``."""
    d = d or homology_bases(s)
    per = [edge_word_period(s, w) for w in d.rel_basis]
    return (tuple(p[0] for p in per), tuple(p[1] for p in per))


# -- ranks ------------------------------------------------------------------------------------

def _flatten(vec: tuple[ExactScalar, ExactScalar]) -> list[Fraction]:
    return list(vec[0].coordinates) + list(vec[1].coordinates)


def _unflatten(flat, field) -> tuple[ExactScalar, ExactScalar]:
    d = field.degree
    return (ExactScalar(field, flat[:d]), ExactScalar(field, flat[d:]))


def _columns(mat) -> list[tuple[ExactScalar, ExactScalar]]:
    return list(zip(mat[0], mat[1]))


def _generated_subfield_degree(values: list[ExactScalar]) -> int:
    """Degree over Q of the field generated by ``values`` (inside their common field)."""
    if not values:
        return 1
    basis = [[Fraction(1)] + [Fraction(0)] * (values[0].field.degree - 1)]
    elems = [values[0].field.one()]
    gens = [v for v in values if not v.is_rational()]
    changed = True
    while changed:
        changed = False
        for e in list(elems):
            for g in gens:
                prod = e * g
                cand = basis + [list(prod.coordinates)]
                if rank(cand) > len(basis):
                    basis.append(list(prod.coordinates))
                    elems.append(prod)
                    changed = True
    return len(basis)


def _reduce_basis(u, v):
    """Gauss-Lagrange reduction of a planar lattice basis (exact)."""
    while True:
        if dot(u, u) > dot(v, v):
            u, v = v, u
        n = dot(u, v) / dot(u, u)
        m = _round(n)
        if m == 0:
            break
        v = sub(v, (m * u[0], m * u[1]))
        if dot(v, v) >= dot(u, u):
            break
    if cross(u, v).sign() < 0:
        v = (-v[0], -v[1])
    return u, v


def _round(x: ExactScalar) -> int:
    lo, hi = x.enclosure(Fraction(1, 4))
    c = (lo + hi) / 2
    return int((c + Fraction(1, 2)) // 1)


def _lattice_of(vectors, field):
    basis = lattice_basis([_flatten(v) for v in vectors])
    return [_unflatten(b, field) for b in basis]


def tau_rank(s: FlatSurface, d: PeriodData | None = None) -> TauRankReport:
    """Ranks of the period images: Z-rank on relative classes and Q-dimension on absolute ones."""
    d = d or homology_bases(s)
    rel = _columns(d.period_matrix)
    ab = _columns(d.abs_period_matrix)
    z_rank = rank([_flatten(v) for v in rel]) if rel else 0
    q_dim = rank([_flatten(v) for v in ab]) if ab else 0
    q_dim_rel = z_rank  # Z-rank of a f.g. subgroup of Q^n equals its Q-rank

    # holonomy field: coordinates of all periods in a basis of two independent ones
    deg = 1
    pair = None
    for i in range(len(rel)):
        for j in range(i + 1, len(rel)):
            if cross(rel[i], rel[j]):
                pair = (rel[i], rel[j])
                break
        if pair:
            break
    if pair:
        u, v = pair
        det = cross(u, v)
        coords = []
        for w in rel:
            coords.append(cross(w, v) / det)
            coords.append(cross(u, w) / det)
        deg = _generated_subfield_degree(coords)

    lattice = None
    if q_dim == 2:
        lat = _lattice_of(rel, s.field)
        if len(lat) != 2:
            lat = _lattice_of(ab, s.field)
        if len(lat) == 2:
            lattice = _reduce_basis(lat[0], lat[1])
    return TauRankReport(z_rank, q_dim, q_dim_rel, deg, lattice)


# -- torus covers ---------------------------------------------------------------------------------

def vertex_positions(s: FlatSurface) -> list[tuple[ExactScalar, ExactScalar]]:
    """Developed position of each vertex class relative to class 0 along a spanning tree."""
    nv = len(s.vertex_classes)
    cls = s.corner_class
    adj: dict[int, list[tuple[int, tuple]]] = {i: [] for i in range(nv)}
    for p, e in s.edge_pairs:
        n = len(s.polygons[p])
        a, b = cls[(p, e)], cls[(p, (e + 1) % n)]
        v = s.edge_vector(p, e)
        adj[a].append((b, v))
        adj[b].append((a, (-v[0], -v[1])))
    zero = s.field.zero()
    pos = [None] * nv
    pos[0] = (zero, zero)
    stack = [0]
    while stack:
        a = stack.pop()
        for b, v in adj[a]:
            if pos[b] is None:
                pos[b] = add(pos[a], v)
                stack.append(b)
    return pos


def detect_torus_cover(s: FlatSurface, d: PeriodData | None = None) -> TorusCover | None:
    """Translation covering ``s -> R^2 / Lambda`` when the absolute periods have Q-dimension 2."""
    rep = tau_rank(s, d)
    if rep.torus_lattice is None:
        return None
    u, v = rep.torus_lattice
    cov = cross(u, v)
    ratio = area(s) / cov
    if not ratio.is_integral_rational():
        return None
    pos = vertex_positions(s)
    branch = []
    for k in s.singular_classes:
        x = pos[k]
        a = cross(x, v) / cov
        b = cross(u, x) / cov
        fa, fb = a.to_fraction(), b.to_fraction()
        branch.append((fa - (fa.numerator // fa.denominator), fb - (fb.numerator // fb.denominator)))
    return TorusCover((u, v), cov, int(ratio.to_fraction()), tuple(branch))


# -- the left inverse r ------------------------------------------------------------------------------

def left_inverse_r(s: FlatSurface, d: PeriodData | None = None) -> LeftInverse:
    """The map ``r = tau|_H1^{-1} o tau|_H1rel`` on rational homology and a basis of ``ker r``.

    Requires the absolute periods to be Q-independent (``q_dim = 2 * genus``)
    and every relative period to lie in their Q-span.
    """
    d = d or homology_bases(s)
    rep = tau_rank(s, d)
    if rep.q_dim < 2 * d.genus:
        raise DegenerateTau(
            "absolute periods are Q-dependent", q_dim=rep.q_dim, genus=d.genus
        )
    T_abs = [_flatten(v) for v in _columns(d.abs_period_matrix)]  # abs_rank rows
    A = [[T_abs[j][i] for j in range(len(T_abs))] for i in range(len(T_abs[0]))]
    cols = []
    for w in _columns(d.period_matrix):
        try:
            cols.append(solve(A, _flatten(w)))
        except ValueError:
            raise DegenerateTau(
                "relative periods leave the Q-span of absolute periods", q_dim=rep.q_dim
            ) from None
    r = tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(d.abs_rank))
    ker = []
    for vec in nullspace([list(row) for row in r]):
        den = common_denominator(vec)
        ker.append(tuple(primitive([int(x * den) for x in vec])))
    return LeftInverse(r, tuple(ker), d)


__all__ = [
    "PeriodData",
    "TauRankReport",
    "TorusCover",
    "LeftInverse",
    "boundary_matrices",
    "homology_bases",
    "period_map",
    "relative_coordinates",
    "tau_rank",
    "detect_torus_cover",
    "left_inverse_r",
    "vertex_positions",
]

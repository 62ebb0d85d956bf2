"""Triangulations of translation surfaces: Delaunay flips, cells and straight-line flow.

A triangle is stored by its three edge vectors ``e0, e1, e2`` (counterclockwise,
summing to zero); its vertices in local coordinates are ``P0 = 0``,
``P1 = e0`` and ``P2 = e0 + e1``.  Half-edge ``(t, i)`` runs from ``P_i`` to
``P_{i+1}`` and is glued to a half-edge with the opposite vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import NotPeriodicDirection
from .exact_scalar import ExactScalar
from .surface import FlatSurface, Point, add, cross, sub

HalfEdge = tuple[int, int]


def _incircle(a: Point, b: Point, c: Point, d: Point):
    """Positive iff ``d`` lies strictly inside the circle through ccw ``a, b, c``."""
    rows = []
    for p in (a, b, c):
        x, y = p[0] - d[0], p[1] - d[1]
        rows.append((x, y, x * x + y * y))
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = rows
    return a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1)


def _incircle_sign(a: Point, b: Point, c: Point, d: Point) -> int:
    """Sign of :func:`_incircle` using integer coordinate tuples over a common denominator."""
    field = a[0].field
    pts = (a, b, c, d)
    L = 1
    for p in pts:
        for z in p:
            L = L * z.den // gcd(L, z.den)
    n = field.degree
    red = field._red

    def lift(z):
        k = L // z.den
        return [k * v for v in z.num]

    def mul(x, y):
        if n == 1:
            return [x[0] * y[0]]
        conv = [0] * (2 * n - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    conv[i + j] += xi * yj
        res = conv[:n]
        for k in range(n, 2 * n - 1):
            ck = conv[k]
            if ck:
                r = red[k - n]
                for i in range(n):
                    res[i] += ck * r[i]
        return res

    def sub_(x, y):
        return [u - v for u, v in zip(x, y)]

    def add_(x, y):
        return [u + v for u, v in zip(x, y)]

    dx, dy = lift(d[0]), lift(d[1])
    rows = []
    for p in (a, b, c):
        x, y = sub_(lift(p[0]), dx), sub_(lift(p[1]), dy)
        rows.append((x, y, add_(mul(x, x), mul(y, y))))
    (a1, a2, a3), (b1, b2, b3), (c1, c2, c3) = rows
    det = add_(
        sub_(mul(a1, sub_(mul(b2, c3), mul(b3, c2))), mul(a2, sub_(mul(b1, c3), mul(b3, c1)))),
        mul(a3, sub_(mul(b1, c2), mul(b2, c1))),
    )
    if n == 1:
        return (det[0] > 0) - (det[0] < 0)
    if not any(det):
        return 0
    return ExactScalar._make(field, tuple(det), 1).sign()


def _in_closed_triangle(p, a, b, c) -> bool:
    return (
        cross(sub(b, a), sub(p, a)).sign() >= 0
        and cross(sub(c, b), sub(p, b)).sign() >= 0
        and cross(sub(a, c), sub(p, c)).sign() >= 0
    )


def ear_clip(poly) -> list[tuple[int, int, int]]:
    """Triangulate a simple ccw polygon (collinear vertices allowed) into vertex triples."""
    idx = list(range(len(poly)))
    tris = []
    while len(idx) > 3:
        m = len(idx)
        for k in range(m):
            a, b, c = idx[(k - 1) % m], idx[k], idx[(k + 1) % m]
            if cross(sub(poly[b], poly[a]), sub(poly[c], poly[b])).sign() <= 0:
                continue
            if any(
                _in_closed_triangle(poly[q], poly[a], poly[b], poly[c])
                for q in idx
                if q not in (a, b, c)
            ):
                continue
            tris.append((a, b, c))
            idx.pop(k)
            break
        else:  # pragma: no cover - simple polygons always have an ear
            raise ValueError("no ear found; polygon is not simple")
    tris.append(tuple(idx))
    return tris


class Triangulation:
    """Mutable triangulated translation surface."""

    def __init__(self, vecs: list[list[Point]], glue: dict[HalfEdge, HalfEdge], field):
        self.vecs = vecs
        self.glue = glue
        self.field = field

    @classmethod
    def from_surface(cls, s: FlatSurface) -> "Triangulation":
        vecs: list[list[Point]] = []
        glue: dict[HalfEdge, HalfEdge] = {}
        poly_edge: dict[tuple[int, int], HalfEdge] = {}
        for p, poly in enumerate(s.polygons):
            n = len(poly)
            diag: dict[tuple[int, int], HalfEdge] = {}
            for tri in ear_clip(poly):
                t = len(vecs)
                vecs.append([sub(poly[tri[(k + 1) % 3]], poly[tri[k]]) for k in range(3)])
                for k in range(3):
                    a, b = tri[k], tri[(k + 1) % 3]
                    if b == (a + 1) % n:
                        poly_edge[(p, a)] = (t, k)
                    elif (b, a) in diag:
                        other = diag.pop((b, a))
                        glue[(t, k)] = other
                        glue[other] = (t, k)
                    else:
                        diag[(a, b)] = (t, k)
            assert not diag
        for (p, e), he in poly_edge.items():
            glue[he] = poly_edge[s.gluings[(p, e)]]
        return cls(vecs, glue, s.field)

    def copy(self) -> "Triangulation":
        return Triangulation([list(v) for v in self.vecs], dict(self.glue), self.field)

    def __len__(self) -> int:
        return len(self.vecs)

    def vertex(self, t: int, i: int) -> Point:
        e = self.vecs[t]
        z = self.field.zero()
        if i == 0:
            return (z, z)
        if i == 1:
            return e[0]
        return add(e[0], e[1])

    # -- Delaunay ----------------------------------------------------------------------
    def _quad(self, t: int, i: int):
        u, j = self.glue[(t, i)]
        et, eu = self.vecs[t], self.vecs[u]
        A = (self.field.zero(), self.field.zero())
        B = et[i]
        C = add(B, et[(i + 1) % 3])
        D = eu[(j + 1) % 3]
        return u, j, A, B, C, D

    def incircle_sign(self, t: int, i: int) -> int:
        _u, _j, A, B, C, D = self._quad(t, i)
        return _incircle_sign(A, B, C, D)

    def flip(self, t: int, i: int) -> None:
        u, j, A, B, C, D = self._quad(t, i)
        et, eu = self.vecs[t], self.vecs[u]
        old = {
            (u, (j + 2) % 3): (t, 0),
            (t, (i + 1) % 3): (t, 1),
            (t, (i + 2) % 3): (u, 0),
            (u, (j + 1) % 3): (u, 1),
        }
        partners = {o: self.glue[o] for o in old}
        self.vecs[t] = [eu[(j + 2) % 3], et[(i + 1) % 3], sub(D, C)]
        self.vecs[u] = [et[(i + 2) % 3], eu[(j + 1) % 3], sub(C, D)]
        for k in range(3):
            self.glue.pop((t, k), None)
            self.glue.pop((u, k), None)
        for o, new in old.items():
            p = partners[o]
            q = old.get(p, p)
            self.glue[new] = q
            self.glue[q] = new
        self.glue[(t, 2)] = (u, 2)
        self.glue[(u, 2)] = (t, 2)

    def make_delaunay(self, max_flips: int = 100000) -> "Triangulation":
        flips = 0
        changed = True
        while changed:
            changed = False
            for t in range(len(self.vecs)):
                for i in range(3):
                    if self.incircle_sign(t, i) > 0:
                        self.flip(t, i)
                        flips += 1
                        changed = True
                        if flips > max_flips:  # pragma: no cover
                            raise RuntimeError("Delaunay flip limit exceeded")
                        break
        return self

    # -- cells -----------------------------------------------------------------------------
    def delaunay_cells(self) -> list[list[HalfEdge]]:
        """Boundary cycles of the cells obtained by merging across cocircular edges."""
        n = len(self.vecs)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        internal = set()
        for t in range(n):
            for i in range(3):
                if (t, i) in internal:
                    continue
                if self.incircle_sign(t, i) == 0:
                    u, j = self.glue[(t, i)]
                    internal.add((t, i))
                    internal.add((u, j))
                    parent[find(t)] = find(u)
        seen = set()
        cells = []
        for t in range(n):
            for i in range(3):
                he = (t, i)
                if he in internal or he in seen:
                    continue
                cyc = []
                cur = he
                while cur not in seen:
                    seen.add(cur)
                    cyc.append(cur)
                    nxt = (cur[0], (cur[1] + 1) % 3)
                    while nxt in internal:
                        u, j = self.glue[nxt]
                        nxt = (u, (j + 1) % 3)
                    cur = nxt
                cells.append(cyc)
        return cells

    # -- straight-line flow -------------------------------------------------------------------
    def _exit(self, t: int, p: Point, d: Point):
        """First boundary hit of the ray ``p + s d`` (s > 0) in triangle ``t``.

        Returns ``(s, k, lam)``: edge ``k`` hit at ``P_k + lam * e_k``; ``lam``
        equal to 0 or 1 means a vertex was hit.
        """
        best = None
        for k in range(3):
            e = self.vecs[t][k]
            den = cross(d, e)
            if not den:
                continue
            Pk = self.vertex(t, k)
            s = cross(sub(Pk, p), e) / den
            if s.sign() <= 0:
                continue
            lam = cross(sub(p, Pk), d) / cross(e, d)
            if lam.sign() < 0 or (lam - 1).sign() > 0:
                continue
            if best is None or s < best[0]:
                best = (s, k, lam)
        if best is None:
            raise RuntimeError("ray does not leave the triangle")
        return best

    def _enter(self, t: int, k: int, lam):
        """Point on partner edge corresponding to ``P_k + lam e_k`` of ``(t, k)``."""
        u, j = self.glue[(t, k)]
        q = add(self.vertex(u, j), (self.vecs[u][j][0] * (1 - lam), self.vecs[u][j][1] * (1 - lam)))
        return u, j, q

    def orient_start(self, t: int, p: Point, d: Point):
        """Move a boundary point to the triangle into which ``d`` points."""
        for k in range(3):
            e = self.vecs[t][k]
            Pk = self.vertex(t, k)
            if not cross(sub(p, Pk), e) and cross(e, d).sign() < 0:
                lam = cross(sub(p, Pk), d) / cross(e, d)
                if 0 < lam < 1:
                    u, _j, q = self._enter(t, k, lam)
                    return u, q
        return t, p

    def corner_for_direction(self, t: int, i: int, d: Point) -> bool:
        """Does ``d`` lie in the half-open sector ``[e_i, -e_{i-1})`` of corner ``(t, i)``?"""
        a = self.vecs[t][i]
        b = self.vecs[t][(i - 1) % 3]
        b = (-b[0], -b[1])
        ca = cross(a, d).sign()
        if ca == 0:
            return (a[0] * d[0] + a[1] * d[1]).sign() > 0
        return ca > 0 and cross(d, b).sign() > 0

    def trace(self, t: int, p: Point, d: Point, max_steps: int, stop=None):
        """Follow the ray from ``p`` in triangle ``t`` with direction ``d``.

        Yields ``(t, entry, exit, s0, s1)`` segments (``s`` measured in units
        of ``d``) until a vertex is hit, ``stop`` returns a value (which is
        then returned via ``StopIteration``), or ``max_steps`` triangles have
        been crossed.
        """
        t, p = self.orient_start(t, p, d)
        total = self.field.zero()
        for _ in range(max_steps):
            s, k, lam = self._exit(t, p, d)
            q = add(p, (d[0] * s, d[1] * s))
            if stop is not None:
                hit = stop(t, p, q, total, total + s)
                if hit is not None:
                    return hit
            yield (t, p, q, total, total + s)
            total = total + s
            if lam.sign() == 0 or (lam - 1).sign() == 0:
                return ("vertex", total)
            t, _j, p = self._enter(t, k, lam)
        raise NotPeriodicDirection("trajectory exceeded the step budget", steps=max_steps)


@dataclass(frozen=True)
class CanonicalForm:
    encoding: tuple
    cells: tuple

    def __eq__(self, other):
        return isinstance(other, CanonicalForm) and self.encoding == other.encoding

    def __hash__(self):
        return hash(self.encoding)


def _vec_key(v: Point):
    return (v[0].key(), v[1].key())


def canonical_encoding(tri: Triangulation, cells: list[list[HalfEdge]]) -> tuple:
    where = {}
    for c, cyc in enumerate(cells):
        for pos, he in enumerate(cyc):
            where[he] = (c, pos)
    keys = {he: _vec_key(tri.vecs[he[0]][he[1]]) for cyc in cells for he in cyc}
    kmin = min(keys.values())
    starts = [he for he, k in keys.items() if k == kmin]
    best = None
    for he in starts:
        c0, p0 = where[he]
        label = {c0: (0, p0)}
        order = [c0]
        enc = []
        qi = 0
        while qi < len(order):
            c = order[qi]
            qi += 1
            rot = label[c][1]
            cyc = cells[c]
            m = len(cyc)
            row = []
            for r in range(m):
                h = cyc[(rot + r) % m]
                c2, p2 = where[tri.glue[h]]
                if c2 not in label:
                    label[c2] = (len(order), p2)
                    order.append(c2)
                lab, rot2 = label[c2]
                row.append((keys[h], lab, (p2 - rot2) % len(cells[c2])))
            enc.append((m, tuple(row)))
        enc = tuple(enc)
        if best is None or enc < best:
            best = enc
    return best


def canonical_form(s: FlatSurface) -> CanonicalForm:
    """Delaunay cell decomposition with a lexicographically minimal labeling."""
    tri = Triangulation.from_surface(s).make_delaunay()
    cells = tri.delaunay_cells()
    enc = canonical_encoding(tri, cells)
    vectors = tuple(tuple(tri.vecs[t][i] for t, i in cyc) for cyc in cells)
    return CanonicalForm(enc, vectors)


__all__ = ["Triangulation", "CanonicalForm", "canonical_form", "ear_clip"]

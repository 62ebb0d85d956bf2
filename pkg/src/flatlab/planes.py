"""Symplectic integral linear algebra: integral planes, eigenplanes and the size dichotomy.

Vectors and matrices are lists whose entries are ints, Fractions or
:class:`ExactScalar`.  ``omega`` is an integer antisymmetric matrix ``W``
with ``omega(v, w) = v^T W w``.  The complement ``V^perp`` of a plane is
always the omega-orthogonal one.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np
import sympy

from .errors import DegeneratePlane, InconsistentInput, NonSemisimple
from .exact_scalar import QQ, ExactScalar, NumberField, common_field, rational, sqrt_rational
from .linalg import (
    common_denominator,
    determinant,
    identity,
    integer_kernel,
    matmul,
    nullspace,
    primitive,
    rank,
    rref,
    transpose,
)


# -- forms and planes -------------------------------------------------------------------------

@dataclass(frozen=True)
class SymplecticForm:
    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = self.matrix
        n = len(m)
        for i in range(n):
            for j in range(n):
                if int(m[i][j]) != m[i][j] or m[i][j] != -m[j][i]:
                    raise ValueError("form must be integral and antisymmetric")

    @classmethod
    def from_matrix(cls, m) -> "SymplecticForm":
        return cls(tuple(tuple(int(x) for x in row) for row in m))

    @property
    def dimension(self) -> int:
        return len(self.matrix)

    @property
    def nondegenerate(self) -> bool:
        return determinant([[Fraction(x) for x in row] for row in self.matrix]) != 0

    def __call__(self, v, w):
        acc = 0
        for i, row in enumerate(self.matrix):
            if not v[i]:
                continue
            for j, c in enumerate(row):
                if c and w[j]:
                    acc = acc + c * v[i] * w[j]
        return acc

    def apply(self, v) -> list:
        """The vector ``W v``."""
        return [sum((c * v[j] for j, c in enumerate(row) if c), 0) for row in self.matrix]


def standard_form(n: int) -> SymplecticForm:
    """``e1^e2 + e3^e4 + ...`` on ``Z^n`` (n even)."""
    m = [[0] * n for _ in range(n)]
    for k in range(0, n - 1, 2):
        m[k][k + 1], m[k + 1][k] = 1, -1
    return SymplecticForm.from_matrix(m)


def split_form(n: int) -> SymplecticForm:
    """``e1^e_{h+1} + e2^e_{h+2} + ...`` with ``h = n/2``."""
    h = n // 2
    m = [[0] * n for _ in range(n)]
    for k in range(h):
        m[k][k + h], m[k + h][k] = 1, -1
    return SymplecticForm.from_matrix(m)


@dataclass(frozen=True)
class SymplecticPlane:
    basis: tuple[tuple, tuple]
    integral_lattice: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    covolume: int | None = None

    @classmethod
    def span(cls, v1, v2) -> "SymplecticPlane":
        v1, v2 = _normalize_vector(v1), _normalize_vector(v2)
        if rank([list(v1), list(v2)]) < 2:
            raise DegeneratePlane("basis vectors are linearly dependent")
        return cls((tuple(v1), tuple(v2)))

    @property
    def field(self) -> NumberField:
        return common_field(*self.basis[0], *self.basis[1])

    def key(self):
        """Hashable identity of the subspace (reduced echelon basis)."""
        red, _ = rref([list(self.basis[0]), list(self.basis[1])])
        return tuple(tuple(_key(x) for x in row) for row in red)


def _key(x):
    if isinstance(x, ExactScalar):
        return x.key()
    return (0, Fraction(x))


def _normalize_vector(v) -> list:
    vals = [x for x in v]
    K = common_field(*vals)
    if K is QQ:
        return [x.to_fraction() if isinstance(x, ExactScalar) else Fraction(x) for x in vals]
    return [x if isinstance(x, ExactScalar) and x.field is K else K(x if not isinstance(x, ExactScalar) else x.to_fraction()) for x in vals]


# -- the operator A_V ------------------------------------------------------------------------

def build_AV(omega: SymplecticForm, v1, v2) -> list[list]:
    """``A_V(v) = omega(v, v2) v1 - omega(v, v1) v2``.

    Acts as ``omega(v1, v2) * Id`` on ``V = span(v1, v2)`` and as ``0`` on
    its omega-complement.
    """
    c = omega(v1, v2)
    if not c:
        raise DegeneratePlane("omega vanishes on the plane", omega_v1_v2=str(c))
    # omega(v, w) = (W^T ... ) ; row functional of v -> omega(v, w) is (W w)^T
    f2 = omega.apply(v2)
    f1 = omega.apply(v1)
    n = len(v1)
    return [[v1[i] * f2[j] - v2[i] * f1[j] for j in range(n)] for i in range(n)]


def omega_complement(omega: SymplecticForm, plane: SymplecticPlane) -> list[list]:
    """Basis of ``{w : omega(v1, w) = omega(v2, w) = 0}``."""
    rows = []
    for v in plane.basis:
        # omega(v, w) = sum_i v_i W_ij w_j
        rows.append([sum((v[i] * omega.matrix[i][j] for i in range(len(v)) if omega.matrix[i][j]), 0) for j in range(len(v))])
    K = plane.field
    return nullspace(rows, zero=K.zero() if K is not QQ else Fraction(0), one=K.one() if K is not QQ else Fraction(1))


@dataclass(frozen=True)
class IntegralityResult:
    ok: bool
    reason: str | None = None
    lattice: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    covolume: int | None = None
    operator: tuple[tuple[int, ...], ...] | None = None
    detail: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def integral_points(plane: SymplecticPlane) -> list[list[int]]:
    """Z-basis of ``V cap Z^n``."""
    rows = [list(plane.basis[0]), list(plane.basis[1])]
    K = plane.field
    n = len(rows[0])
    if K is QQ:
        ann = nullspace(rows)
    else:
        ann = nullspace(rows, zero=K.zero(), one=K.one())
    eqs = []
    for w in ann:
        coords = [(x.coordinates if isinstance(x, ExactScalar) else (Fraction(x),)) for x in w]
        deg = max(len(c) for c in coords)
        for k in range(deg):
            row = [c[k] if k < len(c) else Fraction(0) for c in coords]
            if any(row):
                den = common_denominator(row)
                eqs.append([int(x * den) for x in row])
    if not eqs:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    return integer_kernel(eqs)


def is_D_integral(omega: SymplecticForm, plane: SymplecticPlane, D: int) -> IntegralityResult:
    """Does ``V cap Z^n`` have rank 2 with omega-covolume ``D``?"""
    lat = integral_points(plane)
    if len(lat) < 2:
        return IntegralityResult(False, "rank-deficient", detail={"rank": len(lat)})
    l1, l2 = lat[0], lat[1]
    c = omega(l1, l2)
    if c == 0:
        return IntegralityResult(False, "degenerate", lattice=(tuple(l1), tuple(l2)))
    if c < 0:
        l1, l2 = l2, l1
        c = -c
    A = build_AV(omega, l1, l2)
    cert = tuple(tuple(int(x) for x in row) for row in A)
    if c != D:
        return IntegralityResult(
            False, "covolume-mismatch", (tuple(l1), tuple(l2)), int(c), cert, {"actual": int(c)}
        )
    return IntegralityResult(True, None, (tuple(l1), tuple(l2)), int(c), cert)


def is_eta_integral(omega: SymplecticForm, plane: SymplecticPlane, eta, sigma_eta) -> IntegralityResult:
    """Is ``eta * Id`` on ``V`` plus ``sigma_eta * Id`` on ``V^perp`` an integer matrix?"""
    v1, v2 = plane.basis
    c = omega(v1, v2)
    if not c:
        raise DegeneratePlane("omega vanishes on the plane")
    A_V = build_AV(omega, v1, v2)
    n = len(v1)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            p = A_V[i][j] / c if isinstance(A_V[i][j], ExactScalar) or isinstance(c, ExactScalar) else Fraction(A_V[i][j]) / c
            val = eta * p + sigma_eta * ((1 if i == j else 0) - p)
            if isinstance(val, ExactScalar):
                if not val.is_integral_rational():
                    return IntegralityResult(False, "non-integral", detail={"entry": [i, j], "value": str(val)})
                row.append(int(val.to_fraction()))
            else:
                val = Fraction(val)
                if val.denominator != 1:
                    return IntegralityResult(False, "non-integral", detail={"entry": [i, j], "value": str(val)})
                row.append(int(val))
        out.append(tuple(row))
    return IntegralityResult(True, operator=tuple(out))


# -- eigenplanes -----------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenPlane:
    eta: ExactScalar
    basis: tuple[tuple, ...]
    minimal_polynomial: tuple[Fraction, ...]
    nondegenerate: bool

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def plane(self) -> SymplecticPlane:
        if len(self.basis) != 2:
            raise DegeneratePlane("eigenspace is not two-dimensional", dimension=len(self.basis))
        return SymplecticPlane(tuple(tuple(v) for v in self.basis))


@dataclass(frozen=True)
class EigenDecomposition:
    planes: tuple[EigenPlane, ...]
    direct_sum: bool
    orthogonal: bool
    self_adjoint: bool
    complex_factors: tuple[tuple[tuple[Fraction, ...], int], ...]
    operator: tuple[tuple[Fraction, ...], ...]


def _to_fraction_matrix(A) -> list[list[Fraction]]:
    out = []
    for row in A:
        r = []
        for x in row:
            if isinstance(x, ExactScalar):
                x = x.to_fraction()
            r.append(Fraction(x))
        out.append(r)
    return out


def _mat_inverse(A: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(A)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise InconsistentInput("matrix is singular")
    return [row[n:] for row in red]


def _integral_generator(coeffs_low_to_high: list[Fraction]):
    """Integral monic polynomial for ``L * theta`` (leading first) and the scale ``L``."""
    k = len(coeffs_low_to_high) - 1
    L = common_denominator(coeffs_low_to_high)
    poly = [int(coeffs_low_to_high[i] * L ** (k - i)) for i in range(k + 1)]
    return tuple(reversed(poly)), L


def _poly_rem(num: list, den: list, zero):
    """Remainder of polynomial division over a field; coefficients low to high."""
    num = list(num)
    while len(num) >= len(den) and any(num):
        if not num[-1]:
            num.pop()
            continue
        q = num[-1] / den[-1]
        shift = len(num) - len(den)
        for i, d in enumerate(den):
            num[shift + i] = num[shift + i] - q * d
        num.pop()
    return num


def _matpoly(f_low: list[Fraction], S: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(S)
    out = [[Fraction(0)] * n for _ in range(n)]
    for c in reversed(f_low):
        out = matmul(out, S)
        out = [[Fraction(x) for x in row] for row in out]
        for i in range(n):
            out[i][i] += c
    return out


def eigenplane_decomposition(A, omega: SymplecticForm, mode: str = "direct") -> EigenDecomposition:
    """Eigenvalue / eigenspace pairs of ``A`` itself (``mode="direct"``) or of ``A + A^-1``
    (``mode="symmetrized"``, which requires ``A`` to preserve omega).

    The primary decomposition is checked exactly: every irreducible factor
    ``f`` of multiplicity ``m`` must satisfy ``nullity f(S) = m deg f``.
    Real eigenvalues are returned as exact scalars with their eigenspaces;
    purely complex factors are listed in ``complex_factors``.  Orthogonality
    between eigenspaces of different eigenvalues is checked by exact
    polynomial remainders over the eigenvalue fields.
    """
    A = _to_fraction_matrix(A)
    n = len(A)
    W = [[Fraction(x) for x in row] for row in omega.matrix]
    if mode == "symmetrized":
        lhs = matmul(matmul(transpose(A), W), A)
        if any(Fraction(lhs[i][j]) != W[i][j] for i in range(n) for j in range(n)):
            raise InconsistentInput("A does not preserve omega")
        Ainv = _mat_inverse(A)
        S = [[A[i][j] + Ainv[i][j] for j in range(n)] for i in range(n)]
    elif mode == "direct":
        S = A
    else:
        raise ValueError(f"unknown mode {mode!r}")
    WS, StW = matmul(W, S), matmul(transpose(S), W)
    self_adjoint = all(Fraction(WS[i][j]) == Fraction(StW[i][j]) for i in range(n) for j in range(n))

    x = sympy.Symbol("x")
    cp = sympy.Matrix([[sympy.Rational(q.numerator, q.denominator) for q in row] for row in S]).charpoly(x)
    _, factors = sympy.factor_list(cp.as_expr(), x)
    factors = [(sympy.Poly(f, x).monic(), m) for f, m in factors]
    if len(factors) == 1 and factors[0][0].degree() == 1:
        raise NonSemisimple("single eigenvalue: no plane splitting", eigenvalue=str(-factors[0][0].all_coeffs()[-1]))

    planes = []
    complex_factors = []
    total = 0
    real_data = []  # (field or QQ, L, eigvecs, f_int_low)
    for f, m in factors:
        coeffs_low = [Fraction(int(c.p), int(c.q)) for c in reversed(f.all_coeffs())]
        k = len(coeffs_low) - 1
        null = n - rank(_matpoly(coeffs_low, S))
        if null != k * m:
            raise NonSemisimple(
                "eigenspace smaller than algebraic multiplicity",
                factor=[str(c) for c in coeffs_low],
                multiplicity=m,
                nullity=null,
            )
        total += null
        poly_int, L = _integral_generator(coeffs_low)
        if k == 1:
            fields = [QQ]
        else:
            K0 = NumberField(poly_int, 0) if _has_real_root(poly_int) else None
            if K0 is None:
                complex_factors.append((tuple(coeffs_low), m))
                real_data.append((None, L, None, poly_int))
                continue
            fields = [NumberField(poly_int, i) for i in range(K0.real_root_count)]
        vecs0 = None
        for K in fields:
            if K is QQ:
                eta = rational(-coeffs_low[0])
                M = [[S[i][j] - (eta.to_fraction() if i == j else 0) for j in range(n)] for i in range(n)]
                basis = nullspace(M)
            else:
                eta = K.gen / L
                M = [[K(S[i][j]) - (eta if i == j else 0) for j in range(n)] for i in range(n)]
                basis = nullspace(M, zero=K.zero(), one=K.one())
                basis = [_clear_denominators(v) for v in basis]
            if vecs0 is None:
                vecs0 = basis
            nondeg = len(basis) == 2 and bool(omega(basis[0], basis[1]))
            if K is not QQ and K.degree == 2:
                eta = _to_sqrt_field(eta)
                basis = [[_to_sqrt_field(x) for x in v] for v in basis]
            planes.append(
                EigenPlane(eta, tuple(tuple(v) for v in basis), tuple(coeffs_low), nondeg)
            )
        real_data.append((fields[0], L, vecs0, poly_int))

    orthogonal = _check_orthogonality(real_data, omega)
    return EigenDecomposition(
        planes=tuple(planes),
        direct_sum=total == n,
        orthogonal=orthogonal,
        self_adjoint=self_adjoint,
        complex_factors=tuple(complex_factors),
        operator=tuple(tuple(row) for row in S),
    )


def _to_sqrt_field(x: ExactScalar) -> ExactScalar:
    """Rewrite an element of ``Q[t]/(t^2 + p t + q)`` inside ``Q(sqrt m)``."""
    f = x.field
    root = (-f._p + f._eps * sqrt_rational(f._disc)) / 2
    c0, c1 = x.coordinates
    return c0 + c1 * root


def _has_real_root(poly_leading_first) -> bool:
    p = sympy.Poly(list(poly_leading_first), sympy.Symbol("x"))
    return bool(p.count_roots())


def _clear_denominators(v):
    dens = [x.den for x in v if isinstance(x, ExactScalar)]
    den = 1
    for d in dens:
        den = den * d // gcd(den, d)
    return [x * den for x in v]


def _check_orthogonality(real_data, omega: SymplecticForm) -> bool:
    """Exact check that eigenspaces of distinct eigenvalues are omega-orthogonal.

    An eigenvector for the root ``theta`` is a polynomial in ``theta``; the
    pairing with the conjugate eigenvectors for other roots ``y`` is a
    polynomial in ``y`` with coefficients in ``Q(theta)`` that must vanish
    modulo the polynomial whose roots are those other eigenvalues.
    """
    for a, (K1, L1, vecs1, f1) in enumerate(real_data):
        if K1 is None:
            continue
        for b, (K2, L2, vecs2, f2) in enumerate(real_data):
            if K2 is None:
                continue
            if a == b:
                if len(f1) <= 2:
                    continue
                # other roots of the same factor: f(Y) / (Y - theta) over K1
                modulus = _deflate([K1(c) for c in reversed(f1)], K1.gen)
            else:
                modulus = [K1(c) for c in reversed(f2)]
            for v in vecs1:
                for w in vecs2:
                    coeff_vecs = [_as_poly_coords(x) for x in w]
                    deg = max(len(c) for c in coeff_vecs)
                    G = []
                    for kk in range(deg):
                        wk = [c[kk] if kk < len(c) else Fraction(0) for c in coeff_vecs]
                        val = omega(_lift_vec(v, K1), wk)
                        G.append(val if isinstance(val, ExactScalar) else K1(val))
                    if a == b or K2 is not QQ:
                        rem = _poly_rem(G, modulus, K1.zero())
                    else:
                        rem = G
                    if any(rem):
                        return False
    return True


def _lift_vec(v, K):
    return [x if isinstance(x, ExactScalar) else K(x) for x in v]


def _as_poly_coords(x) -> tuple[Fraction, ...]:
    if isinstance(x, ExactScalar):
        return x.coordinates
    return (Fraction(x),)


def _deflate(f_low: list, root) -> list:
    """``f(Y) / (Y - root)`` by synthetic division, coefficients low to high."""
    k = len(f_low) - 1
    q = [None] * k
    acc = f_low[k]
    for i in range(k - 1, -1, -1):
        q[i] = acc
        acc = f_low[i] + acc * root
    return q


# -- discreteness probe -------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeResult:
    count: int
    members: tuple  # bases of the other members found
    candidates: int  # distinct candidate planes examined
    radius: Fraction
    bound: int


def _box_vectors(n: int, bound: int) -> np.ndarray:
    """Primitive integer vectors in ``[-bound, bound]^n`` up to sign."""
    if bound <= 0:
        return np.zeros((0, n), dtype=np.int64)
    r = np.arange(-bound, bound + 1, dtype=np.int64)
    grid = np.array(np.meshgrid(*([r] * n), indexing="ij")).reshape(n, -1).T
    nz = grid != 0
    first = np.argmax(nz, axis=1)
    lead = grid[np.arange(len(grid)), first]
    grid = grid[(lead > 0) & nz.any(axis=1)]
    g = np.gcd.reduce(np.abs(grid), axis=1)
    return grid[g == 1]


def _within_radius(Q, B0, c2) -> bool:
    """Largest principal angle between span(Q) and span(B0) has cos^2 >= c2 (exact)."""
    def gram(X, Y):
        return [[sum((X[k][i] * Y[k][j] for k in range(len(X))), 0) for j in range(2)] for i in range(2)]

    Qc = [[Q[0][k], Q[1][k]] for k in range(len(Q[0]))]
    Bc = [[B0[0][k], B0[1][k]] for k in range(len(B0[0]))]
    G = gram(Qc, Qc)
    G0 = gram(Bc, Bc)
    X = gram(Qc, Bc)
    det0 = G0[0][0] * G0[1][1] - G0[0][1] * G0[1][0]
    adj0 = [[G0[1][1], -G0[0][1]], [-G0[1][0], G0[0][0]]]
    XA = [[X[i][0] * adj0[0][j] + X[i][1] * adj0[1][j] for j in range(2)] for i in range(2)]
    C = [[XA[i][0] * X[j][0] + XA[i][1] * X[j][1] for j in range(2)] for i in range(2)]
    M = [[C[i][j] - c2 * det0 * G[i][j] for j in range(2)] for i in range(2)]

    def nonneg(x):
        return (x.sign() if isinstance(x, ExactScalar) else (x > 0) - (x < 0)) >= 0

    return nonneg(M[0][0]) and nonneg(M[1][1]) and nonneg(M[0][0] * M[1][1] - M[0][1] * M[1][0])


def _plucker_primitive(P: np.ndarray) -> np.ndarray:
    g = np.gcd.reduce(np.abs(P), axis=1)
    g[g == 0] = 1
    P = P // g[:, None]
    nz = P != 0
    first = np.argmax(nz, axis=1)
    lead = P[np.arange(len(P)), first]
    return P * np.where(lead < 0, -1, 1)[:, None]


def discreteness_probe(
    omega: SymplecticForm,
    V0: SymplecticPlane,
    *,
    D: int | None = None,
    eta=None,
    sigma_eta=None,
    radius: Fraction = Fraction(1, 1000),
    bound: int = 3,
    threads: int = 1,
) -> ProbeResult:
    """Count members of the integral family, other than ``V0``, near ``V0``.

    D-mode: candidates are planes spanned by two primitive integer vectors
    with entries in ``[-bound, bound]``; members satisfy :func:`is_D_integral`.
    eta-mode: candidates are spanned by vectors ``x + eta*y`` with ``x, y`` in
    the box; members satisfy :func:`is_eta_integral`.  Nearness means the
    sine of the largest principal angle is at most ``radius``.
    """
    radius = Fraction(radius)
    c2 = 1 - radius * radius
    n = omega.dimension
    if bound <= 0:
        return ProbeResult(0, (), 0, radius, bound)
    if D is not None:
        return _probe_D(omega, V0, int(D), c2, radius, bound, threads)
    if eta is None or sigma_eta is None:
        raise ValueError("give D or (eta, sigma_eta)")
    return _probe_eta(omega, V0, eta, sigma_eta, c2, radius, bound)


def _float_prefilter(vecs: np.ndarray, B0f: np.ndarray, c2: float) -> np.ndarray:
    G0 = B0f @ B0f.T
    proj = vecs @ B0f.T @ np.linalg.inv(G0) @ B0f
    num = np.einsum("ij,ij->i", proj, vecs)
    den = np.einsum("ij,ij->i", vecs, vecs)
    return num >= (c2 - 1e-9) * den - 1e-9


def _probe_D(omega, V0, D, c2, radius, bound, threads) -> ProbeResult:
    n = omega.dimension
    base = is_D_integral(omega, V0, D)
    B0 = [list(base.lattice[0]), list(base.lattice[1])] if base.lattice else [list(V0.basis[0]), list(V0.basis[1])]
    vecs = _box_vectors(n, bound)
    keep = _float_prefilter(vecs.astype(float), np.array(B0, dtype=float), float(c2))
    vecs = vecs[keep]
    W = np.array(omega.matrix, dtype=np.int64)
    iu = np.triu_indices(n, 1)
    wij = W[iu]
    b0p = _plucker_primitive(
        (np.outer(B0[0], B0[1]) - np.outer(B0[1], B0[0]))[iu][None, :].astype(np.int64)
    )[0]

    def chunk(rows):
        found = {}
        for i in rows:
            a = vecs[i]
            bs = vecs[i + 1:]
            if len(bs) == 0:
                continue
            Pl = a[None, iu[0]] * bs[:, iu[1]] - a[None, iu[1]] * bs[:, iu[0]]
            ok = np.any(Pl != 0, axis=1)
            Pl, bsel = Pl[ok], bs[ok]
            Pl = _plucker_primitive(Pl)
            cov = np.abs(Pl @ wij)
            hit = cov == D
            for p, b in zip(Pl[hit], bsel[hit]):
                key = tuple(int(x) for x in p)
                if key not in found:
                    found[key] = (tuple(int(x) for x in a), tuple(int(x) for x in b))
        return found

    idx = list(range(len(vecs)))
    parts = [idx[k::max(1, threads)] for k in range(max(1, threads))]
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            results = list(ex.map(chunk, parts))
    else:
        results = [chunk(p) for p in parts]
    merged = {}
    for res in results:
        for k, v in res.items():
            merged.setdefault(k, v)
    b0key = tuple(int(x) for x in b0p)
    members = []
    for key in sorted(merged):
        if key == b0key:
            continue
        a, b = merged[key]
        if _within_radius([list(a), list(b)], B0, c2):
            members.append((a, b))
    return ProbeResult(len(members), tuple(members), len(merged), radius, bound)


def _probe_eta(omega, V0, eta, sigma_eta, c2, radius, bound) -> ProbeResult:
    n = omega.dimension
    K = common_field(eta, sigma_eta, *V0.basis[0], *V0.basis[1])
    eta_f = float(eta)
    r = range(-bound, bound + 1)
    raw = []
    for xy in itertools.product(r, repeat=2 * n):
        if any(xy):
            raw.append(xy)
    arr = np.array(raw, dtype=float)
    vf = arr[:, :n] + eta_f * arr[:, n:]
    B0f = np.array([[float(x) for x in v] for v in V0.basis])
    keep = _float_prefilter(vf, B0f, float(c2) - 1e-6)
    cands = [raw[i] for i in np.nonzero(keep)[0]]
    eta_k = eta if isinstance(eta, ExactScalar) else K(eta)
    vecs = [[K(xy[i]) + eta_k * xy[n + i] for i in range(n)] for xy in cands]
    base_key = V0.key()
    seen = set()
    members = []
    for i in range(len(vecs)):
        for j in range(i + 1, len(vecs)):
            if rank([vecs[i], vecs[j]]) < 2:
                continue
            P = SymplecticPlane((tuple(vecs[i]), tuple(vecs[j])))
            k = P.key()
            if k in seen or k == base_key:
                continue
            seen.add(k)
            if not omega(vecs[i], vecs[j]):
                continue
            if not _within_radius([vecs[i], vecs[j]], [list(V0.basis[0]), list(V0.basis[1])], c2):
                continue
            if is_eta_integral(omega, P, eta, sigma_eta).ok:
                members.append(P.basis)
    return ProbeResult(len(members), tuple(members), len(seen), radius, bound)


# -- size assumptions ----------------------------------------------------------------------------

@dataclass(frozen=True)
class SizeInput:
    field_degree_d: int
    relative_degree_dprime: int
    dim_TM: int
    rank_M: int
    dim_kerp_cap_TM: int = 0

    @property
    def K_is_Q(self) -> bool:
        return self.field_degree_d == 1


def validate_size_input(x: SizeInput) -> None:
    d, dp = x.field_degree_d, x.relative_degree_dprime
    if d < 1 or dp < 1 or x.rank_M < 1 or x.dim_kerp_cap_TM < 0:
        raise InconsistentInput("degrees and rank must be positive")
    if dp > x.rank_M:
        raise InconsistentInput("d' exceeds rk M", dprime=dp, rank_M=x.rank_M)
    if x.dim_TM != 2 * x.rank_M + x.dim_kerp_cap_TM:
        raise InconsistentInput(
            "dim TM must equal 2 rk M + dim(ker p cap TM)",
            dim_TM=x.dim_TM,
            rank_M=x.rank_M,
            dim_kerp_cap_TM=x.dim_kerp_cap_TM,
        )
    if x.dim_TM < 3:
        raise InconsistentInput("dim TM <= 2 means a closed (periodic) orbit", dim_TM=x.dim_TM)


def nonidentity_extensions(x: SizeInput, sigma_is_identity: bool) -> int:
    """``#(Hom_sigma(K_i, C) minus Id)``: ``d' - 1`` over the identity, ``d'`` otherwise."""
    return x.relative_degree_dprime - 1 if sigma_is_identity else x.relative_degree_dprime


def dim_V_sigma(x: SizeInput, sigma_is_identity: bool) -> int:
    """``dim V^sigma``: ``dim TM`` for a nontrivial embedding, ``dim TM - 2`` for the identity."""
    return x.dim_TM - 2 if sigma_is_identity else x.dim_TM


def classify_size(x: SizeInput) -> str:
    """``"Large"`` or ``"Small"``."""
    validate_size_input(x)
    options = [True] + ([False] if x.field_degree_d >= 2 else [])
    large = any(
        dim_V_sigma(x, s) >= 3 and nonidentity_extensions(x, s) >= 1 for s in options
    )
    dp = x.relative_degree_dprime
    small = x.K_is_Q and (dp == 1 or (dp == 2 and x.dim_TM == 4 and x.dim_kerp_cap_TM == 0))
    if large == small:
        raise InconsistentInput("input is both or neither large and small", input=x.__dict__)
    return "Large" if large else "Small"


__all__ = [
    "SymplecticForm",
    "SymplecticPlane",
    "SizeInput",
    "IntegralityResult",
    "EigenPlane",
    "EigenDecomposition",
    "ProbeResult",
    "standard_form",
    "split_form",
    "build_AV",
    "omega_complement",
    "integral_points",
    "is_D_integral",
    "is_eta_integral",
    "eigenplane_decomposition",
    "discreteness_probe",
    "classify_size",
    "validate_size_input",
]

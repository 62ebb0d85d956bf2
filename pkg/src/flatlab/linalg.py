"""Exact linear algebra over Q, number fields, and Z.

Matrices are plain lists of rows.  Entries may be ``Fraction``, ``int`` or
:class:`~flatlab.exact_scalar.ExactScalar`; the field routines only use
``+ - * /`` and comparison with zero, so they work for any exact field.
The integer routines (Smith form, kernels, saturation) use Python ints.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list[list]


def _is_zero(x) -> bool:
    return not x


def rref(mat: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(row) for row in mat]
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if not _is_zero(m[i][c])), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c] if not isinstance(m[r][c], int) else Fraction(1, m[r][c])
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(mat: Sequence[Sequence]) -> int:
    if not mat or not mat[0]:
        return 0
    return len(rref(mat)[1])


def nullspace(mat: Sequence[Sequence], zero=Fraction(0), one=Fraction(1)) -> list[list]:
    """Basis of the right kernel, one vector per free column."""
    if not mat:
        return []
    red, pivots = rref(mat)
    cols = len(mat[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * cols
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        basis.append(v)
    return basis


def solve(mat: Sequence[Sequence], rhs: Sequence):
    """Unique solution of ``mat @ x = rhs``; raises ``ValueError`` otherwise."""
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    cols = len(mat[0])
    red, pivots = rref(aug)
    if cols in pivots:
        raise ValueError("inconsistent system")
    if len(pivots) < cols:
        raise ValueError("system is underdetermined")
    x = [None] * cols
    for i, p in enumerate(pivots):
        x[p] = red[i][-1]
    return x


def solve_matrix(mat: Sequence[Sequence], rhs_cols: Sequence[Sequence]) -> list[list]:
    """Solve ``mat @ X = B`` column by column; returns ``X`` as a list of rows."""
    sols = [solve(mat, col) for col in rhs_cols]
    return [list(r) for r in zip(*sols)] if sols else []


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    out = []
    for row in a:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def transpose(a: Sequence[Sequence]) -> Matrix:
    return [list(r) for r in zip(*a)]


def identity(n: int, one=1, zero=0) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def determinant(mat: Sequence[Sequence]):
    """Determinant by fraction-free elimination over an exact field."""
    m = [list(r) for r in mat]
    n = len(m)
    det = 1
    for c in range(n):
        p = next((i for i in range(c, n) if not _is_zero(m[i][c])), None)
        if p is None:
            return 0 * m[0][0] if n else 1
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        piv = m[c][c]
        det = det * piv
        for i in range(c + 1, n):
            if not _is_zero(m[i][c]):
                f = m[i][c] / piv if not isinstance(piv, int) else Fraction(m[i][c], piv)
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


# -- integer matrices --------------------------------------------------------------

def smith_normal_form(mat: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``D = U @ M @ V`` with ``U``, ``V`` unimodular.

    The diagonal of ``D`` is non-negative with each entry dividing the next.
    """
    m = [[int(x) for x in row] for row in mat]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        m[dst] = [a + k * b for a, b in zip(m[dst], m[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):  # col dst += k * col src
        for row in m:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    t = 0
    while t < min(rows, cols):
        # pivot: smallest nonzero absolute value in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            done = True
            piv = m[t][t]
            for i in range(t + 1, rows):
                if m[i][t]:
                    q = m[i][t] // piv
                    add_row(i, t, -q)
                    if m[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if m[t][j]:
                    q = m[t][j] // piv
                    add_col(j, t, -q)
                    if m[t][j]:
                        done = False
            if done:
                # divisibility of the trailing block
                bad = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if m[i][j] % piv:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                add_row(t, bad, 1)
                continue
            # move the smallest remaining entry of row/col t into the pivot
            best = (t, t)
            for i in range(t, rows):
                if m[i][t] and abs(m[i][t]) < abs(m[best[0]][best[1]]):
                    best = (i, t)
            for j in range(t, cols):
                if m[t][j] and abs(m[t][j]) < abs(m[best[0]][best[1]]):
                    best = (t, j)
            if best[0] != t:
                swap_rows(t, best[0])
            if best[1] != t:
                swap_cols(t, best[1])
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return m, U, V


def integer_inverse(u: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    n = len(u)
    inv = solve_matrix(
        [[Fraction(x) for x in row] for row in u],
        [[Fraction(int(i == j)) for i in range(n)] for j in range(n)],
    )
    out = []
    for row in inv:
        if any(x.denominator != 1 for x in row):
            raise ValueError("matrix is not unimodular")
        out.append([int(x) for x in row])
    return out


def integer_kernel(mat: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Z-basis of ``{x in Z^n : mat @ x = 0}`` (as vectors)."""
    if not mat:
        n = ncols or 0
        return [[int(i == j) for j in range(n)] for i in range(n)]
    d, _u, v = smith_normal_form(mat)
    r = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])
    n = len(mat[0])
    return [[v[i][j] for i in range(n)] for j in range(r, n)]


def saturate(vectors: Sequence[Sequence[int]]) -> list[list[int]]:
    """Z-basis of ``span_Q(vectors) ∩ Z^n``."""
    if not vectors:
        return []
    # the saturation is the kernel of the integer annihilator of the span
    n = len(vectors[0])
    ann = integer_kernel([list(v) for v in vectors])
    if not ann:
        return [[int(i == j) for j in range(n)] for i in range(n)]
    return integer_kernel(ann)


def primitive(v: Sequence[int]) -> list[int]:
    g = 0
    for x in v:
        g = gcd(g, x)
    return [x // g for x in v] if g else list(v)


def common_denominator(values: Sequence[Fraction]) -> int:
    den = 1
    for q in values:
        den = den * q.denominator // gcd(den, q.denominator)
    return den


def lattice_basis(vectors: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Z-basis of the Z-module generated by rational vectors (Hermite-style)."""
    vecs = [list(v) for v in vectors if any(v)]
    if not vecs:
        return []
    den = common_denominator([x for v in vecs for x in v])
    ints = [[int(x * den) for x in v] for v in vecs]
    # Smith form of the generator matrix (rows = generators): D = U G V
    d, _u, v = smith_normal_form(ints)
    vinv = integer_inverse(v)
    r = sum(1 for i in range(min(len(d), len(d[0]))) if d[i][i])
    # the module is spanned by rows d_i * (row i of V^{-1})
    return [[Fraction(d[i][i] * x, den) for x in vinv[i]] for i in range(r)]

"""Exact arithmetic in real-embedded algebraic number fields.

A :class:`NumberField` is ``Q[x]/(f)`` for a monic irreducible integer
polynomial ``f`` together with a choice of real root of ``f`` (the
distinguished embedding).  Elements are :class:`ExactScalar` values stored in
the power basis as integer numerators over a common positive denominator.

Rationals are degree-one scalars over :data:`QQ`; they coerce into every
field, so ``2 * x`` or ``x + Fraction(1, 3)`` just work.

Signs are decided exactly.  Degree-two fields use a closed form; higher
degrees evaluate on a rational isolating interval of the root and bisect
until the enclosure excludes zero.  Since ``f`` is irreducible, an element
with a nonzero coordinate vector is nonzero, so the refinement loop always
terminates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from math import gcd, isqrt
from typing import Iterable, Sequence

from .errors import IncompatibleFields, RationalParameter

Rational = int | Fraction


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, ExactScalar):
        return x.to_fraction()
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def _is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return ``(k, m)`` with ``n == k*k*m`` and ``m`` squarefree (``n > 0``)."""
    if n <= 0:
        raise ValueError("n must be positive")
    k, m = 1, 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            k *= p
        if n % p == 0:
            n //= p
            m *= p
        p += 1 if p == 2 else 2
    return k, m * n


def _poly_sign_at(poly_low: Sequence[int], x: Fraction) -> int:
    acc = Fraction(0)
    for c in reversed(poly_low):
        acc = acc * x + c
    return (acc > 0) - (acc < 0)


def _interval_mul(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]):
    p = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return min(p), max(p)


def _interval_horner(coeffs_low: Sequence[Fraction], lo: Fraction, hi: Fraction):
    acc = (Fraction(0), Fraction(0))
    for c in reversed(coeffs_low):
        m = _interval_mul(acc, (lo, hi))
        acc = (m[0] + c, m[1] + c)
    return acc


class NumberField:
    """``Q[x]/(f)`` with a distinguished real root of ``f``.

    Instances are interned: two fields built from the same polynomial and
    embedding index are the same object.
    """

    _cache: dict[tuple, "NumberField"] = {}

    def __new__(cls, minimal_polynomial: Sequence[int], embedding_index: int = 0):
        poly = tuple(int(c) for c in minimal_polynomial)
        if len(poly) == 2:
            # every degree-one field is Q; its power basis is {1}
            poly, embedding_index = (1, 0), 0
        key = (poly, int(embedding_index))
        try:
            return cls._cache[key]
        except KeyError:
            pass
        self = super().__new__(cls)
        self._setup(poly, int(embedding_index))
        cls._cache[key] = self
        return self

    def _setup(self, poly: tuple[int, ...], embedding_index: int) -> None:
        if len(poly) < 2 or poly[0] != 1:
            raise ValueError("minimal polynomial must be monic of degree >= 1")
        self.poly = poly
        self.degree = len(poly) - 1
        self.embedding_index = embedding_index
        self.key = (poly, embedding_index)
        d = self.degree
        self._low = list(reversed(poly))
        # theta^k in the power basis for d <= k <= 2d-2
        red: list[list[int]] = []
        cur = [-c for c in self._low[:d]]
        for _ in range(max(d - 1, 0)):
            red.append(cur)
            top = cur[-1]
            nxt = [0] + cur[:-1]
            if top:
                nxt = [nxt[i] - top * self._low[i] for i in range(d)]
            cur = nxt
        self._red = red
        self._check_irreducible()
        roots = self._isolate_real_roots()
        if not 0 <= embedding_index < len(roots):
            raise ValueError(
                f"embedding index {embedding_index} out of range; "
                f"{len(roots)} real root(s)"
            )
        self.real_root_count = len(roots)
        self._intervals = [roots[embedding_index]]
        if d == 2:
            self._p, self._q = poly[1], poly[2]
            self._disc = self._p * self._p - 4 * self._q
            self._eps = 1 if embedding_index == 1 else -1

    # -- construction helpers -------------------------------------------------
    @classmethod
    def quadratic(cls, m: int) -> "NumberField":
        """``Q(sqrt m)`` for squarefree ``m > 1`` with the positive root."""
        if m <= 1 or squarefree_decomposition(m)[0] != 1:
            raise ValueError("m must be a squarefree integer > 1")
        return cls((1, 0, -m), 1)

    def _check_irreducible(self) -> None:
        d = self.degree
        if d == 1:
            return
        if d == 2:
            p, q = self.poly[1], self.poly[2]
            if _is_square(p * p - 4 * q):
                raise ValueError(f"{self.poly} is reducible over Q")
            return
        import sympy

        x = sympy.Symbol("x")
        if not sympy.Poly(list(self.poly), x).is_irreducible:
            raise ValueError(f"{self.poly} is reducible over Q")

    def _isolate_real_roots(self) -> list[tuple[Fraction, Fraction]]:
        d = self.degree
        if d == 1:
            r = Fraction(-self.poly[1])
            return [(r, r)]
        if d == 2:
            p, q = self.poly[1], self.poly[2]
            disc = p * p - 4 * q
            if disc < 0:
                return []
            k = 0
            while True:
                s = isqrt(disc * 4**k)
                lo_s, hi_s = Fraction(s, 2**k), Fraction(s + 1, 2**k)
                r_lo = ((-p - hi_s) / 2, (-p - lo_s) / 2)
                r_hi = ((-p + lo_s) / 2, (-p + hi_s) / 2)
                if r_lo[1] < r_hi[0]:
                    return [r_lo, r_hi]
                k += 1
        import sympy

        x = sympy.Symbol("x")
        out = []
        for (a, b), _mult in sympy.Poly(list(self.poly), x).intervals():
            out.append((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))))
        return out

    # -- root access ------------------------------------------------------------
    def root_interval(self, level: int = 0) -> tuple[Fraction, Fraction]:
        """Isolating interval of the distinguished root after ``level`` bisections."""
        ivs = self._intervals
        while len(ivs) <= level:
            lo, hi = ivs[-1]
            if lo == hi:
                ivs.append((lo, hi))
                continue
            mid = (lo + hi) / 2
            s_mid = _poly_sign_at(self._low, mid)
            if s_mid == 0:
                ivs.append((mid, mid))
            elif s_mid == _poly_sign_at(self._low, lo):
                ivs.append((mid, hi))
            else:
                ivs.append((lo, mid))
        return ivs[level]

    def complex_roots(self) -> list[complex]:
        """All roots of the minimal polynomial, numerically (53-bit)."""
        import numpy as np

        return [complex(z) for z in np.roots([float(c) for c in self.poly])]

    @property
    def gen(self) -> "ExactScalar":
        if self.degree == 1:
            return ExactScalar._make(self, (-self.poly[1],), 1)
        num = [0] * self.degree
        num[1] = 1
        return ExactScalar._make(self, tuple(num), 1)

    def zero(self) -> "ExactScalar":
        return ExactScalar._make(self, (0,) * self.degree, 1)

    def one(self) -> "ExactScalar":
        return ExactScalar._make(self, (1,) + (0,) * (self.degree - 1), 1)

    def __call__(self, value) -> "ExactScalar":
        """Coerce ``value`` (rational, coordinate list, or scalar) into this field."""
        if isinstance(value, ExactScalar):
            return value.lift(self)
        if isinstance(value, (list, tuple)):
            return ExactScalar(self, value)
        return ExactScalar(self, [value])

    def to_dict(self) -> dict:
        return {"minimal_polynomial": list(self.poly), "embedding_index": self.embedding_index}

    @classmethod
    def from_dict(cls, d: dict) -> "NumberField":
        return cls(d["minimal_polynomial"], d.get("embedding_index", 0))

    def __repr__(self) -> str:
        if self.degree == 1:
            return "QQ"
        return f"NumberField({list(self.poly)}, {self.embedding_index})"

    def __reduce__(self):
        return (NumberField, (self.poly, self.embedding_index))


QQ = NumberField((1, 0), 0)


@total_ordering
class ExactScalar:
    """An element of a :class:`NumberField`, immutable and hashable."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: NumberField, coordinates: Iterable = (0,)):
        coords = [_as_fraction(c) for c in coordinates]
        if len(coords) > field.degree:
            raise ValueError("too many coordinates for field degree")
        coords += [Fraction(0)] * (field.degree - len(coords))
        den = 1
        for c in coords:
            den = den * c.denominator // gcd(den, c.denominator)
        num = tuple(int(c * den) for c in coords)
        self._init(field, num, den)

    def _init(self, field, num, den):
        g = den
        for n in num:
            g = gcd(g, n)
            if g == 1:
                break
        if g != 1:
            num = tuple(n // g for n in num)
            den //= g
        if not any(num):
            den = 1
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def _make(cls, field, num, den) -> "ExactScalar":
        self = object.__new__(cls)
        if den < 0:
            num = tuple(-n for n in num)
            den = -den
        self._init(field, num, den)
        return self

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    def __reduce__(self):
        return (ExactScalar._make, (self.field, self.num, self.den))

    # -- inspection ---------------------------------------------------------------
    @property
    def coordinates(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(n, self.den) for n in self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:]) if self.field.degree > 1 else True

    def is_integral_rational(self) -> bool:
        return self.is_rational() and self.den == 1

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    def lift(self, field: NumberField) -> "ExactScalar":
        """The same value viewed in ``field`` (only from rationals or the same field)."""
        if self.field is field:
            return self
        if self.is_rational():
            q = self.to_fraction()
            return ExactScalar._make(
                field, (q.numerator,) + (0,) * (field.degree - 1), q.denominator
            )
        raise IncompatibleFields(f"cannot embed {self.field!r} into {field!r}")

    # -- coercion -------------------------------------------------------------------
    def _other(self, other) -> "ExactScalar | None":
        if isinstance(other, ExactScalar):
            if other.field is self.field:
                return other
            if other.is_rational():
                return other.lift(self.field)
            return None
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return ExactScalar._make(
                self.field, (q.numerator,) + (0,) * (self.field.degree - 1), q.denominator
            )
        return NotImplemented

    def _pair(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented, NotImplemented
        if o is None:
            # self may be rational while other is not
            if self.is_rational():
                return self.lift(other.field), other
            raise IncompatibleFields(f"{self.field!r} and {other.field!r} have no common field")
        return self, o

    # -- arithmetic -------------------------------------------------------------------
    def __add__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        if a.den == b.den:
            return ExactScalar._make(a.field, tuple(x + y for x, y in zip(a.num, b.num)), a.den)
        return ExactScalar._make(
            a.field,
            tuple(x * b.den + y * a.den for x, y in zip(a.num, b.num)),
            a.den * b.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar._make(self.field, tuple(-x for x in self.num), self.den)

    def __pos__(self):
        return self

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        f = a.field
        d = f.degree
        if d == 1:
            return ExactScalar._make(f, (a.num[0] * b.num[0],), a.den * b.den)
        x, y = a.num, b.num
        if not any(x[1:]):
            return ExactScalar._make(f, tuple(x[0] * c for c in y), a.den * b.den)
        if not any(y[1:]):
            return ExactScalar._make(f, tuple(y[0] * c for c in x), a.den * b.den)
        conv = [0] * (2 * d - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        conv[i + j] += xi * yj
        res = conv[:d]
        for k in range(d, 2 * d - 1):
            ck = conv[k]
            if ck:
                r = f._red[k - d]
                for i in range(d):
                    res[i] += ck * r[i]
        return ExactScalar._make(f, tuple(res), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        f = self.field
        d = f.degree
        if d == 1:
            return ExactScalar._make(f, (self.den,), self.num[0])
        if d == 2:
            a, b = self.num
            # conjugate of a + b*theta is (a - b*p) - b*theta
            conj = ExactScalar._make(f, (a - b * f._p, -b), self.den)
            norm = self * conj
            return conj * ExactScalar._make(f, (norm.den, 0), norm.num[0])
        # solve (multiplication matrix) * c = e0
        from .linalg import solve

        cols = []
        basis_el = f.one()
        g = f.gen
        for _ in range(d):
            cols.append((self * basis_el).coordinates)
            basis_el = basis_el * g
        mat = [[cols[j][i] for j in range(d)] for i in range(d)]
        rhs = [Fraction(1)] + [Fraction(0)] * (d - 1)
        return ExactScalar(f, solve(mat, rhs))

    def __truediv__(self, other):
        a, b = self._pair(other)
        if a is NotImplemented:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order ------------------------------------------------------------------------
    def sign(self) -> int:
        """Sign under the distinguished real embedding, decided exactly."""
        num = self.num
        if not any(num):
            return 0
        f = self.field
        if f.degree == 1:
            return 1 if num[0] > 0 else -1
        if f.degree == 2:
            a = 2 * num[0] - num[1] * f._p
            b = num[1] * f._eps
            return _sign_a_plus_b_sqrt(a, b, f._disc)
        return self._sign_by_intervals()

    def _sign_by_intervals(self) -> int:
        level = 0
        coeffs = [Fraction(n, self.den) for n in self.num]
        while True:
            lo, hi = self.field.root_interval(level)
            vlo, vhi = _interval_horner(coeffs, lo, hi)
            if vlo > 0:
                return 1
            if vhi < 0:
                return -1
            level += 4

    def enclosure(self, width: Fraction) -> tuple[Fraction, Fraction]:
        """A rational interval of width at most ``width`` containing the value."""
        coeffs = [Fraction(n, self.den) for n in self.num]
        level = 0
        while True:
            lo, hi = self.field.root_interval(level)
            vlo, vhi = _interval_horner(coeffs, lo, hi)
            if vhi - vlo <= width:
                return vlo, vhi
            level += 4

    def __eq__(self, other):
        if isinstance(other, ExactScalar) and other.field is not self.field:
            if self.is_rational() and other.is_rational():
                return self.to_fraction() == other.to_fraction()
            if self.is_rational() or other.is_rational():
                return False
            return compare(self, other) == 0
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __lt__(self, other):
        return compare(self, other) < 0

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.field.key, self.num, self.den))

    def __bool__(self):
        return any(self.num)

    def __float__(self):
        f = self.field
        if self.is_rational():
            return float(Fraction(self.num[0], self.den))
        if f.degree == 2:
            a = 2 * self.num[0] - self.num[1] * f._p
            b = self.num[1] * f._eps
            k = 80
            root = isqrt(f._disc * 4**k)
            return float(Fraction(a * 2**k + b * root, 2 * self.den * 2**k))
        coeffs = [Fraction(n, self.den) for n in self.num]
        level = 0
        while True:
            lo, hi = f.root_interval(level)
            vlo, vhi = _interval_horner(coeffs, lo, hi)
            mid = (vlo + vhi) / 2
            if vhi - vlo <= max(abs(mid), Fraction(1, 2**200)) * Fraction(1, 2**60):
                return float(mid)
            level += 8

    def key(self) -> tuple:
        """Exact, field-aware key usable for canonical encodings and sorting."""
        if self.is_rational():
            return (0, Fraction(self.num[0], self.den))
        return (1, self.field.key, self.num, self.den)

    def conjugate(self) -> "ExactScalar":
        """Galois conjugate inside the same quadratic field."""
        f = self.field
        if f.degree == 1:
            return self
        if f.degree != 2:
            raise ValueError("conjugate() is only defined for quadratic fields")
        a, b = self.num
        return ExactScalar._make(f, (a - b * f._p, -b), self.den)

    def norm(self) -> Fraction:
        """Field norm to Q (quadratic and rational fields)."""
        if self.field.degree == 1:
            return self.to_fraction()
        return (self * self.conjugate()).to_fraction()

    # -- display --------------------------------------------------------------------
    def __repr__(self) -> str:
        return f"ExactScalar({self})"

    def __str__(self) -> str:
        if self.is_rational():
            return str(Fraction(self.num[0], self.den))
        f = self.field
        if f.degree == 2 and f._p == 0:
            a = Fraction(self.num[0], self.den)
            b = Fraction(self.num[1], self.den)
            m = -f._q
            rad = f"sqrt({m})" if f._eps > 0 else f"(-sqrt({m}))"
            head = "" if a == 0 else f"{a}"
            sep = "" if a == 0 else (" + " if b > 0 else " - ")
            bb = abs(b) if a != 0 else b
            coef = "" if bb == 1 else ("-" if bb == -1 else f"{bb}*")
            return f"{head}{sep}{coef}{rad}"
        terms = []
        for i, n in enumerate(self.num):
            if n:
                c = Fraction(n, self.den)
                terms.append(f"{c}" if i == 0 else f"{c}*t^{i}")
        return " + ".join(terms)

    # -- serialization -------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "minimal_polynomial": list(self.field.poly),
            "embedding_index": self.field.embedding_index,
            "coordinates": [_fmt_rational(c) for c in self.coordinates],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExactScalar":
        field = NumberField(d["minimal_polynomial"], d.get("embedding_index", 0))
        return cls(field, [Fraction(c) for c in d["coordinates"]])


def _sign_a_plus_b_sqrt(a: int, b: int, disc: int) -> int:
    """Sign of ``a + b*sqrt(disc)`` for integers, ``disc > 0``."""
    sa = (a > 0) - (a < 0)
    sb = (b > 0) - (b < 0)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    lhs, rhs = a * a, b * b * disc
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0


def _fmt_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def rational(x) -> ExactScalar:
    """A rational number as a degree-one :class:`ExactScalar`."""
    q = _as_fraction(x)
    return ExactScalar._make(QQ, (q.numerator,), q.denominator)


def as_scalar(x, field: NumberField | None = None) -> ExactScalar:
    s = x if isinstance(x, ExactScalar) else rational(x)
    return s.lift(field) if field is not None else s


def sqrt_rational(r) -> ExactScalar:
    """``sqrt(r)`` for rational ``r >= 0`` in the smallest quadratic field."""
    q = _as_fraction(r)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return rational(0)
    n = q.numerator * q.denominator
    k, m = squarefree_decomposition(n)
    coef = Fraction(k, q.denominator)
    if m == 1:
        return rational(coef)
    return ExactScalar(NumberField.quadratic(m), [0, coef])


def make_mcmullen_parameter(b, allow_rational: bool = False) -> ExactScalar:
    """``a = b - 1 + sqrt(b^2 - b + 1)`` for rational ``b``.

    Raises :class:`RationalParameter` when ``a`` is rational unless
    ``allow_rational`` is set.
    """
    b = _as_fraction(b)
    root = sqrt_rational(b * b - b + 1)
    a = root + (b - 1)
    if a.is_rational() and not allow_rational:
        raise RationalParameter(
            f"a = {a} is rational for b = {b}", b=_fmt_rational(b), a=str(a)
        )
    return a


# -- comparison across fields --------------------------------------------------------

def minimal_polynomial(x: ExactScalar) -> tuple[Fraction, ...]:
    """Monic minimal polynomial of ``x`` over Q, leading coefficient first."""
    if x.is_rational():
        return (Fraction(1), -x.to_fraction())
    import sympy

    f = x.field
    d = f.degree
    cols = []
    el = f.one()
    for _ in range(d):
        cols.append((x * el).coordinates)
        el = el * f.gen
    mat = sympy.Matrix(d, d, lambda i, j: sympy.Rational(cols[j][i].numerator, cols[j][i].denominator))
    t = sympy.Symbol("t")
    charpoly = mat.charpoly(t)
    _, factors = sympy.factor_list(charpoly.as_expr(), t)
    for fac, _mult in factors:
        coeffs = [Fraction(int(c.p), int(c.q)) for c in sympy.Poly(fac, t).all_coeffs()]
        lead = coeffs[0]
        coeffs = [c / lead for c in coeffs]
        val = f.zero()
        for c in coeffs:
            val = val * x + c
        if val.is_zero():
            return tuple(coeffs)
    raise AssertionError("no factor of the characteristic polynomial vanishes")


def _root_index(x: ExactScalar, minpoly: tuple[Fraction, ...]) -> int:
    import sympy

    t = sympy.Symbol("t")
    den = 1
    for c in minpoly:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in minpoly]
    ivs = [
        (Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)))
        for (a, b), _ in sympy.Poly(ints, t).intervals()
    ]
    width = Fraction(1)
    while True:
        lo, hi = x.enclosure(width)
        hits = [i for i, (a, b) in enumerate(ivs) if not (hi < a or lo > b)]
        if len(hits) == 1:
            return hits[0]
        width /= 16
        ivs = [
            (Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q)))
            for (a, b), _ in sympy.Poly(ints, t).intervals(eps=float(width))
        ]


def compare(x, y) -> int:
    """Exact trichotomy ``-1, 0, 1`` of ``x`` versus ``y`` under the real embeddings.

    Elements of a common field (or rationals) are compared by the sign of
    the difference.  Elements of unrelated fields are compared without
    building a compositum: equality is decided through minimal polynomials
    and root indices, and inequality by refining enclosures until they
    separate.
    """
    xs = x if isinstance(x, ExactScalar) else rational(x)
    ys = y if isinstance(y, ExactScalar) else rational(y)
    if xs.field is ys.field or xs.is_rational() or ys.is_rational():
        return (xs - ys).sign()
    if minimal_polynomial(xs) == minimal_polynomial(ys):
        mp = minimal_polynomial(xs)
        if _root_index(xs, mp) == _root_index(ys, mp):
            return 0
    width = Fraction(1)
    while True:
        xl, xh = xs.enclosure(width)
        yl, yh = ys.enclosure(width)
        if xh < yl:
            return -1
        if yh < xl:
            return 1
        width /= 16


@dataclass(frozen=True)
class Conjugate:
    """Image of a scalar under one complex embedding of its field."""

    value: "ExactScalar | complex"
    is_real: bool
    embedding: int

    def numeric(self) -> complex:
        return complex(float(self.value)) if self.is_real else self.value


def galois_conjugates(x: ExactScalar) -> list[Conjugate]:
    """Images of ``x`` under every embedding of its field into C.

    Real embeddings return an :class:`ExactScalar` with the same coordinates
    over the field carrying that embedding; complex ones return a numeric
    ``complex``.  The distinguished embedding comes first.
    """
    f = x.field
    if f.degree == 1:
        return [Conjugate(x, True, 0)]
    out = [Conjugate(x, True, f.embedding_index)]
    for i in range(f.real_root_count):
        if i != f.embedding_index:
            out.append(Conjugate(ExactScalar._make(NumberField(f.poly, i), x.num, x.den), True, i))
    n_complex = f.degree - f.real_root_count
    if n_complex:
        roots = sorted(
            (z for z in f.complex_roots() if abs(z.imag) > 1e-12),
            key=lambda z: (z.real, z.imag),
        )
        for k, z in enumerate(roots):
            val = sum(complex(n / x.den) * z**i for i, n in enumerate(x.num))
            out.append(Conjugate(val, False, f.real_root_count + k))
    return out


def common_field(*values) -> NumberField:
    """The unique non-rational field among ``values`` (or QQ)."""
    field = QQ
    for v in values:
        if isinstance(v, ExactScalar) and not v.is_rational():
            if field is QQ:
                field = v.field
            elif v.field is not field:
                raise IncompatibleFields(f"{field!r} and {v.field!r}")
    return field


__all__ = [
    "NumberField",
    "ExactScalar",
    "QQ",
    "Conjugate",
    "rational",
    "as_scalar",
    "sqrt_rational",
    "make_mcmullen_parameter",
    "galois_conjugates",
    "compare",
    "minimal_polynomial",
    "common_field",
    "squarefree_decomposition",
]

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from flatlab.errors import EmptyInput, IncompatibleFields, NotPeriodicDirection
from flatlab.exact_scalar import rational, sqrt_rational
from flatlab.surface import apply_matrix, area, build_mcmullen_surface, square_torus
from flatlab.triangulation import canonical_form
from flatlab.veech import (
    ball_norm,
    critical_exponent_estimate,
    cylinder_decomposition,
    enumerate_stabilizer,
    in_ball,
    is_stabilizer_element,
    mat_inv,
    mat_mul,
    matrix_key,
    parabolic_in_direction,
    sl2z_ball,
)

Q = rational


def M(a, b, c, d):
    return ((Q(a), Q(b)), (Q(c), Q(d)))


I = M(1, 0, 0, 1)


def brute_sl2z(R):
    """Independent oracle: every integer matrix of determinant one in the ball."""
    X = 2 * math.cosh(R)
    m = int(math.sqrt(X)) + 1
    out = set()
    for a in range(-m, m + 1):
        for b in range(-m, m + 1):
            for c in range(-m, m + 1):
                for d in range(-m, m + 1):
                    if a * d - b * c == 1 and a * a + b * b + c * c + d * d <= X + 1e-9:
                        out.add((a, b, c, d))
    return out


def as_tuple(g):
    return tuple(int(x.to_fraction()) for row in g for x in row)


class TestCanonicalForm:
    def test_sheared_torus(self, torus):
        assert canonical_form(apply_matrix(M(1, 1, 0, 1), torus)) == canonical_form(torus)

    def test_rectangle_torus_differs(self, torus):
        rect = apply_matrix(M(2, 0, 0, Fraction(1, 2)), torus)
        assert canonical_form(rect) != canonical_form(torus)

    def test_idempotent(self, mcmullen):
        from flatlab.surface import dumps, loads

        c1 = canonical_form(mcmullen)
        c2 = canonical_form(loads(dumps(mcmullen)))
        assert c1 == c2 and c1.encoding == canonical_form(mcmullen).encoding

    def test_rotation_of_octagon(self, octagon):
        h = sqrt_rational(2) / 2
        rot = ((h, -h), (h, h))
        assert canonical_form(apply_matrix(rot, octagon)) == canonical_form(octagon)


class TestMembership:
    def test_identity(self, mcmullen):
        assert is_stabilizer_element(I, mcmullen)

    @pytest.mark.parametrize("g", [M(1, 1, 0, 1), M(1, -1, 0, 1), M(0, -1, 1, 0), M(2, 1, 1, 1), M(1, 0, 3, 1)])
    def test_torus_sl2z(self, torus, g):
        assert is_stabilizer_element(g, torus)

    def test_torus_diagonal(self, torus):
        assert not is_stabilizer_element(M(2, 0, 0, Fraction(1, 2)), torus)

    def test_incompatible_field(self, mcmullen):
        s2 = sqrt_rational(2)
        with pytest.raises(IncompatibleFields):
            is_stabilizer_element(((s2, Q(0)), (Q(0), 1 / s2)), mcmullen)

    def test_determinant(self, torus):
        with pytest.raises(ValueError):
            is_stabilizer_element(M(2, 0, 0, 1), torus)


class TestCylinders:
    def test_torus_horizontal(self, torus):
        d = cylinder_decomposition(torus, (1, 0))
        assert len(d.cylinders) == 1 and d.moduli == (1,)

    def test_lshape_horizontal(self, lshape):
        d = cylinder_decomposition(lshape, (1, 0))
        assert sorted(d.moduli) == [Fraction(1, 2), 1]
        assert all(m.is_rational() for m in d.moduli)
        assert sum(c.area for c in d.cylinders) == area(lshape)

    def test_irrational_slope(self, torus):
        with pytest.raises(NotPeriodicDirection):
            cylinder_decomposition(square_torus(), (Q(1), sqrt_rational(2)), max_steps=200)

    def test_mcmullen_area_sum(self, mcmullen):
        for v in ((1, 0), (0, 1), (1, 1)):
            d = cylinder_decomposition(mcmullen, v)
            total = sum(c.area for c in d.cylinders)
            assert total == area(mcmullen)

    def test_two_cylinder_moduli(self, two_cyl):
        d = cylinder_decomposition(two_cyl, (1, 0))
        assert sorted(d.moduli) == [1, sqrt_rational(3)]


class TestParabolic:
    def test_torus(self, torus):
        assert matrix_key(parabolic_in_direction(torus, (1, 0))) == matrix_key(M(1, 1, 0, 1))

    def test_lshape(self, lshape):
        P = parabolic_in_direction(lshape, (1, 0))
        assert matrix_key(P) == matrix_key(M(1, 2, 0, 1))
        assert is_stabilizer_element(P, lshape)

    def test_lshape_diagonal(self, lshape):
        P = parabolic_in_direction(lshape, (1, 1))
        assert P is not None and is_stabilizer_element(P, lshape)
        # fixes the direction
        assert P[0][0] + P[0][1] == P[1][0] + P[1][1] == 1

    def test_incommensurable(self, two_cyl):
        assert parabolic_in_direction(two_cyl, (1, 0)) is None

    def test_mcmullen_horizontal(self, mcmullen):
        P = parabolic_in_direction(mcmullen, (1, 0))
        assert P[0][1] == 3 + sqrt_rational(3)
        assert is_stabilizer_element(P, mcmullen)


class TestEnumeration:
    def test_torus_small(self, torus):
        en = enumerate_stabilizer(torus, 3, budget=10_000)
        keys = {matrix_key(g) for g in en.elements}
        for g in (I, M(1, 1, 0, 1), M(1, -1, 0, 1)):
            assert matrix_key(g) in keys
        assert {as_tuple(g) for g in en.elements} == brute_sl2z(3)

    def test_budget_flag(self, torus):
        en = enumerate_stabilizer(torus, 6, budget=50)
        assert en.budget_exhausted
        assert all(is_stabilizer_element(g, torus) for g in en.elements)

    def test_trivial_double(self, two_cyl):
        en = enumerate_stabilizer(two_cyl, 4, directions=6)
        assert {as_tuple(g) for g in en.elements} == {(1, 0, 0, 1), (-1, 0, 0, -1)}

    def test_mcmullen_nontrivial(self, mcmullen):
        en = enumerate_stabilizer(mcmullen, 4)
        assert len(en.elements) > 2
        assert all(is_stabilizer_element(g, mcmullen) for g in en.elements)

    def test_closure_in_ball(self, torus):
        R = 4
        en = enumerate_stabilizer(torus, R)
        rng = random.Random(3)
        els = list(en.elements)
        for _ in range(40):
            g, h = rng.choice(els), rng.choice(els)
            p = mat_mul(g, h)
            if in_ball(p, R):
                assert is_stabilizer_element(p, torus)


@settings(max_examples=15)
@given(st.integers(-2, 2), st.integers(-2, 2))
def test_conjugation_consistency(a, b):
    s = build_mcmullen_surface(2)
    h = mat_mul(M(1, a, 0, 1), M(1, 0, b, 1))
    t = apply_matrix(h, s)
    for g in (parabolic_in_direction(s, (1, 0)), M(1, 1, 0, 1)):
        conj = mat_mul(mat_mul(h, g), mat_inv(h))
        assert is_stabilizer_element(g, s) == is_stabilizer_element(conj, t)


class TestCriticalExponent:
    def test_identity_only(self):
        est = critical_exponent_estimate([I], [1, 2, 4])
        assert est.counts == (1, 1, 1) and est.delta_hat == (0, 0, 0)

    def test_cyclic_group(self):
        g = M(2, 1, 1, 1)
        els = [I]
        p, q = I, I
        for _ in range(40):
            p, q = mat_mul(p, g), mat_mul(q, mat_inv(g))
            els += [p, q]
        est = critical_exponent_estimate(els, [5, 10, 20, 40])
        assert list(est.delta_hat) == sorted(est.delta_hat, reverse=True)
        assert est.delta_hat[-1] < 0.1
        # at most one new pair g^n, g^-n per translation length, plus the offset of i from the axis
        step = 2 * math.log((3 + math.sqrt(5)) / 2)
        for R, c in zip(est.radii, est.counts):
            assert 1 + 2 * int(R / step) - 2 <= c <= 1 + 2 * (int(R / step) + 1)

    def test_empty(self):
        with pytest.raises(EmptyInput):
            critical_exponent_estimate([], [1])

    def test_sl2z_counts_match_oracle(self):
        for R in (2, 4):
            assert {as_tuple(g) for g in sl2z_ball(R)} == brute_sl2z(R)

    def test_ball_norm(self):
        assert ball_norm(I) == 0
        g = M(2, 0, 0, Fraction(1, 2))
        assert ball_norm(g) == pytest.approx(2 * math.log(2))

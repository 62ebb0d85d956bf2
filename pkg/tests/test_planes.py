import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

from flatlab.errors import DegeneratePlane, InconsistentInput, NonSemisimple
from flatlab.exact_scalar import NumberField, sqrt_rational
from flatlab.planes import (
    SizeInput,
    SymplecticPlane,
    build_AV,
    classify_size,
    discreteness_probe,
    eigenplane_decomposition,
    integral_points,
    is_D_integral,
    is_eta_integral,
    omega_complement,
    split_form,
    standard_form,
    validate_size_input,
)

W4 = standard_form(4)
GOLDEN = [[0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 1]]
e = [[int(i == j) for j in range(4)] for i in range(4)]


def matvec(A, v):
    return [sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(A))]


class TestAV:
    def test_coordinate_plane(self):
        A = build_AV(W4, e[0], e[1])
        assert [[int(x) for x in row] for row in A] == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]

    def test_scaled(self):
        v2 = [0, 2, 0, 0]
        A = build_AV(W4, e[0], v2)
        assert matvec(A, e[0]) == [2, 0, 0, 0]
        assert matvec(A, v2) == [0, 4, 0, 0]
        assert matvec(A, e[2]) == [0] * 4 and matvec(A, e[3]) == [0] * 4

    def test_degenerate(self):
        with pytest.raises(DegeneratePlane):
            build_AV(W4, e[0], e[2])


@given(
    st.integers(2, 4).flatmap(
        lambda h: st.tuples(
            st.lists(st.integers(-10, 10), min_size=2 * h, max_size=2 * h),
            st.lists(st.integers(-10, 10), min_size=2 * h, max_size=2 * h),
        )
    )
)
def test_AV_restrictions(vs):
    v1, v2 = vs
    omega = standard_form(len(v1))
    c = omega(v1, v2)
    if c == 0:
        return
    A = build_AV(omega, v1, v2)
    assert matvec(A, v1) == [c * x for x in v1]
    assert matvec(A, v2) == [c * x for x in v2]
    plane = SymplecticPlane.span(v1, v2)
    for w in omega_complement(omega, plane):
        assert all(x == 0 for x in matvec(A, w))


class TestDIntegral:
    def test_coordinate_plane(self):
        r = is_D_integral(W4, SymplecticPlane.span(e[0], e[1]), 1)
        assert r.ok and r.covolume == 1

    def test_irrational_plane(self):
        s2 = sqrt_rational(2)
        K = s2.field
        plane = SymplecticPlane.span([K.one(), s2, K.zero(), K.zero()], [K.zero(), K.one(), K.one(), K.zero()])
        r = is_D_integral(W4, plane, 1)
        assert not r.ok and r.reason == "rank-deficient"
        assert len(integral_points(plane)) < 2

    def test_covolume_mismatch(self):
        r = is_D_integral(W4, SymplecticPlane.span(e[0], e[1]), 2)
        assert not r.ok and r.reason == "covolume-mismatch" and r.detail["actual"] == 1

    def test_saturation(self):
        # span((2,0,0,0),(0,3,0,0)) contains e1, e2, so the covolume is 1, not 6
        r = is_D_integral(W4, SymplecticPlane.span([2, 0, 0, 0], [0, 3, 0, 0]), 1)
        assert r.ok


class TestEigenplanes:
    def test_golden(self):
        J = split_form(4)
        dec = eigenplane_decomposition(GOLDEN, J)
        assert dec.direct_sum and dec.orthogonal
        etas = sorted(p.eta for p in dec.planes)
        s5 = sqrt_rational(5)
        assert etas == [(1 - s5) / 2, (1 + s5) / 2]
        for p in dec.planes:
            assert p.nondegenerate
            for v in p.basis:
                assert matvec(GOLDEN, list(v)) == [p.eta * x for x in v]
        b0, b1 = dec.planes[0].basis, dec.planes[1].basis
        for u in b0:
            for v in b1:
                assert J(list(u), list(v)) == 0

    def test_standard_form_gives_isotropic_eigenplanes(self):
        # with the block form the two companion blocks are separate symplectic planes
        dec = eigenplane_decomposition(GOLDEN, W4)
        assert dec.direct_sum
        assert not any(p.nondegenerate for p in dec.planes)

    def test_identity(self):
        with pytest.raises(NonSemisimple):
            eigenplane_decomposition(e, W4)

    def test_symmetrized_rational(self):
        A = [[2, 0, 0, 0], [0, Fraction(1, 2), 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
        dec = eigenplane_decomposition(A, W4, mode="symmetrized")
        etas = sorted(p.eta for p in dec.planes)
        assert etas == [2, Fraction(5, 2)]
        assert all(p.eta.field.degree == 1 for p in dec.planes)

    def test_defective(self):
        with pytest.raises(NonSemisimple):
            eigenplane_decomposition([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]], W4)

    def test_dimensions_sum(self):
        dec = eigenplane_decomposition(GOLDEN, split_form(4))
        assert sum(len(p.basis) for p in dec.planes) == 4


class TestEtaIntegral:
    def test_golden_certificate(self):
        J = split_form(4)
        dec = eigenplane_decomposition(GOLDEN, J)
        phi = max(dec.planes, key=lambda p: p.eta)
        r = is_eta_integral(J, phi.plane(), phi.eta, phi.eta.conjugate())
        assert r.ok
        assert [list(row) for row in r.operator] == GOLDEN

    def test_degenerate_quadratic(self):
        r = is_eta_integral(W4, SymplecticPlane.span(e[0], e[1]), 1, 0)
        assert r.ok and [list(x) for x in r.operator] == [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]

    def test_perturbed_plane(self):
        rng = random.Random(7)
        J = split_form(4)
        s5 = sqrt_rational(5)
        phi = (1 + s5) / 2
        dec = eigenplane_decomposition(GOLDEN, J)
        plane = max(dec.planes, key=lambda p: p.eta).plane()
        for _ in range(10):
            eps = Fraction(rng.randint(1, 9), rng.randint(10, 50))
            v1 = list(plane.basis[0])
            v1[rng.randrange(4)] += eps
            p2 = SymplecticPlane.span(v1, list(plane.basis[1]))
            if J(v1, list(plane.basis[1])) == 0:
                continue
            assert not is_eta_integral(J, p2, phi, phi.conjugate()).ok

    def test_degenerate_plane(self):
        with pytest.raises(DegeneratePlane):
            is_eta_integral(W4, SymplecticPlane.span(e[0], e[2]), 1, 0)


class TestProbe:
    def test_small_radius(self):
        r = discreteness_probe(W4, SymplecticPlane.span(e[0], e[1]), D=1, radius=Fraction(1, 1000), bound=3)
        assert r.count == 0

    def test_huge_radius(self):
        r = discreteness_probe(W4, SymplecticPlane.span(e[0], e[1]), D=1, radius=Fraction(2), bound=1)
        assert r.count > 0
        target = SymplecticPlane.span(e[2], e[3]).key()
        assert any(SymplecticPlane.span(*m).key() == target for m in r.members)
        assert SymplecticPlane.span(e[0], e[1]).key() not in {SymplecticPlane.span(*m).key() for m in r.members}

    def test_bound_zero(self):
        r = discreteness_probe(W4, SymplecticPlane.span(e[0], e[1]), D=1, radius=Fraction(2), bound=0)
        assert r.count == 0


class TestSize:
    def test_small_examples(self):
        assert classify_size(SizeInput(1, 1, 4, 2, 0)) == "Small"
        assert classify_size(SizeInput(1, 2, 4, 2, 0)) == "Small"

    def test_large_over_number_field(self):
        for d in (2, 3, 4):
            for rk in (2, 3):
                assert classify_size(SizeInput(d, 1, 2 * rk, rk, 0)) == "Large"

    def test_inconsistent(self):
        with pytest.raises(InconsistentInput):
            classify_size(SizeInput(1, 3, 4, 2, 0))


def valid_inputs():
    for d, dp, dim, rk, ker in product(range(1, 5), range(1, 5), range(0, 11), range(1, 6), range(0, 11)):
        x = SizeInput(d, dp, dim, rk, ker)
        try:
            validate_size_input(x)
        except InconsistentInput:
            continue
        yield x


def test_size_complementarity_sweep():
    seen = 0
    for x in valid_inputs():
        seen += 1
        assert classify_size(x) in ("Large", "Small")
    assert seen > 50

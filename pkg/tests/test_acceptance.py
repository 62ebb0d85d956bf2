"""The twelve acceptance criteria, each at its stated tolerance and time limit.

Every test prints one ``[criterion N] PASS|FAIL`` line.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from flatlab.exact_scalar import NumberField, rational, sqrt_rational
from flatlab.homology import detect_torus_cover, homology_bases, left_inverse_r, period_map, tau_rank
from flatlab.margulis import (
    AdditiveMargulisConfig,
    drift_chain,
    entropy_functional,
    tail_bound_experiment,
    tail_csv,
)
from flatlab.planes import (
    SizeInput,
    SymplecticPlane,
    build_AV,
    classify_size,
    discreteness_probe,
    eigenplane_decomposition,
    is_D_integral,
    is_eta_integral,
    omega_complement,
    split_form,
    standard_form,
    validate_size_input,
)
from flatlab.errors import InconsistentInput
from flatlab.surface import apply_matrix, area, build_mcmullen_surface, classify_stratum, l_shaped_surface, square_torus
from flatlab.veech import critical_exponent_estimate, enumerate_stabilizer, is_stabilizer_element
from flatlab.cli import delta_csv

pytestmark = pytest.mark.acceptance

SEED = 20240917
_cache = {}


@pytest.fixture
def report(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}")
        return ok

    return emit


# 1 -------------------------------------------------------------------------------------------

def test_c01_mcmullen_construction(report):
    t = time.perf_counter()
    s = build_mcmullen_surface(2)
    sig = classify_stratum(s)
    A = area(s)
    dt = time.perf_counter() - t
    ok = sig.genus == 2 and sig.zero_orders == (1, 1) and A == 12 + 6 * sqrt_rational(3) and dt < 1
    report(1, ok, f"genus {sig.genus}, orders {sig.zero_orders}, area {A}, {dt:.3f}s")
    assert ok


# 2 -------------------------------------------------------------------------------------------

@pytest.mark.parametrize("b", [2, 3, 5, Fraction(1, 2)], ids=["b=2", "b=3", "b=5", "b=1/2"])
def test_c02_period_ranks(report, b):
    t = time.perf_counter()
    rep = tau_rank(build_mcmullen_surface(b))
    dt = time.perf_counter() - t
    ok = rep.z_rank == 4 and rep.q_dim == 4 and dt < 5
    report(2, ok, f"b={b}: Z-rank {rep.z_rank}, Q-dim {rep.q_dim}, {dt:.2f}s")
    assert ok


# 3 -------------------------------------------------------------------------------------------

def test_c03_torus_cover_dichotomy(report):
    t = time.perf_counter()
    L = l_shaped_surface()
    rep = tau_rank(L)
    cover = detect_torus_cover(L)
    u, v = rep.torus_lattice
    lattice_is_Z2 = abs(u[0] * v[1] - u[1] * v[0]) == 1 and all(
        x.is_integral_rational() for x in (*u, *v)
    )
    none_for_S = detect_torus_cover(build_mcmullen_surface(2)) is None
    dt = time.perf_counter() - t
    ok = (
        rep.q_dim == 2
        and lattice_is_Z2
        and cover.degree == 3
        and area(L) / cover.covolume == 3
        and none_for_S
        and dt < 5
    )
    report(3, ok, f"L: q_dim {rep.q_dim}, lattice Z^2 {lattice_is_Z2}, degree {cover.degree}; S(a) none {none_for_S}; {dt:.2f}s")
    assert ok


# 4 -------------------------------------------------------------------------------------------

def _random_sl2(field, rng):
    g = ((field.one(), field.zero()), (field.zero(), field.one()))
    for k in range(4):
        t = field((Fraction(rng.randint(-4, 4), rng.randint(1, 3)), rng.randint(-1, 1)))
        e = ((field.one(), t), (field.zero(), field.one())) if k % 2 == 0 else ((field.one(), field.zero()), (t, field.one()))
        g = tuple(tuple(sum((g[i][m] * e[m][j] for m in range(2)), field.zero()) for j in range(2)) for i in range(2))
    return g


def test_c04_left_inverse(report):
    s = build_mcmullen_surface(2)
    r = left_inverse_r(s)
    incl = r.data.inclusion_matrix
    ident = all(
        sum(Fraction(r.matrix[i][k]) * incl[k][j] for k in range(len(incl))) == (1 if i == j else 0)
        for i in range(4)
        for j in range(4)
    )
    rng = random.Random(SEED)
    eq = 0
    for _ in range(20):
        g = _random_sl2(s.field, rng)
        t = apply_matrix(g, s)
        r2 = left_inverse_r(t)
        xs, ys = period_map(s, r.data)
        xs2, ys2 = period_map(t, r.data)
        periods_ok = list(xs2) == [g[0][0] * x + g[0][1] * y for x, y in zip(xs, ys)] and list(ys2) == [
            g[1][0] * x + g[1][1] * y for x, y in zip(xs, ys)
        ]
        if periods_ok and r2.matrix == r.matrix and set(r2.kernel) == set(r.kernel):
            eq += 1
    ok = ident and len(r.kernel) == 1 and eq == 20
    report(4, ok, f"r p* = Id4 {ident}, dim ker r {len(r.kernel)}, equivariant under {eq}/20 exact g")
    assert ok


# 5 -------------------------------------------------------------------------------------------

def _matvec(A, v):
    return [sum(A[i][j] * v[j] for j in range(len(v))) for i in range(len(A))]


def test_c05_AV_operator(report):
    rng = random.Random(SEED)
    t = time.perf_counter()
    failures = tested = 0
    while tested < 500:
        n = rng.choice([4, 6, 8])
        v1 = [rng.randint(-10, 10) for _ in range(n)]
        v2 = [rng.randint(-10, 10) for _ in range(n)]
        omega = standard_form(n)
        if omega(v1, v2) == 0:
            continue
        plane = SymplecticPlane.span(v1, v2)
        D = is_D_integral(omega, plane, 1).covolume
        res = is_D_integral(omega, plane, D)
        tested += 1
        if not res.ok:
            failures += 1
            continue
        A = [list(row) for row in res.operator]
        l1, l2 = res.lattice
        good = all(isinstance(x, int) for row in A for x in row)
        good &= _matvec(A, list(l1)) == [D * x for x in l1] and _matvec(A, list(l2)) == [D * x for x in l2]
        for w in omega_complement(omega, plane):
            good &= all(x == 0 for x in _matvec(A, w))
        # the same operator from the formula on the lattice basis
        good &= [[int(x) for x in row] for row in build_AV(omega, l1, l2)] == A
        failures += not good
    dt = time.perf_counter() - t
    ok = failures == 0 and dt < 30
    report(5, ok, f"{tested} planes, {failures} failures, {dt:.1f}s")
    assert ok


# 6 -------------------------------------------------------------------------------------------

def test_c06_discreteness(report):
    rng = random.Random(SEED)
    omega = standard_form(4)
    t = time.perf_counter()
    failures = probes = 0
    while probes < 50:
        v1 = [rng.randint(-2, 2) for _ in range(4)]
        v2 = [rng.randint(-2, 2) for _ in range(4)]
        if omega(v1, v2) == 0:
            continue
        plane = SymplecticPlane.span(v1, v2)
        D = is_D_integral(omega, plane, 1).covolume
        if D > 4:
            continue
        probes += 1
        res = discreteness_probe(omega, plane, D=D, radius=Fraction(1, 1000), bound=5)
        failures += res.count != 0
    dt = time.perf_counter() - t
    ok = failures == 0 and dt < 60
    report(6, ok, f"{probes} members probed, {failures} with neighbors, {dt:.1f}s")
    assert ok


# 7 -------------------------------------------------------------------------------------------

def test_c07_golden_eigenplanes(report):
    A = [[0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 1]]
    J = split_form(4)
    dec = eigenplane_decomposition(A, J)
    s5 = sqrt_rational(5)
    etas = sorted(p.eta for p in dec.planes)
    phi = max(dec.planes, key=lambda p: p.eta)
    cert = is_eta_integral(J, phi.plane(), phi.eta, phi.eta.conjugate())
    ok = (
        len(dec.planes) == 2
        and dec.direct_sum
        and dec.orthogonal
        and etas == [(1 - s5) / 2, (1 + s5) / 2]
        and cert.ok
        and [list(r) for r in cert.operator] == A
    )
    report(7, ok, f"eta {[str(e) for e in etas]}, direct {dec.direct_sum}, orthogonal {dec.orthogonal}, certificate {cert.ok}")
    assert ok


# 8 -------------------------------------------------------------------------------------------

def test_c08_size_sweep(report):
    t = time.perf_counter()
    total = 0
    partition = True
    for d in range(1, 5):
        for dp in range(1, 5):
            for dim in range(0, 11):
                for rk in range(1, 6):
                    for ker in range(0, 11):
                        x = SizeInput(d, dp, dim, rk, ker)
                        try:
                            validate_size_input(x)
                        except InconsistentInput:
                            continue
                        total += 1
                        try:
                            classify_size(x)
                        except InconsistentInput:
                            partition = False
    small1 = classify_size(SizeInput(1, 1, 4, 2, 0)) == "Small"
    small2 = classify_size(SizeInput(1, 2, 4, 2, 0)) == "Small"
    dt = time.perf_counter() - t
    ok = partition and small1 and small2 and dt < 1
    report(8, ok, f"{total} valid inputs partitioned {partition}; small cases {small1 and small2}; {dt:.3f}s")
    assert ok


# 9 -------------------------------------------------------------------------------------------

def _torus_delta_csv():
    en = enumerate_stabilizer(square_torus(), 8, budget=10**6)
    est = critical_exponent_estimate(en.elements, [2, 4, 6, 8])
    return en, est, delta_csv(est)


def test_c09_veech(report):
    t = time.perf_counter()
    torus = square_torus()
    en, est, csv_text = _torus_delta_csv()
    _cache["c09"] = csv_text
    S = build_mcmullen_surface(2)
    enS = enumerate_stabilizer(S, 6, budget=10**6)
    sound_T = all(is_stabilizer_element(g, torus) for g in en.elements)
    sound_S = all(is_stabilizer_element(g, S) for g in enS.elements)
    dt = time.perf_counter() - t
    dh = est.delta_hat
    nondecreasing = all(a <= b for a, b in zip(dh, dh[1:]))
    at_most_one = all(x <= 1 for x in dh)
    ok = sound_T and sound_S and nondecreasing and at_most_one and dt < 300
    report(
        9,
        ok,
        f"sound torus {sound_T} ({len(en.elements)}), S(a) {sound_S} ({len(enS.elements)}); "
        f"counts {est.counts}, delta_hat {tuple(round(x, 4) for x in dh)}: "
        f"non-decreasing {nondecreasing}, <= 1 {at_most_one}; {dt:.0f}s",
    )
    assert sound_T and sound_S and dt < 300, "soundness or time limit"
    assert nondecreasing and at_most_one, "delta_hat is log(#ball)/R, which decreases to 1 from above"


# 10 ------------------------------------------------------------------------------------------

def test_c10_entropy(report):
    h_half = entropy_functional([Fraction(1, 2)] * 10)
    h_quarter = entropy_functional([Fraction(1, 4)] * 10)
    ok = h_half == 1 and abs(h_quarter - 0.811278) <= 1e-6
    report(10, ok, f"p=1/2 -> {h_half!r}, p=1/4 -> {h_quarter:.7f}")
    assert ok


# 11 ------------------------------------------------------------------------------------------

def _tail_results():
    cfg = AdditiveMargulisConfig(alpha=float, T0=math.log(2), T1=1.0, epsilon=0.0)
    chain = drift_chain(200)
    return [tail_bound_experiment(chain, cfg, t, n_paths=100_000, seed=SEED) for t in (20, 50, 100)]


def test_c11_tail_bound(report):
    t = time.perf_counter()
    res = _tail_results()
    _cache["c11"] = tail_csv(res)
    dt = time.perf_counter() - t
    formula_ok = all(r.paper_bound == 1 / (math.log(math.floor(r.t)) - 1) for r in res)
    ok = all(r.holds for r in res) and formula_ok and dt < 120
    report(
        11,
        ok,
        ", ".join(f"t={r.t}: {r.empirical_tail:.3g} <= {r.paper_bound:.4f}+{r.tolerance:.2g}" for r in res)
        + f"; {dt:.1f}s",
    )
    assert ok


# 12 ------------------------------------------------------------------------------------------

def test_c12_determinism(report):
    first9 = _cache.get("c09") or _torus_delta_csv()[2]
    first11 = _cache.get("c11") or tail_csv(_tail_results())
    again9 = _torus_delta_csv()[2]
    again11 = tail_csv(_tail_results())
    ok = first9 == again9 and first11 == again11
    report(12, ok, f"criterion 9 CSV identical {first9 == again9}, criterion 11 CSV identical {first11 == again11}")
    assert ok

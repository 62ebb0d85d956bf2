"""Two-branch Markov chains, additive Margulis functions and their tail bound.

A chain moves ``x`` to ``a(log 2) x`` with probability ``p(x)`` and to
``u(1) a(log 2) x`` otherwise.  Two state spaces are provided:

* :class:`FiniteChain` - an abstract finite set with the two branch maps
  given as successor tables, used for exact stationarity and the tail-bound
  experiments;
* :class:`LatticeChain` - unimodular planar lattices (the proxy space), with
  ``f(L) = max(1, 1 / systole(L))`` as a stand-in for the proper function of
  the stratum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import PreconditionNotVerified
from .exact_scalar import ExactScalar, NumberField

LOG2 = math.log(2)


# -- finite chains ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FiniteChain:
    """States ``0..n-1``; ``a_next[x]`` and ``ua_next[x]`` are the branch successors."""

    a_next: tuple[int, ...]
    ua_next: tuple[int, ...]
    p: tuple  # probability of the a(log 2) branch per state (Fraction or float)

    def __post_init__(self):
        n = len(self.a_next)
        if len(self.ua_next) != n or len(self.p) != n:
            raise ValueError("successor tables and p must have equal length")
        for x in range(n):
            if not (0 <= self.p[x] <= 1):
                raise ValueError(f"p({x}) outside [0, 1]")
            if not (0 <= self.a_next[x] < n and 0 <= self.ua_next[x] < n):
                raise ValueError(f"successor of {x} outside the state space")

    @property
    def size(self) -> int:
        return len(self.a_next)

    def law(self, x: int) -> list[tuple[int, object]]:
        """``omega_x`` as ``[(a x, p), (u a x, 1 - p)]``."""
        return [(self.a_next[x], self.p[x]), (self.ua_next[x], 1 - self.p[x])]

    def successor(self, x: int, branch: int) -> int:
        return self.ua_next[x] if branch else self.a_next[x]

    def prob(self, x: int):
        return self.p[x]


def drift_chain(levels: int = 200, q=Fraction(3, 20)) -> FiniteChain:
    """Birth-death chain on levels ``0..levels-1`` with ``alpha(k) = k``.

    The ``a(log 2)`` branch moves up with probability ``q`` and the other
    branch moves down (both clamp at the ends).  For ``q <= (1 - log 2)/2``
    the drift above level 1 is at most ``-log 2``.
    """
    up = tuple(min(k + 1, levels - 1) for k in range(levels))
    down = tuple(max(k - 1, 0) for k in range(levels))
    return FiniteChain(up, down, tuple([q] * levels))


def identity_chain() -> FiniteChain:
    return FiniteChain((0,), (0,), (Fraction(1, 2),))


def constant_p_chain(chain: FiniteChain, p) -> FiniteChain:
    return FiniteChain(chain.a_next, chain.ua_next, tuple([p] * chain.size))


# -- lattice proxy --------------------------------------------------------------------------

def a_matrix(t_log2_multiple: int = 1, field: NumberField | None = None):
    """``a(k log 2) = diag(2^{k/2}, 2^{-k/2})`` exactly over ``Q(sqrt 2)``."""
    K = field or NumberField.quadratic(2)
    k = t_log2_multiple
    half = Fraction(2) ** (k // 2) if k >= 0 else Fraction(1, 2) ** ((-k) // 2)
    if k % 2:
        r = K.gen * half
    else:
        r = K(half)
    return ((r, K.zero()), (K.zero(), 1 / r))


def u_matrix(s, field: NumberField | None = None):
    K = field or NumberField.quadratic(2)
    return ((K.one(), K(Fraction(s))), (K.zero(), K.one()))


def _mul(g, h):
    (a, b), (c, d) = g
    (e, f), (x, y) = h
    return ((a * e + b * x, a * f + b * y), (c * e + d * x, c * f + d * y))


def _round_exact(x: ExactScalar) -> int:
    lo, hi = x.enclosure(Fraction(1, 8))
    c = (lo + hi) / 2
    return math.floor(c + Fraction(1, 2))


def shortest_vector_sq(basis) -> ExactScalar:
    """Squared length of the shortest nonzero vector of the lattice spanned by the columns."""
    (a, b), (c, d) = basis
    u, v = (a, c), (b, d)

    def dot(p, q):
        return p[0] * q[0] + p[1] * q[1]

    while True:
        if dot(u, u) > dot(v, v):
            u, v = v, u
        m = _round_exact(dot(u, v) / dot(u, u))
        if m == 0:
            return dot(u, u)
        v = (v[0] - m * u[0], v[1] - m * u[1])


def shortest_vector_sq_float(basis) -> float:
    (a, b), (c, d) = basis
    u, v = (a, c), (b, d)
    for _ in range(200):
        uu = u[0] * u[0] + u[1] * u[1]
        vv = v[0] * v[0] + v[1] * v[1]
        if uu > vv:
            u, v, uu, vv = v, u, vv, uu
        m = round((u[0] * v[0] + u[1] * v[1]) / uu)
        if m == 0:
            return uu
        v = (v[0] - m * u[0], v[1] - m * u[1])
    return min(u[0] ** 2 + u[1] ** 2, v[0] ** 2 + v[1] ** 2)


def systole_f(basis) -> float:
    """``max(1, 1 / shortest vector length)``; exact reduction when entries are exact."""
    if isinstance(basis[0][0], ExactScalar):
        sq = float(shortest_vector_sq(basis))
    else:
        sq = shortest_vector_sq_float(basis)
    return max(1.0, 1.0 / math.sqrt(sq))


@dataclass(frozen=True)
class ProxyMargulisFunction:
    f: Callable = systole_f
    name: str = "max(1, 1/systole)"


def constant_one(_basis) -> float:
    return 1.0


@dataclass(frozen=True)
class LatticeChain:
    """Unimodular lattices (columns of a 2x2 basis) with branch probability ``p``."""

    p: Callable = field(default=lambda _x: 0.5)

    def successor(self, x, branch: int):
        g = _mul(u_matrix(1), a_matrix(1)) if branch else a_matrix(1)
        return _mul(g, x)

    def prob(self, x):
        return self.p(x)


def _reduce_float(basis):
    (a, b), (c, d) = basis
    u, v = [a, c], [b, d]
    for _ in range(200):
        uu = u[0] * u[0] + u[1] * u[1]
        vv = v[0] * v[0] + v[1] * v[1]
        if uu > vv:
            u, v = v, u
            uu = vv
        m = round((u[0] * v[0] + u[1] * v[1]) / uu)
        if m == 0:
            break
        v = [v[0] - m * u[0], v[1] - m * u[1]]
    return ((u[0], v[0]), (u[1], v[1]))


_S2 = math.sqrt(2.0)
_A = ((_S2, 0.0), (0.0, 1 / _S2))
_UA = ((_S2, 1 / _S2), (0.0, 1 / _S2))


def _fmul(g, x):
    (a, b), (c, d) = g
    (e, f), (p, q) = x
    return ((a * e + b * p, a * f + b * q), (c * e + d * p, c * f + d * q))


def simulate_lattice_chain(p: float, ell: int, steps: int, seed: int, x0=((1.0, 0.0), (0.0, 1.0))):
    """Float simulation of the ``ell``-fold lattice chain; yields ``(step, branch_index, alpha)``.

    ``branch_index`` is the ``i`` of ``u(i) a(ell log 2)`` applied in that step.
    The basis is Gauss-reduced after every move so entries stay bounded.
    """
    rng = np.random.default_rng(seed)
    x = x0
    draws = rng.random((steps, ell))
    for n in range(steps):
        i = 0
        for k in range(ell):
            branch = 0 if draws[n, k] < p else 1
            x = _reduce_float(_fmul(_UA if branch else _A, x))
            i = 2 * i + branch
        alpha = math.log(systole_f(x))
        yield n, i, alpha


def simulate_finite_chain(chain: FiniteChain, ell: int, steps: int, seed: int, alpha=float, start: int = 0):
    """Single path of the ``ell``-fold finite chain; yields ``(step, state, alpha(state))``."""
    rng = np.random.default_rng(seed)
    draws = rng.random((steps, ell))
    x = start
    for n in range(steps):
        for k in range(ell):
            x = step(chain, x, draws[n, k])
        yield n, x, alpha(x)


# -- branch words and iterated weights ----------------------------------------------------------

def step(chain, state, u: float):
    """One move driven by a uniform ``u`` in ``[0, 1)``: the ``a`` branch iff ``u < p(x)``."""
    return chain.successor(state, 0 if u < chain.prob(state) else 1)


def iterate_weights(chain, state, ell: int):
    """The ``ell``-step law as ``[(i, weight, state)]`` for ``u(i) a(ell log 2) x``, ``0 <= i < 2^ell``.

    Branch ``b_k`` (1 for the ``u(1)`` branch) at step ``k`` contributes
    ``b_k 2^(ell - k)`` to ``i``, by ``a(log 2) u(s) = u(2 s) a(log 2)``.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    out = []
    frontier = [(0, 1, state)]
    for _ in range(ell):
        nxt = []
        for i, w, x in frontier:
            p = chain.prob(x)
            nxt.append((2 * i, w * p, chain.successor(x, 0)))
            nxt.append((2 * i + 1, w * (1 - p), chain.successor(x, 1)))
        frontier = nxt
    frontier.sort(key=lambda r: r[0])
    for i, w, x in frontier:
        out.append((i, w, x))
    return out


def distribution_after(chain: FiniteChain, start: dict, ell: int) -> dict:
    """Push a finite measure ``ell`` steps (exact for rational weights)."""
    mu = dict(start)
    for _ in range(ell):
        nu: dict = {}
        for x, w in mu.items():
            for y, q in chain.law(x):
                if q:
                    nu[y] = nu.get(y, 0) + w * q
        mu = nu
    return mu


# -- entropy, stationarity ---------------------------------------------------------------------------

def binary_entropy(p) -> float:
    p = float(p)
    h = 0.0
    for q in (p, 1 - p):
        if q > 0:
            h -= q * math.log(q)
    return h


def entropy_functional(p_values: Sequence) -> float:
    """``(1 / log 2) * mean(p log(1/p) + (1-p) log(1/(1-p)))`` with ``0 log(1/0) = 0``."""
    if len(p_values) == 0:
        raise ValueError("empty sample")
    if all(p == Fraction(1, 2) for p in p_values):
        return 1.0
    return math.fsum(binary_entropy(p) for p in p_values) / len(p_values) / LOG2


def total_variation(mu: dict, nu: dict):
    keys = set(mu) | set(nu)
    return sum(abs(mu.get(k, 0) - nu.get(k, 0)) for k in keys) / 2


def check_stationarity(chain: FiniteChain, measure: dict):
    """Total-variation distance between ``measure`` and its one-step push."""
    return total_variation(measure, distribution_after(chain, measure, 1))


def stationary_distribution(chain: FiniteChain) -> dict:
    """Exact stationary vector of an irreducible finite chain with rational ``p``."""
    from .linalg import nullspace

    n = chain.size
    P = [[Fraction(0)] * n for _ in range(n)]
    for x in range(n):
        for y, q in chain.law(x):
            P[x][y] += Fraction(q)
    M = [[P[x][y] - (1 if x == y else 0) for x in range(n)] for y in range(n)]
    basis = nullspace(M)
    if len(basis) != 1:
        raise ValueError("chain does not have a unique stationary measure")
    v = basis[0]
    s = sum(v)
    return {x: v[x] / s for x in range(n) if v[x]}


# -- additive Margulis functions -----------------------------------------------------------------------

@dataclass(frozen=True)
class AdditiveMargulisConfig:
    alpha: Callable
    T0: float
    T1: float
    epsilon: float

    def __post_init__(self):
        if not (0 < self.T0 < self.T1):
            raise ValueError("need 0 < T0 < T1")
        if not (0 <= self.epsilon <= 1):
            raise ValueError("epsilon must lie in [0, 1]")


@dataclass(frozen=True)
class MargulisReport:
    M_a_violations: tuple
    M_b_measure: float
    epsilon: float
    verdict: bool
    x_good_measure: float | None = None


def check_additive_margulis(chain, cfg: AdditiveMargulisConfig, sample, delta: float | None = None, ell: int = 1) -> MargulisReport:
    """Check M-a on every observed transition and measure the M-b exceptional set.

    ``sample`` is a dict ``state -> weight`` (or a sequence of states with
    equal weights).  The exceptional set is
    ``{x : T1 <= alpha(x) < T0 + E[alpha(y)]}``.  The verdict holds iff M-a
    holds and the exceptional measure is below ``epsilon`` (or is zero).
    With ``delta`` the measure of states whose ``ell``-step weights are all
    within ``delta`` of ``2^-ell`` is also reported.
    """
    if not isinstance(sample, dict):
        w = 1 / len(sample)
        agg: dict = {}
        for x in sample:
            agg[x] = agg.get(x, 0) + w
        sample = agg
    total = sum(float(w) for w in sample.values())
    violations = []
    bad = 0.0
    good = 0.0
    for x, w in sample.items():
        ax = float(cfg.alpha(x))
        mean = 0.0
        for branch in (0, 1):
            q = float(chain.prob(x)) if branch == 0 else 1 - float(chain.prob(x))
            y = chain.successor(x, branch)
            ay = float(cfg.alpha(y))
            if q > 0 and abs(ay - ax) > cfg.T1 + 1e-12:
                violations.append((x, y, ax, ay))
            mean += q * ay
        if cfg.T1 <= ax < cfg.T0 + mean:
            bad += float(w)
        if delta is not None:
            ws = iterate_weights(chain, x, ell)
            if all(abs(float(wi) - 2.0**-ell) <= delta for _i, wi, _s in ws):
                good += float(w)
    measure = bad / total if total else 0.0
    verdict = not violations and (measure < cfg.epsilon or measure == 0.0)
    return MargulisReport(
        tuple(violations), measure, cfg.epsilon, verdict, good / total if delta is not None else None
    )


def margulis_tail_bound(t: float, T0: float, T1: float, epsilon: float) -> float:
    """``1 / (log floor(t / T1) - 1) + (T0 + T1) / T0 * epsilon``."""
    k = math.floor(t / T1)
    return 1.0 / (math.log(k) - 1.0) + (T0 + T1) / T0 * epsilon


@dataclass(frozen=True)
class TailResult:
    t: float
    empirical_tail: float
    paper_bound: float
    tolerance: float
    holds: bool
    samples: int


def sample_stationary_levels(chain: FiniteChain, n_paths: int, burn_in: int, seed: int, start: int = 0) -> np.ndarray:
    """Endpoints of ``n_paths`` independent paths after ``burn_in`` steps (vectorized)."""
    rng = np.random.default_rng(seed)
    a_next = np.array(chain.a_next)
    ua_next = np.array(chain.ua_next)
    p = np.array([float(x) for x in chain.p])
    x = np.full(n_paths, start, dtype=np.int64)
    for _ in range(burn_in):
        u = rng.random(n_paths)
        x = np.where(u < p[x], a_next[x], ua_next[x])
    return x


def tail_bound_experiment(
    chain: FiniteChain,
    cfg: AdditiveMargulisConfig,
    t: float,
    n_paths: int = 100_000,
    seed: int = 12345,
    burn_in: int = 400,
    verdict_sample=None,
) -> TailResult:
    """Empirical ``mu(alpha >= t)`` against the tail bound, with a 3-sigma binomial tolerance."""
    if t < 3 * cfg.T1:
        raise ValueError("t must be at least 3 * T1")
    sample = verdict_sample if verdict_sample is not None else {x: 1 for x in range(chain.size)}
    rep = check_additive_margulis(chain, cfg, sample)
    if not rep.verdict:
        raise PreconditionNotVerified(
            "configuration is not an additive Margulis function",
            M_b_measure=rep.M_b_measure,
            M_a_violations=len(rep.M_a_violations),
        )
    xs = sample_stationary_levels(chain, n_paths, burn_in, seed)
    alphas = np.array([float(cfg.alpha(k)) for k in range(chain.size)])
    tail = float(np.mean(alphas[xs] >= t))
    bound = margulis_tail_bound(t, cfg.T0, cfg.T1, cfg.epsilon)
    tol = 3 * math.sqrt(tail * (1 - tail) / n_paths)
    return TailResult(t, tail, bound, tol, tail <= bound + tol, n_paths)


def tail_csv(results: Sequence[TailResult]) -> str:
    """``t,empirical_tail,paper_bound,tolerance,holds`` rows with 17 significant digits."""
    lines = ["t,empirical_tail,paper_bound,tolerance,holds"]
    for r in results:
        lines.append(
            ",".join([format(float(r.t), ".17g"), format(r.empirical_tail, ".17g"),
                      format(r.paper_bound, ".17g"), format(r.tolerance, ".17g"), str(r.holds).lower()])
        )
    return "\n".join(lines) + "\n"


# -- rotation versus horocycle averages ---------------------------------------------------------------

def adaptive_simpson(fun, a: float, b: float, tol: float = 1e-9, max_depth: int = 50) -> float:
    def simpson(fa, fm, fb, a, b):
        return (b - a) / 6 * (fa + 4 * fm + fb)

    def rec(a, b, fa, fm, fb, whole, tol, depth):
        m = (a + b) / 2
        lm, rm = (a + m) / 2, (m + b) / 2
        flm, frm = fun(lm), fun(rm)
        left = simpson(fa, flm, fm, a, m)
        right = simpson(fm, frm, fb, m, b)
        if depth <= 0 or abs(left + right - whole) <= 15 * tol:
            return left + right + (left + right - whole) / 15
        return rec(a, m, fa, flm, fm, left, tol / 2, depth - 1) + rec(m, b, fm, frm, fb, right, tol / 2, depth - 1)

    # start from a fixed subdivision so symmetric integrands cannot fool the first test
    pieces = 64
    h = (b - a) / pieces
    total = 0.0
    for k in range(pieces):
        lo, hi = a + k * h, a + (k + 1) * h
        fa, fb, fm = fun(lo), fun(hi), fun((lo + hi) / 2)
        total += rec(lo, hi, fa, fm, fb, simpson(fa, fm, fb, lo, hi), tol / pieces, max_depth)
    return total


@dataclass(frozen=True)
class RotationComparison:
    S0: float
    circle_average: float
    ratio: float
    ell: int
    tolerance: float = 1e-9


def rotation_average_compare(f: ProxyMargulisFunction, x, ell: int, tol: float = 1e-9) -> RotationComparison:
    """``S0 = 2^-ell sum_i f(u(i) a(ell log 2) x)`` versus the circle average of ``f(a(ell log 2) r_theta x)``.

    ``x`` is an exact basis (columns) over ``Q(sqrt 2)`` or the rationals.
    """
    K = NumberField.quadratic(2)
    xk = tuple(tuple(e if isinstance(e, ExactScalar) else K(Fraction(e)) for e in row) for row in x)
    A = a_matrix(ell, K)
    ax = _mul(A, xk)
    vals = []
    for i in range(2**ell):
        vals.append(f.f(_mul(u_matrix(i, K), ax)))
    S0 = math.fsum(vals) / 2**ell

    xf = tuple(tuple(float(e) for e in row) for row in xk)
    s = 2.0 ** (ell / 2)
    Af = ((s, 0.0), (0.0, 1 / s))

    def g(theta):
        c, si = math.cos(theta), math.sin(theta)
        r = ((c, -si), (si, c))
        return f.f(_fmul(Af, _fmul(r, xf)))

    avg = adaptive_simpson(g, 0.0, 2 * math.pi, tol) / (2 * math.pi)
    return RotationComparison(S0, avg, S0 / avg, ell, tol)


__all__ = [
    "FiniteChain",
    "LatticeChain",
    "AdditiveMargulisConfig",
    "MargulisReport",
    "ProxyMargulisFunction",
    "RotationComparison",
    "TailResult",
    "drift_chain",
    "identity_chain",
    "constant_p_chain",
    "step",
    "iterate_weights",
    "distribution_after",
    "entropy_functional",
    "binary_entropy",
    "check_stationarity",
    "stationary_distribution",
    "check_additive_margulis",
    "margulis_tail_bound",
    "tail_bound_experiment",
    "sample_stationary_levels",
    "simulate_lattice_chain",
    "simulate_finite_chain",
    "tail_csv",
    "rotation_average_compare",
    "shortest_vector_sq",
    "systole_f",
    "constant_one",
]

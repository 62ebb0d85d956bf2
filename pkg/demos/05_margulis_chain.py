"""
A two-branch Markov chain and its Margulis function
===================================================

Each step applies a(log 2) or u(1) a(log 2).  On a birth-death chain with
strong downward drift, alpha = level is an additive Margulis function and
the tail of the stationary measure obeys the logarithmic bound.
"""

import math
from fractions import Fraction

from flatlab import (
    AdditiveMargulisConfig,
    ProxyMargulisFunction,
    check_additive_margulis,
    drift_chain,
    entropy_functional,
    iterate_weights,
    rotation_average_compare,
    simulate_lattice_chain,
    stationary_distribution,
    tail_bound_experiment,
)
from flatlab.margulis import a_matrix

for p in (Fraction(1, 2), Fraction(1, 4), 1):
    print("entropy at p =", p, ":", entropy_functional([p]))

chain = drift_chain(3)
print("3-level chain, 2-step law from level 1:", [(i, str(w), x) for i, w, x in iterate_weights(chain, 1, 2)])
pi = stationary_distribution(chain)
print("stationary:", {k: str(v) for k, v in pi.items()})

cfg = AdditiveMargulisConfig(alpha=float, T0=math.log(2), T1=1.0, epsilon=0.0)
print(check_additive_margulis(chain, cfg, pi))

big = drift_chain(200)
for t in (20, 50, 100):
    r = tail_bound_experiment(big, cfg, t, n_paths=100_000, seed=1)
    print(f"t={t}: empirical {r.empirical_tail:.3g}, bound {r.paper_bound:.4f}")

# Unimodular lattices: f = max(1, 1/systole).
K = a_matrix(0)[0][0].field
Z2 = ((K.one(), K.zero()), (K.zero(), K.one()))
for ell in (1, 4, 8):
    c = rotation_average_compare(ProxyMargulisFunction(), Z2, ell)
    print(f"ell={ell}: S0={c.S0:.6f} circle={c.circle_average:.6f} ratio={c.ratio:.4f}")

alphas = [a for _, _, a in simulate_lattice_chain(0.5, 6, 2000, seed=42)]
print("lattice chain: mean alpha %.4f, max alpha %.4f" % (sum(alphas) / len(alphas), max(alphas)))

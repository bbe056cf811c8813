"""
How fast does psi(u, T) approach psi(u)?
========================================

The gap psi(u) - psi(u, T) is bounded by C exp(-k T) with C estimated
from the stationary law of the dual.  Check the bound on a small run and
fit the observed decay rate.
"""

import math

from ruinrate import CompoundPoisson, Exponential, RiskModel, SimConfig, fitted_decay, solve_rate, verify_bound

# A model with a fast rate (k about 0.05) keeps this demo short.
model = RiskModel(3.0, 0.0, CompoundPoisson(1.0, Exponential(0.5)))
rate = solve_rate(model)
print(f"k = {rate.k:.5f}, lambda* = {rate.lam:.5f}")

# exact values for exponential claims
beta, delta, p = 1.0, 0.5, 3.0
psi_exact = beta / (p * delta) * math.exp(-(delta - beta / p) * 2.0)

rep = verify_bound(model, 2.0, [1.0, 2.0, 5.0, 10.0, 20.0, 40.0], SimConfig(n_paths=20_000, seed=3))
print(f"psi(2) estimated {rep.psi.mean:.4f} +- {rep.psi.stderr:.4f}, exact {psi_exact:.4f}")
print(f"C_hat = {rep.c_hat:.4f}")
print("    T      gap     bound   pass")
for r in rep.rows:
    print(f"  {r.T:4.0f}  {r.gap:7.4f}  {r.bound:7.4f}   {r.passed}")

rate_fit, se = fitted_decay(rep, 5.0, 40.0)
print(f"fitted decay {rate_fit:.4f} +- {se:.4f} (bound promises at least {rate.k:.4f})")

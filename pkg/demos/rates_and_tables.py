"""
Convergence rates for classical and Levy-driven surpluses
=========================================================

Compute the rate k = max Phi for a few models and print a slice of the
reproduced tables next to the printed reference values.
"""

import numpy as np

from ruinrate import CompoundPoisson, Exponential, Gamma, GammaProcess, InverseGaussian, RiskModel, solve_rate
from ruinrate import tables

# A surplus with Gamma(2,1) claims arriving at rate 1 and premium 2.2,
# i.e. a 10% safety loading.
model = RiskModel(2.2, 0.0, CompoundPoisson(1.0, Gamma(2.0, 1.0)))
r = solve_rate(model)
print(f"Gamma(2,1) claims, p=2.2:  lambda* = {r.lam:.6f}  k = {r.k:.6f}")

# Adding Brownian noise slows convergence down.
for sigma in [0.0, 1.0, 2.0, 5.0]:
    k = solve_rate(RiskModel(2.2, sigma, CompoundPoisson(1.0, Gamma(2.0, 1.0)))).k
    print(f"  sigma = {sigma:4.1f}  k = {k:.6f}")

# Same mean claim, three different claim laws.
for name, claims in tables.CLAIM_LAWS.items():
    k = solve_rate(RiskModel(2.2, 0.0, CompoundPoisson(1.0, claims))).k
    print(f"{name:>20s}  k = {k:.6f}")

# Infinite-activity subordinators: both have closed forms when sigma = 0.
p = 1.1
gp = solve_rate(RiskModel(p, 0.0, GammaProcess(0.5, 0.5)))
ig = solve_rate(RiskModel(p, 0.0, InverseGaussian(1.0)))
print(f"gamma process:     lambda* = {gp.lam:.6f}  (beta - alpha/p = {0.5 - 0.5 / p:.6f})")
print(f"inverse Gaussian:  k = {ig.k:.7f}  ((p-1)^2/(2p) = {(p - 1) ** 2 / (2 * p):.7f})")

# The first table, row by row, against the printed five-decimal values.
cells = tables.table1()
print("\nsigma  eta    computed  printed")
for c in cells[:12]:
    print(f"{c.sigma:5.0f} {c.eta:5.2f}  {c.k:.5f}   {c.printed:.5f}")
err = np.array([abs(c.k - c.printed) for c in cells])
print(f"max |computed - printed| over {err.size} cells: {err.max():.1e}")

# A rate that does not exist: premium equal to the mean claim outflow.
try:
    solve_rate(RiskModel(2.0, 0.0, CompoundPoisson(1.0, Exponential(0.5))))
except Exception as exc:
    print(f"\n{type(exc).__name__}: {exc}")

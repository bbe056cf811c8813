"""Exponential convergence rates of finite-horizon ruin probabilities.

For a surplus ``dX = p(X) dt + sigma dW - dL`` driven by a subordinator
``L``, ``0 <= psi(u) - psi(u, T) <= C exp(-k T)`` with ``k = max Phi``.
The package computes ``k`` and checks the bound by simulating the surplus
and its reflected (Siegmund) dual.
"""

from .config import load_model, model_from_dict, model_to_dict
from .errors import ConfigError, DomainError, NoPositiveRate, NonErgodic, NumericalError
from .estimate import (
    BoundReport,
    MCEstimate,
    dual_tail_prob,
    duality_check,
    fitted_decay,
    ruin_prob_curve,
    ruin_prob_finite,
    stationary_exp_moment,
    ultimate_ruin_curve,
    ultimate_ruin_prob,
    verify_bound,
)
from .levy import (
    CompoundPoisson,
    Exponential,
    Gamma,
    GammaProcess,
    InverseGaussian,
    MixedExponential,
    TruncatedClaims,
)
from .rate import RateResult, solve_rate, stationarity_residual, truncation_sweep
from .risk import AffinePremium, ConstantPremium, ConstantVolatility, RiskModel
from .simulate import (
    PathSample,
    SimConfig,
    contraction_horizon,
    lipschitz_horizon,
    order_preservation,
    simulate_coupled,
    simulate_dual,
    simulate_surplus,
    skorohod_map,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Level-dependent risk model: premium and volatility rules plus a jump model.

The surplus evolves as ``dX = p(X) dt + sigma(X) dW - dL``.  Its Siegmund
dual is the reflected jump-diffusion on [0, inf) with drift
``p*(x) = -p(x) - sigma(x) sigma'(x)``, diffusion ``sigma`` and upward jumps
``L``.  Convergence rates come from

    phi(lam, x) = p*(x) lam + sigma(x)^2 lam^2 / 2 + kappa(lam)
    Phi(lam)    = -sup_{x >= 0} phi(lam, x)
"""

from dataclasses import dataclass, replace
import math

import numpy as np

from .levy import JumpModel


@dataclass(frozen=True)
class ConstantPremium:
    p: float

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError(f"premium rate must be positive, got {self.p}")

    lipschitz = 0.0

    def __call__(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.p) if np.ndim(x) else self.p

    @property
    def minimum(self):
        return self.p


@dataclass(frozen=True)
class AffinePremium:
    """Premium with constant interest force: ``p(x) = p + i x``, ``i >= 0``."""

    p: float
    i: float

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError(f"premium rate must be positive, got {self.p}")
        if not self.i >= 0:
            raise ValueError(f"interest force must be nonnegative, got {self.i}")

    def __call__(self, x):
        return self.p + self.i * x

    @property
    def lipschitz(self):
        return self.i

    @property
    def minimum(self):
        # nondecreasing on [0, inf)
        return self.p


@dataclass(frozen=True)
class ConstantVolatility:
    sigma: float

    def __post_init__(self):
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be nonnegative and finite, got {self.sigma}")

    lipschitz = 0.0

    def __call__(self, x):
        return np.full_like(np.asarray(x, dtype=float), self.sigma) if np.ndim(x) else self.sigma

    def derivative(self, x):
        return np.zeros_like(np.asarray(x, dtype=float)) if np.ndim(x) else 0.0

    @property
    def bound(self):
        return self.sigma


@dataclass(frozen=True)
class RiskModel:
    """Premium rule, volatility rule and claims process.

    Plain numbers are accepted for ``premium`` and ``volatility`` and are
    wrapped in the constant rules.
    """

    premium: object
    volatility: object
    jumps: JumpModel

    def __post_init__(self):
        if isinstance(self.premium, (int, float)):
            object.__setattr__(self, "premium", ConstantPremium(float(self.premium)))
        if isinstance(self.volatility, (int, float)):
            object.__setattr__(self, "volatility", ConstantVolatility(float(self.volatility)))

    @property
    def sigma(self):
        return self.volatility.bound

    @property
    def abscissa(self):
        return self.jumps.abscissa

    @property
    def dual_drift_lipschitz(self):
        # constant sigma: (sigma sigma')' vanishes
        return self.premium.lipschitz

    def dual_drift(self, x):
        return -self.premium(x) - self.volatility(x) * self.volatility.derivative(x)

    def phi(self, lam, x):
        s = self.volatility(x)
        return self.dual_drift(x) * lam + 0.5 * s**2 * lam**2 + self.jumps.exponent(lam)

    def big_phi(self, lam, order=0):
        """``Phi`` and its first two derivatives in ``lam``.

        Premium rules are nondecreasing and sigma is constant, so the
        supremum over x of ``phi(lam, x)`` sits at x = 0.
        """
        p0 = self.premium.minimum
        s = self.sigma
        kappa = self.jumps.exponent(lam, order)
        if order == 0:
            return p0 * lam - 0.5 * s**2 * lam**2 - kappa
        if order == 1:
            return p0 - s**2 * lam - kappa
        return -(s**2) - kappa

    def net_profit(self):
        """True iff ``inf_x p(x) > m(mu)`` (strict, no tolerance)."""
        return self.premium.minimum > self.jumps.mean

    def truncated(self, eps):
        """Approximating model with jumps in [eps, 1/eps] and sigma + eps."""
        vol = ConstantVolatility(self.sigma + eps)
        return replace(self, volatility=vol, jumps=self.jumps.truncate(eps))

"""Claim-size laws and pure-jump subordinators.

Claim distributions expose their moment generating function (and its first
two derivatives), mean, MGF abscissa and an exact sampler.  Jump models
expose the Lévy exponent ``kappa(lam) = log E exp(lam * L(1))``, the mean
jump rate ``m = kappa'(0)``, an exact sampler for increments ``L(t + dt) -
L(t)`` and the small/large-jump truncation used to turn an infinite-activity
subordinator into a compound Poisson process.

All models are frozen dataclasses; samplers take an explicit
``numpy.random.Generator``.
"""

from dataclasses import dataclass, field
import math

import numpy as np
from scipy import integrate

from .errors import DomainError

_TABLE_SIZE = 1000


def _as_lambda(lam, upper, closed=False):
    lam = np.asarray(lam, dtype=float)
    if np.any(np.isnan(lam)) or np.any(lam < 0):
        raise DomainError(f"lambda must be nonnegative, got {lam}")
    above = lam > upper if closed else lam >= upper
    if np.any(above):
        raise DomainError(f"lambda={lam} outside [0, {upper}{']' if closed else ')'}")
    return lam


def _scalar(value):
    return float(value) if np.ndim(value) == 0 else value


def _check_order(order):
    if order not in (0, 1, 2):
        raise ValueError(f"order must be 0, 1 or 2, got {order}")


def _positive(name, value):
    if not (value > 0 and math.isfinite(value)):
        raise ValueError(f"{name} must be positive and finite, got {value}")


# ---------------------------------------------------------------------------
# Claim-size distributions
# ---------------------------------------------------------------------------


class ClaimDistribution:
    """Base class for claim-size laws on (0, inf)."""

    @property
    def abscissa(self):
        """Right end of the interval [0, abscissa) where the MGF is finite."""
        raise NotImplementedError

    @property
    def mean(self):
        return self.mgf(0.0, 1)

    @property
    def variance(self):
        return self.mgf(0.0, 2) - self.mean**2

    def mgf(self, lam, order=0):
        raise NotImplementedError

    def mgf_excess(self, lam):
        """``mgf(lam) - 1`` without cancellation for small ``lam``."""
        return _scalar(np.asarray(self.mgf(lam)) - 1.0)

    def density(self, x):
        raise NotImplementedError

    def sample(self, rng, size):
        raise NotImplementedError


@dataclass(frozen=True)
class Exponential(ClaimDistribution):
    rate: float

    def __post_init__(self):
        _positive("rate", self.rate)

    @property
    def abscissa(self):
        return self.rate

    @property
    def mean(self):
        return 1.0 / self.rate

    def mgf(self, lam, order=0):
        _check_order(order)
        lam = _as_lambda(lam, self.rate)
        d = self.rate - lam
        factor = (1.0, 1.0 / d, 2.0 / d**2)[order]
        return _scalar(self.rate / d * factor)

    def mgf_excess(self, lam):
        lam = _as_lambda(lam, self.rate)
        return _scalar(lam / (self.rate - lam))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        return _scalar(np.where(x > 0, self.rate * np.exp(-self.rate * x), 0.0))

    def sample(self, rng, size):
        return rng.exponential(1.0 / self.rate, size)


@dataclass(frozen=True)
class Gamma(ClaimDistribution):
    """Gamma law with density ``rate**shape x**(shape-1) exp(-rate x) / Gamma(shape)``."""

    shape: float
    rate: float

    def __post_init__(self):
        _positive("shape", self.shape)
        _positive("rate", self.rate)

    @property
    def abscissa(self):
        return self.rate

    @property
    def mean(self):
        return self.shape / self.rate

    def mgf(self, lam, order=0):
        _check_order(order)
        lam = _as_lambda(lam, self.rate)
        d = self.rate - lam
        base = (self.rate / d) ** self.shape
        a = self.shape
        factor = (1.0, a / d, a * (a + 1.0) / d**2)[order]
        return _scalar(base * factor)

    def mgf_excess(self, lam):
        lam = _as_lambda(lam, self.rate)
        return _scalar(np.expm1(-self.shape * np.log1p(-lam / self.rate)))

    def density(self, x):
        x = np.asarray(x, dtype=float)
        a, r = self.shape, self.rate
        with np.errstate(divide="ignore", invalid="ignore"):
            logpdf = a * math.log(r) + (a - 1.0) * np.log(x) - r * x - math.lgamma(a)
        return _scalar(np.where(x > 0, np.exp(logpdf), 0.0))

    def sample(self, rng, size):
        return rng.gamma(self.shape, 1.0 / self.rate, size)


@dataclass(frozen=True)
class MixedExponential(ClaimDistribution):
    """Two-component exponential mixture: Exp(rate1) w.p. ``weight``, else Exp(rate2)."""

    weight: float
    rate1: float
    rate2: float

    def __post_init__(self):
        if not 0.0 < self.weight < 1.0:
            raise ValueError(f"weight must lie in (0, 1), got {self.weight}")
        _positive("rate1", self.rate1)
        _positive("rate2", self.rate2)

    @property
    def abscissa(self):
        return min(self.rate1, self.rate2)

    @property
    def mean(self):
        return self.weight / self.rate1 + (1.0 - self.weight) / self.rate2

    def mgf(self, lam, order=0):
        _check_order(order)
        lam = _as_lambda(lam, self.abscissa)
        first = Exponential(self.rate1).mgf(lam, order)
        second = Exponential(self.rate2).mgf(lam, order)
        return _scalar(self.weight * first + (1.0 - self.weight) * second)

    def mgf_excess(self, lam):
        first = Exponential(self.rate1).mgf_excess(lam)
        second = Exponential(self.rate2).mgf_excess(lam)
        return _scalar(self.weight * first + (1.0 - self.weight) * second)

    def density(self, x):
        return _scalar(
            self.weight * np.asarray(Exponential(self.rate1).density(x))
            + (1.0 - self.weight) * np.asarray(Exponential(self.rate2).density(x))
        )

    def sample(self, rng, size):
        pick = rng.random(size) < self.weight
        rates = np.where(pick, self.rate1, self.rate2)
        return rng.exponential(1.0, size) / rates


@dataclass(frozen=True)
class TruncatedClaims(ClaimDistribution):
    """Normalized restriction of a Lévy measure to ``[eps, 1/eps]``.

    Moments are computed by adaptive quadrature in ``log x``; samples come
    from inverse-CDF interpolation on a log-spaced table.
    """

    parent: "JumpModel"
    eps: float
    mass: float = field(init=False, repr=False)
    _nodes: np.ndarray = field(init=False, repr=False, compare=False)
    _cdf: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0.0 < self.eps < 1.0:
            raise DomainError(f"truncation level must lie in (0, 1), got {self.eps}")
        nodes = np.geomspace(self.eps, 1.0 / self.eps, _TABLE_SIZE)
        pieces = np.array(
            [self._integrate(0, 0.0, lo, hi) for lo, hi in zip(nodes[:-1], nodes[1:])]
        )
        cdf = np.concatenate([[0.0], np.cumsum(pieces)])
        mass = cdf[-1]
        cdf = cdf / mass
        # np.interp needs strictly increasing abscissae; drop the flat tail
        keep = np.concatenate([[True], np.diff(cdf) > 0])
        object.__setattr__(self, "mass", float(mass))
        object.__setattr__(self, "_nodes", nodes[keep])
        object.__setattr__(self, "_cdf", cdf[keep])

    @property
    def lower(self):
        return self.eps

    @property
    def upper(self):
        return 1.0 / self.eps

    def _integrate(self, power, lam, lo, hi, excess=False):
        # integral of x^power * h(lam x) * mu(dx) over [lo, hi] in s = log x,
        # where h = expm1 if excess else exp; exponents are combined in log
        # form so exp(lam x) never overflows on its own
        def integrand(s):
            x = math.exp(s)
            log_f = self.parent.log_levy_density(x)
            if excess and lam * x < 1.0:
                value = math.expm1(lam * x) * math.exp(log_f)
            elif excess:
                value = math.exp(lam * x + log_f) - math.exp(log_f)
            else:
                value = math.exp(lam * x + log_f)
            return x ** (power + 1) * value

        value, _ = integrate.quad(
            integrand, math.log(lo), math.log(hi), limit=400, epsabs=0.0, epsrel=1e-12
        )
        return value

    def _moment(self, power, lam, excess=False):
        lo, hi = self.lower, self.upper
        cuts = [c for c in (1.0, 10.0, 100.0) if lo < c < hi]
        edges = [lo, *cuts, hi]
        return sum(
            self._integrate(power, lam, a, b, excess) for a, b in zip(edges[:-1], edges[1:])
        )

    @property
    def abscissa(self):
        return math.inf

    @property
    def mean(self):
        return self._moment(1, 0.0) / self.mass

    def mgf(self, lam, order=0):
        _check_order(order)
        if order == 0:
            return _scalar(1.0 + np.asarray(self.mgf_excess(lam)))
        lam_arr = _as_lambda(lam, math.inf)
        out = np.empty(lam_arr.shape)
        for idx, value in np.ndenumerate(lam_arr):
            out[idx] = self._moment(order, float(value)) / self.mass
        return _scalar(out)

    def mgf_excess(self, lam):
        lam_arr = _as_lambda(lam, math.inf)
        out = np.empty(lam_arr.shape)
        for idx, value in np.ndenumerate(lam_arr):
            out[idx] = self._moment(0, float(value), excess=True) / self.mass
        return _scalar(out)

    def density(self, x):
        x = np.asarray(x, dtype=float)
        inside = (x >= self.lower) & (x <= self.upper)
        safe = np.where(inside, x, 1.0)
        return _scalar(np.where(inside, self.parent.levy_density(safe) / self.mass, 0.0))

    def sample(self, rng, size):
        u = rng.random(size)
        return np.exp(np.interp(u, self._cdf, np.log(self._nodes)))


# ---------------------------------------------------------------------------
# Jump models (subordinators)
# ---------------------------------------------------------------------------


class JumpModel:
    """Base class for pure-jump subordinators ``L``."""

    finite_activity = False

    @property
    def abscissa(self):
        """lambda_0: ``kappa`` is finite on [0, lambda_0)."""
        raise NotImplementedError

    @property
    def mean(self):
        """m(mu) = integral of x against the Lévy measure = kappa'(0)."""
        raise NotImplementedError

    def exponent(self, lam, order=0):
        raise NotImplementedError

    def levy_density(self, x):
        raise NotImplementedError

    def log_levy_density(self, x):
        return math.log(self.levy_density(x))

    def sample_increment(self, dt, rng, size=None):
        raise NotImplementedError

    def truncate(self, eps):
        """Finite-activity approximation keeping jumps with sizes in [eps, 1/eps]."""
        if not eps > 0:
            raise DomainError(f"truncation of an infinite-activity model needs eps > 0, got {eps}")
        claims = TruncatedClaims(self, eps)
        return CompoundPoisson(claims.mass, claims)


@dataclass(frozen=True)
class CompoundPoisson(JumpModel):
    """Claims arriving at Poisson rate ``intensity``; ``intensity = 0`` means no jumps."""

    intensity: float
    claims: ClaimDistribution

    finite_activity = True

    def __post_init__(self):
        if not (self.intensity >= 0 and math.isfinite(self.intensity)):
            raise ValueError(f"intensity must be nonnegative and finite, got {self.intensity}")

    @property
    def abscissa(self):
        return math.inf if self.intensity == 0 else self.claims.abscissa

    @property
    def mean(self):
        return self.intensity * self.claims.mean if self.intensity else 0.0

    def exponent(self, lam, order=0):
        _check_order(order)
        if self.intensity == 0:
            return _scalar(np.zeros_like(_as_lambda(lam, math.inf)))
        if order == 0:
            value = self.claims.mgf_excess(lam)
        else:
            value = self.claims.mgf(lam, order)
        return _scalar(self.intensity * np.asarray(value, dtype=float))

    def levy_density(self, x):
        return _scalar(self.intensity * np.asarray(self.claims.density(x)))

    def sample_increment(self, dt, rng, size=None):
        n = 1 if size is None else size
        counts = rng.poisson(self.intensity * dt, n)
        total = int(counts.sum())
        sizes = self.claims.sample(rng, total) if total else np.empty(0)
        owner = np.repeat(np.arange(n), counts)
        out = np.bincount(owner, weights=sizes, minlength=n)
        return float(out[0]) if size is None else out

    def truncate(self, eps):
        # already finite activity: truncation is the identity
        if eps < 0:
            raise DomainError(f"eps must be nonnegative, got {eps}")
        return self


@dataclass(frozen=True)
class GammaProcess(JumpModel):
    """Lévy measure ``alpha exp(-beta x) / x dx``; L(t) ~ Gamma(alpha t, rate beta)."""

    alpha: float
    beta: float

    def __post_init__(self):
        _positive("alpha", self.alpha)
        _positive("beta", self.beta)

    @property
    def abscissa(self):
        return self.beta

    @property
    def mean(self):
        return self.alpha / self.beta

    def exponent(self, lam, order=0):
        _check_order(order)
        lam = _as_lambda(lam, self.beta)
        d = self.beta - lam
        if order == 0:
            return _scalar(-self.alpha * np.log1p(-lam / self.beta))
        return _scalar(self.alpha / d**order)

    def levy_density(self, x):
        x = np.asarray(x, dtype=float)
        return _scalar(self.alpha * np.exp(-self.beta * x) / x)

    def log_levy_density(self, x):
        return math.log(self.alpha) - self.beta * x - math.log(x)

    def sample_increment(self, dt, rng, size=None):
        return rng.gamma(self.alpha * dt, 1.0 / self.beta, size)


@dataclass(frozen=True)
class InverseGaussian(JumpModel):
    """Lévy measure ``(2 pi)^(-1/2) x^(-3/2) exp(-x gamma^2 / 2) dx``.

    ``L(t)`` is inverse Gaussian with mean ``t / gamma`` and shape ``t**2``.
    The exponent ``gamma - sqrt(gamma^2 - 2 lam)`` stays finite at
    ``lam = gamma^2 / 2`` although its derivative does not.
    """

    gamma: float

    def __post_init__(self):
        _positive("gamma", self.gamma)

    @property
    def abscissa(self):
        return 0.5 * self.gamma**2

    @property
    def mean(self):
        return 1.0 / self.gamma

    def exponent(self, lam, order=0):
        _check_order(order)
        lam = _as_lambda(lam, self.abscissa, closed=(order == 0))
        root = np.sqrt(np.maximum(self.gamma**2 - 2.0 * lam, 0.0))
        if order == 0:
            # gamma - root written to avoid cancellation near lam = 0
            return _scalar(2.0 * lam / (self.gamma + root))
        return _scalar(root ** (1 - 2 * order))

    def levy_density(self, x):
        x = np.asarray(x, dtype=float)
        return _scalar(np.exp(-0.5 * self.gamma**2 * x) / (math.sqrt(2.0 * math.pi) * x**1.5))

    def log_levy_density(self, x):
        return -0.5 * self.gamma**2 * x - 0.5 * math.log(2.0 * math.pi) - 1.5 * math.log(x)

    def sample_increment(self, dt, rng, size=None):
        return sample_inverse_gaussian(dt / self.gamma, dt**2, rng, size)


def sample_inverse_gaussian(mean, shape, rng, size=None):
    """Michael-Schucany-Haas transformation sampler for IG(mean, shape)."""
    y = rng.standard_normal(size) ** 2
    a = mean * y / (2.0 * shape)
    # smaller root of the quadratic, in the cancellation-free form
    x = mean / (1.0 + a + np.sqrt(a * (2.0 + a)))
    u = rng.random(size)
    out = np.where(u <= mean / (mean + x), x, mean**2 / x)
    return float(out) if size is None else out

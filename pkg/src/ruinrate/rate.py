"""Convergence rate k = max Phi(lam) and the maximizer lam*.

``Phi`` is strictly concave on (0, lambda_0), so a golden-section search on
``Phi`` locates the maximizer and a safeguarded Newton iteration on
``Phi'`` polishes it until the first-order residual is at round-off level.
The two answers must agree; otherwise ``NumericalError`` is raised.
"""

from collections import namedtuple
from dataclasses import asdict, dataclass
import math

import numpy as np

from .errors import DomainError, NoPositiveRate, NumericalError
from .levy import CompoundPoisson, InverseGaussian

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
EDGE = 1e-8
LAMBDA_TOL = 1e-12
RESIDUAL_TOL = 1e-10
AGREEMENT_TOL = 1e-8

SweepPoint = namedtuple("SweepPoint", "eps k_eps gap")


@dataclass(frozen=True)
class RateResult:
    lam: float
    k: float
    residual: float
    lam0: float
    concavity_ok: bool
    boundary_max: bool

    def as_dict(self):
        return asdict(self)


def golden_section_max(f, a, b, tol=LAMBDA_TOL, max_iter=500):
    """Maximizer of a unimodal ``f`` on [a, b]."""
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if b - a <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def newton_root_decreasing(g, dg, x, lo, hi, tol=1e-14, max_iter=100):
    """Root of a decreasing ``g`` inside (lo, hi), Newton steps with bisection fallback."""
    for _ in range(max_iter):
        gx = g(x)
        if gx > 0:
            lo = x
        else:
            hi = x
        if abs(gx) <= tol:
            return x
        slope = dg(x)
        step = gx / slope if slope < 0 else math.inf
        trial = x - step
        if not lo < trial < hi:
            trial = 0.5 * (lo + hi)
        if trial == x or hi - lo <= 4 * np.finfo(float).eps * max(1.0, abs(x)):
            return trial
        x = trial
    return x


def _search_interval(model):
    lam0 = model.abscissa
    if math.isfinite(lam0):
        # kappa stays finite at lambda_0 only for the inverse Gaussian
        closed = isinstance(model.jumps, InverseGaussian)
        return EDGE, lam0 if closed else lam0 - EDGE, lam0, closed
    # grow from below so e^{lam x} is never evaluated far past the maximizer
    hi = 1e-6
    while model.big_phi(hi, 1) > 0:
        hi *= 2.0
        if hi > 1e8:
            raise NumericalError("Phi is unbounded: no finite maximizer")
    return EDGE, hi, lam0, False


def stationarity_residual(model, lam):
    """First-order expression ``Phi'(lam)``.

    For the worked model families this is ``p - sigma^2 lam - beta B'(lam)``,
    ``p - sigma^2 lam - alpha / (beta - lam)`` and
    ``p - sigma^2 lam - (gamma^2 - 2 lam)^(-1/2)``.
    """
    return float(model.big_phi(lam, 1))


def solve_rate(model):
    """Maximize ``Phi`` and return the rate ``k = Phi(lam*)``."""
    if not model.net_profit():
        raise NoPositiveRate(
            "net benefit condition fails: p(0) ≤ m(mu) "
            f"(p(0)={model.premium.minimum!r}, m(mu)={model.jumps.mean!r})"
        )
    a, b, lam0, closed = _search_interval(model)
    phi = lambda lam: float(model.big_phi(lam))
    lam_golden = golden_section_max(phi, a, b)

    upper_slope = -math.inf if closed else model.big_phi(b, 1)
    boundary = upper_slope > 0
    if boundary:
        lam = b
    else:
        lam = newton_root_decreasing(
            lambda x: model.big_phi(x, 1),
            lambda x: model.big_phi(x, 2),
            lam_golden,
            0.0,
            b if not closed else lam0,
        )
        if abs(lam - lam_golden) > AGREEMENT_TOL:
            raise NumericalError(
                f"golden-section ({lam_golden!r}) and Newton ({lam!r}) maximizers disagree"
            )
    residual = abs(model.big_phi(lam, 1)) if not (closed and lam >= lam0) else math.inf
    k = phi(lam)
    grid = np.linspace(a, b if not closed else lam0 * (1 - 1e-6), 64)
    concave = bool(np.all(np.asarray(model.big_phi(np.append(grid, lam), 2)) < 0))
    if not k > 0:
        raise NumericalError(f"maximum of Phi is not positive: {k!r}")
    return RateResult(
        lam=float(lam),
        k=float(k),
        residual=float(residual),
        lam0=float(lam0),
        concavity_ok=concave,
        boundary_max=bool(boundary),
    )


def truncation_sweep(model, eps_list):
    """Rates of the truncated models (jumps in [eps, 1/eps], sigma + eps)."""
    if isinstance(model.jumps, CompoundPoisson):
        raise DomainError("truncation sweep needs an infinite-activity jump model")
    eps_list = [float(e) for e in eps_list]
    if any(e <= 0 for e in eps_list) or any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise DomainError("eps_list must be positive and strictly decreasing")
    k = solve_rate(model).k
    points = []
    for eps in eps_list:
        k_eps = solve_rate(model.truncated(eps)).k
        points.append(SweepPoint(eps, k_eps, abs(k_eps - k)))
    return points

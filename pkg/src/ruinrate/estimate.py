"""Monte Carlo estimators for ruin probabilities and the stationary dual.

* ``psi(u, T)`` is the fraction of absorbed surplus paths ruined by ``T``.
* ``P(Y(T) >= u)`` from dual paths started at 0 must match it (duality).
* ``psi(u) = P(Y(inf) >= u)`` and ``(pi, exp(lam y))`` are time averages of
  the dual after a burn-in (default ``10 / k``), over 10 independent
  replicates whose spread gives the standard error.
"""

from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
import csv
import io
import json
import math

import numpy as np

from . import rng as rngmod
from .errors import ConfigError, NonErgodic
from .rate import solve_rate
from .simulate import dual_levels, dual_time_averages, surplus_ruin_times

REPLICATES = 10
SIGMAS = 3.0

DualityRow = namedtuple("DualityRow", "u T psi_T dual_tail slack passed")


@dataclass(frozen=True)
class MCEstimate:
    mean: float
    stderr: float
    n_paths: int

    @property
    def ci95(self):
        return (self.mean - 1.96 * self.stderr, self.mean + 1.96 * self.stderr)

    def as_dict(self):
        lo, hi = self.ci95
        return {"mean": self.mean, "stderr": self.stderr, "n_paths": self.n_paths, "ci95": [lo, hi]}


def _binomial(hits, n):
    p = float(hits) / n
    return MCEstimate(p, math.sqrt(p * (1.0 - p) / n), int(n))


def _replicated(values):
    values = np.asarray(values, dtype=float)
    return MCEstimate(float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size)), 0)


# ---------------------------------------------------------------------------
# Finite horizon
# ---------------------------------------------------------------------------


def ruin_prob_curve(model, u, T_grid, cfg):
    """``psi(u, T)`` for every T in ``T_grid`` from a single batch of paths."""
    if u < 0:
        raise ConfigError(f"initial capital must be nonnegative, got {u}")
    ruin, _ = surplus_ruin_times(model, u, max(T_grid), cfg)
    return [_binomial(np.count_nonzero(ruin <= T + 1e-12), ruin.size) for T in T_grid]


def ruin_prob_finite(model, u, T, cfg):
    """Probability of ruin by time ``T`` from initial capital ``u``."""
    return ruin_prob_curve(model, u, [T], cfg)[0]


def dual_tail_grid(model, us, Ts, cfg):
    """``P(Y(T) >= u)`` for dual paths from 0; dict keyed by ``(u, T)``."""
    if any(u < 0 for u in us):
        raise ConfigError("levels must be nonnegative")
    levels = dual_levels(model, 0.0, list(Ts), cfg)
    return {
        (u, T): _binomial(np.count_nonzero(levels[j] >= u), levels.shape[1])
        for j, T in enumerate(Ts)
        for u in us
    }


def dual_tail_prob(model, u, T, cfg):
    """Tail probability of the reflected dual at time ``T``, started at 0."""
    return dual_tail_grid(model, [u], [T], cfg)[(u, T)]


def duality_check(model, us, Ts, cfg, sigmas=SIGMAS):
    """Compare surplus ruin probabilities with dual tails on a (u, T) grid.

    The surplus and dual use disjoint random streams, so the two estimates
    are independent.
    """
    dual = dual_tail_grid(model, us, Ts, cfg)
    rows = []
    for u in us:
        for T, psi in zip(Ts, ruin_prob_curve(model, u, Ts, cfg)):
            tail = dual[(u, T)]
            slack = sigmas * (psi.stderr + tail.stderr)
            rows.append(DualityRow(u, T, psi, tail, slack, abs(psi.mean - tail.mean) <= slack))
    return rows


# ---------------------------------------------------------------------------
# Stationary dual
# ---------------------------------------------------------------------------


def _default_burn_in(model):
    return 10.0 / solve_rate(model).k


def _stationary(model, levels, lam, cfg, burn_in):
    if not model.net_profit():
        raise NonErgodic("net benefit condition fails: the dual has no stationary law")
    if burn_in is None:
        burn_in = _default_burn_in(model)
    if not burn_in > 0:
        raise ConfigError(f"burn_in must be positive, got {burn_in}")
    if not cfg.horizon > burn_in:
        raise ConfigError(f"horizon {cfg.horizon} must exceed burn_in {burn_in}")
    per_rep = max(1, cfg.n_paths // REPLICATES)

    def replicate(r):
        rng = rngmod.stream(cfg.seed, rngmod.STATIONARY, r)
        occ, mom = dual_time_averages(model, levels, lam, burn_in, cfg.horizon, per_rep, rng, cfg)
        return occ.mean(axis=1), mom.mean()

    if cfg.workers > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            parts = list(pool.map(replicate, range(REPLICATES)))
    else:
        parts = [replicate(r) for r in range(REPLICATES)]
    n = per_rep * REPLICATES
    occ = np.array([p[0] for p in parts])
    tails = [replace(_replicated(occ[:, i]), n_paths=n) for i in range(len(levels))]
    moment = replace(_replicated([p[1] for p in parts]), n_paths=n)
    return tails, moment


def ultimate_ruin_curve(model, us, cfg, burn_in=None):
    """``psi(u)`` for each ``u`` as the stationary tail of the dual."""
    tails, _ = _stationary(model, list(us), 0.0, cfg, burn_in)
    return tails


def ultimate_ruin_prob(model, u, cfg, burn_in=None):
    """Probability of ultimate ruin from ``u``; averages over ``[burn_in, cfg.horizon]``."""
    return ultimate_ruin_curve(model, [u], cfg, burn_in)[0]


def stationary_exp_moment(model, lam, cfg, burn_in=None):
    """Estimate ``(pi, V_lam)`` with ``V_lam(y) = exp(lam y)``; always >= 1."""
    _, moment = _stationary(model, [], lam, cfg, burn_in)
    return moment


# ---------------------------------------------------------------------------
# Exponential bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundRow:
    T: float
    psi_T: MCEstimate
    gap: float
    bound: float
    stderr: float
    passed: bool


@dataclass(frozen=True)
class BoundReport:
    """``psi(u) - psi(u, T)`` against ``C exp(-k T)`` with ``C = 1 + (pi, V_lam)``."""

    u: float
    k: float
    lam: float
    moment: MCEstimate
    psi: MCEstimate
    rows: list = field(default_factory=list)

    @property
    def c_hat(self):
        return 1.0 + self.moment.mean

    @property
    def passed(self):
        return all(row.passed for row in self.rows)

    COLUMNS = ("u", "T", "psi_hat", "psi_T_hat", "gap", "bound", "stderr", "pass")

    def csv_rows(self):
        for row in self.rows:
            yield [self.u, row.T, self.psi.mean, row.psi_T.mean, row.gap, row.bound, row.stderr, row.passed]

    def to_csv(self, fh=None):
        """Write the rows as CSV; returns the text when ``fh`` is None."""
        out = io.StringIO() if fh is None else fh
        write_csv(out, self.COLUMNS, self.csv_rows())
        return out.getvalue() if fh is None else None

    def as_dict(self):
        return {
            "u": self.u,
            "k": self.k,
            "lambda": self.lam,
            "C_hat": self.c_hat,
            "moment": self.moment.as_dict(),
            "psi_hat": self.psi.as_dict(),
            "passed": self.passed,
            "rows": [
                {
                    "T": r.T,
                    "psi_T_hat": r.psi_T.as_dict(),
                    "gap": r.gap,
                    "bound": r.bound,
                    "stderr": r.stderr,
                    "pass": r.passed,
                }
                for r in self.rows
            ],
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, default=_json_default)


def format_value(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def write_csv(fh, columns, rows):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(v) for v in row])


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def stationary_config(cfg, burn_in, n_paths=None):
    """Config for the stationary estimators: window ``[burn_in, 2 burn_in]``."""
    horizon = math.ceil(2.0 * burn_in / cfg.step) * cfg.step
    n = n_paths if n_paths is not None else max(1000, min(cfg.n_paths, 10_000))
    return replace(cfg, horizon=horizon, n_paths=n)


def verify_bound(model, u, T_grid, cfg, lam=None, burn_in=None, stationary_cfg=None):
    """Check ``0 <= psi(u) - psi(u, T) <= C exp(-k T)`` on ``T_grid`` with 3-sigma slack."""
    rate = solve_rate(model)
    lam = rate.lam if lam is None else lam
    if burn_in is None:
        burn_in = 10.0 / rate.k
    scfg = stationary_cfg or stationary_config(cfg, burn_in)
    tails, moment = _stationary(model, [u], lam, scfg, burn_in)
    psi = tails[0]
    c_hat = 1.0 + moment.mean
    rows = []
    for T, psi_T in zip(T_grid, ruin_prob_curve(model, u, T_grid, cfg)):
        gap = psi.mean - psi_T.mean
        se = psi.stderr + psi_T.stderr
        bound = c_hat * math.exp(-rate.k * T)
        ok = (gap <= bound + SIGMAS * se) and (gap >= -SIGMAS * se)
        rows.append(BoundRow(float(T), psi_T, gap, bound, se, bool(ok)))
    return BoundReport(float(u), rate.k, lam, moment, psi, rows)


def fitted_decay(report, t_min=5.0, t_max=20.0):
    """Least-squares slope of ``-log(gap)`` against T; returns ``(rate, stderr)``."""
    pts = [(r.T, r.gap) for r in report.rows if t_min <= r.T <= t_max and r.gap > 0]
    if len(pts) < 3:
        raise ValueError("need at least three positive gaps to fit a decay rate")
    t, g = map(np.asarray, zip(*pts))
    coef, cov = np.polyfit(t, np.log(g), 1, cov=True)
    return float(-coef[0]), float(math.sqrt(cov[0, 0]))

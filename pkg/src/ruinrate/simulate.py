"""Path simulation for the surplus and its Siegmund dual.

The surplus ``X`` is absorbed at the first time it is <= 0; the dual ``Y``
is reflected at 0 through the one-step Skorohod recursion
``y <- max(0, y + increment)``.

For compound Poisson claims both processes are advanced piecewise between
the exact jump epochs inside each grid cell: the surplus is tested for ruin
right after every claim and at every grid point, and the dual is reflected
after every diffusive piece.  For infinite-activity subordinators the
surplus uses exact increments of ``L`` per cell and the dual uses the
truncated compound Poisson model with ``sigma + eps``, both monitored on
the grid only.  With constant coefficients the two discrete schemes are
exactly Siegmund dual to each other (Lindley's recursion read backwards), so
duality checks only see the truncation error.

Paths are produced in fixed-size blocks; block ``i`` always draws from the
stream ``(seed, purpose, i)``, which makes results independent of the
number of workers.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import csv
import functools
import math

import numpy as np

from . import rng as rngmod
from .errors import ConfigError
from .levy import CompoundPoisson


@dataclass(frozen=True)
class SimConfig:
    """Simulation settings.

    ``eps`` is the truncation level for infinite-activity jumps in the dual.
    When ``compensate_small_jumps`` is set, the mean of the removed jumps,
    ``m(mu) - m(mu_eps)``, is added back to the dual as drift.
    """

    step: float = 0.01
    horizon: float = 1.0
    n_paths: int = 10_000
    seed: int = 0
    eps: float = 1e-3
    block_size: int = 16_384
    workers: int = 1
    compensate_small_jumps: bool = True

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ConfigError(f"step must be positive, got {self.step}")
        if not (self.horizon > 0 and math.isfinite(self.horizon)):
            raise ConfigError(f"horizon must be positive, got {self.horizon}")
        if self.step > self.horizon * (1 + 1e-12):
            raise ConfigError(f"step {self.step} exceeds horizon {self.horizon}")
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise ConfigError(f"n_paths must be a positive integer, got {self.n_paths}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}")
        if not self.eps >= 0:
            raise ConfigError(f"eps must be nonnegative, got {self.eps}")
        if self.block_size < 1 or self.workers < 1:
            raise ConfigError("block_size and workers must be positive")

    def steps_to(self, t):
        """Number of grid steps to reach time ``t``; ``t`` must be on the grid."""
        n = round(t / self.step)
        if n < 1 or abs(n * self.step - t) > 1e-9 * max(1.0, t):
            raise ConfigError(f"time {t} is not a positive multiple of the step {self.step}")
        return n


@dataclass
class PathSample:
    """One simulated path.

    ``times`` holds the grid points together with any post-jump evaluation
    points; ``reflection`` is the cumulative reflection ``R`` (zeros for the
    surplus); ``ruin_time`` is ``None`` when no ruin occurred.
    """

    times: np.ndarray
    values: np.ndarray
    reflection: np.ndarray
    ruin_time: float = None

    @property
    def ruined(self):
        if self.ruin_time is None:
            return np.zeros(self.times.shape, dtype=bool)
        return self.times >= self.ruin_time

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["time", "value", "reflected", "ruined"])
            for t, v, r, flag in zip(self.times, self.values, self.reflection, self.ruined):
                writer.writerow([f"{t:.17g}", f"{v:.17g}", f"{r:.17g}", int(flag)])


def skorohod_map(z):
    """Reflect a discrete path at zero.

    Returns ``(y, r)`` with ``r_i = max(0, max_{j <= i} -z_j)`` and
    ``y = z + r``.
    """
    z = np.asarray(z, dtype=float)
    if z.size == 0:
        raise ValueError("skorohod_map needs a nonempty sequence")
    r = np.maximum.accumulate(np.maximum(-z, 0.0))
    return z + r, r


def lipschitz_horizon(drift_lipschitz, sigma_lipschitz):
    """Largest T with ``C(p*) T + 2 C(sigma) sqrt(T) < 1`` (supremum, inf if both vanish)."""
    a, b = float(drift_lipschitz), float(sigma_lipschitz)
    if a < 0 or b < 0:
        raise ValueError("Lipschitz constants must be nonnegative")
    if a == 0 and b == 0:
        return math.inf
    if a == 0:
        return 1.0 / (4.0 * b * b)
    # a s^2 + 2 b s - 1 = 0 with s = sqrt(T)
    s = (-b + math.sqrt(b * b + a)) / a
    return s * s


def contraction_horizon(model):
    """Time window on which the reflected fixed-point map is a contraction."""
    return lipschitz_horizon(model.dual_drift_lipschitz, model.volatility.lipschitz)


# ---------------------------------------------------------------------------
# Kernels.  State arrays have one row per noise path; surplus states carry an
# extra axis of copies that share the noise (used for coupling).
# ---------------------------------------------------------------------------


def _cell_jumps(jumps, n, h, rng):
    counts = rng.poisson(jumps.intensity * h, n)
    rows = np.flatnonzero(counts)
    if rows.size == 0:
        return rows, None, None
    k = counts[rows]
    kmax = int(k.max())
    present = np.arange(kmax) < k[:, None]
    epochs = rng.random((rows.size, kmax))
    epochs[~present] = np.inf
    epochs.sort(axis=1)
    sizes = np.zeros((rows.size, kmax))
    sizes[present] = jumps.claims.sample(rng, int(k.sum()))
    return rows, epochs * h, sizes


def _noise(rng, sigma, dt):
    if sigma == 0:
        return 0.0
    return sigma * np.sqrt(dt) * rng.standard_normal(np.shape(dt))


class _Surplus:
    def __init__(self, model, x0, n, absorb):
        self.model = model
        self.sigma = model.sigma
        self.absorb = absorb
        self.x = np.tile(np.asarray(x0, dtype=float), (n, 1))
        self.ruin_time = np.where(self.x <= 0, 0.0, np.inf)
        self.alive = self.x > 0

    def _live(self, rows):
        return self.alive[rows] if self.absorb else np.ones_like(self.alive[rows])

    def diffuse(self, rows, dt, rng):
        x = self.x[rows]
        move = self.model.premium(x) * dt[:, None] + np.reshape(_noise(rng, self.sigma, dt), (-1, 1))
        self.x[rows] = np.where(self._live(rows), x + move, x)

    def jump(self, rows, sizes):
        self.x[rows] = np.where(self._live(rows), self.x[rows] - sizes[:, None], self.x[rows])

    def check(self, rows, t):
        hit = self.alive[rows] & (self.x[rows] <= 0)
        if hit.any():
            rt = self.ruin_time[rows]
            rt[hit] = t if np.ndim(t) == 0 else np.broadcast_to(np.reshape(t, (-1, 1)), hit.shape)[hit]
            self.ruin_time[rows] = rt
            self.alive[rows] = self.alive[rows] & ~hit


def _surplus_steps(model, x0, n, n_steps, h, rng, absorb=True, trace=None):
    """Advance ``n`` noise rows of the surplus; yields the state after each grid step."""
    state = _Surplus(model, x0, n, absorb)
    jumps = model.jumps
    epochs_exact = isinstance(jumps, CompoundPoisson)
    everyone = np.arange(n)
    if trace is not None:
        trace.append((0.0, state.x[0].copy()))
    for step in range(n_steps):
        t0 = step * h
        if epochs_exact:
            rows, epochs, sizes = _cell_jumps(jumps, n, h, rng)
            last = np.zeros(n)
            if rows.size:
                for j in range(epochs.shape[1]):
                    sel = np.isfinite(epochs[:, j])
                    sub = rows[sel]
                    dt = epochs[sel, j] - last[sub]
                    state.diffuse(sub, dt, rng)
                    state.jump(sub, sizes[sel, j])
                    state.check(sub, t0 + epochs[sel, j])
                    last[sub] = epochs[sel, j]
                    if trace is not None and sel[0] and rows[0] == 0:
                        trace.append((t0 + epochs[0, j], state.x[0].copy()))
            state.diffuse(everyone, h - last, rng)
        else:
            dt = np.full(n, h)
            state.diffuse(everyone, dt, rng)
            state.jump(everyone, np.asarray(jumps.sample_increment(h, rng, n)))
        state.check(everyone, t0 + h)
        if trace is not None:
            trace.append(((step + 1) * h, state.x[0].copy()))
        yield step + 1, state


class _Dual:
    def __init__(self, drift, sigma, y0, n):
        self.drift = drift
        self.sigma = sigma
        self.y = np.full(n, float(y0))
        self.r = np.zeros(n)

    def reflect(self, rows, move):
        pre = self.y[rows] + move
        self.r[rows] += np.maximum(-pre, 0.0)
        self.y[rows] = np.maximum(pre, 0.0)

    def diffuse(self, rows, dt, rng):
        y = self.y[rows]
        self.reflect(rows, self.drift(y) * dt + _noise(rng, self.sigma, dt))


@functools.lru_cache(maxsize=32)
def _truncated(jumps, eps):
    return jumps.truncate(eps)


def dual_dynamics(model, eps, compensate=True):
    """Jump model, drift and sigma actually simulated for the dual of ``model``.

    Compound Poisson claims are used as they are.  Infinite-activity models
    are replaced by their truncation at ``eps`` with ``sigma + eps``; with
    ``compensate`` the lost mean ``m(mu) - m(mu_eps)`` becomes drift.
    """
    if isinstance(model.jumps, CompoundPoisson):
        return model.jumps, model.dual_drift, model.sigma, True
    if not eps > 0:
        raise ConfigError("infinite-activity jumps need eps > 0 for the dual simulation")
    truncated = _truncated(model.jumps, eps)
    shift = model.jumps.mean - truncated.mean if compensate else 0.0
    drift = lambda y: model.dual_drift(y) + shift
    return truncated, drift, model.sigma + eps, False


def _dual_steps(model, y0, n, n_steps, h, rng, cfg, trace=None, dynamics=None):
    jumps, drift, sigma, epochs_exact = dynamics or dual_dynamics(
        model, cfg.eps, cfg.compensate_small_jumps
    )
    state = _Dual(drift, sigma, y0, n)
    everyone = np.arange(n)
    if trace is not None:
        trace.append((0.0, state.y[0], state.r[0]))
    for step in range(n_steps):
        t0 = step * h
        if epochs_exact:
            rows, epochs, sizes = _cell_jumps(jumps, n, h, rng)
            last = np.zeros(n)
            if rows.size:
                for j in range(epochs.shape[1]):
                    sel = np.isfinite(epochs[:, j])
                    sub = rows[sel]
                    state.diffuse(sub, epochs[sel, j] - last[sub], rng)
                    state.y[sub] += sizes[sel, j]
                    last[sub] = epochs[sel, j]
                    if trace is not None and sel[0] and rows[0] == 0:
                        trace.append((t0 + epochs[0, j], state.y[0], state.r[0]))
            state.diffuse(everyone, h - last, rng)
        else:
            z = _noise(rng, sigma, np.full(n, h))
            dl = np.asarray(jumps.sample_increment(h, rng, n))
            state.reflect(everyone, drift(state.y) * h + z + dl)
        if trace is not None:
            trace.append(((step + 1) * h, state.y[0], state.r[0]))
        yield step + 1, state


def run_blocks(work, n_paths, cfg, purpose):
    """Apply ``work(size, rng)`` to consecutive blocks; results in block order."""
    starts = range(0, int(n_paths), cfg.block_size)
    tasks = [(i, min(cfg.block_size, int(n_paths) - s)) for i, s in enumerate(starts)]

    def call(task):
        i, size = task
        return work(size, rngmod.stream(cfg.seed, purpose, i))

    if cfg.workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(cfg.workers) as pool:
            return list(pool.map(call, tasks))
    return [call(t) for t in tasks]


# ---------------------------------------------------------------------------
# Public path simulators
# ---------------------------------------------------------------------------


def _default_rng(rng, cfg, purpose):
    return rng if rng is not None else rngmod.stream(cfg.seed, purpose, 2**32)


def simulate_surplus(model, u, cfg, rng=None, absorb=True):
    """One surplus path on [0, cfg.horizon] started at ``u``."""
    if u < 0:
        raise ConfigError(f"initial capital must be nonnegative, got {u}")
    rng = _default_rng(rng, cfg, rngmod.SURPLUS)
    trace = []
    state = None
    for _, state in _surplus_steps(model, [u], 1, cfg.steps_to(cfg.horizon), cfg.step, rng, absorb, trace):
        pass
    times = np.array([t for t, _ in trace])
    values = np.array([v[0] for _, v in trace])
    ruin = float(state.ruin_time[0, 0])
    return PathSample(times, values, np.zeros_like(values), None if math.isinf(ruin) else ruin)


def simulate_dual(model, y0, cfg, rng=None):
    """One reflected dual path on [0, cfg.horizon] started at ``y0``."""
    if y0 < 0:
        raise ConfigError(f"dual start must be nonnegative, got {y0}")
    rng = _default_rng(rng, cfg, rngmod.DUAL)
    trace = []
    for _ in _dual_steps(model, y0, 1, cfg.steps_to(cfg.horizon), cfg.step, rng, cfg, trace):
        pass
    times, values, refl = (np.array(col) for col in zip(*trace))
    return PathSample(times, values, refl)


def simulate_coupled(model, x1, x2, cfg, rng=None):
    """Two surplus paths from ``x1 >= x2`` driven by the same noise and claims."""
    if not x1 >= x2 >= 0:
        raise ConfigError(f"need x1 >= x2 >= 0, got {x1}, {x2}")
    rng = _default_rng(rng, cfg, rngmod.COUPLED)
    trace = []
    state = None
    for _, state in _surplus_steps(model, [x1, x2], 1, cfg.steps_to(cfg.horizon), cfg.step, rng, True, trace):
        pass
    times = np.array([t for t, _ in trace])
    values = np.array([v for _, v in trace])
    paths = []
    for c in range(2):
        ruin = float(state.ruin_time[0, c])
        vals = values[:, c]
        paths.append(PathSample(times, vals, np.zeros_like(vals), None if math.isinf(ruin) else ruin))
    return tuple(paths)


def order_preservation(model, x1, x2, cfg):
    """Fraction of (path, grid point) pairs with ``X1 >= X2`` while both are unruined."""
    n_steps = cfg.steps_to(cfg.horizon)

    def work(size, rng):
        held = total = 0
        for _, state in _surplus_steps(model, [x1, x2], size, n_steps, cfg.step, rng):
            both = state.alive.all(axis=1)
            total += int(both.sum())
            held += int((state.x[both, 0] >= state.x[both, 1]).sum())
        return held, total

    parts = run_blocks(work, cfg.n_paths, cfg, rngmod.COUPLED)
    held = sum(p[0] for p in parts)
    total = sum(p[1] for p in parts)
    return held / total if total else 1.0


def surplus_ruin_times(model, u, horizon, cfg, absorb=True):
    """Ruin times (inf when none) of ``cfg.n_paths`` surplus paths over [0, horizon]."""
    n_steps = cfg.steps_to(horizon)

    def work(size, rng):
        state = None
        for _, state in _surplus_steps(model, [u], size, n_steps, cfg.step, rng, absorb):
            pass
        return state.ruin_time[:, 0], state.x[:, 0]

    parts = run_blocks(work, cfg.n_paths, cfg, rngmod.SURPLUS)
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def dual_levels(model, y0, times, cfg):
    """Dual levels ``Y(t)`` at the grid times ``times``; array of shape (len(times), n_paths)."""
    marks = {cfg.steps_to(t): i for i, t in enumerate(times)}
    n_steps = max(marks)
    dynamics = dual_dynamics(model, cfg.eps, cfg.compensate_small_jumps)

    def work(size, rng):
        out = np.empty((len(times), size))
        for step, state in _dual_steps(model, y0, size, n_steps, cfg.step, rng, cfg, dynamics=dynamics):
            if step in marks:
                out[marks[step]] = state.y
        return out

    return np.concatenate(run_blocks(work, cfg.n_paths, cfg, rngmod.DUAL), axis=1)


def dual_time_averages(model, levels, lam, t_start, t_end, n, rng, cfg, y0=0.0):
    """Per-path time averages over [t_start, t_end] of ``1{Y >= u}`` and ``exp(lam Y)``.

    Returns ``(occupation, moment)`` with shapes ``(len(levels), n)`` and
    ``(n,)``.  With ``sigma = 0``, constant premium and compound Poisson
    claims the path is piecewise linear between claims and the integrals are
    exact; otherwise they are right-endpoint sums on the grid.
    """
    levels = np.atleast_1d(np.asarray(levels, dtype=float))
    jumps = model.jumps
    exact = (
        isinstance(jumps, CompoundPoisson)
        and model.sigma == 0
        and model.premium.lipschitz == 0
    )
    if exact:
        return _dual_exact_averages(model, levels, lam, t_start, t_end, n, rng, y0)
    start = int(math.floor(t_start / cfg.step + 1e-9))
    n_steps = int(math.ceil(t_end / cfg.step - 1e-9))
    occ = np.zeros((levels.size, n))
    mom = np.zeros(n)
    count = 0
    for step, state in _dual_steps(model, y0, n, n_steps, cfg.step, rng, cfg):
        if step > start:
            occ += state.y[None, :] >= levels[:, None]
            mom += np.exp(lam * state.y)
            count += 1
    return occ / count, mom / count


def _dual_exact_averages(model, levels, lam, t_start, t_end, n, rng, y0):
    p = model.premium.p
    jumps = model.jumps
    width = t_end - t_start
    t = np.zeros(n)
    y = np.full(n, float(y0))
    occ = np.zeros((levels.size, n))
    mom = np.zeros(n)
    active = np.ones(n, dtype=bool)
    while active.any():
        if jumps.intensity > 0:
            gap = rng.exponential(1.0 / jumps.intensity, n)
            size = jumps.claims.sample(rng, n)
        else:
            gap = np.full(n, np.inf)
            size = np.zeros(n)
        a = np.maximum(t, t_start)
        b = np.minimum(t + gap, t_end)
        inside = active & (b > a)
        tau = np.where(inside, b - a, 0.0)
        ya = np.maximum(y - p * (a - t), 0.0)
        for i, u in enumerate(levels):
            above = tau if u <= 0 else np.clip((ya - u) / p, 0.0, tau)
            occ[i] += above
        decay = np.minimum(tau, ya / p)
        if lam > 0:
            mom += np.exp(lam * ya) * (-np.expm1(-lam * p * decay)) / (lam * p) + (tau - decay)
        else:
            mom += tau
        y = np.where(active, np.maximum(y - p * gap, 0.0) + size, y)
        t = np.where(active, t + gap, t)
        active &= t < t_end
    return occ / width, mom / width

"""Monte Carlo simulation of collaborative mean estimation.

Every agent ``i`` receives one fresh observation per round and combines
it with (possibly delayed) estimates of the agents it listens to:

    theta[t+1, i] = (sum_j a[i, j] * (t - B[i, j]) * theta[t - B[i, j], j] + X[t+1, i]) / (t + 1)

with ``theta[s] = 0`` for ``s <= 0``.  With all delays zero this is the
synchronous recursion ``theta[t+1] = t/(t+1) A theta[t] + X[t+1]/(t+1)``;
both entry points share the same kernel, so a zero-delay asynchronous run
reproduces the synchronous one bit for bit.

Trials are processed in fixed-size chunks.  Chunk ``c`` draws from the
``c``-th child of the master :class:`~numpy.random.SeedSequence`, and chunk
results are summed in chunk order, so traces depend only on the seed and
the chunk size, never on the number of worker threads.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .matrices import StochasticMatrix

DEFAULT_CHUNK = 1024


@dataclass(frozen=True)
class SourceDistribution:
    """Law of the observations, with its exact mean and variance."""

    kind: str
    params: tuple = ()
    theta: float = 0.0
    sigma_sq: float = 1.0
    bounded: bool = False

    @classmethod
    def uniform01(cls) -> "SourceDistribution":
        return cls("uniform01", (), 0.5, 1.0 / 12.0, True)

    @classmethod
    def gaussian(cls, mean: float = 0.0, std: float = 1.0) -> "SourceDistribution":
        if std <= 0:
            raise DomainError("std must be positive")
        return cls("gaussian", (mean, std), float(mean), float(std) ** 2, False)

    @classmethod
    def bernoulli(cls, p: float = 0.5) -> "SourceDistribution":
        if not 0 < p < 1:
            raise DomainError("p must lie in (0, 1)")
        return cls("bernoulli", (p,), float(p), p * (1.0 - p), True)

    @classmethod
    def from_name(cls, name: str, *params) -> "SourceDistribution":
        try:
            return getattr(cls, name)(*params)
        except AttributeError:
            raise DomainError(f"unknown distribution {name!r}") from None

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.kind == "uniform01":
            return rng.random(size)
        if self.kind == "gaussian":
            mean, std = self.params
            return rng.normal(mean, std, size)
        if self.kind == "bernoulli":
            return (rng.random(size) < self.params[0]).astype(float)
        raise DomainError(f"unknown distribution {self.kind!r}")


@dataclass(frozen=True, eq=False)
class DelaySchedule:
    """Fixed integer delays ``B[i, j]`` in ``0..b_max`` (meaningful where ``a[i, j] > 0``)."""

    b_max: int
    delays: np.ndarray

    def __post_init__(self):
        b = np.array(self.delays, dtype=np.int64, copy=True)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise DomainError("delays must be a square integer matrix")
        if self.b_max < 0 or b.min() < 0 or b.max() > self.b_max:
            raise DomainError(f"delays must lie in 0..{self.b_max}")
        b.flags.writeable = False
        object.__setattr__(self, "delays", b)

    @property
    def n(self) -> int:
        return self.delays.shape[0]

    @classmethod
    def zeros(cls, n: int) -> "DelaySchedule":
        return cls(0, np.zeros((n, n), dtype=np.int64))

    @classmethod
    def constant(cls, a: StochasticMatrix, b: int) -> "DelaySchedule":
        return cls(b, np.where(a.support, b, 0))

    @classmethod
    def random(cls, a: StochasticMatrix, b_max: int, seed=None) -> "DelaySchedule":
        """Delays drawn once, uniformly in ``0..b_max``, on the support of ``a``."""
        rng = np.random.default_rng(seed)
        draws = rng.integers(0, b_max + 1, size=(a.n, a.n))
        return cls(b_max, np.where(a.support, draws, 0))


@dataclass(frozen=True, eq=False)
class SimulationTrace:
    """Empirical error statistics on a grid of times.

    ``node_mse[k, i]`` is the mean over trials of the squared error of node
    ``i`` at ``t_grid[k]`` (after rescaling by ``t/kappa(t)`` for
    asynchronous runs); ``network_mse`` is its row sum, ``empirical_tau``
    is ``(sigma^2 / t) / network_mse`` and ``tau_stderr`` its delta-method
    standard error.  ``node_mean`` is the trial-averaged estimate per node,
    i.e. the raw trajectory when ``trials == 1``.
    """

    t_grid: np.ndarray
    node_mse: np.ndarray
    network_mse: np.ndarray
    network_mse_stderr: np.ndarray
    empirical_tau: np.ndarray
    tau_stderr: np.ndarray
    node_mean: np.ndarray
    trials: int
    seed: int | None
    scale: np.ndarray = field(default=None)

    def columns(self) -> dict[str, np.ndarray]:
        cols = {
            "t": self.t_grid,
            "network_mse": self.network_mse,
            "network_mse_stderr": self.network_mse_stderr,
            "empirical_tau": self.empirical_tau,
            "tau_stderr": self.tau_stderr,
        }
        if self.scale is not None:
            cols["rescale"] = self.scale
        for i in range(self.node_mse.shape[1]):
            cols[f"node{i}_mse"] = self.node_mse[:, i]
        for i in range(self.node_mean.shape[1]):
            cols[f"node{i}_mean"] = self.node_mean[:, i]
        return cols


def default_t_grid(t_max: int, per_decade: int = 50) -> np.ndarray:
    """Geometrically spaced integer times in ``[1, t_max]`` (always including both ends)."""
    if t_max < 1:
        raise DomainError("t_max must be at least 1")
    n_pts = max(2, int(np.ceil(np.log10(t_max) * per_decade)) + 1)
    grid = np.unique(np.round(np.logspace(0, np.log10(t_max), n_pts)).astype(np.int64))
    return np.union1d(grid, [1, t_max])


def _normalise_grid(t_grid, t_max: int) -> np.ndarray:
    if t_grid is None:
        return default_t_grid(t_max)
    grid = np.unique(np.asarray(t_grid, dtype=np.int64))
    if grid.size == 0 or grid[0] < 1 or grid[-1] > t_max:
        raise DomainError(f"t_grid must be nonempty and inside [1, {t_max}]")
    return grid


def min_path_delays(a: StochasticMatrix, delays: DelaySchedule, max_len: int) -> np.ndarray:
    """``m[l]``: minimum total delay over support paths with ``l`` transitions, ``l = 0..max_len``."""
    w = np.where(a.support, delays.delays.astype(float), np.inf)
    best = np.zeros(a.n)
    out = np.zeros(max_len + 1)
    for ell in range(1, max_len + 1):
        # best[v] over paths ending at v; edge u -> v carries B[u, v]
        best = np.min(best[:, None] + w, axis=0)
        out[ell] = best.min()
    return out


def kappa_sequence(a: StochasticMatrix, delays: DelaySchedule, t_max: int) -> np.ndarray:
    """``kappa(t)`` for ``t = 0..t_max`` (index ``t``).

    ``kappa(t)`` is the smallest ``l`` such that ``l + m[l] >= t - b_max``,
    where ``m[l]`` is the minimum total delay over length-``l`` support
    paths.  ``l + m[l]`` is strictly increasing, so a sorted search applies.
    """
    if delays.n != a.n:
        raise DomainError("delay schedule and matrix sizes differ")
    reach = np.arange(t_max + 1) + min_path_delays(a, delays, t_max)
    need = np.arange(t_max + 1) - delays.b_max
    return np.searchsorted(reach, need, side="left").astype(np.int64)


def kappa(t: int, a: StochasticMatrix, delays: DelaySchedule) -> int:
    return int(kappa_sequence(a, delays, t)[t])


def _run_chunk(a, dist, lags, masks, grid, scale, size, seed_seq):
    """Simulate ``size`` trials; return per-grid-point sums needed for the trace."""
    rng = np.random.default_rng(seed_seq)
    n = a.n
    depth = lags[-1] + 1
    history = np.zeros((depth, size, n))  # history[s % depth] holds theta_s
    k_grid = len(grid)
    sq_node = np.zeros((k_grid, n))
    est_node = np.zeros((k_grid, n))
    net = np.zeros(k_grid)
    net_sq = np.zeros(k_grid)
    g = 0
    t_max = int(grid[-1])
    for t in range(t_max):
        # theta_{t+1} from theta_{t-b}; slots with t - b <= 0 are still zero
        acc = dist.sample(rng, (size, n))
        for b, m in zip(lags, masks):
            s = t - b
            if s > 0:
                acc = acc + (s * history[s % depth]) @ m.T
        new = acc / (t + 1)
        history[(t + 1) % depth] = new
        if t + 1 == grid[g]:
            err = scale[g] * new - dist.theta
            e2 = err * err
            per_trial = e2.sum(axis=1)
            sq_node[g] = e2.sum(axis=0)
            est_node[g] = new.sum(axis=0)
            net[g] = per_trial.sum()
            net_sq[g] = (per_trial * per_trial).sum()
            g += 1
    return sq_node, est_node, net, net_sq


def _simulate(a, dist, delays, t_max, trials, seed, t_grid, chunk, workers, scale_fn):
    if trials < 1 or t_max < 1:
        raise DomainError("trials and t_max must be at least 1")
    grid = _normalise_grid(t_grid, t_max)
    scale = scale_fn(grid)
    lags = sorted(set(delays.delays[a.support].tolist()))
    masks = [np.where(a.support & (delays.delays == b), a.entries, 0.0) for b in lags]
    sizes = [min(chunk, trials - s) for s in range(0, trials, chunk)]
    children = np.random.SeedSequence(seed).spawn(len(sizes))
    jobs = [(a, dist, lags, masks, grid, scale, sz, ss) for sz, ss in zip(sizes, children)]
    if workers and workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _run_chunk(*job), jobs))
    else:
        parts = [_run_chunk(*job) for job in jobs]

    sq_node, est_node, net, net_sq = (sum(p[k] for p in parts) for k in range(4))
    node_mse = sq_node / trials
    network_mse = net / trials
    if trials > 1:
        var = np.maximum(net_sq / trials - network_mse**2, 0.0) * trials / (trials - 1)
        mse_se = np.sqrt(var / trials)
    else:
        mse_se = np.full(grid.size, np.nan)
    gold = dist.sigma_sq / grid
    with np.errstate(divide="ignore", invalid="ignore"):
        tau = gold / network_mse
        tau_se = gold * mse_se / network_mse**2
    return SimulationTrace(
        t_grid=grid,
        node_mse=node_mse,
        network_mse=network_mse,
        network_mse_stderr=mse_se,
        empirical_tau=tau,
        tau_stderr=tau_se,
        node_mean=est_node / trials,
        trials=trials,
        seed=seed,
        scale=scale,
    )


def run_synchronous(
    a: StochasticMatrix,
    dist: SourceDistribution,
    t_max: int,
    trials: int,
    seed=None,
    t_grid=None,
    chunk: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> SimulationTrace:
    """Simulate ``theta[t+1] = t/(t+1) A theta[t] + X[t+1]/(t+1)`` with ``theta[1] = X[1]``.

    ``empirical_tau`` is measured against the analytic centralized error
    ``sigma^2 / t``.
    """
    return _simulate(
        a, dist, DelaySchedule.zeros(a.n), t_max, trials, seed, t_grid, chunk, workers,
        lambda grid: np.ones(grid.size),
    )


def run_asynchronous(
    a: StochasticMatrix,
    dist: SourceDistribution,
    delays: DelaySchedule,
    t_max: int,
    trials: int,
    seed=None,
    t_grid=None,
    chunk: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> SimulationTrace:
    """Simulate the delayed recursion and record the error of ``(t / kappa(t)) theta[t]``.

    Grid points with ``kappa(t) = 0`` (only possible for ``t <= b_max``) get
    a NaN rescaling and therefore NaN statistics.
    """
    if not dist.bounded:
        raise DomainError("the asynchronous model requires a bounded source distribution")
    if delays.n != a.n:
        raise DomainError("delay schedule and matrix sizes differ")

    def scale_fn(grid):
        kap = kappa_sequence(a, delays, int(grid[-1]))[grid].astype(float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(kap > 0, grid / kap, np.nan)

    return _simulate(a, dist, delays, t_max, trials, seed, t_grid, chunk, workers, scale_fn)


def explicit_estimates(a: StochasticMatrix, samples: np.ndarray) -> np.ndarray:
    """Closed-form network estimates ``theta_t = (1/t) sum_{k<t} A^k X_{t-k}``.

    ``samples[t-1]`` is the observation vector at time ``t``; returns the
    estimate vector for every ``t = 1..len(samples)``.
    """
    samples = np.asarray(samples, dtype=float)
    t_max = samples.shape[0]
    powers = [np.eye(a.n)]
    for _ in range(1, t_max):
        powers.append(powers[-1] @ a.entries)
    out = np.empty_like(samples)
    for t in range(1, t_max + 1):
        out[t - 1] = sum(powers[k] @ samples[t - 1 - k] for k in range(t)) / t
    return out


def loglog_slope(t, values, t_lo: float, t_hi: float) -> float:
    """Least-squares slope of ``log(values)`` against ``log(t)`` on ``[t_lo, t_hi]``."""
    t = np.asarray(t, dtype=float)
    v = np.asarray(values, dtype=float)
    sel = (t >= t_lo) & (t <= t_hi) & np.isfinite(v) & (v > 0)
    if sel.sum() < 2:
        raise DomainError("need at least two positive points in the regression window")
    slope, _ = np.polyfit(np.log(t[sel]), np.log(v[sel]), 1)
    return float(slope)

"""Statistical efficiency versus communication cost for Ramanujan networks.

Two studies are provided:

* :func:`penalized_sweep` scores each degree ``d`` by ``S(A_d) + beta * d``
  for a family of penalties ``beta``;
* :func:`budget_analysis` fixes a total amount of data ``T``, and for each
  network size ``n`` finds the cheapest degree reaching a target
  performance ratio after ``T // n`` rounds.

Every ``(n, d, repeat)`` cell draws its graph from its own seed, derived
from the master seed and the cell coordinates, so a cell's result does not
depend on which other cells are requested or on the order they run in.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, GenerationTimeoutError
from .ramanujan import sample_ramanujan
from .spectral import tau_closed_form

DEFAULT_BETAS = (0.5, 1.0, 2.0, 4.0)


@dataclass(frozen=True)
class TradeoffRecord:
    n: int
    d: int
    beta: float
    s_coeff: float
    c_index: int
    penalized: float
    seed: int
    repeat: int = 0
    status: str = "ok"  # ok | infeasible-parity | timeout

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class BudgetRecord:
    total_data: int
    n: int
    t_per_node: int
    d_star: int | None
    cost_ratio: float
    tau: float
    seed: int
    status: str = "ok"  # ok | infeasible

    @property
    def feasible(self) -> bool:
        return self.d_star is not None

    def as_dict(self) -> dict:
        return asdict(self)


def cell_seed(seed: int, n: int, d: int, repeat: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(n, d, repeat))


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def penalized_sweep(
    n: int,
    d_range: Iterable[int] | None = None,
    betas: Sequence[float] = DEFAULT_BETAS,
    seed: int = 0,
    repeats: int = 1,
    max_attempts: int = 100,
    workers: int = 1,
) -> list[TradeoffRecord]:
    """One record per ``(d, beta, repeat)``; ``d`` defaults to ``3..n-1``.

    Degrees with ``n*d`` odd are recorded with status ``infeasible-parity``
    and degrees whose generation times out with status ``timeout``; both
    carry NaN scores.
    """
    d_values = list(range(3, n)) if d_range is None else [int(d) for d in d_range]
    betas = [float(b) for b in betas]
    cells = [(d, r) for d in d_values for r in range(repeats)]

    def run(cell):
        d, r = cell
        if (n * d) % 2:
            return d, r, np.nan, "infeasible-parity"
        try:
            sample = sample_ramanujan(n, d, cell_seed(seed, n, d, r), max_attempts)
        except GenerationTimeoutError:
            return d, r, np.nan, "timeout"
        return d, r, sample.spectrum.s_coefficient, "ok"

    records = []
    for d, r, s, status in _map(run, cells, workers):
        for beta in betas:
            records.append(TradeoffRecord(n, d, beta, s, d, s + beta * d, seed, r, status))
    return records


def select_d_star(records: Sequence[TradeoffRecord]) -> dict[float, int | None]:
    """Per ``beta``, the degree minimising the repeat-averaged penalised score (ties to smaller ``d``)."""
    out = {}
    for beta in sorted({r.beta for r in records}):
        scores: dict[int, list[float]] = {}
        for r in records:
            if r.beta == beta and r.status == "ok":
                scores.setdefault(r.d, []).append(r.penalized)
        if not scores:
            out[beta] = None
            continue
        out[beta] = min(sorted(scores), key=lambda d: np.mean(scores[d]))
    return out


def tau_upper_bound_regular(n: int, d: int, t: int) -> float:
    """Upper bound on ``tau_t(G/d)`` valid for every simple ``d``-regular graph ``G``.

    The non-trivial eigenvalues satisfy ``sum gamma_l^2 = n/d - 1`` (trace of
    ``A^2``), and ``x -> sum_{k<t} x^k`` is convex on ``[0, 1]``, so Jensen
    bounds the denominator of the closed form from below.
    """
    m = (n / d - 1.0) / (n - 1.0)
    mean_term = float(t) if m >= 1.0 else (1.0 - m**t) / (1.0 - m)
    return 1.0 / (1.0 + (n - 1.0) * mean_term / t)


def _budget_cell(total_data, n, threshold, seed, d_max, max_attempts) -> BudgetRecord:
    t = total_data // n
    if t < 1:
        raise DomainError(f"total_data={total_data} gives no data per node for n={n}")
    for d in range(3, min(n - 1, d_max) + 1):
        if (n * d) % 2:
            continue
        if tau_upper_bound_regular(n, d, t) < threshold:
            continue  # no d-regular graph can reach the threshold
        try:
            sample = sample_ramanujan(n, d, cell_seed(seed, n, d), max_attempts)
        except GenerationTimeoutError:
            continue
        tau = tau_closed_form(sample.spectrum, t)
        if tau >= threshold:
            return BudgetRecord(total_data, n, t, d, d / n, tau, seed)
    return BudgetRecord(total_data, n, t, None, np.nan, np.nan, seed, "infeasible")


def budget_analysis(
    total_data: int,
    n_grid: Iterable[int],
    threshold: float = 0.99,
    seed: int = 0,
    d_max: int = 64,
    max_attempts: int = 100,
    workers: int = 1,
) -> list[BudgetRecord]:
    """Smallest degree ``d`` with ``tau_{T//n}(A_d) >= threshold`` for each ``n``.

    Degrees are scanned upwards from 3 up to ``min(n-1, d_max)``; degrees
    that :func:`tau_upper_bound_regular` already rules out are skipped
    without sampling a graph.
    """
    if not 0 < threshold < 1:
        raise DomainError("threshold must lie in (0, 1)")
    n_values = [int(n) for n in n_grid]
    return _map(
        lambda n: _budget_cell(total_data, n, threshold, seed, d_max, max_attempts),
        n_values,
        workers,
    )


def recommend(records: Sequence[BudgetRecord]) -> BudgetRecord | None:
    """Feasible record with the smallest ``d_star / n`` (ties to smaller ``n``)."""
    feasible = [r for r in records if r.feasible]
    if not feasible:
        return None
    return min(feasible, key=lambda r: (r.cost_ratio, r.n))

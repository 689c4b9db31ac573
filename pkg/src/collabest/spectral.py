"""Spectra of symmetric communication matrices and the performance ratio.

The performance ratio ``tau_t(A)`` compares the mean squared error of the
centralized mean over all ``N*t`` observations with the total mean squared
error of the network estimates after ``t`` rounds.  Two independent routes
are provided:

* :func:`tau_exact` sums squared Frobenius norms of matrix powers and works
  for any stochastic matrix;
* :func:`tau_closed_form` uses the eigenvalues of a symmetric, irreducible,
  aperiodic matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import DegenerateSpectrumError, DomainError, NotErgodicError, NotSymmetricError
from .matrices import SYMMETRY_TOL, StochasticMatrix, diagnostics

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    """Eigenvalues (descending), ``S(A)`` and ``Gamma(A)`` of a symmetric matrix."""

    eigenvalues: np.ndarray
    s_coefficient: float
    gamma_max: float

    @classmethod
    def from_eigenvalues(cls, eigenvalues) -> "SpectrumReport":
        """Build a report from raw eigenvalues; the leading one is taken as the trivial 1.

        Raises
        ------
        DegenerateSpectrumError
            If some non-leading eigenvalue has modulus ``>= 1 - 1e-12``.
        """
        vals = np.sort(np.asarray(eigenvalues, dtype=float))[::-1].copy()
        rest = vals[1:]
        gamma = float(np.max(np.abs(rest))) if rest.size else 0.0
        if gamma >= 1.0 - DEGENERACY_TOL:
            raise DegenerateSpectrumError(
                f"non-trivial eigenvalue of modulus {gamma!r}; matrix is reducible or periodic"
            )
        s = float(np.sum(1.0 / (1.0 - rest**2)))
        vals.flags.writeable = False
        return cls(vals, s, gamma)

    @property
    def n(self) -> int:
        return self.eigenvalues.size

    @property
    def nontrivial(self) -> np.ndarray:
        return self.eigenvalues[1:]


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    mu: np.ndarray

    @property
    def sq_norm(self) -> float:
        return float(np.dot(self.mu, self.mu))


def sym_eigenvalues(a: StochasticMatrix) -> SpectrumReport:
    m = a.entries
    if np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
        raise NotSymmetricError("sym_eigenvalues requires a symmetric matrix")
    # LAPACK tridiagonal reduction + implicit QR / divide-and-conquer
    vals = np.linalg.eigvalsh(0.5 * (m + m.T))
    return SpectrumReport.from_eigenvalues(vals)


def _check_t(t: int) -> None:
    if int(t) != t or t < 1:
        raise DomainError(f"t must be a positive integer, got {t}")


def tau_closed_form(spectrum: SpectrumReport, t: int) -> float:
    """Performance ratio from the non-trivial eigenvalues.

    ``1 / (1 + (1/t) * sum_l (1 - g_l**(2t)) / (1 - g_l**2))``
    """
    _check_t(t)
    g2 = spectrum.nontrivial**2
    total = np.sum((1.0 - g2**t) / (1.0 - g2))
    return float(1.0 / (1.0 + total / t))


def tau_exact_curve(a: StochasticMatrix, ts: Iterable[int]) -> np.ndarray:
    """``tau_t(A) = t / sum_{k<t} ||A^k||_F^2`` for every ``t`` in ``ts``.

    One incremental pass over the powers of ``A`` (``O(max(ts) * N^3)``);
    this is the reference route, not the fast one.
    """
    ts = np.asarray(list(ts), dtype=np.int64)
    for t in ts:
        _check_t(int(t))
    out = np.empty(ts.size)
    if ts.size == 0:
        return out
    order = np.argsort(ts, kind="stable")
    m = a.entries
    power = np.eye(a.n)
    acc = 0.0
    k = 0
    for idx in order:
        t = int(ts[idx])
        while k < t:
            acc += float(np.sum(power * power))
            power = power @ m
            k += 1
        out[idx] = t / acc
    return out


def tau_exact(a: StochasticMatrix, t: int) -> float:
    return float(tau_exact_curve(a, [t])[0])


def tau_bounds(spectrum: SpectrumReport, t: int) -> tuple[float, float]:
    """Lower and upper brackets on ``tau_t``; the lower one is vacuous when ``S/t > 1``."""
    _check_t(t)
    r = spectrum.s_coefficient / t
    lower = 1.0 - r
    upper = 1.0 - r + spectrum.gamma_max ** (2 * t) * r + r * r
    return lower, upper


def stationary_distribution(a: StochasticMatrix) -> StationaryDistribution:
    """Unique probability vector with ``mu A = mu`` for an irreducible aperiodic ``A``.

    Solved densely from ``(A^T - I) mu = 0`` stacked with ``sum(mu) = 1``.
    """
    diag = diagnostics(a)
    if not (diag.irreducible and diag.aperiodic):
        raise NotErgodicError("stationary distribution requires an irreducible aperiodic matrix")
    n = a.n
    lhs = np.vstack([a.entries.T - np.eye(n), np.ones((1, n))])
    rhs = np.zeros(n + 1)
    rhs[-1] = 1.0
    mu, *_ = np.linalg.lstsq(lhs, rhs, rcond=None)
    mu = np.clip(mu, 0.0, None)
    mu = mu / mu.sum()
    mu.flags.writeable = False
    return StationaryDistribution(mu)


def tau_limit(a: StochasticMatrix) -> float:
    """Large-``t`` limit ``1 / (N * ||mu||^2)`` of the performance ratio."""
    mu = stationary_distribution(a)
    return 1.0 / (a.n * mu.sq_norm)

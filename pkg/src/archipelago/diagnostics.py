"""Markov-chain diagnostics of the migration phase.

One migration step moves an exported individual from island i to island j
with probability M[j, i], making M column-stochastic.  Two summary
indicators track how fast the chain mixes: ``theta``, the reciprocal of the
second-largest eigenvalue magnitude (short-term mixing speed), and ``phi``,
the normalized complement of the trace (long-term tendency to leave the
current island).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .errors import DomainError

_STOCHASTIC_TOL = 1e-9


@dataclass(frozen=True)
class CycleStats:
    """Snapshot of one ensemble cycle after its migration barrier.

    Per-island arrays are aligned with the ensemble's island list; entries
    for inactive islands (and migration quantities during solo convergence
    cycles) are NaN.  ``theta``/``phi`` are NaN when no migration step was
    diagnosed this cycle.
    """

    cycle: int
    island_ids: tuple[str, ...]
    active: tuple[bool, ...]
    hv: tuple[float, ...]
    population_sizes: tuple[int, ...]
    g: tuple[float, ...]
    h: tuple[float, ...]
    exported: tuple[float, ...]
    received: tuple[float, ...]
    theta: float
    phi: float
    combined_archive_hv: float
    archive_hv_fixed: float
    feasible_counts: tuple[int, ...]
    reference_point: tuple[float, ...]


@dataclass(frozen=True)
class MobilityMatrix:
    """Column-stochastic island-transition probabilities for one cycle."""

    values: np.ndarray
    cycle: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        _check_column_stochastic(values)

    @property
    def n_islands(self) -> int:
        return self.values.shape[0]


def _check_column_stochastic(matrix: np.ndarray) -> None:
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DomainError(f"mobility matrix must be square, got shape {matrix.shape}")
    if np.any(matrix < -_STOCHASTIC_TOL) or np.any(matrix > 1.0 + _STOCHASTIC_TOL):
        raise DomainError("mobility matrix entries must lie in [0, 1]")
    sums = matrix.sum(axis=0)
    if np.any(np.abs(sums - 1.0) > _STOCHASTIC_TOL):
        raise DomainError(f"mobility matrix columns must sum to 1, got {sums}")


def binomial_mass_sum(n: int, p: float) -> float:
    """Complete binomial probability mass for Binomial(n, p).

    Analytically 1 for any valid (n, p); kept as an explicit summation so
    the transition formula below can be swapped for a truncated variant
    without touching its interface.
    """
    if n < 0:
        raise DomainError("population size must be non-negative")
    return float(stats.binom.pmf(np.arange(n + 1), n, p).sum())


def mobility_matrix(shares: np.ndarray, h: np.ndarray, sizes: np.ndarray,
                    cycle: int = 0) -> MobilityMatrix:
    """Build the one-cycle transition matrix from migration quantities.

    ``shares`` are the destination probabilities (the normalized powered
    performance terms), ``h`` the per-island export probabilities, and
    ``sizes`` the island populations at export time.  Occupied islands get

        M[j, i] = delta_ij + (shares[j] - delta_ij) * B_i,

    with ``B_i`` the complete binomial mass for island i; empty islands get
    a uniform column 1/I.
    """
    shares = np.asarray(shares, dtype=float)
    h = np.asarray(h, dtype=float)
    sizes = np.asarray(sizes, dtype=int)
    n = len(shares)
    if not (len(h) == len(sizes) == n):
        raise DomainError("shares, h, and sizes must have equal length")
    matrix = np.empty((n, n))
    for i in range(n):
        if sizes[i] == 0:
            matrix[:, i] = 1.0 / n
            continue
        mass = binomial_mass_sum(int(sizes[i]), float(h[i]))
        for j in range(n):
            delta = 1.0 if i == j else 0.0
            matrix[j, i] = delta + (shares[j] - delta) * mass
    return MobilityMatrix(values=matrix, cycle=cycle)


def theta(matrix: MobilityMatrix | np.ndarray) -> float:
    """Short-term mixing speed: 1 / |lambda_2|; infinite when lambda_2 = 0."""
    values = matrix.values if isinstance(matrix, MobilityMatrix) else np.asarray(matrix, float)
    _check_column_stochastic(values)
    if values.shape[0] == 1:
        return math.inf
    magnitudes = np.sort(np.abs(np.linalg.eigvals(values)))[::-1]
    lam2 = magnitudes[1]
    if lam2 < 1e-12:
        return math.inf
    return float(1.0 / lam2)


def phi(matrix: MobilityMatrix | np.ndarray) -> float:
    """Long-term mobility index (I - tr M) / (I - 1); NaN for a single island."""
    values = matrix.values if isinstance(matrix, MobilityMatrix) else np.asarray(matrix, float)
    _check_column_stochastic(values)
    n = values.shape[0]
    if n < 2:
        return math.nan
    return float((n - np.trace(values)) / (n - 1))

"""Island abstraction and the pluggable algorithm interface.

An island wraps one constituent multiobjective optimizer together with its
population, activity flag, and per-cycle hypervolume history.  Algorithms
plug in through a small interface: ``initialize``, ``step_one_generation``,
and individual export/import.  Anything honoring that contract can sit on an
island, including user-supplied algorithms registered with kind ``plugin``.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from ..errors import DomainError, StateError
from ..problems import Individual, Problem, evaluate_batch


@dataclass(frozen=True)
class IslandAlgorithmSpec:
    """Configuration of one island's algorithm and variation operators."""

    id: str
    kind: str
    crossover: str = "sbx"                 # "sbx" | "blend"
    crossover_prob: float = 0.9
    mutation_prob: float | None = None     # None -> 1 / n_vars
    eta_crossover: float = 20.0
    eta_mutation: float = 20.0
    blend_alpha: float = 0.5
    ref_partitions: int | None = None      # direction lattice density (nsga3)
    neighborhood_size: int = 20            # decomposition neighborhood (moead)
    factory: Callable[["IslandAlgorithmSpec"], "IslandAlgorithm"] | None = None

    def __post_init__(self):
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise DomainError(f"crossover_prob {self.crossover_prob} outside [0, 1]")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise DomainError(f"mutation_prob {self.mutation_prob} outside [0, 1]")
        if self.eta_crossover <= 0 or self.eta_mutation <= 0:
            raise DomainError("distribution indices must be positive")
        if self.crossover not in ("sbx", "blend"):
            raise DomainError(f"unknown crossover {self.crossover!r}")


class IslandAlgorithm(abc.ABC):
    """Minimal contract an island algorithm must honor.

    Implementations keep their own internal state (archives, weights,
    reference directions) but expose the population as a plain list of
    evaluated individuals.  ``import_individuals`` replaces the working
    population wholesale; implementations must resize internal state to
    match, since migration changes population sizes between cycles.
    """

    spec: IslandAlgorithmSpec
    problem: Problem

    def __init__(self, spec: IslandAlgorithmSpec):
        self.spec = spec
        self.evaluations = 0
        self._evaluate = None
        self.rng: np.random.Generator | None = None

    def initialize(self, population: Sequence[Individual], problem: Problem,
                   rng: np.random.Generator, evaluator=None) -> None:
        """Bind the problem, RNG stream, and (optionally pooled) evaluator."""
        self.problem = problem
        self.rng = rng
        self._evaluate = evaluator
        self.evaluations = 0
        self._setup(list(population))

    def evaluate_genes(self, genes: np.ndarray) -> list[Individual]:
        if self._evaluate is not None:
            out = self._evaluate(genes)
        else:
            out = evaluate_batch(self.problem, genes)
        self.evaluations += len(out)
        return out

    @abc.abstractmethod
    def _setup(self, population: list[Individual]) -> None:
        """Adopt the initial (already evaluated) population."""

    @abc.abstractmethod
    def step_one_generation(self) -> None:
        """Advance the algorithm by one generation at fixed population size."""

    @abc.abstractmethod
    def export_individuals(self) -> list[Individual]:
        """The current population as transferable individuals."""

    @abc.abstractmethod
    def import_individuals(self, population: Sequence[Individual]) -> None:
        """Replace the population (size may differ) and resync internal state."""


@dataclass
class Island:
    """One constituent optimizer inside the ensemble."""

    spec: IslandAlgorithmSpec
    algorithm: IslandAlgorithm
    population: list[Individual] = field(default_factory=list)
    active: bool = True
    hv_history: list[float] = field(default_factory=list)
    g: float | None = None
    deactivated_cycle: int | None = None

    def sync_to_algorithm(self) -> None:
        self.algorithm.import_individuals(self.population)

    def sync_from_algorithm(self) -> None:
        self.population = self.algorithm.export_individuals()


def step_generations(island: Island, problem: Problem, n_gens: int,
                     rng: np.random.Generator | None = None) -> Island:
    """Run an island's algorithm for ``n_gens`` generations.

    ``rng`` optionally replaces the algorithm's stream (standalone use);
    inside the ensemble each algorithm keeps the stream it was initialized
    with so island evolution stays reproducible in isolation.
    """
    if not island.active:
        raise StateError(f"island {island.spec.id!r} is inactive")
    if len(island.population) == 0:
        raise StateError(f"island {island.spec.id!r} has no population")
    if rng is not None:
        island.algorithm.rng = rng
    for _ in range(n_gens):
        island.algorithm.step_one_generation()
    island.sync_from_algorithm()
    return island

"""Elitist uniform random search, used as a comparison baseline."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .. import pareto
from ..problems import Individual
from .base import IslandAlgorithm
from .nsga2 import crowded_truncation
from .operators import random_population


class RandomSearch(IslandAlgorithm):
    """Samples a fresh uniform batch per generation, keeps the best."""

    def _setup(self, population: list[Individual]) -> None:
        self._pop = list(population)

    def step_one_generation(self) -> None:
        n = len(self._pop)
        genes = random_population(self.problem, n, self.rng)
        fresh = self.evaluate_genes(genes)
        ranked = pareto.crowding_distance(pareto.non_dominated_sort(self._pop + fresh))
        self._pop = crowded_truncation(ranked, n)

    def export_individuals(self) -> list[Individual]:
        return list(self._pop)

    def import_individuals(self, population: Sequence[Individual]) -> None:
        self._setup(list(population))

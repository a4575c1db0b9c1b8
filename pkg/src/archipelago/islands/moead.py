"""Decomposition-based algorithm (Tchebycheff scalarization, lite variant).

Each population slot owns one weight vector from an evenly thinned simplex
lattice.  A generation breeds one offspring per subproblem from its
neighborhood, evaluates the whole batch, then applies the classic
sequential updates: the ideal point absorbs new minima and each offspring
may replace up to ``NR_LIMIT`` neighbors with worse scalarized values.
Importing a population of a different size rebuilds weights and
neighborhoods to match.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from ..problems import Individual, objectives_matrix
from .base import IslandAlgorithm
from .operators import directions_for_size, variation

#: Maximum number of neighbor slots one offspring may replace.
NR_LIMIT = 2

#: Floor applied to weight components inside the scalarization.
WEIGHT_FLOOR = 1e-6


def tchebycheff(objectives: np.ndarray, weight: np.ndarray, ideal: np.ndarray) -> float:
    w = np.maximum(weight, WEIGHT_FLOOR)
    return float(np.max(w * (objectives - ideal)))


class MoeaD(IslandAlgorithm):

    def _setup(self, population: list[Individual]) -> None:
        self._pop = list(population)
        n = len(self._pop)
        m = self.problem.n_objectives
        self._weights = directions_for_size(m, n)
        t = min(self.spec.neighborhood_size, n)
        order = np.argsort(cdist(self._weights, self._weights), axis=1, kind="stable")
        self._neighbors = order[:, :t]
        self._ideal = objectives_matrix(self._pop).min(axis=0)

    def step_one_generation(self) -> None:
        n = len(self._pop)
        parent_genes = np.empty((2 * n, self._pop[0].genes.size))
        for j in range(n):
            hood = self._neighbors[j]
            picks = self.rng.choice(len(hood), size=2, replace=len(hood) < 2)
            parent_genes[2 * j] = self._pop[hood[picks[0]]].genes
            parent_genes[2 * j + 1] = self._pop[hood[picks[1]]].genes
        children = variation(parent_genes, self.spec, self.problem, self.rng)[0::2]
        offspring = self.evaluate_genes(children)

        for j, child in enumerate(offspring):
            self._ideal = np.minimum(self._ideal, child.objectives)
            order = self.rng.permutation(len(self._neighbors[j]))
            replaced = 0
            for k in self._neighbors[j][order]:
                if replaced >= NR_LIMIT:
                    break
                if tchebycheff(child.objectives, self._weights[k], self._ideal) < \
                        tchebycheff(self._pop[k].objectives, self._weights[k], self._ideal):
                    self._pop[k] = child
                    replaced += 1

    def export_individuals(self) -> list[Individual]:
        return list(self._pop)

    def import_individuals(self, population: Sequence[Individual]) -> None:
        self._setup(list(population))

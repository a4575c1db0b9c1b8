"""Elitist dominance-based algorithm with crowding-distance survival."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .. import pareto
from ..problems import Individual
from .base import IslandAlgorithm
from .operators import tournament_winners, variation


def crowded_truncation(ranked: pareto.RankedPopulation, size: int) -> list[Individual]:
    """Fill by fronts; split the overflowing front by descending crowding."""
    chosen: list[int] = []
    for front in ranked.fronts:
        if len(chosen) + len(front) <= size:
            chosen.extend(front)
            continue
        need = size - len(chosen)
        if need > 0:
            cds = np.array([ranked.individuals[i].cd for i in front])
            order = np.argsort(-cds, kind="stable")
            chosen.extend(front[j] for j in order[:need])
        break
    return [ranked.individuals[i] for i in chosen]


class Nsga2(IslandAlgorithm):

    def _setup(self, population: list[Individual]) -> None:
        self._ranked = pareto.crowding_distance(pareto.non_dominated_sort(population))

    def step_one_generation(self) -> None:
        pop = self._ranked.individuals
        n = len(pop)
        rank = np.array([ind.rank for ind in pop])
        cd = np.array([ind.cd for ind in pop])
        n_parents = n + (n % 2)
        winners = tournament_winners(rank, cd, n_parents, self.rng)
        parent_genes = np.array([pop[i].genes for i in winners])
        offspring_genes = variation(parent_genes, self.spec, self.problem, self.rng)[:n]
        offspring = self.evaluate_genes(offspring_genes)
        merged = list(pop) + offspring
        ranked = pareto.crowding_distance(pareto.non_dominated_sort(merged))
        survivors = crowded_truncation(ranked, n)
        self._setup(survivors)

    def export_individuals(self) -> list[Individual]:
        return list(self._ranked.individuals)

    def import_individuals(self, population: Sequence[Individual]) -> None:
        self._setup(list(population))

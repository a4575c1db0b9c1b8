"""Strength-Pareto algorithm with a k-NN density estimate.

The external archive has the same size as the population and *is* the
exported population: each generation breeds offspring from the archive,
then environmental selection over archive + offspring rebuilds it.  The
truncation step iteratively removes the member with the lexicographically
smallest sorted-distance vector, preserving boundary solutions.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from ..pareto import domination_matrix
from ..problems import Individual, objectives_matrix
from .base import IslandAlgorithm
from .operators import variation


def strength_fitness(objs: np.ndarray) -> np.ndarray:
    """Raw dominance fitness plus k-NN density (lower is better)."""
    n = len(objs)
    dom = domination_matrix(objs)
    strength = dom.sum(axis=1)                      # how many each one dominates
    raw = strength.astype(float) @ dom              # summed strength of dominators
    dists = cdist(objs, objs)
    np.fill_diagonal(dists, np.inf)
    k = min(n - 1, max(1, int(math.sqrt(n))))
    sigma_k = np.sort(dists, axis=1)[:, k - 1] if n > 1 else np.zeros(n)
    density = 1.0 / (sigma_k + 2.0)
    return raw + density


def _truncate(objs: np.ndarray, keep: int, alive_idx: np.ndarray) -> np.ndarray:
    """Drop the most crowded members one at a time until ``keep`` remain.

    Removal targets the member closest to its nearest surviving neighbor;
    exact ties fall back to comparing the full sorted distance vectors
    lexicographically.
    """
    alive = list(alive_idx)
    dists = cdist(objs[alive], objs[alive])
    np.fill_diagonal(dists, np.inf)
    while len(alive) > keep:
        nearest = dists.min(axis=1)
        tied = np.where(nearest == nearest.min())[0]
        if len(tied) == 1:
            worst = int(tied[0])
        else:
            rows = np.sort(dists[tied], axis=1)
            worst = int(tied[np.lexsort(rows.T[::-1])[0]])
        dists = np.delete(np.delete(dists, worst, axis=0), worst, axis=1)
        alive.pop(worst)
    return np.array(alive)


class Spea2(IslandAlgorithm):

    def _setup(self, population: list[Individual]) -> None:
        self._archive = list(population)

    def step_one_generation(self) -> None:
        archive = self._archive
        n = len(archive)
        fitness = strength_fitness(objectives_matrix(archive))
        n_parents = n + (n % 2)
        a = self.rng.integers(0, n, size=n_parents)
        b = self.rng.integers(0, n, size=n_parents)
        winners = np.where(fitness[a] <= fitness[b], a, b)
        parent_genes = np.array([archive[i].genes for i in winners])
        offspring_genes = variation(parent_genes, self.spec, self.problem, self.rng)[:n]
        offspring = self.evaluate_genes(offspring_genes)
        self._archive = self._environmental_selection(archive + offspring, n)

    def _environmental_selection(self, merged: list[Individual], size: int) -> list[Individual]:
        objs = objectives_matrix(merged)
        fitness = strength_fitness(objs)
        nondominated = np.where(fitness < 1.0)[0]
        if len(nondominated) > size:
            chosen = _truncate(objs, size, nondominated)
        elif len(nondominated) < size:
            dominated = np.setdiff1d(np.arange(len(merged)), nondominated)
            order = dominated[np.argsort(fitness[dominated], kind="stable")]
            chosen = np.concatenate([nondominated, order[: size - len(nondominated)]])
        else:
            chosen = nondominated
        return [merged[i] for i in chosen]

    def export_individuals(self) -> list[Individual]:
        return list(self._archive)

    def import_individuals(self, population: Sequence[Individual]) -> None:
        self._setup(list(population))

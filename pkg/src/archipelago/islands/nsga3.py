"""Reference-direction algorithm with niche-preserving survival.

Survival merges parents and offspring, accepts whole fronts until one
overflows, and resolves the overflow by associating normalized objectives to
a fixed simplex lattice of directions and filling the least-crowded niches
first.  Normalization translates by the merged ideal point and scales by the
first front's per-objective extremes (a robust simplification of the
intercept construction).
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .. import pareto
from ..problems import Individual, objectives_matrix
from .base import IslandAlgorithm
from .operators import das_dennis_count, das_dennis_directions, directions_for_size, \
    tournament_winners, variation


def _associate(normalized: np.ndarray, directions: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Nearest direction line per point: (direction index, perpendicular distance)."""
    unit = directions / np.linalg.norm(directions, axis=1, keepdims=True)
    proj = normalized @ unit.T                        # (n, n_dir) projections
    sq = (normalized ** 2).sum(axis=1, keepdims=True)
    perp = np.sqrt(np.maximum(0.0, sq - proj ** 2))
    idx = perp.argmin(axis=1)
    return idx, perp[np.arange(len(normalized)), idx]


class Nsga3(IslandAlgorithm):

    def _setup(self, population: list[Individual]) -> None:
        self._pop = list(population)
        m = self.problem.n_objectives
        if not hasattr(self, "_directions"):
            if self.spec.ref_partitions is not None:
                p = self.spec.ref_partitions
                if das_dennis_count(m, p) > 2000:
                    raise ValueError("direction lattice too dense")
                self._directions = das_dennis_directions(m, p)
            else:
                self._directions = directions_for_size(m, max(4, len(population)))
        self._ranked = pareto.crowding_distance(pareto.non_dominated_sort(self._pop))

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
        survivors = self._survival(list(pop) + offspring, n)
        self._setup(survivors)

    def _survival(self, merged: list[Individual], size: int) -> list[Individual]:
        ranked = pareto.non_dominated_sort(merged)
        chosen: list[int] = []
        split: tuple[int, ...] | None = None
        for front in ranked.fronts:
            if len(chosen) + len(front) <= size:
                chosen.extend(front)
            else:
                split = front
                break
        if split is None or len(chosen) == size:
            return [ranked.individuals[i] for i in chosen[:size]]

        objs = objectives_matrix(ranked.individuals)
        ideal = objs.min(axis=0)
        first = np.array(ranked.fronts[0])
        extent = objs[first].max(axis=0) - ideal
        extent[extent <= 0] = 1.0
        normalized = (objs - ideal) / extent
        assoc, dist = _associate(normalized, self._directions)

        niche_counts = np.zeros(len(self._directions), dtype=int)
        for i in chosen:
            niche_counts[assoc[i]] += 1

        candidates: dict[int, list[int]] = {}
        for i in split:
            candidates.setdefault(int(assoc[i]), []).append(i)

        need = size - len(chosen)
        picked: list[int] = []
        live = set(candidates)
        while need > 0 and live:
            counts = np.array([niche_counts[j] for j in sorted(live)])
            order = np.array(sorted(live))
            minimal = order[counts == counts.min()]
            j = int(minimal[self.rng.integers(0, len(minimal))])
            members = candidates[j]
            if niche_counts[j] == 0:
                k = min(members, key=lambda i: dist[i])
            else:
                k = members[int(self.rng.integers(0, len(members)))]
            members.remove(k)
            if not members:
                live.discard(j)
                del candidates[j]
            picked.append(k)
            niche_counts[j] += 1
            need -= 1
        # degenerate fallback: not enough associated candidates (never in practice)
        if need > 0:
            rest = [i for i in split if i not in picked][:need]
            picked.extend(rest)
        return [ranked.individuals[i] for i in chosen + picked]

    def export_individuals(self) -> list[Individual]:
        return list(self._ranked.individuals)

    def import_individuals(self, population: Sequence[Individual]) -> None:
        self._setup(list(population))

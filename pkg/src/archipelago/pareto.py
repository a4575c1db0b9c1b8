"""Non-dominated sorting and individual scoring.

The scoring used for migration decisions combines three ingredients computed
here: the 1-based Pareto rank, a per-front normalized crowding distance (CD),
and a population-wide normalized distance to the nadir point (RD).  The
combined score

    S = (1 - rank / R) + (CD + RD) / (2 * (R + 1)),    R = max rank,

keeps ranks strictly separated: the diversity band ``(CD + RD) / (2 (R + 1))``
can never exceed the ``1 / R`` gap between consecutive rank terms, so any
individual in a better front outscores every individual in a worse one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, StateError
from .problems import Individual, objectives_matrix


@dataclass(frozen=True)
class RankedPopulation:
    """A population with consistent fronts and summary points.

    ``fronts[k]`` holds the indices of rank ``k + 1``; ``nadir`` and
    ``ideal`` are the componentwise worst and best objective values over the
    whole population.
    """

    individuals: tuple[Individual, ...]
    fronts: tuple[tuple[int, ...], ...]
    nadir: np.ndarray
    ideal: np.ndarray

    def __len__(self) -> int:
        return len(self.individuals)

    @property
    def max_rank(self) -> int:
        return len(self.fronts)


def domination_matrix(objectives: np.ndarray) -> np.ndarray:
    """Boolean matrix D with D[i, j] true iff row i dominates row j."""
    le = np.all(objectives[:, None, :] <= objectives[None, :, :], axis=2)
    lt = np.any(objectives[:, None, :] < objectives[None, :, :], axis=2)
    return le & lt


def non_dominated_sort(population: Sequence[Individual]) -> RankedPopulation:
    """Assign 1-based Pareto ranks and build the front partition."""
    if len(population) == 0:
        raise DomainError("cannot sort an empty population")
    objs = objectives_matrix(population)
    dims = {ind.objectives.shape for ind in population}
    if len(dims) != 1:
        raise DomainError(f"mixed objective dimensions in population: {dims}")

    dom = domination_matrix(objs)
    n_dominators = dom.sum(axis=0)

    fronts: list[tuple[int, ...]] = []
    remaining = np.ones(len(population), dtype=bool)
    counts = n_dominators.copy()
    while remaining.any():
        front = np.where(remaining & (counts == 0))[0]
        if front.size == 0:  # pragma: no cover - dominance is acyclic
            raise StateError("non-dominated sort failed to peel a front")
        fronts.append(tuple(int(i) for i in front))
        remaining[front] = False
        counts = counts - dom[front].sum(axis=0)

    annotated = list(population)
    for rank0, front in enumerate(fronts):
        for i in front:
            annotated[i] = annotated[i].annotated(rank=rank0 + 1)

    return RankedPopulation(
        individuals=tuple(annotated),
        fronts=tuple(fronts),
        nadir=objs.max(axis=0),
        ideal=objs.min(axis=0),
    )


def _front_crowding(objs: np.ndarray) -> np.ndarray:
    """Normalized crowding distances for one front.

    Interior members accumulate, per objective, the spacing to both sorted
    neighbors divided by the objective range within the front; the
    accumulated sum is divided by its attainable maximum (2 per objective
    with positive range) so values land in [0, 1].  Members extreme in any
    objective are then assigned CD = 1, rewarding boundary points.
    Objectives with zero range in the front contribute nothing; if every
    objective is degenerate all members get CD = 1.
    """
    n, m = objs.shape
    if n == 1:
        return np.ones(1)
    raw = np.zeros(n)
    boundary = np.zeros(n, dtype=bool)
    n_active = 0
    for j in range(m):
        order = np.argsort(objs[:, j], kind="stable")
        values = objs[order, j]
        span = values[-1] - values[0]
        if span <= 0.0:
            continue
        n_active += 1
        boundary[order[0]] = True
        boundary[order[-1]] = True
        gaps = np.zeros(n)
        gaps[1:] += np.diff(values)       # spacing to the previous neighbor
        gaps[:-1] += np.diff(values)      # spacing to the next neighbor
        raw[order] += gaps / span
    if n_active == 0:
        return np.ones(n)
    cd = raw / (2.0 * n_active)
    cd[boundary] = 1.0
    return cd


def crowding_distance(ranked: RankedPopulation) -> RankedPopulation:
    """Attach per-front crowding distances in [0, 1]."""
    objs = objectives_matrix(ranked.individuals)
    annotated = list(ranked.individuals)
    for front in ranked.fronts:
        idx = np.array(front)
        cds = _front_crowding(objs[idx])
        for i, cd in zip(front, cds):
            annotated[i] = annotated[i].annotated(cd=float(cd))
    return RankedPopulation(tuple(annotated), ranked.fronts, ranked.nadir, ranked.ideal)


def reference_distance(ranked: RankedPopulation, nadir: np.ndarray | None = None) -> RankedPopulation:
    """Attach min-max normalized Euclidean distances to the nadir point.

    Normalization is over the whole population; if all distances coincide
    (including the single-individual case) every RD is 1.
    """
    nadir = ranked.nadir if nadir is None else np.asarray(nadir, dtype=float)
    if not np.all(np.isfinite(nadir)):
        raise DomainError(f"nadir point must be finite, got {nadir}")
    objs = objectives_matrix(ranked.individuals)
    dist = np.linalg.norm(objs - nadir, axis=1)
    span = dist.max() - dist.min()
    if span <= 0.0:
        rd = np.ones(len(dist))
    else:
        rd = (dist - dist.min()) / span
    annotated = [ind.annotated(rd=float(r)) for ind, r in zip(ranked.individuals, rd)]
    return RankedPopulation(tuple(annotated), ranked.fronts, ranked.nadir, ranked.ideal)


def individual_score(ranked: RankedPopulation) -> RankedPopulation:
    """Attach the combined performance score (higher is better)."""
    max_rank = ranked.max_rank
    band = 2.0 * (max_rank + 1)
    annotated = []
    for ind in ranked.individuals:
        if ind.rank is None or ind.cd is None or ind.rd is None:
            raise StateError("individual_score requires rank, cd, and rd annotations")
        score = (1.0 - ind.rank / max_rank) + (ind.cd + ind.rd) / band
        annotated.append(ind.annotated(score=float(score)))
    return RankedPopulation(tuple(annotated), ranked.fronts, ranked.nadir, ranked.ideal)


def annotate(population: Sequence[Individual], nadir: np.ndarray | None = None) -> RankedPopulation:
    """Run the full annotation chain: sort, CD, RD, score."""
    ranked = non_dominated_sort(population)
    ranked = crowding_distance(ranked)
    ranked = reference_distance(ranked, nadir)
    return individual_score(ranked)


def non_dominated_subset(population: Sequence[Individual]) -> list[Individual]:
    """The rank-1 members of a population (annotations untouched)."""
    if len(population) == 0:
        return []
    objs = objectives_matrix(population)
    dom = domination_matrix(objs)
    keep = ~dom.any(axis=0)
    return [population[i] for i in np.where(keep)[0]]


def _mask_quadratic(points: np.ndarray, chunk: int = 512) -> np.ndarray:
    n = len(points)
    keep = np.ones(n, dtype=bool)
    for start in range(0, n, chunk):
        rows = points[start:start + chunk]
        le = np.all(points[:, None, :] <= rows[None, :, :], axis=2)
        lt = np.any(points[:, None, :] < rows[None, :, :], axis=2)
        keep[start:start + chunk] &= ~np.any(le & lt, axis=0)
    if keep.any():
        idx = np.where(keep)[0]
        _, first = np.unique(points[idx], axis=0, return_index=True)
        dup = np.ones(len(idx), dtype=bool)
        dup[first] = False
        keep[idx[dup]] = False
    return keep


def _mask_sweep_2d(points: np.ndarray) -> np.ndarray:
    order = np.lexsort((points[:, 1], points[:, 0]))
    keep = np.zeros(len(points), dtype=bool)
    best = np.inf
    for idx in order:
        y = points[idx, 1]
        if y < best:
            keep[idx] = True
            best = y
    return keep


def _mask_sweep_3d(points: np.ndarray) -> np.ndarray:
    from bisect import bisect_left, bisect_right

    order = np.lexsort((points[:, 2], points[:, 1], points[:, 0]))
    keep = np.zeros(len(points), dtype=bool)
    xs: list[float] = []   # frontier over the last two objectives
    ys: list[float] = []
    for idx in order:
        x = float(points[idx, 1])
        y = float(points[idx, 2])
        left = bisect_right(xs, x) - 1
        if left >= 0 and ys[left] <= y:
            continue
        keep[idx] = True
        pos = bisect_left(xs, x)
        end = pos
        while end < len(xs) and ys[end] >= y:
            end += 1
        del xs[pos:end]
        del ys[pos:end]
        xs.insert(pos, x)
        ys.insert(pos, y)
    return keep


def non_dominated_mask(points: np.ndarray) -> np.ndarray:
    """Mask of rows not strictly dominated by any other row.

    Exact duplicate rows are kept once.  Two- and three-objective inputs use
    an O(N log N) sweep; higher dimensions fall back to the chunked pairwise
    check.
    """
    points = np.asarray(points, dtype=float)
    if len(points) == 0:
        return np.zeros(0, dtype=bool)
    if points.shape[1] == 2:
        return _mask_sweep_2d(points)
    if points.shape[1] == 3:
        return _mask_sweep_3d(points)
    return _mask_quadratic(points)

"""Variation operators shared by the island algorithms.

All operators are real-coded.  Offspring are clipped to bounds and discrete
genes are snapped to the nearest level afterwards (exact midpoints snap to
the lower level), so a single operator path serves mixed continuous/discrete
problems.
"""

from __future__ import annotations

from math import comb

import numpy as np

from ..problems import Problem


def simulated_binary_crossover(p1: np.ndarray, p2: np.ndarray, eta: float,
                               rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """SBX: spread around the parents controlled by the distribution index.

    Identical parents reproduce themselves exactly regardless of the drawn
    spread factors.
    """
    u = rng.random(p1.shape)
    beta = np.where(u <= 0.5,
                    (2.0 * u) ** (1.0 / (eta + 1.0)),
                    (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta + 1.0)))
    c1 = 0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2)
    c2 = 0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2)
    return c1, c2


def blend_crossover(p1: np.ndarray, p2: np.ndarray, alpha: float,
                    rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """BLX-alpha: children drawn uniformly from the alpha-expanded gene interval."""
    lo = np.minimum(p1, p2)
    hi = np.maximum(p1, p2)
    spread = hi - lo
    low = lo - alpha * spread
    width = (1.0 + 2.0 * alpha) * spread
    c1 = low + rng.random(p1.shape) * width
    c2 = low + rng.random(p1.shape) * width
    return c1, c2


def polynomial_mutation(genes: np.ndarray, lower: np.ndarray, upper: np.ndarray,
                        eta: float, prob: float, rng: np.random.Generator) -> np.ndarray:
    """Polynomial mutation applied per gene with probability ``prob``."""
    mask = rng.random(genes.shape) < prob
    u = rng.random(genes.shape)
    delta = np.where(u < 0.5,
                     (2.0 * u) ** (1.0 / (eta + 1.0)) - 1.0,
                     1.0 - (2.0 * (1.0 - u)) ** (1.0 / (eta + 1.0)))
    mutated = genes + delta * (upper - lower)
    return np.where(mask, mutated, genes)


def clip_and_snap(genes: np.ndarray, problem: Problem) -> np.ndarray:
    """Clip to box bounds, then snap discrete genes to their nearest level."""
    out = np.clip(genes, problem.lower, problem.upper)
    for i, spec in enumerate(problem.variables):
        if not spec.is_discrete:
            continue
        levels = np.asarray(spec.levels)
        col = out[..., i]
        pos = np.clip(np.searchsorted(levels, col), 1, len(levels) - 1) if len(levels) > 1 \
            else np.zeros(col.shape, dtype=int)
        if len(levels) > 1:
            lo = levels[pos - 1]
            hi = levels[pos]
            # ties (exact midpoints) resolve to the lower level
            out[..., i] = np.where(col - lo <= hi - col, lo, hi)
        else:
            out[..., i] = levels[0]
    return out


def variation(parents: np.ndarray, spec, problem: Problem,
              rng: np.random.Generator) -> np.ndarray:
    """Crossover + mutation over consecutive parent pairs.

    ``parents`` is an (n, n_vars) matrix with even n; the result has the
    same shape.  Each pair crosses with probability ``spec.crossover_prob``
    (SBX or blend per the spec), every child then undergoes polynomial
    mutation with per-gene probability ``spec.mutation_prob`` (defaulting to
    1/n_vars), and finally bounds and levels are enforced.
    """
    parents = np.asarray(parents, dtype=float)
    n, d = parents.shape
    if n % 2 != 0:
        raise ValueError("variation expects an even number of parents")
    p1 = parents[0::2]
    p2 = parents[1::2]
    if spec.crossover == "blend":
        c1, c2 = blend_crossover(p1, p2, spec.blend_alpha, rng)
    else:
        c1, c2 = simulated_binary_crossover(p1, p2, spec.eta_crossover, rng)
    cross = rng.random(n // 2) < spec.crossover_prob
    c1 = np.where(cross[:, None], c1, p1)
    c2 = np.where(cross[:, None], c2, p2)
    children = np.empty_like(parents)
    children[0::2] = c1
    children[1::2] = c2

    pm = spec.mutation_prob if spec.mutation_prob is not None else 1.0 / d
    children = polynomial_mutation(children, problem.lower, problem.upper,
                                   spec.eta_mutation, pm, rng)
    return clip_and_snap(children, problem)


def das_dennis_directions(n_objectives: int, partitions: int) -> np.ndarray:
    """Simplex-lattice weight vectors; C(partitions + m - 1, m - 1) rows.

    Rows are non-negative, sum to one, and are emitted in lexicographic
    order of the underlying integer compositions.
    """
    if partitions < 1:
        raise ValueError("partitions must be >= 1")

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for head in range(total, -1, -1):
            for tail in compositions(total - head, parts - 1):
                yield (head,) + tail

    rows = np.array(list(compositions(partitions, n_objectives)), dtype=float)
    return rows / partitions


def das_dennis_count(n_objectives: int, partitions: int) -> int:
    return comb(partitions + n_objectives - 1, n_objectives - 1)


def directions_for_size(n_objectives: int, size: int) -> np.ndarray:
    """At-least-``size`` lattice, evenly thinned down to exactly ``size`` rows."""
    partitions = 1
    while das_dennis_count(n_objectives, partitions) < size:
        partitions += 1
    full = das_dennis_directions(n_objectives, partitions)
    if len(full) == size:
        return full
    pick = np.linspace(0, len(full) - 1, size).round().astype(int)
    return full[pick]


def random_population(problem: Problem, n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform random gene matrix honoring bounds and discrete levels."""
    genes = rng.uniform(problem.lower, problem.upper, size=(n, problem.n_vars))
    for i, spec in enumerate(problem.variables):
        if spec.is_discrete:
            levels = np.asarray(spec.levels)
            genes[:, i] = levels[rng.integers(0, len(levels), size=n)]
    return genes


def tournament_winners(rank: np.ndarray, crowding: np.ndarray, n_picks: int,
                       rng: np.random.Generator) -> np.ndarray:
    """Binary tournaments on (rank asc, crowding desc); returns winner indices."""
    n = len(rank)
    a = rng.integers(0, n, size=n_picks)
    b = rng.integers(0, n, size=n_picks)
    better = (rank[a] < rank[b]) | ((rank[a] == rank[b]) & (crowding[a] >= crowding[b]))
    return np.where(better, a, b)

"""The island-ensemble engine: alternating evolution and migration phases.

Each cycle, every active island evolves independently for a fixed number of
generations, then a global migration barrier runs four steps:

1. population evaluation - recompute the global nadir reference point over
   feasible points and score every island by the hypervolume of its feasible
   front against it;
2. debt settlement - sample how many individuals each island must export,
   with a schedule that starts uniform and grows increasingly aggressive
   toward the best islands as cycles advance;
3. member exportation - remove each island's lowest-scoring individuals into
   a shared pool;
4. destination selection - redistribute the pool multinomially with
   probabilities proportional to the powered performance shares, then
   permanently disable islands left empty (rescuing any stranded members).

After ``floor((1 - CA) * n_cycles)`` cycles, convergence assist merges every
population into the island with the highest current hypervolume and the
remaining cycles run on that island alone, without migration.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import pareto
from .diagnostics import CycleStats, mobility_matrix, phi, theta
from .errors import ConfigError, DomainError, StateError
from .indicators import FrontSet, hv
from .islands import Island, IslandAlgorithmSpec, create_algorithm, default_island_specs, \
    random_population, step_generations
from .parallel import ArchiveBuffer, EvaluationBackend
from .problems import Individual, Problem


@dataclass(frozen=True)
class EnsembleConfig:
    """Run configuration for the ensemble engine."""

    island_specs: tuple[IslandAlgorithmSpec, ...] = field(default_factory=default_island_specs)
    population_per_island: int = 100
    n_cycles: int = 20
    generations_per_cycle: int = 10
    convergence_assist: float = 0.0
    seed: int = 0
    workers_islands: int = 1
    workers_eval: int = 1
    archive_hv_reference: tuple[float, ...] | None = None

    def __post_init__(self):
        if len(self.island_specs) < 1:
            raise ConfigError("at least one island is required")
        if self.population_per_island < 2:
            raise ConfigError("population_per_island must be >= 2")
        if self.n_cycles < 2:
            raise ConfigError("n_cycles must be >= 2")
        if self.generations_per_cycle < 1:
            raise ConfigError("generations_per_cycle must be >= 1")
        if not 0.0 <= self.convergence_assist < 1.0:
            raise ConfigError("convergence_assist must lie in [0, 1)")
        if self.migration_cycles < 1:
            raise ConfigError("convergence assist leaves no migration cycle")
        if self.workers_islands < 1 or self.workers_eval < 1:
            raise ConfigError("worker counts must be >= 1")

    @property
    def migration_cycles(self) -> int:
        return int(math.floor((1.0 - self.convergence_assist) * self.n_cycles))

    @property
    def solo_cycles(self) -> int:
        return self.n_cycles - self.migration_cycles


def migration_schedule(cycle: int, n_cycles: int) -> tuple[float, float]:
    """Cycle-dependent (q, alpha): (-1, 0) at cycle 1, (+1, 1) at the last."""
    if n_cycles < 2:
        raise DomainError("the schedule needs at least two cycles")
    if not 1 <= cycle <= n_cycles:
        raise DomainError(f"cycle {cycle} outside [1, {n_cycles}]")
    q = 2.0 * (1.0 - cycle) / (1.0 - n_cycles) - 1.0
    alpha = (cycle - 1.0) / (n_cycles - 1.0)
    return q, alpha


def power_shares(g: np.ndarray, alpha: float) -> np.ndarray:
    """Normalized powered performances g_i^alpha / sum_j g_j^alpha.

    Conventions: 0^0 = 1 (the alpha = 0 limit is exactly uniform), and when
    every g is equal the shares are defined as uniform 1/I.
    """
    g = np.asarray(g, dtype=float)
    if len(g) == 0:
        return g.copy()
    if np.all(g == g[0]):
        return np.full(len(g), 1.0 / len(g))
    powered = np.where((g == 0.0) & (alpha == 0.0), 1.0, g ** alpha)
    return powered / powered.sum()


class ParetoArchive:
    """All-time non-dominated archive of feasible evaluated points.

    For 2-3 objectives the archive is re-pruned with an O(N log N) sweep on
    every update; with more objectives each incoming batch is pruned
    internally and the full cross-check is deferred to :meth:`finalize`
    (dominated stragglers never change hypervolume values).
    """

    def __init__(self, n_objectives: int):
        self.n_objectives = n_objectives
        self._individuals: list[Individual] = []
        self._cheap_prune = n_objectives <= 3

    def add(self, individuals: Sequence[Individual]) -> None:
        fresh = [ind for ind in individuals if ind.feasible]
        if not fresh:
            return
        if not self._cheap_prune:
            objs = np.array([ind.objectives for ind in fresh])
            fresh = [fresh[i] for i in np.where(pareto.non_dominated_mask(objs))[0]]
        merged = self._individuals + fresh
        if self._cheap_prune:
            objs = np.array([ind.objectives for ind in merged])
            merged = [merged[i] for i in np.where(pareto.non_dominated_mask(objs))[0]]
        self._individuals = merged

    def finalize(self) -> None:
        if not self._cheap_prune and self._individuals:
            objs = self.objectives()
            keep = pareto.non_dominated_mask(objs)
            self._individuals = [self._individuals[i] for i in np.where(keep)[0]]

    def individuals(self) -> list[Individual]:
        return list(self._individuals)

    def objectives(self) -> np.ndarray:
        if not self._individuals:
            return np.zeros((0, self.n_objectives))
        return np.array([ind.objectives for ind in self._individuals])

    def __len__(self) -> int:
        return len(self._individuals)

    def hv(self, reference: np.ndarray, rng: np.random.Generator | None = None) -> float:
        # the HV algorithms are insensitive to dominated stragglers, so the
        # quadratic FrontSet filter can always be skipped here
        front = FrontSet(self.objectives(), reference, assume_non_dominated=True)
        return hv(front, rng)


@dataclass
class EnsembleState:
    """Mutable engine state threaded through the migration operations."""

    config: EnsembleConfig
    problem: Problem
    islands: list[Island]
    cycle: int
    rng: np.random.Generator                 # ensemble-level stream (migration draws)
    archive: ParetoArchive
    reference_point: np.ndarray | None = None

    @property
    def active_indices(self) -> list[int]:
        return [i for i, isl in enumerate(self.islands) if isl.active]

    def total_population(self) -> int:
        return sum(len(isl.population) for isl in self.islands if isl.active)


def _feasible_front(population: Sequence[Individual]) -> np.ndarray:
    feasible = [ind.objectives for ind in population if ind.feasible]
    return np.array(feasible) if feasible else np.zeros((0, 0))


def population_evaluation(state: EnsembleState) -> np.ndarray:
    """Recompute the global nadir reference and per-island hypervolumes.

    The reference point is the componentwise worst over all feasible points
    in the active populations; islands without a feasible point score zero.
    If no feasible point exists anywhere the reference falls back to the
    nadir of the penalized objectives so early, fully infeasible ensembles
    still rank islands.
    """
    feasible_sets = {}
    stacks = []
    for i in state.active_indices:
        front = _feasible_front(state.islands[i].population)
        feasible_sets[i] = front
        if len(front):
            stacks.append(front)

    use_penalized = not stacks
    if use_penalized:
        for i in state.active_indices:
            front = np.array([ind.objectives for ind in state.islands[i].population])
            feasible_sets[i] = front
            stacks.append(front)
    reference = np.vstack(stacks).max(axis=0)
    state.reference_point = reference

    hv_values = np.full(len(state.islands), np.nan)
    for i in state.active_indices:
        front = feasible_sets[i]
        if len(front) == 0:
            hv_values[i] = 0.0
        else:
            hv_values[i] = hv(FrontSet(front, reference), state.rng)
        state.islands[i].hv_history.append(float(hv_values[i]))
    return hv_values


def debt_settlement(state: EnsembleState, hv_values: np.ndarray,
                    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Sample per-island export counts (g, h, e arrays over all islands).

    Active islands get min-max scaled performances g, export probabilities
    h (clamped to [0, 1]) from the cycle schedule, and binomially sampled
    export counts e.  With fewer than two active islands everything is a
    no-op.
    """
    n = len(state.islands)
    g = np.full(n, np.nan)
    h = np.full(n, np.nan)
    e = np.zeros(n, dtype=int)
    active = state.active_indices
    if len(active) < 2:
        for i in active:
            g[i] = 1.0
            h[i] = 0.0
            state.islands[i].g = 1.0
        return g, h, e

    values = hv_values[active]
    span = values.max() - values.min()
    if span > 0.0:
        g_active = (values - values.min()) / span
    else:
        g_active = np.ones(len(active))
    q, alpha = migration_schedule(state.cycle, state.config.n_cycles)
    shares = power_shares(g_active, alpha)
    h_active = np.clip((0.5 - shares) * q + 0.5, 0.0, 1.0)

    for k, i in enumerate(active):
        g[i] = g_active[k]
        h[i] = h_active[k]
        state.islands[i].g = float(g_active[k])
        size = len(state.islands[i].population)
        e[i] = int(state.rng.binomial(size, h_active[k])) if size else 0
    return g, h, e


def member_exportation(state: EnsembleState, e: np.ndarray) -> list[Individual]:
    """Pool each island's e_i lowest-scoring members (ties: lower RD first)."""
    pool: list[Individual] = []
    for i in state.active_indices:
        island = state.islands[i]
        count = int(e[i])
        if count == 0 or not island.population:
            continue
        ranked = pareto.annotate(island.population, nadir=state.reference_point)
        scores = np.array([ind.score for ind in ranked.individuals])
        rds = np.array([ind.rd for ind in ranked.individuals])
        order = np.lexsort((np.arange(len(scores)), rds, scores))
        doomed = set(order[:count].tolist())
        kept = [ind for k, ind in enumerate(ranked.individuals) if k not in doomed]
        pool.extend(ranked.individuals[k] for k in order[:count])
        island.population = kept
    return pool


def destination_selection(state: EnsembleState, pool: list[Individual],
                          g: np.ndarray, alpha: float) -> np.ndarray:
    """Redistribute the pool multinomially over the active islands.

    Arrival probabilities are the powered performance shares of the active
    islands (``g`` is the full-length scaled-performance array).  The pool
    is shuffled once, then sliced according to the sampled arrival counts.
    Returns the per-island arrival counts (full-length array).
    """
    n = len(state.islands)
    rho = np.zeros(n, dtype=int)
    if not pool:
        return rho
    active = state.active_indices
    if not active:
        raise StateError("cannot redistribute a pool with no active islands")
    shares = power_shares(np.asarray(g, dtype=float)[active], alpha)
    counts = state.rng.multinomial(len(pool), shares)
    order = state.rng.permutation(len(pool))
    shuffled = [pool[k] for k in order]
    offset = 0
    for k, i in enumerate(active):
        take = int(counts[k])
        if take:
            state.islands[i].population = state.islands[i].population + shuffled[offset:offset + take]
        rho[i] = take
        offset += take
    return rho


def disable_and_rescue(state: EnsembleState) -> None:
    """Permanently disable islands left empty after migration.

    An island disabled while still holding individuals (the convergence
    assist path) has them redistributed over the remaining active islands
    first.
    """
    for i in state.active_indices:
        island = state.islands[i]
        if island.population:
            continue
        if len(state.active_indices) == 1:
            raise StateError("cannot disable the last active island")
        island.active = False
        island.deactivated_cycle = state.cycle
        island.g = None


def _merge_for_convergence(state: EnsembleState, hv_values: np.ndarray) -> None:
    """Merge every active population into the island with the best HV."""
    active = state.active_indices
    if len(active) <= 1:
        return
    best = max(active, key=lambda i: (hv_values[i], len(state.islands[i].population), -i))
    merged: list[Individual] = []
    for i in active:
        merged.extend(state.islands[i].population)
        if i != best:
            island = state.islands[i]
            island.population = []
            island.active = False
            island.deactivated_cycle = state.cycle
            island.g = None
    state.islands[best].population = merged


@dataclass(frozen=True)
class IslandSummary:
    id: str
    kind: str
    active: bool
    population_size: int
    deactivated_cycle: int | None


@dataclass(frozen=True)
class RunResult:
    """Final fronts plus the full per-cycle diagnostics trace."""

    front: tuple[Individual, ...]           # merged feasible front of final populations
    archive_front: tuple[Individual, ...]   # all-time feasible non-dominated set
    stats: tuple[CycleStats, ...]
    evaluations: int
    reference_point: tuple[float, ...]
    islands: tuple[IslandSummary, ...]
    config: EnsembleConfig
    seed: int


def run(config: EnsembleConfig, problem: Problem) -> RunResult:
    """Execute a full ensemble optimization run.

    Identical configs and seeds produce identical results for any worker
    counts: island evolution draws only from per-island streams, migration
    draws only from the ensemble stream in fixed island order, and parallel
    evaluation preserves submission order.
    """
    seeds = np.random.SeedSequence(config.seed).spawn(len(config.island_specs) + 1)
    ensemble_rng = np.random.default_rng(seeds[-1])
    buffer = ArchiveBuffer()
    archive = ParetoArchive(problem.n_objectives)

    with EvaluationBackend(config.workers_islands, config.workers_eval) as backend:
        islands: list[Island] = []
        for i, spec in enumerate(config.island_specs):
            rng = np.random.default_rng(seeds[i])
            evaluator = backend.evaluator(problem, island_index=i, buffer=buffer)
            algorithm = create_algorithm(spec)
            genes = random_population(problem, config.population_per_island, rng)
            initial = evaluator(genes)
            algorithm.initialize(initial, problem, rng, evaluator=evaluator)
            islands.append(Island(spec=spec, algorithm=algorithm, population=list(initial)))

        state = EnsembleState(config=config, problem=problem, islands=islands,
                              cycle=0, rng=ensemble_rng, archive=archive)
        total = state.total_population()
        stats: list[CycleStats] = []

        island_pool = ThreadPoolExecutor(max_workers=config.workers_islands) \
            if config.workers_islands > 1 else None
        try:
            for cycle in range(1, config.n_cycles + 1):
                state.cycle = cycle
                _evolve_active_islands(state, island_pool)
                archive.add(buffer.drain())

                hv_values = population_evaluation(state)
                migrating = cycle <= config.migration_cycles
                if migrating:
                    g, h, e = debt_settlement(state, hv_values)
                    active = state.active_indices
                    sizes_at_export = np.array(
                        [len(isl.population) if isl.active else 0 for isl in state.islands])
                    pool = member_exportation(state, e)
                    _, alpha = migration_schedule(cycle, config.n_cycles)
                    rho = destination_selection(state, pool, g, alpha)
                    disable_and_rescue(state)
                    shares = power_shares(g[active], alpha)
                    theta_v, phi_v = _migration_diagnostics(
                        shares, h[active], sizes_at_export[active], cycle)
                    if cycle == config.migration_cycles and config.solo_cycles > 0:
                        _merge_for_convergence(state, hv_values)
                    for island in state.islands:
                        if island.active:
                            island.sync_to_algorithm()
                else:
                    g = np.full(len(islands), np.nan)
                    h = np.full(len(islands), np.nan)
                    e = np.zeros(len(islands), dtype=int)
                    rho = np.zeros(len(islands), dtype=int)
                    theta_v, phi_v = math.nan, math.nan

                if state.total_population() != total:
                    raise StateError(
                        f"conservation violated at cycle {cycle}: "
                        f"{state.total_population()} != {total}")
                stats.append(_cycle_stats(state, hv_values, g, h, e, rho, theta_v, phi_v))
        finally:
            if island_pool is not None:
                island_pool.shutdown(wait=True)

        archive.finalize()
        final_pop = [ind for isl in state.islands for ind in isl.population]
        feasible = [ind for ind in final_pop if ind.feasible]
        front = pareto.non_dominated_subset(feasible) if feasible else []
        evaluations = sum(isl.algorithm.evaluations for isl in islands) \
            + len(islands) * config.population_per_island

    return RunResult(
        front=tuple(front),
        archive_front=tuple(archive.individuals()),
        stats=tuple(stats),
        evaluations=evaluations,
        reference_point=tuple(float(x) for x in state.reference_point),
        islands=tuple(IslandSummary(isl.spec.id, isl.spec.kind, isl.active,
                                    len(isl.population), isl.deactivated_cycle)
                      for isl in state.islands),
        config=config,
        seed=config.seed,
    )


def _evolve_active_islands(state: EnsembleState, island_pool: ThreadPoolExecutor | None) -> None:
    gens = state.config.generations_per_cycle
    active = [state.islands[i] for i in state.active_indices]

    def evolve(island: Island) -> None:
        step_generations(island, state.problem, gens)

    if island_pool is None or len(active) <= 1:
        for island in active:
            evolve(island)
    else:
        list(island_pool.map(evolve, active))


def _migration_diagnostics(shares: np.ndarray, h_active: np.ndarray,
                           sizes: np.ndarray, cycle: int) -> tuple[float, float]:
    if len(shares) == 0:
        return math.nan, math.nan
    matrix = mobility_matrix(shares, np.nan_to_num(h_active), sizes, cycle)
    return theta(matrix), phi(matrix)


def _cycle_stats(state: EnsembleState, hv_values, g, h, e, rho,
                 theta_v: float, phi_v: float) -> CycleStats:
    config = state.config
    fixed_ref = config.archive_hv_reference
    archive_fixed = math.nan
    if fixed_ref is not None:
        archive_fixed = state.archive.hv(np.asarray(fixed_ref, dtype=float), state.rng)
    combined = state.archive.hv(state.reference_point, state.rng) if len(state.archive) \
        else 0.0
    return CycleStats(
        cycle=state.cycle,
        island_ids=tuple(isl.spec.id for isl in state.islands),
        active=tuple(isl.active for isl in state.islands),
        hv=tuple(float(v) for v in hv_values),
        population_sizes=tuple(len(isl.population) for isl in state.islands),
        g=tuple(float(v) for v in g),
        h=tuple(float(v) for v in h),
        exported=tuple(float(v) for v in e),
        received=tuple(float(v) for v in rho),
        theta=float(theta_v),
        phi=float(phi_v),
        combined_archive_hv=float(combined),
        archive_hv_fixed=float(archive_fixed),
        feasible_counts=tuple(sum(ind.feasible for ind in isl.population)
                              for isl in state.islands),
        reference_point=tuple(float(x) for x in state.reference_point),
    )

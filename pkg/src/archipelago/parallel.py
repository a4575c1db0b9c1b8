"""Two-level parallel evaluation plumbing.

Islands evolve concurrently in threads while each island's fitness
evaluations fan out to a shared process pool.  Chunk boundaries depend only
on the configured evaluators-per-island count, every evaluation is pure, and
results are concatenated in submission order, so run results are identical
for any worker configuration, including fully serial execution.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .problems import Individual, Problem, evaluate_batch


def _evaluate_chunk(args: tuple[Problem, np.ndarray]) -> list[Individual]:
    problem, genes = args
    return evaluate_batch(problem, genes)


class ArchiveBuffer:
    """Thread-safe staging area for evaluated individuals.

    Entries carry (island index, sequence number) so draining can restore a
    deterministic order regardless of thread interleaving.
    """

    def __init__(self):
        self._lock = threading.Lock()
        self._items: list[tuple[int, int, Individual]] = []

    def extend(self, island_index: int, start_seq: int, individuals: list[Individual]) -> None:
        with self._lock:
            for k, ind in enumerate(individuals):
                self._items.append((island_index, start_seq + k, ind))

    def drain(self) -> list[Individual]:
        with self._lock:
            items = self._items
            self._items = []
        items.sort(key=lambda t: (t[0], t[1]))
        return [ind for _, _, ind in items]


class PooledEvaluator:
    """Callable mapping gene matrices to evaluated individuals.

    Splits batches into ``workers_eval`` chunks submitted to the shared
    pool (or evaluates in-process when no pool is configured), counts
    evaluations, and forwards results to the optional archive buffer.
    """

    def __init__(self, problem: Problem, island_index: int = 0,
                 pool: ProcessPoolExecutor | None = None, workers_eval: int = 1,
                 buffer: ArchiveBuffer | None = None):
        self.problem = problem
        self.island_index = island_index
        self.pool = pool
        self.workers_eval = max(1, workers_eval)
        self.buffer = buffer
        self.count = 0

    def __call__(self, genes: np.ndarray) -> list[Individual]:
        genes = np.asarray(genes, dtype=float)
        if self.pool is None or self.workers_eval == 1 or len(genes) <= 1:
            out = evaluate_batch(self.problem, genes)
        else:
            chunks = [c for c in np.array_split(genes, self.workers_eval) if len(c)]
            out = []
            for result in self.pool.map(_evaluate_chunk, [(self.problem, c) for c in chunks]):
                out.extend(result)
        if self.buffer is not None:
            self.buffer.extend(self.island_index, self.count, out)
        self.count += len(out)
        return out


class EvaluationBackend:
    """Owns the shared process pool for one run."""

    def __init__(self, workers_islands: int = 1, workers_eval: int = 1):
        if workers_islands < 1 or workers_eval < 1:
            raise ValueError("worker counts must be >= 1")
        self.workers_islands = workers_islands
        self.workers_eval = workers_eval
        self.pool: ProcessPoolExecutor | None = None
        if workers_eval > 1:
            # actual pool size is capped by the host; determinism depends only
            # on the configured workers_eval through the chunking rule
            size = min(workers_islands * workers_eval, max(2, os.cpu_count() or 2))
            self.pool = ProcessPoolExecutor(max_workers=size)

    def evaluator(self, problem: Problem, island_index: int = 0,
                  buffer: ArchiveBuffer | None = None) -> PooledEvaluator:
        return PooledEvaluator(problem, island_index, self.pool, self.workers_eval, buffer)

    def close(self) -> None:
        if self.pool is not None:
            self.pool.shutdown(wait=True)
            self.pool = None

    def __enter__(self) -> "EvaluationBackend":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

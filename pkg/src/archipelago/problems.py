"""Optimization problems, decision vectors, individuals, and penalty handling.

A :class:`Problem` bundles variable specifications (continuous or
discrete-level), a pure evaluator mapping decision vectors to raw objective
and constraint values, and constraint limits.  All objectives are minimized
internally; maximization objectives must be negated when the problem is
defined.  Constraint violations are folded into the objectives through a
large additive penalty so that downstream machinery only ever sees plain
minimization vectors.

Everything here is pure and immutable: evaluating the same decision vector
twice yields bit-identical :class:`Individual` values, and individuals can be
shared freely between threads and worker processes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, EvaluationError

# Additive penalty magnitude applied per unit of normalized constraint
# violation.  Large enough to push any meaningfully infeasible point past the
# objective ranges of the bundled problems.
PENALTY_MAGNITUDE = 1.0e6

# Tolerance used when validating that a discrete gene sits on one of its
# levels (absorbs round-trips through text formats).
_LEVEL_ATOL = 1e-9


@dataclass(frozen=True)
class VariableSpec:
    """One decision variable: a box-bounded real or an ordered level set.

    Discrete variables store the level *values* themselves in decision
    vectors, not level indices, so a single real-coded operator path works
    for both kinds (offspring are snapped back to the nearest level).
    """

    name: str
    lower: float
    upper: float
    levels: tuple[float, ...] | None = None

    def __post_init__(self):
        if not self.lower <= self.upper:
            raise DomainError(f"variable {self.name!r}: lower {self.lower} > upper {self.upper}")
        if self.levels is not None:
            levels = tuple(float(v) for v in self.levels)
            if len(levels) == 0:
                raise DomainError(f"variable {self.name!r}: discrete kind requires levels")
            if any(b <= a for a, b in zip(levels, levels[1:])):
                raise DomainError(f"variable {self.name!r}: levels must be strictly increasing")
            if levels[0] < self.lower or levels[-1] > self.upper:
                raise DomainError(f"variable {self.name!r}: levels outside [lower, upper]")
            object.__setattr__(self, "levels", levels)

    @property
    def is_discrete(self) -> bool:
        return self.levels is not None


@dataclass(frozen=True)
class ConstraintSpec:
    """An inequality constraint `value <= limit` or `value >= limit`."""

    name: str
    limit: float
    direction: str = "<="

    def __post_init__(self):
        if self.direction not in ("<=", ">="):
            raise DomainError(f"constraint {self.name!r}: direction must be '<=' or '>='")
        if self.limit == 0.0:
            raise DomainError(f"constraint {self.name!r}: zero limit cannot normalize violations")


@dataclass(frozen=True, eq=False)
class Individual:
    """An evaluated decision vector with optional Pareto annotations.

    ``objectives`` are the penalized values used everywhere downstream;
    ``raw_objectives`` are the evaluator outputs.  The two are identical
    exactly when every constraint violation is zero.  ``rank`` (1-based),
    ``cd``, ``rd``, and ``score`` are attached by the ``pareto`` module and
    are ``None`` on a freshly evaluated individual.
    """

    genes: np.ndarray
    raw_objectives: np.ndarray
    objectives: np.ndarray
    violations: np.ndarray
    rank: int | None = None
    cd: float | None = None
    rd: float | None = None
    score: float | None = None

    @property
    def feasible(self) -> bool:
        return bool(np.all(self.violations == 0.0))

    def annotated(self, **fields) -> "Individual":
        """Return a copy with the given annotation fields replaced."""
        return replace(self, **fields)


Evaluator = Callable[[np.ndarray], tuple[Sequence[float], Sequence[float]]]
BatchEvaluator = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray | None]]


@dataclass(frozen=True)
class Problem:
    """A multiobjective minimization problem.

    ``evaluator`` maps a single decision vector (1-D array) to
    ``(objectives, constraint_values)`` and must be deterministic.  An
    optional ``batch_evaluator`` maps an ``(n, n_vars)`` matrix to
    ``(objective_matrix, constraint_matrix)`` and is used to vectorize and
    parallelize evaluation; it must agree with ``evaluator`` row by row.
    """

    variables: tuple[VariableSpec, ...]
    n_objectives: int
    evaluator: Evaluator
    constraints: tuple[ConstraintSpec, ...] = ()
    batch_evaluator: BatchEvaluator | None = None
    name: str = ""

    def __post_init__(self):
        if self.n_objectives < 2:
            raise DomainError("a Problem needs at least 2 objectives")
        if len(self.variables) == 0:
            raise DomainError("a Problem needs at least one variable")
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    @property
    def lower(self) -> np.ndarray:
        return np.array([v.lower for v in self.variables])

    @property
    def upper(self) -> np.ndarray:
        return np.array([v.upper for v in self.variables])

    @property
    def constraint_limits(self) -> np.ndarray:
        return np.array([c.limit for c in self.constraints])


def validate_decision(problem: Problem, genes: np.ndarray) -> np.ndarray:
    """Check bounds and level membership; return the canonical gene array."""
    genes = np.asarray(genes, dtype=float)
    if genes.shape != (problem.n_vars,):
        raise DomainError(f"decision vector has shape {genes.shape}, expected ({problem.n_vars},)")
    out = genes.copy()
    for i, spec in enumerate(problem.variables):
        x = genes[i]
        if not (spec.lower <= x <= spec.upper):
            raise DomainError(f"gene {spec.name!r}={x} outside [{spec.lower}, {spec.upper}]")
        if spec.is_discrete:
            levels = np.asarray(spec.levels)
            j = int(np.argmin(np.abs(levels - x)))
            if abs(levels[j] - x) > _LEVEL_ATOL:
                raise DomainError(f"gene {spec.name!r}={x} is not one of its discrete levels")
            out[i] = levels[j]
    return out


def _penalize(problem: Problem, raw: np.ndarray, cons: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized violations and penalized objectives for a batch.

    ``violations_j = max(0, c_j - limit_j)`` for `<=` constraints (mirrored
    for `>=`); every objective is inflated by
    ``PENALTY_MAGNITUDE * sum_j violations_j / |limit_j|``.
    """
    n = raw.shape[0]
    if len(problem.constraints) == 0:
        return np.zeros((n, 0)), raw.copy()
    limits = problem.constraint_limits
    signs = np.array([1.0 if c.direction == "<=" else -1.0 for c in problem.constraints])
    violations = np.maximum(0.0, signs * (cons - limits))
    penalty = PENALTY_MAGNITUDE * (violations / np.abs(limits)).sum(axis=1)
    return violations, raw + penalty[:, None]


def evaluate_batch(problem: Problem, genes_matrix: np.ndarray) -> list[Individual]:
    """Evaluate a batch of decision vectors into unranked individuals."""
    genes_matrix = np.asarray(genes_matrix, dtype=float)
    if genes_matrix.ndim != 2 or genes_matrix.shape[1] != problem.n_vars:
        raise DomainError(f"batch has shape {genes_matrix.shape}, expected (n, {problem.n_vars})")
    rows = [validate_decision(problem, row) for row in genes_matrix]
    genes_matrix = np.array(rows) if rows else genes_matrix

    n_con = len(problem.constraints)
    if problem.batch_evaluator is not None:
        try:
            raw, cons = problem.batch_evaluator(genes_matrix)
        except Exception as exc:
            raise EvaluationError(f"batch evaluator failed: {exc}", decision=genes_matrix) from exc
        raw = np.asarray(raw, dtype=float)
        cons = np.zeros((len(rows), 0)) if cons is None else np.asarray(cons, dtype=float)
    else:
        raw = np.empty((len(rows), problem.n_objectives))
        cons = np.empty((len(rows), n_con))
        for k, row in enumerate(rows):
            try:
                f, c = problem.evaluator(row)
            except Exception as exc:
                raise EvaluationError(f"evaluator failed on {row!r}: {exc}", decision=row) from exc
            raw[k] = np.asarray(f, dtype=float)
            cons[k] = np.asarray(c, dtype=float).reshape(n_con)

    if raw.shape != (len(rows), problem.n_objectives):
        raise EvaluationError(f"evaluator returned objective shape {raw.shape}")
    if not np.all(np.isfinite(raw)):
        raise EvaluationError("evaluator returned non-finite objectives", decision=genes_matrix)

    violations, objectives = _penalize(problem, raw, cons)
    out = []
    for k in range(len(rows)):
        ind = Individual(
            genes=rows[k],
            raw_objectives=raw[k],
            objectives=objectives[k],
            violations=violations[k],
        )
        for arr in (ind.genes, ind.raw_objectives, ind.objectives, ind.violations):
            arr.flags.writeable = False
        out.append(ind)
    return out


def evaluate(problem: Problem, decision: np.ndarray) -> Individual:
    """Evaluate one decision vector into an unranked individual."""
    return evaluate_batch(problem, np.asarray(decision, dtype=float)[None, :])[0]


def dominates(a: Individual, b: Individual) -> bool:
    """Pareto dominance on penalized objectives (minimization).

    True iff ``a`` is no worse in every objective and strictly better in at
    least one.
    """
    fa, fb = a.objectives, b.objectives
    if fa.shape != fb.shape:
        raise DomainError(f"objective dimension mismatch: {fa.shape} vs {fb.shape}")
    return bool(np.all(fa <= fb) and np.any(fa < fb))


def dominates_rows(fa: np.ndarray, fb: np.ndarray) -> bool:
    """Dominance check on two raw objective vectors."""
    fa = np.asarray(fa, dtype=float)
    fb = np.asarray(fb, dtype=float)
    if fa.shape != fb.shape:
        raise DomainError(f"objective dimension mismatch: {fa.shape} vs {fb.shape}")
    return bool(np.all(fa <= fb) and np.any(fa < fb))


def objectives_matrix(population: Sequence[Individual]) -> np.ndarray:
    """Stack penalized objective vectors into an (n, m) matrix."""
    return np.array([ind.objectives for ind in population])

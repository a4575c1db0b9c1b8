"""ZDT two-objective benchmark family (canonical formulations).

All functions minimize f1 and f2 over box-bounded variables; analytic
Pareto fronts are known and exposed through :func:`zdt_front`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..problems import Problem, VariableSpec


@dataclass(frozen=True)
class ZdtEvaluator:
    """Vectorizable evaluator for one ZDT function."""

    index: int
    n_vars: int

    def batch(self, x: np.ndarray) -> tuple[np.ndarray, None]:
        x = np.asarray(x, dtype=float)
        n = self.n_vars
        f1 = x[:, 0]
        if self.index == 1:
            g = 1.0 + 9.0 * x[:, 1:].sum(axis=1) / (n - 1)
            f2 = g * (1.0 - np.sqrt(f1 / g))
        elif self.index == 2:
            g = 1.0 + 9.0 * x[:, 1:].sum(axis=1) / (n - 1)
            f2 = g * (1.0 - (f1 / g) ** 2)
        elif self.index == 3:
            g = 1.0 + 9.0 * x[:, 1:].sum(axis=1) / (n - 1)
            f2 = g * (1.0 - np.sqrt(f1 / g) - (f1 / g) * np.sin(10.0 * np.pi * f1))
        elif self.index == 4:
            g = 1.0 + 10.0 * (n - 1) + np.sum(
                x[:, 1:] ** 2 - 10.0 * np.cos(4.0 * np.pi * x[:, 1:]), axis=1)
            f2 = g * (1.0 - np.sqrt(f1 / g))
        elif self.index == 6:
            f1 = 1.0 - np.exp(-4.0 * x[:, 0]) * np.sin(6.0 * np.pi * x[:, 0]) ** 6
            g = 1.0 + 9.0 * (x[:, 1:].sum(axis=1) / (n - 1)) ** 0.25
            f2 = g * (1.0 - (f1 / g) ** 2)
        else:
            raise DomainError(f"no ZDT{self.index}")
        return np.column_stack([f1, f2]), None

    def __call__(self, x: np.ndarray) -> tuple[np.ndarray, tuple]:
        objs, _ = self.batch(np.asarray(x, dtype=float)[None, :])
        return objs[0], ()


def make_zdt(index: int, n_vars: int) -> Problem:
    if index not in (1, 2, 3, 4, 6):
        raise DomainError(f"no ZDT{index}")
    if n_vars < 2:
        raise DomainError("ZDT problems need at least 2 variables")
    if index == 4:
        variables = [VariableSpec("x1", 0.0, 1.0)] + [
            VariableSpec(f"x{i + 1}", -5.0, 5.0) for i in range(1, n_vars)]
    else:
        variables = [VariableSpec(f"x{i + 1}", 0.0, 1.0) for i in range(n_vars)]
    evaluator = ZdtEvaluator(index, n_vars)
    return Problem(variables=tuple(variables), n_objectives=2, evaluator=evaluator,
                   batch_evaluator=evaluator.batch, name=f"zdt{index}-{n_vars}")


def zdt_front(index: int, n_points: int) -> np.ndarray:
    """Uniform sample of the analytic Pareto front."""
    if n_points < 2:
        raise DomainError("need at least 2 front points")
    t = np.linspace(0.0, 1.0, n_points)
    if index in (1, 4):
        return np.column_stack([t ** 2, 1.0 - t])
    if index == 2:
        return np.column_stack([t, 1.0 - t ** 2])
    if index == 3:
        f1 = np.linspace(0.0, 1.0, max(20001, 10 * n_points))
        f2 = 1.0 - np.sqrt(f1) - f1 * np.sin(10.0 * np.pi * f1)
        curve = np.column_stack([f1, f2])
        from ..pareto import non_dominated_mask
        front = curve[non_dominated_mask(curve)]
        front = front[np.argsort(front[:, 0])]
        pick = np.linspace(0, len(front) - 1, n_points).round().astype(int)
        return front[pick]
    if index == 6:
        x1 = np.linspace(0.0, 1.0, 100001)
        f1_min = float((1.0 - np.exp(-4.0 * x1) * np.sin(6.0 * np.pi * x1) ** 6).min())
        f1 = f1_min + t * (1.0 - f1_min)
        return np.column_stack([f1, 1.0 - f1 ** 2])
    raise DomainError(f"no ZDT{index}")

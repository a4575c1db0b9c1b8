"""DTLZ scalable benchmark family (canonical formulations).

The first ``n_objectives - 1`` variables position a point on the front
shape; the remaining ``k = n_vars - n_objectives + 1`` distance variables
feed the g function that lifts points off the true front.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..pareto import non_dominated_mask
from ..problems import Problem, VariableSpec
from ..islands.operators import directions_for_size


def _g1(xm: np.ndarray) -> np.ndarray:
    k = xm.shape[1]
    return 100.0 * (k + np.sum((xm - 0.5) ** 2 - np.cos(20.0 * np.pi * (xm - 0.5)), axis=1))


def _g2(xm: np.ndarray) -> np.ndarray:
    return np.sum((xm - 0.5) ** 2, axis=1)


def _angular_shape(theta: np.ndarray, scale: np.ndarray) -> np.ndarray:
    """Map angles (n, m-1) to points on the unit sphere octant, scaled by (1+g)."""
    n, m1 = theta.shape
    m = m1 + 1
    out = np.empty((n, m))
    cos = np.cos(theta)
    sin = np.sin(theta)
    for i in range(m):
        f = scale.copy()
        f *= np.prod(cos[:, : m - 1 - i], axis=1)
        if i > 0:
            f *= sin[:, m - 1 - i]
        out[:, i] = f
    return out


@dataclass(frozen=True)
class DtlzEvaluator:
    index: int
    n_vars: int
    n_objectives: int

    def batch(self, x: np.ndarray) -> tuple[np.ndarray, None]:
        x = np.asarray(x, dtype=float)
        m = self.n_objectives
        xp = x[:, : m - 1]
        xm = x[:, m - 1:]
        if self.index == 1:
            g = _g1(xm)
            n = len(x)
            out = np.empty((n, m))
            for i in range(m):
                f = 0.5 * (1.0 + g)
                f = f * np.prod(xp[:, : m - 1 - i], axis=1)
                if i > 0:
                    f = f * (1.0 - xp[:, m - 1 - i])
                out[:, i] = f
            return out, None
        if self.index in (2, 3, 4):
            g = _g1(xm) if self.index == 3 else _g2(xm)
            pos = xp ** 100.0 if self.index == 4 else xp
            theta = pos * (np.pi / 2.0)
            return _angular_shape(theta, 1.0 + g), None
        if self.index in (5, 6):
            g = _g2(xm) if self.index == 5 else np.sum(xm ** 0.1, axis=1)
            theta = np.empty_like(xp)
            theta[:, 0] = xp[:, 0] * (np.pi / 2.0)
            if m > 2:
                factor = np.pi / (4.0 * (1.0 + g))
                theta[:, 1:] = factor[:, None] * (1.0 + 2.0 * g[:, None] * xp[:, 1:])
            return _angular_shape(theta, 1.0 + g), None
        if self.index == 7:
            k = self.n_vars - m + 1
            g = 1.0 + 9.0 / k * xm.sum(axis=1)
            h = m - np.sum(xp / (1.0 + g)[:, None] *
                           (1.0 + np.sin(3.0 * np.pi * xp)), axis=1)
            return np.column_stack([xp, (1.0 + g) * h]), None
        raise DomainError(f"no DTLZ{self.index}")

    def __call__(self, x: np.ndarray) -> tuple[np.ndarray, tuple]:
        objs, _ = self.batch(np.asarray(x, dtype=float)[None, :])
        return objs[0], ()


def make_dtlz(index: int, n_vars: int, n_objectives: int) -> Problem:
    if index not in range(1, 8):
        raise DomainError(f"no DTLZ{index}")
    if n_objectives < 2:
        raise DomainError("DTLZ needs at least 2 objectives")
    if n_vars < n_objectives:
        raise DomainError("DTLZ needs n_vars >= n_objectives")
    variables = tuple(VariableSpec(f"x{i + 1}", 0.0, 1.0) for i in range(n_vars))
    evaluator = DtlzEvaluator(index, n_vars, n_objectives)
    return Problem(variables=variables, n_objectives=n_objectives, evaluator=evaluator,
                   batch_evaluator=evaluator.batch,
                   name=f"dtlz{index}-{n_vars}-{n_objectives}obj")


def dtlz_front(index: int, n_objectives: int, n_points: int) -> np.ndarray:
    """Sample of the analytic Pareto front (exact front members)."""
    m = n_objectives
    if index == 1:
        return 0.5 * directions_for_size(m, n_points)
    if index in (2, 3, 4):
        w = directions_for_size(m, n_points)
        norm = np.linalg.norm(w, axis=1, keepdims=True)
        return w / norm
    if index in (5, 6):
        # degenerate curve: evaluate optimal decision vectors directly
        t = np.linspace(0.0, 1.0, n_points)
        n_vars = max(m + 1, 2 * m)
        evaluator = DtlzEvaluator(index, n_vars, m)
        x = np.full((n_points, n_vars), 0.5 if index == 5 else 0.0)
        x[:, : m - 1] = 0.5
        x[:, 0] = t
        objs, _ = evaluator.batch(x)
        return objs
    if index == 7:
        # per-dimension efficient set of y (1 + sin(3 pi y)): left-to-right
        # running-max filter on a dense grid identifies the segments
        y = np.linspace(0.0, 1.0, 20001)
        v = y * (1.0 + np.sin(3.0 * np.pi * y))
        best = np.maximum.accumulate(v)
        efficient = y[(v >= best) & ((v > np.concatenate([[-np.inf], best[:-1]])))]
        rng = np.random.default_rng(2718)
        xp = rng.choice(efficient, size=(4 * n_points, m - 1))
        g = np.ones(len(xp))
        h = m - np.sum(xp / (1.0 + g)[:, None] * (1.0 + np.sin(3.0 * np.pi * xp)), axis=1)
        pts = np.column_stack([xp, (1.0 + g) * h])
        pts = pts[non_dominated_mask(pts)]
        pick = np.linspace(0, len(pts) - 1, min(n_points, len(pts))).round().astype(int)
        return pts[np.lexsort(pts.T[::-1])][pick]
    raise DomainError(f"no DTLZ{index} front")

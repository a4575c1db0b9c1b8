"""Hypervolume and inverse generational distance indicators.

Hypervolume (HV) is the Lebesgue measure of the region weakly dominated by a
front and bounded above by a reference point.  The exact computation slices
recursively along the last objective: distinct coordinate values (augmented
with the reference coordinate) define slabs, each slab contributes its width
times the HV of the points dominating it projected one dimension down, and
the recursion bottoms out at the 1-D interval length ``max(0, r - min p)``.

Exact HV cost grows roughly like ``N^(d-2) log N``; beyond an empirical
threshold of ``2e6`` the computation switches to Monte-Carlo sampling inside
the bounding box spanned by the front's componentwise minimum and the
reference point.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DomainError
from .pareto import non_dominated_mask

#: Dispatch threshold on N^(d-2) * ln(N); above it exact HV is impractical.
EXACT_COST_LIMIT = 2.0e6

#: Monte-Carlo batch sizing and stopping constants.
MC_BATCH_BASE = 5000
MC_BATCH_MIN = 5000
MC_BATCH_MAX = 50000
MC_RELATIVE_TOLERANCE = 1e-3


@dataclass(frozen=True)
class FrontSet:
    """A minimization front paired with its reference point.

    Construction filters the raw points: anything not weakly below the
    reference in every component is dropped (it contributes no dominated
    volume), and dominated or duplicated points are removed unless the
    caller passes ``assume_non_dominated=True`` to skip the quadratic check
    for fronts that are non-dominated by construction.
    """

    points: np.ndarray
    reference: np.ndarray
    assume_non_dominated: bool = field(default=False, repr=False)

    def __post_init__(self):
        reference = np.atleast_1d(np.asarray(self.reference, dtype=float))
        if reference.ndim != 1 or reference.size == 0:
            raise DomainError(f"reference must be a 1-D point, got shape {reference.shape}")
        if not np.all(np.isfinite(reference)):
            raise DomainError(f"reference must be finite, got {reference}")
        points = np.asarray(self.points, dtype=float)
        if points.size == 0:
            points = points.reshape(0, reference.size)
        if points.ndim == 1:
            points = points[:, None] if reference.size == 1 else points[None, :]
        if points.shape[1] != reference.size:
            raise DomainError(
                f"points have {points.shape[1]} objectives but reference has {reference.size}")
        inside = np.all(points <= reference, axis=1)
        points = points[inside]
        if len(points) and not self.assume_non_dominated:
            points = points[non_dominated_mask(points)]
        points = np.ascontiguousarray(points)
        points.flags.writeable = False
        reference.flags.writeable = False
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "reference", reference)

    @property
    def dimension(self) -> int:
        return int(self.reference.size)

    def __len__(self) -> int:
        return len(self.points)


def _hv_2d(points: np.ndarray, ref: np.ndarray) -> float:
    """Slab sum along the second objective with a running first-axis minimum."""
    order = np.lexsort((points[:, 0], points[:, 1]))
    x = points[order, 0]
    y = points[order, 1]
    run_min = np.minimum.accumulate(x)
    widths = np.diff(np.append(y, ref[1]))
    return float(np.sum(widths * (ref[0] - run_min)))


class _Staircase:
    """Incremental 2-D dominated-area bookkeeping used by the 3-D sweep.

    Entries are kept sorted by x with strictly decreasing y.  ``insert``
    returns the area gained, so the caller can slice along the third axis
    and accumulate width * area exactly as the recursive formulation does.
    """

    def __init__(self, r0: float, r1: float):
        self.r0 = r0
        self.r1 = r1
        self.xs: list[float] = []
        self.ys: list[float] = []

    def insert(self, x: float, y: float) -> float:
        xs, ys, r0, r1 = self.xs, self.ys, self.r0, self.r1
        left = bisect_right(xs, x) - 1
        if left >= 0 and ys[left] <= y:
            return 0.0  # dominated by an existing entry
        pos = bisect_left(xs, x)
        end = pos
        while end < len(xs) and ys[end] >= y:
            end += 1
        right_x = xs[end] if end < len(xs) else r0

        old = 0.0
        for k in range(pos, end):
            nxt = xs[k + 1] if k + 1 < end else right_x
            old += (nxt - xs[k]) * (r1 - ys[k])
        new = (right_x - x) * (r1 - y)
        if pos > 0:
            old_next = xs[pos] if pos < len(xs) else r0
            old += (old_next - xs[pos - 1]) * (r1 - ys[pos - 1])
            new += (x - xs[pos - 1]) * (r1 - ys[pos - 1])

        del xs[pos:end]
        del ys[pos:end]
        xs.insert(pos, x)
        ys.insert(pos, y)
        return new - old


def _hv_3d(points: np.ndarray, ref: np.ndarray) -> float:
    order = np.argsort(points[:, 2], kind="stable")
    pts = points[order]
    stair = _Staircase(float(ref[0]), float(ref[1]))
    total = 0.0
    area = 0.0
    z_prev = float(pts[0, 2])
    for x, y, z in pts:
        total += area * (z - z_prev)
        z_prev = float(z)
        area += stair.insert(float(x), float(y))
    total += area * (float(ref[2]) - z_prev)
    return total


def _hv_slices(points: np.ndarray, ref: np.ndarray) -> float:
    d = len(ref)
    if len(points) == 0:
        return 0.0
    if d == 1:
        return max(0.0, float(ref[0] - points[:, 0].min()))
    if d == 2:
        return _hv_2d(points, ref)
    if d == 3:
        return _hv_3d(points, ref)
    breaks = np.unique(points[:, d - 1])
    if breaks[-1] < ref[d - 1]:
        breaks = np.append(breaks, ref[d - 1])
    total = 0.0
    for k in range(len(breaks) - 1):
        width = breaks[k + 1] - breaks[k]
        slab = points[points[:, d - 1] <= breaks[k], : d - 1]
        total += width * _hv_slices(slab, ref[: d - 1])
    return total


def hv_exact(front: FrontSet) -> float:
    """Exact hypervolume by recursive slicing."""
    if len(front) == 0:
        return 0.0
    return _hv_slices(front.points, front.reference)


@dataclass(frozen=True)
class MonteCarloTrace:
    """Instrumentation for one Monte-Carlo HV run."""

    estimate: float
    batch_size: int
    n_batches: int
    box_volume: float
    estimates: tuple[float, ...]


def mc_batch_size(box_volume: float) -> int:
    """Batch sizing rule: 5000 * max(1, ln(box volume)), clamped."""
    size = MC_BATCH_BASE * max(1.0, math.log(box_volume))
    return int(min(MC_BATCH_MAX, max(MC_BATCH_MIN, size)))


def hv_monte_carlo(front: FrontSet, rng: np.random.Generator,
                   return_trace: bool = False) -> float | MonteCarloTrace:
    """Monte-Carlo hypervolume estimate.

    Uniform samples are drawn in the box spanning the front's componentwise
    minimum and the reference point; the estimate is the box volume times
    the dominated fraction, pooled over batches until two successive pooled
    estimates differ by less than 0.1% relative.
    """
    if len(front) == 0:
        result = MonteCarloTrace(0.0, 0, 0, 0.0, ())
        return result if return_trace else 0.0
    points = front.points
    lower = points.min(axis=0)
    box = front.reference - lower
    volume = float(np.prod(box))
    if volume <= 0.0:
        result = MonteCarloTrace(0.0, 0, 0, volume, ())
        return result if return_trace else 0.0

    batch = mc_batch_size(volume)
    total = 0
    hit = 0
    previous = None
    history: list[float] = []
    # keep the sample x point dominance check under ~16M boolean entries
    sample_chunk = max(1, int(2 ** 24 / max(1, len(points))))
    while True:
        samples = rng.uniform(lower, front.reference, size=(batch, front.dimension))
        for start in range(0, batch, sample_chunk):
            block = samples[start:start + sample_chunk]
            hit += int(np.count_nonzero(
                np.any(np.all(points[None, :, :] <= block[:, None, :], axis=2), axis=1)))
        total += batch
        estimate = volume * hit / total
        history.append(estimate)
        if previous is not None:
            if previous == estimate == 0.0:
                break
            if previous > 0.0 and abs(estimate - previous) / previous < MC_RELATIVE_TOLERANCE:
                break
        previous = estimate
    if return_trace:
        return MonteCarloTrace(estimate, batch, len(history), volume, tuple(history))
    return estimate


def hv_uses_exact(n_points: int, dimension: int) -> bool:
    """Whether the exact algorithm is used for a front of this size."""
    if dimension <= 2 or n_points <= 1:
        return True
    log_cost = (dimension - 2) * math.log(n_points) + math.log(math.log(n_points))
    return log_cost <= math.log(EXACT_COST_LIMIT)


def hv(front: FrontSet, rng: np.random.Generator | None = None) -> float:
    """Hypervolume with automatic exact / Monte-Carlo dispatch.

    ``rng`` seeds the Monte-Carlo path; when omitted a fixed stream is used
    so repeated calls on the same front agree.
    """
    if hv_uses_exact(len(front), front.dimension):
        return hv_exact(front)
    if rng is None:
        rng = np.random.default_rng(0)
    return float(hv_monte_carlo(front, rng))


def igd(front: FrontSet | np.ndarray, reference_front: np.ndarray) -> float:
    """Inverse generational distance (plain Euclidean form; lower is better).

    Mean over reference-front points of the distance to the nearest obtained
    point.  An empty front maps to ``inf``.
    """
    reference_front = np.asarray(reference_front, dtype=float)
    if reference_front.ndim != 2 or len(reference_front) == 0:
        raise DomainError("reference front must be a non-empty (n, m) array")
    points = front.points if isinstance(front, FrontSet) else np.asarray(front, dtype=float)
    if len(points) == 0:
        return math.inf
    if points.ndim != 2 or points.shape[1] != reference_front.shape[1]:
        raise DomainError(
            f"front shape {points.shape} incompatible with reference {reference_front.shape}")
    return float(cdist(reference_front, points).min(axis=1).mean())

"""Benchmark problem registry.

Problems are addressable by string id: ``zdt3-30``, ``dtlz7-10-3obj``, and
``smr-eq-cycle``.  The ZDT/DTLZ configuration matrix follows the campaign
setup: 10/30/50 variables, two objectives for ZDT, and 3/5/10 objectives
for DTLZ.  The underlying factories (``make_zdt``, ``make_dtlz``) accept
any sane dimensions for ad-hoc use.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from ..problems import Problem
from .dtlz import DtlzEvaluator, dtlz_front, make_dtlz
from .smr import (ASSEMBLY_TYPES, BA_CONFIGS, DEFAULT_LCOE_PARAMETERS, CoreSurrogate,
                  FrontEndCost, LcoeBreakdown, LcoeParameters, NOMINAL_ENRICHMENTS,
                  REFERENCE_METRICS, front_end_cost, lcoe, make_smr_problem,
                  reference_design)
from .zdt import ZdtEvaluator, make_zdt, zdt_front

VALID_DIMENSIONS = (10, 30, 50)
ZDT_INDICES = (1, 2, 3, 4, 6)
DTLZ_INDICES = (1, 2, 3, 4, 5, 6, 7)
DTLZ_OBJECTIVES = (3, 5, 10)

SMR_PROBLEM_ID = "smr-eq-cycle"


@dataclass(frozen=True)
class BenchmarkSpec:
    """A (family, index, dimensions) combination from the benchmark matrix."""

    family: str
    index: int
    n_vars: int
    n_objectives: int

    def __post_init__(self):
        if self.family == "zdt":
            if self.index not in ZDT_INDICES:
                raise DomainError(f"no ZDT{self.index}")
            if self.n_objectives != 2:
                raise DomainError("ZDT problems have exactly 2 objectives")
        elif self.family == "dtlz":
            if self.index not in DTLZ_INDICES:
                raise DomainError(f"no DTLZ{self.index}")
            if self.n_objectives not in DTLZ_OBJECTIVES:
                raise DomainError(f"DTLZ objective count must be one of {DTLZ_OBJECTIVES}")
        else:
            raise DomainError(f"unknown family {self.family!r}")
        if self.n_vars not in VALID_DIMENSIONS:
            raise DomainError(f"variable count must be one of {VALID_DIMENSIONS}")
        if self.n_vars < self.n_objectives:
            raise DomainError("need n_vars >= n_objectives")

    @property
    def problem_id(self) -> str:
        if self.family == "zdt":
            return f"zdt{self.index}-{self.n_vars}"
        return f"dtlz{self.index}-{self.n_vars}-{self.n_objectives}obj"


def make_benchmark(spec: BenchmarkSpec) -> Problem:
    if spec.family == "zdt":
        return make_zdt(spec.index, spec.n_vars)
    return make_dtlz(spec.index, spec.n_vars, spec.n_objectives)


def reference_front(spec: BenchmarkSpec, n_points: int) -> np.ndarray:
    """Sample of the analytic Pareto front for indicator baselines."""
    if spec.family == "zdt":
        return zdt_front(spec.index, n_points)
    return dtlz_front(spec.index, spec.n_objectives, n_points)


_ZDT_ID = re.compile(r"^zdt(\d)-(\d+)$")
_DTLZ_ID = re.compile(r"^dtlz(\d)-(\d+)-(\d+)obj$")


def parse_problem_id(problem_id: str) -> BenchmarkSpec | None:
    """Spec for a benchmark id; None for non-benchmark ids (e.g. the SMR)."""
    match = _ZDT_ID.match(problem_id)
    if match:
        return BenchmarkSpec("zdt", int(match.group(1)), int(match.group(2)), 2)
    match = _DTLZ_ID.match(problem_id)
    if match:
        return BenchmarkSpec("dtlz", int(match.group(1)), int(match.group(2)),
                             int(match.group(3)))
    return None


def get_problem(problem_id: str) -> Problem:
    if problem_id == SMR_PROBLEM_ID:
        return make_smr_problem()
    spec = parse_problem_id(problem_id)
    if spec is None:
        raise DomainError(f"unknown problem id {problem_id!r}")
    return make_benchmark(spec)


def get_reference_front(problem_id: str, n_points: int) -> np.ndarray:
    spec = parse_problem_id(problem_id)
    if spec is None:
        raise DomainError(f"no analytic front for {problem_id!r}")
    return reference_front(spec, n_points)


def list_problem_ids() -> list[str]:
    ids = []
    for index in ZDT_INDICES:
        for n_vars in VALID_DIMENSIONS:
            ids.append(BenchmarkSpec("zdt", index, n_vars, 2).problem_id)
    for index in DTLZ_INDICES:
        for n_vars in VALID_DIMENSIONS:
            for m in DTLZ_OBJECTIVES:
                if n_vars >= m:
                    ids.append(BenchmarkSpec("dtlz", index, n_vars, m).problem_id)
    ids.append(SMR_PROBLEM_ID)
    return ids


__all__ = [
    "ASSEMBLY_TYPES", "BA_CONFIGS", "BenchmarkSpec", "CoreSurrogate",
    "DEFAULT_LCOE_PARAMETERS", "DTLZ_INDICES", "DTLZ_OBJECTIVES", "DtlzEvaluator",
    "FrontEndCost", "LcoeBreakdown", "LcoeParameters", "NOMINAL_ENRICHMENTS",
    "REFERENCE_METRICS", "SMR_PROBLEM_ID", "VALID_DIMENSIONS", "ZDT_INDICES",
    "ZdtEvaluator", "dtlz_front", "front_end_cost", "get_problem",
    "get_reference_front", "lcoe", "list_problem_ids", "make_benchmark",
    "make_dtlz", "make_smr_problem", "make_zdt", "parse_problem_id",
    "reference_design", "reference_front", "zdt_front",
]

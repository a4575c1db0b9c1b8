"""Island-ensemble multiobjective optimization with hypervolume-driven migration."""

from . import benchmarks, diagnostics, ensemble, indicators, islands, pareto, problems
from .ensemble import EnsembleConfig, RunResult, run
from .errors import ArchipelagoError, ConfigError, DomainError, EvaluationError, StateError
from .indicators import FrontSet, hv, hv_exact, hv_monte_carlo, igd
from .islands import IslandAlgorithmSpec, default_island_specs
from .problems import ConstraintSpec, Individual, Problem, VariableSpec, dominates, evaluate

__version__ = "0.1.0"

__all__ = [
    "ArchipelagoError", "ConfigError", "ConstraintSpec", "DomainError", "EnsembleConfig",
    "EvaluationError", "FrontSet", "Individual", "IslandAlgorithmSpec", "Problem",
    "RunResult", "StateError", "VariableSpec", "benchmarks", "default_island_specs",
    "diagnostics", "dominates", "ensemble", "evaluate", "hv", "hv_exact",
    "hv_monte_carlo", "igd", "indicators", "islands", "pareto", "problems", "run",
]

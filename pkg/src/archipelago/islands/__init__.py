"""Constituent island algorithms and their registry.

Four algorithms ship with the package (``nsga2``, ``nsga3``, ``spea2``,
``moead``) plus a ``random`` baseline; kind ``plugin`` dispatches to a
user-supplied factory on the spec.  ``default_island_specs`` builds the
canonical four-island ensemble configuration: island 1 runs the blend
crossover (alpha 0.5, p_c 0.65, per-gene p_m 0.35) and islands 2-4 run
SBX / polynomial mutation with distribution indices of 20, p_c 0.9, and
p_m = 1/n_vars.
"""

from __future__ import annotations

from ..errors import ConfigError
from .base import Island, IslandAlgorithm, IslandAlgorithmSpec, step_generations
from .moead import MoeaD
from .nsga2 import Nsga2
from .nsga3 import Nsga3
from .operators import (blend_crossover, clip_and_snap, das_dennis_count,
                        das_dennis_directions, directions_for_size, polynomial_mutation,
                        random_population, simulated_binary_crossover, variation)
from .random_search import RandomSearch
from .spea2 import Spea2

ALGORITHM_KINDS = {
    "nsga2": Nsga2,
    "nsga3": Nsga3,
    "spea2": Spea2,
    "moead": MoeaD,
    "random": RandomSearch,
}


def create_algorithm(spec: IslandAlgorithmSpec) -> IslandAlgorithm:
    if spec.kind == "plugin":
        if spec.factory is None:
            raise ConfigError(f"island {spec.id!r}: plugin kind requires a factory")
        return spec.factory(spec)
    try:
        cls = ALGORITHM_KINDS[spec.kind]
    except KeyError:
        raise ConfigError(f"unknown island algorithm kind {spec.kind!r}") from None
    return cls(spec)


def spec_for_kind(kind: str, island_id: str) -> IslandAlgorithmSpec:
    """Default operator settings for one algorithm kind."""
    if kind == "nsga2":
        return IslandAlgorithmSpec(id=island_id, kind=kind, crossover="blend",
                                   crossover_prob=0.65, mutation_prob=0.35, blend_alpha=0.5)
    return IslandAlgorithmSpec(id=island_id, kind=kind, crossover="sbx",
                               crossover_prob=0.9, mutation_prob=None,
                               eta_crossover=20.0, eta_mutation=20.0)


def default_island_specs(kinds: tuple[str, ...] = ("nsga2", "nsga3", "moead", "spea2"),
                         ) -> tuple[IslandAlgorithmSpec, ...]:
    return tuple(spec_for_kind(kind, f"island-{i + 1}") for i, kind in enumerate(kinds))


__all__ = [
    "ALGORITHM_KINDS", "Island", "IslandAlgorithm", "IslandAlgorithmSpec",
    "MoeaD", "Nsga2", "Nsga3", "RandomSearch", "Spea2",
    "blend_crossover", "clip_and_snap", "create_algorithm", "das_dennis_count",
    "das_dennis_directions", "default_island_specs", "directions_for_size",
    "polynomial_mutation", "random_population", "simulated_binary_crossover",
    "spec_for_kind", "step_generations", "variation",
]

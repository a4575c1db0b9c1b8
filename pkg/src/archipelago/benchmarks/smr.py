"""Small-modular-reactor equilibrium-cycle design problem.

Eight discrete decision variables: seven assembly enrichments (nominal
+/- 0.4 wt% on a 0.02 grid, 41 levels each) and one burnable-absorber
placement choice.  Three objectives: fuel levelized cost of electricity
(minimize), peak soluble boron concentration (minimize), and equilibrium
cycle length in effective full power years (maximized, stored negated).
Hard safety constraints cap the heat-flux and enthalpy-rise hot-channel
peaking factors at 2.49 and 1.5.

Core responses come from :class:`CoreSurrogate`, a deliberately simple,
fully documented analytic stand-in for a nodal core simulator.  It is NOT a
physics model; its contract is the optimization-relevant structure (cycle
length, burnups, and boron grow with batch-averaged enrichment; peaking
grows with the feed-to-once-burned enrichment contrast and relaxes when the
absorber sits in the C02 batch) anchored so the nominal design exactly
reproduces the tabulated pre-optimization reference metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from ..errors import DomainError
from ..problems import ConstraintSpec, Problem, VariableSpec

# --------------------------------------------------------------------------
# Economic constants
# --------------------------------------------------------------------------

#: Pounds of U3O8 needed to supply one kilogram of uranium.
LB_U3O8_PER_KGU = 2.59979


@dataclass(frozen=True)
class LcoeParameters:
    """Plant and market constants for the fuel-cycle LCOE model.

    ``alpha`` holds the per-assembly-type core fractions for the seven
    batch positions (A01, A02, B01, B02, C01, C02, C03).  The UF6 spot
    price is carried for reference: the feed route used in the cost build
    is U3O8 purchase plus conversion, which the spot price approximates.
    """

    core_mass_kg: float = 9700.0
    fabrication_years: float = 1.0
    waba_unit_cost: float = 1500.0
    thermal_efficiency: float = 0.33
    availability: float = 0.9
    refueling_outage_years: float = 30.0 / 365.0
    maintenance_outage_years: float = 20.0 / 365.0
    discount_rate: float = 0.045
    waste_cost: float = 0.001
    n_batches: int = 3
    alpha: tuple[float, ...] = (8 / 37, 4 / 37, 8 / 37, 4 / 37, 8 / 37, 4 / 37, 1 / 37)
    u3o8_cost_per_lb: float = 63.45
    conversion_cost_per_kgu: float = 80.0
    uf6_cost_per_kgu: float = 251.25
    swu_cost: float = 185.0
    feed_assay: float = 0.00711
    tail_assay: float = 0.0025

    def __post_init__(self):
        if abs(sum(self.alpha) - 1.0) > 1e-12:
            raise DomainError("assembly fractions alpha must sum to 1")
        for name in ("core_mass_kg", "thermal_efficiency", "availability",
                     "discount_rate", "swu_cost", "u3o8_cost_per_lb"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")


DEFAULT_LCOE_PARAMETERS = LcoeParameters()


def separation_potential(assay: float) -> float:
    """Value function V(x) = (2x - 1) ln(x / (1 - x)) of an assay fraction."""
    if not 0.0 < assay < 1.0:
        raise DomainError(f"assay {assay} outside (0, 1)")
    return (2.0 * assay - 1.0) * math.log(assay / (1.0 - assay))


@dataclass(frozen=True)
class FrontEndCost:
    """Per-kgU front-end cost components of enriched uranium product."""

    u3o8: float
    conversion: float
    swu: float
    feed_ratio: float
    swu_per_kg: float

    @property
    def total(self) -> float:
        return self.u3o8 + self.conversion + self.swu


def front_end_cost(enrichment_wt_pct: float,
                   params: LcoeParameters = DEFAULT_LCOE_PARAMETERS) -> FrontEndCost:
    """Undiscounted front-end cost of one kgU at the given product assay."""
    x_p = enrichment_wt_pct / 100.0
    x_f = params.feed_assay
    x_t = params.tail_assay
    if not x_t < x_f < x_p:
        raise DomainError(f"product assay {x_p} must exceed feed {x_f} > tails {x_t}")
    feed_ratio = (x_p - x_t) / (x_f - x_t)
    tails_ratio = feed_ratio - 1.0
    swu_per_kg = (separation_potential(x_p)
                  + tails_ratio * separation_potential(x_t)
                  - feed_ratio * separation_potential(x_f))
    return FrontEndCost(
        u3o8=feed_ratio * params.u3o8_cost_per_lb * LB_U3O8_PER_KGU,
        conversion=feed_ratio * params.conversion_cost_per_kgu,
        swu=swu_per_kg * params.swu_cost,
        feed_ratio=feed_ratio,
        swu_per_kg=swu_per_kg,
    )


@dataclass(frozen=True)
class LcoeBreakdown:
    """Outputs of the fuel-cycle LCOE model."""

    lcoe: float          # $/MWh
    efpy: float          # effective full power years at equilibrium
    k_f: float           # effective capacity factor
    t_lev: float         # levelization period, years
    fuel_cost_term: float


def lcoe(cycle_days: float, burnups: np.ndarray, enrichments: np.ndarray,
         params: LcoeParameters = DEFAULT_LCOE_PARAMETERS,
         weights: np.ndarray | None = None) -> LcoeBreakdown:
    """Equilibrium fuel-cycle levelized cost of electricity.

    ``burnups`` (MWd/kgU) and ``enrichments`` (wt%) are aligned per batch
    type; ``weights`` are the core mass fractions (``params.alpha`` by
    default).  Front-end component costs are derived from each enrichment
    and discounted over the fabrication lead time.  The wet-annular-absorber
    cost term is excluded: absorber rods exist only in first-cycle loadings,
    not at equilibrium.
    """
    if cycle_days <= 0:
        raise DomainError(f"cycle length must be positive, got {cycle_days}")
    burnups = np.asarray(burnups, dtype=float)
    enrichments = np.asarray(enrichments, dtype=float)
    weights = np.asarray(params.alpha if weights is None else weights, dtype=float)
    if not (len(burnups) == len(enrichments) == len(weights)):
        raise DomainError("burnups, enrichments, and weights must align")
    if np.any(burnups <= 0.0):
        raise DomainError("burnups must be positive")

    t_lev = cycle_days * params.n_batches / 365.25
    outage = params.refueling_outage_years + params.maintenance_outage_years
    k_f = params.availability * (1.0 - outage / t_lev)
    efpy = k_f * t_lev
    if k_f <= 0.0:
        raise DomainError("cycle too short: outage time exceeds the levelization period")

    r = params.discount_rate
    discount = math.exp(-r * params.fabrication_years)
    per_kg = np.array([front_end_cost(e, params).total for e in enrichments]) * discount
    fuel_cost_term = float(np.sum(weights * per_kg / burnups))

    energy_factor = efpy / (params.thermal_efficiency * k_f * 24.0)
    annuity = r / (1.0 - math.exp(-r * t_lev))
    value = energy_factor * annuity * fuel_cost_term + params.waste_cost
    return LcoeBreakdown(lcoe=value, efpy=efpy, k_f=k_f, t_lev=t_lev,
                         fuel_cost_term=fuel_cost_term)


# --------------------------------------------------------------------------
# Synthetic core surrogate
# --------------------------------------------------------------------------

ASSEMBLY_TYPES = ("A01", "A02", "B01", "B02", "C01", "C02", "C03")
NOMINAL_ENRICHMENTS = (1.5, 1.6, 2.5, 2.6, 4.05, 4.55, 2.6)
ASSEMBLY_COUNTS = (8, 4, 8, 4, 8, 4, 1)
BA_CONFIGS = ("none", "c01", "split", "c02")

#: Tabulated equilibrium metrics of the unoptimized reference core.
REFERENCE_METRICS = {
    "f_q": 2.293,
    "f_dh": 1.570,
    "max_boron_ppm": 1265.2,
    "efpy": 4.9114,
    "lcoe": 14.6349,
}

#: Shuffling chains: fresh fuel enters at the C positions, migrates to B then
#: A positions over three cycles (C03 is a one-cycle batch).  Per chain:
#: (member position indices, fresh type index, relative discharge burnup).
_CHAINS = (
    ((0, 2, 4), 4, 33.0),    # C01 -> B01 -> A01
    ((1, 3, 5), 5, 35.0),    # C02 -> B02 -> A02
    ((6,), 6, 11.5),         # C03, replenished every cycle
)

_BA_BORON = {"none": 190.0, "c01": 28.0, "split": 12.0, "c02": 0.0}
_BA_FQ = {"none": 0.30, "c01": 0.11, "split": 0.05, "c02": 0.0}
_BA_FDH = {"none": 0.17, "c01": 0.06, "split": 0.025, "c02": 0.0}
_BA_CYCLE = {"none": 0.005, "c01": -0.003, "split": -0.0015, "c02": 0.0}

_BORON_SLOPE = 420.0       # ppm per wt% of batch-averaged enrichment
_FQ_SLOPE = 0.55           # peaking per wt% of C-vs-AB contrast
_FDH_SLOPE = 0.34
_CYCLE_ELASTICITY = 1.0    # relative cycle-length change per relative enrichment change
_BURNUP_EXPONENT = 0.25    # burnup sensitivity to the chain's fresh enrichment


@dataclass(frozen=True)
class CoreResponse:
    """Surrogate outputs for one core design."""

    cycle_days: float
    burnups: tuple[float, ...]        # discharge burnup per shuffling chain
    max_boron_ppm: float
    f_q: float
    f_dh: float


def _mean_enrichment(enrichments: np.ndarray) -> float:
    weights = np.array(ASSEMBLY_COUNTS, dtype=float)
    return float(np.dot(weights, enrichments) / weights.sum())


def _contrast(enrichments: np.ndarray) -> float:
    counts = np.array(ASSEMBLY_COUNTS, dtype=float)
    feed = np.dot(counts[4:], enrichments[4:]) / counts[4:].sum()
    burned = np.dot(counts[:4], enrichments[:4]) / counts[:4].sum()
    return float(feed - burned)


def reference_cycle_days(params: LcoeParameters = DEFAULT_LCOE_PARAMETERS) -> float:
    """Cycle length back-solved from the tabulated reference EFPY."""
    outage = params.refueling_outage_years + params.maintenance_outage_years
    t_lev = REFERENCE_METRICS["efpy"] / params.availability + outage
    return t_lev * 365.25 / params.n_batches


@lru_cache(maxsize=8)
def _burnup_scale(params: LcoeParameters = DEFAULT_LCOE_PARAMETERS) -> float:
    """Scale on the relative chain burnups pinning the reference LCOE."""
    t_cy = reference_cycle_days(params)
    enr = np.array([NOMINAL_ENRICHMENTS[c[1]] for c in _CHAINS])
    base = np.array([c[2] for c in _CHAINS])
    weights = chain_weights()
    probe = lcoe(t_cy, base, enr, params, weights)
    return (probe.lcoe - params.waste_cost) / (REFERENCE_METRICS["lcoe"] - params.waste_cost)


def chain_weights() -> np.ndarray:
    """Core mass fraction of each shuffling chain (sums to 1)."""
    counts = np.array(ASSEMBLY_COUNTS, dtype=float)
    return np.array([counts[list(members)].sum() for members, _, _ in _CHAINS]) / counts.sum()


@dataclass(frozen=True)
class CoreSurrogate:
    """Analytic core model anchored to the tabulated reference metrics."""

    params: LcoeParameters = DEFAULT_LCOE_PARAMETERS

    def respond(self, enrichments: np.ndarray, ba_config: str) -> CoreResponse:
        enrichments = np.asarray(enrichments, dtype=float)
        if enrichments.shape != (7,):
            raise DomainError(f"expected 7 enrichments, got shape {enrichments.shape}")
        if ba_config not in BA_CONFIGS:
            raise DomainError(f"unknown burnable-absorber configuration {ba_config!r}")

        e_bar = _mean_enrichment(enrichments)
        e_bar0 = _mean_enrichment(np.array(NOMINAL_ENRICHMENTS))
        rel = (e_bar - e_bar0) / e_bar0

        t_cy0 = reference_cycle_days(self.params)
        cycle_days = t_cy0 * (1.0 + _CYCLE_ELASTICITY * rel + _BA_CYCLE[ba_config])

        boron = (REFERENCE_METRICS["max_boron_ppm"]
                 + _BORON_SLOPE * (e_bar - e_bar0) + _BA_BORON[ba_config])

        contrast = _contrast(enrichments)
        contrast0 = _contrast(np.array(NOMINAL_ENRICHMENTS))
        f_q = REFERENCE_METRICS["f_q"] + _FQ_SLOPE * (contrast - contrast0) + _BA_FQ[ba_config]
        f_dh = REFERENCE_METRICS["f_dh"] + _FDH_SLOPE * (contrast - contrast0) + _BA_FDH[ba_config]

        scale = _burnup_scale(self.params)
        burnups = []
        for members, fresh, base in _CHAINS:
            fresh_rel = enrichments[fresh] / NOMINAL_ENRICHMENTS[fresh]
            burnups.append(base * scale * (cycle_days / t_cy0) * fresh_rel ** _BURNUP_EXPONENT)
        return CoreResponse(cycle_days=cycle_days, burnups=tuple(burnups),
                            max_boron_ppm=boron, f_q=f_q, f_dh=f_dh)


def enrichment_levels(nominal: float) -> tuple[float, ...]:
    """The 41-point grid nominal +/- 0.4 wt% in 0.02 steps."""
    return tuple(round(nominal + 0.02 * k, 8) for k in range(-20, 21))


def reference_design() -> np.ndarray:
    """Nominal enrichments with the absorber in the C02 batch."""
    return np.array(list(NOMINAL_ENRICHMENTS) + [float(BA_CONFIGS.index("c02"))])


@dataclass(frozen=True)
class SmrEvaluator:
    surrogate: CoreSurrogate

    def __call__(self, genes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        genes = np.asarray(genes, dtype=float)
        response = self.surrogate.respond(genes[:7], BA_CONFIGS[int(round(genes[7]))])
        params = self.surrogate.params
        fresh_enr = np.array([genes[:7][c[1]] for c in _CHAINS])
        breakdown = lcoe(response.cycle_days, np.array(response.burnups), fresh_enr,
                         params, chain_weights())
        objectives = np.array([breakdown.lcoe, response.max_boron_ppm, -breakdown.efpy])
        constraints = np.array([response.f_q, response.f_dh])
        return objectives, constraints

    def batch(self, genes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        rows = [self(row) for row in np.asarray(genes, dtype=float)]
        return np.array([r[0] for r in rows]), np.array([r[1] for r in rows])


def make_smr_problem(params: LcoeParameters = DEFAULT_LCOE_PARAMETERS) -> Problem:
    """The 8-variable discrete equilibrium-cycle design problem."""
    variables = [
        VariableSpec(name=f"enr_{name.lower()}", lower=levels[0], upper=levels[-1],
                     levels=levels)
        for name, levels in ((t, enrichment_levels(e))
                             for t, e in zip(ASSEMBLY_TYPES, NOMINAL_ENRICHMENTS))
    ]
    variables.append(VariableSpec(name="ba_config", lower=0.0, upper=3.0,
                                  levels=(0.0, 1.0, 2.0, 3.0)))
    evaluator = SmrEvaluator(CoreSurrogate(params))
    return Problem(
        variables=tuple(variables),
        n_objectives=3,
        evaluator=evaluator,
        batch_evaluator=evaluator.batch,
        constraints=(
            ConstraintSpec(name="f_q", limit=2.49, direction="<="),
            ConstraintSpec(name="f_dh", limit=1.5, direction="<="),
        ),
        name="smr-eq-cycle",
    )

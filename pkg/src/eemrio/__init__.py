"""Environmentally extended multiregional input-output analysis of offshore wind projects."""

from .errors import ConfigError, EemrioError
from .mrio import (
    DirectRequirements,
    FinalDemandShock,
    ImpactVector,
    SupplyUseTables,
    TotalRequirements,
    derive_direct_requirements,
    impact,
    leontief_inverse,
    split_in_state,
    top_sectors,
)
from .payback import (
    CarbonInputs,
    EconomicInputs,
    GridTrajectory,
    PaybackResult,
    SccSchedule,
    carbon_payback,
    economic_payback,
    evaluate_payback,
    scc_adjusted_payback,
)
from .satellite import (
    EmissionsFactors,
    EmissionsImpact,
    FacilityRecord,
    SatelliteAccount,
    emissions_factors,
    emissions_impact,
    regionalize,
)
from .scenario import ScenarioConfig, ScenarioResult, emit_choropleth_csv, run_scenario, validate_inputs
from .taxonomy import Region, RegionSectorIndex, Sector, build_index, load_index
from .windcost import CostBreakdown, CostParameters, ProjectSpec, build_shocks, estimate_costs, map_costs_to_naics

__version__ = "0.1.0"

__all__ = [
    "CarbonInputs",
    "ConfigError",
    "CostBreakdown",
    "CostParameters",
    "DirectRequirements",
    "EconomicInputs",
    "EemrioError",
    "EmissionsFactors",
    "EmissionsImpact",
    "FacilityRecord",
    "FinalDemandShock",
    "GridTrajectory",
    "ImpactVector",
    "PaybackResult",
    "ProjectSpec",
    "Region",
    "RegionSectorIndex",
    "SatelliteAccount",
    "ScenarioConfig",
    "ScenarioResult",
    "SccSchedule",
    "Sector",
    "SupplyUseTables",
    "TotalRequirements",
    "build_index",
    "build_shocks",
    "carbon_payback",
    "derive_direct_requirements",
    "economic_payback",
    "emissions_factors",
    "emissions_impact",
    "emit_choropleth_csv",
    "estimate_costs",
    "evaluate_payback",
    "impact",
    "leontief_inverse",
    "load_index",
    "map_costs_to_naics",
    "regionalize",
    "run_scenario",
    "scc_adjusted_payback",
    "split_in_state",
    "top_sectors",
]

"""Parametric balance-of-system cost surrogate for fixed-bottom offshore wind.

Costs come out in the 21 categories of the ORBIT cost report, each of which
maps onto a NAICS code and from there onto a final-demand shock.

Cost structure (all in million USD):

* capital expenditure: turbines (linear in installed MW), substructures
  (per turbine, linear in water depth), scour protection, array cable (per km
  of inter-array cable), export cable (cables x distance to landfall) and
  offshore substations (fixed per substation plus per MW);
* installation: vessel day rate x vessel days x weather-delay multiplier, with
  a mobilisation allowance per campaign so that per-MW installation cost falls
  as projects grow;
* soft costs: fixed fractions of the capex subtotal;
* project development: lump sums.
"""

from __future__ import annotations

import csv
import dataclasses
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import (
    InvalidSpecError,
    MissingParameterError,
    NoOperableWindowError,
    UnmappedCategoryError,
)
from .mrio import FinalDemandShock
from .taxonomy import RegionSectorIndex
from .vectors import fmt

CAPEX = ("Array System", "Export System", "Offshore Substation", "Scour Protection", "Substructure")
INSTALLATION = (
    "Array System Installation",
    "Export System Installation",
    "Offshore Substation Installation",
    "Scour Protection Installation",
    "Substructure Installation",
    "Turbine Installation",
)
TURBINES = "Turbines"
SOFT = ("Insurance", "Financing", "Contingency", "Commissioning", "Decommissioning")
DEVELOPMENT = ("Site Auction", "Site Assessment", "Construction Plan", "Installation Plan")
CATEGORIES = CAPEX + INSTALLATION + (TURBINES,) + SOFT + DEVELOPMENT


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectSpec:
    """Design specification of one project.

    ``n_turbines`` defaults to ``ceil(capacity_mw / turbine_rating_mw)``. An
    explicit count may also be the floor, which lets published layouts such as
    22 x 12 MW for a 268 MW lease be entered as reported.
    """

    name: str
    state: str
    capacity_mw: float
    turbine_rating_mw: float
    depth_m: float
    distance_to_landfall_km: float
    mean_windspeed_ms: float
    n_turbines: int | None = None

    def __post_init__(self) -> None:
        for f in ("capacity_mw", "turbine_rating_mw", "depth_m", "distance_to_landfall_km", "mean_windspeed_ms"):
            v = getattr(self, f)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise InvalidSpecError(f"{self.name}: {f} must be a positive number, got {v!r}")
        ratio = self.capacity_mw / self.turbine_rating_mw
        allowed = {math.floor(ratio), math.ceil(ratio)} - {0}
        if self.n_turbines is None:
            object.__setattr__(self, "n_turbines", math.ceil(ratio))
        elif self.n_turbines not in allowed:
            raise InvalidSpecError(
                f"{self.name}: {self.n_turbines} turbines of {self.turbine_rating_mw} MW "
                f"inconsistent with {self.capacity_mw} MW"
            )

    @property
    def installed_mw(self) -> float:
        return self.n_turbines * self.turbine_rating_mw


@dataclass(frozen=True)
class CostParameters:
    """Unit rates, durations and soft-cost fractions of the surrogate.

    Monetary values are million USD unless the name says otherwise.
    """

    # capital expenditure
    turbine_price_usd_per_kw: float
    substructure_base_musd: float
    substructure_per_m_depth_musd: float
    scour_per_turbine_musd: float
    array_cable_musd_per_km: float
    array_km_per_turbine: float
    export_cable_musd_per_km: float
    export_cable_capacity_mw: float
    substation_musd_per_mw: float
    substation_fixed_musd: float
    substation_capacity_mw: float
    # installation vessels
    turbine_vessel_musd_per_day: float
    heavy_lift_vessel_musd_per_day: float
    scour_vessel_musd_per_day: float
    cable_vessel_musd_per_day: float
    turbine_install_days: float
    substructure_install_days: float
    substructure_install_days_per_m: float
    scour_install_days: float
    array_lay_days_per_km: float
    export_lay_days_per_km: float
    substation_install_days: float
    mobilization_days: float
    transit_days_per_km: float
    # soft costs, fractions of the capex subtotal
    insurance_fraction: float
    financing_fraction: float
    contingency_fraction: float
    commissioning_fraction: float
    decommissioning_fraction: float
    # project development lump sums
    site_auction_musd: float
    site_assessment_musd: float
    construction_plan_musd: float
    installation_plan_musd: float
    units: Mapping[str, str] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        for name in self.names():
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"cost parameter {name} must be finite and >= 0, got {v}")
            if name.endswith("_fraction") and v >= 1:
                raise ValueError(f"soft-cost fraction {name} must be < 1, got {v}")
        for name in ("export_cable_capacity_mw", "substation_capacity_mw"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")

    @classmethod
    def names(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls) if f.name != "units"]

    def as_dict(self) -> dict[str, float]:
        return {n: getattr(self, n) for n in self.names()}

    def replace(self, **changes: float) -> CostParameters:
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_csv(cls, path: str | Path) -> CostParameters:
        """Load ``parameter,value,unit`` rows."""
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        values = {r["parameter"].strip(): float(r["value"]) for r in rows}
        units = {r["parameter"].strip(): (r.get("unit") or "").strip() for r in rows}
        for name in cls.names():
            if name not in values:
                raise MissingParameterError(name)
        unknown = set(values) - set(cls.names())
        if unknown:
            raise ValueError(f"{path}: unknown cost parameter(s) {sorted(unknown)}")
        return cls(**{n: values[n] for n in cls.names()}, units=units)

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["parameter", "value", "unit"])
            for n in self.names():
                w.writerow([n, repr(float(getattr(self, n))), self.units.get(n, "")])

    @classmethod
    def default(cls) -> CostParameters:
        """The shipped calibrated parameter set."""
        return cls.from_csv(resources.files("eemrio.data").joinpath("cost_params.csv"))


@dataclass(frozen=True, eq=False)
class WeatherSeries:
    """Hourly wind speed (m/s) and significant wave height (m)."""

    wind_ms: np.ndarray
    wave_m: np.ndarray

    def __post_init__(self) -> None:
        wind = np.asarray(self.wind_ms, dtype=float)
        wave = np.asarray(self.wave_m, dtype=float)
        if wind.ndim != 1 or wind.shape != wave.shape or wind.size == 0:
            raise ValueError("weather series must be two 1-d arrays of equal nonzero length")
        if (wind < 0).any() or (wave < 0).any() or not np.isfinite(wind).all() or not np.isfinite(wave).all():
            raise ValueError("weather values must be finite and nonnegative")
        object.__setattr__(self, "wind_ms", wind)
        object.__setattr__(self, "wave_m", wave)

    def __len__(self) -> int:
        return self.wind_ms.size

    @classmethod
    def from_csv(cls, path: str | Path) -> WeatherSeries:
        """Read ``timestamp,wind_ms,wave_m``."""
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        return cls([float(r["wind_ms"]) for r in rows], [float(r["wave_m"]) for r in rows])


@dataclass(frozen=True)
class OperabilityLimits:
    wind_ms: float = math.inf
    wave_m: float = math.inf


class CostBreakdown(dict):
    """``category -> million USD`` in canonical category order."""

    def __init__(self, data: Mapping[str, float] = ()) -> None:
        data = dict(data)
        order = [c for c in CATEGORIES if c in data] + [c for c in data if c not in CATEGORIES]
        super().__init__((c, float(data[c])) for c in order)
        for c, v in self.items():
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"cost of {c!r} must be finite and >= 0, got {v}")

    def total(self) -> float:
        return math.fsum(self.values())

    def turbine_cost(self) -> float:
        return self.get(TURBINES, 0.0)

    def installation_cost(self) -> float:
        """Everything except turbine manufacturing."""
        return math.fsum(v for c, v in self.items() if c != TURBINES)


# ---------------------------------------------------------------------------
# Cost estimation
# ---------------------------------------------------------------------------


def weather_delay_multiplier(weather: WeatherSeries, limits: OperabilityLimits = OperabilityLimits()) -> float:
    """Total hours divided by hours with wind and waves inside the limits."""
    operable = np.count_nonzero((weather.wind_ms <= limits.wind_ms) & (weather.wave_m <= limits.wave_m))
    if operable == 0:
        raise NoOperableWindowError("no hour of the weather series is within the operability limits")
    return len(weather) / operable


def estimate_costs(
    spec: ProjectSpec,
    params: CostParameters | None = None,
    weather: WeatherSeries | None = None,
    limits: OperabilityLimits = OperabilityLimits(),
) -> CostBreakdown:
    """Cost of ``spec`` per category.

    Without a weather series the delay multiplier is 1. Soft costs apply to
    the capex subtotal (turbines, substructures, electrical system, scour
    protection); the weather multiplier applies to vessel time only.
    """
    p = CostParameters.default() if params is None else params
    mult = 1.0 if weather is None else weather_delay_multiplier(weather, limits)
    n = spec.n_turbines
    mw = n * spec.turbine_rating_mw
    depth, dist = spec.depth_m, spec.distance_to_landfall_km

    n_export = math.ceil(mw / p.export_cable_capacity_mw) if mw > 0 else 0
    n_substations = math.ceil(mw / p.substation_capacity_mw) if mw > 0 else 0
    array_km = n * p.array_km_per_turbine
    export_km = n_export * dist

    c: dict[str, float] = {}
    c["Array System"] = p.array_cable_musd_per_km * array_km
    c["Export System"] = p.export_cable_musd_per_km * export_km
    c["Offshore Substation"] = n_substations * p.substation_fixed_musd + p.substation_musd_per_mw * mw
    c["Scour Protection"] = n * p.scour_per_turbine_musd
    c["Substructure"] = n * (p.substructure_base_musd + p.substructure_per_m_depth_musd * depth)

    def campaign(rate: float, days: float, units: float) -> float:
        if units == 0:
            return 0.0
        return rate * (p.mobilization_days + days) * mult

    transit = p.transit_days_per_km * dist
    c["Array System Installation"] = campaign(p.cable_vessel_musd_per_day, array_km * p.array_lay_days_per_km, array_km)
    c["Export System Installation"] = campaign(p.cable_vessel_musd_per_day, export_km * p.export_lay_days_per_km, export_km)
    c["Offshore Substation Installation"] = campaign(
        p.heavy_lift_vessel_musd_per_day, n_substations * p.substation_install_days, n_substations
    )
    c["Scour Protection Installation"] = campaign(p.scour_vessel_musd_per_day, n * p.scour_install_days, n)
    c["Substructure Installation"] = campaign(
        p.heavy_lift_vessel_musd_per_day,
        n * (p.substructure_install_days + p.substructure_install_days_per_m * depth + transit),
        n,
    )
    c["Turbine Installation"] = campaign(p.turbine_vessel_musd_per_day, n * (p.turbine_install_days + transit), n)

    c[TURBINES] = n * spec.turbine_rating_mw * p.turbine_price_usd_per_kw * 1000.0 / 1e6

    capex = math.fsum(c[k] for k in CAPEX + (TURBINES,))
    c["Insurance"] = p.insurance_fraction * capex
    c["Financing"] = p.financing_fraction * capex
    c["Contingency"] = p.contingency_fraction * capex
    c["Commissioning"] = p.commissioning_fraction * capex
    c["Decommissioning"] = p.decommissioning_fraction * capex

    c["Site Auction"] = p.site_auction_musd
    c["Site Assessment"] = p.site_assessment_musd
    c["Construction Plan"] = p.construction_plan_musd
    c["Installation Plan"] = p.installation_plan_musd
    return CostBreakdown(c)


# ---------------------------------------------------------------------------
# NAICS mapping and final-demand shocks
# ---------------------------------------------------------------------------


def naics3(code: str) -> str:
    code = code.strip()
    if len(code) < 3 or not code[:3].isdigit():
        raise ValueError(f"{code!r} is not a NAICS code")
    return code[:3]


def default_naics_map() -> dict[str, str]:
    return read_naics_map(resources.files("eemrio.data").joinpath("cost_naics_map.csv"))


def read_naics_map(path) -> dict[str, str]:
    """Read ``category,naics`` rows (NAICS at any depth of 3-6 digits)."""
    with open(path, newline="", encoding="utf-8") as fh:
        return {r["category"].strip(): r["naics"].strip() for r in csv.DictReader(fh)}


def map_costs_to_naics(costs: Mapping[str, float], mapping: Mapping[str, str]) -> dict[str, float]:
    """Aggregate category costs onto 3-digit NAICS sectors.

    Raises
    ------
    UnmappedCategoryError
        If a category has no entry in ``mapping``.
    """
    parts: dict[str, list[float]] = {}
    for category, value in costs.items():
        if category not in mapping:
            raise UnmappedCategoryError(category)
        parts.setdefault(naics3(mapping[category]), []).append(value)
    return {s: math.fsum(v) for s, v in sorted(parts.items())}


def build_shocks(
    spec: ProjectSpec,
    costs: CostBreakdown,
    mapping: Mapping[str, str],
    index: RegionSectorIndex,
    turbine_category: str = TURBINES,
) -> tuple[FinalDemandShock, FinalDemandShock]:
    """Place every cost in the project state, split into ``(installation, turbines)``.

    The turbine category is kept apart from the other categories because
    substructures land in the same 3-digit sector (333) but belong to the
    installation shock.
    """
    home = index.region_position(spec.state)
    shocks = []
    for label, part in (
        ("installation", {c: v for c, v in costs.items() if c != turbine_category}),
        ("turbines", {c: v for c, v in costs.items() if c == turbine_category}),
    ):
        values = np.zeros(index.n)
        for sector, v in map_costs_to_naics(part, mapping).items():
            values[index.flatten(home, index.sector_position(sector))] += v
        shocks.append(FinalDemandShock(values, index, label))
    return shocks[0], shocks[1]


def write_costs_csv(path: str | Path, costs: CostBreakdown, mapping: Mapping[str, str]) -> None:
    """Write ``category,naics3,value_musd,shock``."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["category", "naics3", "value_musd", "shock"])
        for category, value in costs.items():
            if category not in mapping:
                raise UnmappedCategoryError(category)
            shock = "turbines" if category == TURBINES else "installation"
            w.writerow([category, naics3(mapping[category]), fmt(value), shock])


# ---------------------------------------------------------------------------
# Reference projects
# ---------------------------------------------------------------------------


def read_projects(path) -> list[ProjectSpec]:
    """Read ``name,state,capacity_mw,turbine_rating_mw,n_turbines,depth_m,distance_km,windspeed_ms``."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for r in csv.DictReader(fh):
            n = (r.get("n_turbines") or "").strip()
            out.append(
                ProjectSpec(
                    name=r["name"].strip(),
                    state=r["state"].strip(),
                    capacity_mw=float(r["capacity_mw"]),
                    turbine_rating_mw=float(r["turbine_rating_mw"]),
                    depth_m=float(r["depth_m"]),
                    distance_to_landfall_km=float(r["distance_km"]),
                    mean_windspeed_ms=float(r["windspeed_ms"]),
                    n_turbines=int(n) if n else None,
                )
            )
    return out


def reference_projects() -> list[ProjectSpec]:
    """The five planned east-coast projects (RI, VA, MA, NY, MD)."""
    return read_projects(resources.files("eemrio.data").joinpath("projects.csv"))

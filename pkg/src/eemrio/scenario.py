"""End-to-end scenario evaluation: tables -> L -> satellite -> projects -> files.

A scenario is described by one YAML file. Relative paths in it resolve against
the directory holding the file. Keys::

    regions, sectors              taxonomy CSVs (required)
    use, supply                   supply/use tables, or
    a_matrix                      a ready direct-requirements matrix
    output                        total industry output (region,sector,value_musd);
                                  required with a_matrix, checked against supply otherwise
    national_inventory            national emissions by sector (required)
    inventory_code_column         column of national_inventory holding codes (default naics)
    concordance                   source_code,naics,weight bridge for the inventory
    facilities, proxy             facility records and spatial proxy (both optional;
                                  the proxy defaults to regional output shares)
    cost_params, cost_naics_map   default to the shipped calibrated data
    weather, operability          hourly weather CSV and {wind_ms, wave_m} limits
    projects                      CSV path or inline list of project mappings
    payback_inputs                per-project payback table
    grid_trajectory               grid intensity CSV, or a number (constant t/MWh)
    scc, scc_install_year         social-cost-of-carbon schedule and installation year
    r_osw                         plant lifecycle intensity, t/MWh (default 0)
    leontief_method               direct (default) or neumann
    top_k                         rows in the sector rankings (default 10)
    workers                       threads used to evaluate projects (default 4)
    out                           output directory (default ./out in the working directory)
"""

from __future__ import annotations

import csv
import json
import logging
import math
import os
import shutil
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np
import yaml

from . import mrio, payback, satellite, windcost
from .errors import ConfigError, EemrioError
from .mrio import (
    DirectRequirements,
    FinalDemandShock,
    ImpactVector,
    SupplyUseTables,
    TotalRequirements,
    impact,
    split_in_state,
    top_sectors,
)
from .satellite import EmissionsFactors, EmissionsImpact, SatelliteAccount
from .taxonomy import RegionSectorIndex, load_index
from .vectors import IndexedVector, fmt, read_vector, write_vector
from .windcost import CostBreakdown, CostParameters, OperabilityLimits, ProjectSpec, WeatherSeries

logger = logging.getLogger(__name__)

ADDITIVITY_RTOL = 1e-9
PATH_KEYS = (
    "regions", "sectors", "use", "supply", "a_matrix", "output", "national_inventory",
    "concordance", "facilities", "proxy", "cost_params", "cost_naics_map", "weather",
    "payback_inputs", "scc",
)


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


@dataclass
class ScenarioConfig:
    regions: Path
    sectors: Path
    national_inventory: Path
    projects: list[ProjectSpec]
    use: Path | None = None
    supply: Path | None = None
    a_matrix: Path | None = None
    output: Path | None = None
    inventory_code_column: str = "naics"
    concordance: Path | None = None
    facilities: Path | None = None
    proxy: Path | None = None
    cost_params: Path | None = None
    cost_naics_map: Path | None = None
    weather: Path | None = None
    operability: OperabilityLimits = field(default_factory=OperabilityLimits)
    payback_inputs: Path | None = None
    grid_trajectory: Path | float | None = None
    scc: Path | None = None
    scc_install_year: float = 0.0
    r_osw: float = 0.0
    leontief_method: str = "direct"
    top_k: int = 10
    workers: int = 4
    out: Path = Path("out")
    source: Path | None = None

    @classmethod
    def from_yaml(cls, path: str | Path) -> ScenarioConfig:
        path = Path(path)
        try:
            raw = yaml.safe_load(path.read_text(encoding="utf-8"))
        except (OSError, yaml.YAMLError) as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: expected a mapping at top level")
        return cls.from_mapping(raw, path.parent, source=path)

    @classmethod
    def from_mapping(cls, raw: dict[str, Any], base: Path, source: Path | None = None) -> ScenarioConfig:
        raw = dict(raw)
        where = source or base

        def resolve(v) -> Path:
            p = Path(v)
            return p if p.is_absolute() else base / p

        known = {f for f in cls.__dataclass_fields__ if f != "source"}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
        for key in ("regions", "sectors", "national_inventory", "projects"):
            if key not in raw:
                raise ConfigError(f"{where}: missing required key {key!r}")
        kwargs: dict[str, Any] = {}
        for key in PATH_KEYS:
            if raw.get(key) is not None:
                kwargs[key] = resolve(raw[key])
        grid = raw.get("grid_trajectory")
        if isinstance(grid, (int, float)):
            kwargs["grid_trajectory"] = float(grid)
        elif grid is not None:
            kwargs["grid_trajectory"] = resolve(grid)
        if "operability" in raw:
            lim = raw["operability"] or {}
            kwargs["operability"] = OperabilityLimits(
                float(lim.get("wind_ms", math.inf)), float(lim.get("wave_m", math.inf))
            )
        for key, conv in (
            ("inventory_code_column", str), ("scc_install_year", float), ("r_osw", float),
            ("leontief_method", str), ("top_k", int), ("workers", int),
        ):
            if raw.get(key) is not None:
                kwargs[key] = conv(raw[key])
        # without an explicit key, output goes to ./out under the working directory
        kwargs["out"] = resolve(raw["out"]) if raw.get("out") is not None else Path("out")
        kwargs["projects"] = _parse_projects(raw["projects"], resolve, where)
        if (kwargs.get("use") is None) != (kwargs.get("supply") is None):
            raise ConfigError(f"{where}: 'use' and 'supply' must be given together")
        if kwargs.get("use") is None and kwargs.get("a_matrix") is None:
            raise ConfigError(f"{where}: give either use/supply tables or a_matrix")
        if kwargs.get("a_matrix") is not None and kwargs.get("output") is None:
            raise ConfigError(f"{where}: a_matrix needs an 'output' vector")
        if kwargs.get("top_k", 10) < 1:
            raise ConfigError(f"{where}: top_k must be >= 1")
        return cls(source=source, **kwargs)


def _parse_projects(value, resolve: Callable[[Any], Path], where) -> list[ProjectSpec]:
    try:
        if isinstance(value, (str, os.PathLike)):
            projects = windcost.read_projects(resolve(value))
        elif isinstance(value, list):
            projects = []
            for item in value:
                item = dict(item)
                projects.append(
                    ProjectSpec(
                        name=str(item["name"]),
                        state=str(item["state"]),
                        capacity_mw=float(item["capacity_mw"]),
                        turbine_rating_mw=float(item["turbine_rating_mw"]),
                        depth_m=float(item["depth_m"]),
                        distance_to_landfall_km=float(item["distance_km"]),
                        mean_windspeed_ms=float(item["windspeed_ms"]),
                        n_turbines=int(item["n_turbines"]) if item.get("n_turbines") else None,
                    )
                )
        else:
            raise ConfigError(f"{where}: 'projects' must be a CSV path or a list")
    except (OSError, KeyError, ValueError, TypeError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{where}: bad project definition: {exc}") from exc
    if not projects:
        raise ConfigError(f"{where}: at least one project is required")
    names = [p.name for p in projects]
    if len(set(names)) != len(names):
        raise ConfigError(f"{where}: project names must be unique")
    return projects


# ---------------------------------------------------------------------------
# Loaded inputs
# ---------------------------------------------------------------------------


def _load(path: Path | None, fn, *args):
    """Call a reader, re-raising parse failures with the file name attached."""
    try:
        return fn(path, *args)
    except ConfigError:
        raise
    except (OSError, ValueError, KeyError, EemrioError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


@dataclass
class Inputs:
    index: RegionSectorIndex
    total_output: np.ndarray
    sut: SupplyUseTables | None
    a_matrix: DirectRequirements | None
    national: satellite.NationalInventory
    facilities: list[satellite.FacilityRecord]
    proxy: satellite.ProxyShares
    params: CostParameters
    naics_map: dict[str, str]
    weather: WeatherSeries | None
    payback_rows: dict[str, payback.PaybackRow]
    grid: payback.GridTrajectory | None
    scc: payback.SccSchedule | None


def load_inputs(cfg: ScenarioConfig) -> Inputs:
    """Read and parse every file named by ``cfg``; failures raise :class:`ConfigError`."""
    index = _load(cfg.regions, lambda p: load_index(p, cfg.sectors))
    sut = a = None
    if cfg.use is not None:
        use = _load(cfg.use, mrio.read_matrix, index)
        supply = _load(cfg.supply, mrio.read_matrix, index)
        g = _load(cfg.output, read_vector, index, "value_musd") if cfg.output else None
        sut = _load(cfg.use, lambda _p: SupplyUseTables(use, supply, index, industry_output=g))
        total_output = np.asarray(sut.industry_output)
    else:
        a = _load(cfg.a_matrix, mrio.read_direct_requirements, index)
        total_output = _load(cfg.output, read_vector, index, "value_musd")

    source = _load(cfg.national_inventory, satellite.read_national_inventory, cfg.inventory_code_column)
    if cfg.concordance is not None:
        links = _load(cfg.concordance, satellite.read_concordance)
        national = _load(cfg.concordance, lambda _p: satellite.apply_concordance(source, links))
    else:
        national = _load(cfg.national_inventory, lambda _p: satellite.NationalInventory(source))
    facilities = _load(cfg.facilities, satellite.read_facilities) if cfg.facilities else []
    proxy = (
        _load(cfg.proxy, satellite.read_proxy)
        if cfg.proxy
        else satellite.proxy_from_output(total_output, index)
    )

    params = _load(cfg.cost_params, CostParameters.from_csv) if cfg.cost_params else CostParameters.default()
    naics_map = _load(cfg.cost_naics_map, windcost.read_naics_map) if cfg.cost_naics_map else windcost.default_naics_map()
    weather = _load(cfg.weather, WeatherSeries.from_csv) if cfg.weather else None

    rows = {r.project: r for r in _load(cfg.payback_inputs, payback.read_payback_inputs)} if cfg.payback_inputs else {}
    if isinstance(cfg.grid_trajectory, float):
        grid = payback.GridTrajectory.constant(cfg.grid_trajectory)
    elif cfg.grid_trajectory is not None:
        grid = _load(cfg.grid_trajectory, payback.GridTrajectory.from_csv)
    else:
        grid = None
    scc = _load(cfg.scc, payback.SccSchedule.from_csv) if cfg.scc else None
    return Inputs(index, total_output, sut, a, national, facilities, proxy, params, naics_map, weather, rows, grid, scc)


# ---------------------------------------------------------------------------
# Results
# ---------------------------------------------------------------------------


@dataclass
class ProjectResult:
    spec: ProjectSpec
    costs: CostBreakdown
    shocks: dict[str, FinalDemandShock]
    impacts: dict[str, ImpactVector]
    emissions: dict[str, EmissionsImpact]
    economic_split: tuple[float, float]
    emissions_split: tuple[float, float]
    top_economic: list[tuple[str, str, float]]
    top_emissions: list[tuple[str, str, float]]
    payback: payback.PaybackResult | None = None
    epb_scc_years: float | None = None

    @property
    def cost_musd(self) -> float:
        return self.costs.total()

    @property
    def impact_musd(self) -> float:
        return self.impacts["total"].total()

    @property
    def emissions_mt(self) -> float:
        return self.emissions["total"].total()


@dataclass
class ScenarioResult:
    index: RegionSectorIndex
    L: TotalRequirements
    total_output: np.ndarray
    satellite: SatelliteAccount
    factors: EmissionsFactors
    projects: list[ProjectResult]

    def project(self, name: str) -> ProjectResult:
        for p in self.projects:
            if p.spec.name == name:
                return p
        raise KeyError(name)


# ---------------------------------------------------------------------------
# Pipeline stages
# ---------------------------------------------------------------------------


def direct_requirements(inputs: Inputs) -> DirectRequirements:
    if inputs.sut is not None:
        return mrio.derive_direct_requirements(inputs.sut)
    mrio.check_productive(inputs.a_matrix.A)
    return inputs.a_matrix


def total_requirements(inputs: Inputs, cfg: ScenarioConfig) -> TotalRequirements:
    A = direct_requirements(inputs)
    logger.info("factorizing n=%d total requirements (%s)", inputs.index.n, cfg.leontief_method)
    return mrio.leontief_inverse(A, cfg.leontief_method)


def satellite_account(inputs: Inputs) -> SatelliteAccount:
    return satellite.regionalize(inputs.national, inputs.facilities, inputs.proxy, inputs.index)


def project_costs(spec: ProjectSpec, inputs: Inputs, cfg: ScenarioConfig) -> CostBreakdown:
    return windcost.estimate_costs(spec, inputs.params, inputs.weather, cfg.operability)


def evaluate_project(
    spec: ProjectSpec,
    inputs: Inputs,
    cfg: ScenarioConfig,
    L: TotalRequirements,
    ef: EmissionsFactors,
    with_payback: bool = True,
) -> ProjectResult:
    index = inputs.index
    costs = project_costs(spec, inputs, cfg)
    inst, turb = windcost.build_shocks(spec, costs, inputs.naics_map, index)
    dx_inst, dx_turb = impact(L, inst), impact(L, turb)
    combined = impact(L, inst + turb)
    _audit_additivity(spec.name, dx_inst, dx_turb, combined)
    impacts = {"installation": dx_inst, "turbines": dx_turb, "total": dx_inst + dx_turb}
    de_inst = satellite.emissions_impact(ef, dx_inst)
    de_turb = satellite.emissions_impact(ef, dx_turb)
    emissions = {"installation": de_inst, "turbines": de_turb, "total": de_inst + de_turb}

    def ranked(vec: IndexedVector):
        return [(s.naics, s.name, v) for s, v in top_sectors(vec, cfg.top_k)]

    result = ProjectResult(
        spec=spec,
        costs=costs,
        shocks={"installation": inst, "turbines": turb},
        impacts=impacts,
        emissions=emissions,
        economic_split=split_in_state(impacts["total"], spec.state),
        emissions_split=split_in_state(emissions["total"], spec.state),
        top_economic=ranked(impacts["total"]),
        top_emissions=ranked(emissions["total"]),
    )
    row = inputs.payback_rows.get(spec.name)
    if with_payback and row is not None and inputs.grid is not None:
        econ = row.economic(c_i_musd=result.cost_musd)
        carbon = row.carbon(inputs.grid, em_lifetime_mt=result.emissions_mt, r_osw=cfg.r_osw)
        result.payback = payback.evaluate_payback(econ, carbon)
        if inputs.scc is not None:
            result.epb_scc_years = payback.scc_adjusted_payback(
                econ, result.emissions_mt, cfg.r_osw * econ.aep_mwh, inputs.scc, cfg.scc_install_year
            )
    return result


def _audit_additivity(name: str, a: ImpactVector, b: ImpactVector, combined: ImpactVector) -> None:
    parts = a.values + b.values
    scale = max(np.abs(combined.values).max(initial=0.0), 1e-300)
    err = np.abs(parts - combined.values).max(initial=0.0) / scale
    if err > ADDITIVITY_RTOL:
        raise EemrioError(f"{name}: shock additivity violated (relative error {err:.3e})")


def run_scenario(cfg: ScenarioConfig, inputs: Inputs | None = None) -> ScenarioResult:
    """Evaluate every project of ``cfg`` against one shared Leontief inverse."""
    inputs = load_inputs(cfg) if inputs is None else inputs
    L = total_requirements(inputs, cfg)
    sat = satellite_account(inputs)
    ef = satellite.emissions_factors(sat, inputs.total_output)
    with ThreadPoolExecutor(max_workers=max(1, cfg.workers)) as pool:
        projects = list(pool.map(lambda s: evaluate_project(s, inputs, cfg, L, ef), cfg.projects))
    for p in projects:
        logger.info(
            "%s: cost %.6g M$, impact %.6g M$, emissions %.6g t", p.spec.name, p.cost_musd, p.impact_musd, p.emissions_mt
        )
    return ScenarioResult(inputs.index, L, inputs.total_output, sat, ef, projects)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Finding:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"[{self.kind}] {self.message}"


def validate_inputs(cfg: ScenarioConfig) -> list[Finding]:
    """Every detectable input problem, without running the pipeline."""
    findings: list[Finding] = []

    def add(kind: str, msg: str) -> None:
        findings.append(Finding(kind, msg))

    try:
        index = load_index(cfg.regions, cfg.sectors)
    except (OSError, ValueError, EemrioError) as exc:
        add("taxonomy", f"{cfg.regions} / {cfg.sectors}: {exc}")
        return findings

    output = None
    if cfg.use is not None:
        try:
            use = mrio.read_matrix(cfg.use, index)
            supply = mrio.read_matrix(cfg.supply, index)
            g = read_vector(cfg.output, index, "value_musd") if cfg.output else supply.sum(axis=1)
            for name, m in (("use", use), ("supply", supply)):
                if (m < 0).any():
                    add("sut", f"{name} table has {int((m < 0).sum())} negative entries")
            for msg in mrio.balance_findings(use, supply, g, supply.sum(axis=0), index.labels(), index.labels()):
                add("sut-balance", msg)
            output = g
            use_ok = not (use < 0).any() and not (supply < 0).any()
            if use_ok and not any(f.kind == "sut-balance" for f in findings):
                try:
                    A = SupplyUseTables(use, supply, index, industry_output=g)
                    mrio.check_productive(A.market_shares() @ A.input_coefficients())
                except EemrioError as exc:
                    add("sut", str(exc))
        except (OSError, ValueError, EemrioError) as exc:
            add("sut", f"{cfg.use} / {cfg.supply}: {exc}")
    else:
        try:
            A = mrio.read_direct_requirements(cfg.a_matrix, index)
            mrio.check_productive(A.A)
        except (OSError, ValueError, EemrioError) as exc:
            add("a-matrix", f"{cfg.a_matrix}: {exc}")
        try:
            output = read_vector(cfg.output, index, "value_musd")
        except (OSError, ValueError, EemrioError) as exc:
            add("output", f"{cfg.output}: {exc}")
    if output is not None and (np.asarray(output) < 0).any():
        add("output", "total industry output has negative entries")

    _validate_satellite(cfg, index, output, add)
    _validate_projects(cfg, index, add)
    return findings


def _validate_satellite(cfg: ScenarioConfig, index: RegionSectorIndex, output, add) -> None:
    try:
        source = satellite.read_national_inventory(cfg.national_inventory, cfg.inventory_code_column)
        if cfg.concordance is not None:
            national = satellite.apply_concordance(source, satellite.read_concordance(cfg.concordance))
        else:
            national = satellite.NationalInventory(source)
    except (OSError, ValueError, EemrioError) as exc:
        add("satellite", f"{cfg.national_inventory}: {exc}")
        return
    for code, v in national.items():
        if not index.has_sector(code):
            add("taxonomy", f"national inventory sector {code!r} not in sector list")
        elif code == "WIND" and v > 0:
            add("satellite", "national inventory assigns emissions to the wind sector")

    facilities: list[satellite.FacilityRecord] = []
    if cfg.facilities is not None:
        try:
            facilities = satellite.read_facilities(cfg.facilities)
        except (OSError, ValueError) as exc:
            add("satellite", f"{cfg.facilities}: {exc}")
    for i, f in enumerate(facilities, start=2):
        if not index.has_region(f.region):
            add("taxonomy", f"{cfg.facilities.name} line {i}: facility region {f.region!r} not in region list")
        if not index.has_sector(f.sector):
            add("taxonomy", f"{cfg.facilities.name} line {i}: facility sector {f.sector!r} not in sector list")

    proxy = None
    if cfg.proxy is not None:
        try:
            proxy = satellite.read_proxy(cfg.proxy)
        except (OSError, ValueError) as exc:
            add("satellite", f"{cfg.proxy}: {exc}")
    elif output is not None:
        proxy = satellite.proxy_from_output(output, index)
    if proxy is not None:
        for sector, row in proxy.items():
            if not index.has_sector(sector):
                add("taxonomy", f"proxy sector {sector!r} not in sector list")
            for region in row:
                if not index.has_region(region):
                    add("taxonomy", f"proxy region {region!r} not in region list")
        covered: dict[str, float] = {}
        for f in facilities:
            covered[f.sector] = covered.get(f.sector, 0.0) + f.emissions
        for code, v in national.items():
            if v - covered.get(code, 0.0) > 0 and code not in proxy and index.has_sector(code):
                add("satellite", f"sector {code!r} has unallocated emissions but no proxy shares")


def _validate_projects(cfg: ScenarioConfig, index: RegionSectorIndex, add) -> None:
    try:
        mapping = windcost.read_naics_map(cfg.cost_naics_map) if cfg.cost_naics_map else windcost.default_naics_map()
    except (OSError, ValueError, KeyError) as exc:
        add("cost", f"{cfg.cost_naics_map}: {exc}")
        mapping = {}
    try:
        if cfg.cost_params is not None:
            CostParameters.from_csv(cfg.cost_params)
    except (OSError, ValueError, EemrioError) as exc:
        add("cost", f"{cfg.cost_params}: {exc}")
    for category in windcost.CATEGORIES:
        if mapping and category not in mapping:
            add("cost", f"cost category {category!r} has no NAICS mapping")
    for category, code in mapping.items():
        try:
            s3 = windcost.naics3(code)
        except ValueError as exc:
            add("cost", str(exc))
            continue
        if not index.has_sector(s3):
            add("taxonomy", f"cost category {category!r} maps to sector {s3} not in sector list")
    for spec in cfg.projects:
        if not index.has_region(spec.state):
            add("taxonomy", f"project {spec.name!r} state {spec.state!r} not in region list")
    for key in ("weather", "payback_inputs", "scc"):
        path = getattr(cfg, key)
        if path is not None and not Path(path).exists():
            add("config", f"{key} file {path} does not exist")
    if isinstance(cfg.grid_trajectory, Path) and not cfg.grid_trajectory.exists():
        add("config", f"grid_trajectory file {cfg.grid_trajectory} does not exist")


# ---------------------------------------------------------------------------
# Output files
# ---------------------------------------------------------------------------


def emit_choropleth_csv(
    path: str | Path, x: IndexedVector, home: str | None = None, exclude_home: bool = True
) -> list[tuple[str, float]]:
    """Write one ``region,value`` row per region (block sums), optionally without ``home``."""
    if exclude_home and home is None:
        raise ValueError("exclude_home needs a home region")
    if home is not None:
        x.index.region_position(home)
    rows = [
        (r.code, float(v))
        for r, v in zip(x.index.regions, x.by_region())
        if not (exclude_home and r.code == home)
    ]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["region", "value"])
        w.writerows([code, fmt(v)] for code, v in rows)
    return rows


SUMMARY_COLUMNS = (
    "project", "cost_musd", "impact_musd", "emissions_mt", "in_state_musd", "out_state_musd", "epb_years", "cpb_months",
)


def _opt(v: float | None) -> str:
    return "" if v is None else fmt(v)


def write_summary(path: Path, projects: list[ProjectResult]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for p in projects:
            pb = p.payback
            w.writerow([
                p.spec.name, fmt(p.cost_musd), fmt(p.impact_musd), fmt(p.emissions_mt),
                fmt(p.economic_split[0]), fmt(p.economic_split[1]),
                _opt(pb.economic_years if pb else None), _opt(pb.carbon_months if pb else None),
            ])


def write_payback_table(path: Path, rows: list[tuple[str, payback.PaybackResult | None, float | None]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["project", "epb_years", "cpb_months", "epb_scc_years", "en_annual_mwh", "en_offset_mwh"])
        for name, pb, scc in rows:
            if pb is None:
                w.writerow([name, "", "", _opt(scc), "", ""])
            else:
                w.writerow([name, fmt(pb.economic_years), fmt(pb.carbon_months), _opt(scc),
                            fmt(pb.en_annual_mwh), fmt(pb.en_offset_mwh)])


def _write_ranking(path: Path, rows: list[tuple[str, str, float]]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rank", "sector", "name", "value"])
        w.writerows([i, code, name, fmt(v)] for i, (code, name, v) in enumerate(rows, start=1))


def write_project_files(directory: Path, p: ProjectResult, naics_map: dict[str, str]) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    windcost.write_costs_csv(directory / "costs.csv", p.costs, naics_map)
    for label, vec in p.impacts.items():
        name = "impact.csv" if label == "total" else f"impact_{label}.csv"
        write_vector(directory / name, vec, "value_musd")
    for label, vec in p.emissions.items():
        name = "emissions.csv" if label == "total" else f"emissions_{label}.csv"
        write_vector(directory / name, vec, "emissions_mt")
    with open(directory / "split.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["quantity", "shock", "in_state", "out_of_state", "total"])
        for quantity, vecs in (("economic_musd", p.impacts), ("emissions_mt", p.emissions)):
            for label, vec in vecs.items():
                inside, outside = split_in_state(vec, p.spec.state)
                w.writerow([quantity, label, fmt(inside), fmt(outside), fmt(vec.total())])
    _write_ranking(directory / "top_sectors_economic.csv", p.top_economic)
    _write_ranking(directory / "top_sectors_emissions.csv", p.top_emissions)
    emit_choropleth_csv(directory / "choropleth_economic.csv", p.impacts["total"], p.spec.state, True)
    emit_choropleth_csv(directory / "choropleth_emissions.csv", p.emissions["total"], p.spec.state, True)


def result_json(result: ScenarioResult) -> dict[str, Any]:
    """Full-precision machine-readable summary."""
    def vec(v: IndexedVector) -> list[float]:
        return [float(x) for x in v.values]

    out: dict[str, Any] = {"index": result.index.labels(), "projects": {}}
    for p in result.projects:
        entry: dict[str, Any] = {
            "costs_musd": dict(p.costs),
            "cost_musd": p.cost_musd,
            "impact_musd": p.impact_musd,
            "emissions_mt": p.emissions_mt,
            "economic_split_musd": list(p.economic_split),
            "emissions_split_mt": list(p.emissions_split),
            "impacts_musd": {k: vec(v) for k, v in p.impacts.items()},
            "emissions_by_cell_mt": {k: vec(v) for k, v in p.emissions.items()},
        }
        if p.payback is not None:
            entry["payback"] = {
                "economic_years": p.payback.economic_years,
                "carbon_months": p.payback.carbon_months,
                "en_annual_mwh": p.payback.en_annual_mwh,
                "en_offset_mwh": p.payback.en_offset_mwh,
                "epb_scc_years": p.epb_scc_years,
            }
        out["projects"][p.spec.name] = entry
    return out


def write_outputs(out: Path, writer: Callable[[Path], None]) -> None:
    """Run ``writer`` against a staging directory, then move its files into ``out``.

    Nothing lands in ``out`` unless ``writer`` completes.
    """
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".staging-", dir=out))
    try:
        writer(staging)
        for src in sorted(staging.rglob("*")):
            if src.is_file():
                dst = out / src.relative_to(staging)
                dst.parent.mkdir(parents=True, exist_ok=True)
                os.replace(src, dst)
    finally:
        shutil.rmtree(staging, ignore_errors=True)


def write_scenario(out: Path, result: ScenarioResult, naics_map: dict[str, str]) -> None:
    def writer(d: Path) -> None:
        write_summary(d / "summary.csv", result.projects)
        write_vector(d / "satellite.csv", result.satellite, "emissions_mt")
        write_vector(d / "emissions_factors.csv", result.factors, "ef_mt_per_musd")
        write_payback_table(
            d / "payback.csv", [(p.spec.name, p.payback, p.epb_scc_years) for p in result.projects]
        )
        for p in result.projects:
            write_project_files(d / p.spec.name, p, naics_map)
        (d / "results.json").write_text(
            json.dumps(result_json(result), indent=1, sort_keys=True) + "\n", encoding="utf-8"
        )

    write_outputs(out, writer)

"""Economic and carbon payback periods.

Economic payback is the investment divided by net annual revenue::

    EPB = C_i / (AEP * P_s - C_op)                         [years]

Carbon payback is the time the plant must run before the grid emissions it
displaces equal the emissions embodied in building it::

    R_avoided = R_avgelec - R_osw                          [t / MWh]
    En_offset = Em_lifetime / R_avoided                    [MWh]
    CPB       = En_offset / En_annual                      [years, reported in months]

With a time-varying grid intensity the avoided emissions are accumulated month
by month instead; a constant trajectory reproduces the closed form.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np

from .errors import NeverPaysBackError, NonPositiveNetRevenueError

HOURS_PER_YEAR = 8760.0
DEFAULT_CAPACITY_FACTOR = 0.51
DEFAULT_LIFETIME_YEARS = 25.0


def annual_energy_mwh(capacity_mw: float, capacity_factor: float = DEFAULT_CAPACITY_FACTOR) -> float:
    return capacity_mw * HOURS_PER_YEAR * capacity_factor


# ---------------------------------------------------------------------------
# Inputs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EconomicInputs:
    """``c_i_musd`` investment, ``aep_mwh`` per year, ``p_s_usd_mwh`` price, ``c_op_musd`` per year."""

    c_i_musd: float
    aep_mwh: float
    p_s_usd_mwh: float
    c_op_musd: float

    def __post_init__(self) -> None:
        for name in ("c_i_musd", "aep_mwh", "p_s_usd_mwh", "c_op_musd"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {v}")

    @property
    def net_revenue_musd(self) -> float:
        return self.aep_mwh * self.p_s_usd_mwh / 1e6 - self.c_op_musd


@dataclass(frozen=True, eq=False)
class GridTrajectory:
    """Grid emissions intensity (t CO2-eq / MWh) against years of operation.

    Intensities are interpolated linearly between points and held constant
    after the last one.
    """

    year_offsets: np.ndarray
    intensities: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.year_offsets, dtype=float)
        r = np.asarray(self.intensities, dtype=float)
        if t.ndim != 1 or t.shape != r.shape or t.size == 0:
            raise ValueError("trajectory needs matching, nonempty year and intensity lists")
        if t[0] != 0 or np.any(np.diff(t) <= 0):
            raise ValueError("year offsets must start at 0 and increase strictly")
        if (r < 0).any() or not np.isfinite(r).all():
            raise ValueError("intensities must be finite and >= 0")
        object.__setattr__(self, "year_offsets", t)
        object.__setattr__(self, "intensities", r)

    @classmethod
    def constant(cls, intensity: float) -> GridTrajectory:
        return cls([0.0], [intensity])

    @classmethod
    def from_csv(cls, path: str | Path) -> GridTrajectory:
        """Read ``year_offset,intensity_t_per_mwh``."""
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        return cls([float(r["year_offset"]) for r in rows], [float(r["intensity_t_per_mwh"]) for r in rows])

    @property
    def is_constant(self) -> bool:
        return bool(np.all(self.intensities == self.intensities[0]))

    def at(self, years) -> np.ndarray:
        return np.interp(years, self.year_offsets, self.intensities)


@dataclass(frozen=True)
class CarbonInputs:
    em_lifetime_mt: float
    capacity_mw: float
    grid: GridTrajectory
    capacity_factor: float = DEFAULT_CAPACITY_FACTOR
    lifetime_years: float = DEFAULT_LIFETIME_YEARS
    r_osw: float = 0.0

    def __post_init__(self) -> None:
        if not 0 < self.capacity_factor <= 1:
            raise ValueError(f"capacity factor must lie in (0, 1], got {self.capacity_factor}")
        if not self.lifetime_years > 0:
            raise ValueError("lifetime must be positive")
        if not (self.em_lifetime_mt >= 0 and self.capacity_mw > 0 and self.r_osw >= 0):
            raise ValueError("emissions and intensity must be >= 0 and capacity > 0")

    @property
    def en_annual_mwh(self) -> float:
        return annual_energy_mwh(self.capacity_mw, self.capacity_factor)


@dataclass(frozen=True, eq=False)
class SccSchedule:
    """Social cost of carbon in USD per tonne by calendar year.

    Values between listed years are interpolated linearly; outside the listed
    range the nearest value is held. Converting a constant-dollar table to
    nominal dollars is left to the caller.
    """

    years: np.ndarray
    usd_per_tonne: np.ndarray

    def __post_init__(self) -> None:
        y = np.asarray(self.years, dtype=float)
        v = np.asarray(self.usd_per_tonne, dtype=float)
        if y.ndim != 1 or y.shape != v.shape or y.size == 0 or np.any(np.diff(y) <= 0):
            raise ValueError("SCC schedule needs strictly increasing years with one value each")
        if (v < 0).any():
            raise ValueError("SCC values must be >= 0")
        object.__setattr__(self, "years", y)
        object.__setattr__(self, "usd_per_tonne", v)

    @classmethod
    def constant(cls, usd_per_tonne: float) -> SccSchedule:
        return cls([0.0], [usd_per_tonne])

    @classmethod
    def from_csv(cls, path: str | Path) -> SccSchedule:
        """Read ``year,usd_per_tonne``."""
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        return cls([float(r["year"]) for r in rows], [float(r["usd_per_tonne"]) for r in rows])

    def __call__(self, year: float) -> float:
        return float(np.interp(year, self.years, self.usd_per_tonne))


@dataclass(frozen=True, eq=False)
class PaybackResult:
    economic_years: float
    carbon_months: float
    en_annual_mwh: float
    en_offset_mwh: float
    r_avoided: np.ndarray = field(repr=False)


# ---------------------------------------------------------------------------
# Economic payback
# ---------------------------------------------------------------------------


def economic_payback(inp: EconomicInputs) -> float:
    """Years to recover ``C_i`` from net revenue ``AEP * P_s - C_op``."""
    net = inp.net_revenue_musd
    if not net > 0:
        raise NonPositiveNetRevenueError(f"net annual revenue is {net:.6g} M$, payback undefined")
    return inp.c_i_musd / net


def scc_project_musd(
    install_emissions_mt: float,
    annual_op_emissions_mt: float,
    scc: SccSchedule,
    install_year: float,
    lifetime_years: int = int(DEFAULT_LIFETIME_YEARS),
) -> float:
    """Social cost of installation emissions plus each operating year's emissions, in M$."""
    usd = scc(install_year) * install_emissions_mt
    usd += math.fsum(scc(install_year + y) * annual_op_emissions_mt for y in range(1, lifetime_years + 1))
    return usd / 1e6


def scc_adjusted_payback(
    inp: EconomicInputs,
    install_emissions_mt: float,
    annual_op_emissions_mt: float,
    scc: SccSchedule,
    install_year: float = 0.0,
    lifetime_years: int = int(DEFAULT_LIFETIME_YEARS),
) -> float:
    """Economic payback with the project's social cost of carbon added to ``C_i``."""
    if install_emissions_mt < 0 or annual_op_emissions_mt < 0:
        raise ValueError("emissions must be >= 0")
    extra = scc_project_musd(install_emissions_mt, annual_op_emissions_mt, scc, install_year, lifetime_years)
    loaded = EconomicInputs(inp.c_i_musd + extra, inp.aep_mwh, inp.p_s_usd_mwh, inp.c_op_musd)
    return economic_payback(loaded)


# ---------------------------------------------------------------------------
# Carbon payback
# ---------------------------------------------------------------------------


def carbon_payback_closed_form(inp: CarbonInputs, intensity: float | None = None) -> float:
    """Months to offset ``Em_lifetime`` at a constant grid intensity."""
    r_avg = float(inp.grid.intensities[0]) if intensity is None else intensity
    if inp.em_lifetime_mt == 0:
        return 0.0
    r_avoided = r_avg - inp.r_osw
    if not r_avoided > 0:
        raise NeverPaysBackError(f"avoided emissions rate {r_avoided:.6g} t/MWh is not positive")
    en_offset = inp.em_lifetime_mt / r_avoided
    return 12.0 * en_offset / inp.en_annual_mwh


def carbon_payback_monthly(inp: CarbonInputs) -> tuple[float, np.ndarray]:
    """Accumulate avoided emissions month by month along the grid trajectory.

    Returns fractional months and the avoided-rate trace at month boundaries.
    Within a month the avoided rate is treated as linear (trapezoid rule).

    Raises
    ------
    NeverPaysBackError
        If the avoided rate reaches zero, or the plant's lifetime ends,
        before the construction emissions are offset.
    """
    n_months = int(math.ceil(inp.lifetime_years * 12))
    t = np.arange(n_months + 1) / 12.0
    r_avoided = inp.grid.at(t) - inp.r_osw
    if inp.em_lifetime_mt == 0:
        return 0.0, r_avoided[:1]
    per_month = inp.en_annual_mwh / 12.0
    cum = 0.0
    for m in range(n_months):
        r0, r1 = r_avoided[m], r_avoided[m + 1]
        if r0 <= 0 or r1 <= 0:
            break
        step = per_month * 0.5 * (r0 + r1)
        if cum + step >= inp.em_lifetime_mt:
            return m + (inp.em_lifetime_mt - cum) / step, r_avoided[: m + 2]
        cum += step
    raise NeverPaysBackError(
        f"offset {cum:.6g} of {inp.em_lifetime_mt:.6g} t before the avoided rate or lifetime ran out"
    )


def carbon_payback(inp: CarbonInputs, method: Literal["auto", "closed_form", "monthly"] = "auto") -> float:
    """Carbon payback in months.

    ``auto`` uses the closed form for a constant trajectory and monthly
    accumulation otherwise.
    """
    if method == "closed_form" or (method == "auto" and inp.grid.is_constant):
        return carbon_payback_closed_form(inp)
    if method in ("auto", "monthly"):
        return carbon_payback_monthly(inp)[0]
    raise ValueError(f"unknown method {method!r}")


def evaluate_payback(econ: EconomicInputs, carbon: CarbonInputs) -> PaybackResult:
    epb = economic_payback(econ)
    if carbon.grid.is_constant:
        cpb = carbon_payback_closed_form(carbon)
        trace = np.array([carbon.grid.intensities[0] - carbon.r_osw])
    else:
        cpb, trace = carbon_payback_monthly(carbon)
    en_annual = carbon.en_annual_mwh
    return PaybackResult(epb, cpb, en_annual, cpb / 12.0 * en_annual, trace)


# ---------------------------------------------------------------------------
# Per-project input table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PaybackRow:
    """One row of ``payback_inputs.csv``; blank investment/emissions cells are ``None``."""

    project: str
    c_i_musd: float | None
    aep_mwh: float | None
    p_s_usd_mwh: float
    c_op_musd: float
    em_lifetime_mt: float | None
    capacity_mw: float
    cf: float = DEFAULT_CAPACITY_FACTOR

    def economic(self, c_i_musd: float | None = None) -> EconomicInputs:
        c_i = self.c_i_musd if c_i_musd is None else c_i_musd
        if c_i is None:
            raise ValueError(f"{self.project}: no investment cost given")
        aep = self.aep_mwh if self.aep_mwh is not None else annual_energy_mwh(self.capacity_mw, self.cf)
        return EconomicInputs(c_i, aep, self.p_s_usd_mwh, self.c_op_musd)

    def carbon(self, grid: GridTrajectory, em_lifetime_mt: float | None = None, **kw) -> CarbonInputs:
        em = self.em_lifetime_mt if em_lifetime_mt is None else em_lifetime_mt
        if em is None:
            raise ValueError(f"{self.project}: no construction emissions given")
        return CarbonInputs(em, self.capacity_mw, grid, capacity_factor=self.cf, **kw)


PAYBACK_COLUMNS = ("project", "c_i_musd", "aep_mwh", "p_s_usd_mwh", "c_op_musd", "em_lifetime_mt", "capacity_mw", "cf")


def read_payback_inputs(path: str | Path) -> list[PaybackRow]:
    def opt(v: str | None) -> float | None:
        v = (v or "").strip()
        return float(v) if v else None

    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in PAYBACK_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"{path}: missing column(s) {', '.join(missing)}")
        for r in reader:
            cf = opt(r["cf"])
            out.append(
                PaybackRow(
                    project=r["project"].strip(),
                    c_i_musd=opt(r["c_i_musd"]),
                    aep_mwh=opt(r["aep_mwh"]),
                    p_s_usd_mwh=float(r["p_s_usd_mwh"]),
                    c_op_musd=float(r["c_op_musd"]),
                    em_lifetime_mt=opt(r["em_lifetime_mt"]),
                    capacity_mw=float(r["capacity_mw"]),
                    cf=DEFAULT_CAPACITY_FACTOR if cf is None else cf,
                )
            )
    return out

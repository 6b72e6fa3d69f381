"""Regional GHG satellite account, emissions factors and emissions impacts.

A national inventory (MT CO2-eq per sector) is pushed down to regions in two
passes per sector: large-facility records are summed where they sit, and
whatever the facilities do not cover is spread with a spatial proxy. When the
facilities over-cover the national total, their cells are scaled down so that
the national control total still holds.
"""

from __future__ import annotations

import csv
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    IndexMismatchError,
    NegativeOutputError,
    ProxyMissingForSectorError,
    UnknownRegionError,
    UnknownSectorError,
    UnknownSectorInFacilityError,
)
from .mrio import ImpactVector
from .taxonomy import RegionSectorIndex
from .vectors import IndexedVector, read_vector

SHARE_TOL = 1e-9


@dataclass(frozen=True)
class FacilityRecord:
    region: str
    sector: str
    emissions: float

    def __post_init__(self) -> None:
        if not self.emissions >= 0:
            raise ValueError(f"facility emissions must be >= 0, got {self.emissions}")


class NationalInventory(dict):
    """Mapping ``sector code -> MT CO2-eq / yr``; absent sectors are zero."""

    def __init__(self, data: Mapping[str, float] = (), **kw) -> None:
        super().__init__(data, **kw)
        for code, v in self.items():
            if not v >= 0:
                raise ValueError(f"national emissions for {code!r} must be >= 0, got {v}")

    def total(self) -> float:
        return math.fsum(self.values())


class ProxyShares(dict):
    """Mapping ``sector code -> {region code -> share}``, each row summing to one."""

    def __init__(self, data: Mapping[str, Mapping[str, float]] = ()) -> None:
        super().__init__({s: dict(row) for s, row in dict(data).items()})
        for sector, row in self.items():
            if any(not v >= 0 for v in row.values()):
                raise ValueError(f"proxy shares for {sector!r} must be nonnegative")
            total = math.fsum(row.values())
            if abs(total - 1.0) > SHARE_TOL:
                raise ValueError(f"proxy shares for {sector!r} sum to {total!r}, not 1")


class SatelliteAccount(IndexedVector):
    """Emissions in MT CO2-eq / yr per (region, sector)."""


class EmissionsFactors(IndexedVector):
    """MT CO2-eq per million USD of industry output."""


class EmissionsImpact(IndexedVector):
    """Induced emissions in MT CO2-eq."""

    def __add__(self, other: EmissionsImpact) -> EmissionsImpact:
        self._check(other)
        return EmissionsImpact(self.values + other.values, self.index)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def regionalize(
    national: Mapping[str, float],
    facilities: Iterable[FacilityRecord],
    proxy: Mapping[str, Mapping[str, float]],
    index: RegionSectorIndex,
) -> SatelliteAccount:
    """Distribute national sector totals over regions.

    For each sector, facility emissions are summed per region. A nonnegative
    residual (national minus facility coverage) is added using the sector's
    proxy shares; a negative residual rescales the facility cells to the
    national total instead. Wind sector cells are always zero.

    Raises
    ------
    UnknownSectorInFacilityError
        A facility points at a region or sector outside ``index``.
    ProxyMissingForSectorError
        A sector has a positive residual but no proxy row.
    """
    national = NationalInventory(national)
    proxy = ProxyShares(proxy)
    for code in national:
        index.sector_position(code)

    cells: dict[tuple[int, int], list[float]] = defaultdict(list)
    for f in facilities:
        if not (index.has_region(f.region) and index.has_sector(f.sector)):
            raise UnknownSectorInFacilityError(f.region, f.sector)
        cells[index.region_position(f.region), index.sector_position(f.sector)].append(f.emissions)

    out = np.zeros((index.n_regions, index.n_sectors))
    for s, sector in enumerate(index.sectors):
        target = float(national.get(sector.naics, 0.0))
        if sector.is_wind:
            if target > 0 or any(cells.get((r, s)) for r in range(index.n_regions)):
                raise ValueError("the wind sector carries no emissions")
            continue
        # fsum makes each cell independent of facility order
        covered = np.array([math.fsum(cells.get((r, s), ())) for r in range(index.n_regions)])
        residual = target - math.fsum(covered)
        if residual < 0:
            out[:, s] = covered * (target / math.fsum(covered))
        elif residual > 0:
            row = proxy.get(sector.naics)
            if row is None:
                raise ProxyMissingForSectorError(sector.naics)
            shares = np.zeros(index.n_regions)
            for region, share in row.items():
                if not index.has_region(region):
                    raise UnknownRegionError(region)
                shares[index.region_position(region)] = share
            out[:, s] = covered + residual * (shares / shares.sum())
        else:
            out[:, s] = covered
    return SatelliteAccount(out.ravel(), index)


def proxy_from_output(total_output: np.ndarray, index: RegionSectorIndex) -> ProxyShares:
    """Regional output shares per sector, the fallback spatial proxy.

    Sectors with zero national output get no row.
    """
    grid = np.asarray(total_output, dtype=float).reshape(index.n_regions, index.n_sectors)
    shares = {}
    for s, sector in enumerate(index.sectors):
        col = grid[:, s]
        tot = col.sum()
        if tot > 0:
            shares[sector.naics] = {r.code: float(v / tot) for r, v in zip(index.regions, col)}
    return ProxyShares(shares)


def apply_concordance(
    source: Mapping[str, float], concordance: Iterable[tuple[str, str, float]]
) -> NationalInventory:
    """Bridge source-classification totals (e.g. BEA codes) onto NAICS sectors.

    ``concordance`` rows are ``(source_code, naics, weight)``; the weights of
    each source code must sum to one so that totals are preserved.
    """
    links: dict[str, list[tuple[str, float]]] = defaultdict(list)
    for src, naics, w in concordance:
        if w < 0:
            raise ValueError(f"negative concordance weight for {src!r} -> {naics!r}")
        links[src].append((naics, float(w)))
    for src, row in links.items():
        total = math.fsum(w for _, w in row)
        if abs(total - 1.0) > SHARE_TOL:
            raise ValueError(f"concordance weights for {src!r} sum to {total!r}, not 1")
    parts: dict[str, list[float]] = defaultdict(list)
    for src, value in source.items():
        if src not in links:
            raise UnknownSectorError(src)
        for naics, w in links[src]:
            parts[naics].append(value * w)
    return NationalInventory({k: math.fsum(v) for k, v in parts.items()})


def emissions_factors(sat: SatelliteAccount, total_output) -> EmissionsFactors:
    """``ef = emissions / output`` where output is positive, else 0."""
    if isinstance(total_output, IndexedVector):
        sat.index.require_same(total_output.index)
        total_output = total_output.values
    x = np.asarray(total_output, dtype=float)
    if x.shape != sat.values.shape:
        raise IndexMismatchError(f"output of shape {x.shape} does not match satellite")
    if (x < 0).any():
        raise NegativeOutputError("total industry output must be nonnegative")
    ef = np.zeros_like(x)
    pos = x > 0
    ef[pos] = sat.values[pos] / x[pos]
    return EmissionsFactors(ef, sat.index)


def emissions_impact(ef: EmissionsFactors, dx: ImpactVector) -> EmissionsImpact:
    """Elementwise ``dE = ef * dx``."""
    ef.index.require_same(dx.index)
    return EmissionsImpact(ef.values * dx.values, ef.index)


# ---------------------------------------------------------------------------
# CSV I/O
# ---------------------------------------------------------------------------


def _rows(path: str | Path, required: tuple[str, ...]) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in required if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"{path}: missing column(s) {', '.join(missing)}")
        return [{k: (v or "").strip() for k, v in row.items()} for row in reader]


def read_national_inventory(path: str | Path, code_column: str = "naics") -> dict[str, float]:
    """Read ``<code_column>,emissions_mt``; repeated codes are summed."""
    parts: dict[str, list[float]] = defaultdict(list)
    for row in _rows(path, (code_column, "emissions_mt")):
        parts[row[code_column]].append(float(row["emissions_mt"]))
    return {k: math.fsum(v) for k, v in parts.items()}


def read_facilities(path: str | Path) -> list[FacilityRecord]:
    return [
        FacilityRecord(row["region"], row["naics"], float(row["emissions_mt"]))
        for row in _rows(path, ("region", "naics", "emissions_mt"))
    ]


def read_proxy(path: str | Path) -> ProxyShares:
    shares: dict[str, dict[str, float]] = defaultdict(dict)
    for row in _rows(path, ("naics", "region", "share")):
        shares[row["naics"]][row["region"]] = float(row["share"])
    return ProxyShares(shares)


def read_concordance(path: str | Path) -> list[tuple[str, str, float]]:
    return [
        (row["source_code"], row["naics"], float(row["weight"]))
        for row in _rows(path, ("source_code", "naics", "weight"))
    ]


def read_satellite(path: str | Path, index: RegionSectorIndex) -> SatelliteAccount:
    return SatelliteAccount(read_vector(path, index, "emissions_mt"), index)

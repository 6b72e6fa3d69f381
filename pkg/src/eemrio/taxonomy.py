"""Region and sector taxonomies and the flat region-major layout.

Every vector and matrix in the engine is laid out region-major: all sectors of
region 0, then all sectors of region 1, and so on. The block of a region is
therefore a contiguous slice, and ``A[block_of(r), block_of(s)]`` is the
inter-regional requirements block from ``s`` into ``r``.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import (
    DuplicateCodeError,
    EmptyTaxonomyError,
    IndexMismatchError,
    UnknownRegionError,
    UnknownSectorError,
)

WIND_CODE = "WIND"
_NAICS3 = re.compile(r"^[0-9]{3}$")


@dataclass(frozen=True)
class Region:
    code: str
    name: str = ""

    def __post_init__(self) -> None:
        if not self.code:
            raise ValueError("region code must be nonempty")


@dataclass(frozen=True)
class Sector:
    naics: str
    name: str = ""

    def __post_init__(self) -> None:
        if not (_NAICS3.match(self.naics) or self.naics == WIND_CODE):
            raise ValueError(f"sector code must be 3 digits or {WIND_CODE!r}, got {self.naics!r}")

    @property
    def is_wind(self) -> bool:
        return self.naics == WIND_CODE


@dataclass(frozen=True)
class RegionSectorIndex:
    """Bijection between ``(region, sector)`` pairs and positions ``0..n-1``."""

    regions: tuple[Region, ...]
    sectors: tuple[Sector, ...]
    _region_pos: dict[str, int] = field(init=False, repr=False, compare=False)
    _sector_pos: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "regions", tuple(self.regions))
        object.__setattr__(self, "sectors", tuple(self.sectors))
        if not self.regions or not self.sectors:
            raise EmptyTaxonomyError("region and sector lists must both be nonempty")
        object.__setattr__(self, "_region_pos", _positions(r.code for r in self.regions))
        object.__setattr__(self, "_sector_pos", _positions(s.naics for s in self.sectors))

    @property
    def n_regions(self) -> int:
        return len(self.regions)

    @property
    def n_sectors(self) -> int:
        return len(self.sectors)

    @property
    def n(self) -> int:
        return self.n_regions * self.n_sectors

    def region_position(self, region: Region | str) -> int:
        code = region.code if isinstance(region, Region) else region
        try:
            return self._region_pos[code]
        except KeyError:
            raise UnknownRegionError(code) from None

    def sector_position(self, sector: Sector | str) -> int:
        code = sector.naics if isinstance(sector, Sector) else sector
        try:
            return self._sector_pos[code]
        except KeyError:
            raise UnknownSectorError(code) from None

    def has_region(self, code: str) -> bool:
        return code in self._region_pos

    def has_sector(self, code: str) -> bool:
        return code in self._sector_pos

    def flatten(self, r: int, s: int) -> int:
        if not (0 <= r < self.n_regions and 0 <= s < self.n_sectors):
            raise IndexError(f"({r}, {s}) outside {self.n_regions}x{self.n_sectors} taxonomy")
        return r * self.n_sectors + s

    def unflatten(self, i: int) -> tuple[int, int]:
        if not 0 <= i < self.n:
            raise IndexError(f"flat position {i} outside [0, {self.n})")
        return divmod(i, self.n_sectors)

    def position(self, region: Region | str, sector: Sector | str) -> int:
        return self.flatten(self.region_position(region), self.sector_position(sector))

    def block_of(self, region: Region | str) -> range:
        """Half-open flat range covering every sector of ``region``."""
        start = self.region_position(region) * self.n_sectors
        return range(start, start + self.n_sectors)

    def sector_positions(self, sector: Sector | str) -> range:
        """Flat positions of one sector across all regions (strided)."""
        s = self.sector_position(sector)
        return range(s, self.n, self.n_sectors)

    def labels(self) -> list[str]:
        """``REGION:SECTOR`` label for each flat position."""
        return [f"{r.code}:{s.naics}" for r in self.regions for s in self.sectors]

    def pairs(self) -> list[tuple[Region, Sector]]:
        return [(r, s) for r in self.regions for s in self.sectors]

    def parse_label(self, label: str) -> int:
        region, sep, sector = label.strip().partition(":")
        if not sep:
            raise ValueError(f"label {label!r} is not of the form REGION:SECTOR")
        return self.position(region, sector)

    def require_same(self, other: RegionSectorIndex) -> None:
        if self != other:
            raise IndexMismatchError("operands are laid out on different region/sector indices")


def _positions(codes) -> dict[str, int]:
    out: dict[str, int] = {}
    for i, code in enumerate(codes):
        if code in out:
            raise DuplicateCodeError(code)
        out[code] = i
    return out


def build_index(regions: list[Region], sectors: list[Sector]) -> RegionSectorIndex:
    """Build the region-major index.

    Raises
    ------
    EmptyTaxonomyError
        If either list is empty.
    DuplicateCodeError
        If a region or sector code repeats.
    """
    return RegionSectorIndex(tuple(regions), tuple(sectors))


def read_regions(path: str | Path) -> list[Region]:
    rows = _read_csv(path, ("code", "name"))
    return [Region(row["code"].strip(), row["name"].strip()) for row in rows]


def read_sectors(path: str | Path) -> list[Sector]:
    rows = _read_csv(path, ("naics", "name"))
    return [Sector(row["naics"].strip(), row["name"].strip()) for row in rows]


def write_regions(path: str | Path, regions: list[Region]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["code", "name"])
        w.writerows([r.code, r.name] for r in regions)


def write_sectors(path: str | Path, sectors: list[Sector]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["naics", "name"])
        w.writerows([s.naics, s.name] for s in sectors)


def load_index(regions_csv: str | Path, sectors_csv: str | Path) -> RegionSectorIndex:
    return build_index(read_regions(regions_csv), read_sectors(sectors_csv))


def _read_csv(path: str | Path, required: tuple[str, ...]) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in required if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"{path}: missing column(s) {', '.join(missing)}")
        return list(reader)

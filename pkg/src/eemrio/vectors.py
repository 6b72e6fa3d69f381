"""Vectors laid out on a :class:`RegionSectorIndex` and their CSV form."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IndexMismatchError
from .taxonomy import Region, RegionSectorIndex, Sector

#: Significant digits used for every number written to a CSV.
CSV_SIG_DIGITS = 6


def fmt(value: float) -> str:
    """Format ``value`` with :data:`CSV_SIG_DIGITS` significant digits."""
    out = f"{float(value):.{CSV_SIG_DIGITS}g}"
    return "0" if out == "-0" else out


@dataclass(frozen=True, eq=False)
class IndexedVector:
    values: np.ndarray
    index: RegionSectorIndex

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=float)
        if v.shape != (self.index.n,):
            raise IndexMismatchError(
                f"vector of shape {v.shape} does not match index dimension {self.index.n}"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def total(self) -> float:
        return float(self.values.sum())

    def by_region(self) -> np.ndarray:
        """Block sums, one per region."""
        return self.values.reshape(self.index.n_regions, self.index.n_sectors).sum(axis=1)

    def by_sector(self) -> np.ndarray:
        """Sums across regions, one per sector."""
        return self.values.reshape(self.index.n_regions, self.index.n_sectors).sum(axis=0)

    def block(self, region: Region | str) -> np.ndarray:
        b = self.index.block_of(region)
        return self.values[b.start : b.stop]

    def __getitem__(self, key: tuple[Region | str, Sector | str]) -> float:
        region, sector = key
        return float(self.values[self.index.position(region, sector)])

    def _check(self, other: IndexedVector) -> None:
        self.index.require_same(other.index)


def read_vector(path: str | Path, index: RegionSectorIndex, value_column: str) -> np.ndarray:
    """Read ``region,sector,<value_column>`` rows into a dense vector.

    Cells absent from the file are zero.
    """
    out = np.zeros(index.n)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        cols = reader.fieldnames or []
        for c in ("region", "sector", value_column):
            if c not in cols:
                raise ValueError(f"{path}: missing column {c!r}")
        for row in reader:
            out[index.position(row["region"].strip(), row["sector"].strip())] += float(
                row[value_column]
            )
    return out


def write_vector(path: str | Path, vec: IndexedVector, value_column: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["region", "sector", value_column])
        for (region, sector), v in zip(vec.index.pairs(), vec.values):
            w.writerow([region.code, sector.naics, fmt(v)])

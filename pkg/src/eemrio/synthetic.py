"""Random but valid tables for tests, demos and performance checks."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .taxonomy import WIND_CODE, Region, RegionSectorIndex, Sector, build_index


def random_productive_matrix(
    n: int, rng: np.random.Generator, max_column_sum: float = 0.9, density: float = 1.0
) -> np.ndarray:
    """Nonnegative ``n x n`` matrix whose column sums are at most ``max_column_sum``."""
    A = rng.random((n, n))
    if density < 1.0:
        A *= rng.random((n, n)) < density
    sums = A.sum(axis=0)
    sums[sums == 0] = 1.0
    target = rng.uniform(0.0, max_column_sum, size=n)
    return A * (target / sums)


def random_sut(
    index: RegionSectorIndex, rng: np.random.Generator, secondary: float = 0.2, use_share: float = 0.6
) -> tuple[np.ndarray, np.ndarray]:
    """``(use, supply)`` with a dominant diagonal in supply and productive use."""
    n = index.n
    g = rng.uniform(50.0, 500.0, size=n)
    V = np.diag(g * (1.0 - secondary))
    if n > 1:
        off = rng.random((n, n)) * (1 - np.eye(n))
        off *= (g * secondary / off.sum(axis=1))[:, None]
        V = V + off
    else:
        V = np.diag(g)
    U = rng.random((n, n))
    U *= (rng.uniform(0.1, use_share, size=n) * g / U.sum(axis=0))[None, :]
    return U, V


#: 3-digit sectors receiving offshore wind project spending under the default cost map.
PROJECT_SECTORS = ("236", "237", "238", "333", "335", "522", "524", "531", "541", "624")


#: The 50 states, DC and Puerto Rico.
US_REGION_CODES = (
    "AL", "AK", "AZ", "AR", "CA", "CO", "CT", "DE", "DC", "FL", "GA", "HI", "ID", "IL", "IN", "IA", "KS", "KY",
    "LA", "ME", "MD", "MA", "MI", "MN", "MS", "MO", "MT", "NE", "NV", "NH", "NJ", "NM", "NY", "NC", "ND", "OH",
    "OK", "OR", "PA", "PR", "RI", "SC", "SD", "TN", "TX", "UT", "VT", "VA", "WA", "WV", "WI", "WY",
)


def taxonomy(
    n_regions: int, n_sectors: int, wind: bool = True, region_codes: Sequence[str] | None = None
) -> RegionSectorIndex:
    """``n_regions`` x ``n_sectors`` index.

    Regions are the first ``n_regions`` of ``region_codes``, or ``R00``,
    ``R01``, ... when none are given. Sector codes include
    :data:`PROJECT_SECTORS` when there is room, padded with other 3-digit
    codes; with ``wind`` the last sector is the wind sector.
    """
    if region_codes is None:
        region_codes = [f"R{r:02d}" for r in range(n_regions)]
    if len(region_codes) < n_regions:
        raise ValueError(f"need {n_regions} region codes, got {len(region_codes)}")
    regions = [Region(code, code) for code in region_codes[:n_regions]]
    k = n_sectors - (1 if wind else 0)
    codes = list(PROJECT_SECTORS[:k])
    filler = (f"{c:03d}" for c in range(100, 1000) if f"{c:03d}" not in PROJECT_SECTORS)
    codes += [next(filler) for _ in range(k - len(codes))]
    codes.sort()
    sectors = [Sector(c, f"Sector {c}") for c in codes]
    if wind:
        sectors.append(Sector(WIND_CODE, "Wind energy"))
    return build_index(regions, sectors)

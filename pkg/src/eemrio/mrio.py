"""Multiregional supply/use tables, Model D requirements and Leontief impacts.

The industry-by-industry direct-requirements matrix is built from supply and
use tables under the fixed product-sales-structure assumption::

    D[i, p] = V[i, p] / q[p]          market shares (industry x product)
    B[p, j] = U[p, j] / g[j]          input coefficients (product x industry)
    A       = D @ B                   industry x industry

Impacts of a final-demand shock follow ``dx = (I - A)^-1 dy``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
import pandas as pd
import scipy.linalg

from .errors import (
    DimensionMismatchError,
    NegativeEntryError,
    NeumannNotConvergedError,
    NonProductiveError,
    UnbalancedTablesError,
)
from .taxonomy import Region, RegionSectorIndex, Sector
from .vectors import IndexedVector, fmt

logger = logging.getLogger(__name__)

BALANCE_RTOL = 1e-6
RESIDUAL_ATOL = 1e-8
NEUMANN_TOL = 1e-10
NEUMANN_MAX_ITER = 10_000
DIRECT_MAX_N = 8192


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------


def _frozen_array(a, name: str) -> np.ndarray:
    arr = np.array(a, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class SupplyUseTables:
    """Supply (industry x product) and use (product x industry) flows in million USD.

    ``industry_output`` and ``product_output`` default to the row and column
    sums of ``supply``. When given explicitly they must agree with those sums
    to a relative tolerance of ``1e-6``.
    """

    use: np.ndarray
    supply: np.ndarray
    index: RegionSectorIndex
    product_index: RegionSectorIndex | None = None
    industry_output: np.ndarray | None = None
    product_output: np.ndarray | None = None

    def __post_init__(self) -> None:
        if self.product_index is None:
            object.__setattr__(self, "product_index", self.index)
        n_ind, n_prod = self.index.n, self.product_index.n
        use = _frozen_array(self.use, "use")
        supply = _frozen_array(self.supply, "supply")
        if use.shape != (n_prod, n_ind):
            raise DimensionMismatchError(f"use is {use.shape}, expected {(n_prod, n_ind)}")
        if supply.shape != (n_ind, n_prod):
            raise DimensionMismatchError(f"supply is {supply.shape}, expected {(n_ind, n_prod)}")
        for name, m, labels in (
            ("use", use, self.product_index.labels()),
            ("supply", supply, self.index.labels()),
        ):
            if (m < 0).any():
                r, c = np.argwhere(m < 0)[0]
                raise NegativeEntryError(f"{name} has negative entry {m[r, c]} in row {labels[r]}")
        object.__setattr__(self, "use", use)
        object.__setattr__(self, "supply", supply)

        g = supply.sum(axis=1) if self.industry_output is None else self.industry_output
        q = supply.sum(axis=0) if self.product_output is None else self.product_output
        g = _frozen_array(g, "industry_output")
        q = _frozen_array(q, "product_output")
        if g.shape != (n_ind,) or q.shape != (n_prod,):
            raise DimensionMismatchError("output vectors do not match table dimensions")
        object.__setattr__(self, "industry_output", g)
        object.__setattr__(self, "product_output", q)
        problems = self.balance_findings()
        if problems:
            raise UnbalancedTablesError("; ".join(problems))

    def balance_findings(self) -> list[str]:
        return balance_findings(
            self.use, self.supply, self.industry_output, self.product_output,
            self.index.labels(), self.product_index.labels(),
        )

    def market_shares(self) -> np.ndarray:
        """``D[i, p] = V[i, p] / q[p]``; columns of products with ``q = 0`` are zero."""
        return self.supply * _safe_inverse(self.product_output)[np.newaxis, :]

    def input_coefficients(self) -> np.ndarray:
        """``B[p, j] = U[p, j] / g[j]``; columns of industries with ``g = 0`` are zero."""
        return self.use * _safe_inverse(self.industry_output)[np.newaxis, :]


def balance_findings(use, supply, g, q, industry_labels, product_labels) -> list[str]:
    """Supply-balance and zero-output violations, one message per offending row or column."""
    out = []
    rows = supply.sum(axis=1)
    cols = supply.sum(axis=0)
    for i in np.flatnonzero(~_close(rows, g)):
        out.append(f"industry {industry_labels[i]}: supply row sum {rows[i]:.6g} != output {g[i]:.6g}")
    for p in np.flatnonzero(~_close(cols, q)):
        out.append(f"product {product_labels[p]}: supply column sum {cols[p]:.6g} != output {q[p]:.6g}")
    for j in np.flatnonzero((g == 0) & (use.sum(axis=0) > 0)):
        out.append(f"industry {industry_labels[j]}: zero output but nonzero intermediate use")
    return out


def _close(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    scale = np.maximum(np.abs(a), np.abs(b))
    return np.abs(a - b) <= BALANCE_RTOL * scale


def _safe_inverse(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=float)
    nz = x > 0
    out[nz] = 1.0 / x[nz]
    return out


@dataclass(frozen=True, eq=False)
class DirectRequirements:
    A: np.ndarray
    index: RegionSectorIndex

    def __post_init__(self) -> None:
        A = _frozen_array(self.A, "A")
        if A.shape != (self.index.n, self.index.n):
            raise DimensionMismatchError(f"A is {A.shape}, index has n={self.index.n}")
        if (A < 0).any():
            raise NegativeEntryError("direct requirements contain negative coefficients")
        object.__setattr__(self, "A", A)

    def block(self, row_region: Region | str, col_region: Region | str) -> np.ndarray:
        """Requirements of ``col_region`` industries on ``row_region`` industries."""
        r = self.index.block_of(row_region)
        c = self.index.block_of(col_region)
        return self.A[r.start : r.stop, c.start : c.stop]


@dataclass(frozen=True, eq=False)
class TotalRequirements:
    L: np.ndarray
    index: RegionSectorIndex
    method: str = "direct"
    iterations: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "L", _frozen_array(self.L, "L"))


class FinalDemandShock(IndexedVector):
    """Exogenous spending in million USD, e.g. ``label="installation"``."""

    def __init__(self, values, index: RegionSectorIndex, label: str = "") -> None:
        super().__init__(values, index)
        object.__setattr__(self, "label", label)
        if (self.values < 0).any():
            raise ValueError("final demand shock entries must be nonnegative")

    def __add__(self, other: FinalDemandShock) -> FinalDemandShock:
        self._check(other)
        label = "+".join(x for x in (self.label, other.label) if x)
        return FinalDemandShock(self.values + other.values, self.index, label)

    def scaled(self, c: float) -> FinalDemandShock:
        return FinalDemandShock(c * self.values, self.index, self.label)

    @classmethod
    def zeros(cls, index: RegionSectorIndex, label: str = "") -> FinalDemandShock:
        return cls(np.zeros(index.n), index, label)


class ImpactVector(IndexedVector):
    """Total (direct + indirect) industry output change in million USD."""

    def __add__(self, other: ImpactVector) -> ImpactVector:
        self._check(other)
        return ImpactVector(self.values + other.values, self.index)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def derive_direct_requirements(sut: SupplyUseTables) -> DirectRequirements:
    """Industry-by-industry ``A = D @ B`` (Model D, fixed product-sales structure).

    Raises
    ------
    NonProductiveError
        If the resulting ``A`` has spectral radius >= 1.
    """
    A = sut.market_shares() @ sut.input_coefficients()
    check_productive(A)
    return DirectRequirements(A, sut.index)


def check_productive(A: np.ndarray, *, max_iter: int = 5000) -> None:
    """Raise :class:`NonProductiveError` unless ``rho(A) < 1`` can be certified.

    Column sums below one are accepted outright. Otherwise Collatz-Wielandt
    bounds ``min (Ax)_i / x_i <= rho(A) <= max (Ax)_i / x_i`` (any ``x > 0``)
    are tightened by power iteration on ``(A + I) / 2`` until one side decides.
    """
    col = A.sum(axis=0)
    if A.size == 0 or np.all(col < 1.0):
        return
    offending = {int(j): float(col[j]) for j in np.flatnonzero(col >= 1.0)}
    x = np.ones(A.shape[0])
    for _ in range(max_iter):
        y = A @ x
        ratio = y / x
        upper, lower = ratio.max(), ratio.min()
        if upper < 1.0:
            return
        if lower >= 1.0:
            break
        x = 0.5 * (x + y)
        x /= x.max()
    else:
        raise NonProductiveError(
            f"could not certify spectral radius < 1 (bound {upper:.6g}); column sums >= 1 at {offending}",
            offending,
        )
    raise NonProductiveError(
        f"spectral radius >= {lower:.6g}; column sums >= 1 at {offending}", offending
    )


def leontief_inverse(
    a: DirectRequirements,
    method: Literal["direct", "neumann"] = "direct",
    *,
    tol: float = NEUMANN_TOL,
    max_iter: int = NEUMANN_MAX_ITER,
) -> TotalRequirements:
    """Total requirements ``L = (I - A)^-1``.

    ``method="direct"`` solves ``(I - A) L = I`` by LU factorization;
    ``method="neumann"`` sums ``I + A + A^2 + ...`` until the last term's
    largest entry drops below ``tol``.
    """
    A = a.A
    n = A.shape[0]
    check_productive(A)
    if method == "direct":
        if n > DIRECT_MAX_N:
            logger.warning("dense factorization of n=%d exceeds the %d design limit", n, DIRECT_MAX_N)
        M = np.eye(n) - A
        L = scipy.linalg.lu_solve(scipy.linalg.lu_factor(M, check_finite=False), np.eye(n))
        residual = np.abs(M @ L - np.eye(n)).max() if n else 0.0
        if residual >= RESIDUAL_ATOL:
            raise NonProductiveError(f"Leontief residual {residual:.3e} exceeds {RESIDUAL_ATOL}")
        return TotalRequirements(L, a.index, "direct", 0)
    if method == "neumann":
        L, k = neumann_series(A, tol=tol, max_iter=max_iter)
        return TotalRequirements(L, a.index, "neumann", k)
    raise ValueError(f"unknown method {method!r}")


def neumann_series(A: np.ndarray, *, tol: float = NEUMANN_TOL, max_iter: int = NEUMANN_MAX_ITER):
    """Partial sums of ``sum_k A^k``; returns ``(L, iterations)``."""
    n = A.shape[0]
    L = np.eye(n)
    term = np.eye(n)
    for k in range(1, max_iter + 1):
        term = A @ term
        L += term
        last = np.abs(term).max() if n else 0.0
        if last < tol:
            return L, k
        if not np.isfinite(last):
            break
    raise NeumannNotConvergedError(max_iter, float(last))


def impact(l: TotalRequirements, dy: FinalDemandShock) -> ImpactVector:
    """``dx = L @ dy``."""
    l.index.require_same(dy.index)
    return ImpactVector(l.L @ dy.values, l.index)


def split_in_state(x: IndexedVector, home: Region | str) -> tuple[float, float]:
    """``(in_state, out_of_state)`` totals; the parts sum to ``x.total()``."""
    total = x.total()
    in_state = float(x.block(home).sum())
    return in_state, total - in_state


def top_sectors(x: IndexedVector, k: int) -> list[tuple[Sector, float]]:
    """Sectors ranked by value aggregated over regions.

    Sorted descending, ties broken by sector code ascending. ``k`` larger than
    the number of sectors returns all of them.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    agg = x.by_sector()
    ranked = sorted(zip(x.index.sectors, agg), key=lambda t: (-t[1], t[0].naics))
    return [(s, float(v)) for s, v in ranked[:k]]


# ---------------------------------------------------------------------------
# CSV I/O
# ---------------------------------------------------------------------------


def read_matrix(
    path: str | Path, row_index: RegionSectorIndex, col_index: RegionSectorIndex | None = None
) -> np.ndarray:
    """Dense matrix with ``REGION:SECTOR`` row and column headers, reordered canonically."""
    col_index = row_index if col_index is None else col_index
    # header=None keeps duplicate labels visible (pandas would rename them)
    df = pd.read_csv(path, header=None, dtype=str, keep_default_na=False)
    rows = [row_index.parse_label(str(lbl)) for lbl in df.iloc[1:, 0]]
    cols = [col_index.parse_label(str(lbl)) for lbl in df.iloc[0, 1:]]
    if sorted(rows) != list(range(row_index.n)) or sorted(cols) != list(range(col_index.n)):
        raise DimensionMismatchError(f"{path}: headers do not cover the index exactly once")
    out = np.empty((row_index.n, col_index.n))
    out[np.ix_(rows, cols)] = df.iloc[1:, 1:].to_numpy(dtype=float)
    return out


def write_matrix(
    path: str | Path,
    M: np.ndarray,
    row_index: RegionSectorIndex,
    col_index: RegionSectorIndex | None = None,
    *,
    full_precision: bool = False,
) -> None:
    col_index = row_index if col_index is None else col_index
    to_str = repr if full_precision else fmt
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("," + ",".join(col_index.labels()) + "\n")
        for label, row in zip(row_index.labels(), M):
            fh.write(label + "," + ",".join(to_str(float(v)) for v in row) + "\n")


def read_sut(
    use_csv: str | Path, supply_csv: str | Path, index: RegionSectorIndex
) -> SupplyUseTables:
    return SupplyUseTables(read_matrix(use_csv, index), read_matrix(supply_csv, index), index)


def read_direct_requirements(path: str | Path, index: RegionSectorIndex) -> DirectRequirements:
    return DirectRequirements(read_matrix(path, index), index)

"""Exception hierarchy shared by every stage of the engine."""

from __future__ import annotations


class EemrioError(Exception):
    """Base class for all engine errors."""


# ---------------------------------------------------------------------------
# Taxonomy / indexing
# ---------------------------------------------------------------------------


class DuplicateCodeError(EemrioError, ValueError):
    def __init__(self, code: str) -> None:
        super().__init__(f"duplicate code {code!r}")
        self.code = code


class EmptyTaxonomyError(EemrioError, ValueError):
    pass


class UnknownRegionError(EemrioError, KeyError):
    def __init__(self, code: str) -> None:
        super().__init__(f"unknown region {code!r}")
        self.code = code

    def __str__(self) -> str:
        return self.args[0]


class UnknownSectorError(EemrioError, KeyError):
    def __init__(self, code: str) -> None:
        super().__init__(f"unknown sector {code!r}")
        self.code = code

    def __str__(self) -> str:
        return self.args[0]


class IndexMismatchError(EemrioError, ValueError):
    pass


# ---------------------------------------------------------------------------
# Linear algebra
# ---------------------------------------------------------------------------


class DimensionMismatchError(EemrioError, ValueError):
    pass


class NegativeEntryError(EemrioError, ValueError):
    """Raw supply/use data carried a negative flow."""


class UnbalancedTablesError(EemrioError, ValueError):
    """Supply totals disagree with the stated industry or product output."""


class NonProductiveError(EemrioError, ArithmeticError):
    def __init__(self, message: str, column_sums=None) -> None:
        super().__init__(message)
        self.column_sums = column_sums


class NeumannNotConvergedError(EemrioError, ArithmeticError):
    def __init__(self, iterations: int, residual: float) -> None:
        super().__init__(
            f"Neumann series did not converge after {iterations} iterations "
            f"(last term max {residual:.3e})"
        )
        self.iterations = iterations
        self.residual = residual


# ---------------------------------------------------------------------------
# Emissions
# ---------------------------------------------------------------------------


class UnknownSectorInFacilityError(EemrioError, KeyError):
    def __init__(self, region: str, sector: str) -> None:
        super().__init__(f"facility references unknown cell ({region!r}, {sector!r})")
        self.region = region
        self.sector = sector

    def __str__(self) -> str:
        return self.args[0]


class ProxyMissingForSectorError(EemrioError, KeyError):
    def __init__(self, sector: str) -> None:
        super().__init__(f"no proxy shares for sector {sector!r} with unallocated emissions")
        self.sector = sector

    def __str__(self) -> str:
        return self.args[0]


class NegativeOutputError(EemrioError, ValueError):
    pass


# ---------------------------------------------------------------------------
# Costs and payback
# ---------------------------------------------------------------------------


class InvalidSpecError(EemrioError, ValueError):
    pass


class MissingParameterError(EemrioError, KeyError):
    def __init__(self, name: str) -> None:
        super().__init__(f"missing cost parameter {name!r}")
        self.name = name

    def __str__(self) -> str:
        return self.args[0]


class UnmappedCategoryError(EemrioError, KeyError):
    def __init__(self, name: str) -> None:
        super().__init__(f"cost category {name!r} has no NAICS mapping")
        self.name = name

    def __str__(self) -> str:
        return self.args[0]


class NoOperableWindowError(EemrioError, ValueError):
    pass


class NonPositiveNetRevenueError(EemrioError, ValueError):
    pass


class NeverPaysBackError(EemrioError, ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# Orchestration
# ---------------------------------------------------------------------------


class ConfigError(EemrioError, ValueError):
    pass

"""Shared fixtures."""

from __future__ import annotations

import shutil
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from eemrio.taxonomy import Region, Sector, build_index

TOY_DIR = Path(str(resources.files("eemrio.data").joinpath("toy")))


def make_index(n_regions: int, n_sectors: int, wind: bool = False):
    """Regions R0.. and sectors 100, 101, ..., optionally ending in WIND."""
    regions = [Region(f"R{r}", f"Region {r}") for r in range(n_regions)]
    sectors = [Sector(f"{100 + s}", f"Sector {s}") for s in range(n_sectors)]
    if wind:
        sectors.append(Sector("WIND", "Wind"))
    return build_index(regions, sectors)


@pytest.fixture
def toy_dir(tmp_path: Path) -> Path:
    """Writable copy of the shipped two-region fixture."""
    dst = tmp_path / "toy"
    shutil.copytree(TOY_DIR, dst)
    return dst


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter) -> None:
    import sys

    module = sys.modules.get("test_acceptance")
    report = getattr(module, "REPORT", None)
    if not report:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(report):
        title, passed, detail = report[number]
        line = f"AC{number:<2} {'PASS' if passed else 'FAIL'}  {title}"
        terminalreporter.write_line(f"{line}  ({detail})" if detail else line)

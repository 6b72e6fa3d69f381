"""``eemrio`` command line.

Exit codes: 0 success, 1 invalid configuration or inputs, 2 runtime or numeric failure.
Logging goes to stderr; results go to files under ``--out`` and short reports to stdout.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import payback, satellite, scenario, windcost
from .errors import ConfigError, EemrioError
from .mrio import write_matrix
from .scenario import Inputs, ScenarioConfig
from .vectors import IndexedVector, fmt, write_vector

logger = logging.getLogger("eemrio")

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_validate(cfg: ScenarioConfig) -> int:
    findings = scenario.validate_inputs(cfg)
    for f in findings:
        print(f)
    if findings:
        logger.error("%d finding(s)", len(findings))
        return EXIT_INVALID
    print("ok: no findings")
    return EXIT_OK


def cmd_derive_a(cfg: ScenarioConfig) -> int:
    inputs = scenario.load_inputs(cfg)
    A = scenario.direct_requirements(inputs)

    def writer(d: Path) -> None:
        # full precision so the matrix can be fed back as ``a_matrix``
        write_matrix(d / "a_matrix.csv", A.A, A.index, full_precision=True)
        write_vector(d / "output.csv", IndexedVector(inputs.total_output, A.index), "value_musd")

    scenario.write_outputs(cfg.out, writer)
    print(f"a_matrix.csv: n={A.index.n}, max column sum {fmt(A.A.sum(axis=0).max(initial=0.0))}")
    return EXIT_OK


def cmd_satellite(cfg: ScenarioConfig) -> int:
    inputs = scenario.load_inputs(cfg)
    sat = scenario.satellite_account(inputs)
    ef = satellite.emissions_factors(sat, inputs.total_output)

    def writer(d: Path) -> None:
        write_vector(d / "satellite.csv", sat, "emissions_mt")
        write_vector(d / "emissions_factors.csv", ef, "ef_mt_per_musd")

    scenario.write_outputs(cfg.out, writer)
    print(f"satellite.csv: total {fmt(sat.total())} t")
    return EXIT_OK


def cmd_cost(cfg: ScenarioConfig) -> int:
    inputs = scenario.load_inputs(cfg)
    costs = [(p, scenario.project_costs(p, inputs, cfg)) for p in cfg.projects]

    def writer(d: Path) -> None:
        with open(d / "costs_summary.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["project", "cost_musd", "turbine_musd", "installation_musd"])
            for p, c in costs:
                w.writerow([p.name, fmt(c.total()), fmt(c.turbine_cost()), fmt(c.installation_cost())])
        for p, c in costs:
            (d / p.name).mkdir()
            windcost.write_costs_csv(d / p.name / "costs.csv", c, inputs.naics_map)

    scenario.write_outputs(cfg.out, writer)
    for p, c in costs:
        print(f"{p.name}: {fmt(c.total())} M$")
    return EXIT_OK


def cmd_impact(cfg: ScenarioConfig) -> int:
    inputs = scenario.load_inputs(cfg)
    L = scenario.total_requirements(inputs, cfg)
    ef = satellite.emissions_factors(scenario.satellite_account(inputs), inputs.total_output)
    results = [scenario.evaluate_project(p, inputs, cfg, L, ef, with_payback=False) for p in cfg.projects]

    def writer(d: Path) -> None:
        scenario.write_summary(d / "summary.csv", results)
        for r in results:
            scenario.write_project_files(d / r.spec.name, r, inputs.naics_map)

    scenario.write_outputs(cfg.out, writer)
    for r in results:
        print(f"{r.spec.name}: impact {fmt(r.impact_musd)} M$, emissions {fmt(r.emissions_mt)} t")
    return EXIT_OK


def _payback_rows(cfg: ScenarioConfig, inputs: Inputs):
    """Payback per project from the input table, computing missing C_i or emissions."""
    if inputs.grid is None:
        raise ConfigError("payback needs 'grid_trajectory'")
    if not inputs.payback_rows:
        raise ConfigError("payback needs 'payback_inputs'")
    need = [r for r in inputs.payback_rows.values() if r.c_i_musd is None or r.em_lifetime_mt is None]
    computed: dict[str, scenario.ProjectResult] = {}
    if need:
        specs = {p.name: p for p in cfg.projects}
        missing = [r.project for r in need if r.project not in specs]
        if missing:
            raise ConfigError(f"payback rows {missing} have blank inputs and no matching project")
        L = scenario.total_requirements(inputs, cfg)
        ef = satellite.emissions_factors(scenario.satellite_account(inputs), inputs.total_output)
        for r in need:
            computed[r.project] = scenario.evaluate_project(specs[r.project], inputs, cfg, L, ef, with_payback=False)
    out = []
    for name, row in inputs.payback_rows.items():
        res = computed.get(name)
        c_i = row.c_i_musd if row.c_i_musd is not None else res.cost_musd
        em = row.em_lifetime_mt if row.em_lifetime_mt is not None else res.emissions_mt
        econ = row.economic(c_i)
        carbon = row.carbon(inputs.grid, em, r_osw=cfg.r_osw)
        pb = payback.evaluate_payback(econ, carbon)
        scc = None
        if inputs.scc is not None:
            scc = payback.scc_adjusted_payback(econ, em, cfg.r_osw * econ.aep_mwh, inputs.scc, cfg.scc_install_year)
        out.append((name, pb, scc))
    return out


def cmd_payback(cfg: ScenarioConfig) -> int:
    inputs = scenario.load_inputs(cfg)
    rows = _payback_rows(cfg, inputs)
    scenario.write_outputs(cfg.out, lambda d: scenario.write_payback_table(d / "payback.csv", rows))
    for name, pb, _ in rows:
        print(f"{name}: EPB {fmt(pb.economic_years)} yr, CPB {fmt(pb.carbon_months)} months")
    return EXIT_OK


def cmd_run(cfg: ScenarioConfig) -> int:
    inputs = scenario.load_inputs(cfg)
    result = scenario.run_scenario(cfg, inputs)
    scenario.write_scenario(cfg.out, result, inputs.naics_map)
    with open(Path(cfg.out) / "summary.csv", encoding="utf-8") as fh:
        sys.stdout.write(fh.read())
    return EXIT_OK


COMMANDS = {
    "validate": (cmd_validate, "check every input file without running the pipeline"),
    "derive-a": (cmd_derive_a, "derive the direct requirements matrix from supply/use tables"),
    "satellite": (cmd_satellite, "regionalize the emissions inventory and compute emissions factors"),
    "cost": (cmd_cost, "estimate project cost breakdowns"),
    "impact": (cmd_impact, "economic and emissions impacts per project"),
    "payback": (cmd_payback, "economic, carbon and SCC-adjusted payback"),
    "run": (cmd_run, "full pipeline"),
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eemrio", description="Multiregional economic and emissions impacts of offshore wind projects.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="<subcommand>")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--config", required=True, type=Path, help="scenario YAML file")
        p.add_argument("--out", type=Path, help="output directory (overrides the config)")
        p.add_argument("--top-k", type=int, help="rows in sector rankings (overrides the config)")
        level = p.add_mutually_exclusive_group()
        level.add_argument("--quiet", "-q", action="store_true", help="errors only")
        level.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.ERROR if args.quiet else logging.DEBUG if args.verbose else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)
    try:
        cfg = ScenarioConfig.from_yaml(args.config)
        if args.out is not None:
            cfg.out = args.out
        if args.top_k is not None:
            if args.top_k < 1:
                raise ConfigError("--top-k must be >= 1")
            cfg.top_k = args.top_k
        return COMMANDS[args.command][0](cfg)
    except ConfigError as exc:
        logger.error("%s", exc)
        return EXIT_INVALID
    except (EemrioError, ArithmeticError, ValueError, KeyError, OSError, np.linalg.LinAlgError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())

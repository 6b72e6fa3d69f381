"""End-to-end scenario runs, validation, choropleth export and the CLI."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np
import pytest
import yaml

from eemrio import cli
from eemrio.errors import ConfigError, NonPositiveNetRevenueError
from eemrio.mrio import ImpactVector, split_in_state
from eemrio.scenario import (
    ScenarioConfig,
    emit_choropleth_csv,
    load_inputs,
    run_scenario,
    validate_inputs,
    write_scenario,
)
from eemrio.vectors import IndexedVector, fmt

from conftest import make_index


def read_rows(path: Path) -> list[dict[str, str]]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def edit_config(toy_dir: Path, **changes) -> Path:
    cfg = yaml.safe_load((toy_dir / "config.yaml").read_text())
    for k, v in changes.items():
        if v is None:
            cfg.pop(k, None)
        else:
            cfg[k] = v
    path = toy_dir / "edited.yaml"
    path.write_text(yaml.safe_dump(cfg))
    return path


def run_to(config: Path, out: Path):
    cfg = ScenarioConfig.from_yaml(config)
    cfg.out = out
    inputs = load_inputs(cfg)
    result = run_scenario(cfg, inputs)
    write_scenario(out, result, inputs.naics_map)
    return result


# ===================================================================
# Toy fixture, end to end
# ===================================================================


class TestToyScenario:
    @pytest.fixture
    def result(self, toy_dir, tmp_path):
        return run_to(toy_dir / "config.yaml", tmp_path / "out")

    def test_full_output_set(self, result, tmp_path) -> None:
        out = tmp_path / "out"
        top = {"summary.csv", "satellite.csv", "emissions_factors.csv", "payback.csv", "results.json", "TOY"}
        assert {p.name for p in out.iterdir()} == top
        per_project = {
            "costs.csv", "impact.csv", "impact_installation.csv", "impact_turbines.csv", "emissions.csv",
            "emissions_installation.csv", "emissions_turbines.csv", "split.csv", "top_sectors_economic.csv",
            "top_sectors_emissions.csv", "choropleth_economic.csv", "choropleth_emissions.csv",
        }
        assert {p.name for p in (out / "TOY").iterdir()} == per_project

    def test_impacts_match_inverse_oracle(self, result, toy_dir) -> None:
        U = np.loadtxt(toy_dir / "use.csv", delimiter=",", skiprows=1, usecols=range(1, 7))
        g = np.array([1000, 500, 400, 800, 1200, 600], dtype=float)
        L = np.linalg.inv(np.eye(6) - U / g)
        p = result.project("TOY")
        for label, shock in p.shocks.items():
            np.testing.assert_allclose(p.impacts[label].values, L @ shock.values, rtol=1e-12)

    def test_shocks_land_in_home_state(self, result) -> None:
        p = result.project("TOY")
        assert not p.shocks["installation"].block("PA").any()
        assert p.shocks["turbines"]["VA", "333"] == pytest.approx(p.costs.turbine_cost(), rel=1e-15)
        total = p.shocks["installation"].total() + p.shocks["turbines"].total()
        assert total == pytest.approx(p.cost_musd, rel=1e-15)

    def test_conservation_audits(self, result, toy_dir) -> None:
        p = result.project("TOY")
        np.testing.assert_allclose(
            p.impacts["total"].values, (p.impacts["installation"] + p.impacts["turbines"]).values, rtol=1e-15
        )
        for label in ("installation", "turbines"):
            np.testing.assert_allclose(
                p.emissions[label].values, result.factors.values * p.impacts[label].values, rtol=1e-15
            )
        national = {"237": 200000.0, "333": 400000.0, "335": 150000.0}
        for s, v in zip(result.index.sectors, result.satellite.by_sector()):
            assert v == pytest.approx(national[s.naics], rel=1e-12)
        for vec in list(p.impacts.values()) + list(p.emissions.values()):
            inside, outside = split_in_state(vec, "VA")
            assert inside + outside == pytest.approx(vec.total(), rel=1e-12)

    def test_payback_uses_computed_cost_and_emissions(self, result) -> None:
        p = result.project("TOY")
        aep = 120 * 8760 * 0.51
        assert p.payback.economic_years == pytest.approx(p.cost_musd / (aep * 100 / 1e6 - 12), rel=1e-12)
        assert p.payback.carbon_months == pytest.approx(12 * p.emissions_mt / 0.35 / aep, rel=1e-12)
        assert p.epb_scc_years > p.payback.economic_years

    def test_csv_totals_reconcile_as_formatted(self, result, tmp_path) -> None:
        p = result.project("TOY")
        [row] = read_rows(tmp_path / "out" / "summary.csv")
        assert row["cost_musd"] == fmt(p.cost_musd)
        assert row["impact_musd"] == fmt(p.impact_musd)
        assert row["emissions_mt"] == fmt(p.emissions_mt)
        assert row["in_state_musd"] == fmt(p.economic_split[0])
        assert row["out_state_musd"] == fmt(p.economic_split[1])
        assert row["epb_years"] == fmt(p.payback.economic_years)
        split = {(r["quantity"], r["shock"]): r for r in read_rows(tmp_path / "out" / "TOY" / "split.csv")}
        assert split["economic_musd", "total"]["total"] == fmt(p.impact_musd)
        assert split["emissions_mt", "turbines"]["total"] == fmt(p.emissions["turbines"].total())
        choropleth = read_rows(tmp_path / "out" / "TOY" / "choropleth_economic.csv")
        assert choropleth == [{"region": "PA", "value": fmt(p.economic_split[1])}]

    def test_results_json_full_precision(self, result, tmp_path) -> None:
        data = json.loads((tmp_path / "out" / "results.json").read_text())
        assert data["projects"]["TOY"]["impact_musd"] == result.project("TOY").impact_musd
        assert data["index"] == result.index.labels()

    def test_top_sectors_file(self, result, tmp_path) -> None:
        rows = read_rows(tmp_path / "out" / "TOY" / "top_sectors_economic.csv")
        assert [r["rank"] for r in rows] == ["1", "2", "3"]
        values = [float(r["value"]) for r in rows]
        assert values == sorted(values, reverse=True)

    def test_byte_identical_reruns(self, toy_dir, tmp_path) -> None:
        run_to(toy_dir / "config.yaml", tmp_path / "a")
        run_to(toy_dir / "config.yaml", tmp_path / "b")
        files_a = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
        files_b = sorted(p.relative_to(tmp_path / "b") for p in (tmp_path / "b").rglob("*") if p.is_file())
        assert files_a == files_b
        for rel in files_a:
            assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes(), rel


class TestConcurrentProjects:
    PROJECTS = [
        {"name": f"P{i}", "state": state, "capacity_mw": mw, "turbine_rating_mw": 12, "depth_m": 25,
         "distance_km": 30, "windspeed_ms": 8}
        for i, (state, mw) in enumerate([("VA", 120), ("PA", 600), ("VA", 1200), ("PA", 48), ("VA", 360)])
    ]

    def test_worker_count_does_not_change_output(self, toy_dir, tmp_path) -> None:
        outs = []
        for workers in (1, 4):
            cfg = edit_config(toy_dir, projects=self.PROJECTS, workers=workers, payback_inputs=None)
            result = run_to(cfg, tmp_path / f"w{workers}")
            assert [p.spec.name for p in result.projects] == [f"P{i}" for i in range(5)]
            outs.append(tmp_path / f"w{workers}")
        for path in outs[0].rglob("*"):
            if path.is_file():
                assert path.read_bytes() == (outs[1] / path.relative_to(outs[0])).read_bytes()


# ===================================================================
# Configuration
# ===================================================================


class TestScenarioConfig:
    def test_relative_paths_resolve_against_config(self, toy_dir) -> None:
        cfg = ScenarioConfig.from_yaml(toy_dir / "config.yaml")
        assert cfg.use == toy_dir / "use.csv"
        assert cfg.grid_trajectory == 0.35
        assert [p.name for p in cfg.projects] == ["TOY"]

    def test_zero_projects(self, toy_dir) -> None:
        with pytest.raises(ConfigError, match="at least one project"):
            ScenarioConfig.from_yaml(edit_config(toy_dir, projects=[]))

    def test_unknown_key(self, toy_dir) -> None:
        with pytest.raises(ConfigError, match="unknown key"):
            ScenarioConfig.from_yaml(edit_config(toy_dir, colour="blue"))

    def test_use_without_supply(self, toy_dir) -> None:
        with pytest.raises(ConfigError):
            ScenarioConfig.from_yaml(edit_config(toy_dir, supply=None))

    def test_missing_file_named(self, toy_dir) -> None:
        cfg = ScenarioConfig.from_yaml(edit_config(toy_dir, national_inventory="nope.csv"))
        with pytest.raises(ConfigError, match="nope.csv"):
            load_inputs(cfg)

    def test_a_matrix_input(self, toy_dir, tmp_path) -> None:
        assert cli.main(["derive-a", "--config", str(toy_dir / "config.yaml"), "--out", str(toy_dir), "-q"]) == 0
        cfg = edit_config(toy_dir, use=None, supply=None, a_matrix="a_matrix.csv")
        via_a = run_to(cfg, tmp_path / "a").project("TOY")
        via_sut = run_to(toy_dir / "config.yaml", tmp_path / "s").project("TOY")
        np.testing.assert_allclose(via_a.impacts["total"].values, via_sut.impacts["total"].values, rtol=1e-14)


class TestAtomicOutput:
    def test_failure_writes_nothing(self, toy_dir, tmp_path) -> None:
        rows = (toy_dir / "payback_inputs.csv").read_text().replace("TOY,,,100,12", "TOY,,,1,12")
        (toy_dir / "payback_inputs.csv").write_text(rows)
        cfg = ScenarioConfig.from_yaml(toy_dir / "config.yaml")
        out = tmp_path / "out"
        cfg.out = out
        with pytest.raises(NonPositiveNetRevenueError):
            run_scenario(cfg)
        assert not out.exists() or not any(out.iterdir())

    def test_writer_failure_leaves_directory_clean(self, tmp_path) -> None:
        from eemrio.scenario import write_outputs

        def writer(d: Path) -> None:
            (d / "partial.csv").write_text("x\n")
            raise RuntimeError("boom")

        with pytest.raises(RuntimeError):
            write_outputs(tmp_path / "out", writer)
        assert list((tmp_path / "out").iterdir()) == []


# ===================================================================
# Choropleth export
# ===================================================================


class TestEmitChoropleth:
    def test_single_region_excluded(self, tmp_path) -> None:
        rows = emit_choropleth_csv(tmp_path / "c.csv", IndexedVector([1.0, 2.0], make_index(1, 2)), "R0", True)
        assert rows == []
        assert (tmp_path / "c.csv").read_text() == "region,value\n"

    def test_block_sums_without_home(self, tmp_path) -> None:
        x = ImpactVector([1, 2, 3, 4, 5, 6], make_index(3, 2))
        emit_choropleth_csv(tmp_path / "c.csv", x, "R0", True)
        assert (tmp_path / "c.csv").read_text() == "region,value\nR1,7\nR2,11\n"

    def test_conservation_with_home(self, tmp_path, rng) -> None:
        x = IndexedVector(rng.uniform(0, 100, 12), make_index(4, 3))
        rows = emit_choropleth_csv(tmp_path / "c.csv", x, exclude_home=False)
        assert sum(v for _, v in rows) == pytest.approx(x.total(), rel=1e-14)
        assert len(rows) == 4

    def test_exclude_needs_home(self, tmp_path) -> None:
        with pytest.raises(ValueError):
            emit_choropleth_csv(tmp_path / "c.csv", IndexedVector([1.0], make_index(1, 1)))


# ===================================================================
# Validation
# ===================================================================


class TestValidateInputs:
    def test_clean_fixture(self, toy_dir) -> None:
        assert validate_inputs(ScenarioConfig.from_yaml(toy_dir / "config.yaml")) == []

    def test_supply_row_off_by_five_percent(self, toy_dir) -> None:
        lines = (toy_dir / "supply.csv").read_text().splitlines()
        lines[2] = lines[2].replace(",500,", ",525,")
        (toy_dir / "supply.csv").write_text("\n".join(lines) + "\n")
        findings = validate_inputs(ScenarioConfig.from_yaml(toy_dir / "config.yaml"))
        assert len(findings) == 1
        assert findings[0].kind == "sut-balance"
        assert "VA:333" in findings[0].message

    def test_facility_in_unknown_region(self, toy_dir) -> None:
        with open(toy_dir / "facilities.csv", "a") as fh:
            fh.write("NJ,333,100\n")
        findings = validate_inputs(ScenarioConfig.from_yaml(toy_dir / "config.yaml"))
        assert len(findings) == 1
        assert findings[0].kind == "taxonomy" and "NJ" in findings[0].message

    def test_project_in_unknown_state(self, toy_dir) -> None:
        (toy_dir / "projects.csv").write_text(
            (toy_dir / "projects.csv").read_text().replace("TOY,VA", "TOY,NJ")
        )
        findings = validate_inputs(ScenarioConfig.from_yaml(toy_dir / "config.yaml"))
        assert [f.kind for f in findings] == ["taxonomy"]

    def test_negative_use_entry(self, toy_dir) -> None:
        lines = (toy_dir / "use.csv").read_text().splitlines()
        lines[1] = lines[1].replace("VA:237,100,", "VA:237,-100,")
        (toy_dir / "use.csv").write_text("\n".join(lines) + "\n")
        findings = validate_inputs(ScenarioConfig.from_yaml(toy_dir / "config.yaml"))
        assert any(f.kind == "sut" and "negative" in f.message for f in findings)

    def test_unmapped_category(self, toy_dir) -> None:
        text = (toy_dir / "cost_naics_map.csv").read_text().replace("Insurance,237\n", "")
        (toy_dir / "cost_naics_map.csv").write_text(text)
        findings = validate_inputs(ScenarioConfig.from_yaml(toy_dir / "config.yaml"))
        assert [f.kind for f in findings] == ["cost"] and "Insurance" in findings[0].message


# ===================================================================
# Command line
# ===================================================================


class TestCli:
    def test_validate_clean(self, toy_dir, capsys) -> None:
        assert cli.main(["validate", "--config", str(toy_dir / "config.yaml")]) == 0
        assert "no findings" in capsys.readouterr().out

    def test_validate_dirty_exit_one(self, toy_dir, capsys) -> None:
        with open(toy_dir / "facilities.csv", "a") as fh:
            fh.write("NJ,333,100\n")
        assert cli.main(["validate", "--config", str(toy_dir / "config.yaml")]) == 1
        assert "NJ" in capsys.readouterr().out

    def test_run_prints_summary(self, toy_dir, tmp_path, capsys) -> None:
        out = tmp_path / "out"
        assert cli.main(["run", "--config", str(toy_dir / "config.yaml"), "--out", str(out), "--top-k", "2", "-q"]) == 0
        stdout = capsys.readouterr().out
        assert stdout.startswith("project,cost_musd,impact_musd,emissions_mt,in_state_musd,out_state_musd")
        assert len(read_rows(out / "TOY" / "top_sectors_emissions.csv")) == 2

    @pytest.mark.parametrize(
        "command, files",
        [
            ("derive-a", {"a_matrix.csv", "output.csv"}),
            ("satellite", {"satellite.csv", "emissions_factors.csv"}),
            ("cost", {"costs_summary.csv", "TOY"}),
            ("impact", {"summary.csv", "TOY"}),
            ("payback", {"payback.csv"}),
        ],
    )
    def test_stage_subcommands(self, toy_dir, tmp_path, command, files) -> None:
        out = tmp_path / command
        assert cli.main([command, "--config", str(toy_dir / "config.yaml"), "--out", str(out), "-q"]) == 0
        assert {p.name for p in out.iterdir()} == files

    def test_payback_stage_matches_run(self, toy_dir, tmp_path) -> None:
        cli.main(["run", "--config", str(toy_dir / "config.yaml"), "--out", str(tmp_path / "run"), "-q"])
        cli.main(["payback", "--config", str(toy_dir / "config.yaml"), "--out", str(tmp_path / "pb"), "-q"])
        assert (tmp_path / "run" / "payback.csv").read_bytes() == (tmp_path / "pb" / "payback.csv").read_bytes()

    def test_bad_config_exit_one(self, tmp_path) -> None:
        (tmp_path / "c.yaml").write_text("regions: r.csv\n")
        assert cli.main(["run", "--config", str(tmp_path / "c.yaml"), "-q"]) == 1

    def test_numeric_failure_exit_two(self, toy_dir, tmp_path) -> None:
        rows = (toy_dir / "payback_inputs.csv").read_text().replace("TOY,,,100,12", "TOY,,,1,12")
        (toy_dir / "payback_inputs.csv").write_text(rows)
        assert cli.main(["run", "--config", str(toy_dir / "config.yaml"), "--out", str(tmp_path / "o"), "-q"]) == 2

    def test_non_productive_exit_two(self, toy_dir, tmp_path) -> None:
        lines = (toy_dir / "use.csv").read_text().splitlines()
        lines[1] = "VA:237,990,990,990,990,990,990"
        (toy_dir / "use.csv").write_text("\n".join(lines) + "\n")
        assert cli.main(["derive-a", "--config", str(toy_dir / "config.yaml"), "--out", str(tmp_path / "o"), "-q"]) == 2

    def test_top_k_must_be_positive(self, toy_dir) -> None:
        assert cli.main(["run", "--config", str(toy_dir / "config.yaml"), "--top-k", "0", "-q"]) == 1

    def test_logging_goes_to_stderr(self, toy_dir, tmp_path, capsys) -> None:
        cli.main(["impact", "--config", str(toy_dir / "config.yaml"), "--out", str(tmp_path / "o"), "--verbose"])
        captured = capsys.readouterr()
        assert "factorizing" in captured.err
        assert "factorizing" not in captured.out

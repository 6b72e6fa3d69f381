"""Acceptance gate: ten criteria, one PASS/FAIL line each in the terminal summary."""

from __future__ import annotations

import contextlib
import math
import time
from importlib import resources

import numpy as np
import pytest

from eemrio.calibration import INSTALLATION_DOMINANT, PUBLISHED_TOTALS_MUSD
from eemrio.mrio import (
    DirectRequirements,
    FinalDemandShock,
    SupplyUseTables,
    derive_direct_requirements,
    impact,
    leontief_inverse,
    split_in_state,
)
from eemrio.payback import (
    CarbonInputs,
    EconomicInputs,
    GridTrajectory,
    SccSchedule,
    carbon_payback,
    carbon_payback_closed_form,
    carbon_payback_monthly,
    economic_payback,
    read_payback_inputs,
    scc_adjusted_payback,
)
from eemrio.satellite import FacilityRecord, emissions_factors, proxy_from_output, regionalize
from eemrio.scenario import Inputs, ScenarioConfig, evaluate_project, load_inputs, run_scenario, write_scenario
from eemrio.synthetic import US_REGION_CODES, random_productive_matrix, random_sut, taxonomy
from eemrio.windcost import CostParameters, ProjectSpec, default_naics_map, estimate_costs, reference_projects

from conftest import make_index

DATA = resources.files("eemrio.data")

#: criterion number -> (title, passed, detail); printed by the conftest summary hook
REPORT: dict[int, tuple[str, bool, str]] = {}


@contextlib.contextmanager
def criterion(number: int, title: str):
    detail: list[str] = []
    try:
        yield detail
    except BaseException as exc:
        REPORT[number] = (title, False, f"{type(exc).__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
        print(f"AC{number} FAIL {title}")
        raise
    REPORT[number] = (title, True, "; ".join(detail))
    print(f"AC{number} PASS {title} {'; '.join(detail)}")


# ===================================================================
# 1. Leontief correctness
# ===================================================================


def test_ac1_leontief_correctness() -> None:
    with criterion(1, "Leontief residual and direct/Neumann agreement") as detail:
        rng = np.random.default_rng(1)
        start = time.perf_counter()
        worst_residual = worst_gap = 0.0
        for _ in range(100):
            n = int(rng.integers(1, 201))
            A = random_productive_matrix(n, rng, max_column_sum=0.9)
            assert A.sum(axis=0).max() <= 0.9
            a = DirectRequirements(A, make_index(1, n))
            L = leontief_inverse(a, "direct").L
            Ln = leontief_inverse(a, "neumann").L
            worst_residual = max(worst_residual, np.abs((np.eye(n) - A) @ L - np.eye(n)).max())
            worst_gap = max(worst_gap, np.abs(L - Ln).max())
        elapsed = time.perf_counter() - start
        assert worst_residual < 1e-8
        assert worst_gap < 1e-8
        assert elapsed < 30.0
        detail += [f"residual {worst_residual:.1e}", f"gap {worst_gap:.1e}", f"{elapsed:.1f} s"]


# ===================================================================
# 2. Model D oracle
# ===================================================================


def test_ac2_model_d() -> None:
    with criterion(2, "Model D hand example and market-share column sums") as detail:
        sut = SupplyUseTables([[3.0, 1.0], [2.0, 4.0]], [[10.0, 0.0], [2.0, 8.0]], make_index(1, 2))
        A = derive_direct_requirements(sut).A
        # D = [[10/12, 0], [2/12, 1]], B = [[0.3, 0.1], [0.2, 0.4]]
        hand = np.array([[10 / 12 * 0.3, 10 / 12 * 0.1], [2 / 12 * 0.3 + 0.2, 2 / 12 * 0.1 + 0.4]])
        assert np.abs(A - hand).max() < 1e-12
        rng = np.random.default_rng(2)
        worst = 0.0
        for _ in range(200):
            idx = make_index(int(rng.integers(1, 4)), int(rng.integers(1, 8)))
            U, V = random_sut(idx, rng)
            D = SupplyUseTables(U, V, idx).market_shares()
            supplied = V.sum(axis=0) > 0
            worst = max(worst, np.abs(D.sum(axis=0)[supplied] - 1.0).max())
        assert worst < 1e-12
        detail.append(f"max |colsum(D) - 1| {worst:.1e}")


# ===================================================================
# 3. Additivity and homogeneity
# ===================================================================


def test_ac3_shock_linearity() -> None:
    with criterion(3, "shock additivity and homogeneity") as detail:
        rng = np.random.default_rng(3)
        worst = 0.0
        for _ in range(200):
            n = int(rng.integers(1, 80))
            idx = make_index(1, n)
            L = leontief_inverse(DirectRequirements(random_productive_matrix(n, rng), idx))
            y1 = FinalDemandShock(rng.uniform(0, 1e3, n) * (rng.random(n) < 0.5), idx)
            y2 = FinalDemandShock(rng.uniform(0, 1e3, n), idx)
            c = float(rng.uniform(0, 50))
            both = impact(L, y1 + y2).values
            scale = np.abs(both).max()
            worst = max(worst, np.abs(both - (impact(L, y1) + impact(L, y2)).values).max() / scale)
            ref = c * impact(L, y2).values
            worst = max(worst, np.abs(impact(L, y2.scaled(c)).values - ref).max() / max(np.abs(ref).max(), 1e-300))
        assert worst <= 1e-9
        detail.append(f"worst relative error {worst:.1e}")


# ===================================================================
# 4. Satellite conservation
# ===================================================================


def test_ac4_satellite_conservation() -> None:
    with criterion(4, "satellite conservation and zero wind emissions") as detail:
        rng = np.random.default_rng(4)
        worst = 0.0
        over = 0
        for _ in range(1000):
            nr, ns = int(rng.integers(1, 6)), int(rng.integers(1, 6))
            idx = make_index(nr, ns, wind=True)
            codes = [s.naics for s in idx.sectors if not s.is_wind]
            regions = [r.code for r in idx.regions]
            national = {c: float(rng.uniform(0, 1e6)) for c in codes}
            facilities = [
                FacilityRecord(str(rng.choice(regions)), str(rng.choice(codes)), float(rng.uniform(0, 6e5)))
                for _ in range(int(rng.integers(0, 15)))
            ]
            proxy = {}
            for c in codes:
                w = rng.random(nr) * (rng.random(nr) < 0.7) + 1e-6
                proxy[c] = {r: float(v) for r, v in zip(regions, w / w.sum())}
            sat = regionalize(national, facilities, proxy, idx)
            sums = dict(zip((s.naics for s in idx.sectors), sat.by_sector()))
            for c, total in national.items():
                covered = math.fsum(f.emissions for f in facilities if f.sector == c)
                over += covered > total
                worst = max(worst, abs(sums[c] - total) / max(total, 1e-300))
            assert not sat.values[list(idx.sector_positions("WIND"))].any()
        assert worst <= 1e-9
        assert over > 0
        detail += [f"worst relative error {worst:.1e}", f"{over} over-covered sectors"]


# ===================================================================
# 5. Cost-model calibration
# ===================================================================


def test_ac5_cost_calibration() -> None:
    with criterion(5, "calibrated cost model against published totals") as detail:
        params = CostParameters.default()
        specs = reference_projects()
        costs = {s.name: estimate_costs(s, params) for s in specs}
        errors = {n: costs[n].total() / PUBLISHED_TOTALS_MUSD[n] - 1 for n in costs}
        assert all(abs(e) <= 0.15 for e in errors.values()), errors
        per_mw_turbine = [costs[s.name].turbine_cost() / s.installed_mw for s in specs]
        assert max(per_mw_turbine) - min(per_mw_turbine) <= 1e-15 * max(per_mw_turbine)
        base = ProjectSpec("L", "VA", 120.0, 12.0, 25.0, 30.0, 8.0)
        tripled = ProjectSpec("L", "VA", 360.0, 12.0, 25.0, 30.0, 8.0)
        # linear up to float rounding of the separate products
        ratio = estimate_costs(tripled, params).turbine_cost() / estimate_costs(base, params).turbine_cost()
        assert abs(ratio - 3.0) <= 3.0 * 1e-15
        ordered = sorted(specs, key=lambda s: s.installed_mw)
        per_mw = [costs[s.name].installation_cost() / s.installed_mw for s in ordered]
        assert all(a >= b for a, b in zip(per_mw, per_mw[1:])), per_mw
        for name, c in costs.items():
            dominant = c.installation_cost() > c.turbine_cost()
            assert dominant == (name in INSTALLATION_DOMINANT), name
        detail.append(", ".join(f"{n} {e:+.1%}" for n, e in errors.items()))


# ===================================================================
# 6. Economic payback
# ===================================================================


def test_ac6_economic_payback() -> None:
    with criterion(6, "economic payback hand cases and published table") as detail:
        assert economic_payback(EconomicInputs(100.0, 100_000.0, 150.0, 5.0)) == pytest.approx(10.0, rel=1e-15)
        assert economic_payback(EconomicInputs(50.0, 200_000.0, 60.0, 2.0)) == pytest.approx(5.0, rel=1e-15)
        aep = 36 * 8760 * 0.51
        p_s = (19.47 + 3.6) * 1e6 / aep
        assert economic_payback(EconomicInputs(296.0, aep, p_s, 3.6)) == pytest.approx(296 / 19.47, rel=1e-12)
        rows = {r.project: r for r in read_payback_inputs(DATA.joinpath("payback_inputs.csv"))}
        published = {"RI": 15.2, "MD": 11.4, "MA": 5.1, "NY": 6.6, "VA": 13.6}
        got = {n: economic_payback(rows[n].economic()) for n in published}
        for n, years in published.items():
            assert abs(got[n] - years) <= 0.1, (n, got[n])
            assert 5.0 - 0.05 <= got[n] <= 15.2 + 0.05
        detail.append(", ".join(f"{n} {v:.2f} yr" for n, v in got.items()))


# ===================================================================
# 7. Carbon payback
# ===================================================================


def test_ac7_carbon_payback() -> None:
    with criterion(7, "carbon payback closed form and published table") as detail:
        for em, mw, r in [(689_000.0, 2640.0, 0.35), (21_000.0, 36.0, 0.26), (5e5, 400.0, 0.3)]:
            inp = CarbonInputs(em, mw, GridTrajectory.constant(r))
            hand = 12 * (em / r) / (mw * 8760 * 0.51)
            assert carbon_payback(inp) == pytest.approx(hand, abs=0.01)
            assert carbon_payback_monthly(inp)[0] == pytest.approx(hand, abs=0.01)
        grid = GridTrajectory.from_csv(DATA.joinpath("grid_trajectory.csv"))
        assert grid.is_constant and 0.25 <= grid.intensities[0] <= 0.40
        rows = {r.project: r for r in read_payback_inputs(DATA.joinpath("payback_inputs.csv"))}
        emissions = {"RI": 21_000.0, "MD": 85_000.0, "MA": 235_000.0, "NY": 295_000.0, "VA": 689_000.0}
        capacities = {"RI": 30.0, "MD": 252.0, "MA": 804.0, "NY": 888.0, "VA": 2640.0}
        published = {"RI": 6, "MD": 3, "MA": 2, "NY": 3, "VA": 2}
        got = {}
        for n, months in published.items():
            assert rows[n].em_lifetime_mt == emissions[n] and rows[n].capacity_mw == capacities[n]
            assert rows[n].cf == 0.51
            got[n] = carbon_payback(rows[n].carbon(grid))
            assert abs(got[n] - months) <= 1.0, (n, got[n])
            assert got[n] < 12.0
        detail.append(f"grid {grid.intensities[0]:.2f} t/MWh: " + ", ".join(f"{n} {v:.2f} mo" for n, v in got.items()))


# ===================================================================
# 8. Social cost of carbon
# ===================================================================


def test_ac8_scc_extension() -> None:
    with criterion(8, "SCC-adjusted payback reduction and monotonicity") as detail:
        rng = np.random.default_rng(8)
        for _ in range(200):
            econ = EconomicInputs(
                float(rng.uniform(10, 1e4)), float(rng.uniform(1e5, 1e7)), float(rng.uniform(60, 200)), 0.0
            )
            install, op = float(rng.uniform(1e3, 1e6)), float(rng.uniform(0, 1e4))
            base = economic_payback(econ)
            assert scc_adjusted_payback(econ, install, op, SccSchedule.constant(0.0)) == base
            price = float(rng.uniform(1, 300))
            assert scc_adjusted_payback(econ, install, op, SccSchedule.constant(price)) > base
        econ = EconomicInputs(100.0, 100_000.0, 150.0, 5.0)
        assert scc_adjusted_payback(econ, 1e6, 0.0, SccSchedule.constant(50.0)) == pytest.approx(15.0, rel=1e-14)
        detail.append("200 random cases")


# ===================================================================
# 9. End-to-end determinism
# ===================================================================


def _run(config, out):
    cfg = ScenarioConfig.from_yaml(config)
    inputs = load_inputs(cfg)
    result = run_scenario(cfg, inputs)
    write_scenario(out, result, inputs.naics_map)
    return result


def test_ac9_end_to_end_determinism(toy_dir, tmp_path) -> None:
    with criterion(9, "toy pipeline byte-identical reruns and in/out-of-state splits") as detail:
        result = _run(toy_dir / "config.yaml", tmp_path / "a")
        _run(toy_dir / "config.yaml", tmp_path / "b")
        files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
        assert files
        for rel in files:
            assert (tmp_path / "a" / rel).read_bytes() == (tmp_path / "b" / rel).read_bytes(), rel
        vectors = 0
        for p in result.projects:
            for vec in list(p.impacts.values()) + list(p.emissions.values()):
                inside, outside = split_in_state(vec, p.spec.state)
                assert inside + outside == pytest.approx(vec.total(), rel=1e-12, abs=1e-300)
                vectors += 1
            for line in (tmp_path / "a" / p.spec.name / "split.csv").read_text().splitlines()[1:]:
                _, _, inside, outside, total = line.split(",")
                # six significant digits per field
                assert float(inside) + float(outside) == pytest.approx(float(total), rel=1e-5)
        detail += [f"{len(files)} files identical", f"{vectors} vectors split"]


# ===================================================================
# 10. Full-scale performance
# ===================================================================


def test_ac10_full_scale_performance() -> None:
    with criterion(10, "52 x 101 factorization and five project shocks") as detail:
        start = time.perf_counter()
        rng = np.random.default_rng(10)
        idx = taxonomy(52, 101, region_codes=US_REGION_CODES)
        assert idx.n == 5252
        A = DirectRequirements(random_productive_matrix(idx.n, rng, max_column_sum=0.9, density=0.05), idx)
        output = rng.uniform(10, 1e4, idx.n)
        output[list(idx.sector_positions("WIND"))] = rng.uniform(0, 10, idx.n_regions)
        national = {s.naics: float(rng.uniform(0, 1e7)) for s in idx.sectors if not s.is_wind}
        inputs = Inputs(
            index=idx, total_output=output, sut=None, a_matrix=A, national=national, facilities=[],
            proxy=proxy_from_output(output, idx), params=CostParameters.default(), naics_map=default_naics_map(),
            weather=None, payback_rows={}, grid=None, scc=None,
        )
        cfg = ScenarioConfig(regions=None, sectors=None, national_inventory=None, projects=reference_projects())
        L = leontief_inverse(A)
        factorized = time.perf_counter() - start
        ef = emissions_factors(regionalize(national, [], inputs.proxy, idx), output)
        results = [evaluate_project(spec, inputs, cfg, L, ef) for spec in cfg.projects]
        elapsed = time.perf_counter() - start
        assert len(results) == 5
        for r in results:
            assert r.impact_musd >= r.cost_musd * (1 - 1e-12)
            assert r.economic_split[0] + r.economic_split[1] == pytest.approx(r.impact_musd, rel=1e-12)
        assert elapsed < 300.0
        detail += [f"factorized in {factorized:.1f} s", f"total {elapsed:.1f} s"]

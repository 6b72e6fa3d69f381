"""
A complete scenario run
=======================

Runs the shipped two-region fixture (Virginia and Pennsylvania, three
sectors, one 120 MW project) and writes every result file to a temporary
directory. The same run is available as ``eemrio run --config <config.yaml>``.
"""

import tempfile
from importlib import resources
from pathlib import Path

from eemrio.scenario import ScenarioConfig, load_inputs, run_scenario, write_scenario

config = Path(str(resources.files("eemrio.data").joinpath("toy", "config.yaml")))
cfg = ScenarioConfig.from_yaml(config)
inputs = load_inputs(cfg)
result = run_scenario(cfg, inputs)

p = result.project("TOY")
print(f"cost {p.cost_musd:.1f} M$ -> impact {p.impact_musd:.1f} M$ ({p.impact_musd / p.cost_musd:.2f}x)")
print(f"turbines {p.impacts['turbines'].total():.1f} M$, installation {p.impacts['installation'].total():.1f} M$")
print(f"in state {p.economic_split[0]:.1f} M$, elsewhere {p.economic_split[1]:.1f} M$")
print(f"emissions {p.emissions_mt:.0f} t, of which {p.emissions_split[1]:.0f} t outside VA")
print(f"payback {p.payback.economic_years:.1f} years, carbon {p.payback.carbon_months:.1f} months")
print("top emitting sectors:", [(code, round(v)) for code, _, v in p.top_emissions])

with tempfile.TemporaryDirectory() as tmp:
    write_scenario(Path(tmp), result, inputs.naics_map)
    for path in sorted(Path(tmp).rglob("*.csv")):
        print(path.relative_to(tmp))

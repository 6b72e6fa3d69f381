"""
Economic and carbon payback
===========================

Economic payback divides the investment by net annual revenue. Carbon
payback asks how long the plant must displace grid power to offset the
emissions of building it.
"""

from importlib import resources

from eemrio.errors import NeverPaysBackError
from eemrio.payback import CarbonInputs, GridTrajectory, SccSchedule, carbon_payback, economic_payback
from eemrio.payback import read_payback_inputs, scc_adjusted_payback

data = resources.files("eemrio.data")
rows = read_payback_inputs(data.joinpath("payback_inputs.csv"))
grid = GridTrajectory.from_csv(data.joinpath("grid_trajectory.csv"))

scc = SccSchedule([2020.0, 2050.0], [51.0, 85.0])
print(f"{'project':8}{'EPB yr':>8}{'CPB mo':>8}{'EPB+SCC':>9}")
for row in rows:
    econ = row.economic()
    carbon = row.carbon(grid)
    with_scc = scc_adjusted_payback(econ, row.em_lifetime_mt, 0.0, scc, install_year=2024)
    print(f"{row.project:8}{economic_payback(econ):8.2f}{carbon_payback(carbon):8.2f}{with_scc:9.2f}")

# a cleaner grid leaves less to displace, so payback takes longer
va = next(r for r in rows if r.project == "VA")
for label, trajectory in [
    ("constant 0.35", GridTrajectory.constant(0.35)),
    ("0.35 -> 0.05 over 1 yr", GridTrajectory([0.0, 1.0], [0.35, 0.05])),
]:
    print(f"VA, grid {label}: {carbon_payback(va.carbon(trajectory)):.2f} months")

# if the grid reaches the plant's own lifecycle intensity, it never pays back
try:
    carbon_payback(CarbonInputs(1e9, 10.0, GridTrajectory([0.0, 2.0], [0.35, 0.0])))
except NeverPaysBackError as exc:
    print("never:", exc)

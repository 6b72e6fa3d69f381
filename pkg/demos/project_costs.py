"""
Cost breakdowns for five planned projects
=========================================

The surrogate cost model splits each project into capital items, vessel
campaigns, turbines, soft costs and development lump sums. The shipped unit
rates were fitted to published project totals.
"""

from eemrio.calibration import PUBLISHED_TOTALS_MUSD, calibrate_reference
from eemrio.windcost import WeatherSeries, OperabilityLimits, default_naics_map, estimate_costs
from eemrio.windcost import map_costs_to_naics, reference_projects

specs = reference_projects()
print(f"{'project':8}{'MW':>7}{'total':>10}{'published':>11}{'inst/turb':>11}{'inst/MW':>9}")
for spec in sorted(specs, key=lambda s: s.installed_mw):
    c = estimate_costs(spec)
    print(
        f"{spec.name:8}{spec.installed_mw:7.0f}{c.total():10.1f}{PUBLISHED_TOTALS_MUSD[spec.name]:11.0f}"
        f"{c.installation_cost() / c.turbine_cost():11.2f}{c.installation_cost() / spec.installed_mw:9.3f}"
    )

# costs land on 3-digit NAICS sectors before becoming final demand
va = next(s for s in specs if s.name == "VA")
print("VA by sector:", {k: round(v, 1) for k, v in map_costs_to_naics(estimate_costs(va), default_naics_map()).items()})

# rough seas stretch every vessel campaign
weather = WeatherSeries([8.0, 12.0, 18.0, 9.0], [1.0, 1.5, 3.0, 2.5])
slow = estimate_costs(va, weather=weather, limits=OperabilityLimits(wind_ms=15.0, wave_m=2.0))
print(f"VA with half the hours workable: {slow.total():.1f} M$")

# refitting from the prior reproduces the shipped rates
fit = calibrate_reference()
print("refit errors:", {k: f"{v:+.1%}" for k, v in fit.relative_errors.items()})

"""
Regionalizing a national emissions inventory
============================================

Facility reports pin part of each sector's emissions to a region. What is
left over is spread with a proxy, here each region's share of output.
"""

import numpy as np

from eemrio.mrio import ImpactVector
from eemrio.satellite import FacilityRecord, emissions_factors, emissions_impact, proxy_from_output, regionalize
from eemrio.taxonomy import Region, Sector, build_index

index = build_index(
    [Region("VA"), Region("PA")],
    [Sector("237", "Construction"), Sector("333", "Machinery"), Sector("WIND", "Wind energy")],
)
output = np.array([1000.0, 500.0, 50.0, 800.0, 1200.0, 0.0])

# national totals in tonnes CO2-eq; the wind sector has none
national = {"237": 200_000.0, "333": 400_000.0}
facilities = [FacilityRecord("PA", "333", 300_000.0), FacilityRecord("VA", "237", 50_000.0)]
proxy = proxy_from_output(output, index)

sat = regionalize(national, facilities, proxy, index)
for (region, sector), value in zip(index.pairs(), sat.values):
    print(f"{region.code}:{sector.naics:<5} {value:12.1f}")

# every sector still adds up to its national total
print("by sector:", {s.naics: float(v) for s, v in zip(index.sectors, sat.by_sector())})

# over-reporting is scaled back rather than ignored
heavy = [FacilityRecord("VA", "237", 150_000.0), FacilityRecord("PA", "237", 150_000.0)]
print("over-covered 237:", regionalize({"237": 200_000.0}, heavy, proxy, index).by_sector()[0])

# tonnes per million USD of output, then emissions of an output change
ef = emissions_factors(sat, output)
dx = ImpactVector([50.0, 10.0, 0.0, 5.0, 20.0, 0.0], index)
print("emissions of the output change:", emissions_impact(ef, dx).total(), "t")

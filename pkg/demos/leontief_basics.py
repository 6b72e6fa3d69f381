"""
Supply/use tables to impacts
============================

Two industries, two products. Industry 1 also makes a little of product 1
as a secondary output, so the market-share matrix is not the identity.
"""

import numpy as np

from eemrio.mrio import FinalDemandShock, SupplyUseTables, derive_direct_requirements, impact, leontief_inverse
from eemrio.mrio import split_in_state, top_sectors
from eemrio.taxonomy import Region, Sector, build_index

np.set_printoptions(precision=4, suppress=True)

# one region is enough to see the mechanics
index = build_index([Region("VA", "Virginia")], [Sector("237", "Construction"), Sector("333", "Machinery")])

# supply: industries x products, use: products x industries (million USD)
supply = np.array([[10.0, 0.0], [2.0, 8.0]])
use = np.array([[3.0, 1.0], [2.0, 4.0]])
sut = SupplyUseTables(use, supply, index)

print("market shares D\n", sut.market_shares())
print("input coefficients B\n", sut.input_coefficients())

A = derive_direct_requirements(sut)
print("direct requirements A = D B\n", A.A)

# the dense solve and the power series give the same total requirements
L = leontief_inverse(A)
L_series = leontief_inverse(A, "neumann")
print("total requirements L\n", L.L)
print("Neumann terms:", L_series.iterations, " max gap:", np.abs(L.L - L_series.L).max())

# a 100 M$ order for construction ripples into machinery
dy = FinalDemandShock([100.0, 0.0], index, "installation")
dx = impact(L, dy)
print("output change", dx.values, " total", dx.total())

# with two regions the same vector splits into home and elsewhere
two = build_index([Region("VA"), Region("PA")], [Sector("237"), Sector("333")])
x = FinalDemandShock([60.0, 25.0, 5.0, 10.0], two)
print("in-state / out-of-state:", split_in_state(x, "VA"))
print("top sectors:", [(s.naics, v) for s, v in top_sectors(x, 2)])

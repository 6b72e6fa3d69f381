"""Fit surrogate unit rates to published project totals.

The fit works on log unit rates, minimising squared log errors of the project
totals plus a ridge pull towards the prior rates (the problem has far more
rates than data points). Durations, soft-cost fractions and development lump
sums stay at their prior values. Optional inequality constraints enforce the
qualitative scaling behaviour expected of the cost model:

* per-MW installation cost does not increase with installed capacity;
* named projects have installation cost above turbine cost, the rest below.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .windcost import CostParameters, ProjectSpec, estimate_costs, reference_projects

logger = logging.getLogger(__name__)

FITTED_RATES = (
    "turbine_price_usd_per_kw",
    "substructure_base_musd",
    "substructure_per_m_depth_musd",
    "scour_per_turbine_musd",
    "array_cable_musd_per_km",
    "export_cable_musd_per_km",
    "substation_musd_per_mw",
    "substation_fixed_musd",
    "turbine_vessel_musd_per_day",
    "heavy_lift_vessel_musd_per_day",
    "scour_vessel_musd_per_day",
    "cable_vessel_musd_per_day",
)


@dataclass(frozen=True)
class CalibrationResult:
    params: CostParameters
    totals: dict[str, float]
    relative_errors: dict[str, float]
    success: bool
    message: str


def fit_cost_parameters(
    specs: Sequence[ProjectSpec],
    targets_musd: Sequence[float],
    prior: CostParameters,
    *,
    installation_dominant: Sequence[str] = (),
    enforce_scaling: bool = True,
    ridge: float = 0.05,
    margin: float = 0.01,
    free: Sequence[str] = FITTED_RATES,
) -> CalibrationResult:
    """Least-squares fit of ``free`` rates so that project totals match ``targets_musd``."""
    targets = np.asarray(targets_musd, dtype=float)
    base = prior.as_dict()
    theta0 = np.log([base[n] for n in free])
    by_capacity = sorted(range(len(specs)), key=lambda i: specs[i].installed_mw)
    dominant = set(installation_dominant)

    def params_at(theta: np.ndarray) -> CostParameters:
        return prior.replace(**dict(zip(free, map(float, np.exp(theta)))))

    def evaluate(theta):
        p = params_at(theta)
        return [estimate_costs(s, p) for s in specs]

    def objective(theta):
        totals = np.array([c.total() for c in evaluate(theta)])
        fit = np.log(totals / targets)
        return float(fit @ fit + ridge * np.sum((theta - theta0) ** 2))

    def inequalities(theta):
        costs = evaluate(theta)
        g = []
        per_mw = [costs[i].installation_cost() / specs[i].installed_mw for i in by_capacity]
        for a, b in zip(per_mw, per_mw[1:]):
            g.append(a / b - 1.0 - margin)
        for s, c in zip(specs, costs):
            ratio = c.installation_cost() / c.turbine_cost()
            g.append(ratio - 1.0 - margin if s.name in dominant else 1.0 / ratio - 1.0 - margin)
        return np.array(g)

    constraints = [{"type": "ineq", "fun": inequalities}] if enforce_scaling else []
    res = minimize(
        objective,
        theta0,
        method="SLSQP",
        constraints=constraints,
        options={"maxiter": 500, "ftol": 1e-12},
    )
    params = params_at(res.x)
    totals = {s.name: estimate_costs(s, params).total() for s in specs}
    rel = {s.name: totals[s.name] / t - 1.0 for s, t in zip(specs, targets)}
    logger.info("calibration %s: %s", "converged" if res.success else "failed", res.message)
    return CalibrationResult(params, totals, rel, bool(res.success), str(res.message))


#: Published project totals in million USD, keyed by project name.
PUBLISHED_TOTALS_MUSD = {"RI": 296.0, "MD": 978.0, "MA": 2800.0, "NY": 3000.0, "VA": 9300.0}
#: Projects whose installation cost exceeds their turbine cost.
INSTALLATION_DOMINANT = ("RI", "MD")


def calibrate_reference(prior: CostParameters | None = None, **kwargs) -> CalibrationResult:
    """Fit the shipped prior to the five reference projects."""
    if prior is None:
        prior = CostParameters.from_csv(resources.files("eemrio.data").joinpath("cost_params_prior.csv"))
    specs = reference_projects()
    kwargs.setdefault("installation_dominant", INSTALLATION_DOMINANT)
    return fit_cost_parameters(specs, [PUBLISHED_TOTALS_MUSD[s.name] for s in specs], prior, **kwargs)

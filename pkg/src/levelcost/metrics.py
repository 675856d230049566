"""Levelized metrics for systems that pair PV generation with storage.

The central quantity is :class:`SystemCostEnergy`, the present-value cost
and energy aggregates of one configuration: PV cost split between the
panels feeding the store and the panels serving the load directly, the
storage system's own cost, and the matching discounted energy streams.
The metric family divides different selections of those aggregates:

* ``lcoe_energy_in``  - cost of the energy charged into the store,
* ``lcod``            - cost of the energy the store delivers, generation included,
* ``lcos_wec``        - the store's own cost over its discounted output,
* ``lcoe_system``     - whole-system cost over delivered energy,
* ``lcos_net``        - the charging-price subtraction form, kept as a
  reference because it can go negative and is flagged when it does.
"""

import warnings
from dataclasses import dataclass

from .errors import DegenerateDenominatorError, DomainError
from .finance import FinancialAssumptions, LevelizedMetric, YearSeries, present_value


@dataclass(frozen=True)
class SystemCostEnergy:
    """Present-value cost and energy aggregates of one PV + storage system.

    Costs in dollars, energies in kWh. ``energy_surplus_in`` is the
    discounted energy charged into the store before round-trip losses;
    ``energy_ess`` the discounted energy it delivers. When both come from
    the same schedules, energy_ess equals round-trip efficiency times
    energy_surplus_in.
    """

    cost_pv_surplus: float
    cost_pv_direct: float
    cost_ess: float
    energy_ess: float
    energy_pv_direct: float
    energy_surplus_in: float

    def __post_init__(self) -> None:
        for name in (
            "cost_pv_surplus",
            "cost_pv_direct",
            "cost_ess",
            "energy_ess",
            "energy_pv_direct",
            "energy_surplus_in",
        ):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be >= 0")


def lcoe_energy_in(sce: SystemCostEnergy) -> LevelizedMetric:
    """Cost of generating the energy that is charged into the store."""
    return LevelizedMetric.from_ratio(
        "lcoe-energy-in", sce.cost_pv_surplus, sce.energy_surplus_in
    )


def lcod(sce: SystemCostEnergy, eta: float) -> LevelizedMetric:
    """Cost of the energy the store delivers, generation cost included.

    The numerator adds the cost of the surplus-producing panels to the
    storage cost; the denominator is the charged energy scaled by the
    round-trip efficiency ``eta``. Splitting the ratio shows it equals
    (1/eta) x lcoe_energy_in plus the store's own levelized cost.
    """
    if not 0.0 < eta <= 1.0:
        raise DomainError(f"eta must be in (0, 1], got {eta}")
    return LevelizedMetric.from_ratio(
        "lcod", sce.cost_pv_surplus + sce.cost_ess, eta * sce.energy_surplus_in
    )


def lcos_wec(
    capital: float,
    ess_yearly_costs: YearSeries,
    ess_energy: YearSeries,
    fin: FinancialAssumptions,
) -> LevelizedMetric:
    """Storage-only levelized cost: average cost per delivered kWh.

    Upfront investment plus discounted running costs, divided by the
    discounted energy the store puts out.
    """
    pv_cost = capital + present_value(ess_yearly_costs, fin)
    pv_energy = present_value(ess_energy, fin)
    return LevelizedMetric.from_ratio("lcos-wec", pv_cost, pv_energy)


def lcos_net(lcoe: float, charging_price: float, overall_efficiency: float) -> float:
    """Net storage cost: lcoe minus charging price over efficiency.

    A reference metric only. It prices the charged energy at an exogenous
    tariff instead of its generation cost, so it can fall below zero; a
    negative result is flagged with a warning rather than rejected.
    """
    if not 0.0 < overall_efficiency <= 1.0:
        raise DomainError(f"overall_efficiency must be in (0, 1], got {overall_efficiency}")
    value = lcoe - charging_price / overall_efficiency
    if value < 0:
        warnings.warn(
            f"net storage cost is negative ({value:.6g} $/kWh); the charging-price "
            "subtraction undervalues storage in this configuration",
            stacklevel=2,
        )
    return value


def lcoe_system(sce: SystemCostEnergy) -> LevelizedMetric:
    """Whole-system levelized cost: all costs over all delivered energy.

    Delivered energy is what reaches the load: the store's output plus the
    directly consumed PV. With every storage term at zero this reduces to
    the direct-path PV cost ratio.
    """
    total_cost = sce.cost_pv_surplus + sce.cost_ess + sce.cost_pv_direct
    total_energy = sce.energy_ess + sce.energy_pv_direct
    if total_energy <= 0:
        raise DegenerateDenominatorError("lcoe-system: delivered energy is zero")
    return LevelizedMetric.from_ratio("lcoe-system", total_cost, total_energy)

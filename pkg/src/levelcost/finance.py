"""Present-value and levelization arithmetic.

All money is in US dollars and all energy in kWh. A project horizon of n
years is carried as a series of n+1 entries, one per year index t = 0..n.
Whether the t=0 entry takes part in a summation is controlled by the
year-zero convention on :class:`FinancialAssumptions`: recurring flows
start at t=1 under the default convention (year-0 spending is an
undiscounted lump handled separately), while the literal t=0..n bounds
used by some published tables are available behind the
``INCLUDE_YEAR_ZERO`` flag.
"""

from dataclasses import dataclass
from enum import Enum
import math

from .errors import AlignmentError, DegenerateDenominatorError, DomainError


class StartConvention(Enum):
    """Index range of the discounted sums: t = 0..n or t = 1..n."""

    INCLUDE_YEAR_ZERO = "include-year-zero"
    EXCLUDE_YEAR_ZERO = "exclude-year-zero"


class Unit(Enum):
    MONEY = "money"
    ENERGY = "energy"


@dataclass(frozen=True)
class FinancialAssumptions:
    """Discount rate, horizon and summation convention for one valuation.

    ``discount_rate`` is a per-year fraction and may be negative but must
    stay above -1. ``horizon_years`` is the project lifetime n in years.
    """

    discount_rate: float
    horizon_years: int
    start_convention: StartConvention = StartConvention.EXCLUDE_YEAR_ZERO

    def __post_init__(self) -> None:
        if not math.isfinite(self.discount_rate) or self.discount_rate <= -1.0:
            raise DomainError(f"discount_rate must be a finite number > -1, got {self.discount_rate}")
        if self.horizon_years < 1:
            raise DomainError(f"horizon_years must be >= 1, got {self.horizon_years}")

    @property
    def first_index(self) -> int:
        return 0 if self.start_convention is StartConvention.INCLUDE_YEAR_ZERO else 1


@dataclass(frozen=True)
class YearSeries:
    """Per-year values over a horizon: index t = 0..n, so n+1 entries.

    Energy-tagged series must be non-negative everywhere; money entries
    may have either sign.
    """

    values: tuple[float, ...]
    unit: Unit

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) == 0:
            raise DomainError("YearSeries needs at least one entry")
        for t, v in enumerate(self.values):
            if not math.isfinite(v):
                raise DomainError(f"YearSeries entry {t} is not finite: {v}")
            if self.unit is Unit.ENERGY and v < 0:
                raise DomainError(f"energy series entry {t} is negative: {v}")

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def money(cls, values) -> "YearSeries":
        return cls(tuple(values), Unit.MONEY)

    @classmethod
    def energy(cls, values) -> "YearSeries":
        return cls(tuple(values), Unit.ENERGY)

    @classmethod
    def constant(cls, value: float, horizon_years: int, unit: Unit) -> "YearSeries":
        """Flat series: the same value at every index t = 0..n."""
        return cls((float(value),) * (horizon_years + 1), unit)


@dataclass(frozen=True)
class LevelizedMetric:
    """A named $/kWh figure with its numerator and denominator retained.

    ``pv_cost`` and ``pv_energy`` are whatever cost and energy aggregates
    the metric divided (present values for the discounting method, annual
    figures for the annuitizing method); ``value`` is their exact ratio.
    """

    name: str
    pv_cost: float
    pv_energy: float
    value: float

    @classmethod
    def from_ratio(cls, name: str, pv_cost: float, pv_energy: float) -> "LevelizedMetric":
        if pv_energy <= 0.0:
            raise DegenerateDenominatorError(
                f"{name}: energy denominator must be positive, got {pv_energy}"
            )
        return cls(name=name, pv_cost=pv_cost, pv_energy=pv_energy, value=pv_cost / pv_energy)


def _require_horizon_match(series: YearSeries, fin: FinancialAssumptions) -> None:
    if len(series) != fin.horizon_years + 1:
        raise AlignmentError(
            f"series has {len(series)} entries but horizon {fin.horizon_years} needs "
            f"{fin.horizon_years + 1} (one per year index 0..n)"
        )


def present_value(series: YearSeries, fin: FinancialAssumptions) -> float:
    """Discount a per-year series back to the present.

    Returns sum of values[t] / (1+r)^t over t in the range selected by the
    year-zero convention. Under ``INCLUDE_YEAR_ZERO`` the t=0 entry enters
    undiscounted since (1+r)^0 = 1.
    """
    _require_horizon_match(series, fin)
    r = fin.discount_rate
    total = 0.0
    for t in range(fin.first_index, fin.horizon_years + 1):
        total += series.values[t] / (1.0 + r) ** t
    return total


def annuity_factor(fin: FinancialAssumptions) -> float:
    """Factor converting a present value into an equivalent annual payment.

    Computes r / (1 - (1+r)^-n), written via expm1/log1p so tiny rates do
    not cancel catastrophically. The r = 0 case returns the analytic limit
    1/n rather than raising, because rate sweeps routinely pass through
    zero.
    """
    r = fin.discount_rate
    n = fin.horizon_years
    if r == 0.0:
        return 1.0 / n
    return r / -math.expm1(-n * math.log1p(r))


def lcoe_discounting(
    costs: YearSeries, energies: YearSeries, fin: FinancialAssumptions
) -> LevelizedMetric:
    """Levelized cost by the discounting method.

    Both the cost and the energy stream are discounted at the same rate
    and the ratio of the two present values is returned, with numerator
    and denominator kept on the result for auditing.
    """
    _require_units(costs, energies)
    pv_cost = present_value(costs, fin)
    pv_energy = present_value(energies, fin)
    return LevelizedMetric.from_ratio("lcoe-discounting", pv_cost, pv_energy)


def lcoe_annuitizing(
    costs: YearSeries, energies: YearSeries, fin: FinancialAssumptions
) -> LevelizedMetric:
    """Levelized cost by the annuitizing method.

    The present value of costs is converted to an equivalent annual cost
    with the annuity factor and divided by the average annual output over
    t = 1..n, undiscounted. Matches the discounting method exactly only
    when annual output is constant.
    """
    _require_units(costs, energies)
    _require_horizon_match(energies, fin)
    annual_cost = present_value(costs, fin) * annuity_factor(fin)
    average_output = sum(energies.values[1:]) / fin.horizon_years
    if average_output <= 0.0:
        raise DegenerateDenominatorError("lcoe-annuitizing: average annual output is zero")
    return LevelizedMetric.from_ratio("lcoe-annuitizing", annual_cost, average_output)


def pv_module_lcoe(
    capital: float,
    yearly_costs: YearSeries,
    rated_annual_energy_kwh: float,
    degradation: float,
    fin: FinancialAssumptions,
) -> LevelizedMetric:
    """Levelized cost of a PV installation with output degradation.

    ``capital`` enters at t=0 as an undiscounted lump, outside both the
    discounting and the degradation product. The energy denominator is the
    rated annual output decayed by (1-d)^t and discounted year by year.

    Args:
        capital: one-off investment in dollars.
        yearly_costs: recurring costs, one entry per year index 0..n.
        rated_annual_energy_kwh: undegraded output per year.
        degradation: per-year output decay fraction d, 0 <= d < 1.
        fin: rate, horizon and summation convention.
    """
    if not 0.0 <= degradation < 1.0:
        raise DomainError(f"degradation must be in [0, 1), got {degradation}")
    if rated_annual_energy_kwh < 0:
        raise DomainError("rated_annual_energy_kwh must be >= 0")
    _require_horizon_match(yearly_costs, fin)
    energy = YearSeries.energy(
        rated_annual_energy_kwh * (1.0 - degradation) ** t
        for t in range(fin.horizon_years + 1)
    )
    pv_cost = capital + present_value(yearly_costs, fin)
    pv_energy = present_value(energy, fin)
    return LevelizedMetric.from_ratio("pv-module-lcoe", pv_cost, pv_energy)


def _require_units(costs: YearSeries, energies: YearSeries) -> None:
    if costs.unit is not Unit.MONEY:
        raise AlignmentError("cost series must be money-tagged")
    if energies.unit is not Unit.ENERGY:
        raise AlignmentError("energy series must be energy-tagged")
    if len(costs) != len(energies):
        raise AlignmentError(
            f"cost series has {len(costs)} entries, energy series {len(energies)}"
        )

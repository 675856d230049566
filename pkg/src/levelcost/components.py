"""Component specifications and the cost/energy schedule builders.

Schedule builders accept daily energy in MWh (the unit dispatch reports)
and emit kWh-tagged YearSeries, converting at this boundary so that every
levelization downstream works in $/kWh. Entries are filled for all year
indices 0..n; the year-zero convention on the financial assumptions
decides at valuation time whether index 0 participates.
"""

import math
import warnings
from dataclasses import dataclass

from .errors import DomainError
from .finance import FinancialAssumptions, Unit, YearSeries

DAYS_PER_YEAR = 365.0
KWH_PER_MWH = 1000.0


@dataclass(frozen=True)
class PvArraySpec:
    """Per-panel cost and technical figures for a PV array.

    Costs are dollars per panel; ``om_per_unit_year`` is dollars per panel
    per year. ``efficiency`` is the module conversion fraction and
    ``degradation`` the per-year output decay.
    """

    capital_per_unit: float
    install_per_unit: float
    om_per_unit_year: float
    rated_power_w: float
    efficiency: float
    panel_area_m2: float
    degradation: float

    def __post_init__(self) -> None:
        if not 0.0 < self.efficiency < 1.0:
            raise DomainError(f"efficiency must be in (0, 1), got {self.efficiency}")
        if not 0.0 <= self.degradation < 1.0:
            raise DomainError(f"degradation must be in [0, 1), got {self.degradation}")
        if self.panel_area_m2 <= 0:
            raise DomainError("panel_area_m2 must be positive")
        if self.rated_power_w <= 0:
            raise DomainError("rated_power_w must be positive")
        for field in ("capital_per_unit", "install_per_unit", "om_per_unit_year"):
            if getattr(self, field) < 0:
                raise DomainError(f"{field} must be >= 0")
        # Rated power should be consistent with efficiency x area at the
        # standard 1000 W/m² test irradiance; a large mismatch usually
        # means mixed-up units in a config file.
        implied_w = self.efficiency * self.panel_area_m2 * 1000.0
        if abs(implied_w - self.rated_power_w) / self.rated_power_w > 0.05:
            warnings.warn(
                f"rated_power_w {self.rated_power_w:.1f} differs from efficiency x area x "
                f"1000 W/m² = {implied_w:.1f} by more than 5%",
                stacklevel=2,
            )


@dataclass(frozen=True)
class StorageSpec:
    """Cost and technical figures for a grid-scale storage system.

    ``capital_per_kwh`` and ``om_per_kwh_year`` are per kWh of energy
    capacity. ``round_trip_efficiency`` scales discharged energy relative
    to charged energy, and ``degradation`` decays throughput per year.
    """

    capital_per_kwh: float
    om_per_kwh_year: float
    power_rating_mw: float
    energy_capacity_mwh: float
    round_trip_efficiency: float
    degradation: float
    lifetime_years: int

    def __post_init__(self) -> None:
        if not 0.0 < self.round_trip_efficiency <= 1.0:
            raise DomainError(
                f"round_trip_efficiency must be in (0, 1], got {self.round_trip_efficiency}"
            )
        if self.energy_capacity_mwh <= 0:
            raise DomainError("energy_capacity_mwh must be positive")
        if self.power_rating_mw <= 0:
            raise DomainError("power_rating_mw must be positive")
        if not 0.0 <= self.degradation < 1.0:
            raise DomainError(f"degradation must be in [0, 1), got {self.degradation}")
        if self.lifetime_years < 1:
            raise DomainError("lifetime_years must be >= 1")
        for field in ("capital_per_kwh", "om_per_kwh_year"):
            if getattr(self, field) < 0:
                raise DomainError(f"{field} must be >= 0")

    @property
    def energy_capacity_kwh(self) -> float:
        return self.energy_capacity_mwh * KWH_PER_MWH


@dataclass(frozen=True)
class PanelAllocation:
    """Panel counts attributed to direct supply and to surplus production.

    Counts are continuous; rounding to whole panels is the caller's call.
    """

    n_direct: float
    n_surplus: float

    def __post_init__(self) -> None:
        if self.n_direct < 0 or self.n_surplus < 0:
            raise DomainError("panel counts must be >= 0")


def ess_cost_schedule(spec: StorageSpec, fin: FinancialAssumptions) -> tuple[float, YearSeries]:
    """Storage capital lump plus the flat yearly O&M series."""
    capital = spec.capital_per_kwh * spec.energy_capacity_kwh
    yearly = spec.om_per_kwh_year * spec.energy_capacity_kwh
    return capital, YearSeries.constant(yearly, fin.horizon_years, Unit.MONEY)


def ess_energy_schedule(
    daily_surplus_mwh: float, spec: StorageSpec, fin: FinancialAssumptions
) -> YearSeries:
    """Energy delivered by storage per year, in kWh.

    Entry t is round_trip_efficiency x daily surplus x 365 x (1-D)^t,
    undiscounted; levelization applies the discounting afterwards.
    """
    base = ess_input_schedule(daily_surplus_mwh, spec, fin)
    return YearSeries.energy(spec.round_trip_efficiency * v for v in base.values)


def ess_input_schedule(
    daily_surplus_mwh: float, spec: StorageSpec, fin: FinancialAssumptions
) -> YearSeries:
    """Energy charged into storage per year (before round-trip losses), kWh."""
    if daily_surplus_mwh < 0:
        raise DomainError("daily_surplus_mwh must be >= 0")
    annual_kwh = daily_surplus_mwh * DAYS_PER_YEAR * KWH_PER_MWH
    return YearSeries.energy(
        annual_kwh * (1.0 - spec.degradation) ** t for t in range(fin.horizon_years + 1)
    )


def pv_cost_schedule(
    spec: PvArraySpec, count: float, fin: FinancialAssumptions
) -> tuple[float, YearSeries]:
    """PV capital (purchase plus installation) and flat yearly O&M for count panels."""
    if count < 0:
        raise DomainError("panel count must be >= 0")
    capital = (spec.capital_per_unit + spec.install_per_unit) * count
    yearly = spec.om_per_unit_year * count
    return capital, YearSeries.money([yearly] * (fin.horizon_years + 1))


def pv_direct_energy_schedule(
    daily_direct_mwh: float, spec: PvArraySpec, fin: FinancialAssumptions
) -> YearSeries:
    """Directly consumed PV energy per year with panel degradation, kWh."""
    if daily_direct_mwh < 0:
        raise DomainError("daily_direct_mwh must be >= 0")
    annual_kwh = daily_direct_mwh * DAYS_PER_YEAR * KWH_PER_MWH
    return YearSeries.energy(
        annual_kwh * (1.0 - spec.degradation) ** t for t in range(fin.horizon_years + 1)
    )


def panel_counts(
    direct_energy_mwh: float,
    surplus_energy_mwh: float,
    insolation_mwh_per_m2: float,
    spec: PvArraySpec,
) -> PanelAllocation:
    """Panels needed to produce the given annual direct and surplus energy.

    Divides each energy by the annual per-panel yield
    efficiency x panel_area x insolation, with the insolation integral in
    MWh/m² over the same year the energies cover.
    """
    if insolation_mwh_per_m2 <= 0:
        raise DomainError("insolation_mwh_per_m2 must be positive")
    if direct_energy_mwh < 0 or surplus_energy_mwh < 0:
        raise DomainError("annual energies must be >= 0")
    yield_per_panel = spec.efficiency * spec.panel_area_m2 * insolation_mwh_per_m2
    if not math.isfinite(yield_per_panel) or yield_per_panel <= 0:
        raise DomainError("per-panel yield must be positive")
    return PanelAllocation(
        n_direct=direct_energy_mwh / yield_per_panel,
        n_surplus=surplus_energy_mwh / yield_per_panel,
    )

"""Levelized-cost metrics for PV systems with grid-scale energy storage.

The package is organized around pure value-semantic building blocks:
finance (present values and levelization ratios), components (cost and
energy schedules), dispatch (time-series energy splitting and synthetic
profiles), metrics (the storage-aware cost family), scenarios (case
construction, rate sweeps, multi-year studies) and a reporting CLI.
"""

from .components import (
    PanelAllocation,
    PvArraySpec,
    StorageSpec,
    ess_cost_schedule,
    ess_energy_schedule,
    ess_input_schedule,
    panel_counts,
    pv_cost_schedule,
    pv_direct_energy_schedule,
)
from .dispatch import (
    DispatchResult,
    PowerTimeSeries,
    SeriesKind,
    clear_sky_profile,
    insolation_wh_m2,
    pv_power_from_irradiance,
    read_power_csv,
    split_energy,
    synthetic_load_profile,
)
from .errors import (
    AlignmentError,
    DegenerateDenominatorError,
    DomainError,
    InputFormatError,
    LevelCostError,
)
from .finance import (
    FinancialAssumptions,
    LevelizedMetric,
    StartConvention,
    Unit,
    YearSeries,
    annuity_factor,
    lcoe_annuitizing,
    lcoe_discounting,
    present_value,
    pv_module_lcoe,
)
from .metrics import (
    SystemCostEnergy,
    lcod,
    lcoe_energy_in,
    lcoe_system,
    lcos_net,
    lcos_wec,
)
from .presets import get_pv_preset, get_storage_preset, list_presets
from .scenarios import (
    CaseDefinition,
    CaseId,
    CasesScenario,
    CaseStudyRow,
    CaseStudyScenario,
    CaseTotals,
    SweepRow,
    builtin_scenario_names,
    calibrate_case_profiles,
    evaluate_case,
    load_scenario,
    marginal_lcoe,
    multi_year_case_study,
    rate_sweep,
    run_case_study,
)

__version__ = "0.1.0"

__all__ = [
    "AlignmentError",
    "CaseDefinition",
    "CaseId",
    "CasesScenario",
    "CaseStudyRow",
    "CaseStudyScenario",
    "CaseTotals",
    "DegenerateDenominatorError",
    "DispatchResult",
    "DomainError",
    "FinancialAssumptions",
    "InputFormatError",
    "LevelCostError",
    "LevelizedMetric",
    "PanelAllocation",
    "PowerTimeSeries",
    "PvArraySpec",
    "SeriesKind",
    "StartConvention",
    "StorageSpec",
    "SweepRow",
    "SystemCostEnergy",
    "Unit",
    "YearSeries",
    "annuity_factor",
    "builtin_scenario_names",
    "calibrate_case_profiles",
    "clear_sky_profile",
    "ess_cost_schedule",
    "ess_energy_schedule",
    "ess_input_schedule",
    "evaluate_case",
    "get_pv_preset",
    "get_storage_preset",
    "insolation_wh_m2",
    "lcod",
    "lcoe_annuitizing",
    "lcoe_discounting",
    "lcoe_energy_in",
    "lcoe_system",
    "lcos_net",
    "lcos_wec",
    "list_presets",
    "load_scenario",
    "marginal_lcoe",
    "multi_year_case_study",
    "panel_counts",
    "present_value",
    "pv_cost_schedule",
    "pv_direct_energy_schedule",
    "pv_module_lcoe",
    "pv_power_from_irradiance",
    "rate_sweep",
    "read_power_csv",
    "run_case_study",
    "split_energy",
    "synthetic_load_profile",
]

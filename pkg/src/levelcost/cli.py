"""Command-line front end.

Subcommands:

* ``levelize``  - levelized-cost reports for a series config or a case
  scenario at the requested rates,
* ``scenario``  - rate-sweep tables for a scenario file or built-in name,
* ``casestudy`` - per-year metric grids plus a long-format plot data file,
* ``presets list`` - available component presets.

Exit codes: 0 success, 1 computation error, 2 input error.
"""

import argparse
import json
import logging
import sys

from .errors import InputFormatError, LevelCostError
from .finance import (
    FinancialAssumptions,
    StartConvention,
    YearSeries,
    lcoe_annuitizing,
    lcoe_discounting,
    pv_module_lcoe,
)
from .presets import list_presets
from .report import (
    FORMATS,
    inputs_fingerprint,
    metric_record,
    write_table,
)
from .scenarios import (
    SWEEP_COLUMNS,
    CasesScenario,
    CaseStudyScenario,
    load_scenario,
    rate_sweep,
    run_case_study,
)

log = logging.getLogger("levelcost")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", required=True, help="scenario file or built-in name")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument(
        "--format",
        default="csv",
        help="comma list of output formats: csv, markdown, jsonl",
    )
    parser.add_argument(
        "--rates",
        default=None,
        help="comma list of discount rates in percent, overriding the scenario's",
    )
    parser.add_argument(
        "--paper-bounds",
        action="store_true",
        help="use literal year-0..n summation bounds instead of starting recurring flows at year 1",
    )
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levelcost",
        description="Levelized-cost metrics for PV plus grid-scale storage",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("levelize", "scenario", "casestudy"):
        _add_common(sub.add_parser(name))
    presets = sub.add_parser("presets")
    presets_sub = presets.add_subparsers(dest="presets_command", required=True)
    presets_sub.add_parser("list")
    return parser


def _parse_formats(raw: str) -> list[str]:
    formats = [f.strip() for f in raw.split(",") if f.strip()]
    bad = [f for f in formats if f not in FORMATS]
    if bad:
        raise InputFormatError(f"unknown output format(s): {bad}; choose from {FORMATS}")
    if not formats:
        raise InputFormatError("at least one output format is required")
    return formats


def _parse_rates(raw: str | None) -> list[float] | None:
    if raw is None:
        return None
    try:
        return [float(r) / 100.0 for r in raw.split(",") if r.strip()]
    except ValueError as exc:
        raise InputFormatError(f"bad --rates value: {exc}") from exc


def _maybe_series_config(path: str) -> dict | None:
    """A levelize config may be a plain series file instead of a scenario."""
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except (OSError, json.JSONDecodeError):
        return None
    return data if "series" in data else None


def _fin_from_config(section: dict, paper_bounds: bool) -> FinancialAssumptions:
    convention = StartConvention(
        section.get(
            "start_convention",
            "include-year-zero" if paper_bounds else "exclude-year-zero",
        )
    )
    if paper_bounds:
        convention = StartConvention.INCLUDE_YEAR_ZERO
    return FinancialAssumptions(
        discount_rate=float(section["discount_rate"]),
        horizon_years=int(section["horizon_years"]),
        start_convention=convention,
    )


def _cmd_levelize_series(data: dict, args) -> int:
    series = data["series"]
    fin = _fin_from_config(data.get("finance", {}), args.paper_bounds)
    costs = YearSeries.money(series["costs"])
    energies = YearSeries.energy(series["energies"])
    fingerprint = inputs_fingerprint({"series": series, "finance": data.get("finance", {})})
    metrics = [
        lcoe_discounting(costs, energies, fin),
        lcoe_annuitizing(costs, energies, fin),
    ]
    if "pv_module" in data:
        pv = data["pv_module"]
        metrics.append(
            pv_module_lcoe(
                capital=float(pv["capital"]),
                yearly_costs=YearSeries.money(pv["yearly_costs"]),
                rated_annual_energy_kwh=float(pv["rated_annual_energy_kwh"]),
                degradation=float(pv.get("degradation", 0.0)),
                fin=fin,
            )
        )
    rows = [metric_record(m, fingerprint) for m in metrics]
    columns = ["name", "pv_cost", "pv_energy", "value", "inputs_fingerprint"]
    for path in write_table(args.out, "levelize", rows, columns, args.formats):
        log.info("wrote %s", path)
    return 0


def _scenario_fingerprint(scenario) -> str:
    return inputs_fingerprint({"name": scenario.name, "description": scenario.description})


def _cmd_levelize(args) -> int:
    data = _maybe_series_config(args.scenario)
    if data is not None:
        return _cmd_levelize_series(data, args)
    scenario = load_scenario(args.scenario)
    if not isinstance(scenario, CasesScenario):
        raise InputFormatError("levelize needs a series config or a cases scenario")
    scenario = _apply_paper_bounds(scenario, args.paper_bounds)
    fingerprint = _scenario_fingerprint(scenario)
    rows = []
    for sweep_row in rate_sweep(scenario, _parse_rates(args.rates)):
        if sweep_row.error is not None:
            rows.append(
                {"r_percent": sweep_row.rate * 100.0, "metric": "error", "value": None,
                 "error": sweep_row.error, "inputs_fingerprint": fingerprint}
            )
            continue
        for metric, value in sweep_row.values.items():
            rows.append(
                {"r_percent": sweep_row.rate * 100.0, "metric": metric, "value": value,
                 "error": None, "inputs_fingerprint": fingerprint}
            )
    columns = ["r_percent", "metric", "value", "error", "inputs_fingerprint"]
    for path in write_table(args.out, f"{scenario.name}-levelize", rows, columns, args.formats):
        log.info("wrote %s", path)
    return 0


def _apply_paper_bounds(scenario, paper_bounds: bool):
    if not paper_bounds:
        return scenario
    from dataclasses import replace

    return replace(scenario, start_convention=StartConvention.INCLUDE_YEAR_ZERO)


def _cmd_scenario(args) -> int:
    scenario = load_scenario(args.scenario)
    rates = _parse_rates(args.rates)
    scenario = _apply_paper_bounds(scenario, args.paper_bounds)
    if isinstance(scenario, CaseStudyScenario):
        return _emit_case_study(scenario, rates, args, plot_data=False)
    rows = rate_sweep(scenario, rates)
    if not rows:
        log.warning("empty rate list: writing an empty table")
    table = []
    for row in rows:
        record = {"r_percent": row.rate * 100.0}
        if row.values is None:
            record["error"] = row.error
        else:
            record.update(row.values)
            record["error"] = None
        table.append(record)
    columns = ["r_percent", *SWEEP_COLUMNS, "error"]
    for path in write_table(args.out, scenario.name, table, columns, args.formats):
        log.info("wrote %s", path)
    return 0


def _emit_case_study(scenario: CaseStudyScenario, rates, args, plot_data: bool) -> int:
    rows = run_case_study(scenario, rates)
    years = sorted({row.year for row in rows})
    by_storage: dict[str, dict[float, dict]] = {}
    for row in rows:
        by_storage.setdefault(row.storage, {}).setdefault(row.rate, {})[row.year] = row
    columns = (
        ["r_percent"]
        + [f"LCOD_{year}" for year in years]
        + [f"LCOE_system_{year}" for year in years]
    )
    for storage, per_rate in by_storage.items():
        table = []
        for rate in sorted(per_rate):
            record = {"r_percent": rate * 100.0}
            for year in years:
                row = per_rate[rate].get(year)
                record[f"LCOD_{year}"] = row.lcod if row else None
                record[f"LCOE_system_{year}"] = row.lcoe_system if row else None
            table.append(record)
        for path in write_table(
            args.out, f"{scenario.name}-{storage}", table, columns, args.formats
        ):
            log.info("wrote %s", path)
    if plot_data:
        long_rows = []
        for row in rows:
            technology, sep, bound = row.storage.rpartition("-")
            if not sep:
                technology, bound = row.storage, ""
            for metric, value in (("LCOD", row.lcod), ("LCOE_system", row.lcoe_system)):
                long_rows.append(
                    {
                        "year": row.year,
                        "r_percent": row.rate * 100.0,
                        "technology": technology,
                        "bound": bound,
                        "metric": metric,
                        "value": value,
                    }
                )
        plot_columns = ["year", "r_percent", "technology", "bound", "metric", "value"]
        for path in write_table(
            args.out, f"{scenario.name}-plot-data", long_rows, plot_columns, args.formats
        ):
            log.info("wrote %s", path)
    return 0


def _cmd_casestudy(args) -> int:
    scenario = load_scenario(args.scenario)
    if not isinstance(scenario, CaseStudyScenario):
        raise InputFormatError("casestudy needs a casestudy scenario")
    scenario = _apply_paper_bounds(scenario, args.paper_bounds)
    return _emit_case_study(scenario, _parse_rates(args.rates), args, plot_data=True)


def _cmd_presets(args) -> int:
    for kind, names in list_presets().items():
        for name in names:
            print(f"{kind}\t{name}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(message)s",
        stream=sys.stderr,
    )
    try:
        if args.command == "presets":
            return _cmd_presets(args)
        args.formats = _parse_formats(args.format)
        if args.command == "levelize":
            return _cmd_levelize(args)
        if args.command == "scenario":
            return _cmd_scenario(args)
        return _cmd_casestudy(args)
    except InputFormatError as exc:
        print(f"levelcost: input error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"levelcost: input error: {exc!r}", file=sys.stderr)
        return 2
    except LevelCostError as exc:
        print(f"levelcost: computation error: {exc}", file=sys.stderr)
        return 1


def console_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    console_entry()

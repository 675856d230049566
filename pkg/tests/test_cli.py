"""Command-line behavior: outputs, determinism, exit codes."""

import json
import pytest

from levelcost.cli import main
from levelcost.report import read_jsonl


def run(*argv):
    return main(list(argv))


@pytest.fixture
def series_config(tmp_path):
    path = tmp_path / "series.json"
    path.write_text(
        json.dumps(
            {
                "series": {"costs": [0, 100, 100], "energies": [0, 1000, 1000]},
                "finance": {"discount_rate": 0.07, "horizon_years": 2},
            }
        )
    )
    return str(path)


class TestLevelize:
    def test_constant_flow_fixture_reports_ratio(self, series_config, tmp_path):
        out = tmp_path / "out"
        assert run("levelize", "--scenario", series_config, "--out", str(out), "--format", "csv,jsonl") == 0
        records = read_jsonl(str(out / "levelize.jsonl"))
        by_name = {r["name"]: r for r in records}
        assert by_name["lcoe-discounting"]["value"] == pytest.approx(0.1, rel=1e-12)
        assert by_name["lcoe-annuitizing"]["value"] == pytest.approx(0.1, rel=1e-12)

    def test_scenario_levelize_emits_metric_rows(self, tmp_path):
        out = tmp_path / "out"
        assert run(
            "levelize", "--scenario", "table4-vrb-lower", "--out", str(out),
            "--format", "jsonl", "--rates", "8",
        ) == 0
        records = read_jsonl(str(out / "table4-vrb-lower-levelize.jsonl"))
        metrics = {r["metric"] for r in records}
        assert {"LCOE_basecase", "LCOD", "LCOE_system", "1-2", "2-3", "1-3"} <= metrics

    def test_jsonl_round_trip_preserves_values(self, series_config, tmp_path):
        out = tmp_path / "out"
        run("levelize", "--scenario", series_config, "--out", str(out), "--format", "jsonl")
        records = read_jsonl(str(out / "levelize.jsonl"))
        from levelcost import FinancialAssumptions, YearSeries, lcoe_discounting

        fin = FinancialAssumptions(0.07, 2)
        expected = lcoe_discounting(
            YearSeries.money([0, 100, 100]), YearSeries.energy([0, 1000, 1000]), fin
        )
        record = next(r for r in records if r["name"] == "lcoe-discounting")
        assert record["value"] == expected.value
        assert record["pv_cost"] == expected.pv_cost

    def test_missing_file_is_input_error(self, tmp_path):
        assert run("levelize", "--scenario", str(tmp_path / "nope.json"), "--out", str(tmp_path)) == 2

    def test_degenerate_series_is_computation_error(self, tmp_path, capsys):
        config = tmp_path / "series.json"
        config.write_text(
            json.dumps(
                {
                    "series": {"costs": [10, 1, 1], "energies": [0, 0, 0]},
                    "finance": {"discount_rate": 0.05, "horizon_years": 2},
                }
            )
        )
        assert run("levelize", "--scenario", str(config), "--out", str(tmp_path)) == 1
        assert "computation error" in capsys.readouterr().err

    def test_paper_bounds_flag_changes_result(self, tmp_path):
        config = tmp_path / "series.json"
        config.write_text(
            json.dumps(
                {
                    "series": {"costs": [50, 10, 10], "energies": [0, 100, 100]},
                    "finance": {"discount_rate": 0.05, "horizon_years": 2},
                }
            )
        )
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        run("levelize", "--scenario", str(config), "--out", str(out_a), "--format", "jsonl")
        run("levelize", "--scenario", str(config), "--out", str(out_b), "--format", "jsonl", "--paper-bounds")
        val_a = read_jsonl(str(out_a / "levelize.jsonl"))[0]["value"]
        val_b = read_jsonl(str(out_b / "levelize.jsonl"))[0]["value"]
        assert val_a != val_b


class TestScenario:
    def test_table_shape(self, tmp_path):
        out = tmp_path / "out"
        assert run("scenario", "--scenario", "table4-vrb-lower", "--out", str(out)) == 0
        text = (out / "table4-vrb-lower.csv").read_text()
        lines = text.strip().splitlines()
        assert lines[0] == "r_percent,LCOE_basecase,1-2,2-3,1-3,LCOD,LCOE_system,error"
        assert len(lines) == 6  # header + five default rates

    def test_byte_identical_reruns(self, tmp_path):
        out_a = tmp_path / "a"
        out_b = tmp_path / "b"
        run("scenario", "--scenario", "table4-vrb-lower", "--out", str(out_a))
        run("scenario", "--scenario", "table4-vrb-lower", "--out", str(out_b))
        assert (out_a / "table4-vrb-lower.csv").read_bytes() == (
            out_b / "table4-vrb-lower.csv"
        ).read_bytes()

    def test_empty_rate_list_writes_empty_table(self, tmp_path):
        out = tmp_path / "out"
        assert run(
            "scenario", "--scenario", "table4-vrb-lower", "--out", str(out), "--rates", ""
        ) == 0
        lines = (out / "table4-vrb-lower.csv").read_text().strip().splitlines()
        assert len(lines) == 1

    def test_casestudy_template_grid(self, tmp_path):
        out = tmp_path / "out"
        assert run("scenario", "--scenario", "table6to9-template", "--out", str(out)) == 0
        text = (out / "table6to9-template-vrb-lower.csv").read_text()
        lines = text.strip().splitlines()
        assert lines[0].startswith("r_percent,LCOD_2009,LCOD_2011,LCOD_2012")
        assert len(lines) == 8  # header + seven default rates

    def test_malformed_scenario_csv_exit_2(self, tmp_path):
        bad_csv = tmp_path / "load.csv"
        bad_csv.write_text("2009-01-01T00:00:00,1.0\n2009-01-01T01:00:00,banana\n")
        irr_csv = tmp_path / "irr.csv"
        irr_csv.write_text("2009-01-01T00:00:00,0\n2009-01-01T01:00:00,100\n")
        scenario = tmp_path / "scn.json"
        scenario.write_text(
            json.dumps(
                {
                    "kind": "cases",
                    "name": "bad",
                    "pv": {"preset": "sharp-nd250"},
                    "storage": {"preset": "vrb-lower"},
                    "panels": {"base": 10, "expanded": 15},
                    "finance": {"horizon_years": 20},
                    "profiles": {
                        "step_minutes": 60,
                        "load": {"csv": str(bad_csv)},
                        "irradiance": {"csv": str(irr_csv)},
                    },
                }
            )
        )
        assert run("scenario", "--scenario", str(scenario), "--out", str(tmp_path)) == 2

    def test_unknown_format_rejected(self, tmp_path):
        assert run(
            "scenario", "--scenario", "table4-vrb-lower", "--out", str(tmp_path),
            "--format", "xlsx",
        ) == 2


class TestCasestudy:
    def test_per_year_files_and_plot_data(self, tmp_path):
        out = tmp_path / "out"
        assert run(
            "casestudy", "--scenario", "table6to9-template", "--out", str(out),
            "--rates", "2,8", "--format", "csv,jsonl",
        ) == 0
        for storage in ("vrb-lower", "liion-lower", "vrb-upper", "liion-upper"):
            assert (out / f"table6to9-template-{storage}.csv").exists()
        plot_rows = read_jsonl(str(out / "table6to9-template-plot-data.jsonl"))
        sample = plot_rows[0]
        assert set(sample) == {"year", "r_percent", "technology", "bound", "metric", "value"}
        techs = {(r["technology"], r["bound"]) for r in plot_rows}
        assert ("vrb", "lower") in techs and ("liion", "upper") in techs

    def test_sunnier_year_columns_are_cheaper(self, tmp_path):
        out = tmp_path / "out"
        run("casestudy", "--scenario", "table6to9-template", "--out", str(out), "--rates", "5")
        lines = (out / "table6to9-template-liion-lower.csv").read_text().strip().splitlines()
        header = lines[0].split(",")
        row = dict(zip(header, lines[1].split(",")))
        assert float(row["LCOD_2012"]) < float(row["LCOD_2009"])

    def test_missing_scenario_names_path(self, tmp_path, capsys):
        code = run("casestudy", "--scenario", str(tmp_path / "gone.json"), "--out", str(tmp_path))
        assert code == 2
        assert "gone.json" in capsys.readouterr().err


class TestPresets:
    def test_list_prints_names(self, capsys):
        assert run("presets", "list") == 0
        out = capsys.readouterr().out
        for name in ("sharp-nd250", "vrb-lower", "vrb-upper", "liion-lower", "liion-upper"):
            assert name in out

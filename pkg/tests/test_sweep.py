"""Grid construction, scenario ids, parallel execution and report files."""
import json

import pytest

from vfarm.config import load_config
from vfarm.errors import ConfigError
from vfarm.sweep import (
    SUMMARY_COLUMNS,
    SweepReport,
    build_grid,
    emit_reports,
    parse_scenario_id,
    run_sweep,
    scenario_id,
)

SUBSET = [
    "T_I_100_24_900", "T_I_250_24_900", "T_I_400_24_900",
    "S_I_250_24_900", "D_I_250_24_900", "T_O_250_24_900",
]


class TestGrid:
    def test_full_grid_size(self, config):
        grid = build_grid(config)
        assert len(grid) == 162
        ids = [scenario_id(s, config) for s in grid]
        assert len(set(ids)) == 162

    def test_id_round_trip(self, config):
        for spec in build_grid(config):
            sid = scenario_id(spec, config)
            assert parse_scenario_id(sid, config) == spec

    def test_id_format(self, config):
        grid = build_grid(config)
        sid = scenario_id(grid[0], config)
        parts = sid.split("_")
        assert len(parts) == 5
        assert parts[0] in "TSD"
        assert parts[1] in "IO"

    @pytest.mark.parametrize("bad", [
        "T_I_100_24",              # missing field
        "X_I_100_24_900",          # unknown location code
        "T_Z_100_24_900",          # bad envelope flag
        "T_I_abc_24_900",          # non-numeric level
        "T_I_100_24_900_extra",    # trailing field
    ])
    def test_malformed_ids_rejected(self, config, bad):
        with pytest.raises(ConfigError):
            parse_scenario_id(bad, config)

    def test_off_grid_values_parse_but_do_not_run(self, config):
        # syntax and grid membership are separate checks
        spec = parse_scenario_id("T_I_123_24_900", config)
        assert spec.ppfd == 123.0
        with pytest.raises(ConfigError):
            run_sweep(config, only=["T_I_123_24_900"])


class TestRunSweep:
    def test_subset_selection(self, config):
        report = run_sweep(config, workers=1, only=SUBSET[:2])
        assert [r["id"] for r in report.records] == SUBSET[:2]
        assert not report.errors

    def test_unknown_subset_id_rejected(self, config):
        with pytest.raises(ConfigError):
            run_sweep(config, only=["T_I_999_24_900"])

    def test_worker_count_does_not_change_results(self, config, tmp_path):
        serial = run_sweep(config, workers=1, only=SUBSET)
        parallel = run_sweep(config, workers=3, only=SUBSET)
        a, b = tmp_path / "a", tmp_path / "b"
        emit_reports(serial, a)
        emit_reports(parallel, b)
        for name in ("summary.csv", "sensitivity.csv", "breakeven.csv"):
            assert (a / name).read_bytes() == (b / name).read_bytes(), name

    def test_record_identities(self, config):
        report = run_sweep(config, workers=1, only=["T_I_250_24_900"])
        r = report.records[0]
        assert r["energy_kwh"] == pytest.approx(
            r["thermal_kwh"] + r["lighting_kwh"], rel=1e-9)
        assert r["e_total_kwh"] == pytest.approx(
            r["e_heating_kwh"] + r["e_cooling_kwh"] + r["e_lighting_kwh"],
            rel=1e-9)
        assert r["sec_kwh_kg"] == pytest.approx(
            r["energy_kwh"] / r["yield_kg"], rel=1e-9)
        assert r["seec_kwh_kg"] == pytest.approx(
            r["e_total_kwh"] / r["yield_kg"], rel=1e-9)
        assert r["wue_g_l"] == pytest.approx(
            1000.0 * r["yield_kg"] / r["water_net_l"], rel=1e-9)
        assert r["lcol_usd_kg"] == pytest.approx(
            (r["annuity_usd"] + r["opex_usd"]) / r["yield_kg"], rel=1e-9)

    def test_failures_stay_isolated(self, broken_weather_config):
        config = load_config(broken_weather_config)
        report = run_sweep(config, workers=2, only=SUBSET)
        failed = {e["id"] for e in report.errors}
        assert failed == {"S_I_250_24_900"}
        assert {r["id"] for r in report.records} == set(SUBSET) - failed
        assert report.errors[0]["error"] == "WeatherDataError"
        assert report.metadata["failed"] == 1


class TestEmitReports:
    def test_full_report_files(self, full_report, tmp_path):
        paths = emit_reports(full_report, tmp_path)
        lines = paths["summary"].read_text().splitlines()
        assert lines[0] == ",".join(SUMMARY_COLUMNS)
        assert len(lines) == 1 + 162

        assert (tmp_path / "loads").is_dir()
        for rec in full_report.records[:3]:
            load_lines = (tmp_path / "loads" / f"{rec['id']}.csv"
                          ).read_text().splitlines()
            assert load_lines[0] == "day,q_heat_kwh,q_cool_kwh,q_dehum_kwh,q_postheat_kwh"
            assert len(load_lines) == 1 + 365

        be_lines = paths["breakeven"].read_text().splitlines()
        assert len(be_lines) == 1 + 9  # three sites x three temperatures

        body = json.loads(paths["report"].read_text())
        assert body["metadata"]["completed"] == 162
        assert body["metadata"]["config_sha256"]
        assert len(body["records"]) == 162
        assert "daily" not in body["records"][0]

    def test_emit_is_reproducible(self, full_report, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        emit_reports(full_report, a)
        emit_reports(full_report, b)
        assert (a / "summary.csv").read_bytes() == (b / "summary.csv").read_bytes()
        assert (a / "sensitivity.csv").read_bytes() == (b / "sensitivity.csv").read_bytes()

    def test_empty_report_writes_headers_only(self, tmp_path):
        paths = emit_reports(SweepReport(), tmp_path)
        assert paths["summary"].read_text().splitlines() == [
            ",".join(SUMMARY_COLUMNS)]
        assert len(paths["breakeven"].read_text().splitlines()) == 1
        assert len(paths["sensitivity"].read_text().splitlines()) == 1


class TestSensitivityTableContent:
    def test_every_requested_pair_is_ranked(self, full_report):
        inputs = {"climate", "insulated", "ppfd", "t_in_c", "co2_ppm"}
        outcomes = {"yield_kg", "energy_kwh", "e_total_kwh", "sec_kwh_kg",
                    "seec_kwh_kg", "lcol_usd_kg", "wue_g_l", "savings_g_kg"}
        seen_inputs = {row[0] for row in full_report.sensitivity}
        seen_outcomes = {row[1] for row in full_report.sensitivity}
        assert seen_inputs == inputs
        assert seen_outcomes == outcomes
        assert len(full_report.sensitivity) == len(inputs) * len(outcomes)

    def test_rho_values_are_in_range(self, full_report):
        for _, _, rho in full_report.sensitivity:
            assert 0.0 <= rho <= 1.0

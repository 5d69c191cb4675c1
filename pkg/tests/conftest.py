"""Shared fixtures.

The full 162-scenario sweep is expensive enough that it runs once per
session; every test that needs grid-level results pulls from the same
report object.
"""
import shutil
from pathlib import Path

import pytest
import yaml

from vfarm.config import load_config
from vfarm.sweep import emit_reports, run_sweep

REPO = Path(__file__).resolve().parents[1]
CONFIG_PATH = REPO / "data" / "config" / "default.yaml"


@pytest.fixture(scope="session")
def config_path():
    return CONFIG_PATH


@pytest.fixture(scope="session")
def config():
    return load_config(CONFIG_PATH)


@pytest.fixture(scope="session")
def full_report(config):
    """One parallel run of the whole grid, shared across the session."""
    report = run_sweep(config, workers=4)
    assert not report.errors, f"sweep reported failures: {report.errors[:3]}"
    return report


@pytest.fixture(scope="session")
def records(full_report):
    """Sweep records keyed by scenario id."""
    return {r["id"]: r for r in full_report.records}


@pytest.fixture(scope="session")
def report_dir(full_report, tmp_path_factory):
    """The full report written to disk once, for file-based consumers."""
    out = tmp_path_factory.mktemp("report")
    emit_reports(full_report, out)
    return out


@pytest.fixture()
def broken_weather_config(tmp_path):
    """Config whose Shanghai weather file has an hour gap.

    Scenario runs for that site fail during weather parsing while the other
    two sites stay healthy, which exercises failure isolation.
    """
    doc = yaml.safe_load(CONFIG_PATH.read_text())
    data = REPO / "data"
    doc["paths"] = {
        "weather_dir": str(tmp_path / "weather"),
        "crop_file": str(data / "crop" / "lettuce_default.yaml"),
        "heatpump_file": str(data / "hvac" / "heatpumps.yaml"),
        "cost_file": str(data / "costs" / "costs.yaml"),
        "supply_dir": str(data / "supply"),
    }
    wdir = tmp_path / "weather"
    wdir.mkdir()
    for name in ("trondheim", "dubai"):
        shutil.copy(data / "weather" / f"{name}.csv", wdir / f"{name}.csv")
    lines = (data / "weather" / "shanghai.csv").read_text().splitlines()
    del lines[30]
    (wdir / "shanghai.csv").write_text("\n".join(lines) + "\n")
    out = tmp_path / "config.yaml"
    out.write_text(yaml.safe_dump(doc, sort_keys=False))
    return out

"""Scenario grid construction, parallel execution and report serialization.

A scenario is one point of the (location, insulation, PPFD, T_in, CO2) grid,
named ``{code}_{I|O}_{ppfd}_{t}_{co2}`` (I insulated, O bare shell).  Each
scenario runs the full pipeline independently: chamber balance, heat-pump
conversion, cost accounting and the carbon comparison.  Reports are
deterministic functions of the configuration, whatever the worker count.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__ as _version
from . import chamber, crop, econ, hvac, stats, sustain, weather
from .config import SimConfig, load_config
from .errors import ConfigError, VFarmError

_WEATHER_CACHE: dict = {}
_CROP_CACHE: dict = {}


@dataclass(frozen=True)
class ScenarioSpec:
    """One grid point; identity is the canonical id string."""

    location: str
    insulated: bool
    ppfd: float
    t_in_c: float
    co2_ppm: float


def _num(value: float) -> str:
    return f"{value:g}"


def scenario_id(spec: ScenarioSpec, config: SimConfig) -> str:
    code = config.site(spec.location).code
    flag = "I" if spec.insulated else "O"
    return (f"{code}_{flag}_{_num(spec.ppfd)}_{_num(spec.t_in_c)}"
            f"_{_num(spec.co2_ppm)}")


def parse_scenario_id(sid: str, config: SimConfig) -> ScenarioSpec:
    parts = sid.strip().split("_")
    if len(parts) != 5:
        raise ConfigError(f"bad scenario id {sid!r}: expected 5 '_' separated fields")
    code, flag, ppfd, t_in, co2 = parts
    by_code = {site.code: site.name for site in config.sites.values()}
    if code not in by_code:
        raise ConfigError(f"bad scenario id {sid!r}: unknown location code {code!r}")
    if flag not in ("I", "O"):
        raise ConfigError(f"bad scenario id {sid!r}: insulation flag must be I or O")
    try:
        spec = ScenarioSpec(
            location=by_code[code],
            insulated=flag == "I",
            ppfd=float(ppfd),
            t_in_c=float(t_in),
            co2_ppm=float(co2),
        )
    except ValueError as exc:
        raise ConfigError(f"bad scenario id {sid!r}: {exc}") from exc
    return spec


def build_grid(config: SimConfig) -> list:
    """Cartesian product of the configured axes, in canonical order."""
    grid = []
    axes = config.grid
    for loc in axes.locations:
        for ins in axes.insulation:
            for ppfd in axes.ppfd:
                for t_in in axes.t_in_c:
                    for co2 in axes.co2_ppm:
                        grid.append(ScenarioSpec(loc, ins, ppfd, t_in, co2))
    return grid


def _weather_for(config: SimConfig, name: str) -> weather.WeatherSeries:
    site = config.site(name)
    key = (str(site.weather_path), site.location)
    if key not in _WEATHER_CACHE:
        _WEATHER_CACHE[key] = weather.parse_weather(site.weather_path, site.location)
    return _WEATHER_CACHE[key]


def _crop_year_for(config: SimConfig, ppfd: float, t_in: float,
                   co2: float) -> crop.CropYear:
    key = (config.config_sha256, ppfd, t_in, co2)
    if key not in _CROP_CACHE:
        setp = config.setpoints(t_in, co2, ppfd)
        dt = config.chamber.dt_s
        steps_per_day = int(round(86400.0 / dt))
        hours = (np.arange(365 * steps_per_day) * dt / 3600.0) % 24.0
        lights = setp.lights_on(hours)
        _CROP_CACHE[key] = crop.simulate_crop_year(
            config.crop, ppfd, t_in, co2, lights, dt
        )
    return _CROP_CACHE[key]


def run_scenario(config: SimConfig, spec: ScenarioSpec) -> dict:
    """Full pipeline for one scenario; returns the flat indicator record."""
    sid = scenario_id(spec, config)
    site = config.site(spec.location)
    series = _weather_for(config, spec.location)
    setp = config.setpoints(spec.t_in_c, spec.co2_ppm, spec.ppfd)
    crop_year = _crop_year_for(config, spec.ppfd, spec.t_in_c, spec.co2_ppm)

    annual, loads = chamber.integrate_year(
        series, setp, config.geometry, config.envelope(spec.insulated),
        config.chamber, config.crop, crop_year=crop_year, scenario=sid,
    )
    bill = hvac.annualize(loads, config.hp_heating, config.hp_cooling,
                          annual.lighting_kwh, annual.yield_kg, scenario=sid)

    p_light_w, _ = chamber.lighting_power(setp, config.geometry, config.chamber)
    p_hvacd_w = bill.cap_heating_w + bill.cap_cooling_w
    book = config.cost_book
    capex_bd = econ.capex(book, p_light_w, p_hvacd_w,
                          config.geometry.crop_area_m2,
                          config.geometry.envelope_area_m2, spec.insulated)
    opex_bd = econ.opex(book, spec.location, annual.yield_kg, bill.e_total_kwh,
                        annual.water_net_l, annual.co2_injected_kg,
                        config.geometry.footprint_m2)
    eres = econ.lcol(book, capex_bd, opex_bd, p_light_w, annual.yield_kg,
                     config.strict_paper)

    vf_g = sustain.vf_footprint(bill.seec_kwh_kg, site.supply.grid_factor_g_kwh)
    imp_g = sustain.import_footprint(site.supply)
    sav = sustain.savings(vf_g, imp_g)

    return {
        "id": sid,
        "location": spec.location,
        "climate": site.code,
        "insulated": spec.insulated,
        "ppfd": spec.ppfd,
        "t_in_c": spec.t_in_c,
        "co2_ppm": spec.co2_ppm,
        "yield_kg": annual.yield_kg,
        "cycles": annual.cycles,
        "productivity_kg_m2": annual.productivity_kg_m2,
        "cycle_days": annual.cycle_days[0] if annual.cycle_days else float("nan"),
        "heating_kwh": annual.heating_kwh,
        "cooling_kwh": annual.cooling_kwh,
        "dehum_kwh": annual.dehum_kwh,
        "postheat_kwh": annual.postheat_kwh,
        "thermal_kwh": annual.thermal_kwh,
        "lighting_kwh": annual.lighting_kwh,
        "energy_kwh": annual.thermal_kwh + annual.lighting_kwh,
        "sec_kwh_kg": annual.sec_kwh_kg,
        "e_heating_kwh": bill.e_heating_kwh,
        "e_cooling_kwh": bill.e_cooling_kwh,
        "e_lighting_kwh": bill.e_lighting_kwh,
        "e_total_kwh": bill.e_total_kwh,
        "seec_kwh_kg": bill.seec_kwh_kg,
        "scop_heating": bill.seasonal_cop_heat,
        "scop_cooling": bill.seasonal_cop_cool,
        "cap_heating_w": bill.cap_heating_w,
        "cap_cooling_w": bill.cap_cooling_w,
        "peak_heat_w": annual.peak_heat_w,
        "peak_cool_w": annual.peak_cool_w,
        "p_light_w": p_light_w,
        "water_net_l": annual.water_net_l,
        "et_l": annual.et_l,
        "hum_l": annual.hum_l,
        "cond_l": annual.cond_l,
        "wue_g_l": annual.wue_g_l,
        "co2_injected_kg": annual.co2_injected_kg,
        "co2_uptake_kg": annual.co2_uptake_kg,
        "capex_usd": capex_bd.total,
        "capex_insulation_usd": capex_bd.insulation,
        "c_rep_usd": eres.c_rep_usd,
        "crf": eres.crf,
        "annuity_usd": (capex_bd.total + eres.c_rep_usd) * eres.crf,
        "opex_usd": opex_bd.total,
        "opex_electricity_usd": opex_bd.electricity,
        "labour_share": opex_bd.labour_share,
        "lcol_usd_kg": eres.lcol_usd_kg,
        "vf_g_kg": sav.vf_g_kg,
        "import_g_kg": sav.import_g_kg,
        "savings_g_kg": sav.abs_g_kg,
        "savings_rel": sav.rel,
        "breakeven_gain": sav.breakeven_efficiency_gain,
        "emissions_t_y": vf_g * annual.yield_kg / 1e6,
        "daily": {k: [float(v) for v in arr] for k, arr in annual.daily.items()},
    }


SUMMARY_COLUMNS = [
    "id", "location", "climate", "insulated", "ppfd", "t_in_c", "co2_ppm",
    "yield_kg", "cycles", "productivity_kg_m2", "cycle_days",
    "heating_kwh", "cooling_kwh", "dehum_kwh", "postheat_kwh", "thermal_kwh",
    "lighting_kwh", "energy_kwh", "sec_kwh_kg",
    "e_heating_kwh", "e_cooling_kwh", "e_lighting_kwh", "e_total_kwh",
    "seec_kwh_kg", "scop_heating", "scop_cooling",
    "cap_heating_w", "cap_cooling_w", "peak_heat_w", "peak_cool_w", "p_light_w",
    "water_net_l", "et_l", "hum_l", "cond_l", "wue_g_l",
    "co2_injected_kg", "co2_uptake_kg",
    "capex_usd", "capex_insulation_usd", "c_rep_usd", "crf", "annuity_usd",
    "opex_usd", "opex_electricity_usd", "labour_share", "lcol_usd_kg",
    "vf_g_kg", "import_g_kg", "savings_g_kg", "savings_rel", "breakeven_gain",
    "emissions_t_y",
]

SENSITIVITY_INPUTS = ["climate", "insulated", "ppfd", "t_in_c", "co2_ppm"]
SENSITIVITY_OUTCOMES = [
    "yield_kg", "energy_kwh", "e_total_kwh", "sec_kwh_kg", "seec_kwh_kg",
    "lcol_usd_kg", "wue_g_l", "savings_g_kg",
]


@dataclass
class SweepReport:
    """Merged outcome of a sweep: records in grid order plus error records."""

    records: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    sensitivity: list = field(default_factory=list)
    breakeven: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)


_WORKER_CONFIG: SimConfig | None = None


def _worker_init(config_path: str, strict_paper: bool) -> None:
    global _WORKER_CONFIG
    _WORKER_CONFIG = load_config(config_path, strict_paper)


def _worker_run(sid: str):
    config = _WORKER_CONFIG
    try:
        spec = parse_scenario_id(sid, config)
        return sid, run_scenario(config, spec), None
    except VFarmError as exc:
        return sid, None, {"id": sid, "error": type(exc).__name__, "message": str(exc)}
    except Exception as exc:  # scenario isolation: never abort the sweep
        return sid, None, {"id": sid, "error": type(exc).__name__, "message": str(exc)}


def sensitivity_rows(records: list) -> list:
    """Distance-correlation table over the completed records."""
    if len(records) < 2:
        return []
    columns = {
        "climate": [r["climate"] for r in records],
        "insulated": ["I" if r["insulated"] else "O" for r in records],
        "ppfd": [r["ppfd"] for r in records],
        "t_in_c": [r["t_in_c"] for r in records],
        "co2_ppm": [r["co2_ppm"] for r in records],
    }
    for outcome in SENSITIVITY_OUTCOMES:
        columns[outcome] = [r[outcome] for r in records]
    return stats.sensitivity_table(columns, SENSITIVITY_INPUTS,
                                   SENSITIVITY_OUTCOMES)


def breakeven_rows(records: list, config: SimConfig) -> list:
    """Electricity prices equalizing the PPFD variants, per location and T_in.

    Uses insulated scenarios at the middle CO2 level with PPFD 250 as the
    baseline; rows are skipped when the required scenarios are absent.
    """
    axes = config.grid
    if len(axes.ppfd) < 3:
        return []
    co2_axis = sorted(axes.co2_ppm)
    co2_ref = co2_axis[len(co2_axis) // 2]
    by_key = {
        (r["location"], r["insulated"], r["ppfd"], r["t_in_c"], r["co2_ppm"]): r
        for r in records
    }
    lo_p, mid_p, hi_p = sorted(axes.ppfd)[:3]
    rows = []
    for loc in axes.locations:
        baseline_price = config.cost_book.site(loc).electricity_usd_kwh
        for t_in in axes.t_in_c:
            base = by_key.get((loc, True, mid_p, t_in, co2_ref))
            low = by_key.get((loc, True, lo_p, t_in, co2_ref))
            high = by_key.get((loc, True, hi_p, t_in, co2_ref))
            if base is None or low is None or high is None:
                continue

            def fixed(rec):
                return rec["annuity_usd"] + rec["opex_usd"] - rec["opex_electricity_usd"]

            c_high = econ.break_even_electricity(
                fixed(high), high["e_total_kwh"], high["yield_kg"],
                fixed(base), base["e_total_kwh"], base["yield_kg"],
            )
            c_low = econ.break_even_electricity(
                fixed(low), low["e_total_kwh"], low["yield_kg"],
                fixed(base), base["e_total_kwh"], base["yield_kg"],
            )
            rows.append({
                "location": loc,
                "t_in_c": t_in,
                "co2_ppm": co2_ref,
                "c_el_baseline": baseline_price,
                f"c_el_{_num(hi_p)}": c_high,
                f"c_el_{_num(lo_p)}": c_low,
            })
    return rows


def run_sweep(config: SimConfig, workers: int = 1,
              only: list | None = None) -> SweepReport:
    """Run the grid (or the ``only`` subset of ids) and merge the results.

    Scenario failures become error records; the sweep itself always
    completes.  Results are merged in grid order, so the report content is
    independent of the worker count.
    """
    grid = build_grid(config)
    ids = [scenario_id(s, config) for s in grid]
    if only is not None:
        wanted = set(only)
        unknown = wanted - set(ids)
        if unknown:
            raise ConfigError(f"scenario ids not in the grid: {sorted(unknown)}")
        ids = [sid for sid in ids if sid in wanted]

    t0 = time.monotonic()
    outcomes = {}
    if workers <= 1:
        for sid in ids:
            outcomes[sid] = _run_one_local(config, sid)
    else:
        with ProcessPoolExecutor(
            max_workers=workers,
            initializer=_worker_init,
            initargs=(str(config.config_path), config.strict_paper),
        ) as pool:
            for sid, record, error in pool.map(_worker_run, ids, chunksize=4):
                outcomes[sid] = (record, error)

    report = SweepReport()
    for sid in ids:
        record, error = outcomes[sid]
        if error is not None:
            report.errors.append(error)
        else:
            report.records.append(record)
    report.sensitivity = sensitivity_rows(report.records)
    report.breakeven = breakeven_rows(report.records, config)
    report.metadata = {
        "version": _version,
        "config_sha256": config.config_sha256,
        "scenarios": len(ids),
        "completed": len(report.records),
        "failed": len(report.errors),
        "strict_paper": config.strict_paper,
        "elapsed_s": round(time.monotonic() - t0, 3),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    return report


def _run_one_local(config: SimConfig, sid: str):
    try:
        spec = parse_scenario_id(sid, config)
        return run_scenario(config, spec), None
    except VFarmError as exc:
        return None, {"id": sid, "error": type(exc).__name__, "message": str(exc)}
    except Exception as exc:
        return None, {"id": sid, "error": type(exc).__name__, "message": str(exc)}


def _fmt_cell(value) -> str:
    if isinstance(value, bool):
        return "I" if value else "O"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def emit_reports(report: SweepReport, out_dir) -> dict:
    """Write summary.csv, sensitivity.csv, breakeven.csv, loads/ and
    report.json under ``out_dir``; returns the written paths."""
    out = Path(out_dir)
    loads_dir = out / "loads"
    loads_dir.mkdir(parents=True, exist_ok=True)

    paths = {
        "summary": out / "summary.csv",
        "sensitivity": out / "sensitivity.csv",
        "breakeven": out / "breakeven.csv",
        "report": out / "report.json",
    }
    try:
        with open(paths["summary"], "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(SUMMARY_COLUMNS)
            for rec in report.records:
                writer.writerow(_fmt_cell(rec[c]) for c in SUMMARY_COLUMNS)

        with open(paths["sensitivity"], "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["input", "outcome", "rho"])
            for inp, outc, rho in report.sensitivity:
                writer.writerow([inp, outc, f"{rho:.10g}"])

        with open(paths["breakeven"], "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            if report.breakeven:
                cols = list(report.breakeven[0])
            else:
                cols = ["location", "t_in_c", "co2_ppm", "c_el_baseline"]
            writer.writerow(cols)
            for row in report.breakeven:
                writer.writerow(_fmt_cell(row[c]) for c in cols)

        for rec in report.records:
            with open(loads_dir / f"{rec['id']}.csv", "w", newline="",
                      encoding="utf-8") as fh:
                writer = csv.writer(fh)
                daily = rec["daily"]
                names = ["q_heat", "q_cool", "q_dehum", "q_postheat"]
                writer.writerow(["day"] + [f"{n}_kwh" for n in names])
                for day in range(len(daily["q_heat"])):
                    writer.writerow(
                        [day + 1] + [f"{daily[n][day]:.10g}" for n in names]
                    )

        body = {
            "metadata": report.metadata,
            "records": [
                {k: v for k, v in rec.items() if k != "daily"}
                for rec in report.records
            ],
            "errors": report.errors,
            "sensitivity": [
                {"input": i, "outcome": o, "rho": r}
                for i, o, r in report.sensitivity
            ],
            "breakeven": report.breakeven,
        }
        with open(paths["report"], "w", encoding="utf-8") as fh:
            json.dump(body, fh, indent=1, sort_keys=True, allow_nan=True)
            fh.write("\n")
    except OSError as exc:
        raise ConfigError(f"cannot write report under {out}: {exc}") from exc
    return paths

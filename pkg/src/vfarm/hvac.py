"""Two air-to-water heat pumps turn thermal duties into electricity.

One unit covers heating plus the dehumidifier post-heat, the other covers
cooling plus the dehumidifier coil; both may run in the same step.  The
instantaneous COP is the nominal value scaled by a temperature multiplier
table (normalized at the unit's rating point) and a part-load factor curve.
Tables ship as data files under ``data/hvac/``.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np
import yaml

from .chamber import StepSeries
from .errors import CapacityError, ConfigError, DomainError

HEATING = "heating"
COOLING = "cooling"


@dataclass(frozen=True)
class HeatPumpSpec:
    """One unit's performance map; capacity is attached after sizing."""

    duty: str
    cop_nominal: float
    rating_t_ext_c: float
    t_wat_c: float
    t_ext_axis: tuple
    t_wat_axis: tuple
    cop_t_grid: tuple            # rows over t_ext_axis, cols over t_wat_axis
    plr_axis: tuple
    plf_values: tuple
    q_nominal_w: float = 0.0
    min_t_ext_c: float | None = None
    aux_coeff: float = 0.008     # kW_el per kW_th of parasitics

    def with_capacity(self, q_nominal_w: float) -> "HeatPumpSpec":
        return dataclasses.replace(self, q_nominal_w=float(q_nominal_w))

    def _ratio(self, t_ext):
        """Temperature multiplier at this unit's water temperature (clamped)."""
        t = np.asarray(t_ext, dtype=float)
        if self.min_t_ext_c is not None:
            t = np.maximum(t, self.min_t_ext_c)
        t = np.clip(t, self.t_ext_axis[0], self.t_ext_axis[-1])
        grid = np.asarray(self.cop_t_grid, dtype=float)
        tw = min(max(self.t_wat_c, self.t_wat_axis[0]), self.t_wat_axis[-1])
        if len(self.t_wat_axis) == 1:
            col = grid[:, 0]
        else:
            j = np.searchsorted(self.t_wat_axis, tw, side="right")
            j = min(max(j, 1), len(self.t_wat_axis) - 1)
            w0, w1 = self.t_wat_axis[j - 1], self.t_wat_axis[j]
            f = (tw - w0) / (w1 - w0)
            col = grid[:, j - 1] * (1.0 - f) + grid[:, j] * f
        return np.interp(t, self.t_ext_axis, col)

    def plf(self, plr):
        return np.interp(np.asarray(plr, dtype=float), self.plr_axis, self.plf_values)


def cop(spec: HeatPumpSpec, t_ext, plr) -> float:
    """Instantaneous COP: nominal x temperature multiplier x part-load factor.

    The multiplier is read off the unit's table (bilinear over outdoor and
    water temperature, clamped at the edges) and normalized so the rating
    point returns exactly ``cop_nominal``.  The cooling unit's effective
    outdoor temperature is clamped below at ``min_t_ext_c``.
    """
    plr_arr = np.asarray(plr, dtype=float)
    if np.any(plr_arr <= 0.0) or np.any(plr_arr > 1.0 + 1e-9):
        raise DomainError(f"part-load ratio must be in (0, 1], got {plr}")
    ratio = spec._ratio(t_ext) / spec._ratio(spec.rating_t_ext_c)
    value = spec.cop_nominal * ratio * spec.plf(np.minimum(plr_arr, 1.0))
    return float(value) if np.ndim(t_ext) == 0 and np.ndim(plr) == 0 else value


def electric_power(spec: HeatPumpSpec, q_w: float, t_ext: float,
                   scenario: str = "", when: str = "") -> float:
    """Electric draw (W) to deliver ``q_w`` of thermal duty; zero in, zero out."""
    if q_w == 0.0:
        return 0.0
    if q_w < 0.0:
        raise DomainError(f"thermal duty must be non-negative, got {q_w}")
    if spec.q_nominal_w <= 0.0:
        raise ConfigError(f"{spec.duty} heat pump has no capacity assigned")
    if q_w > spec.q_nominal_w * (1.0 + 1e-9):
        raise CapacityError(
            f"{scenario}: {spec.duty} load {q_w / 1000.0:.2f} kW exceeds installed "
            f"{spec.q_nominal_w / 1000.0:.0f} kW at {when}"
        )
    plr = min(q_w / spec.q_nominal_w, 1.0)
    return q_w / cop(spec, t_ext, plr) + spec.aux_coeff * q_w


def size_capacity(peak_w: float, margin: float = 1.1) -> float:
    """Installed capacity: margin times peak, rounded up to a whole kW."""
    if peak_w < 0.0:
        raise DomainError(f"peak load must be non-negative, got {peak_w}")
    if peak_w == 0.0:
        return 0.0
    return math.ceil(margin * peak_w / 1000.0) * 1000.0


@dataclass
class HvacAnnual:
    """Electricity bill of one scenario-year."""

    e_heating_kwh: float
    e_cooling_kwh: float
    e_lighting_kwh: float
    seasonal_cop_heat: float     # nan when the service never ran
    seasonal_cop_cool: float
    cap_heating_w: float
    cap_cooling_w: float
    yield_kg: float
    diagnostics: dict

    @property
    def e_total_kwh(self) -> float:
        return self.e_heating_kwh + self.e_cooling_kwh + self.e_lighting_kwh

    @property
    def seec_kwh_kg(self) -> float:
        if self.yield_kg <= 0.0:
            raise DomainError("SEEC undefined for zero yield")
        return self.e_total_kwh / self.yield_kg


def _service_energy(q: np.ndarray, t_ext: np.ndarray, spec: HeatPumpSpec,
                    dt_s: float, scenario: str):
    """Electricity and seasonal COP for one duty series."""
    peak = float(np.max(q)) if q.size else 0.0
    if peak <= 0.0:
        return 0.0, math.nan, spec.with_capacity(0.0), 0
    cap = size_capacity(peak)
    sized = spec.with_capacity(cap)
    if peak > cap * (1.0 + 1e-9):
        raise CapacityError(f"{scenario}: sizing produced {cap} W below peak {peak} W")
    on = q > 0.0
    plr = np.minimum(q[on] / cap, 1.0)
    cop_series = cop(sized, t_ext[on], plr)
    compressor_wh = np.sum(q[on] / cop_series) * dt_s / 3600.0
    total_wh = compressor_wh + spec.aux_coeff * np.sum(q[on]) * dt_s / 3600.0
    q_wh = np.sum(q[on]) * dt_s / 3600.0
    scop = q_wh / compressor_wh
    n_clamped = int(np.sum((t_ext[on] < spec.t_ext_axis[0])
                           | (t_ext[on] > spec.t_ext_axis[-1])))
    return total_wh / 1000.0, scop, sized, n_clamped


def annualize(series: StepSeries, heating: HeatPumpSpec, cooling: HeatPumpSpec,
              lighting_kwh: float, yield_kg: float,
              scenario: str = "") -> HvacAnnual:
    """Convert the load series to electricity; sizes each unit at 1.1x peak.

    Seasonal COP is thermal output over compressor electricity (parasitics
    excluded); the parasitics are still billed in the energy totals.
    """
    e_heat, scop_h, heat_sized, clamp_h = _service_energy(
        series.q_heat, series.t_ext, heating, series.dt_s, scenario
    )
    e_cool, scop_c, cool_sized, clamp_c = _service_energy(
        series.q_cool, series.t_ext, cooling, series.dt_s, scenario
    )
    return HvacAnnual(
        e_heating_kwh=e_heat,
        e_cooling_kwh=e_cool,
        e_lighting_kwh=lighting_kwh,
        seasonal_cop_heat=scop_h,
        seasonal_cop_cool=scop_c,
        cap_heating_w=heat_sized.q_nominal_w,
        cap_cooling_w=cool_sized.q_nominal_w,
        yield_kg=yield_kg,
        diagnostics={"t_ext_clamped_heating": clamp_h,
                     "t_ext_clamped_cooling": clamp_c},
    )


# ---------------------------------------------------------------------------
# Data loading
# ---------------------------------------------------------------------------

def _build_spec(duty: str, block: dict, aux: float, path) -> HeatPumpSpec:
    try:
        rating = block["rating"]
        table = block["cop_t"]
        t_wat_axis = tuple(float(v) for v in table["t_wat_c"])
        rows = table["rows"]
        t_ext_axis = tuple(float(r["t_ext_c"]) for r in rows)
        grid = tuple(tuple(float(v) for v in r["multipliers"]) for r in rows)
        plf_rows = block["plf"]
        plr_axis = tuple(float(r["plr"]) for r in plf_rows)
        plf_values = tuple(float(r["plf"]) for r in plf_rows)
        spec = HeatPumpSpec(
            duty=duty,
            cop_nominal=float(block["cop_nominal"]),
            rating_t_ext_c=float(rating["t_ext_c"]),
            t_wat_c=float(rating["t_wat_c"]),
            t_ext_axis=t_ext_axis,
            t_wat_axis=t_wat_axis,
            cop_t_grid=grid,
            plr_axis=plr_axis,
            plf_values=plf_values,
            min_t_ext_c=(float(block["min_t_ext_c"])
                         if block.get("min_t_ext_c") is not None else None),
            aux_coeff=aux,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: malformed {duty} heat-pump block: {exc}") from exc

    if spec.cop_nominal <= 1.0:
        raise ConfigError(f"{path}: {duty} cop_nominal must exceed 1")
    if any(t1 <= t0 for t0, t1 in zip(t_ext_axis, t_ext_axis[1:])):
        raise ConfigError(f"{path}: {duty} t_ext axis must be strictly increasing")
    if len(grid) != len(t_ext_axis) or any(len(r) != len(t_wat_axis) for r in grid):
        raise ConfigError(f"{path}: {duty} multiplier grid shape mismatch")
    if any(v <= 0.0 for row in grid for v in row):
        raise ConfigError(f"{path}: {duty} multipliers must be positive")
    if plr_axis != tuple(sorted(plr_axis)) or plr_axis[-1] != 1.0:
        raise ConfigError(f"{path}: {duty} plf curve must end at plr = 1")
    if abs(plf_values[-1] - 1.0) > 1e-12:
        raise ConfigError(f"{path}: {duty} plf(1.0) must equal 1")
    return spec


def load_heatpumps(path):
    """Read both units from the YAML performance file; returns (heating, cooling)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = yaml.safe_load(fh)
    except (OSError, yaml.YAMLError) as exc:
        raise ConfigError(f"cannot read heat-pump file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: expected a mapping at top level")
    aux = float(doc.get("aux_coeff", 0.008))
    if HEATING not in doc or COOLING not in doc:
        raise ConfigError(f"{path}: must define both 'heating' and 'cooling' units")
    return (_build_spec(HEATING, doc[HEATING], aux, path),
            _build_spec(COOLING, doc[COOLING], aux, path))

"""Lettuce growth, harvest cycling, transpiration and CO2 uptake.

Dry-mass accumulation follows a light-interception model: photon flux times
canopy interception times a light-use efficiency that depends on air
temperature and photon flux density, times a CO2 response factor.  Both
response surfaces are bilinear tables shipped with the package and calibrated
so the default parameter set reproduces published cycle lengths and annual
productivities.  Transpiration uses the reference-evapotranspiration form with
a stage coefficient tied to leaf area index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError, DomainError
from .psychro import delta_es, psychrometric_gamma, vpd

# Stored photosynthate enthalpy: 2807 kJ per mol glucose-equivalent dry mass,
# molar mass 180 g/mol.
PHOTO_ENERGY_J_PER_G = 2807e3 / 180.0
CO2_PER_DRY_MASS = 2.0          # g CO2 fixed per g dry mass
SECONDS_PER_DAY = 86400.0


def _bilinear(x_axis, y_axis, table, x, y):
    """Clamped bilinear interpolation on a small rectangular table.

    ``table[i, j]`` corresponds to ``x_axis[i]``, ``y_axis[j]``.
    """
    x = min(max(float(x), x_axis[0]), x_axis[-1])
    y = min(max(float(y), y_axis[0]), y_axis[-1])
    i = int(np.searchsorted(x_axis, x, side="right") - 1)
    j = int(np.searchsorted(y_axis, y, side="right") - 1)
    i = min(max(i, 0), len(x_axis) - 2)
    j = min(max(j, 0), len(y_axis) - 2)
    fx = (x - x_axis[i]) / (x_axis[i + 1] - x_axis[i])
    fy = (y - y_axis[j]) / (y_axis[j + 1] - y_axis[j])
    return (
        table[i, j] * (1 - fx) * (1 - fy)
        + table[i + 1, j] * fx * (1 - fy)
        + table[i, j + 1] * (1 - fx) * fy
        + table[i + 1, j + 1] * fx * fy
    )


@dataclass(frozen=True)
class CropParams:
    """Cultivar parameters; load defaults with :func:`load_crop_params`."""

    k: float                        # canopy extinction coefficient
    sla_m2_g: float                 # specific leaf area, m2 per g dry mass
    rf: float                       # root fraction of dry mass (no leaf area)
    dmc: float                      # dry-matter content of fresh mass
    plant_density_m2: float         # plants per m2 of cultivated area
    harvest_fm_g_plant: float       # fresh mass per plant triggering harvest
    transplant_dm_g_m2: float       # dry mass per m2 at transplant
    lue_t_axis: tuple               # degC anchors of the LUE table
    lue_ppfd_axis: tuple            # umol m-2 s-1 anchors
    lue_table_g_umol: tuple         # rows follow lue_t_axis
    fco2_axis: tuple                # ppm anchors of the CO2 factor table
    fco2_ppfd_axis: tuple
    fco2_table: tuple               # rows follow fco2_axis
    kc_stages: tuple                # ((lai_upper, kc), ...) last row open-ended
    dark_et_factor: float           # stomatal night-closure multiplier on ET

    @property
    def harvest_dm_g_m2(self) -> float:
        return self.harvest_fm_g_plant * self.plant_density_m2 * self.dmc

    @property
    def leaf_area_per_dm(self) -> float:
        """m2 leaf per g dry mass: sla reduced by the rootless fraction."""
        return self.sla_m2_g * (1.0 - self.rf)

    def lai(self, dm_g_m2: float) -> float:
        return self.leaf_area_per_dm * dm_g_m2

    def lue(self, t_in: float, ppfd: float) -> float:
        """Dry-mass light-use efficiency (g per umol photons)."""
        return _bilinear(
            np.asarray(self.lue_t_axis),
            np.asarray(self.lue_ppfd_axis),
            np.asarray(self.lue_table_g_umol),
            t_in,
            ppfd,
        )

    def f_co2(self, co2_ppm: float, ppfd: float) -> float:
        """CO2 response multiplier, calibrated to 1.0 at 1200 ppm."""
        return _bilinear(
            np.asarray(self.fco2_axis),
            np.asarray(self.fco2_ppfd_axis),
            np.asarray(self.fco2_table),
            co2_ppm,
            ppfd,
        )

    def kc(self, lai: float) -> float:
        """Stage coefficient for transpiration, stepped on LAI thresholds."""
        for lai_upper, kc in self.kc_stages[:-1]:
            if lai < lai_upper:
                return kc
        return self.kc_stages[-1][1]


@dataclass(frozen=True)
class CropState:
    """Evolving canopy state for one cultivation cycle."""

    dm_g_m2: float
    age_days: float = 0.0
    cycle_index: int = 0

    def lai(self, params: CropParams) -> float:
        return params.lai(self.dm_g_m2)

    def fm_g_m2(self, params: CropParams) -> float:
        return self.dm_g_m2 / params.dmc

    def fm_g_plant(self, params: CropParams) -> float:
        return self.fm_g_m2(params) / params.plant_density_m2


def initial_state(params: CropParams) -> CropState:
    return CropState(dm_g_m2=params.transplant_dm_g_m2)


def growth_step(state: CropState, params: CropParams, ppfd: float, t_in: float,
                co2_ppm: float, lights_on: bool, dt_s: float):
    """Advance dry mass by one explicit step.

    Returns ``(new_state, ddm_g_m2)`` where ``ddm`` is the dry-mass increment
    of this step (zero in the dark).  The interception term uses the leaf area
    at the start of the step.
    """
    if not lights_on:
        return replace(state, age_days=state.age_days + dt_s / SECONDS_PER_DAY), 0.0
    interception = 1.0 - math.exp(-params.k * state.lai(params))
    ddm = ppfd * interception * params.lue(t_in, ppfd) * params.f_co2(co2_ppm, ppfd) * dt_s
    return (
        replace(
            state,
            dm_g_m2=state.dm_g_m2 + ddm,
            age_days=state.age_days + dt_s / SECONDS_PER_DAY,
        ),
        ddm,
    )


def check_harvest(state: CropState, params: CropParams):
    """Harvest when per-plant fresh mass reaches the target.

    Returns ``(new_state, harvested_fm_g_m2)``; the fresh mass is zero when no
    harvest occurred.  On harvest the state resets to a fresh transplant and
    the cycle counter advances.
    """
    if state.fm_g_plant(params) < params.harvest_fm_g_plant:
        return state, 0.0
    harvested = state.fm_g_m2(params)
    new = CropState(
        dm_g_m2=params.transplant_dm_g_m2,
        age_days=0.0,
        cycle_index=state.cycle_index + 1,
    )
    return new, harvested


def co2_uptake_rate(ddm_g_m2: float, dt_s: float) -> float:
    """CO2 drawn from the room air (g m-2 s-1) for a step's dry-mass gain."""
    return CO2_PER_DRY_MASS * ddm_g_m2 / dt_s


def et_flux(state: CropState, params: CropParams, t_in: float, rh_in: float,
            rad_n: float, u: float) -> float:
    """Transpiration flux (kg water s-1 per m2 of cultivated area).

    ``rad_n`` is the shortwave radiation absorbed at canopy level expressed on
    the daily-equivalent basis (MJ m-2 day-1); the combination equation yields
    a daily-equivalent depth in mm/day which is returned as an instantaneous
    flux (divided by 86400).  Negative ``rad_n`` is clamped to zero.
    """
    rad_n = max(rad_n, 0.0)
    delta = delta_es(t_in)
    gamma = psychrometric_gamma()
    vpd_in = vpd(t_in, rh_in)
    numerator = 0.408 * delta * rad_n + 900.0 * u * gamma * vpd_in / (t_in + 273.15)
    denominator = delta + gamma * (1.0 + 0.34 * u)
    mm_day = 1.05 * (numerator / denominator) * params.kc(state.lai(params))
    return max(mm_day, 0.0) / SECONDS_PER_DAY


# ---------------------------------------------------------------------------
# Annual trajectory (used by the chamber's vector engine)
# ---------------------------------------------------------------------------

@dataclass
class CropYear:
    """Precomputed one-year canopy trajectory on the simulation step grid."""

    dm_start: np.ndarray        # g/m2 at each step start
    ddm: np.ndarray             # g/m2 gained during each step
    lai: np.ndarray
    kc: np.ndarray
    interception: np.ndarray
    harvest: np.ndarray         # bool, True on harvest steps
    cycles: int                 # completed harvests in the year
    yield_fm_g_m2: float        # fresh mass of completed harvests
    yield_dm_g_m2: float        # dry mass of completed harvests
    water_in_biomass_g_m2: float  # sum over harvests of d(FM - DM) vs transplant
    cycle_lengths_days: list

    @property
    def uptake_co2_g_m2(self) -> float:
        return CO2_PER_DRY_MASS * float(np.sum(self.ddm))


def simulate_crop_year(params: CropParams, ppfd: float, t_in: float,
                       co2_ppm: float, lights_on: np.ndarray,
                       dt_s: float) -> CropYear:
    """Run the growth recurrence over a year of steps.

    ``lights_on`` is a boolean array defining the photoperiod on the step
    grid.  The canopy trajectory does not depend on the thermal state because
    the room is held at setpoints, so this can be computed once per
    (ppfd, t_in, co2) combination and reused.
    """
    c = ppfd * params.lue(t_in, ppfd) * params.f_co2(co2_ppm, ppfd)
    a = params.k * params.leaf_area_per_dm
    thresh = params.harvest_dm_g_m2
    dm0 = params.transplant_dm_g_m2

    n = lights_on.size
    dm_start = np.empty(n)
    ddm = np.zeros(n)
    harvest = np.zeros(n, dtype=bool)

    exp = math.exp
    d = dm0
    cycles = 0
    yield_fm = 0.0
    yield_dm = 0.0
    water = 0.0
    cycle_lengths = []
    cycle_start_step = 0
    lights_list = lights_on.tolist()

    for i in range(n):
        dm_start[i] = d
        if lights_list[i]:
            g = c * (1.0 - exp(-a * d)) * dt_s
            ddm[i] = g
            d += g
            if d >= thresh:
                fm = d / params.dmc
                fm0 = dm0 / params.dmc
                yield_fm += fm
                yield_dm += d
                water += (fm - fm0) - (d - dm0)
                cycles += 1
                harvest[i] = True
                cycle_lengths.append((i + 1 - cycle_start_step) * dt_s / SECONDS_PER_DAY)
                cycle_start_step = i + 1
                d = dm0

    lai = params.leaf_area_per_dm * dm_start
    interception = 1.0 - np.exp(-params.k * lai)
    kc_edges = [edge for edge, _ in params.kc_stages[:-1]]
    kc_vals = np.array([kc for _, kc in params.kc_stages])
    kc = kc_vals[np.searchsorted(np.array(kc_edges), lai, side="right")]

    return CropYear(
        dm_start=dm_start,
        ddm=ddm,
        lai=lai,
        kc=kc,
        interception=interception,
        harvest=harvest,
        cycles=cycles,
        yield_fm_g_m2=yield_fm,
        yield_dm_g_m2=yield_dm,
        water_in_biomass_g_m2=water,
        cycle_lengths_days=cycle_lengths,
    )


# ---------------------------------------------------------------------------
# Parameter file
# ---------------------------------------------------------------------------

def load_crop_params(path) -> CropParams:
    """Read a cultivar parameter file (YAML, units documented in the file)."""
    path = Path(path)
    try:
        raw = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML ({exc})") from None
    try:
        lue = raw["lue"]
        fco2 = raw["f_co2"]
        params = CropParams(
            k=float(raw["k"]),
            sla_m2_g=float(raw["sla_m2_g"]),
            rf=float(raw["rf"]),
            dmc=float(raw["dmc"]),
            plant_density_m2=float(raw["plant_density_m2"]),
            harvest_fm_g_plant=float(raw["harvest_fm_g_plant"]),
            transplant_dm_g_m2=float(raw["transplant_dm_g_m2"]),
            lue_t_axis=tuple(float(v) for v in lue["t_axis_c"]),
            lue_ppfd_axis=tuple(float(v) for v in lue["ppfd_axis"]),
            lue_table_g_umol=tuple(tuple(float(v) for v in row) for row in lue["table_g_per_umol"]),
            fco2_axis=tuple(float(v) for v in fco2["co2_axis_ppm"]),
            fco2_ppfd_axis=tuple(float(v) for v in fco2["ppfd_axis"]),
            fco2_table=tuple(tuple(float(v) for v in row) for row in fco2["table"]),
            kc_stages=tuple(
                (float(s["lai_below"]) if s.get("lai_below") is not None else math.inf,
                 float(s["kc"]))
                for s in raw["kc_stages"]
            ),
            dark_et_factor=float(raw["dark_et_factor"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: missing or malformed crop field: {exc!r}") from None
    _validate(params, path)
    return params


def _validate(p: CropParams, path) -> None:
    checks = [
        (p.k > 0, "k must be positive"),
        (p.sla_m2_g > 0, "sla_m2_g must be positive"),
        (0 <= p.rf < 1, "rf must be in [0, 1)"),
        (0 < p.dmc < 1, "dmc must be in (0, 1)"),
        (p.transplant_dm_g_m2 > 0, "transplant_dm_g_m2 must be positive"),
        (p.harvest_dm_g_m2 > p.transplant_dm_g_m2, "harvest target below transplant mass"),
        (len(p.lue_table_g_umol) == len(p.lue_t_axis), "lue table rows must match t axis"),
        (all(len(r) == len(p.lue_ppfd_axis) for r in p.lue_table_g_umol),
         "lue table columns must match ppfd axis"),
        (len(p.fco2_table) == len(p.fco2_axis), "f_co2 table rows must match co2 axis"),
        (all(len(r) == len(p.fco2_ppfd_axis) for r in p.fco2_table),
         "f_co2 table columns must match ppfd axis"),
        (all(all(v > 0 for v in row) for row in p.lue_table_g_umol), "lue values must be positive"),
    ]
    for ok, msg in checks:
        if not ok:
            raise ConfigError(f"{path}: {msg}")

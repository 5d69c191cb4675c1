"""Single-zone chamber balance: heat, moisture and CO2 at fixed setpoints.

The room is held exactly at its temperature, humidity and CO2 setpoints
(ideal control), so each step reduces to bookkeeping: whatever the envelope,
lighting, crop and ventilation leave unbalanced is met by the heating coil,
the cooling coil (which also condenses moisture down to a fixed apparatus dew
point), spray humidification, or a dehumidifying air-handling unit that
reheats its outlet back to room temperature.  The split has a closed-form
solution per step; `step` is the scalar reference implementation and
`integrate_year` the vectorised annual engine (`engine="step"` runs the same
loop through `step` for cross-checks).

Sign conventions: `q_env` and `q_vent` are gains into the room (negative when
the room loses heat); all plant loads (`q_heat`, `q_cool`, `q_dehum`,
`q_postheat`) are positive duties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

import numpy as np

from . import crop as crop_mod
from . import weather as weather_mod
from .crop import CropParams, CropState, CropYear
from .errors import DomainError, SimulationError
from .psychro import (
    AIR_DENSITY,
    CP_AIR,
    LATENT_HEAT,
    delta_es,
    humidity_ratio,
    psychrometric_gamma,
    vpd,
)

SIGMA = 5.67e-8                 # W m-2 K-4
PAR_J_PER_UMOL = 0.2188         # radiant energy per umol of photons at canopy
CO2_KG_PER_KG_PPM = 1.51926e-6  # kg CO2 per kg air per ppm (44.01/28.97 * 1e-6)


@dataclass(frozen=True)
class Geometry:
    """Chamber box and cultivation layout."""

    width_m: float = 7.0
    depth_m: float = 7.0
    height_m: float = 3.0
    tiers: int = 3
    crop_area_m2: float = 90.0

    @property
    def footprint_m2(self) -> float:
        return self.width_m * self.depth_m

    @property
    def volume_m3(self) -> float:
        return self.footprint_m2 * self.height_m

    @property
    def wall_area_m2(self) -> float:
        return 2.0 * (self.width_m + self.depth_m) * self.height_m

    @property
    def envelope_area_m2(self) -> float:
        return self.wall_area_m2 + 2.0 * self.footprint_m2

    @property
    def air_mass_kg(self) -> float:
        return AIR_DENSITY * self.volume_m3


@dataclass(frozen=True)
class Envelope:
    """Opaque envelope properties for the sol-air heat flow."""

    u_value: float                  # W m-2 K-1, air-to-air
    solar_absorptance: float = 0.4
    lw_emissivity: float = 0.85
    h_out: float = 25.0             # exterior combined film, W m-2 K-1
    sky_depression_k: float = 15.0  # clear-sky T_ext - T_sky


@dataclass(frozen=True)
class Setpoints:
    """Controlled indoor state and photoperiod schedule."""

    t_in_c: float = 24.0
    rh_light: float = 0.75
    rh_dark: float = 0.85
    co2_ppm: float = 900.0
    ppfd: float = 250.0
    photoperiod_h: float = 16.0
    lights_on_hour: float = 4.0

    def lights_on(self, hour_local):
        h = np.asarray(hour_local)
        on = (h >= self.lights_on_hour) & (h < self.lights_on_hour + self.photoperiod_h)
        return bool(on) if np.ndim(hour_local) == 0 else on

    def rh_set(self, lights_on):
        return np.where(lights_on, self.rh_light, self.rh_dark)


@dataclass(frozen=True)
class ChamberParams:
    """Plant-side constants of the chamber systems."""

    air_changes_per_hour: float = 0.08
    apparatus_dew_point_c: float = 10.0
    air_speed_m_s: float = 0.4          # over the canopy, for the ET form
    led_efficacy_umol_j: float = 3.0    # delivered photons per J electricity
    led_radiant_fraction: float = 0.85  # hardware property; the balance routes
                                        # all non-biomass electricity to the room
    ahu_recovery: float = 0.75          # sensible effectiveness of the AHU
                                        # precool/reheat recuperator
    dt_s: float = 600.0

    def vent_flow(self, geometry: Geometry) -> float:
        """Ventilation air mass flow, kg/s."""
        return self.air_changes_per_hour * geometry.volume_m3 * AIR_DENSITY / 3600.0


def lighting_power(setpoints: Setpoints, geometry: Geometry,
                   params: ChamberParams, ddm_g_m2_s: float = 0.0):
    """Electric draw of the LED array and its net heat release to the room.

    Electric power is delivered photon flux over the luminaire efficacy.
    The only energy that does not end up as room heat is the share stored as
    biomass enthalpy by the current growth rate ``ddm_g_m2_s``.
    Returns ``(p_electric_w, q_into_room_w)``.
    """
    p_el = setpoints.ppfd * geometry.crop_area_m2 / params.led_efficacy_umol_j
    q_plant = ddm_g_m2_s * geometry.crop_area_m2 * crop_mod.PHOTO_ENERGY_J_PER_G
    return p_el, p_el - q_plant


def envelope_flux(geometry: Geometry, envelope: Envelope, t_in: float,
                  t_ext, surf_irr=None, clearness=0.0):
    """Heat loss through the opaque envelope (W, positive out of the room).

    Solar gain and longwave sky exchange enter through per-surface sol-air
    temperatures; ``surf_irr`` is a mapping as returned by
    :func:`vfarm.weather.surface_irradiance` (None means no sun) and
    ``clearness`` in [0, 1] scales the sky temperature depression (0 disables
    the longwave term).  The floor exchanges with ``t_ext`` directly.
    """
    t_ext = np.asarray(t_ext, dtype=float)
    t_sky = t_ext - envelope.sky_depression_k * np.asarray(clearness, dtype=float)
    d_r = SIGMA * ((t_ext + 273.15) ** 4 - (t_sky + 273.15) ** 4)

    areas = {
        "roof": geometry.footprint_m2,
        "north": geometry.wall_area_m2 / 4.0,
        "east": geometry.wall_area_m2 / 4.0,
        "south": geometry.wall_area_m2 / 4.0,
        "west": geometry.wall_area_m2 / 4.0,
        "floor": geometry.footprint_m2,
    }
    sky_view = {"roof": 1.0, "north": 0.5, "east": 0.5, "south": 0.5, "west": 0.5,
                "floor": 0.0}

    q_loss = 0.0
    for name, area in areas.items():
        irr = 0.0 if surf_irr is None else surf_irr.get(name, 0.0)
        t_sa = t_ext + (
            envelope.solar_absorptance * np.asarray(irr, dtype=float)
            - envelope.lw_emissivity * sky_view[name] * d_r
        ) / envelope.h_out
        q_loss = q_loss + envelope.u_value * area * (t_in - t_sa)
    return float(q_loss) if np.ndim(t_ext) == 0 and np.ndim(clearness) == 0 else q_loss


# ---------------------------------------------------------------------------
# Step balance
# ---------------------------------------------------------------------------

@dataclass
class StepLoads:
    """Per-step power and mass-flow bookkeeping (W, kg/s; CO2 in kg/s)."""

    q_heat: float = 0.0
    q_cool: float = 0.0            # total coil duty incl. latent
    q_cool_latent: float = 0.0
    q_dehum: float = 0.0           # AHU coil duty incl. latent
    q_postheat: float = 0.0
    q_light: float = 0.0           # electricity minus biomass share
    q_plant: float = 0.0
    q_eva: float = 0.0             # transpiration latent conversion
    q_hum: float = 0.0             # spray evaporative cooling
    q_env: float = 0.0             # envelope gain (+ into room)
    q_vent: float = 0.0            # ventilation sensible gain (+ into room)
    p_light_el: float = 0.0
    m_et: float = 0.0
    m_hum: float = 0.0
    m_cond_coil: float = 0.0
    m_cond_ahu: float = 0.0
    m_vent_water: float = 0.0      # moisture gain via ventilation (+ in)
    m_storage: float = 0.0         # room-air moisture storage rate
    co2_injected: float = 0.0
    co2_uptake: float = 0.0
    co2_vent: float = 0.0          # enrichment lost through ventilation (+)

    def closure_residual(self) -> float:
        """Sensible-balance residual; zero for a correctly split step."""
        return (
            self.q_heat
            - (self.q_cool - self.q_cool_latent)
            + self.q_light
            + self.q_env
            + self.q_vent
            - self.q_eva
            - self.q_hum
        )


def _split_hvac(q_net: float, excess: float, t_in: float, w_target: float,
                adp_c: float, recovery: float = 0.0,
                scenario: str = "", when: str = ""):
    """Closed-form split of a step's residuals across the four duties.

    ``q_net`` is the net sensible gain before plant action, ``excess`` the
    moisture surplus (kg/s) that must leave the air to hold the setpoint.
    ``recovery`` is the sensible effectiveness of the AHU recuperator that
    precools intake air against the cold off-coil stream; the coil and the
    reheater each pay only the unrecovered ``1 - recovery`` share of the
    sensible swing down to the apparatus dew point.
    Returns a dict of duties and moisture flows.
    """
    dt_coil = t_in - adp_c
    if dt_coil <= 0.5:
        raise SimulationError(
            f"{scenario}: apparatus dew point {adp_c} degC too close to room "
            f"temperature {t_in} degC at {when}"
        )
    if not 0.0 <= recovery <= 1.0:
        raise SimulationError(
            f"{scenario}: AHU recovery effectiveness {recovery} outside [0, 1]"
        )
    w_adp = humidity_ratio(adp_c, 1.0)
    d_w = w_target - w_adp
    if d_w <= 0.0:
        raise SimulationError(
            f"{scenario}: room dew point below apparatus dew point at {when}; "
            "moisture cannot be removed"
        )
    h_fg = LATENT_HEAT
    ahu_sens = (1.0 - recovery) * CP_AIR * dt_coil
    s = q_net + excess * h_fg

    out = dict(q_heat=0.0, q_cool=0.0, q_cool_latent=0.0, q_dehum=0.0,
               q_postheat=0.0, q_hum=0.0, m_hum=0.0, m_cond_coil=0.0,
               m_cond_ahu=0.0)

    if q_net > 0.0 and s > 0.0:
        denom_a = CP_AIR * dt_coil + d_w * h_fg
        if q_net * d_w >= excess * CP_AIR * dt_coil:
            # Coil at full flow over-dries; spray returns the difference.
            flow = s / denom_a
            cond = flow * d_w
            out["q_cool"] = s
            out["q_cool_latent"] = cond * h_fg
            out["m_cond_coil"] = cond
            out["m_hum"] = cond - excess
            out["q_hum"] = out["m_hum"] * h_fg
        else:
            # Coil limited by its sensible duty; AHU takes the residual.
            flow = q_net / (CP_AIR * dt_coil)
            cond = flow * d_w
            resid = excess - cond
            out["q_cool"] = q_net + cond * h_fg
            out["q_cool_latent"] = cond * h_fg
            out["m_cond_coil"] = cond
            out["m_cond_ahu"] = resid
            out["q_dehum"] = resid * (ahu_sens + d_w * h_fg) / d_w
            out["q_postheat"] = resid * ahu_sens / d_w
    else:
        if excess >= 0.0:
            out["q_heat"] = max(-q_net, 0.0)
            out["m_cond_ahu"] = excess
            out["q_dehum"] = excess * (ahu_sens + d_w * h_fg) / d_w
            out["q_postheat"] = excess * ahu_sens / d_w
        else:
            out["m_hum"] = -excess
            out["q_hum"] = out["m_hum"] * h_fg
            out["q_heat"] = max(-s, 0.0)
    return out


@dataclass
class ChamberState:
    """Carried state between steps: the crop and the last humidity target."""

    crop: CropState
    w_air: float


def step(state: ChamberState, setpoints: Setpoints, geometry: Geometry,
         envelope: Envelope, params: ChamberParams, crop_params: CropParams,
         t_ext: float, rh_ext: float, surf_irr, clearness: float,
         hour_local: float, dt_s: float, scenario: str = ""):
    """Advance one step; returns ``(new_state, StepLoads)``.

    Scalar reference implementation of the balance; the vector engine in
    :func:`integrate_year` reproduces it to rounding error.
    """
    lights = setpoints.lights_on(hour_local)
    rh_set = setpoints.rh_light if lights else setpoints.rh_dark
    t_in = setpoints.t_in_c
    loads = StepLoads()

    # Crop growth and transpiration.
    new_crop, ddm = crop_mod.growth_step(
        state.crop, crop_params, setpoints.ppfd, t_in, setpoints.co2_ppm, lights, dt_s
    )
    interception = 1.0 - math.exp(-crop_params.k * state.crop.lai(crop_params))
    rad_n = 0.0
    if lights:
        rad_n = PAR_J_PER_UMOL * setpoints.ppfd * interception * 0.0864  # MJ m-2 d-1
    flux = crop_mod.et_flux(state.crop, crop_params, t_in, rh_set, rad_n,
                            params.air_speed_m_s)
    if not lights:
        flux *= crop_params.dark_et_factor
    loads.m_et = flux * geometry.crop_area_m2
    loads.q_eva = loads.m_et * LATENT_HEAT

    # Lighting.
    if lights:
        loads.p_light_el, loads.q_light = lighting_power(
            setpoints, geometry, params, ddm / dt_s
        )
        loads.q_plant = loads.p_light_el - loads.q_light

    # Envelope and ventilation.
    loads.q_env = -envelope_flux(geometry, envelope, t_in, t_ext, surf_irr, clearness)
    vent = params.vent_flow(geometry)
    loads.q_vent = vent * CP_AIR * (t_ext - t_in)
    w_ext = humidity_ratio(t_ext, rh_ext)
    w_target = humidity_ratio(t_in, rh_set)
    loads.m_vent_water = vent * (w_ext - w_target)
    loads.m_storage = (w_target - state.w_air) * geometry.air_mass_kg / dt_s

    # CO2 book-keeping (uptake during light only; setpoint >= ambient).
    loads.co2_uptake = crop_mod.co2_uptake_rate(ddm, dt_s) * geometry.crop_area_m2 / 1000.0
    loads.co2_vent = vent * max(setpoints.co2_ppm - 400.0, 0.0) * CO2_KG_PER_KG_PPM
    loads.co2_injected = loads.co2_uptake + loads.co2_vent

    q_net = loads.q_light + loads.q_env + loads.q_vent - loads.q_eva
    excess = loads.m_et + loads.m_vent_water - loads.m_storage
    split = _split_hvac(q_net, excess, t_in, w_target,
                        params.apparatus_dew_point_c, params.ahu_recovery,
                        scenario, f"hour {hour_local:.2f}")
    for key, val in split.items():
        setattr(loads, key, val)

    new_crop, _harvested = crop_mod.check_harvest(new_crop, crop_params)
    return ChamberState(crop=new_crop, w_air=w_target), loads


# ---------------------------------------------------------------------------
# Annual integration
# ---------------------------------------------------------------------------

@dataclass
class StepSeries:
    """Step-resolution load series consumed by the heat-pump conversion."""

    dt_s: float
    t_ext: np.ndarray
    q_heat: np.ndarray       # heating coil + AHU post-heat, W
    q_cool: np.ndarray       # cooling coil + AHU dehumidification coil, W


@dataclass
class AnnualResult:
    """Aggregated outcome of one scenario-year of the chamber."""

    heating_kwh: float
    cooling_kwh: float
    dehum_kwh: float
    postheat_kwh: float
    lighting_kwh: float
    yield_kg: float
    cycles: int
    cycle_days: list
    et_l: float
    hum_l: float
    cond_l: float
    vent_water_l: float
    biomass_water_l: float
    water_net_l: float
    co2_injected_kg: float
    co2_uptake_kg: float
    co2_vent_kg: float
    peak_heat_w: float
    peak_cool_w: float
    crop_area_m2: float = 90.0
    daily: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def thermal_kwh(self) -> float:
        return self.heating_kwh + self.cooling_kwh + self.dehum_kwh + self.postheat_kwh

    @property
    def productivity_kg_m2(self) -> float:
        return self.yield_kg / self.crop_area_m2

    @property
    def sec_kwh_kg(self) -> float:
        if self.yield_kg <= 0:
            raise DomainError("SEC undefined for zero yield")
        return (self.thermal_kwh + self.lighting_kwh) / self.yield_kg

    @property
    def wue_g_l(self) -> float:
        if self.water_net_l <= 0:
            raise DomainError("WUE undefined for non-positive net water use")
        return 1000.0 * self.yield_kg / self.water_net_l


def _daily_clearness(ghi: np.ndarray, dhi: np.ndarray, steps_per_day: int) -> np.ndarray:
    """Per-step sky clearness proxy 1 - dhi/ghi, averaged per day.

    Rows with a missing split contribute zero clearness (overcast treatment,
    consistent with the all-diffuse irradiance fallback).
    """
    ghi_d = ghi.reshape(-1, steps_per_day)
    dhi_d = np.where(np.isnan(dhi), ghi, dhi).reshape(-1, steps_per_day)
    sum_ghi = ghi_d.sum(axis=1)
    sum_dhi = dhi_d.sum(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        clr = np.where(sum_ghi > 1.0, 1.0 - sum_dhi / np.maximum(sum_ghi, 1e-9), 0.5)
    clr = np.clip(clr, 0.0, 1.0)
    return np.repeat(clr, steps_per_day)


def integrate_year(series: weather_mod.WeatherSeries, setpoints: Setpoints,
                   geometry: Geometry, envelope: Envelope,
                   params: ChamberParams, crop_params: CropParams,
                   crop_year: CropYear | None = None,
                   scenario: str = "", engine: str = "vector"):
    """Simulate 365 days; returns ``(AnnualResult, StepSeries)``.

    ``engine="vector"`` (default) evaluates the closed-form balance on numpy
    arrays; ``engine="step"`` drives the scalar :func:`step` over the same
    grid and exists as the slow cross-check route.
    """
    dt = params.dt_s
    steps_per_day = int(round(86400.0 / dt))
    grid = weather_mod.resample_to_steps(series, dt, n_days=365)
    n = grid["t_ext"].size

    lights = setpoints.lights_on(grid["hour_local"])
    if crop_year is None:
        crop_year = crop_mod.simulate_crop_year(
            crop_params, setpoints.ppfd, setpoints.t_in_c, setpoints.co2_ppm,
            lights, dt
        )

    if engine == "step":
        return _integrate_by_steps(series, grid, lights, setpoints, geometry,
                                   envelope, params, crop_params, scenario)
    if engine != "vector":
        raise DomainError(f"unknown engine {engine!r}")

    t_in = setpoints.t_in_c
    area = geometry.crop_area_m2

    # Lighting and biomass enthalpy.
    p_led = setpoints.ppfd * area / params.led_efficacy_umol_j
    p_light = np.where(lights, p_led, 0.0)
    q_plant = crop_year.ddm * (area * crop_mod.PHOTO_ENERGY_J_PER_G / dt)
    q_light = p_light - q_plant

    # Transpiration on the daily-equivalent basis.
    rh_set = setpoints.rh_set(lights)
    rad_n = np.where(
        lights, PAR_J_PER_UMOL * setpoints.ppfd * crop_year.interception * 0.0864, 0.0
    )
    delta = delta_es(t_in)
    gamma = psychrometric_gamma()
    vpd_in = vpd(t_in, rh_set)
    numer = 0.408 * delta * rad_n + 900.0 * params.air_speed_m_s * gamma * vpd_in / (t_in + 273.15)
    mm_day = 1.05 * numer / (delta + gamma * (1.0 + 0.34 * params.air_speed_m_s)) * crop_year.kc
    mm_day = np.maximum(mm_day, 0.0)
    mm_day = np.where(lights, mm_day, mm_day * crop_params.dark_et_factor)
    m_et = mm_day / crop_mod.SECONDS_PER_DAY * area
    q_eva = m_et * LATENT_HEAT

    # Envelope through per-surface sol-air temperatures.
    alt, az = weather_mod.solar_position(
        series.location, grid["doy"], grid["hour_local"] + dt / 7200.0
    )
    surf = weather_mod.surface_irradiance(alt, az, grid["ghi"], grid["dni"], grid["dhi"])
    clearness = _daily_clearness(grid["ghi"], grid["dhi"], steps_per_day)
    q_env = -envelope_flux(geometry, envelope, t_in, grid["t_ext"], surf, clearness)

    # Ventilation.
    vent = params.vent_flow(geometry)
    q_vent = vent * CP_AIR * (grid["t_ext"] - t_in)
    w_ext = humidity_ratio(grid["t_ext"], grid["rh_ext"])
    w_target = humidity_ratio(t_in, rh_set)
    m_vent = vent * (w_ext - w_target)
    w_prev = np.roll(w_target, 1)
    w_prev[0] = w_target[0]
    m_storage = (w_target - w_prev) * geometry.air_mass_kg / dt

    # CO2.
    co2_uptake = crop_mod.CO2_PER_DRY_MASS * crop_year.ddm / dt * area / 1000.0
    co2_vent = vent * max(setpoints.co2_ppm - 400.0, 0.0) * CO2_KG_PER_KG_PPM
    co2_injected = co2_uptake + co2_vent

    # Closed-form duty split (mirrors _split_hvac on arrays).
    q_net = q_light + q_env + q_vent - q_eva
    excess = m_et + m_vent - m_storage
    dt_coil = t_in - params.apparatus_dew_point_c
    if dt_coil <= 0.5:
        raise SimulationError(
            f"{scenario}: apparatus dew point too close to room temperature"
        )
    if not 0.0 <= params.ahu_recovery <= 1.0:
        raise SimulationError(
            f"{scenario}: AHU recovery effectiveness {params.ahu_recovery} "
            "outside [0, 1]"
        )
    w_adp = humidity_ratio(params.apparatus_dew_point_c, 1.0)
    d_w = w_target - w_adp
    if np.any(d_w <= 0.0):
        raise SimulationError(f"{scenario}: room dew point below apparatus dew point")
    h_fg = LATENT_HEAT
    s = q_net + excess * h_fg
    denom_a = CP_AIR * dt_coil + d_w * h_fg

    cooling = (q_net > 0.0) & (s > 0.0)
    case_a = cooling & (q_net * d_w >= excess * CP_AIR * dt_coil)
    case_b = cooling & ~case_a

    flow_a = s / denom_a
    cond_a = flow_a * d_w
    flow_b = q_net / (CP_AIR * dt_coil)
    cond_b = flow_b * d_w

    m_cond_coil = np.where(case_a, cond_a, np.where(case_b, cond_b, 0.0))
    m_hum = np.where(case_a, cond_a - excess, 0.0)
    m_ahu = np.where(case_b, excess - cond_b, 0.0)

    heating = ~cooling
    hum_heating = heating & (excess < 0.0)
    ahu_heating = heating & (excess >= 0.0)
    m_hum = np.where(hum_heating, -excess, m_hum)
    m_ahu = np.where(ahu_heating, excess, m_ahu)

    q_cool = np.where(case_a, s, np.where(case_b, q_net + cond_b * h_fg, 0.0))
    q_cool_latent = m_cond_coil * h_fg
    q_hum = m_hum * h_fg
    q_heat = np.where(hum_heating, np.maximum(-s, 0.0),
                      np.where(ahu_heating, np.maximum(-q_net, 0.0), 0.0))
    ahu_sens = (1.0 - params.ahu_recovery) * CP_AIR * dt_coil
    q_dehum = m_ahu * (ahu_sens + d_w * h_fg) / d_w
    q_postheat = m_ahu * ahu_sens / d_w

    to_kwh = dt / 3.6e6
    daily = {
        name: arr.reshape(365, steps_per_day).sum(axis=1) * to_kwh
        for name, arr in (
            ("q_heat", q_heat), ("q_cool", q_cool), ("q_dehum", q_dehum),
            ("q_postheat", q_postheat),
        )
    }
    daily["et_kg"] = (m_et * dt).reshape(365, steps_per_day).sum(axis=1)

    kg = lambda arr: float(np.sum(arr) * dt)  # noqa: E731  kg/s series -> kg
    et_l = kg(m_et)
    hum_l = kg(m_hum)
    cond_l = kg(m_cond_coil) + kg(m_ahu)
    vent_l = kg(m_vent)
    biomass_l = crop_year.water_in_biomass_g_m2 * area / 1000.0
    water_net = et_l + hum_l - cond_l + biomass_l

    result = AnnualResult(
        heating_kwh=float(np.sum(q_heat)) * to_kwh,
        cooling_kwh=float(np.sum(q_cool)) * to_kwh,
        dehum_kwh=float(np.sum(q_dehum)) * to_kwh,
        postheat_kwh=float(np.sum(q_postheat)) * to_kwh,
        lighting_kwh=float(np.sum(p_light)) * to_kwh,
        yield_kg=crop_year.yield_fm_g_m2 * area / 1000.0,
        cycles=crop_year.cycles,
        cycle_days=list(crop_year.cycle_lengths_days),
        et_l=et_l,
        hum_l=hum_l,
        cond_l=cond_l,
        vent_water_l=vent_l,
        biomass_water_l=biomass_l,
        water_net_l=water_net,
        co2_injected_kg=kg(co2_injected),
        co2_uptake_kg=kg(co2_uptake),
        co2_vent_kg=kg(np.full(n, co2_vent)),
        peak_heat_w=float(np.max(q_heat + q_postheat)),
        peak_cool_w=float(np.max(q_cool + q_dehum)),
        crop_area_m2=area,
        daily=daily,
        diagnostics={
            "n_radn_clamped": int(np.sum(rad_n < 0.0)),
            "storage_water_kg": kg(m_storage),
        },
    )
    step_series = StepSeries(
        dt_s=dt,
        t_ext=grid["t_ext"],
        q_heat=q_heat + q_postheat,
        q_cool=q_cool + q_dehum,
    )
    return result, step_series


def _integrate_by_steps(series, grid, lights, setpoints, geometry, envelope,
                        params, crop_params, scenario):
    """Drive the scalar `step` over the grid; slow cross-check route."""
    dt = params.dt_s
    n = grid["t_ext"].size
    steps_per_day = int(round(86400.0 / dt))

    alt, az = weather_mod.solar_position(
        series.location, grid["doy"], grid["hour_local"] + dt / 7200.0
    )
    surf_all = weather_mod.surface_irradiance(alt, az, grid["ghi"], grid["dni"], grid["dhi"])
    clearness = _daily_clearness(grid["ghi"], grid["dhi"], steps_per_day)

    state = ChamberState(
        crop=crop_mod.initial_state(crop_params),
        w_air=humidity_ratio(setpoints.t_in_c,
                             float(setpoints.rh_set(lights[0]))),
    )
    acc = {f.name: 0.0 for f in fields(StepLoads)}
    daily = {k: np.zeros(365) for k in ("q_heat", "q_cool", "q_dehum", "q_postheat")}
    daily["et_kg"] = np.zeros(365)
    peak_heat = peak_cool = 0.0
    q_heat_series = np.zeros(n)
    q_cool_series = np.zeros(n)

    for i in range(n):
        surf_i = {k: float(v[i]) for k, v in surf_all.items()}
        state, loads = step(
            state, setpoints, geometry, envelope, params, crop_params,
            float(grid["t_ext"][i]), float(grid["rh_ext"][i]), surf_i,
            float(clearness[i]), float(grid["hour_local"][i]), dt, scenario
        )
        day = i // steps_per_day
        for k in ("q_heat", "q_cool", "q_dehum", "q_postheat"):
            daily[k][day] += getattr(loads, k) * dt / 3.6e6
        daily["et_kg"][day] += loads.m_et * dt
        for f in fields(StepLoads):
            acc[f.name] += getattr(loads, f.name) * dt
        peak_heat = max(peak_heat, loads.q_heat + loads.q_postheat)
        peak_cool = max(peak_cool, loads.q_cool + loads.q_dehum)
        q_heat_series[i] = loads.q_heat + loads.q_postheat
        q_cool_series[i] = loads.q_cool + loads.q_dehum

    crop_year = crop_mod.simulate_crop_year(
        crop_params, setpoints.ppfd, setpoints.t_in_c, setpoints.co2_ppm, lights, dt
    )
    to_kwh = 1.0 / 3.6e6
    area = geometry.crop_area_m2
    et_l = acc["m_et"]
    hum_l = acc["m_hum"]
    cond_l = acc["m_cond_coil"] + acc["m_cond_ahu"]
    biomass_l = crop_year.water_in_biomass_g_m2 * area / 1000.0
    result = AnnualResult(
        heating_kwh=acc["q_heat"] * to_kwh,
        cooling_kwh=acc["q_cool"] * to_kwh,
        dehum_kwh=acc["q_dehum"] * to_kwh,
        postheat_kwh=acc["q_postheat"] * to_kwh,
        lighting_kwh=acc["p_light_el"] * to_kwh,
        yield_kg=crop_year.yield_fm_g_m2 * area / 1000.0,
        cycles=crop_year.cycles,
        cycle_days=list(crop_year.cycle_lengths_days),
        et_l=et_l,
        hum_l=hum_l,
        cond_l=cond_l,
        vent_water_l=acc["m_vent_water"],
        biomass_water_l=biomass_l,
        water_net_l=et_l + hum_l - cond_l + biomass_l,
        co2_injected_kg=acc["co2_injected"],
        co2_uptake_kg=acc["co2_uptake"],
        co2_vent_kg=acc["co2_vent"],
        peak_heat_w=peak_heat,
        peak_cool_w=peak_cool,
        crop_area_m2=area,
        daily=daily,
        diagnostics={"storage_water_kg": acc["m_storage"]},
    )
    step_series = StepSeries(dt_s=dt, t_ext=grid["t_ext"],
                             q_heat=q_heat_series, q_cool=q_cool_series)
    return result, step_series

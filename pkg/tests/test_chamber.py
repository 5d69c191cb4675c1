"""Chamber balance: lighting, envelope, duty split and annual closure."""
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest

from vfarm import chamber, crop as crop_mod, weather
from vfarm.chamber import (
    AnnualResult,
    ChamberState,
    Envelope,
    StepLoads,
    envelope_flux,
    integrate_year,
    lighting_power,
    step,
)
from vfarm.errors import DomainError, SimulationError
from vfarm.psychro import LATENT_HEAT, humidity_ratio

REPO = Path(__file__).resolve().parents[1]

SURF_DARK = {k: 0.0 for k in ("roof", "north", "east", "south", "west", "floor")}


@pytest.fixture(scope="module")
def trondheim_series(config):
    site = config.site("trondheim")
    return weather.parse_weather(site.weather_path, site.location)


def run_year(config, series, *, insulated=True, ppfd=100.0, t_in=24.0,
             co2=900.0, engine="vector"):
    return integrate_year(
        series,
        config.setpoints(t_in_c=t_in, co2_ppm=co2, ppfd=ppfd),
        config.geometry,
        config.envelope(insulated=insulated),
        config.chamber,
        config.crop,
        engine=engine,
    )


class TestGeometry:
    def test_reference_dimensions(self, config):
        g = config.geometry
        assert g.footprint_m2 == pytest.approx(49.0)
        assert g.volume_m3 == pytest.approx(147.0)
        assert g.envelope_area_m2 == pytest.approx(182.0)
        assert g.crop_area_m2 == pytest.approx(90.0)

    def test_crop_fits_on_the_tiers(self, config):
        g = config.geometry
        assert g.crop_area_m2 <= g.tiers * g.footprint_m2


class TestSetpoints:
    def test_photoperiod_window(self, config):
        sp = config.setpoints(t_in_c=24.0, co2_ppm=900.0, ppfd=250.0)
        assert not sp.lights_on(3.99)
        assert sp.lights_on(4.0)
        assert sp.lights_on(19.99)
        assert not sp.lights_on(20.0)

    def test_humidity_setpoint_follows_the_lights(self, config):
        sp = config.setpoints(t_in_c=24.0, co2_ppm=900.0, ppfd=250.0)
        assert sp.rh_set(True) == 0.75
        assert sp.rh_set(False) == 0.85


class TestLightingPower:
    @pytest.mark.parametrize("ppfd,p_el", [(100.0, 3000.0), (250.0, 7500.0),
                                           (400.0, 12000.0)])
    def test_electric_draw(self, config, ppfd, p_el):
        sp = config.setpoints(t_in_c=24.0, co2_ppm=900.0, ppfd=ppfd)
        p, q = lighting_power(sp, config.geometry, config.chamber)
        assert p == pytest.approx(p_el)
        assert q == pytest.approx(p_el)  # nothing stored without growth

    def test_biomass_share_leaves_the_heat_balance(self, config):
        sp = config.setpoints(t_in_c=24.0, co2_ppm=900.0, ppfd=250.0)
        p, q = lighting_power(sp, config.geometry, config.chamber,
                              ddm_g_m2_s=1e-4)
        assert p == pytest.approx(7500.0)
        assert q < p
        assert p - q == pytest.approx(
            1e-4 * 90.0 * crop_mod.PHOTO_ENERGY_J_PER_G)


class TestEnvelopeFlux:
    def test_conduction_at_fixed_delta_t(self, config):
        g = config.geometry
        env = Envelope(u_value=0.193)
        flux = envelope_flux(g, env, t_in=24.0, t_ext=4.0)
        assert flux == pytest.approx(0.193 * 182.0 * 20.0, rel=1e-9)

    def test_bare_to_insulated_ratio(self, config):
        # Ratio of the uninsulated steel shell to the PIR panel default.
        g = config.geometry
        bare = envelope_flux(g, Envelope(u_value=3.0), 24.0, 4.0)
        ins = envelope_flux(g, Envelope(u_value=0.193), 24.0, 4.0)
        assert bare / ins == pytest.approx(15.5, abs=0.1)

    def test_sun_on_the_roof_reduces_the_loss(self, config):
        g = config.geometry
        env = config.envelope(insulated=True)
        sunny = dict(SURF_DARK, roof=800.0)
        base = envelope_flux(g, env, 24.0, 4.0, SURF_DARK, 0.0)
        lit = envelope_flux(g, env, 24.0, 4.0, sunny, 0.0)
        assert lit < base

    def test_clear_sky_increases_the_loss(self, config):
        g = config.geometry
        env = config.envelope(insulated=True)
        overcast = envelope_flux(g, env, 24.0, 4.0, SURF_DARK, 0.0)
        clear = envelope_flux(g, env, 24.0, 4.0, SURF_DARK, 1.0)
        assert clear > overcast


def collect_steps(config, days=2, t_wave=(15.0, 20.0), rh=0.75, ppfd=250.0,
                  dm_start=None):
    """Drive the scalar step over synthetic weather; returns the loads."""
    sp = config.setpoints(t_in_c=24.0, co2_ppm=900.0, ppfd=ppfd)
    params = config.chamber
    dt = params.dt_s
    crop_state = crop_mod.initial_state(config.crop)
    if dm_start is not None:
        crop_state = replace(crop_state, dm_g_m2=dm_start)
    state = ChamberState(
        crop=crop_state,
        w_air=humidity_ratio(sp.t_in_c, sp.rh_light),
    )
    out = []
    n = int(days * 86400 / dt)
    for i in range(n):
        hour = (i * dt / 3600.0) % 24.0
        t_ext = t_wave[0] + t_wave[1] * np.sin(2 * np.pi * (hour - 14) / 24.0)
        day = 6.0 <= hour < 18.0
        surf = dict(SURF_DARK, roof=500.0 if day else 0.0,
                    south=300.0 if day else 0.0)
        state, loads = step(state, sp, config.geometry,
                            config.envelope(insulated=True), params,
                            config.crop, float(t_ext), rh, surf, 0.5, hour, dt)
        out.append(loads)
    return out


class TestStepBalance:
    def test_every_step_closes(self, config):
        for t_wave in ((15.0, 20.0), (-10.0, 8.0), (35.0, 6.0)):
            for loads in collect_steps(config, t_wave=t_wave):
                scale = max(abs(getattr(loads, f)) for f in
                            ("q_heat", "q_cool", "q_light", "q_env",
                             "q_vent", "q_eva"))
                assert abs(loads.closure_residual()) <= 1e-6 * max(scale, 1.0)

    def test_heating_and_cooling_are_exclusive(self, config):
        for t_wave in ((15.0, 20.0), (-10.0, 8.0), (35.0, 6.0)):
            for loads in collect_steps(config, t_wave=t_wave):
                assert loads.q_heat * loads.q_cool == 0.0

    def test_mass_flows_are_non_negative(self, config):
        for loads in collect_steps(config):
            for name in ("m_et", "m_hum", "m_cond_coil", "m_cond_ahu"):
                assert getattr(loads, name) >= 0.0

    def test_recuperator_bookkeeping_identity(self, config):
        # AHU duty minus its reheat equals the latent heat of the moisture
        # it removes, regardless of the recovery effectiveness.  A mature
        # canopy under dim light in muggy weather sends moisture to the AHU.
        seen = 0
        for loads in collect_steps(config, t_wave=(30.0, 2.0), rh=0.95,
                                   ppfd=100.0, dm_start=200.0):
            if loads.m_cond_ahu > 0.0:
                seen += 1
                assert loads.q_dehum - loads.q_postheat == pytest.approx(
                    loads.m_cond_ahu * LATENT_HEAT, rel=1e-9)
        assert seen > 0

    def test_hot_day_cools_cold_night_heats(self, config):
        hot = collect_steps(config, days=1, t_wave=(38.0, 4.0))
        cold = collect_steps(config, days=1, t_wave=(-25.0, 5.0))
        assert sum(l.q_cool for l in hot) > 0.0
        assert sum(l.q_heat for l in cold) > 0.0

    def test_lights_off_means_no_electric_draw(self, config):
        loads = collect_steps(config, days=1)[0]  # midnight step
        assert loads.p_light_el == 0.0

    def test_transpiration_drops_in_the_dark(self, config):
        day = collect_steps(config, days=1)
        dark = day[0]
        lit = day[80]  # mid-afternoon step
        assert dark.m_et < lit.m_et

    def test_bad_recovery_rejected(self, config):
        sp = config.setpoints(t_in_c=24.0, co2_ppm=900.0, ppfd=250.0)
        params = replace(config.chamber, ahu_recovery=1.5)
        state = ChamberState(crop=crop_mod.initial_state(config.crop),
                             w_air=humidity_ratio(24.0, 0.75))
        with pytest.raises(SimulationError):
            step(state, sp, config.geometry, config.envelope(insulated=True),
                 params, config.crop, 20.0, 0.7, SURF_DARK, 0.0, 12.0, 600.0)

    def test_room_close_to_coil_dew_point_rejected(self, config):
        sp = config.setpoints(t_in_c=24.0, co2_ppm=900.0, ppfd=250.0)
        params = replace(config.chamber, apparatus_dew_point_c=23.8)
        state = ChamberState(crop=crop_mod.initial_state(config.crop),
                             w_air=humidity_ratio(24.0, 0.75))
        with pytest.raises(SimulationError):
            step(state, sp, config.geometry, config.envelope(insulated=True),
                 params, config.crop, 20.0, 0.7, SURF_DARK, 0.0, 12.0, 600.0)


class TestAnnualIntegration:
    def test_engines_agree_over_a_full_year(self, config, trondheim_series):
        fast, ss_fast = run_year(config, trondheim_series, engine="vector")
        slow, ss_slow = run_year(config, trondheim_series, engine="step")
        for name in ("heating_kwh", "cooling_kwh", "dehum_kwh",
                     "postheat_kwh", "lighting_kwh", "yield_kg", "et_l",
                     "hum_l", "cond_l", "water_net_l", "co2_injected_kg"):
            assert getattr(fast, name) == pytest.approx(
                getattr(slow, name), rel=1e-9), name
        assert np.allclose(ss_fast.q_heat, ss_slow.q_heat, rtol=1e-9, atol=1e-6)
        assert np.allclose(ss_fast.q_cool, ss_slow.q_cool, rtol=1e-9, atol=1e-6)

    def test_unknown_engine_rejected(self, config, trondheim_series):
        with pytest.raises(DomainError):
            run_year(config, trondheim_series, engine="magic")

    def test_annual_water_closure(self, config, trondheim_series):
        res, _ = run_year(config, trondheim_series)
        stored = res.diagnostics["storage_water_kg"]
        resid = res.et_l + res.hum_l + res.vent_water_l - res.cond_l - stored
        assert abs(resid) < 1e-3 * res.et_l

    def test_annual_co2_closure(self, config, trondheim_series):
        res, _ = run_year(config, trondheim_series)
        resid = res.co2_injected_kg - res.co2_uptake_kg - res.co2_vent_kg
        assert abs(resid) < 1e-3 * res.co2_injected_kg

    def test_step_series_shape_and_signs(self, config, trondheim_series):
        res, ss = run_year(config, trondheim_series)
        assert ss.q_heat.size == 365 * 144
        assert np.all(ss.q_heat >= 0.0)
        assert np.all(ss.q_cool >= 0.0)
        assert res.peak_heat_w == pytest.approx(float(ss.q_heat.max()))
        assert res.peak_cool_w == pytest.approx(float(ss.q_cool.max()))

    def test_daily_series_sum_to_the_annual_totals(self, config,
                                                   trondheim_series):
        res, _ = run_year(config, trondheim_series)
        assert res.daily["q_cool"].sum() == pytest.approx(res.cooling_kwh,
                                                          rel=1e-9)
        assert res.daily["q_heat"].sum() == pytest.approx(res.heating_kwh,
                                                          rel=1e-9)
        assert res.daily["et_kg"].sum() == pytest.approx(res.et_l, rel=1e-9)


class TestAnnualResultProperties:
    @staticmethod
    def minimal(**overrides):
        base = dict(
            heating_kwh=1000.0, cooling_kwh=2000.0, dehum_kwh=500.0,
            postheat_kwh=100.0, lighting_kwh=9000.0, yield_kg=1000.0,
            cycles=10, cycle_days=[19.0] * 10, et_l=8000.0, hum_l=100.0,
            cond_l=7000.0, vent_water_l=-400.0, biomass_water_l=900.0,
            water_net_l=2000.0, co2_injected_kg=500.0, co2_uptake_kg=450.0,
            co2_vent_kg=50.0, peak_heat_w=4000.0, peak_cool_w=9000.0,
            crop_area_m2=90.0,
        )
        base.update(overrides)
        return AnnualResult(**base)

    def test_derived_indicators(self):
        res = self.minimal()
        assert res.thermal_kwh == pytest.approx(3600.0)
        assert res.sec_kwh_kg == pytest.approx(12.6)
        assert res.productivity_kg_m2 == pytest.approx(1000.0 / 90.0)
        assert res.wue_g_l == pytest.approx(500.0)

    def test_zero_yield_has_no_sec(self):
        with pytest.raises(DomainError):
            _ = self.minimal(yield_kg=0.0).sec_kwh_kg

    def test_non_positive_water_has_no_wue(self):
        with pytest.raises(DomainError):
            _ = self.minimal(water_net_l=0.0).wue_g_l


class TestSweepLevelInvariants:
    def test_yield_ignores_climate_and_envelope(self, records):
        groups = {}
        for r in records.values():
            key = (r["ppfd"], r["t_in_c"], r["co2_ppm"])
            groups.setdefault(key, []).append(r["yield_kg"])
        assert len(groups) == 27
        for key, ys in groups.items():
            assert len(ys) == 6
            assert (max(ys) - min(ys)) <= 0.005 * min(ys), key

    def test_lighting_and_cooling_dominate_insulated_demand(self, records):
        # Aggregate over the insulated grid; heating and moisture handling
        # stay a small slice of the total thermal-plus-light energy.
        ins = [r for r in records.values() if r["insulated"]]
        total = sum(r["lighting_kwh"] + r["thermal_kwh"] for r in ins)
        light_cool = sum(r["lighting_kwh"] + r["cooling_kwh"] for r in ins)
        assert light_cool / total >= 0.90

    def test_removing_insulation_in_cold_climate(self, records):
        # At high light the envelope loss offsets cooling; at low light the
        # heater has to make up for it instead.
        for co2 in (400, 900, 1400):
            hi_i = records[f"T_I_400_20_{co2}"]["thermal_kwh"]
            hi_o = records[f"T_O_400_20_{co2}"]["thermal_kwh"]
            assert (hi_o - hi_i) / hi_i == pytest.approx(-0.04, abs=0.04)
            lo_i = records[f"T_I_100_20_{co2}"]["thermal_kwh"]
            lo_o = records[f"T_O_100_20_{co2}"]["thermal_kwh"]
            assert (lo_o - lo_i) / lo_i >= 0.25

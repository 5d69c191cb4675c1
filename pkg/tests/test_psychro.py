"""Moist-air property routines against hand-worked values and finite
differences."""
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vfarm.errors import DomainError
from vfarm.psychro import (
    MoistAirState,
    delta_es,
    dew_point,
    enthalpy,
    humidity_ratio,
    moist_density,
    psychrometric_gamma,
    saturation_pressure,
    vapour_pressure_from_w,
    vpd,
)

TEMPS = st.floats(min_value=-39.0, max_value=59.0)
HUMIDITIES = st.floats(min_value=0.0, max_value=1.0)


class TestSaturationPressure:
    def test_magnus_anchor_at_zero(self):
        assert saturation_pressure(0.0) == pytest.approx(0.6108, rel=1e-12)

    def test_room_temperature_value(self):
        assert saturation_pressure(20.0) == pytest.approx(2.339, rel=0.005)

    def test_warm_room_value(self):
        assert saturation_pressure(28.0) == pytest.approx(3.781, rel=0.005)

    @given(TEMPS, TEMPS)
    def test_strictly_increasing(self, t1, t2):
        lo, hi = sorted((t1, t2))
        if hi - lo < 1e-6:
            return
        assert saturation_pressure(lo) < saturation_pressure(hi)

    def test_rejects_out_of_range_temperature(self):
        with pytest.raises(DomainError):
            saturation_pressure(-45.0)
        with pytest.raises(DomainError):
            saturation_pressure(65.0)

    def test_array_input_matches_scalars(self):
        t = np.array([0.0, 10.0, 24.0, 35.0])
        out = saturation_pressure(t)
        assert out.shape == t.shape
        for ti, oi in zip(t, out):
            assert oi == saturation_pressure(float(ti))


class TestVpd:
    def test_zero_at_saturation(self):
        assert vpd(20.0, 1.0) == pytest.approx(0.0, abs=1e-12)

    def test_reference_point(self):
        assert vpd(20.0, 0.75) == pytest.approx(0.5846, rel=0.01)

    def test_warmer_room_raises_deficit(self):
        ratio = vpd(28.0, 0.75) / vpd(20.0, 0.75)
        assert 1.55 <= ratio <= 1.70

    @given(TEMPS, HUMIDITIES)
    def test_non_negative_and_bounded_by_saturation(self, t, rh):
        d = vpd(t, rh)
        assert 0.0 <= d <= saturation_pressure(t) + 1e-12

    def test_rejects_bad_humidity(self):
        with pytest.raises(DomainError):
            vpd(20.0, -0.1)
        with pytest.raises(DomainError):
            vpd(20.0, 1.2)


class TestSlopeOfSaturationCurve:
    def test_reference_point(self):
        assert delta_es(20.0) == pytest.approx(0.14475, rel=0.01)

    def test_matches_finite_differences(self):
        # Central differences of the saturation curve on a fine grid.
        h = 1e-4
        for t in np.arange(0.0, 40.0 + 1e-9, 0.5):
            fd = (saturation_pressure(t + h) - saturation_pressure(t - h)) / (2 * h)
            assert delta_es(float(t)) == pytest.approx(fd, rel=1e-3)

    @given(st.floats(min_value=0.0, max_value=40.0))
    def test_positive_on_working_range(self, t):
        assert delta_es(t) > 0.0


class TestPsychrometricGamma:
    def test_standard_pressure_value(self):
        assert psychrometric_gamma() == pytest.approx(0.0674, abs=5e-4)

    def test_scales_linearly_with_pressure(self):
        assert psychrometric_gamma(50.0) == pytest.approx(
            psychrometric_gamma(100.0) / 2.0, rel=1e-12
        )


class TestHumidityRatio:
    def test_round_trip_through_vapour_pressure(self):
        for t, rh in ((10.0, 0.3), (24.0, 0.75), (35.0, 0.9)):
            w = humidity_ratio(t, rh)
            pv = vapour_pressure_from_w(w)
            assert pv == pytest.approx(rh * saturation_pressure(t), rel=1e-9)

    def test_saturated_warmer_air_holds_more_water(self):
        assert humidity_ratio(30.0, 1.0) > humidity_ratio(20.0, 1.0)

    def test_reference_magnitude(self):
        # w(24 C, 75 %) should be near 14 g/kg.
        assert humidity_ratio(24.0, 0.75) == pytest.approx(0.0141, abs=0.0005)


class TestDewPoint:
    def test_fixed_point_at_saturation(self):
        assert dew_point(24.0, 1.0) == pytest.approx(24.0, abs=1e-6)

    @given(st.floats(min_value=-20.0, max_value=50.0),
           st.floats(min_value=0.05, max_value=0.999))
    def test_below_dry_bulb_when_unsaturated(self, t, rh):
        assert dew_point(t, rh) < t

    def test_consistent_with_saturation_curve(self):
        td = dew_point(24.0, 0.75)
        assert saturation_pressure(td) == pytest.approx(
            0.75 * saturation_pressure(24.0), rel=1e-6
        )


class TestBulkProperties:
    def test_dry_air_density(self):
        # Ideal-gas check: 101325 / (287.055 * 293.15).
        assert moist_density(20.0, 0.0) == pytest.approx(1.204, abs=0.005)

    def test_humid_air_is_lighter(self):
        assert moist_density(20.0, 0.015) < moist_density(20.0, 0.0)

    def test_enthalpy_gains_latent_term(self):
        dry = enthalpy(24.0, 0.0)
        humid = enthalpy(24.0, 0.010)
        assert humid > dry + 24_000.0  # latent part dominates

    def test_state_bundle_is_consistent(self):
        s = MoistAirState(24.0, 0.75)
        assert s.w == pytest.approx(humidity_ratio(24.0, 0.75), rel=1e-12)
        assert s.vpd_kpa == pytest.approx(vpd(24.0, 0.75), rel=1e-12)
        assert s.dew_point_c == pytest.approx(dew_point(24.0, 0.75), rel=1e-12)

    def test_state_rejects_supersaturation(self):
        with pytest.raises(DomainError):
            MoistAirState(24.0, 1.2)


@given(TEMPS, HUMIDITIES)
def test_functions_are_pure(t, rh):
    assert vpd(t, rh) == vpd(t, rh)
    assert saturation_pressure(t) == saturation_pressure(t)
    assert math.isfinite(delta_es(t))

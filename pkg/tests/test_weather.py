"""Solar geometry, irradiance splitting and weather-file parsing."""
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, strategies as st

from vfarm.errors import WeatherDataError
from vfarm.weather import (
    Location,
    parse_weather,
    resample_to_steps,
    solar_position,
    surface_irradiance,
)

REPO = Path(__file__).resolve().parents[1]
WEATHER_DIR = REPO / "data" / "weather"

EQUATOR = Location("equator", 0.0, 0.0, 0.0)
TRONDHEIM = Location("trondheim", 63.43, 10.40, 1.0)
DUBAI = Location("dubai", 25.20, 55.30, 4.0)


def peak_altitude(location, doy):
    hours = np.arange(9.0, 17.0, 0.02)
    alt, _ = solar_position(location, doy, hours)
    return float(np.max(alt))


class TestSolarPosition:
    def test_equator_equinox_sun_overhead(self):
        assert peak_altitude(EQUATOR, 80) == pytest.approx(90.0, abs=1.0)

    def test_trondheim_midsummer_noon(self):
        # 90 - latitude + obliquity for a high-latitude site.
        assert peak_altitude(TRONDHEIM, 172) == pytest.approx(50.0, abs=1.0)

    def test_dubai_midwinter_midnight_below_horizon(self):
        alt, _ = solar_position(DUBAI, 355, 0.0)
        assert alt < 0.0

    def test_azimuth_sweeps_east_to_west(self):
        alt_am, az_am = solar_position(TRONDHEIM, 172, 8.0)
        alt_pm, az_pm = solar_position(TRONDHEIM, 172, 18.0)
        assert 60.0 < az_am < 140.0
        assert 220.0 < az_pm < 300.0
        # The sun crosses due south at the daily altitude peak.
        hours = np.arange(9.0, 17.0, 0.02)
        alt, az = solar_position(TRONDHEIM, 172, hours)
        az_at_peak = float(az[np.argmax(alt)])
        assert az_at_peak == pytest.approx(180.0, abs=5.0)
        assert float(np.max(alt)) > alt_am and float(np.max(alt)) > alt_pm

    def test_year_boundary_is_periodic(self):
        # Same clock instant one year apart: under a third of a degree.
        alt_a, az_a = solar_position(TRONDHEIM, 1, 12.0)
        alt_b, az_b = solar_position(TRONDHEIM, 366, 12.0)
        assert abs(alt_a - alt_b) < 0.3
        assert abs(az_a - az_b) < 0.3

    def test_azimuth_range(self):
        hours = np.arange(0.0, 24.0, 0.25)
        _, az = solar_position(DUBAI, 100, hours)
        assert np.all((az >= 0.0) & (az < 360.0))


class TestSurfaceIrradiance:
    def test_beam_from_due_south(self):
        surf = surface_irradiance(30.0, 180.0, ghi=500.0, dni=800.0, dhi=100.0)
        assert surf["south"] == pytest.approx(742.82, abs=0.05)
        assert surf["north"] == pytest.approx(50.0, abs=1e-9)
        assert surf["east"] == pytest.approx(50.0, abs=1e-6)
        assert surf["west"] == pytest.approx(50.0, abs=1e-6)
        assert surf["roof"] == pytest.approx(500.0, abs=0.01)
        assert surf["floor"] == 0.0

    def test_night_is_dark_everywhere(self):
        surf = surface_irradiance(-10.0, 90.0, ghi=0.0, dni=0.0, dhi=0.0)
        assert all(v == 0.0 for v in surf.values())

    def test_beam_ignored_below_horizon(self):
        # Stray positive dni in a row after sunset must not reach the walls.
        surf = surface_irradiance(-2.0, 270.0, ghi=0.0, dni=50.0, dhi=0.0)
        assert surf["west"] == 0.0
        assert surf["roof"] == 0.0

    def test_all_diffuse_fallback(self):
        surf = surface_irradiance(30.0, 180.0, ghi=300.0, dni=None, dhi=None)
        assert surf["roof"] == pytest.approx(300.0)
        for wall in ("north", "east", "south", "west"):
            assert surf[wall] == pytest.approx(150.0)

    def test_nan_split_uses_fallback(self):
        surf = surface_irradiance(30.0, 180.0, ghi=300.0,
                                  dni=float("nan"), dhi=float("nan"))
        assert surf["roof"] == pytest.approx(300.0)
        assert surf["south"] == pytest.approx(150.0)

    def test_orientation_rotates_the_walls(self):
        base = surface_irradiance(30.0, 180.0, ghi=500.0, dni=800.0, dhi=100.0)
        turned = surface_irradiance(30.0, 180.0, ghi=500.0, dni=800.0,
                                    dhi=100.0, orientation_deg=90.0)
        # With the building turned 90 deg the east face sees the old south sun.
        assert turned["east"] == pytest.approx(base["south"], rel=1e-9)

    @given(st.floats(min_value=0.5, max_value=89.5),
           st.floats(min_value=0.0, max_value=359.9),
           st.floats(min_value=0.0, max_value=1000.0),
           st.floats(min_value=0.0, max_value=500.0))
    def test_physical_bounds(self, alt, az, dni, dhi):
        surf = surface_irradiance(alt, az, ghi=dni + dhi, dni=dni, dhi=dhi)
        for wall in ("north", "east", "south", "west"):
            assert 0.0 <= surf[wall] <= dni + dhi + 1e-9
        assert 0.0 <= surf["roof"] <= dni * np.sin(np.radians(alt)) + dhi + 1e-9


def write_weather(path, rows):
    header = "timestamp,t_ext_c,rh_ext,ghi_wm2,dni_wm2,dhi_wm2"
    path.write_text("\n".join([header, *rows]) + "\n")
    return path


def hourly_rows(n, rh="0.80"):
    return [f"2019-01-01T{h:02d}:00,5.0,{rh},0.0,0.0,0.0" for h in range(n)]


class TestParseWeather:
    def test_bundled_files_have_a_full_year(self):
        for name in ("trondheim", "shanghai", "dubai"):
            series = parse_weather(WEATHER_DIR / f"{name}.csv", TRONDHEIM)
            assert series.n_hours == 8760

    def test_row_count_preserved(self, tmp_path):
        p = write_weather(tmp_path / "w.csv", hourly_rows(24))
        assert parse_weather(p, TRONDHEIM).n_hours == 24

    def test_humidity_out_of_range_names_the_field(self, tmp_path):
        rows = hourly_rows(24)
        rows[7] = rows[7].replace("0.80", "1.07")
        p = write_weather(tmp_path / "w.csv", rows)
        with pytest.raises(WeatherDataError, match="rh_ext"):
            parse_weather(p, TRONDHEIM)

    def test_hour_gap_cites_the_timestamp(self, tmp_path):
        rows = hourly_rows(24)
        del rows[10]
        p = write_weather(tmp_path / "w.csv", rows)
        with pytest.raises(WeatherDataError, match="2019-01-01T11:00"):
            parse_weather(p, TRONDHEIM)

    def test_wrong_header_rejected(self, tmp_path):
        p = tmp_path / "w.csv"
        p.write_text("time,t,rh,ghi,dni,dhi\n" + "\n".join(hourly_rows(3)))
        with pytest.raises(WeatherDataError, match="header"):
            parse_weather(p, TRONDHEIM)

    def test_non_numeric_cell_cites_the_line(self, tmp_path):
        rows = hourly_rows(24)
        rows[4] = rows[4].replace("5.0", "warm")
        p = write_weather(tmp_path / "w.csv", rows)
        with pytest.raises(WeatherDataError, match="line 6"):
            parse_weather(p, TRONDHEIM)

    def test_missing_split_becomes_diffuse_fallback(self, tmp_path):
        rows = hourly_rows(24)
        rows[12] = "2019-01-01T12:00,5.0,0.80,200.0,,"
        p = write_weather(tmp_path / "w.csv", rows)
        series = parse_weather(p, TRONDHEIM)
        assert np.isnan(series.dni[12])
        assert series.ghi[12] == 200.0

    def test_slightly_negative_ghi_clipped(self, tmp_path):
        rows = hourly_rows(24)
        rows[3] = rows[3].replace(",0.0,0.0,0.0", ",-2.0,0.0,0.0")
        p = write_weather(tmp_path / "w.csv", rows)
        assert parse_weather(p, TRONDHEIM).ghi[3] == 0.0

    def test_strongly_negative_ghi_rejected(self, tmp_path):
        rows = hourly_rows(24)
        rows[3] = rows[3].replace(",0.0,0.0,0.0", ",-7.0,0.0,0.0")
        p = write_weather(tmp_path / "w.csv", rows)
        with pytest.raises(WeatherDataError, match="ghi"):
            parse_weather(p, TRONDHEIM)

    def test_dubai_roof_sees_more_sun_than_trondheim(self):
        tro = parse_weather(WEATHER_DIR / "trondheim.csv", TRONDHEIM)
        dxb = parse_weather(WEATHER_DIR / "dubai.csv", DUBAI)
        assert (dxb.annual_roof_irradiance_kwh_m2()
                > tro.annual_roof_irradiance_kwh_m2())


class TestResample:
    def test_temperature_interpolates_between_hours(self):
        series = parse_weather(WEATHER_DIR / "trondheim.csv", TRONDHEIM)
        grid = resample_to_steps(series, 600.0, n_days=1)
        assert grid["t_ext"].size == 144
        mid = 0.5 * (series.t_ext[0] + series.t_ext[1])
        assert grid["t_ext"][3] == pytest.approx(mid, rel=1e-12)

    def test_irradiance_held_within_the_hour(self):
        series = parse_weather(WEATHER_DIR / "trondheim.csv", TRONDHEIM)
        grid = resample_to_steps(series, 600.0, n_days=2)
        block = grid["ghi"][:6]
        assert np.all(block == series.ghi[0])

    def test_clock_fields(self):
        series = parse_weather(WEATHER_DIR / "trondheim.csv", TRONDHEIM)
        grid = resample_to_steps(series, 3600.0, n_days=2)
        assert grid["hour_local"][0] == 0.0
        assert grid["hour_local"][25] == 1.0
        assert grid["doy"][0] == 1
        assert grid["doy"][25] == 2

"""Hourly weather series, solar geometry and envelope-surface irradiance.

The CSV schema is one local-time hourly row per line:

    timestamp,t_ext_c,rh_ext,ghi_wm2,dni_wm2,dhi_wm2

dni/dhi cells may be empty; rows missing the beam/diffuse split fall back to an
all-diffuse treatment in :func:`surface_irradiance`.  Sub-hourly access
interpolates temperature and humidity linearly and holds irradiance
piecewise-constant within the hour.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

import numpy as np

from .errors import WeatherDataError

DEG = math.pi / 180.0

CSV_HEADER = ["timestamp", "t_ext_c", "rh_ext", "ghi_wm2", "dni_wm2", "dhi_wm2"]

# Wall azimuths, degrees clockwise from north.
WALL_AZIMUTHS = {"north": 0.0, "east": 90.0, "south": 180.0, "west": 270.0}


@dataclass(frozen=True)
class Location:
    """Site coordinates and the fixed UTC offset of the file's timestamps."""

    name: str
    latitude_deg: float
    longitude_deg: float
    utc_offset_h: float


# ---------------------------------------------------------------------------
# Solar geometry
# ---------------------------------------------------------------------------

def _day_angle(doy):
    return 2.0 * math.pi * (doy - 1) / 365.0


def declination_deg(doy):
    """Solar declination (degrees) from the day-of-year Fourier fit."""
    g = _day_angle(doy)
    decl = (
        0.006918
        - 0.399912 * np.cos(g)
        + 0.070257 * np.sin(g)
        - 0.006758 * np.cos(2 * g)
        + 0.000907 * np.sin(2 * g)
        - 0.002697 * np.cos(3 * g)
        + 0.00148 * np.sin(3 * g)
    )
    return decl / DEG


def equation_of_time_min(doy):
    """Equation of time (minutes); positive when the sundial runs ahead."""
    g = _day_angle(doy)
    return 229.18 * (
        0.000075
        + 0.001868 * np.cos(g)
        - 0.032077 * np.sin(g)
        - 0.014615 * np.cos(2 * g)
        - 0.040849 * np.sin(2 * g)
    )


def solar_position(location: Location, doy, hour_local):
    """Solar altitude and azimuth (degrees) at a local clock time.

    Parameters
    ----------
    location : Location
    doy : int or array
        Day of year, 1-based.
    hour_local : float or array
        Local clock time in fractional hours on the file's fixed UTC offset.

    Returns
    -------
    (altitude_deg, azimuth_deg)
        Altitude above the horizon (negative below); azimuth clockwise from
        north in [0, 360).
    """
    doy = np.asarray(doy, dtype=float)
    hour_local = np.asarray(hour_local, dtype=float)
    decl = declination_deg(doy) * DEG
    eot = equation_of_time_min(doy)
    solar_time = hour_local + eot / 60.0 + (
        location.longitude_deg - 15.0 * location.utc_offset_h
    ) / 15.0
    hour_angle = (solar_time - 12.0) * 15.0 * DEG
    lat = location.latitude_deg * DEG

    sin_alt = np.sin(lat) * np.sin(decl) + np.cos(lat) * np.cos(decl) * np.cos(hour_angle)
    sin_alt = np.clip(sin_alt, -1.0, 1.0)
    alt = np.arcsin(sin_alt)

    cos_az = (np.sin(decl) - np.sin(lat) * sin_alt) / np.maximum(
        np.cos(lat) * np.cos(alt), 1e-12
    )
    cos_az = np.clip(cos_az, -1.0, 1.0)
    az = np.arccos(cos_az)
    az = np.where(hour_angle > 0.0, 2.0 * math.pi - az, az)

    alt_deg = alt / DEG
    az_deg = az / DEG
    if alt_deg.ndim == 0:
        return float(alt_deg), float(az_deg)
    return alt_deg, az_deg


# ---------------------------------------------------------------------------
# Surface irradiance
# ---------------------------------------------------------------------------

def surface_irradiance(alt_deg, az_deg, ghi, dni=None, dhi=None, orientation_deg=0.0):
    """Shortwave irradiance (W m-2) on the roof and the four vertical walls.

    Beam is projected with the incidence cosine clamped at zero; diffuse uses
    isotropic view factors (1.0 roof, 0.5 walls).  When the beam/diffuse split
    is unavailable (dni or dhi is None/NaN) the global value is treated as
    all-diffuse: roof receives ghi, walls ghi/2.  The floor receives zero.

    Returns a dict with keys ``roof, north, east, south, west, floor``.
    """
    alt = np.asarray(alt_deg, dtype=float)
    ghi_arr = np.maximum(np.asarray(ghi, dtype=float), 0.0)

    have_split = dni is not None and dhi is not None
    if have_split:
        dni_arr = np.asarray(dni, dtype=float)
        dhi_arr = np.asarray(dhi, dtype=float)
        valid = ~(np.isnan(dni_arr) | np.isnan(dhi_arr))
    else:
        dni_arr = np.zeros_like(ghi_arr)
        dhi_arr = np.zeros_like(ghi_arr)
        valid = np.zeros(np.shape(ghi_arr), dtype=bool)

    dni_arr = np.where(valid, np.maximum(dni_arr, 0.0), 0.0)
    dhi_arr = np.where(valid, np.maximum(dhi_arr, 0.0), 0.0)

    sun_up = alt > 0.0
    sin_alt = np.sin(alt * DEG) * sun_up
    cos_alt = np.cos(alt * DEG)

    out = {}
    roof_beam = dni_arr * np.maximum(sin_alt, 0.0)
    out["roof"] = np.where(valid, roof_beam + dhi_arr, ghi_arr)

    az = np.asarray(az_deg, dtype=float)
    for name, wall_az in WALL_AZIMUTHS.items():
        cos_inc = cos_alt * np.cos((az - wall_az - orientation_deg) * DEG)
        beam = dni_arr * np.maximum(cos_inc, 0.0) * sun_up
        out[name] = np.where(valid, beam + 0.5 * dhi_arr, 0.5 * ghi_arr)

    out["floor"] = np.zeros_like(ghi_arr)
    if np.ndim(alt_deg) == 0:
        out = {k: float(v) for k, v in out.items()}
    return out


# ---------------------------------------------------------------------------
# File parsing
# ---------------------------------------------------------------------------

@dataclass
class WeatherSeries:
    """One year of hourly records for a site, as parallel numpy arrays.

    ``dni``/``dhi`` hold NaN where the file had empty cells.  ``hours`` is the
    fractional local clock hour of each row start; ``doy`` the 1-based day of
    year.  All arrays share the row count of the file.
    """

    location: Location
    timestamps: list[datetime]
    t_ext: np.ndarray
    rh_ext: np.ndarray
    ghi: np.ndarray
    dni: np.ndarray
    dhi: np.ndarray

    @property
    def n_hours(self) -> int:
        return len(self.timestamps)

    @property
    def doy(self) -> np.ndarray:
        return np.array([ts.timetuple().tm_yday for ts in self.timestamps])

    @property
    def hours(self) -> np.ndarray:
        return np.array([ts.hour + ts.minute / 60.0 for ts in self.timestamps], dtype=float)

    def annual_roof_irradiance_kwh_m2(self) -> float:
        """Annual roof shortwave sum (kWh m-2), all-sky, split-aware."""
        alt, az = solar_position(self.location, self.doy, self.hours + 0.5)
        surf = surface_irradiance(alt, az, self.ghi, self.dni, self.dhi)
        return float(np.sum(surf["roof"]) / 1000.0)


def _clip_night_ghi(series: WeatherSeries) -> None:
    """Zero any positive irradiance when the sun is below the horizon."""
    alt, _ = solar_position(series.location, series.doy, series.hours + 0.5)
    night = alt <= 0.0
    for arr in (series.ghi, series.dni, series.dhi):
        arr[night & (arr > 0.0)] = 0.0
    np.clip(series.ghi, 0.0, None, out=series.ghi)


def parse_weather(path, location: Location) -> WeatherSeries:
    """Load and validate an hourly weather CSV.

    Raises :class:`WeatherDataError` citing the offending line number for
    malformed rows or field violations, and the timestamp for gaps in the
    hourly sequence.
    """
    path = Path(path)
    timestamps: list[datetime] = []
    cols = {name: [] for name in CSV_HEADER[1:]}

    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise WeatherDataError(f"{path}: empty file") from None
        if [h.strip() for h in header] != CSV_HEADER:
            raise WeatherDataError(
                f"{path}: line 1: header {header!r} does not match {CSV_HEADER!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != len(CSV_HEADER):
                raise WeatherDataError(
                    f"{path}: line {lineno}: expected {len(CSV_HEADER)} fields, got {len(row)}"
                )
            try:
                ts = datetime.fromisoformat(row[0].strip())
            except ValueError:
                raise WeatherDataError(
                    f"{path}: line {lineno}: bad timestamp {row[0]!r}"
                ) from None
            timestamps.append(ts)
            for name, cell in zip(CSV_HEADER[1:], row[1:]):
                cell = cell.strip()
                if cell == "":
                    if name in ("dni_wm2", "dhi_wm2"):
                        cols[name].append(math.nan)
                        continue
                    raise WeatherDataError(
                        f"{path}: line {lineno}: empty {name} field"
                    )
                try:
                    cols[name].append(float(cell))
                except ValueError:
                    raise WeatherDataError(
                        f"{path}: line {lineno}: non-numeric {name} {cell!r}"
                    ) from None

    if not timestamps:
        raise WeatherDataError(f"{path}: no data rows")

    for i in range(1, len(timestamps)):
        gap = (timestamps[i] - timestamps[i - 1]).total_seconds()
        if gap != 3600.0:
            raise WeatherDataError(
                f"{path}: non-hourly step at {timestamps[i].isoformat()}"
                f" ({gap:.0f} s after previous row)"
            )

    rh = np.array(cols["rh_ext"], dtype=float)
    bad = np.where((rh < 0.0) | (rh > 1.0))[0]
    if bad.size:
        raise WeatherDataError(
            f"{path}: rh_ext out of [0, 1] at {timestamps[bad[0]].isoformat()}"
        )
    ghi = np.array(cols["ghi_wm2"], dtype=float)
    if np.any(ghi < -5.0):
        idx = int(np.where(ghi < -5.0)[0][0])
        raise WeatherDataError(
            f"{path}: negative ghi_wm2 at {timestamps[idx].isoformat()}"
        )

    series = WeatherSeries(
        location=location,
        timestamps=timestamps,
        t_ext=np.array(cols["t_ext_c"], dtype=float),
        rh_ext=rh,
        ghi=np.maximum(ghi, 0.0),
        dni=np.array(cols["dni_wm2"], dtype=float),
        dhi=np.array(cols["dhi_wm2"], dtype=float),
    )
    _clip_night_ghi(series)
    return series


def resample_to_steps(series: WeatherSeries, dt_s: float, n_days: int = 365):
    """Expand hourly records onto a fixed simulation grid of dt_s seconds.

    Temperature and humidity are interpolated linearly between hour points;
    irradiance is held constant within its hour.  Returns a dict of arrays of
    length ``n_days*86400/dt_s`` with keys ``t_ext, rh_ext, ghi, dni, dhi,
    hour_local, doy``.
    """
    steps_per_day = int(round(86400.0 / dt_s))
    n_steps = n_days * steps_per_day
    t_step_h = (np.arange(n_steps) * dt_s) / 3600.0   # hours since sim start

    hour_idx = np.minimum(t_step_h.astype(int), series.n_hours - 1)
    frac = np.clip(t_step_h - hour_idx, 0.0, 1.0)
    nxt = np.minimum(hour_idx + 1, series.n_hours - 1)

    t_ext = series.t_ext[hour_idx] * (1.0 - frac) + series.t_ext[nxt] * frac
    rh_ext = series.rh_ext[hour_idx] * (1.0 - frac) + series.rh_ext[nxt] * frac

    return {
        "t_ext": t_ext,
        "rh_ext": np.clip(rh_ext, 0.0, 1.0),
        "ghi": series.ghi[hour_idx],
        "dni": series.dni[hour_idx],
        "dhi": series.dhi[hour_idx],
        "hour_local": t_step_h % 24.0,
        "doy": (t_step_h // 24.0).astype(int) % 365 + 1,
        "hour_of_file": hour_idx,
    }

#!/usr/bin/env python3
"""Generate the bundled hourly weather files from monthly climate normals.

Deterministic: a fixed seed per location drives the day-to-day variation, so
re-running the script reproduces data/weather/*.csv byte for byte.  The
synthesis is intentionally simple (smooth seasonal and diurnal temperature
curves with autocorrelated residuals, a Haurwitz clear-sky envelope scaled by
a per-day cloudiness draw, and an Erbs-style split into beam and diffuse)
but preserves the features the simulation cares about: seasonal swing,
diurnal phase, humidity anticorrelation and realistic irradiance totals.

Usage: python scripts/make_weather.py [out_dir]
"""

from __future__ import annotations

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from vfarm.weather import Location, solar_position  # noqa: E402

MONTH_DAYS = np.array([31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31])
MONTH_MID_DOY = np.cumsum(MONTH_DAYS) - MONTH_DAYS / 2.0

SITES = {
    "trondheim": {
        "seed": 1931,
        "location": Location("trondheim", 63.43, 10.40, 1.0),
        "t_monthly": [-1.6, -1.1, 1.4, 5.0, 9.6, 12.9, 14.9, 14.3, 10.6, 6.3, 2.0, -0.7],
        "t_diurnal": [2.0, 2.5, 3.5, 4.5, 5.0, 5.0, 5.0, 4.5, 3.5, 2.5, 2.0, 1.8],
        "rh_monthly": [0.83, 0.81, 0.77, 0.72, 0.68, 0.70, 0.74, 0.76, 0.79, 0.82, 0.84, 0.84],
        "cloudless": [0.30, 0.35, 0.40, 0.45, 0.45, 0.45, 0.42, 0.42, 0.38, 0.32, 0.28, 0.25],
    },
    "shanghai": {
        "seed": 1843,
        "location": Location("shanghai", 31.23, 121.47, 8.0),
        "t_monthly": [6.1, 7.8, 11.8, 16.9, 22.0, 25.8, 30.8, 30.2, 26.7, 20.8, 15.0, 8.6],
        "t_diurnal": [4.5, 4.5, 5.0, 5.5, 5.5, 5.0, 5.5, 5.5, 5.0, 5.0, 4.5, 4.5],
        "rh_monthly": [0.74, 0.74, 0.75, 0.75, 0.76, 0.81, 0.80, 0.79, 0.78, 0.74, 0.73, 0.71],
        "cloudless": [0.42, 0.40, 0.40, 0.42, 0.43, 0.38, 0.48, 0.50, 0.45, 0.48, 0.46, 0.45],
    },
    "dubai": {
        "seed": 1971,
        "location": Location("dubai", 25.20, 55.27, 4.0),
        "t_monthly": [19.1, 20.0, 22.9, 26.8, 30.9, 33.1, 34.9, 35.2, 32.7, 29.2, 24.8, 21.0],
        "t_diurnal": [5.5, 5.5, 6.0, 6.5, 7.0, 7.0, 7.0, 7.0, 6.5, 6.0, 5.5, 5.5],
        "rh_monthly": [0.65, 0.65, 0.63, 0.55, 0.50, 0.55, 0.53, 0.55, 0.60, 0.60, 0.61, 0.64],
        "cloudless": [0.62, 0.62, 0.60, 0.62, 0.65, 0.65, 0.60, 0.60, 0.65, 0.66, 0.65, 0.62],
    },
}

SOLAR_CONSTANT = 1361.0


def _smooth_annual(monthly, doy):
    """Periodic interpolation of monthly values onto days of year."""
    x = np.concatenate([[MONTH_MID_DOY[-1] - 365.0], MONTH_MID_DOY,
                        [MONTH_MID_DOY[0] + 365.0]])
    y = np.concatenate([[monthly[-1]], monthly, [monthly[0]]])
    return np.interp(doy, x, y)


def _ar1(rng, n, phi, sigma):
    noise = rng.normal(0.0, sigma, n)
    out = np.empty(n)
    out[0] = noise[0]
    for i in range(1, n):
        out[i] = phi * out[i - 1] + noise[i]
    return out


def synthesize(site: dict):
    rng = np.random.default_rng(site["seed"])
    loc = site["location"]
    n = 8760
    hour = np.arange(n)
    doy = hour // 24 + 1
    hour_of_day = hour % 24

    t_base = _smooth_annual(np.asarray(site["t_monthly"], dtype=float), doy)
    amp = _smooth_annual(np.asarray(site["t_diurnal"], dtype=float), doy)
    diurnal = -np.cos(2.0 * np.pi * (hour_of_day - 3.0) / 24.0)  # peak ~15:00
    t_ext = t_base + 0.5 * amp * diurnal + _ar1(rng, n, 0.97, 0.35)

    rh_base = _smooth_annual(np.asarray(site["rh_monthly"], dtype=float), doy)
    rh = rh_base - 0.06 * diurnal + _ar1(rng, n, 0.95, 0.012)
    rh = np.clip(rh, 0.15, 0.99)

    # Per-day cloudiness draw around the monthly clear-sky fraction.
    clear_m = _smooth_annual(np.asarray(site["cloudless"], dtype=float),
                             np.arange(365) + 1)
    wobble = _ar1(rng, 365, 0.6, 0.30)
    k_day = np.clip(clear_m * (1.0 + wobble), 0.05, 0.95)
    k = np.repeat(k_day, 24)

    alt, _az = solar_position(loc, doy, hour_of_day + 0.5)
    sin_alt = np.sin(np.radians(np.maximum(alt, 0.0)))
    up = sin_alt > 0.01
    ghi_clear = np.where(
        up, 1098.0 * sin_alt * np.exp(-0.059 / np.maximum(sin_alt, 0.01)), 0.0
    )
    ghi = ghi_clear * k

    # Erbs-style diffuse fraction from the clearness index.
    i0h = SOLAR_CONSTANT * (1.0 + 0.033 * np.cos(2.0 * np.pi * doy / 365.0)) * sin_alt
    kt = np.where(up, ghi / np.maximum(i0h, 1.0), 0.0)
    df = np.where(
        kt <= 0.22,
        1.0 - 0.09 * kt,
        np.where(
            kt <= 0.80,
            0.9511 - 0.1604 * kt + 4.388 * kt**2 - 16.638 * kt**3 + 12.336 * kt**4,
            0.165,
        ),
    )
    dhi = np.where(up, df * ghi, 0.0)
    dni = np.where(up, np.minimum((ghi - dhi) / np.maximum(sin_alt, 0.05), 950.0), 0.0)

    return t_ext, rh, ghi, dni, dhi


def write_csv(path: Path, data) -> None:
    t_ext, rh, ghi, dni, dhi = data
    lines = ["timestamp,t_ext_c,rh_ext,ghi_wm2,dni_wm2,dhi_wm2"]
    ts = np.datetime64("2019-01-01T00:00") + np.arange(8760) * np.timedelta64(1, "h")
    for i in range(8760):
        lines.append(
            f"{ts[i]},{t_ext[i]:.2f},{rh[i]:.3f},{ghi[i]:.1f},{dni[i]:.1f},{dhi[i]:.1f}"
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {path} ({path.stat().st_size / 1024:.0f} kB)")


def main() -> None:
    out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parents[1] / "data" / "weather"
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, site in SITES.items():
        write_csv(out_dir / f"{name}.csv", synthesize(site))


if __name__ == "__main__":
    main()

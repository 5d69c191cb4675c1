"""Moist-air property relations on the Magnus saturation curve.

All temperatures are dry-bulb in degrees Celsius, pressures in kPa unless a
suffix says otherwise, humidity ratios in kg water per kg dry air.  Relative
humidity is a fraction in [0, 1].  Everything accepts numpy arrays as well as
floats; scalars in, scalars out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

# Magnus coefficients (saturation over liquid water).
_MAGNUS_A = 0.6108      # kPa
_MAGNUS_B = 17.27
_MAGNUS_C = 237.3       # degC

# Dry-air gas constant (J kg-1 K-1) and vapour/dry-air molar mass ratio.
_R_DA = 287.055
_EPS = 0.622

T_VALID_C = (-40.0, 60.0)

STANDARD_PRESSURE_KPA = 101.325
CP_AIR = 1006.0          # J kg-1 K-1, dry air near room conditions
AIR_DENSITY = 1.2        # kg m-3, room-state default used by the balances
LATENT_HEAT = 2.45e6     # J kg-1, vaporisation near 20 degC


def _check_temperature(t_c):
    lo, hi = T_VALID_C
    t = np.asarray(t_c, dtype=float)
    if np.any(t < lo) or np.any(t > hi):
        raise DomainError(
            f"temperature {t_c!r} degC outside saturation-curve validity {T_VALID_C}"
        )


def saturation_pressure(t_c):
    """Saturation vapour pressure (kPa) at dry-bulb t_c (degC)."""
    _check_temperature(t_c)
    t = np.asarray(t_c, dtype=float)
    out = _MAGNUS_A * np.exp(_MAGNUS_B * t / (t + _MAGNUS_C))
    return float(out) if np.isscalar(t_c) else out


def vpd(t_c, rh):
    """Vapour pressure deficit (kPa) of air at t_c and relative humidity rh."""
    r = np.asarray(rh, dtype=float)
    if np.any(r < 0.0) or np.any(r > 1.0):
        raise DomainError(f"relative humidity {rh!r} outside [0, 1]")
    out = saturation_pressure(t_c) * (1.0 - r)
    return float(out) if np.isscalar(t_c) and np.isscalar(rh) else out


def delta_es(t_c):
    """Slope of the saturation curve d(es)/dT (kPa per degC) at t_c.

    Analytic derivative of the Magnus form: 4098.171 es / (t + 237.3)^2.
    """
    t = np.asarray(t_c, dtype=float)
    es = saturation_pressure(t_c)
    out = (_MAGNUS_B * _MAGNUS_C) * es / (t + _MAGNUS_C) ** 2
    return float(out) if np.isscalar(t_c) else out


def psychrometric_gamma(pressure_kpa=STANDARD_PRESSURE_KPA):
    """Psychrometric constant (kPa per degC) at the given total pressure."""
    return 0.000665 * pressure_kpa


def humidity_ratio(t_c, rh, pressure_kpa=STANDARD_PRESSURE_KPA):
    """Humidity ratio w (kg/kg dry air) from dry-bulb and relative humidity."""
    r = np.asarray(rh, dtype=float)
    if np.any(r < 0.0) or np.any(r > 1.0):
        raise DomainError(f"relative humidity {rh!r} outside [0, 1]")
    pv = saturation_pressure(t_c) * r
    out = _EPS * pv / (pressure_kpa - pv)
    return float(out) if np.isscalar(t_c) and np.isscalar(rh) else out


def vapour_pressure_from_w(w, pressure_kpa=STANDARD_PRESSURE_KPA):
    """Partial vapour pressure (kPa) from humidity ratio."""
    w_arr = np.asarray(w, dtype=float)
    out = pressure_kpa * w_arr / (_EPS + w_arr)
    return float(out) if np.isscalar(w) else out


def dew_point(t_c, rh):
    """Dew-point temperature (degC) by inverting the Magnus relation."""
    r = np.asarray(rh, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("dew point undefined for rh <= 0")
    pv = saturation_pressure(t_c) * r
    ln_ratio = np.log(pv / _MAGNUS_A)
    out = _MAGNUS_C * ln_ratio / (_MAGNUS_B - ln_ratio)
    return float(out) if np.isscalar(t_c) and np.isscalar(rh) else out


def enthalpy(t_c, w):
    """Specific enthalpy of moist air (J per kg dry air)."""
    t = np.asarray(t_c, dtype=float)
    w_arr = np.asarray(w, dtype=float)
    out = 1006.0 * t + w_arr * (2.501e6 + 1860.0 * t)
    return float(out) if np.isscalar(t_c) and np.isscalar(w) else out


def moist_density(t_c, w, pressure_kpa=STANDARD_PRESSURE_KPA):
    """Density of the moist-air mixture (kg m-3)."""
    t_k = np.asarray(t_c, dtype=float) + 273.15
    w_arr = np.asarray(w, dtype=float)
    rho_da = pressure_kpa * 1000.0 / (_R_DA * t_k * (1.0 + 1.6078 * w_arr))
    out = rho_da * (1.0 + w_arr)
    return float(out) if np.isscalar(t_c) and np.isscalar(w) else out


@dataclass(frozen=True)
class MoistAirState:
    """A bundle of consistent moist-air properties at a single state point.

    Constructed from dry-bulb and relative humidity; derived members are filled
    in post-init.  Construction fails if the implied humidity ratio would be
    supersaturated.
    """

    t_c: float
    rh: float
    pressure_kpa: float = STANDARD_PRESSURE_KPA
    w: float = field(init=False)
    vpd_kpa: float = field(init=False)
    dew_point_c: float = field(init=False)
    enthalpy_j_kg: float = field(init=False)
    density_kg_m3: float = field(init=False)

    def __post_init__(self):
        w = humidity_ratio(self.t_c, self.rh, self.pressure_kpa)
        w_sat = humidity_ratio(self.t_c, 1.0, self.pressure_kpa)
        if w > w_sat * (1.0 + 1e-3):
            raise DomainError(
                f"humidity ratio {w:.5f} exceeds saturation {w_sat:.5f} at {self.t_c} degC"
            )
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "vpd_kpa", vpd(self.t_c, self.rh))
        object.__setattr__(self, "dew_point_c", dew_point(self.t_c, max(self.rh, 1e-6)))
        object.__setattr__(self, "enthalpy_j_kg", enthalpy(self.t_c, w))
        object.__setattr__(self, "density_kg_m3", moist_density(self.t_c, w, self.pressure_kpa))

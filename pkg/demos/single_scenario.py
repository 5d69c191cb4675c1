"""
A year of lettuce in one chamber
================================

Walks the library end to end for a single configuration: synthetic
Trondheim weather, the insulated chamber held at 24 C / 900 ppm under
100 umol light, heat pumps turning thermal duty into electricity, and
the resulting cost and carbon intensity of every kilogram.
"""
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from vfarm import chamber, econ, hvac, sustain, weather
from vfarm.config import load_config

ROOT = Path(__file__).resolve().parents[1]
config = load_config(ROOT / "data" / "config" / "default.yaml")

# Weather first: one year of hourly dry bulb, humidity and irradiance.
site = config.site("trondheim")
series = weather.parse_weather(site.weather_path, site.location)
print(f"{site.name}: mean outdoor temperature {series.t_ext.mean():.1f} C, "
      f"annual roof irradiation {series.annual_roof_irradiance_kwh_m2():.0f} "
      f"kWh/m2")

# The chamber balance. Control is ideal, so the simulation returns both the
# annual totals and the 10-minute duty series the heat pumps will see.
setpoints = config.setpoints(t_in_c=24.0, co2_ppm=900.0, ppfd=100.0)
annual, duty = chamber.integrate_year(
    series, setpoints, config.geometry, config.envelope(insulated=True),
    config.chamber, config.crop,
)
print(f"\n{annual.cycles} harvests, {annual.yield_kg:.0f} kg fresh lettuce, "
      f"first cycle {annual.cycle_days[0]:.0f} days")
print(f"thermal {annual.thermal_kwh:.0f} kWh + lighting "
      f"{annual.lighting_kwh:.0f} kWh -> SEC {annual.sec_kwh_kg:.2f} kWh/kg")

# Heat pumps convert the four thermal services into electricity.
bill = hvac.annualize(duty, config.hp_heating, config.hp_cooling,
                      annual.lighting_kwh, annual.yield_kg)
print(f"electricity {bill.e_total_kwh:.0f} kWh "
      f"(SCOP heat {bill.seasonal_cop_heat:.2f}, "
      f"cool {bill.seasonal_cop_cool:.2f}) -> SEEC "
      f"{bill.seec_kwh_kg:.2f} kWh_el/kg")

# Money: annualized investment plus running costs, levelized per kilogram.
p_light_w, _ = chamber.lighting_power(setpoints, config.geometry,
                                      config.chamber)
book = config.cost_book
capex_bd = econ.capex(book, p_light_w, bill.cap_heating_w + bill.cap_cooling_w,
                      config.geometry.crop_area_m2,
                      config.geometry.envelope_area_m2, insulated=True)
opex_bd = econ.opex(book, site.name, annual.yield_kg, bill.e_total_kwh,
                    annual.water_net_l, annual.co2_injected_kg,
                    config.geometry.footprint_m2)
result = econ.lcol(book, capex_bd, opex_bd, p_light_w, annual.yield_kg)
print(f"\nCAPEX {capex_bd.total / 1e3:.0f} k$, OPEX {opex_bd.total / 1e3:.1f} "
      f"k$/y -> LCoL {result.lcol_usd_kg:.2f} $/kg")

# Carbon: growing here versus trucking the same lettuce in.
vf_g = sustain.vf_footprint(bill.seec_kwh_kg, site.supply.grid_factor_g_kwh)
saved = sustain.savings(vf_g, sustain.import_footprint(site.supply))
print(f"footprint {saved.vf_g_kg:.0f} g/kg vs import {saved.import_g_kg:.0f} "
      f"g/kg -> saves {saved.abs_g_kg:.0f} g/kg ({saved.rel:.0%})")

# The daily thermal profile shows the seasons: heating carries the winter,
# cooling and dehumidification the bright half of the year.
days = np.arange(1, 366)
fig, ax = plt.subplots(figsize=(9, 4))
for key, label in (("q_heat", "heating"), ("q_cool", "cooling"),
                   ("q_dehum", "dehumidification")):
    ax.plot(days, annual.daily[key], label=label, lw=0.8)
ax.set_xlabel("day of year")
ax.set_ylabel("kWh per day")
ax.legend(frameon=False)
fig.tight_layout()
out = Path(__file__).with_suffix(".png")
fig.savefig(out, dpi=120)
print(f"\nwrote {out}")

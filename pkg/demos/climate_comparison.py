"""
One recipe, three climates
==========================

Runs the identical chamber recipe (insulated, 250 umol, 24 C, 1400 ppm)
in Trondheim, Shanghai and Dubai.  Yield barely moves because the crop
only sees the setpoints; everything that costs money and carbon happens
on the other side of the envelope.
"""
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from vfarm.config import load_config
from vfarm.sweep import parse_scenario_id, run_scenario

ROOT = Path(__file__).resolve().parents[1]
config = load_config(ROOT / "data" / "config" / "default.yaml")

records = [run_scenario(config, parse_scenario_id(sid, config))
           for sid in ("T_I_250_24_1400", "S_I_250_24_1400", "D_I_250_24_1400")]

# Same plants, very different bills.
header = f"{'':12}" + "".join(f"{r['location']:>12}" for r in records)
print(header)
rows = [
    ("yield kg", "yield_kg", "{:.0f}"),
    ("heating kWh", "heating_kwh", "{:.0f}"),
    ("cooling kWh", "cooling_kwh", "{:.0f}"),
    ("dehum kWh", "dehum_kwh", "{:.0f}"),
    ("SCOP cool", "scop_cooling", "{:.2f}"),
    ("SEEC kWh/kg", "seec_kwh_kg", "{:.2f}"),
    ("LCoL $/kg", "lcol_usd_kg", "{:.2f}"),
    ("saved g/kg", "savings_g_kg", "{:+.0f}"),
]
for label, key, fmt in rows:
    cells = "".join(f"{fmt.format(r[key]):>12}" for r in records)
    print(f"{label:12}{cells}")

# Trondheim pays for heat, Dubai pays to reject it, Shanghai sits between
# with the weakest grid mix. Carbon savings flip sign where imports travel
# short distances over land or the grid is carbon heavy.
print("\nlocal production beats importing only in "
      + ", ".join(r["location"] for r in records if r["savings_g_kg"] > 0))

# Stack the thermal services per site.
services = ("heating_kwh", "cooling_kwh", "dehum_kwh", "postheat_kwh")
labels = ("heating", "cooling", "dehumidification", "post-heating")
x = np.arange(len(records))
fig, ax = plt.subplots(figsize=(7, 4))
bottom = np.zeros(len(records))
for key, label in zip(services, labels):
    vals = np.array([r[key] for r in records])
    ax.bar(x, vals, 0.55, bottom=bottom, label=label)
    bottom += vals
ax.set_xticks(x, [r["location"] for r in records])
ax.set_ylabel("thermal duty, kWh per year")
ax.legend(frameon=False)
fig.tight_layout()
out = Path(__file__).with_suffix(".png")
fig.savefig(out, dpi=120)
print(f"wrote {out}")

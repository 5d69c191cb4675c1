"""
What actually drives the answers
================================

Ranks every design axis against every outcome with distance correlation
(which catches the nonlinear responses a plain correlation would miss),
then asks the complementary planning question: at what electricity price
would a different light level have been the better buy?
"""
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from vfarm.config import load_config
from vfarm.sweep import run_sweep

ROOT = Path(__file__).resolve().parents[1]
config = load_config(ROOT / "data" / "config" / "default.yaml")
report = run_sweep(config, workers=4)

rho = {(inp, out): val for inp, out, val in report.sensitivity}
inputs = ("climate", "insulated", "ppfd", "t_in_c", "co2_ppm")

# Light level rules the biology and, through it, nearly all the energy;
# climate only matters once money enters through tariffs and duty.
for outcome in ("yield_kg", "e_total_kwh", "lcol_usd_kg", "wue_g_l"):
    ranked = sorted(inputs, key=lambda i: -rho[(i, outcome)])
    cells = "  ".join(f"{i} {rho[(i, outcome)]:.2f}" for i in ranked)
    print(f"{outcome:12} {cells}")

# Break-even electricity prices: each row compares PPFD 400 and PPFD 100
# against the 250 baseline at that site and temperature. A cheap grid
# rewards pushing light harder; an expensive one rewards backing off.
print("\nbreak-even electricity prices, $/kWh (baseline PPFD 250):")
cols = list(report.breakeven[0])
print("  ".join(f"{c:>14}" for c in cols))
for row in report.breakeven:
    print("  ".join(f"{row[c]:>14.3g}" if isinstance(row[c], float)
                    else f"{row[c]!s:>14}" for c in cols))

# The sensitivity table as a grid of bars, one panel per outcome.
outcomes = [out for out in dict.fromkeys(o for _, o in rho)]
fig, axes = plt.subplots(2, 4, figsize=(13, 6), sharey=True)
y = np.arange(len(inputs))
for ax, outcome in zip(axes.flat, outcomes):
    vals = [rho[(inp, outcome)] for inp in inputs]
    ax.barh(y, vals)
    ax.set_yticks(y, inputs)
    ax.set_xlim(0, 1)
    ax.invert_yaxis()
    ax.set_title(outcome, fontsize=9)
fig.suptitle("distance correlation of design axes vs outcomes")
fig.tight_layout()
out = Path(__file__).with_suffix(".png")
fig.savefig(out, dpi=120)
print(f"\nwrote {out}")

"""Full-grid sanity report: every remaining calibration target in one run.

Internal harness used while tuning defaults; not part of the package.
"""

import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from vfarm.config import load_config
from vfarm.sweep import run_sweep

def main():
    cfg = load_config(Path(__file__).resolve().parents[1] / "data/config/default.yaml")
    t0 = time.perf_counter()
    report = run_sweep(cfg, workers=8)
    elapsed = time.perf_counter() - t0
    recs = {r["id"]: r for r in report.records}
    print("%d records, %d errors, %.1f s" % (len(recs), len(report.errors), elapsed))
    for err in report.errors:
        print("ERROR", err)

    ins = [r for r in recs.values() if r["insulated"]]
    print("\n-- criterion-level stats --")
    sec_lo = min(r["sec_kwh_kg"] for r in ins)
    sec_hi = max(r["sec_kwh_kg"] for r in ins)
    amin = min(ins, key=lambda r: r["sec_kwh_kg"])
    print("insulated SEC range [%.2f, %.2f] (target [7.8, 23.8] +-15%%)" % (sec_lo, sec_hi))
    print("SEC argmin: %s (target T_I_100_24_1400), SEEC %.2f (target 5.05)"
          % (amin["id"], amin["seec_kwh_kg"]))

    prod = [r["productivity_kg_m2"] for r in recs.values()]
    print("productivity range [%.1f, %.1f] (target ~[31, 118])" % (min(prod), max(prod)))

    light_cool = sum(r["lighting_kwh"] + r["cooling_kwh"] for r in ins)
    sec_num = sum(r["lighting_kwh"] + r["thermal_kwh"] for r in ins)
    print("lighting+cooling / (lighting+thermal), insulated agg: %.3f (>=0.90)"
          % (light_cool / sec_num))

    # sustainability
    t_base = recs["T_I_250_24_1400"]
    print("\nTrondheim savings at 250/24/1400: %.1f g/kg (%.0f%%) target ~230 (~70%%)"
          % (t_base["savings_g_kg"], 100 * t_base["savings_rel"]))
    neg_s = [r["id"] for r in recs.values()
             if r["location"] == "shanghai" and r["savings_g_kg"] >= 0]
    neg_d = [r["id"] for r in recs.values()
             if r["location"] == "dubai" and r["savings_g_kg"] >= 0]
    print("Shanghai scenarios with non-negative savings: %d (target 0)" % len(neg_s))
    print("Dubai scenarios with non-negative savings: %d (target 0)" % len(neg_d))
    sh = recs["S_I_250_24_1400"]
    print("Shanghai breakeven gain: %.3f (target 0.988+-0.01)" % sh["breakeven_gain"])

    # emissions cut, PPFD 250 -> 100 (total annual basis), Trondheim insulated
    e250 = recs["T_I_250_24_900"]["emissions_t_y"]
    e100 = recs["T_I_100_24_900"]["emissions_t_y"]
    print("PPFD 250->100 emissions cut: %.1f%% (target ~60%% +-10pts)"
          % (100 * (1 - e100 / e250)))

    # SEEC climate deltas at the SEC-argmin point
    for loc, code in (("shanghai", "S"), ("dubai", "D")):
        other = recs[code + "_I_100_24_1400"]
        d = other["seec_kwh_kg"] / amin["seec_kwh_kg"] - 1
        print("SEEC delta %s vs T at 100/24/1400: %+.1f%% (target +7.8/+8.1, in [3,15])"
              % (loc, 100 * d))

    # economics spread
    capex = [r["capex_usd"] for r in recs.values()]
    print("\nCAPEX range [%.0f, %.0f] k$ (target ~[61, 140] +-15%%)"
          % (min(capex) / 1e3, max(capex) / 1e3))
    sh_opex = [r["opex_usd"] for r in recs.values() if r["location"] == "shanghai"]
    print("Shanghai OPEX range [%.0f, %.0f] k$ (target ~[11, 34])"
          % (min(sh_opex) / 1e3, max(sh_opex) / 1e3))
    for code, name in (("T", "trondheim"), ("S", "shanghai"), ("D", "dubai")):
        best = min((r for r in recs.values()
                    if r["location"] == name and r["insulated"]),
                   key=lambda r: r["lcol_usd_kg"])
        bare_twin = recs[best["id"].replace("_I_", "_O_")]
        print("LCoL argmin %s: %s = %.2f (bare twin %.2f, gap %+.3f)"
              % (name, best["id"], best["lcol_usd_kg"], bare_twin["lcol_usd_kg"],
                 bare_twin["lcol_usd_kg"] - best["lcol_usd_kg"]))

    print("\n-- break-even electricity (insulated, co2 900) --")
    for row in report.breakeven:
        print(row)

    print("\n-- sensitivity --")
    by = {}
    for inp, out, rho in report.sensitivity:
        by[(inp, out)] = rho
    for out in ("yield_kg", "energy_kwh", "e_total_kwh", "sec_kwh_kg",
                "seec_kwh_kg", "lcol_usd_kg", "wue_g_l"):
        row = sorted(((inp, by[(inp, out)]) for inp in
                      ("climate", "insulated", "ppfd", "t_in_c", "co2_ppm")),
                     key=lambda kv: -kv[1])
        print("%-12s " % out + "  ".join("%s=%.2f" % kv for kv in row))


if __name__ == "__main__":
    main()

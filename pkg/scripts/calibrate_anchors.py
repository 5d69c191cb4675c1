"""Run the anchor scenarios and score their targets.

Internal calibration harness: prints per-scenario load splits and the
ratio checks used while tuning chamber defaults.  Not part of the package.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from vfarm.config import load_config
from vfarm.sweep import run_sweep

IDS = [
    "T_I_100_20_900", "T_I_100_24_900", "T_I_100_28_900",
    "T_I_250_20_900", "T_I_400_20_900",
    "T_O_100_20_900", "T_O_100_28_900", "T_O_400_20_900",
    "D_I_100_20_900", "D_I_100_28_900",
    "D_O_100_20_900", "D_O_100_28_900",
    "T_I_100_24_1400", "T_I_400_28_400", "D_I_100_20_400",
    "T_I_250_24_1400", "S_I_250_24_1400", "D_I_250_24_1400",
    "T_I_400_24_1400", "T_I_100_20_1400",
]


def main():
    cfg = load_config(Path(__file__).resolve().parents[1] / "data/config/default.yaml")
    report = run_sweep(cfg, workers=4, only=IDS)
    recs = {r["id"]: r for r in report.records}

    hdr = ("id", "heat", "cool", "dehum", "ph", "thermal", "light",
           "yield", "sec", "seec", "wue", "lcol")
    print(("%-16s" + "%8s" * (len(hdr) - 1)) % hdr)
    for sid in IDS:
        r = recs[sid]
        print("%-16s%8.2f%8.2f%8.2f%8.2f%8.2f%8.2f%8.0f%8.2f%8.2f%8.0f%8.2f" % (
            sid, r["heating_kwh"] / 1e3, r["cooling_kwh"] / 1e3,
            r["dehum_kwh"] / 1e3, r["postheat_kwh"] / 1e3,
            r["thermal_kwh"] / 1e3, r["lighting_kwh"] / 1e3,
            r["yield_kg"], r["sec_kwh_kg"], r["seec_kwh_kg"],
            r["wue_g_l"], r["lcol_usd_kg"]))

    def th(sid):
        return recs[sid]["thermal_kwh"]

    def load(sid, key):
        return recs[sid][key + "_kwh"]

    print()
    checks = []

    def chk(name, value, target, lo, hi):
        ok = lo <= value <= hi
        checks.append(ok)
        print("%-52s %9.3f  target %-9s %s" % (
            name, value, target, "ok" if ok else "MISS"))

    chk("T_I_100_28_900 thermal MWh", th("T_I_100_28_900") / 1e3, "18+-15%",
        15.3, 20.7)
    chk("D_O_100_28_900 thermal MWh", th("D_O_100_28_900") / 1e3, "21+-15%",
        17.85, 24.15)
    t20, t28 = "T_I_100_20_900", "T_I_100_28_900"
    chk("cooling 20->28 change (T ins)",
        load(t28, "cooling") / load(t20, "cooling") - 1, "-0.085..-0.10",
        -0.30, 0.05)
    chk("heating 20->28 change (T ins)",
        load(t28, "heating") / load(t20, "heating") - 1, "+0.50",
        0.10, 1.20)
    dp = lambda s: load(s, "dehum") + load(s, "postheat")  # noqa: E731
    chk("dehum+ph 20->28 change (T ins)", dp(t28) / dp(t20) - 1, "-0.48",
        -0.80, -0.15)
    chk("heating 20->28 change (D ins)",
        load("D_I_100_28_900", "heating") / load("D_I_100_20_900", "heating") - 1,
        "+3.6", 0.8, 8.0)
    chk("cooling 100->250 (T ins 20)",
        load("T_I_250_20_900", "cooling") / load(t20, "cooling") - 1, "+1.8",
        0.9, 3.2)
    chk("cooling 100->400 (T ins 20)",
        load("T_I_400_20_900", "cooling") / load(t20, "cooling") - 1, "+3.6",
        2.0, 6.0)
    chk("dehum 100->250 (T ins 20)",
        dp("T_I_250_20_900") / dp(t20) - 1, "-0.67", -0.95, -0.30)
    chk("dehum 100->400 (T ins 20)",
        dp("T_I_400_20_900") / dp(t20) - 1, "-0.77", -0.97, -0.40)
    chk("bare total delta (T 100/20)",
        th("T_O_100_20_900") / th(t20) - 1, ">=0.25", 0.25, 1.2)
    chk("bare total delta (T 100/28)",
        th("T_O_100_28_900") / th(t28) - 1, "+0.75", 0.30, 1.3)
    chk("bare total delta (T 400/20)",
        th("T_O_400_20_900") / th("T_I_400_20_900") - 1, "-0.04+-0.04",
        -0.08, 0.0)
    chk("bare heating delta (T 100/20)",
        load("T_O_100_20_900", "heating") / load(t20, "heating") - 1, "+3.6",
        1.5, 6.5)
    chk("bare total delta (D 100/20)",
        th("D_O_100_20_900") / th("D_I_100_20_900") - 1, "+0.06..0.21",
        0.0, 0.45)
    chk("SEC argmin = T_I_100_24_1400",
        recs["T_I_100_24_1400"]["sec_kwh_kg"],
        "< others",
        0.0, min(recs[s]["sec_kwh_kg"] for s in IDS if s != "T_I_100_24_1400"))
    chk("SEC at argmin", recs["T_I_100_24_1400"]["sec_kwh_kg"], "7.8+-15%",
        6.63, 8.97)
    chk("SEEC at argmin", recs["T_I_100_24_1400"]["seec_kwh_kg"], "5.05+-15%",
        4.29, 5.81)
    chk("SEC max (T_I_400_28_400)", recs["T_I_400_28_400"]["sec_kwh_kg"],
        "23.8+-15%", 20.2, 27.4)
    chk("WUE D_I_100_20_400", recs["D_I_100_20_400"]["wue_g_l"], "1132+-15%",
        962, 1302)
    chk("LCoL T_I_250_24_1400", recs["T_I_250_24_1400"]["lcol_usd_kg"],
        "6.38+-15%", 5.42, 7.34)
    chk("LCoL S_I_250_24_1400", recs["S_I_250_24_1400"]["lcol_usd_kg"],
        "4.57+-15%", 3.88, 5.26)
    chk("LCoL D_I_250_24_1400", recs["D_I_250_24_1400"]["lcol_usd_kg"],
        "6.48+-15%", 5.51, 7.45)
    print("\n%d/%d checks pass" % (sum(checks), len(checks)))


if __name__ == "__main__":
    main()

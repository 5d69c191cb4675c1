"""Command-line front end.

``vfarm run`` executes the scenario sweep and writes the report files;
``vfarm sensitivity`` and ``vfarm breakeven`` re-derive their tables from an
existing report directory.  Exit codes: 0 success, 1 configuration problem,
2 one or more scenario failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import load_config
from .errors import ConfigError, VFarmError
from .sweep import emit_reports, run_sweep, sensitivity_rows


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vfarm",
        description="Vertical-farm scenario simulator: chamber balance, "
                    "heat-pump electricity, costs and carbon.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the scenario sweep")
    run_p.add_argument("--config", required=True, help="configuration YAML")
    run_p.add_argument("--out", required=True, help="output directory")
    run_p.add_argument("--workers", type=int, default=1,
                       help="parallel worker processes (default 1)")
    run_p.add_argument("--scenario", default=None,
                       help="run a single scenario id, e.g. T_I_250_24_1400")
    run_p.add_argument("--strict-paper", action="store_true",
                       help="audit mode: sign-flipped real-rate formula")

    sens_p = sub.add_parser("sensitivity",
                            help="recompute the sensitivity table of a report")
    sens_p.add_argument("--report", required=True, help="report directory")

    be_p = sub.add_parser("breakeven",
                          help="print the electricity break-even table")
    be_p.add_argument("--report", required=True, help="report directory")
    return parser


def _load_report(report_dir: str) -> dict:
    path = Path(report_dir) / "report.json"
    if not path.exists():
        raise ConfigError(f"no report.json under {report_dir}")
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _cmd_run(args) -> int:
    config = load_config(args.config, strict_paper=args.strict_paper)
    only = [args.scenario] if args.scenario else None
    report = run_sweep(config, workers=args.workers, only=only)
    paths = emit_reports(report, args.out)
    meta = report.metadata
    print(f"{meta['completed']}/{meta['scenarios']} scenarios completed "
          f"in {meta['elapsed_s']} s; wrote {paths['summary']}")
    for err in report.errors:
        print(f"  FAILED {err['id']}: {err['error']}: {err['message']}",
              file=sys.stderr)
    return 2 if report.errors else 0


def _cmd_sensitivity(args) -> int:
    body = _load_report(args.report)
    rows = sensitivity_rows(body.get("records", []))
    if not rows:
        print("report has fewer than two scenario records; nothing to rank")
        return 0
    out = Path(args.report) / "sensitivity.csv"
    with open(out, "w", newline="", encoding="utf-8") as fh:
        fh.write("input,outcome,rho\n")
        for inp, outc, rho in rows:
            fh.write(f"{inp},{outc},{rho:.10g}\n")
    by_outcome: dict[str, list] = {}
    for inp, outc, rho in rows:
        by_outcome.setdefault(outc, []).append((inp, rho))
    width = max(len(r[0]) for r in rows)
    for outc, pairs in by_outcome.items():
        print(f"\n{outc}:")
        for inp, rho in sorted(pairs, key=lambda p: -p[1]):
            print(f"  {inp:<{width}}  {rho:6.3f}")
    return 0


def _cmd_breakeven(args) -> int:
    body = _load_report(args.report)
    rows = body.get("breakeven", [])
    if not rows:
        print("report carries no break-even table (grid lacks the PPFD axis)")
        return 0
    lead = ["location", "t_in_c", "co2_ppm", "c_el_baseline"]
    cols = ([c for c in lead if c in rows[0]]
            + sorted(c for c in rows[0] if c not in lead))
    print("  ".join(f"{c:>14}" for c in cols))
    for row in rows:
        cells = []
        for c in cols:
            v = row[c]
            cells.append(f"{v:>14.4g}" if isinstance(v, float) else f"{v!s:>14}")
        print("  ".join(cells))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "sensitivity": _cmd_sensitivity,
        "breakeven": _cmd_breakeven,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except VFarmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

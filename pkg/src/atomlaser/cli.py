"""Command-line front end.

Verbs:
    run <scenario.json> [--out DIR] [--format csv|json] [--plot]
    validate <scenario.json>
    list-experiments

Exit codes: 0 success, 2 configuration error, 3 numerical failure.  The
output directory defaults to $ATOMLASER_OUT (flag wins over the variable).
All frequencies in scenario files are angular frequencies in natural units
(hbar = 1); the time unit is arbitrary.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .emit import write_csv, write_json, write_meta
from .errors import ConfigError, NumericalFailureError
from .experiments import (
    EXPERIMENTS,
    load_scenario_file,
    resolved_config,
    run_scenario,
)

OUT_DIR_ENV = "ATOMLASER_OUT"


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="atomlaser",
        description=(
            "Two-mode output-coupler dynamics. Frequencies are angular, "
            "hbar = 1, and the time unit is arbitrary; only frequency ratios "
            "and products matter. Tabulated sweeps interpolate linearly and "
            "integrate their phase with the trapezoid rule, so accuracy is "
            "set by sample density."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario and emit its table")
    run_p.add_argument("scenario", help="path to a scenario JSON file")
    run_p.add_argument("--out", default=None,
                       help=f"output directory (default: ${OUT_DIR_ENV} or '.')")
    run_p.add_argument("--format", choices=("csv", "json"), default="csv")
    run_p.add_argument("--plot", action="store_true",
                       help="also render the experiment figure as PNG")

    val_p = sub.add_parser("validate", help="check a scenario file and exit")
    val_p.add_argument("scenario")

    sub.add_parser("list-experiments", help="list experiment names")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)

    if args.command == "list-experiments":
        for name, blurb in EXPERIMENTS.items():
            print(f"{name:20s} {blurb}")
        return 0

    try:
        scn = load_scenario_file(args.scenario)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.command == "validate":
        print(f"OK: {scn.name} ({scn.experiment})")
        return 0

    out_dir = Path(args.out or os.environ.get(OUT_DIR_ENV) or ".")
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create {out_dir}: {exc}", file=sys.stderr)
        return 2

    try:
        result = run_scenario(scn)
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3

    config = resolved_config(scn)
    try:
        if args.format == "csv":
            out = write_csv(result.table, out_dir / f"{scn.name}.csv")
            write_meta(config, result.summary, out_dir / f"{scn.name}.meta.json")
        else:
            out = write_json(result.table, config, result.summary,
                             out_dir / f"{scn.name}.json")
        if args.plot:
            from .plotting import render_figure
            render_figure(scn.experiment, result.table, result.summary,
                          out_dir / f"{scn.name}.png")
    except OSError as exc:
        print(f"error writing output: {exc}", file=sys.stderr)
        return 2

    for check in result.summary.get("checks", []):
        flag = "pass" if check["passed"] else "FAIL"
        print(f"[{flag}] {check['name']}: {check['value']:.6g}")
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

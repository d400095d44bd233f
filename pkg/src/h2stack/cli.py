"""Command-line entry point.

Commands: dispatch, lifecycle, sweep, emit-figures, validate-config.
Exit codes: 0 success, 2 configuration error, 3 infeasible dispatch,
4 unbounded dispatch, 5 numerical failure. ``H2STACK_CONFIG`` overrides the
default config path.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

from .config import build_model_inputs, default_config_path, load_config
from .degradation import apply_year, degradation_fraction, fresh_state
from .errors import (ConfigError, H2StackError, InfeasibleDispatch,
                     LengthMismatch, MalformedRow, MaxYearsExceeded,
                     NegativeRate, NumericalBreakdown, OutOfRange,
                     UnboundedDispatch)
from .lifecycle import simulate_lifecycle, write_lifecycle_csv, year_step
from .sweep import emit_figures, sweep_grid, sweep_threshold, write_sweep_csv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_UNBOUNDED = 4
EXIT_NUMERIC = 5


def _load(args) -> tuple:
    path = args.config or os.environ.get("H2STACK_CONFIG") \
        or str(default_config_path())
    config = load_config(path)
    return config, path


def _outdir(config, args) -> Path:
    out = Path(args.output) if args.output else config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_validate_config(args) -> int:
    config, path = _load(args)
    build_model_inputs(config)  # also checks series shape and domains
    print(f"ok: {path}")
    return EXIT_OK


def cmd_dispatch(args) -> int:
    config, _ = _load(args)
    inputs = build_model_inputs(config)
    outdir = _outdir(config, args)

    state = fresh_state(inputs.spec.load_points)
    if args.start_voltage_v > 0.0:
        state = apply_year(state, args.start_voltage_v,
                           config.scenario.shift_fraction, inputs.spec.load_points)
    result, _, solution = year_step(inputs, config.scenario, state)

    from .dispatch import summary_record, write_solution_csv

    hourly = outdir / "dispatch_hourly.csv"
    write_solution_csv(solution, hourly)
    summary = summary_record(solution)
    summary["wear_start_percent"] = degradation_fraction(state, inputs.spec.sec_nominal)
    summary["year_voltage_rise_v"] = result.voltage_rise_v
    summary_path = outdir / "dispatch_summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"wrote {hourly}\nwrote {summary_path}")
    return EXIT_OK


def cmd_lifecycle(args) -> int:
    config, _ = _load(args)
    inputs = build_model_inputs(config)
    outdir = _outdir(config, args)
    threshold = args.threshold if args.threshold is not None else config.threshold_percent
    result = simulate_lifecycle(inputs, config.scenario, threshold, config.max_years)

    csv_path = outdir / "lifecycle.csv"
    write_lifecycle_csv(result, csv_path)
    summary = {
        "eol_years": result.eol_years,
        "threshold_percent": result.threshold_percent,
        "lcoh_eur_per_kg": result.lcoh.lcoh_eur_per_kg,
        "lcoh_shares": result.lcoh.shares,
        "annual_demand_kg": result.lcoh.annual_demand_kg,
        "solver_iterations": result.total_iterations,
    }
    summary_path = outdir / "lifecycle_summary.json"
    summary_path.write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    print(f"wrote {csv_path}\nwrote {summary_path}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    config, _ = _load(args)
    inputs = build_model_inputs(config)
    outdir = _outdir(config, args)
    sweep_cfg = config.sweep
    if args.parallel is not None:
        sweep_cfg = dataclasses.replace(sweep_cfg, parallel=args.parallel)
    if args.threshold_only:
        curve = sweep_threshold(inputs, config.scenario,
                                sweep_cfg.thresholds_percent, sweep_cfg.max_years)
        from .sweep import SweepRecord, SweepTable, find_cost_optimum

        try:
            opt = find_cost_optimum(curve).threshold_percent
        except H2StackError:
            opt = None
        records = tuple(
            SweepRecord(scenario=config.scenario.name or "custom", alpha=config.alpha,
                        capex_eur_per_kw=config.economics.capex_eur_per_kw,
                        point=p,
                        is_optimum=(p.status == "ok" and p.threshold_percent == opt))
            for p in curve)
        table = SweepTable(records=records)
    else:
        table = sweep_grid(inputs, sweep_cfg)
    csv_path = outdir / "sweep.csv"
    write_sweep_csv(table, csv_path)
    print(f"wrote {csv_path}")
    return EXIT_OK


def cmd_emit_figures(args) -> int:
    config, _ = _load(args)
    inputs = build_model_inputs(config)
    outdir = _outdir(config, args) / "figures"
    written = emit_figures(inputs, config.sweep, outdir, base_alpha=config.alpha)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="h2stack",
        description="Cost-optimal electrolyzer stack replacement: dispatch, "
                    "degradation lifecycle, and techno-economic sweeps.")
    parser.add_argument("--config", "-c", help="path to the run configuration "
                        "(default: $H2STACK_CONFIG or the bundled config)")
    parser.add_argument("--output", "-o", help="output directory override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dispatch", help="solve one annual dispatch")
    p.add_argument("--start-voltage-v", type=float, default=0.0,
                   help="cumulative stack voltage rise at the start of the year")
    p.set_defaults(func=cmd_dispatch)

    p = sub.add_parser("lifecycle", help="simulate one stack life")
    p.add_argument("--threshold", type=float, default=None,
                   help="override the wear threshold in percent")
    p.set_defaults(func=cmd_lifecycle)

    p = sub.add_parser("sweep", help="run the parameter grid")
    p.add_argument("--parallel", type=int, default=None,
                   help="override the parallel degree")
    p.add_argument("--threshold-only", action="store_true",
                   help="sweep thresholds for the configured scenario only")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("emit-figures", help="write per-figure CSV bundles")
    p.set_defaults(func=cmd_emit_figures)

    p = sub.add_parser("validate-config", help="check the configuration and exit")
    p.set_defaults(func=cmd_validate_config)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, MalformedRow, OutOfRange, LengthMismatch,
            NegativeRate) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except InfeasibleDispatch as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except UnboundedDispatch as exc:
        label = f" [{exc.diagnosis}]" if exc.diagnosis else ""
        print(f"unbounded{label}: {exc}", file=sys.stderr)
        return EXIT_UNBOUNDED
    except MaxYearsExceeded as exc:
        print(f"threshold unreachable: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (NumericalBreakdown, H2StackError) as exc:
        print(f"failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

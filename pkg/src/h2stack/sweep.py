"""Parameter-grid experiments: threshold curves, CAPEX / shift-tilt /
degradation-scenario variations, and cost-optimum extraction.

Cells are independent; the grid runs task-parallel over curves with a
deterministic ordered reduce, so serial and parallel executions produce
identical tables. Failed cells are recorded with a status instead of
aborting the sweep.
"""

from __future__ import annotations

import csv
import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .degradation import SCENARIO_PRESETS, DegradationScenario, degradation_rate
from .errors import (EmptyCurve, H2StackError, InfeasibleDispatch,
                     MaxYearsExceeded, OutOfRange, UnboundedDispatch)
from .lifecycle import ModelInputs, simulate_lifecycle

DEFAULT_THRESHOLDS = tuple(float(r) for r in range(5, 60, 5))
DEFAULT_CAPEX_GRID = (502.43, 877.39, 1252.35, 1627.30, 2002.26)
DEFAULT_ALPHA_GRID = (0.075, 0.4125, 0.75)


@dataclass(frozen=True)
class SweepConfig:
    """Grids for the multi-parameter experiment."""

    thresholds_percent: tuple[float, ...] = DEFAULT_THRESHOLDS
    capex_grid: tuple[float, ...] = DEFAULT_CAPEX_GRID
    alpha_grid: tuple[float, ...] = DEFAULT_ALPHA_GRID
    scenarios: tuple[str, ...] = ("base_const",)
    parallel: int = 1
    max_years: int = 40

    def __post_init__(self):
        for name, grid in (("thresholds_percent", self.thresholds_percent),
                           ("capex_grid", self.capex_grid),
                           ("alpha_grid", self.alpha_grid),
                           ("scenarios", self.scenarios)):
            if not grid:
                raise OutOfRange(f"{name} must not be empty")
        diffs = np.diff(self.thresholds_percent)
        if diffs.size and np.any(diffs <= 0):
            raise OutOfRange("thresholds must be strictly increasing")
        if self.parallel < 1:
            raise OutOfRange("parallel degree must be >= 1")


@dataclass(frozen=True)
class CurvePoint:
    """One (threshold -> lifetime, LCOH) evaluation."""

    threshold_percent: float
    eol_years: int | None
    lcoh_eur_per_kg: float | None
    shares: dict = field(default_factory=dict)
    status: str = "ok"


@dataclass(frozen=True)
class SweepRecord:
    scenario: str
    alpha: float
    capex_eur_per_kw: float
    point: CurvePoint
    is_optimum: bool = False


@dataclass(frozen=True)
class SweepTable:
    records: tuple[SweepRecord, ...]

    def curve(self, scenario: str, alpha: float, capex: float) -> list[SweepRecord]:
        return [r for r in self.records
                if r.scenario == scenario and r.alpha == alpha
                and r.capex_eur_per_kw == capex]


def resolve_scenario(name_or_scenario: str | DegradationScenario,
                     alpha: float | None = None) -> DegradationScenario:
    """Look up a preset by name (or pass a scenario through), optionally
    overriding its shift fraction."""
    if isinstance(name_or_scenario, DegradationScenario):
        scenario = name_or_scenario
    else:
        try:
            scenario = SCENARIO_PRESETS[name_or_scenario]
        except KeyError:
            raise OutOfRange(
                f"unknown scenario preset {name_or_scenario!r}; "
                f"available: {sorted(SCENARIO_PRESETS)}") from None
    if alpha is not None:
        scenario = dataclasses.replace(scenario, shift_fraction=alpha)
    return scenario


def sweep_threshold(inputs: ModelInputs, scenario: DegradationScenario,
                    thresholds: tuple[float, ...] = DEFAULT_THRESHOLDS,
                    max_years: int = 40) -> list[CurvePoint]:
    """One lifecycle per threshold, in increasing threshold order."""
    points: list[CurvePoint] = []
    for threshold in thresholds:
        try:
            result = simulate_lifecycle(inputs, scenario, threshold, max_years)
        except MaxYearsExceeded:
            points.append(CurvePoint(threshold, None, None, {}, "unreachable"))
        except InfeasibleDispatch:
            points.append(CurvePoint(threshold, None, None, {}, "infeasible"))
        except UnboundedDispatch:
            points.append(CurvePoint(threshold, None, None, {}, "unbounded"))
        except H2StackError as exc:
            points.append(CurvePoint(threshold, None, None, {},
                                     f"error:{type(exc).__name__}"))
        else:
            points.append(CurvePoint(
                threshold, result.eol_years, result.lcoh.lcoh_eur_per_kg,
                dict(result.lcoh.shares), "ok"))
    return points


def find_cost_optimum(curve: list[CurvePoint]) -> CurvePoint:
    """Grid point with minimal LCOH; ties break toward the smaller threshold
    (earlier replacement). Failed points are skipped."""
    best: CurvePoint | None = None
    for point in curve:
        if point.status != "ok" or point.lcoh_eur_per_kg is None:
            continue
        if best is None or point.lcoh_eur_per_kg < best.lcoh_eur_per_kg:
            best = point
    if best is None:
        raise EmptyCurve("no finite LCOH values on the curve")
    return best


def _curve_cell(args) -> list[CurvePoint]:
    inputs, scenario_name, alpha, capex, thresholds, max_years = args
    scenario = resolve_scenario(scenario_name, alpha)
    economics = dataclasses.replace(inputs.economics, capex_eur_per_kw=capex)
    cell_inputs = dataclasses.replace(inputs, economics=economics)
    return sweep_threshold(cell_inputs, scenario, thresholds, max_years)


def sweep_grid(inputs: ModelInputs, config: SweepConfig) -> SweepTable:
    """Evaluate the full scenario x alpha x CAPEX x threshold product."""
    cells = [(inputs, scenario, alpha, capex,
              config.thresholds_percent, config.max_years)
             for scenario in config.scenarios
             for alpha in config.alpha_grid
             for capex in config.capex_grid]

    if config.parallel > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=config.parallel) as pool:
            curves = list(pool.map(_curve_cell, cells, chunksize=1))
    else:
        curves = [_curve_cell(cell) for cell in cells]

    records: list[SweepRecord] = []
    for (_, scenario, alpha, capex, _, _), curve in zip(cells, curves):
        try:
            optimum = find_cost_optimum(curve)
            opt_threshold = optimum.threshold_percent
        except EmptyCurve:
            opt_threshold = None
        for point in curve:
            records.append(SweepRecord(
                scenario=scenario, alpha=alpha, capex_eur_per_kw=capex,
                point=point,
                is_optimum=(point.status == "ok"
                            and point.threshold_percent == opt_threshold)))
    return SweepTable(records=tuple(records))


_SHARE_KEYS = ("ppa", "storage", "surplus", "peri", "stacks")


def write_sweep_csv(table: SweepTable, path: str | Path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([
            "scenario", "alpha", "capex_eur_per_kw", "R_percent", "eol_years",
            "lcoh_eur_per_kg", "share_ppa", "share_storage", "share_surplus",
            "share_peri", "share_stacks", "is_optimum", "status"])
        for rec in table.records:
            p = rec.point
            row = [rec.scenario, f"{rec.alpha:.6g}", f"{rec.capex_eur_per_kw:.6g}",
                   f"{p.threshold_percent:.6g}",
                   p.eol_years if p.eol_years is not None else "",
                   f"{p.lcoh_eur_per_kg:.6g}" if p.lcoh_eur_per_kg is not None else ""]
            row += [f"{p.shares.get(key, 0.0):.6g}" if p.status == "ok" else ""
                    for key in _SHARE_KEYS]
            row += [int(rec.is_optimum), p.status]
            writer.writerow(row)


# --- figure-data emitters ----------------------------------------------------

_SCALE_PRESETS = ("bottom_const", "low_const", "base_const", "high_const", "top_const")
_INFLECTION_PRESETS = ("infl_50", "infl_60", "infl_70", "infl_80", "infl_90")


def _write_rows(path: Path, header: list[str], rows: list[list]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _curve_rows(prefix: list, curve: list[CurvePoint]) -> list[list]:
    try:
        optimum = find_cost_optimum(curve).threshold_percent
    except EmptyCurve:
        optimum = None
    rows = []
    for p in curve:
        rows.append(prefix + [
            f"{p.threshold_percent:.6g}",
            p.eol_years if p.eol_years is not None else "",
            f"{p.lcoh_eur_per_kg:.6g}" if p.lcoh_eur_per_kg is not None else "",
            int(p.status == "ok" and p.threshold_percent == optimum),
            p.status])
    return rows


def emit_figures(inputs: ModelInputs, config: SweepConfig, outdir: str | Path,
                 base_alpha: float = 0.4125,
                 base_scenario: str = "base_const") -> list[Path]:
    """Write per-figure CSV bundles: the base threshold curve and its cost
    shares, CAPEX / shift-tilt / scenario variations, the degradation-rate
    curves themselves, and the multi-parameter optimum overview."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit(name: str, header: list[str], rows: list[list]) -> None:
        path = outdir / name
        _write_rows(path, header, rows)
        written.append(path)

    curve_header = ["R_percent", "eol_years", "lcoh_eur_per_kg", "is_optimum", "status"]
    base = sweep_threshold(inputs, resolve_scenario(base_scenario, base_alpha),
                           config.thresholds_percent, config.max_years)
    emit("fig_base_curve.csv", curve_header, _curve_rows([], base))
    emit("fig_base_shares.csv",
         ["R_percent"] + [f"share_{k}" for k in _SHARE_KEYS],
         [[f"{p.threshold_percent:.6g}"]
          + [f"{p.shares.get(k, 0.0):.6g}" if p.status == "ok" else ""
             for k in _SHARE_KEYS]
          for p in base])

    capex_rows = []
    for capex in config.capex_grid:
        cell = _curve_cell((inputs, base_scenario, base_alpha, capex,
                            config.thresholds_percent, config.max_years))
        capex_rows += _curve_rows([f"{capex:.6g}"], cell)
    emit("fig_capex_variation.csv", ["capex_eur_per_kw"] + curve_header, capex_rows)

    alpha_rows = []
    for alpha in config.alpha_grid:
        cell = _curve_cell((inputs, base_scenario, alpha,
                            inputs.economics.capex_eur_per_kw,
                            config.thresholds_percent, config.max_years))
        alpha_rows += _curve_rows([f"{alpha:.6g}"], cell)
    emit("fig_alpha_variation.csv", ["alpha"] + curve_header, alpha_rows)

    load_grid = np.linspace(0.0, 1.0, 101)
    for name, presets in (("fig_rate_scales.csv", _SCALE_PRESETS),
                          ("fig_rate_inflections.csv", _INFLECTION_PRESETS)):
        rows = [[preset, f"{load:.6g}",
                 f"{degradation_rate(SCENARIO_PRESETS[preset], load):.6g}"]
                for preset in presets for load in load_grid]
        emit(name, ["scenario", "load_fraction", "rate_uv_per_h"], rows)

    for name, presets in (("fig_scale_variation.csv", _SCALE_PRESETS),
                          ("fig_inflection_variation.csv", _INFLECTION_PRESETS)):
        rows = []
        for preset in presets:
            cell = _curve_cell((inputs, preset, base_alpha,
                                inputs.economics.capex_eur_per_kw,
                                config.thresholds_percent, config.max_years))
            rows += _curve_rows([preset], cell)
        emit(name, ["scenario"] + curve_header, rows)

    overview_rows = []
    scale_curves = ("bottom_const", "base_const", "top_const")
    for panel, alpha in zip("abc", config.alpha_grid):
        for scenario in scale_curves:
            for capex in config.capex_grid:
                cell = _curve_cell((inputs, scenario, alpha, capex,
                                    config.thresholds_percent, config.max_years))
                overview_rows.append(_overview_row(panel, "alpha", alpha,
                                                   scenario, capex, cell))
    for panel, scenario in zip("def", scale_curves):
        for alpha in config.alpha_grid:
            for capex in config.capex_grid:
                cell = _curve_cell((inputs, scenario, alpha, capex,
                                    config.thresholds_percent, config.max_years))
                overview_rows.append(_overview_row(panel, "scenario", scenario,
                                                   alpha, capex, cell))
    emit("fig_overview.csv",
         ["panel", "locked_kind", "locked_value", "curve", "capex_eur_per_kw",
          "R_opt_percent", "eol_opt_years", "lcoh_opt_eur_per_kg", "status"],
         overview_rows)
    return written


def _overview_row(panel: str, locked_kind: str, locked_value, curve_label,
                  capex: float, curve: list[CurvePoint]) -> list:
    try:
        opt = find_cost_optimum(curve)
        return [panel, locked_kind, f"{locked_value}", f"{curve_label}",
                f"{capex:.6g}", f"{opt.threshold_percent:.6g}", opt.eol_years,
                f"{opt.lcoh_eur_per_kg:.6g}", "ok"]
    except EmptyCurve:
        return [panel, locked_kind, f"{locked_value}", f"{curve_label}",
                f"{capex:.6g}", "", "", "", "empty"]

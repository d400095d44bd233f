"""Multi-year stack life simulation: dispatch, wear accumulation, EOL check.

Each year solves the annual dispatch against the current (degraded) SEC
curve, integrates the voltage decay over the realized load profile, folds it
into the wear state and re-checks the end-of-life threshold. A year that is
started is finished: the stack retires at the end of the first year after
which the wear fraction strictly exceeds the threshold (an exact hit within
1e-9 continues).

Dispatch horizons shorter than a year are annualized: costs, hydrogen mass
and the voltage integral all scale by hours_per_year / (horizon * dt). For
load-independent decay rates this reproduces full-year lifetimes exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .degradation import (DegradationScenario, DegradationState,
                          annual_voltage_increase, apply_year,
                          degradation_fraction, fresh_state)
from .dispatch import (CostBreakdown, DispatchSolution, GridTerms, PpaTerms,
                       StorageTerms, build_problem, hourly_load_fractions,
                       solve_dispatch)
from .economics import (EconomicTerms, LcohBreakdown, YearCosts, lcoh,
                        peripheral_cost_year, stack_cost_year)
from .electrolyzer import ElectrolyzerSpec, bol_sec_curve, build_envelope
from .errors import MaxYearsExceeded, OutOfRange
from .timeseries import DemandSeries


@dataclass(frozen=True)
class ModelInputs:
    """Everything one lifecycle run needs, immutable and shareable across
    parallel scenario evaluations."""

    ppa: tuple[PpaTerms, ...]
    storage: StorageTerms
    grid: GridTerms
    demand: DemandSeries
    spec: ElectrolyzerSpec
    economics: EconomicTerms
    horizon: int
    dt_hours: float = 1.0
    hours_per_year: float = 8760.0
    solver_backend: str | None = None
    solver_tol: float = 1e-7
    literal_lower_bound: bool = False
    literal_lcoh_norm: bool = False
    operating_hours_only: bool = False
    allow_surplus_arbitrage: bool = False

    @property
    def annualization(self) -> float:
        return self.hours_per_year / (self.horizon * self.dt_hours)

    def annual_demand_kg(self) -> float:
        return self.demand.total_mass(self.dt_hours) * self.annualization


@dataclass(frozen=True)
class YearResult:
    """One operating year: dispatch cost terms (annualized), the year's
    voltage rise and the wear fraction at the start of the year."""

    year: int
    costs: CostBreakdown
    voltage_rise_v: float
    wear_start_percent: float
    load_mean: float
    load_max: float
    full_load_hours: float


@dataclass(frozen=True)
class LifecycleResult:
    eol_years: int
    years: tuple[YearResult, ...] = field(repr=False)
    lcoh: LcohBreakdown = field(repr=False)
    threshold_percent: float = 0.0
    scenario: DegradationScenario | None = None
    annualization: float = 1.0
    total_iterations: int = 0


def year_step(inputs: ModelInputs, scenario: DegradationScenario,
              state: DegradationState) -> tuple[YearResult, DegradationState, DispatchSolution]:
    """Solve one year's dispatch with the degraded SEC curve and advance the
    wear state by the realized load profile."""
    sec_points = bol_sec_curve(inputs.spec) + state.sec_surcharge
    envelope = build_envelope(inputs.spec, sec_points)
    problem = build_problem(
        inputs.ppa, inputs.storage, inputs.grid, inputs.demand, envelope,
        inputs.horizon, inputs.dt_hours,
        literal_lower_bound=inputs.literal_lower_bound)
    solution = solve_dispatch(problem, tol=inputs.solver_tol,
                              backend=inputs.solver_backend,
                              allow_surplus_arbitrage=inputs.allow_surplus_arbitrage)
    loads = hourly_load_fractions(solution, inputs.spec.p_nom_kw)
    rise = annual_voltage_increase(
        scenario, loads, inputs.dt_hours,
        operating_hours_only=inputs.operating_hours_only) * inputs.annualization

    wear_start = degradation_fraction(state, inputs.spec.sec_nominal)
    new_state = apply_year(state, rise, scenario.shift_fraction,
                           inputs.spec.load_points)
    af = inputs.annualization
    costs = CostBreakdown(
        c_ppa=solution.costs.c_ppa * af,
        c_storage=solution.costs.c_storage * af,
        r_surplus=solution.costs.r_surplus * af,
        c_purchase=solution.costs.c_purchase * af)
    result = YearResult(
        year=state.year_index,
        costs=costs,
        voltage_rise_v=rise,
        wear_start_percent=wear_start,
        load_mean=float(loads.mean()) if loads.size else 0.0,
        load_max=float(loads.max()) if loads.size else 0.0,
        full_load_hours=float(np.sum(loads) * inputs.dt_hours * af))
    return result, new_state, solution


def simulate_lifecycle(inputs: ModelInputs, scenario: DegradationScenario,
                       threshold_percent: float, max_years: int = 40) -> LifecycleResult:
    """Run years until the wear fraction strictly exceeds the threshold.

    Returns the per-year records and the LCOH over the realized life, with
    the stack CAPEX share amortized over exactly that life.
    """
    if threshold_percent <= 0.0:
        raise OutOfRange(f"threshold must be positive, got {threshold_percent}")
    if max_years < 1:
        raise OutOfRange(f"max_years must be >= 1, got {max_years}")

    state = fresh_state(inputs.spec.load_points)
    years: list[YearResult] = []
    iterations = 0
    eol: int | None = None
    for _ in range(max_years):
        result, state, solution = year_step(inputs, scenario, state)
        years.append(result)
        iterations += solution.iterations
        wear_after = degradation_fraction(state, inputs.spec.sec_nominal)
        if wear_after > threshold_percent + 1e-9:
            eol = result.year
            break
    if eol is None:
        raise MaxYearsExceeded(
            f"wear reached {degradation_fraction(state, inputs.spec.sec_nominal):.4g}% "
            f"after {max_years} years, below the {threshold_percent}% threshold")

    annual_mass = inputs.annual_demand_kg()
    peri = peripheral_cost_year(inputs.economics, inputs.spec.p_nom_kw, annual_mass)
    stacks = stack_cost_year(inputs.economics, inputs.spec.p_nom_kw, eol)
    records = [
        YearCosts(c_ppa=y.costs.c_ppa + y.costs.c_purchase,
                  c_storage=y.costs.c_storage,
                  r_surplus=y.costs.r_surplus,
                  c_peri=peri, c_stacks=stacks)
        for y in years
    ]
    breakdown = lcoh(records, annual_mass, eol,
                     literal_annual_norm=inputs.literal_lcoh_norm)
    return LifecycleResult(
        eol_years=eol, years=tuple(years), lcoh=breakdown,
        threshold_percent=threshold_percent, scenario=scenario,
        annualization=inputs.annualization, total_iterations=iterations)


def write_lifecycle_csv(result: LifecycleResult, path: str | Path) -> None:
    """Year rows plus a summary row (6 significant digits)."""
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "R_start_percent", "dU_star_V",
                         "c_ppa", "c_storage", "r_surplus"])
        for y in result.years:
            writer.writerow([
                y.year, f"{y.wear_start_percent:.6g}", f"{y.voltage_rise_v:.6g}",
                f"{y.costs.c_ppa:.6g}", f"{y.costs.c_storage:.6g}",
                f"{y.costs.r_surplus:.6g}"])
        writer.writerow(["eol_years", result.eol_years,
                         "lcoh_av", f"{result.lcoh.lcoh_eur_per_kg:.6g}", "", ""])

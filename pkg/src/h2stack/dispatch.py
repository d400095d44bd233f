"""Annual cost-minimal dispatch of the hydrogen supply chain.

One LP per operating year: pay-as-produced PPA bookings feed an electrolyzer
whose output sits under a concave piecewise-linear envelope; hydrogen flows
through an optional cavern storage with cyclic closure to a fixed demand;
unconsumed power leaves as (possibly remunerated) surplus.

Pay-as-produced means the booking cost covers the full booked production
profile whether consumed or not; surplus is the unconsumed remainder.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .electrolyzer import PiecewiseEnvelope
from .errors import (InfeasibleDispatch, LengthMismatch, NumericalBreakdown,
                     UnboundedDispatch)
from .lp import LpBuilder, LpInstance, SolveStatus, solve_lp
from .timeseries import CapacityFactorSeries, DemandSeries


@dataclass(frozen=True)
class PpaTerms:
    """One bookable pay-as-produced source: price and availability profile."""

    source_id: str
    price_eur_per_kwh: float
    capacity_factors: CapacityFactorSeries

    def __post_init__(self):
        if self.price_eur_per_kwh < 0:
            raise ValueError("PPA price cannot be negative")


@dataclass(frozen=True)
class StorageTerms:
    """Cavern storage fees and flow caps (None = unbounded)."""

    capacity_fee_eur_per_kg_a: float = 12.75
    usage_fee_eur_per_kg: float = 0.36
    max_in_kg_per_h: float | None = None
    max_out_kg_per_h: float | None = None
    enabled: bool = True

    @property
    def is_disabled(self) -> bool:
        return (not self.enabled
                or (self.max_in_kg_per_h == 0.0 and self.max_out_kg_per_h == 0.0))


@dataclass(frozen=True)
class GridTerms:
    """Surplus sale terms and the optional (default off) purchase path."""

    sale_price_eur_per_kwh: float = 0.0
    purchase_price_eur_per_kwh: float = 0.1976
    purchase_enabled: bool = False


@dataclass(frozen=True)
class CostBreakdown:
    """Objective components in EUR; surplus revenue enters negatively."""

    c_ppa: float
    c_storage: float
    r_surplus: float
    c_purchase: float = 0.0

    @property
    def net_total(self) -> float:
        return self.c_ppa + self.c_storage + self.c_purchase - self.r_surplus


@dataclass
class _Layout:
    """Column indices of the dispatch LP."""

    bookings: dict[str, int]
    p_src: dict[str, np.ndarray]
    p_ely: np.ndarray
    p_grid: np.ndarray
    p_buy: np.ndarray | None
    m_ely: np.ndarray
    m_in: np.ndarray
    m_out: np.ndarray
    m_level: np.ndarray
    m_cap: int


@dataclass
class DispatchProblem:
    """A built dispatch LP plus the metadata needed to read a solution back."""

    instance: LpInstance
    layout: _Layout
    ppa: tuple[PpaTerms, ...]
    storage: StorageTerms
    grid: GridTerms
    demand: DemandSeries
    horizon: int
    dt_hours: float


@dataclass(frozen=True)
class DispatchSolution:
    """Solved dispatch: hourly flows, yearly bookings, cost components."""

    p_source: dict[str, np.ndarray]
    bookings: dict[str, float]
    p_ely: np.ndarray = field(repr=False)
    p_grid: np.ndarray = field(repr=False)
    p_buy: np.ndarray | None = field(repr=False)
    m_ely: np.ndarray = field(repr=False)
    m_in: np.ndarray = field(repr=False)
    m_out: np.ndarray = field(repr=False)
    m_level: np.ndarray = field(repr=False)
    m_cap: float
    costs: CostBreakdown
    objective: float
    iterations: int


def surplus_arbitrage_risk(ppa: tuple[PpaTerms, ...] | list[PpaTerms],
                           grid: GridTerms) -> bool:
    """True when selling surplus beats at least one unbounded booking price,
    which makes the LP unbounded (book infinitely, sell everything)."""
    if not ppa:
        return False
    return grid.sale_price_eur_per_kwh >= min(p.price_eur_per_kwh for p in ppa)


def build_problem(ppa: list[PpaTerms] | tuple[PpaTerms, ...],
                  storage: StorageTerms, grid: GridTerms, demand: DemandSeries,
                  envelope: PiecewiseEnvelope, horizon: int, dt_hours: float = 1.0,
                  literal_lower_bound: bool = False) -> DispatchProblem:
    """Assemble the annual dispatch LP.

    ``literal_lower_bound`` switches the search-space cut to its alternative
    reading (full nominal power forced through the output floor every hour)
    for comparison runs; the default couples the floor to the hour's power.
    """
    ppa = tuple(ppa)
    t_range = range(horizon)
    if len(demand) != horizon:
        raise LengthMismatch(f"demand has {len(demand)} entries, expected {horizon}")
    for terms in ppa:
        if len(terms.capacity_factors) != horizon:
            raise LengthMismatch(
                f"capacity factors for {terms.source_id!r} have "
                f"{len(terms.capacity_factors)} entries, expected {horizon}")

    b = LpBuilder()
    disabled = storage.is_disabled
    cap_in = 0.0 if disabled else (np.inf if storage.max_in_kg_per_h is None
                                   else storage.max_in_kg_per_h)
    cap_out = 0.0 if disabled else (np.inf if storage.max_out_kg_per_h is None
                                    else storage.max_out_kg_per_h)
    cap_level = 0.0 if disabled else np.inf

    bookings = {}
    p_src = {}
    for terms in ppa:
        produced_kwh = float(np.sum(terms.capacity_factors.values)) * dt_hours
        bookings[terms.source_id] = b.add_var(
            f"book[{terms.source_id}]",
            cost=terms.price_eur_per_kwh * produced_kwh)
    for terms in ppa:
        p_src[terms.source_id] = b.add_vars(f"P[{terms.source_id}]", horizon)

    p_ely = b.add_vars("P[ely]", horizon, hi=envelope.p_nom_kw)
    p_grid = b.add_vars("P[surplus]", horizon,
                        cost=-grid.sale_price_eur_per_kwh * dt_hours)
    p_buy = None
    if grid.purchase_enabled:
        p_buy = b.add_vars("P[buy]", horizon,
                           cost=grid.purchase_price_eur_per_kwh * dt_hours)
    m_ely = b.add_vars("mdot[ely]", horizon)
    m_in = b.add_vars("mdot[in]", horizon,
                      cost=0.0 if disabled else storage.usage_fee_eur_per_kg * dt_hours,
                      hi=cap_in)
    m_out = b.add_vars("mdot[out]", horizon, hi=cap_out)
    m_level = b.add_vars("m[level]", horizon, hi=cap_level)
    m_cap = b.add_var("m[cap]", cost=0.0 if disabled else storage.capacity_fee_eur_per_kg_a,
                      hi=0.0 if disabled else np.inf)

    # hydrogen balance: production minus net injection serves demand
    for t in t_range:
        b.add_eq({m_ely[t]: 1.0, m_in[t]: -1.0, m_out[t]: 1.0},
                 rhs=demand.values[t])
    # power balance: sourced power splits into electrolyzer and surplus
    for t in t_range:
        coeffs = {p_src[s.source_id][t]: 1.0 for s in ppa}
        coeffs[p_ely[t]] = -1.0
        coeffs[p_grid[t]] = -1.0
        if p_buy is not None:
            coeffs[p_buy[t]] = 1.0
        b.add_eq(coeffs, rhs=0.0)
    # storage level recursion and cyclic closure (first hour ties to last)
    for t in range(1, horizon):
        b.add_eq({m_level[t]: 1.0, m_level[t - 1]: -1.0,
                  m_in[t]: -dt_hours, m_out[t]: dt_hours}, rhs=0.0)
    b.add_eq({m_level[0]: 1.0, m_level[horizon - 1]: -1.0,
              m_in[0]: -dt_hours, m_out[0]: dt_hours}, rhs=0.0)

    # availability: consumption capped by booked production
    for terms in ppa:
        cols = p_src[terms.source_id]
        book = bookings[terms.source_id]
        factors = terms.capacity_factors.values
        for t in t_range:
            b.add_le({cols[t]: 1.0, book: -factors[t]}, rhs=0.0)
    # concave output envelope, one cut per segment and hour
    for slope, intercept in zip(envelope.slopes, envelope.intercepts):
        for t in t_range:
            b.add_le({m_ely[t]: 1.0, p_ely[t]: -slope}, rhs=intercept)
    # search-space cut: output at least the full-load rate for the hour's power
    sec_nom = envelope.sec_at_nominal
    for t in t_range:
        if literal_lower_bound:
            b.add_le({m_ely[t]: -sec_nom}, rhs=-envelope.p_nom_kw)
        else:
            b.add_le({p_ely[t]: 1.0, m_ely[t]: -sec_nom}, rhs=0.0)
    # booked storage capacity bounds every level
    for t in t_range:
        b.add_le({m_level[t]: 1.0, m_cap: -1.0}, rhs=0.0)

    layout = _Layout(bookings=bookings, p_src=p_src, p_ely=p_ely, p_grid=p_grid,
                     p_buy=p_buy, m_ely=m_ely, m_in=m_in, m_out=m_out,
                     m_level=m_level, m_cap=m_cap)
    return DispatchProblem(instance=b.build(), layout=layout, ppa=ppa,
                           storage=storage, grid=grid, demand=demand,
                           horizon=horizon, dt_hours=dt_hours)


def solve_dispatch(problem: DispatchProblem, tol: float = 1e-7,
                   backend: str | None = None,
                   allow_surplus_arbitrage: bool = False) -> DispatchSolution:
    """Solve a built dispatch problem and map the LP solution onto flows.

    The three cost components are recomputed from primal values and checked
    against the LP objective. Infeasible and unbounded outcomes raise typed
    errors carrying a structural diagnosis where one is known.
    """
    arbitrage = surplus_arbitrage_risk(problem.ppa, problem.grid)
    if arbitrage and not allow_surplus_arbitrage:
        raise UnboundedDispatch(
            "surplus sale price is not below every PPA price; booking more "
            "capacity only to resell it pays unboundedly (set the override "
            "flag to solve anyway)", diagnosis="surplus_arbitrage")

    solution = solve_lp(problem.instance, tol=tol, backend=backend)
    if solution.status is SolveStatus.INFEASIBLE:
        raise InfeasibleDispatch(
            "no feasible dispatch: demand cannot be served from the booked "
            "sources and storage in every hour")
    if solution.status is SolveStatus.UNBOUNDED:
        raise UnboundedDispatch(
            "dispatch LP is unbounded below",
            diagnosis="surplus_arbitrage" if arbitrage else "")
    if solution.status is not SolveStatus.OPTIMAL:
        raise NumericalBreakdown(
            f"dispatch solve ended with status {solution.status.value} "
            f"after {solution.iterations} iterations")

    x = solution.x
    lay = problem.layout
    dt = problem.dt_hours
    p_source = {sid: x[cols] for sid, cols in lay.p_src.items()}
    bookings = {sid: float(x[col]) for sid, col in lay.bookings.items()}

    c_ppa = sum(
        terms.price_eur_per_kwh * bookings[terms.source_id]
        * float(np.sum(terms.capacity_factors.values)) * dt
        for terms in problem.ppa)
    m_in_vals = x[lay.m_in]
    c_storage = 0.0
    if not problem.storage.is_disabled:
        c_storage = (problem.storage.capacity_fee_eur_per_kg_a * float(x[lay.m_cap])
                     + problem.storage.usage_fee_eur_per_kg * float(np.sum(m_in_vals)) * dt)
    r_surplus = problem.grid.sale_price_eur_per_kwh * float(np.sum(x[lay.p_grid])) * dt
    c_purchase = 0.0
    if lay.p_buy is not None:
        c_purchase = (problem.grid.purchase_price_eur_per_kwh
                      * float(np.sum(x[lay.p_buy])) * dt)
    costs = CostBreakdown(c_ppa=c_ppa, c_storage=c_storage,
                          r_surplus=r_surplus, c_purchase=c_purchase)
    if abs(costs.net_total - solution.objective) > 1e-6 * (1.0 + abs(solution.objective)):
        raise NumericalBreakdown(
            f"cost components ({costs.net_total:.8g}) disagree with the LP "
            f"objective ({solution.objective:.8g})")

    return DispatchSolution(
        p_source=p_source, bookings=bookings,
        p_ely=x[lay.p_ely], p_grid=x[lay.p_grid],
        p_buy=x[lay.p_buy] if lay.p_buy is not None else None,
        m_ely=x[lay.m_ely], m_in=m_in_vals, m_out=x[lay.m_out],
        m_level=x[lay.m_level], m_cap=float(x[lay.m_cap]),
        costs=costs, objective=float(solution.objective),
        iterations=solution.iterations)


def hourly_load_fractions(solution: DispatchSolution, p_nom_kw: float) -> np.ndarray:
    """Normalized electrolyzer load per hour, clipped of float noise."""
    loads = solution.p_ely / p_nom_kw
    if loads.size and float(loads.max(initial=0.0)) > 1.0 + 1e-6:
        raise NumericalBreakdown(
            f"electrolyzer power exceeds nominal by {loads.max() - 1.0:.3e}")
    return np.clip(loads, 0.0, 1.0)


def write_solution_csv(solution: DispatchSolution, path: str | Path) -> None:
    """Hourly flows in the documented column order, 6 significant digits."""
    source_ids = list(solution.p_source)
    header = (["hour"] + [f"P_{sid}" for sid in source_ids]
              + ["P_ely", "P_surplus"]
              + (["P_purchase"] if solution.p_buy is not None else [])
              + ["m_dot_ely", "m_dot_in", "m_dot_out", "m_level"])
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t in range(len(solution.p_ely)):
            row = [t] + [f"{solution.p_source[sid][t]:.6g}" for sid in source_ids]
            row += [f"{solution.p_ely[t]:.6g}", f"{solution.p_grid[t]:.6g}"]
            if solution.p_buy is not None:
                row.append(f"{solution.p_buy[t]:.6g}")
            row += [f"{solution.m_ely[t]:.6g}", f"{solution.m_in[t]:.6g}",
                    f"{solution.m_out[t]:.6g}", f"{solution.m_level[t]:.6g}"]
            writer.writerow(row)


def summary_record(solution: DispatchSolution) -> dict:
    """Bookings and cost breakdown as a plain dict for JSON export."""
    return {
        "bookings_kw": dict(solution.bookings),
        "storage_capacity_kg": solution.m_cap,
        "costs_eur": {
            "c_ppa": solution.costs.c_ppa,
            "c_storage": solution.costs.c_storage,
            "r_surplus": solution.costs.r_surplus,
            "c_purchase": solution.costs.c_purchase,
            "net_total": solution.costs.net_total,
        },
        "objective_eur": solution.objective,
        "solver_iterations": solution.iterations,
    }

"""Cost-optimal electrolyzer stack replacement for green hydrogen chains.

Builds the annual LP dispatch of a PPA-fed hydrogen supply chain, accumulates
stack degradation year by year to a configurable end-of-life threshold,
computes the averaged levelized cost of hydrogen and sweeps techno-economic
uncertainties to locate the cost-optimal replacement period.
"""

from .degradation import (KWH_PER_KG_PER_VOLT, SCENARIO_PRESETS,
                          DegradationScenario, DegradationState,
                          annual_voltage_increase, apply_year,
                          degradation_fraction, degradation_rate, fresh_state,
                          voltage_surcharge_at_load, voltage_to_energy)
from .dispatch import (CostBreakdown, DispatchSolution, GridTerms, PpaTerms,
                       StorageTerms, build_problem, hourly_load_fractions,
                       solve_dispatch)
from .economics import (EconomicTerms, LcohBreakdown, YearCosts, annuity_factor,
                        lcoh, peripheral_cost_year, stack_cost_year)
from .electrolyzer import (ElectrolyzerSpec, PiecewiseEnvelope, bol_energy_demand,
                           bol_sec_curve, build_envelope, lower_bound_constraint)
from .lifecycle import (LifecycleResult, ModelInputs, YearResult,
                        simulate_lifecycle, year_step)
from .lp import (LpBuilder, LpInstance, LpSolution, SolveStatus, check_optimality,
                 solve_lp)
from .sweep import (SweepConfig, SweepTable, emit_figures, find_cost_optimum,
                    sweep_grid, sweep_threshold)
from .timeseries import (CapacityFactorSeries, DemandSeries, constant_demand,
                         load_capacity_factors, load_demand_series,
                         write_capacity_factors)

__version__ = "0.1.0"

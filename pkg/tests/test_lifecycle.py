"""Multi-year loop: lifetime reproduction, the strict-exceedance rule, and
cost coupling between degradation and economics."""

import dataclasses

import numpy as np
import pytest

from conftest import make_inputs
from h2stack import (KWH_PER_KG_PER_VOLT, SCENARIO_PRESETS, DegradationScenario,
                     annual_voltage_increase, fresh_state, simulate_lifecycle,
                     stack_cost_year, year_step)
from h2stack.errors import MaxYearsExceeded, OutOfRange
from h2stack.lifecycle import write_lifecycle_csv
from oracles import lifetime_oracle


class TestPublishedLifetimes:
    def test_base_rate_at_twenty_percent_is_seven_years(self, tiny_inputs):
        result = simulate_lifecycle(tiny_inputs, SCENARIO_PRESETS["base_const"], 20.0)
        assert result.eol_years == 7

    def test_top_rate_at_twenty_five_percent_is_five_years(self, tiny_inputs):
        result = simulate_lifecycle(tiny_inputs, SCENARIO_PRESETS["top_const"], 25.0)
        assert result.eol_years == 5

    def test_bottom_rate_at_fifteen_percent_is_fourteen_years(self, tiny_inputs):
        result = simulate_lifecycle(tiny_inputs, SCENARIO_PRESETS["bottom_const"], 15.0)
        assert result.eol_years == 14


class TestOracleEquivalence:
    @pytest.mark.parametrize("rate", [2.5, 7.5, 12.5])
    @pytest.mark.parametrize("threshold", [5.0, 20.0, 40.0])
    def test_pipeline_matches_closed_form(self, tiny_inputs, rate, threshold):
        scenario = DegradationScenario(rate, rate, 1.0)
        result = simulate_lifecycle(tiny_inputs, scenario, threshold, max_years=60)
        assert result.eol_years == lifetime_oracle(rate, threshold)

    def test_lifetimes_are_horizon_independent(self):
        scenario = SCENARIO_PRESETS["high_const"]
        eols = set()
        for horizon in (24, 72, 168):
            inputs = make_inputs(horizon=horizon)
            eols.add(simulate_lifecycle(inputs, scenario, 30.0).eol_years)
        assert len(eols) == 1


class TestStrictExceedance:
    def test_exact_threshold_hit_does_not_terminate(self, tiny_inputs):
        scenario = SCENARIO_PRESETS["base_const"]
        yearly_rise = annual_voltage_increase(scenario, np.zeros(24)) * 365.0
        two_year_wear = KWH_PER_KG_PER_VOLT * (yearly_rise + yearly_rise) / 52.5 * 100.0
        result = simulate_lifecycle(tiny_inputs, scenario, two_year_wear)
        assert result.eol_years == 3

    def test_base_case_six_year_wear_stays_under_twenty(self, tiny_inputs):
        result = simulate_lifecycle(tiny_inputs, SCENARIO_PRESETS["base_const"], 20.0)
        assert result.years[-1].wear_start_percent == pytest.approx(19.9643, abs=1e-3)
        assert result.years[-1].wear_start_percent <= 20.0


class TestYearStep:
    def test_constant_scenario_same_rise_every_year(self, tiny_inputs):
        scenario = SCENARIO_PRESETS["base_const"]
        state = fresh_state(tiny_inputs.spec.load_points)
        rises = []
        for _ in range(3):
            result, state, _ = year_step(tiny_inputs, scenario, state)
            rises.append(result.voltage_rise_v)
        assert rises[0] == rises[1] == rises[2]

    def test_zero_rate_identical_costs_across_years(self, tiny_inputs):
        scenario = DegradationScenario(0.0, 0.0, 1.0)
        state = fresh_state(tiny_inputs.spec.load_points)
        first, state, _ = year_step(tiny_inputs, scenario, state)
        second, state, _ = year_step(tiny_inputs, scenario, state)
        assert first.costs == dataclasses.replace(second.costs)
        assert second.voltage_rise_v == 0.0

    def test_full_load_profile_uses_nominal_rate(self):
        # demand pinned to the full-load output makes the stack run at load 1
        inputs = make_inputs(horizon=24, demand_kg_per_h=1000.0 / 52.5)
        scenario = SCENARIO_PRESETS["infl_70"]
        result, _, _ = year_step(inputs, scenario,
                                 fresh_state(inputs.spec.load_points))
        assert result.load_mean == pytest.approx(1.0, abs=1e-9)
        assert result.voltage_rise_v == pytest.approx(8760 * 15e-6, rel=1e-9)

    def test_operating_hours_only_mode_skips_idle_hours(self):
        factors = np.tile([1.0, 1.0, 1.0, 0.0], 6)
        base = make_inputs(horizon=24, factors=factors, storage_enabled=True,
                           demand_kg_per_h=5.0)
        gated = dataclasses.replace(base, operating_hours_only=True)
        scenario = SCENARIO_PRESETS["base_const"]
        full, _, _ = year_step(base, scenario, fresh_state(base.spec.load_points))
        only_op, _, _ = year_step(gated, scenario, fresh_state(base.spec.load_points))
        assert only_op.voltage_rise_v < full.voltage_rise_v


class TestLoopInvariants:
    def test_wear_starts_at_zero_and_grows_monotonically(self, tiny_inputs):
        result = simulate_lifecycle(tiny_inputs, SCENARIO_PRESETS["base_const"], 20.0)
        starts = [y.wear_start_percent for y in result.years]
        assert starts[0] == 0.0
        assert all(b > a for a, b in zip(starts, starts[1:]))

    def test_yearly_dispatch_cost_non_decreasing(self, tiny_inputs):
        result = simulate_lifecycle(tiny_inputs, SCENARIO_PRESETS["top_const"], 30.0)
        nets = [y.costs.c_ppa + y.costs.c_storage - y.costs.r_surplus
                for y in result.years]
        assert all(b >= a - 1e-9 * (1 + abs(a)) for a, b in zip(nets, nets[1:]))

    def test_stack_amortization_uses_realized_life(self, tiny_inputs):
        result = simulate_lifecycle(tiny_inputs, SCENARIO_PRESETS["base_const"], 20.0)
        expected = stack_cost_year(tiny_inputs.economics, tiny_inputs.spec.p_nom_kw,
                                   result.eol_years)
        assert result.lcoh.years[0].c_stacks == pytest.approx(expected, rel=1e-12)

    def test_annual_demand_mass_is_annualized(self, tiny_inputs):
        result = simulate_lifecycle(tiny_inputs, SCENARIO_PRESETS["base_const"], 20.0)
        assert result.lcoh.annual_demand_kg == pytest.approx(10.0 * 8760.0)


class TestFailureModes:
    def test_zero_rate_exceeds_year_budget(self, tiny_inputs):
        with pytest.raises(MaxYearsExceeded):
            simulate_lifecycle(tiny_inputs, DegradationScenario(0.0, 0.0, 1.0), 20.0)

    def test_single_year_budget_with_low_rate(self, tiny_inputs):
        with pytest.raises(MaxYearsExceeded):
            simulate_lifecycle(tiny_inputs, SCENARIO_PRESETS["bottom_const"], 20.0,
                               max_years=1)

    def test_threshold_domain(self, tiny_inputs):
        with pytest.raises(OutOfRange):
            simulate_lifecycle(tiny_inputs, SCENARIO_PRESETS["base_const"], 0.0)


class TestLiteralLcohFlag:
    def test_literal_mode_scales_with_lifetime(self, tiny_inputs):
        literal_inputs = dataclasses.replace(tiny_inputs, literal_lcoh_norm=True)
        scenario = SCENARIO_PRESETS["base_const"]
        averaged = simulate_lifecycle(tiny_inputs, scenario, 20.0)
        literal = simulate_lifecycle(literal_inputs, scenario, 20.0)
        ratio = literal.lcoh.lcoh_eur_per_kg / averaged.lcoh.lcoh_eur_per_kg
        assert ratio == pytest.approx(averaged.eol_years, rel=1e-9)


class TestSolverBackends:
    def test_highs_adapter_reproduces_lifetime_and_lcoh(self, tiny_inputs):
        scenario = SCENARIO_PRESETS["base_const"]
        embedded = simulate_lifecycle(tiny_inputs, scenario, 10.0)
        external = simulate_lifecycle(
            dataclasses.replace(tiny_inputs, solver_backend="highs"),
            scenario, 10.0)
        assert external.eol_years == embedded.eol_years
        assert external.lcoh.lcoh_eur_per_kg == pytest.approx(
            embedded.lcoh.lcoh_eur_per_kg, rel=1e-6)


class TestExport:
    def test_csv_rows_match_years(self, tmp_path, tiny_inputs):
        result = simulate_lifecycle(tiny_inputs, SCENARIO_PRESETS["base_const"], 20.0)
        path = tmp_path / "lifecycle.csv"
        write_lifecycle_csv(result, path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "year,R_start_percent,dU_star_V,c_ppa,c_storage,r_surplus"
        assert len(lines) == 1 + result.eol_years + 1  # header + years + summary
        assert lines[-1].startswith("eol_years,7")

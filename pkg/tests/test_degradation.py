"""Voltage decay accumulation, the shift/tilt split and the wear fraction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from h2stack import (KWH_PER_KG_PER_VOLT, SCENARIO_PRESETS, DegradationScenario,
                     annual_voltage_increase, apply_year, degradation_fraction,
                     degradation_rate, fresh_state, voltage_surcharge_at_load,
                     voltage_to_energy)
from h2stack.errors import OutOfRange

CONV = 2.0 * 96485.0 / 2.016e-3 / 3.6e6  # independent recomputation


def inflected(rho0=7.5, rho1=15.0, infl=0.7):
    return DegradationScenario(rho0, rho1, infl)


class TestDegradationRate:
    def test_linear_interpolation_above_inflection(self):
        assert degradation_rate(inflected(), 0.85) == pytest.approx(11.25)

    def test_constant_scenario_ignores_load(self):
        scen = SCENARIO_PRESETS["base_const"]
        for load in (0.0, 0.33, 0.7, 1.0):
            assert degradation_rate(scen, load) == 7.5

    def test_floor_rate_at_inflection_point(self):
        assert degradation_rate(inflected(), 0.7) == 7.5

    def test_nominal_rate_at_full_load(self):
        assert degradation_rate(inflected(), 1.0) == pytest.approx(15.0)

    def test_continuity_at_inflection(self):
        scen = inflected()
        delta = degradation_rate(scen, 0.7 + 1e-9) - degradation_rate(scen, 0.7)
        assert abs(delta) < 1e-7

    def test_load_domain(self):
        with pytest.raises(OutOfRange):
            degradation_rate(inflected(), 1.5)


class TestAnnualVoltageIncrease:
    def test_constant_rate_full_year(self):
        profile = np.full(8760, 0.5)
        rise = annual_voltage_increase(SCENARIO_PRESETS["base_const"], profile)
        assert rise == pytest.approx(8760 * 7.5e-6)  # 0.06570 V

    def test_idle_hours_still_accrue_floor_rate(self):
        rise = annual_voltage_increase(inflected(), np.zeros(8760))
        assert rise == pytest.approx(8760 * 7.5e-6)

    def test_empty_profile(self):
        assert annual_voltage_increase(inflected(), np.zeros(0)) == 0.0

    def test_operating_hours_only_mode(self):
        profile = np.array([0.0, 0.5, 0.0, 0.5])
        scen = SCENARIO_PRESETS["base_const"]
        full = annual_voltage_increase(scen, profile)
        operating = annual_voltage_increase(scen, profile, operating_hours_only=True)
        assert operating == pytest.approx(full / 2.0)

    def test_constant_scenario_profile_independence(self):
        scen = SCENARIO_PRESETS["base_const"]
        rng = np.random.default_rng(3)
        a = annual_voltage_increase(scen, rng.uniform(0, 1, 500))
        b = annual_voltage_increase(scen, rng.uniform(0, 1, 500))
        assert a == b

    def test_full_load_profile_uses_nominal_rate(self):
        rise = annual_voltage_increase(inflected(), np.ones(8760))
        assert rise == pytest.approx(8760 * 15e-6)


class TestVoltageSurcharge:
    def test_mixed_split_at_half_load(self):
        value = voltage_surcharge_at_load(0.0657, 0.4125, 0.5)
        assert value == pytest.approx((0.4125 + 0.5 * 0.5875) * 0.0657, rel=1e-12)
        assert value == pytest.approx(0.046401, abs=5e-7)

    @pytest.mark.parametrize("alpha", [0.0, 0.075, 0.4125, 0.75, 1.0])
    def test_full_load_recovers_total_exactly(self, alpha):
        assert voltage_surcharge_at_load(0.0657, alpha, 1.0) == 0.0657

    def test_pure_shift_is_load_independent(self):
        assert voltage_surcharge_at_load(0.0657, 1.0, 0.0) == pytest.approx(0.0657)


class TestVoltageToEnergy:
    def test_one_volt(self):
        value = voltage_to_energy(1.0)
        assert value == pytest.approx(26.5887, rel=5e-4)
        assert value == pytest.approx(CONV, rel=1e-15)

    def test_zero(self):
        assert voltage_to_energy(0.0) == 0.0

    def test_base_year_rise(self):
        assert voltage_to_energy(0.0657) == pytest.approx(0.0657 * CONV, rel=1e-15)
        assert voltage_to_energy(0.0657) == pytest.approx(1.74688, abs=5e-6)

    def test_negative_rejected(self):
        with pytest.raises(OutOfRange):
            voltage_to_energy(-0.1)

    def test_module_constant_matches(self):
        assert KWH_PER_KG_PER_VOLT == pytest.approx(CONV, rel=0.0)


class TestApplyYear:
    GRID = np.array([0.0, 0.5, 1.0])

    def test_single_year_surcharges(self):
        state = apply_year(fresh_state(self.GRID), 0.0657, 0.4125, self.GRID)
        expected = [0.4125 * 0.0657 * CONV,
                    (0.4125 + 0.5 * 0.5875) * 0.0657 * CONV,
                    0.0657 * CONV]
        np.testing.assert_allclose(state.sec_surcharge, expected, rtol=1e-12)
        # cross-check against 5-decimal reference prints (rounding headroom)
        np.testing.assert_allclose(state.sec_surcharge,
                                   [0.72059, 1.23374, 1.74688], atol=2e-5)
        assert state.year_index == 2

    def test_zero_rise_changes_nothing_but_the_year(self):
        state = apply_year(fresh_state(self.GRID), 0.0, 0.4125, self.GRID)
        assert np.all(state.sec_surcharge == 0.0)
        assert state.cumulative_rise_v == 0.0

    def test_two_years_double_linearly(self):
        one = apply_year(fresh_state(self.GRID), 0.0657, 0.4125, self.GRID)
        two = apply_year(one, 0.0657, 0.4125, self.GRID)
        assert two.sec_surcharge[-1] == pytest.approx(2 * 0.0657 * CONV, rel=1e-12)
        assert two.sec_surcharge[-1] == pytest.approx(3.49377, abs=3e-5)


class TestDegradationFraction:
    GRID = np.array([0.0, 1.0])

    def test_one_base_year(self):
        state = apply_year(fresh_state(self.GRID), 0.0657, 0.4125, self.GRID)
        assert degradation_fraction(state, 52.5) == pytest.approx(3.3274, abs=5e-5)

    def test_fresh_stack_is_zero(self):
        assert degradation_fraction(fresh_state(self.GRID), 52.5) == 0.0

    def test_exact_twenty_percent(self):
        state = fresh_state(self.GRID)
        forced = apply_year(state, 10.5 / CONV, 0.5, self.GRID)
        assert degradation_fraction(forced, 52.5) == pytest.approx(20.0, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.0, 0.4125, 1.0])
    def test_alpha_invariance_at_nominal_point(self, alpha):
        state = apply_year(fresh_state(self.GRID), 0.0657, alpha, self.GRID)
        baseline = apply_year(fresh_state(self.GRID), 0.0657, 0.4125, self.GRID)
        assert degradation_fraction(state, 52.5) == degradation_fraction(baseline, 52.5)


class TestInvariantProperties:
    @settings(max_examples=50)
    @given(st.floats(0.0, 20.0), st.integers(1, 15))
    def test_wear_fraction_monotone_in_years(self, rate, years):
        grid = np.array([0.0, 0.5, 1.0])
        scen = DegradationScenario(rate, rate, 1.0)
        state = fresh_state(grid)
        previous = 0.0
        for _ in range(years):
            rise = annual_voltage_increase(scen, np.full(24, 0.7)) * 365.0
            state = apply_year(state, rise, 0.4125, grid)
            current = degradation_fraction(state, 52.5)
            assert current >= previous
            previous = current

    @settings(max_examples=50)
    @given(st.floats(0.05, 0.95), st.floats(0.0, 1.0))
    def test_rate_never_below_floor_nor_above_nominal(self, infl, load):
        scen = DegradationScenario(5.0, 12.0, infl)
        value = degradation_rate(scen, load)
        assert 5.0 <= value <= 12.0 + 1e-12


class TestScenarioPresets:
    def test_constant_scales(self):
        for name, rate in (("bottom_const", 2.5), ("low_const", 5.0),
                           ("base_const", 7.5), ("high_const", 10.0),
                           ("top_const", 12.5)):
            scen = SCENARIO_PRESETS[name]
            assert scen.rate_floor_uv_per_h == rate
            assert scen.inflection_load == 1.0

    def test_inflection_presets_double_at_nominal(self):
        for name, infl in (("infl_50", 0.5), ("infl_60", 0.6), ("infl_70", 0.7),
                           ("infl_80", 0.8), ("infl_90", 0.9)):
            scen = SCENARIO_PRESETS[name]
            assert scen.inflection_load == infl
            assert scen.rate_nominal_uv_per_h == 15.0
            assert scen.rate_floor_uv_per_h == 7.5

    def test_invalid_scenarios_rejected(self):
        with pytest.raises(OutOfRange):
            DegradationScenario(5.0, 3.0)  # nominal below floor
        with pytest.raises(OutOfRange):
            DegradationScenario(5.0, 5.0, inflection_load=0.0)

"""Embedded LP solver: status classification, optimality certificates,
oracle equivalence on random instances, determinism, and the dump format."""

import dataclasses

import numpy as np
import pytest

from h2stack.errors import OutOfRange
from h2stack.lp import (LpBuilder, SolveStatus, check_optimality, read_instance,
                        solve_lp, write_instance)
from oracles import random_box_lp, vertex_enumeration_minimum


def textbook_lp():
    """max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 (as a minimization);
    hand solution x=2, y=6, objective -36, duals (0, -1.5, -1)."""
    b = LpBuilder()
    x = b.add_var("x", cost=-3.0)
    y = b.add_var("y", cost=-5.0)
    b.add_le({x: 1.0}, 4.0)
    b.add_le({y: 2.0}, 12.0)
    b.add_le({x: 3.0, y: 2.0}, 18.0)
    return b.build()


class TestStatusClassification:
    def test_minimum_at_lower_bound(self):
        b = LpBuilder()
        b.add_var("x", cost=1.0, lo=3.0)
        sol = solve_lp(b.build())
        assert sol.status is SolveStatus.OPTIMAL
        assert sol.x[0] == pytest.approx(3.0)
        assert sol.objective == pytest.approx(3.0)

    def test_unbounded_ray(self):
        b = LpBuilder()
        b.add_var("x", cost=-1.0, lo=0.0)
        assert solve_lp(b.build()).status is SolveStatus.UNBOUNDED

    def test_contradictory_rows_infeasible(self):
        b = LpBuilder()
        x = b.add_var("x", cost=0.0, lo=-np.inf)
        b.add_le({x: 1.0}, 1.0)
        b.add_le({x: -1.0}, -2.0)  # x >= 2
        assert solve_lp(b.build()).status is SolveStatus.INFEASIBLE

    def test_iteration_limit_reported(self):
        sol = solve_lp(textbook_lp(), max_iters=1)
        assert sol.status is SolveStatus.ITERATION_LIMIT

    def test_free_variables(self):
        b = LpBuilder()
        x = b.add_var("x", cost=1.0, lo=-np.inf, hi=np.inf)
        y = b.add_var("y", cost=1.0, lo=-np.inf, hi=np.inf)
        b.add_le({x: -1.0, y: -1.0}, -1.0)  # x + y >= 1
        sol = solve_lp(b.build())
        assert sol.status is SolveStatus.OPTIMAL
        assert sol.objective == pytest.approx(1.0, abs=1e-9)


class TestTextbookOptimum:
    def test_hand_solution(self):
        sol = solve_lp(textbook_lp())
        assert sol.status is SolveStatus.OPTIMAL
        np.testing.assert_allclose(sol.x, [2.0, 6.0], atol=1e-9)
        assert sol.objective == pytest.approx(-36.0, abs=1e-9)

    def test_residuals_below_1e9(self):
        inst = textbook_lp()
        report = check_optimality(inst, solve_lp(inst))
        assert report.primal_residual <= 1e-9
        assert report.dual_residual <= 1e-9
        assert report.duality_gap <= 1e-9

    def test_hand_duals(self):
        sol = solve_lp(textbook_lp())
        np.testing.assert_allclose(sol.duals, [0.0, -1.5, -1.0], atol=1e-9)

    def test_perturbation_shows_in_report(self):
        inst = textbook_lp()
        sol = solve_lp(inst)
        bumped = dataclasses.replace(sol, x=sol.x + np.array([0.01, 0.0]))
        report = check_optimality(inst, bumped)
        # x=2.01 pushes row 3 (3x + 2y <= 18) out by 0.03
        assert report.primal_residual == pytest.approx(0.03, rel=1e-6)

    def test_degenerate_duplicate_row_still_certified(self):
        b = LpBuilder()
        x = b.add_var("x", cost=-3.0)
        y = b.add_var("y", cost=-5.0)
        b.add_le({x: 1.0}, 4.0)
        b.add_le({y: 2.0}, 12.0)
        b.add_le({x: 3.0, y: 2.0}, 18.0)
        b.add_le({x: 3.0, y: 2.0}, 18.0)  # redundant duplicate
        inst = b.build()
        sol = solve_lp(inst)
        assert sol.objective == pytest.approx(-36.0, abs=1e-9)
        assert check_optimality(inst, sol).duality_gap <= 1e-7

    def test_rejects_non_optimal_input(self):
        b = LpBuilder()
        b.add_var("x", cost=-1.0)
        with pytest.raises(OutOfRange):
            check_optimality(b.build(), solve_lp(b.build()))


class TestOracleEquivalence:
    def test_random_battery_matches_vertex_enumeration(self):
        rng = np.random.default_rng(2024)
        solved = 0
        for _ in range(40):
            inst = random_box_lp(rng)
            sol = solve_lp(inst)
            assert sol.status is SolveStatus.OPTIMAL, sol.message
            expected = vertex_enumeration_minimum(inst)
            assert expected is not None
            assert abs(sol.objective - expected) <= 1e-7 * (1.0 + abs(expected))
            assert check_optimality(inst, sol).duality_gap <= 1e-7
            solved += 1
        assert solved == 40


class TestDeterminismAndScaling:
    def test_identical_instances_identical_solutions(self):
        rng = np.random.default_rng(99)
        inst = random_box_lp(rng)
        first = solve_lp(inst)
        second = solve_lp(inst)
        np.testing.assert_array_equal(first.x, second.x)
        assert first.iterations == second.iterations
        assert first.objective == second.objective

    def test_positive_objective_scaling_preserves_argmin(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            inst = random_box_lp(rng)
            scaled = dataclasses.replace(inst, c=inst.c * 3.7)
            sol = solve_lp(inst)
            sol_scaled = solve_lp(scaled)
            assert sol.status == sol_scaled.status
            np.testing.assert_allclose(sol.x, sol_scaled.x, atol=1e-7)
            assert sol_scaled.objective == pytest.approx(3.7 * sol.objective, rel=1e-9)


class TestHighsBackend:
    def test_objective_parity_with_embedded_solver(self):
        rng = np.random.default_rng(31)
        for _ in range(10):
            inst = random_box_lp(rng)
            ours = solve_lp(inst, backend="simplex")
            highs = solve_lp(inst, backend="highs")
            assert highs.status is SolveStatus.OPTIMAL
            assert highs.objective == pytest.approx(ours.objective, abs=1e-6)

    def test_status_parity_on_infeasible(self):
        b = LpBuilder()
        x = b.add_var("x", cost=0.0)
        b.add_le({x: 1.0}, 1.0)
        b.add_le({x: -1.0}, -2.0)
        assert solve_lp(b.build(), backend="highs").status is SolveStatus.INFEASIBLE

    def test_unknown_backend_rejected(self):
        with pytest.raises(ValueError):
            solve_lp(textbook_lp(), backend="gurobi")


class TestPresolve:
    def test_fixed_variables_eliminated_and_restored(self):
        b = LpBuilder()
        x = b.add_var("x", cost=1.0, lo=2.0, hi=2.0)  # fixed
        y = b.add_var("y", cost=1.0, lo=0.0)
        b.add_eq({x: 1.0, y: 1.0}, 5.0)
        sol = solve_lp(b.build())
        assert sol.status is SolveStatus.OPTIMAL
        np.testing.assert_allclose(sol.x, [2.0, 3.0], atol=1e-9)
        assert sol.objective == pytest.approx(5.0)

    def test_all_fixed_feasible(self):
        b = LpBuilder()
        x = b.add_var("x", cost=2.0, lo=1.0, hi=1.0)
        b.add_eq({x: 1.0}, 1.0)
        sol = solve_lp(b.build())
        assert sol.status is SolveStatus.OPTIMAL
        assert sol.objective == pytest.approx(2.0)

    def test_all_fixed_infeasible(self):
        b = LpBuilder()
        x = b.add_var("x", cost=0.0, lo=1.0, hi=1.0)
        b.add_eq({x: 1.0}, 3.0)
        assert solve_lp(b.build()).status is SolveStatus.INFEASIBLE


class TestDumpFormat:
    def test_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(11)
        inst = random_box_lp(rng)
        path = tmp_path / "instance.lp.txt"
        write_instance(inst, path)
        loaded = read_instance(path)
        np.testing.assert_array_equal(loaded.c, inst.c)
        np.testing.assert_array_equal(loaded.lo, inst.lo)
        np.testing.assert_array_equal(loaded.hi, inst.hi)
        np.testing.assert_array_equal(loaded.b_eq, inst.b_eq)
        np.testing.assert_array_equal(loaded.b_le, inst.b_le)
        np.testing.assert_array_equal(loaded.a_eq.toarray(), inst.a_eq.toarray())
        np.testing.assert_array_equal(loaded.a_le.toarray(), inst.a_le.toarray())
        assert loaded.names == inst.names

    def test_solves_identically_after_round_trip(self, tmp_path):
        inst = textbook_lp()
        path = tmp_path / "textbook.lp.txt"
        write_instance(inst, path)
        again = solve_lp(read_instance(path))
        assert again.objective == pytest.approx(-36.0, abs=1e-9)

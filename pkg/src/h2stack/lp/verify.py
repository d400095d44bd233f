"""Residual diagnostics for claimed-optimal LP solutions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import OutOfRange
from .instance import LpInstance, LpSolution


@dataclass(frozen=True)
class OptimalityReport:
    """Worst-case primal/dual residuals and the relative duality gap."""

    primal_residual: float
    dual_residual: float
    duality_gap: float

    def within(self, tol: float) -> bool:
        return max(self.primal_residual, self.dual_residual, self.duality_gap) <= tol


def check_optimality(instance: LpInstance, solution: LpSolution) -> OptimalityReport:
    """Evaluate primal feasibility, dual feasibility and the duality gap.

    The dual objective is ``y@b`` plus each variable's best bound response to
    its reduced cost; at an exact optimum it equals the primal objective.
    """
    if not solution.is_optimal:
        raise OutOfRange("check_optimality expects an optimal solution")
    x = solution.x
    y = solution.duals
    y_eq = y[: instance.n_eq]
    y_le = y[instance.n_eq:]

    primal = 0.0
    if instance.n_eq:
        primal = float(np.abs(instance.a_eq @ x - instance.b_eq).max())
    if instance.n_le:
        primal = max(primal, float(np.maximum(instance.a_le @ x - instance.b_le, 0.0).max()))
    primal = max(primal, float(np.max(np.maximum(instance.lo - x, 0.0), initial=0.0)))
    primal = max(primal, float(np.max(np.maximum(x - instance.hi, 0.0), initial=0.0)))

    # reduced costs under the Lagrangian c@x - y@(A@x - b)
    d = instance.c.copy()
    if instance.n_eq:
        d -= instance.a_eq.T @ y_eq
    if instance.n_le:
        d -= instance.a_le.T @ y_le

    dual = float(np.max(np.maximum(y_le, 0.0), initial=0.0))  # <= rows need y <= 0
    lo_fin = np.isfinite(instance.lo)
    hi_fin = np.isfinite(instance.hi)
    # d must be >= 0 where only the lower bound can take it, <= 0 where only
    # the upper bound can, and 0 for free variables
    only_lo = lo_fin & ~hi_fin
    only_hi = hi_fin & ~lo_fin
    free = ~lo_fin & ~hi_fin
    if only_lo.any():
        dual = max(dual, float(np.maximum(-d[only_lo], 0.0).max()))
    if only_hi.any():
        dual = max(dual, float(np.maximum(d[only_hi], 0.0).max()))
    if free.any():
        dual = max(dual, float(np.abs(d[free]).max()))

    dual_obj = float(y_eq @ instance.b_eq) + float(y_le @ instance.b_le)
    # each variable contributes its best bound response; a wrong-signed
    # reduced cost on an unbounded side would send the dual to -inf, which is
    # already recorded in dual_residual, so those terms are left out here
    bound_term = np.zeros(instance.n_vars)
    take_lo = (d >= 0.0) & lo_fin
    take_hi = (d < 0.0) & hi_fin
    bound_term[take_lo] = d[take_lo] * instance.lo[take_lo]
    bound_term[take_hi] = d[take_hi] * instance.hi[take_hi]
    dual_obj += float(bound_term.sum())
    gap = abs(solution.objective - dual_obj) / (1.0 + abs(solution.objective))

    return OptimalityReport(primal_residual=primal, dual_residual=dual, duality_gap=gap)

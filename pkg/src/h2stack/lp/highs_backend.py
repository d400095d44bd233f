"""External-solver adapter backed by scipy's HiGHS bindings.

Implements the same contract as the embedded simplex so full-year instances
can be handed to a production solver; selected via ``backend="highs"`` or the
``H2STACK_LP_BACKEND`` environment variable.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog

from .instance import LpInstance, LpSolution, SolveStatus

_STATUS_MAP = {
    0: SolveStatus.OPTIMAL,
    1: SolveStatus.ITERATION_LIMIT,
    2: SolveStatus.INFEASIBLE,
    3: SolveStatus.UNBOUNDED,
}


def solve_lp_highs(instance: LpInstance, tol: float = 1e-7,
                   max_iters: int | None = None) -> LpSolution:
    bounds = np.column_stack([instance.lo, instance.hi])
    options = {"presolve": True}
    if max_iters is not None:
        options["maxiter"] = max_iters
    res = linprog(
        instance.c,
        A_ub=instance.a_le if instance.n_le else None,
        b_ub=instance.b_le if instance.n_le else None,
        A_eq=instance.a_eq if instance.n_eq else None,
        b_eq=instance.b_eq if instance.n_eq else None,
        bounds=bounds,
        method="highs",
        options=options,
    )
    status = _STATUS_MAP.get(res.status, SolveStatus.ITERATION_LIMIT)
    if status is not SolveStatus.OPTIMAL:
        return LpSolution(status, None, None, None,
                          int(getattr(res, "nit", 0) or 0), res.message or "")
    duals = np.concatenate([
        res.eqlin.marginals if instance.n_eq else np.zeros(0),
        res.ineqlin.marginals if instance.n_le else np.zeros(0),
    ])
    return LpSolution(SolveStatus.OPTIMAL, np.asarray(res.x, dtype=float),
                      float(res.fun), duals, int(getattr(res, "nit", 0) or 0))

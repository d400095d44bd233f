"""Bounded-variable revised simplex with an explicit basis inverse.

Two phases over a crash basis (slacks where feasible, artificials elsewhere),
Dantzig pricing with a Bland's-rule fallback engaged after degenerate stalls,
and incremental reduced costs refreshed periodically. Every claimed optimum
is certified against a freshly refactorized basis before it is returned, so
a drifting inverse can delay but never corrupt the result.

The O(m^2) pivot work runs through the kernels module (compiled extension or
NumPy fallback, selected at import).
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from ..errors import NumericalBreakdown
from . import kernels
from .instance import LpInstance, LpSolution, SolveStatus

_PIVOT_TOL = 1e-10
_REFRESH_EVERY = 100        # pivots between reduced-cost recomputations
_STALL_LIMIT = 200          # degenerate pivots before Bland's rule engages


class _Workspace:
    """Mutable solver state for one (possibly presolved) instance.

    Column layout: ``n`` structural variables, ``m_le`` slacks, then one
    artificial per row. Row layout: equality rows first, then <= rows.
    """

    def __init__(self, instance: LpInstance, tol: float):
        self.n = instance.n_vars
        self.m_eq = instance.n_eq
        self.m_le = instance.n_le
        self.m = self.m_eq + self.m_le
        self.n_total = self.n + self.m_le + self.m

        a = sp.vstack([instance.a_eq, instance.a_le], format="csc") if self.m else \
            sp.csc_matrix((0, self.n))
        a.eliminate_zeros()
        self.a_csc = a
        self.at_csr = a.T.tocsr()
        self.b = np.concatenate([instance.b_eq, instance.b_le])

        self.c_struct = instance.c.copy()
        self.lo = np.concatenate([instance.lo, np.zeros(self.m_le), np.zeros(self.m)])
        self.hi = np.concatenate([instance.hi, np.full(self.m_le, np.inf),
                                  np.full(self.m, np.inf)])

        self.feas_tol = tol * (1.0 + (np.abs(self.b).max() if self.m else 0.0))
        self.opt_tol = tol * (1.0 + (np.abs(self.c_struct).max() if self.n else 0.0))

        self.status = np.empty(self.n_total, dtype=np.int8)
        self.basis = np.empty(self.m, dtype=np.int64)
        self.sigma = np.ones(self.m)
        self.xb = np.zeros(self.m)
        self.binv = np.zeros((self.m, self.m))
        self.d = np.zeros(self.n_total)
        self.c_work = np.zeros(self.n_total)
        self.iterations = 0

    # -- column helpers -------------------------------------------------------

    def slack_col(self, le_row: int) -> int:
        return self.n + le_row

    def art_col(self, row: int) -> int:
        return self.n + self.m_le + row

    def is_artificial(self, j: int) -> bool:
        return j >= self.n + self.m_le

    def nonbasic_value(self, j: int) -> float:
        st = self.status[j]
        if st == kernels.AT_LO or st == kernels.FIXED:
            return self.lo[j]
        if st == kernels.AT_HI:
            return self.hi[j]
        return 0.0

    def ftran(self, j: int) -> np.ndarray:
        """w = B^-1 a_j, exploiting unit slack/artificial columns."""
        if j < self.n:
            start, end = self.a_csc.indptr[j], self.a_csc.indptr[j + 1]
            idx = self.a_csc.indices[start:end]
            vals = self.a_csc.data[start:end]
            return self.binv[:, idx] @ vals
        if j < self.n + self.m_le:
            return self.binv[:, self.m_eq + (j - self.n)].copy()
        row = j - self.n - self.m_le
        return self.sigma[row] * self.binv[:, row]

    def tableau_row(self, beta: np.ndarray) -> np.ndarray:
        """Reduced-cost update row: beta @ A over every column."""
        rho = np.empty(self.n_total)
        rho[: self.n] = self.at_csr @ beta
        rho[self.n: self.n + self.m_le] = beta[self.m_eq:]
        rho[self.n + self.m_le:] = self.sigma * beta
        return rho

    # -- consistency ----------------------------------------------------------

    def nonbasic_structural_x(self) -> np.ndarray:
        x = np.zeros(self.n)
        for j in range(self.n):
            if self.status[j] != kernels.BASIC:
                x[j] = self.nonbasic_value(j)
        return x

    def recompute_xb(self) -> None:
        r = self.b - self.a_csc @ self.nonbasic_structural_x()
        self.xb = self.binv @ r

    def refactorize(self) -> None:
        bmat = np.zeros((self.m, self.m))
        for pos, j in enumerate(self.basis):
            if j < self.n:
                start, end = self.a_csc.indptr[j], self.a_csc.indptr[j + 1]
                bmat[self.a_csc.indices[start:end], pos] = self.a_csc.data[start:end]
            elif j < self.n + self.m_le:
                bmat[self.m_eq + (j - self.n), pos] = 1.0
            else:
                row = j - self.n - self.m_le
                bmat[row, pos] = self.sigma[row]
        try:
            self.binv = np.linalg.inv(bmat)
        except np.linalg.LinAlgError as exc:
            raise NumericalBreakdown(f"singular basis during refactorization: {exc}") from None
        self.recompute_xb()

    def recompute_d(self) -> None:
        y = self.c_work[self.basis] @ self.binv if self.m else np.zeros(0)
        self.d[: self.n] = self.c_work[: self.n] - self.at_csr @ y
        self.d[self.n: self.n + self.m_le] = (
            self.c_work[self.n: self.n + self.m_le] - y[self.m_eq:]
        )
        self.d[self.n + self.m_le:] = self.c_work[self.n + self.m_le:] - self.sigma * y

    def duals(self) -> np.ndarray:
        return self.c_work[self.basis] @ self.binv if self.m else np.zeros(0)

    def x_structural(self) -> np.ndarray:
        x = self.nonbasic_structural_x()
        for pos, j in enumerate(self.basis):
            if j < self.n:
                x[j] = self.xb[pos]
        return x


def _crash(ws: _Workspace) -> None:
    """Slack basis on feasible <= rows, signed artificials elsewhere."""
    for j in range(ws.n):
        if np.isfinite(ws.lo[j]):
            ws.status[j] = kernels.AT_LO
        elif np.isfinite(ws.hi[j]):
            ws.status[j] = kernels.AT_HI
        else:
            ws.status[j] = kernels.FREE
    ws.status[ws.n:] = kernels.AT_LO

    r0 = ws.b - ws.a_csc @ ws.nonbasic_structural_x() if ws.m else np.zeros(0)
    diag = np.ones(ws.m)
    for row in range(ws.m):
        if row >= ws.m_eq and r0[row] >= 0.0:
            col = ws.slack_col(row - ws.m_eq)
            ws.xb[row] = r0[row]
            # artificial not needed on this row
            art = ws.art_col(row)
            ws.status[art] = kernels.FIXED
            ws.hi[art] = 0.0
        else:
            ws.sigma[row] = 1.0 if r0[row] >= 0.0 else -1.0
            diag[row] = ws.sigma[row]
            col = ws.art_col(row)
            ws.xb[row] = abs(r0[row])
        ws.basis[row] = col
        ws.status[col] = kernels.BASIC
    ws.binv = np.diag(diag) if ws.m else np.zeros((0, 0))


def _iterate(ws: _Workspace, max_iters: int, always_bland: bool) -> str:
    """Run pivots until optimality/unboundedness/limit. Returns the outcome."""
    ws.recompute_d()
    bland = always_bland
    stall = 0
    since_refresh = 0   # pivots since the reduced costs were last recomputed
    since_refactor = 0  # pivots since the inverse was last rebuilt
    basis_lo = ws.lo[ws.basis] if ws.m else np.zeros(0)
    basis_hi = ws.hi[ws.basis] if ws.m else np.zeros(0)

    while True:
        q, direction = kernels.choose_entering(ws.d, ws.status, ws.opt_tol, bland)
        if q < 0:
            if since_refactor > 0:
                ws.refactorize()
                ws.recompute_d()
                since_refresh = since_refactor = 0
                continue
            return "optimal"
        if ws.iterations >= max_iters:
            return "iteration_limit"

        w = ws.ftran(q)
        span = ws.hi[q] - ws.lo[q]
        theta, p, flip = kernels.ratio_test(
            w, ws.xb, basis_lo, basis_hi, direction, span, ws.basis, bland, _PIVOT_TOL
        )
        if np.isinf(theta):
            if since_refactor > 0:
                ws.refactorize()
                ws.recompute_d()
                since_refresh = since_refactor = 0
                continue
            return "unbounded"

        ws.iterations += 1
        since_refresh += 1
        since_refactor += 1
        if theta > 1e-12:
            stall = 0
            bland = always_bland
        else:
            stall += 1
            if stall >= _STALL_LIMIT:
                bland = True

        if flip:
            if theta > 0.0:
                ws.xb -= (direction * theta) * w
            ws.status[q] = kernels.AT_HI if ws.status[q] == kernels.AT_LO else kernels.AT_LO
            continue

        d_q = ws.d[q]
        x_q_new = ws.nonbasic_value(q) + direction * theta
        if theta > 0.0:
            ws.xb -= (direction * theta) * w
        leaving = int(ws.basis[p])
        if ws.is_artificial(leaving):
            ws.status[leaving] = kernels.FIXED
            ws.hi[leaving] = 0.0
        else:
            ws.status[leaving] = kernels.AT_LO if direction * w[p] > 0 else kernels.AT_HI
        ws.basis[p] = q
        ws.status[q] = kernels.BASIC
        kernels.pivot_update(ws.binv, w, p)
        ws.xb[p] = x_q_new
        basis_lo[p] = ws.lo[q]
        basis_hi[p] = ws.hi[q]

        if since_refresh >= _REFRESH_EVERY:
            ws.recompute_d()
            since_refresh = 0
        else:
            beta = ws.binv[p]
            ws.d -= d_q * ws.tableau_row(beta)
            ws.d[q] = 0.0


def _expel_artificials(ws: _Workspace) -> None:
    """Pivot zero-valued basic artificials out where a structural/slack column
    can replace them; rows that admit none are redundant and the artificial is
    pinned at zero."""
    for p in range(ws.m):
        j = int(ws.basis[p])
        if not ws.is_artificial(j):
            continue
        beta = ws.binv[p]
        rho = ws.tableau_row(beta)
        rho[ws.n + ws.m_le:] = 0.0  # never invite another artificial
        candidates = np.flatnonzero(
            (np.abs(rho) > 1e-8) & (ws.status[: ws.n_total] != kernels.BASIC)
            & (ws.status[: ws.n_total] != kernels.FIXED)
        )
        if candidates.size == 0:
            ws.lo[j] = 0.0
            ws.hi[j] = 0.0
            continue
        enter = int(candidates[np.argmax(np.abs(rho[candidates]))])
        w = ws.ftran(enter)
        value = ws.nonbasic_value(enter)
        ws.status[j] = kernels.FIXED
        ws.hi[j] = 0.0
        ws.basis[p] = enter
        ws.status[enter] = kernels.BASIC
        kernels.pivot_update(ws.binv, w, p)
        ws.xb[p] = value


def _solve_prepared(instance: LpInstance, tol: float, max_iters: int,
                    always_bland: bool) -> LpSolution:
    ws = _Workspace(instance, tol)
    _crash(ws)

    # phase 1: minimize total artificial infeasibility
    ws.c_work[:] = 0.0
    active_art = [ws.art_col(r) for r in range(ws.m)
                  if ws.status[ws.art_col(r)] != kernels.FIXED]
    if active_art:
        ws.c_work[active_art] = 1.0
        outcome = _iterate(ws, max_iters, always_bland)
        if outcome == "iteration_limit":
            return LpSolution(SolveStatus.ITERATION_LIMIT, None, None, None,
                              ws.iterations, "iteration limit in phase 1")
        if outcome == "unbounded":
            raise NumericalBreakdown("phase-1 objective reported unbounded")
        infeas = float(ws.c_work[ws.basis] @ ws.xb) if ws.m else 0.0
        if infeas > ws.feas_tol:
            return LpSolution(SolveStatus.INFEASIBLE, None, None, None,
                              ws.iterations, f"phase-1 infeasibility {infeas:.3e}")
        _expel_artificials(ws)
        ws.c_work[:] = 0.0

    # phase 2: true costs; artificials stay pinned at zero
    ws.c_work[: ws.n] = ws.c_struct
    outcome = _iterate(ws, max_iters, always_bland)
    if outcome == "iteration_limit":
        return LpSolution(SolveStatus.ITERATION_LIMIT, None, None, None,
                          ws.iterations, "iteration limit in phase 2")
    if outcome == "unbounded":
        return LpSolution(SolveStatus.UNBOUNDED, None, None, None,
                          ws.iterations, "unbounded ray certified")

    x = ws.x_structural()
    lo_violation = float(np.max(np.maximum(instance.lo - x, 0.0), initial=0.0))
    hi_violation = float(np.max(np.maximum(x - instance.hi, 0.0), initial=0.0))
    residual = _max_constraint_residual(instance, x)
    if max(residual, lo_violation, hi_violation) > ws.feas_tol:
        raise NumericalBreakdown(
            f"optimal basis fails verification (residual {residual:.3e})"
        )
    duals = ws.duals()
    objective = float(instance.c @ x)
    return LpSolution(SolveStatus.OPTIMAL, x, objective, duals, ws.iterations)


def _max_constraint_residual(instance: LpInstance, x: np.ndarray) -> float:
    res = 0.0
    if instance.n_eq:
        res = float(np.abs(instance.a_eq @ x - instance.b_eq).max())
    if instance.n_le:
        res = max(res, float(np.maximum(instance.a_le @ x - instance.b_le, 0.0).max()))
    return res


def _presolve_fixed(instance: LpInstance, tol: float):
    """Eliminate variables with lo == hi; drop rows that become empty.

    Returns (reduced_instance, expand) where expand maps a reduced solution
    back onto the original variable/row spaces, or an LpSolution when the
    reduction already decides the problem.
    """
    fixed = instance.hi - instance.lo <= 0.0
    if not fixed.any():
        return instance, None
    keep = ~fixed
    x_fixed = np.where(fixed, instance.lo, 0.0)
    b_eq = instance.b_eq - instance.a_eq @ x_fixed if instance.n_eq else instance.b_eq
    b_le = instance.b_le - instance.a_le @ x_fixed if instance.n_le else instance.b_le
    a_eq = instance.a_eq[:, keep].tocsr()
    a_le = instance.a_le[:, keep].tocsr()
    a_eq.eliminate_zeros()
    a_le.eliminate_zeros()

    feas_tol = tol * (1.0 + max(
        np.abs(instance.b_eq).max() if instance.n_eq else 0.0,
        np.abs(instance.b_le).max() if instance.n_le else 0.0,
    ))
    eq_nonempty = np.diff(a_eq.indptr) > 0
    le_nonempty = np.diff(a_le.indptr) > 0
    bad_eq = (~eq_nonempty) & (np.abs(b_eq) > feas_tol)
    bad_le = (~le_nonempty) & (b_le < -feas_tol)
    if bad_eq.any() or bad_le.any():
        reduced = None
        expand = None
        infeasible = LpSolution(SolveStatus.INFEASIBLE, None, None, None, 0,
                                "constant row violated after fixing variables")
        return reduced, (infeasible, None)

    names = tuple(np.array(instance.names)[keep]) if instance.names else ()
    reduced = LpInstance(
        c=instance.c[keep],
        a_eq=a_eq[eq_nonempty].tocsr(),
        b_eq=b_eq[eq_nonempty],
        a_le=a_le[le_nonempty].tocsr(),
        b_le=b_le[le_nonempty],
        lo=instance.lo[keep],
        hi=instance.hi[keep],
        names=names,
    )

    def expand(solution: LpSolution) -> LpSolution:
        if not solution.is_optimal:
            return solution
        x = np.array(x_fixed)
        x[keep] = solution.x
        duals = np.zeros(instance.n_eq + instance.n_le)
        kept_rows = np.concatenate([np.flatnonzero(eq_nonempty),
                                    instance.n_eq + np.flatnonzero(le_nonempty)])
        duals[kept_rows] = solution.duals
        objective = float(instance.c @ x)
        return LpSolution(SolveStatus.OPTIMAL, x, objective, duals,
                          solution.iterations, solution.message)

    return reduced, (None, expand)


def solve_lp_simplex(instance: LpInstance, tol: float = 1e-7,
                     max_iters: int | None = None) -> LpSolution:
    """Solve with the embedded simplex; see :func:`solve_lp` for the contract."""
    if max_iters is None:
        max_iters = 50 * (instance.n_vars + instance.n_eq + instance.n_le)
    reduced, mapping = _presolve_fixed(instance, tol)
    if mapping is not None:
        decided, expand = mapping
        if decided is not None:
            return decided
    else:
        expand = None
        reduced = instance

    last_error: NumericalBreakdown | None = None
    for always_bland in (False, True):
        try:
            solution = _solve_prepared(reduced, tol, max_iters, always_bland)
            return expand(solution) if expand else solution
        except NumericalBreakdown as exc:
            last_error = exc
    raise last_error  # both pivot strategies broke down

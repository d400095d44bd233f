"""Canonical sparse LP container and solution record.

The form is fixed across the package:

    minimize      c @ x
    subject to    A_eq @ x == b_eq
                  A_le @ x <= b_le
                  lo <= x <= hi     (entries may be -inf / +inf)

Duals are reported in the sign convention of the Lagrangian
``c@x - y@(A@x - b)``: free for equality rows, non-positive for <= rows.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from ..errors import OutOfRange


class SolveStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


@dataclass(frozen=True)
class LpInstance:
    """Sparse minimization LP in equality/inequality/bounds form."""

    c: np.ndarray
    a_eq: sp.csr_matrix
    b_eq: np.ndarray
    a_le: sp.csr_matrix
    b_le: np.ndarray
    lo: np.ndarray
    hi: np.ndarray
    names: tuple[str, ...] = ()

    def __post_init__(self):
        n = self.c.shape[0]
        if self.a_eq.shape[1] not in (n, 0) or self.a_le.shape[1] not in (n, 0):
            raise OutOfRange("constraint matrices must have one column per variable")
        for label, rhs in (("b_eq", self.b_eq), ("b_le", self.b_le)):
            if rhs.size and not np.all(np.isfinite(rhs)):
                raise OutOfRange(f"{label} must be finite")
        if self.lo.shape[0] != n or self.hi.shape[0] != n:
            raise OutOfRange("bounds must have one entry per variable")
        if np.any(self.lo > self.hi):
            j = int(np.argmax(self.lo > self.hi))
            raise OutOfRange(f"variable {j}: lower bound {self.lo[j]} above upper {self.hi[j]}")
        if self.names and len(self.names) != n:
            raise OutOfRange("names must match the variable count")

    @property
    def n_vars(self) -> int:
        return int(self.c.shape[0])

    @property
    def n_eq(self) -> int:
        return int(self.a_eq.shape[0])

    @property
    def n_le(self) -> int:
        return int(self.a_le.shape[0])

    def name_of(self, j: int) -> str:
        return self.names[j] if self.names else f"x{j}"


@dataclass(frozen=True)
class LpSolution:
    """Solved state of an :class:`LpInstance`.

    ``duals`` concatenates equality-row duals followed by <=-row duals and is
    only present for optimal solutions.
    """

    status: SolveStatus
    x: np.ndarray | None
    objective: float | None
    duals: np.ndarray | None
    iterations: int
    message: str = ""

    @property
    def is_optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL


class LpBuilder:
    """Incremental triplet assembly for sparse LPs.

    Variables are registered first (returning their column index); constraint
    rows are then appended as ``{column: coefficient}`` mappings.
    """

    def __init__(self):
        self._costs: list[float] = []
        self._lo: list[float] = []
        self._hi: list[float] = []
        self._names: list[str] = []
        self._eq_rows: list[dict[int, float]] = []
        self._eq_rhs: list[float] = []
        self._le_rows: list[dict[int, float]] = []
        self._le_rhs: list[float] = []

    def add_var(self, name: str, cost: float = 0.0,
                lo: float = 0.0, hi: float = np.inf) -> int:
        self._names.append(name)
        self._costs.append(float(cost))
        self._lo.append(float(lo))
        self._hi.append(float(hi))
        return len(self._names) - 1

    def add_vars(self, prefix: str, count: int, cost: float = 0.0,
                 lo: float = 0.0, hi: float = np.inf) -> np.ndarray:
        start = len(self._names)
        for k in range(count):
            self.add_var(f"{prefix}[{k}]", cost, lo, hi)
        return np.arange(start, start + count)

    def add_eq(self, coeffs: dict[int, float], rhs: float) -> None:
        self._eq_rows.append(coeffs)
        self._eq_rhs.append(float(rhs))

    def add_le(self, coeffs: dict[int, float], rhs: float) -> None:
        self._le_rows.append(coeffs)
        self._le_rhs.append(float(rhs))

    def set_cost(self, j: int, cost: float) -> None:
        self._costs[j] = float(cost)

    def set_bounds(self, j: int, lo: float, hi: float) -> None:
        self._lo[j] = float(lo)
        self._hi[j] = float(hi)

    @property
    def n_vars(self) -> int:
        return len(self._names)

    def _rows_to_csr(self, rows: list[dict[int, float]]) -> sp.csr_matrix:
        n = len(self._names)
        data, indices, indptr = [], [], [0]
        for row in rows:
            for col in sorted(row):
                indices.append(col)
                data.append(row[col])
            indptr.append(len(indices))
        return sp.csr_matrix(
            (np.array(data, dtype=float), np.array(indices, dtype=np.int64),
             np.array(indptr, dtype=np.int64)),
            shape=(len(rows), n),
        )

    def build(self) -> LpInstance:
        return LpInstance(
            c=np.array(self._costs, dtype=float),
            a_eq=self._rows_to_csr(self._eq_rows),
            b_eq=np.array(self._eq_rhs, dtype=float),
            a_le=self._rows_to_csr(self._le_rows),
            b_le=np.array(self._le_rhs, dtype=float),
            lo=np.array(self._lo, dtype=float),
            hi=np.array(self._hi, dtype=float),
            names=tuple(self._names),
        )

"""Self-contained LP layer: instance container, embedded simplex, HiGHS
adapter, text dump format and optimality diagnostics."""

from __future__ import annotations

import os
from typing import Callable

from .instance import LpBuilder, LpInstance, LpSolution, SolveStatus
from .io import read_instance, write_instance
from .simplex import solve_lp_simplex
from .verify import OptimalityReport, check_optimality

__all__ = [
    "LpBuilder", "LpInstance", "LpSolution", "SolveStatus",
    "read_instance", "write_instance", "check_optimality", "OptimalityReport",
    "solve_lp", "get_backend", "BACKENDS",
]


def _highs(instance: LpInstance, tol: float = 1e-7,
           max_iters: int | None = None) -> LpSolution:
    from .highs_backend import solve_lp_highs

    return solve_lp_highs(instance, tol, max_iters)


BACKENDS: dict[str, Callable[..., LpSolution]] = {
    "simplex": solve_lp_simplex,
    "highs": _highs,
}


def get_backend(name: str | None = None) -> Callable[..., LpSolution]:
    """Resolve a solver backend by name, env var or the embedded default."""
    if name is None:
        name = os.environ.get("H2STACK_LP_BACKEND", "simplex")
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown LP backend {name!r}; "
                         f"available: {sorted(BACKENDS)}") from None


def solve_lp(instance: LpInstance, tol: float = 1e-7,
             max_iters: int | None = None, backend: str | None = None) -> LpSolution:
    """Solve an LP instance.

    Optimal solutions satisfy all constraints within ``tol * (1 + max|rhs|)``;
    infeasible, unbounded and iteration-limited instances are classified in
    the returned status rather than guessed at.
    """
    return get_backend(backend)(instance, tol=tol, max_iters=max_iters)

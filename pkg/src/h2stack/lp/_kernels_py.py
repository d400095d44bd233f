"""NumPy fallback for the simplex inner-loop kernels.

Mirrors the compiled extension in `_kernels_cy.pyx` operation for operation;
both must make bit-identical pivot choices so either backend yields the same
basis path. The fallback pays an extra O(m^2) temporary per pivot update.
"""

from __future__ import annotations

import numpy as np

AT_LO = 0
AT_HI = 1
BASIC = 2
FREE = 3
FIXED = 4

IMPL = "python"


def choose_entering(d: np.ndarray, status: np.ndarray, tol: float,
                    bland: bool) -> tuple[int, float]:
    """Pick the entering column, or (-1, 0.0) if the basis is optimal.

    Dantzig rule: most negative rate of objective change; Bland: smallest
    eligible index. Ties resolve to the lowest column index in both rules.
    """
    score = np.full(d.shape[0], np.inf)
    at_lo = status == AT_LO
    at_hi = status == AT_HI
    free = status == FREE
    score[at_lo] = d[at_lo]
    score[at_hi] = -d[at_hi]
    score[free] = -np.abs(d[free])
    eligible = score < -tol
    if not eligible.any():
        return -1, 0.0
    if bland:
        q = int(np.flatnonzero(eligible)[0])
    else:
        score[~eligible] = np.inf
        q = int(np.argmin(score))
    if status[q] == AT_LO:
        return q, 1.0
    if status[q] == AT_HI:
        return q, -1.0
    return q, (1.0 if d[q] < 0.0 else -1.0)


def ratio_test(w: np.ndarray, xb: np.ndarray, lob: np.ndarray, hib: np.ndarray,
               direction: float, span: float, basis_vars: np.ndarray,
               bland: bool, pivot_tol: float) -> tuple[float, int, bool]:
    """Largest step for the entering column.

    Returns ``(theta, leaving_position, flip)``; ``flip`` means the entering
    variable jumps to its opposite bound without a basis change, and
    ``(inf, -1, False)`` signals an unbounded ray. Among blocking rows within
    the tie window the largest |w| wins (smallest basic variable index under
    Bland's rule).
    """
    d = direction * w
    lim = np.full(w.shape[0], np.inf)
    dec = d > pivot_tol
    inc = d < -pivot_tol
    with np.errstate(invalid="ignore"):
        lim[dec] = (xb[dec] - lob[dec]) / d[dec]
        lim[inc] = (xb[inc] - hib[inc]) / d[inc]
    np.maximum(lim, 0.0, out=lim)
    theta_rows = float(lim.min()) if lim.size else np.inf
    if span <= theta_rows:
        if np.isinf(span):
            return np.inf, -1, False
        return float(span), -1, True
    tie = lim <= theta_rows + 1e-9 + 1e-12 * theta_rows
    cand = np.flatnonzero(tie)
    if bland:
        p = int(cand[np.argmin(basis_vars[cand])])
    else:
        p = int(cand[np.argmax(np.abs(w[cand]))])
    return theta_rows, p, False


def pivot_update(binv: np.ndarray, w: np.ndarray, p: int) -> None:
    """Apply the elementary pivot transform to the basis inverse, in place."""
    binv[p, :] /= w[p]
    col = w.copy()
    col[p] = 0.0
    binv -= np.outer(col, binv[p, :])

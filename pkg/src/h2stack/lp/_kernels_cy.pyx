# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled simplex inner-loop kernels.

Same contract and tie-breaking as `_kernels_py`; the pivot update runs as a
single fused pass without the NumPy outer-product temporary.
"""

import numpy as np

cimport cython
from libc.math cimport INFINITY, fabs

AT_LO = 0
AT_HI = 1
BASIC = 2
FREE = 3
FIXED = 4

IMPL = "cython"


def choose_entering(double[::1] d, signed char[::1] status, double tol, bint bland):
    cdef Py_ssize_t n = d.shape[0]
    cdef Py_ssize_t j, best = -1
    cdef double score, best_score = INFINITY
    cdef signed char st
    for j in range(n):
        st = status[j]
        if st == 0:                      # at lower bound: may increase
            score = d[j]
        elif st == 1:                    # at upper bound: may decrease
            score = -d[j]
        elif st == 3:                    # free at zero: either direction
            score = -fabs(d[j])
        else:
            continue
        if score < -tol:
            if bland:
                best = j
                break
            if score < best_score:
                best_score = score
                best = j
    if best < 0:
        return -1, 0.0
    st = status[best]
    if st == 0:
        return best, 1.0
    if st == 1:
        return best, -1.0
    return best, (1.0 if d[best] < 0.0 else -1.0)


def ratio_test(double[::1] w, double[::1] xb, double[::1] lob, double[::1] hib,
               double direction, double span, long[::1] basis_vars,
               bint bland, double pivot_tol):
    cdef Py_ssize_t m = w.shape[0]
    cdef Py_ssize_t i, p = -1
    cdef double d, lim
    cdef double theta_rows = INFINITY
    for i in range(m):
        d = direction * w[i]
        if d > pivot_tol:
            lim = (xb[i] - lob[i]) / d
        elif d < -pivot_tol:
            lim = (xb[i] - hib[i]) / d
        else:
            continue
        if lim < 0.0:
            lim = 0.0
        if lim < theta_rows:
            theta_rows = lim
    if span <= theta_rows:
        if span == INFINITY:
            return INFINITY, -1, False
        return span, -1, True
    cdef double tie_limit = theta_rows + 1e-9 + 1e-12 * theta_rows
    cdef double best_w = -1.0
    cdef long best_var = 0
    for i in range(m):
        d = direction * w[i]
        if d > pivot_tol:
            lim = (xb[i] - lob[i]) / d
        elif d < -pivot_tol:
            lim = (xb[i] - hib[i]) / d
        else:
            continue
        if lim < 0.0:
            lim = 0.0
        if lim <= tie_limit:
            if bland:
                if p < 0 or basis_vars[i] < best_var:
                    best_var = basis_vars[i]
                    p = i
            else:
                if fabs(w[i]) > best_w:
                    best_w = fabs(w[i])
                    p = i
    return theta_rows, p, False


def pivot_update(double[:, ::1] binv, double[::1] w, Py_ssize_t p):
    cdef Py_ssize_t m = binv.shape[0]
    cdef Py_ssize_t i, j
    cdef double piv = w[p]
    cdef double factor
    for j in range(m):
        binv[p, j] /= piv
    for i in range(m):
        if i == p:
            continue
        factor = w[i]
        if factor != 0.0:
            for j in range(m):
                binv[i, j] -= factor * binv[p, j]

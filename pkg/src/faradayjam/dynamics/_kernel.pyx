# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled time-stepping loop; semantics identical to ``_kernel_py``."""

import numpy as np

from libc.math cimport cos, fabs, sin

cdef int TRIGGERED = 1
cdef int TRACKER = 2
cdef int CRIT_QBER = 0
cdef signed char SECURE = 0
cdef signed char JAMMED = 1
cdef signed char REALIGNING = 2


def run_timeline(const double[::1] alpha, double dt, int kind, double baseline,
                 double trigger, long realign_steps, double max_slew,
                 int criterion, double s_value, double s_floor):
    cdef Py_ssize_t n = alpha.shape[0]
    comp_arr = np.empty(n)
    resid_arr = np.empty(n)
    qber_arr = np.empty(n)
    state_arr = np.empty(n, dtype=np.int8)
    cdef double[::1] comp_out = comp_arr
    cdef double[::1] resid_out = resid_arr
    cdef double[::1] qber_out = qber_arr
    cdef signed char[::1] state_out = state_arr
    cdef double lim = max_slew * dt
    cdef double comp = 0.0, a, d, r, sr, q
    cdef bint realigning = False, insecure
    cdef Py_ssize_t k, realign_end = 0
    with nogil:
        for k in range(n):
            a = alpha[k]
            if kind == TRIGGERED and realigning and k >= realign_end:
                comp = a
                realigning = False
            elif kind == TRACKER:
                d = a - comp
                if d > lim:
                    d = lim
                elif d < -lim:
                    d = -lim
                comp = comp + d
            r = a - comp
            sr = sin(r)
            q = baseline + (1.0 - 2.0 * baseline) * sr * sr
            if q > 0.5:
                q = 0.5
            elif q < 0.0:
                q = 0.0
            if criterion == CRIT_QBER:
                insecure = q > trigger
            else:
                insecure = s_value * fabs(cos(2.0 * r)) <= s_floor
            if kind == TRIGGERED and not realigning and insecure:
                realigning = True
                realign_end = k + realign_steps
            comp_out[k] = comp
            resid_out[k] = r
            qber_out[k] = q
            if realigning:
                state_out[k] = REALIGNING
            elif insecure:
                state_out[k] = JAMMED
            else:
                state_out[k] = SECURE
    return comp_arr, resid_arr, qber_arr, state_arr

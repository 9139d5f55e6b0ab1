"""Reference time-stepping loop; mirrors ``_kernel.pyx`` line for line."""

import math

import numpy as np

NONE, TRIGGERED, TRACKER = 0, 1, 2
CRIT_QBER, CRIT_CHSH = 0, 1
SECURE, JAMMED, REALIGNING = 0, 1, 2


def run_timeline(alpha, dt, kind, baseline, trigger, realign_steps, max_slew,
                 criterion, s_value, s_floor):
    n = len(alpha)
    comp_out = np.empty(n)
    resid_out = np.empty(n)
    qber_out = np.empty(n)
    state_out = np.empty(n, dtype=np.int8)
    lim = max_slew * dt
    comp = 0.0
    realigning = False
    realign_end = 0
    for k in range(n):
        a = float(alpha[k])
        if kind == TRIGGERED and realigning and k >= realign_end:
            comp = a
            realigning = False
        elif kind == TRACKER:
            d = a - comp
            if d > lim:
                d = lim
            elif d < -lim:
                d = -lim
            comp += d
        r = a - comp
        sr = math.sin(r)
        q = baseline + (1.0 - 2.0 * baseline) * sr * sr
        if q > 0.5:
            q = 0.5
        elif q < 0.0:
            q = 0.0
        if criterion == CRIT_QBER:
            insecure = q > trigger
        else:
            insecure = s_value * abs(math.cos(2.0 * r)) <= s_floor
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
    return comp_out, resid_out, qber_out, state_out

"""Stepping loops shared by the pure-Python and numba-compiled paths.

Each loop is plain Python; ``integrators`` compiles them with numba when the
system provides a jitted kernel.  ``f(x, u, t, p)`` is the right-hand side,
``usample(usig, t)`` returns the input held at time ``t``.  Loops return
``(-1, -1)`` on success or ``(step, substep)`` of the first bad state.
"""

import math

import numba
import numpy as np

BLOWUP_THRESHOLD = 1e300


def sample_step_signal(usig, t):
    before, after, switch_time = usig
    if t >= switch_time:
        return after
    return before


@numba.njit(cache=True)
def is_bad(x):
    for v in x:
        if not math.isfinite(v) or abs(v) > BLOWUP_THRESHOLD:
            return True
    return False


def fem_loop(f, p, usample, usig, x0, t0, delta, steps, stride, out_t, out_x):
    x = x0.copy()
    out_t[0] = t0
    out_x[0, :] = x
    j = 1
    for i in range(steps):
        t = t0 + i * delta
        u = usample(usig, t)
        x = x + delta * f(x, u, t, p)
        if is_bad(x):
            return i, -1
        if (i + 1) % stride == 0 or i + 1 == steps:
            out_t[j] = t0 + (i + 1) * delta
            out_x[j, :] = x
            j += 1
    return -1, -1


def smfe_loop(f, p, usample, usig, x0, t0, delta, n_small, eps, steps, stride,
              substeps, out_t, out_x):
    h_small = delta * eps
    h_big = delta * (1.0 - n_small * eps)
    x = x0.copy()
    out_t[0] = t0
    out_x[0, :] = x
    j = 1
    for i in range(steps):
        t_macro = t0 + i * delta
        u = usample(usig, t_macro)
        for n in range(n_small):
            t = t_macro + n * h_small
            x = x + h_small * f(x, u, t, p)
            if is_bad(x):
                return i, n
            if substeps:
                out_t[j] = t_macro + (n + 1) * h_small
                out_x[j, :] = x
                j += 1
        t = t_macro + n_small * h_small
        x = x + h_big * f(x, u, t, p)
        if is_bad(x):
            return i, n_small
        if substeps or (i + 1) % stride == 0 or i + 1 == steps:
            out_t[j] = t0 + (i + 1) * delta
            out_x[j, :] = x
            j += 1
    return -1, -1


def rk4_loop(f, p, usample, usig, x0, t0, h, steps, stride, out_t, out_x):
    x = x0.copy()
    out_t[0] = t0
    out_x[0, :] = x
    j = 1
    for i in range(steps):
        t = t0 + i * h
        u0 = usample(usig, t)
        um = usample(usig, t + 0.5 * h)
        u1 = usample(usig, t + h)
        k1 = f(x, u0, t, p)
        k2 = f(x + (0.5 * h) * k1, um, t + 0.5 * h, p)
        k3 = f(x + (0.5 * h) * k2, um, t + 0.5 * h, p)
        k4 = f(x + h * k3, u1, t + h, p)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if is_bad(x):
            return i, -1
        if (i + 1) % stride == 0 or i + 1 == steps:
            out_t[j] = t0 + (i + 1) * h
            out_x[j, :] = x
            j += 1
    return -1, -1


def record_rows(steps, stride):
    return steps // stride + 1 + (1 if steps % stride else 0)


def empty_output(rows, dim):
    return np.empty(rows), np.empty((rows, dim))

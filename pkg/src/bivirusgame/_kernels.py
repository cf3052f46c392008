"""Compiled scalar kernels for the coupled dynamics.

Everything numerical that runs inside tight loops lives here as numba
``njit`` functions over plain float64 scalars, so the fixed-step integrator
costs nanoseconds per step instead of microseconds.  The public modules
call the same kernels for single evaluations, which keeps the floating
point expression trees identical between the integrator and the library
surface (the factorization dy_i = y_i * h_i is exact, not approximate).

Parameter vectors are packed in the order
(beta1, beta2, delta1, delta2, r1, r2, c1, c2, c_d, q).
"""

import numpy as np
from numba import njit

#: Packing order for parameter vectors handed to the kernels.
PARAM_ORDER = ("beta1", "beta2", "delta1", "delta2", "r1", "r2", "c1", "c2", "c_d", "q")


@njit(cache=True)
def growth_rates(y1, y2, z_s, z1, z2, b1, b2, d1, d2, r1, r2, c1, c2, cd, q):
    """Per-capita growth rates (h1, h2, h_s) of the infection and distancing shares."""
    s = 1.0 - y1 - y2
    u = 1.0 - z_s * (1.0 - q)
    h1 = -d1 + b1 * s * u * (1.0 - z1 * (1.0 - q))
    h2 = -d2 + b2 * s * u * (1.0 - z2 * (1.0 - q))
    hs = 2.0 * (r1 * y1 + r2 * y2) - cd
    return h1, h2, hs


@njit(cache=True)
def rhs(y1, y2, z_s, z1, z2, b1, b2, d1, d2, r1, r2, c1, c2, cd, q):
    """Right-hand side of the coupled system at one state."""
    h1, h2, hs = growth_rates(y1, y2, z_s, z1, z2, b1, b2, d1, d2, r1, r2, c1, c2, cd, q)
    dy1 = y1 * h1
    dy2 = y2 * h2
    dzs = z_s * (1.0 - z_s) * hs
    dz1 = z1 * (1.0 - z1) * (c1 - cd)
    dz2 = z2 * (1.0 - z2) * (c2 - cd)
    return dy1, dy2, dzs, dz1, dz2


@njit(cache=True)
def _finite5(a, b, c, d, e):
    return np.isfinite(a) and np.isfinite(b) and np.isfinite(c) and np.isfinite(d) and np.isfinite(e)


@njit(cache=True)
def project_gamma(y1, y2, z_s, z1, z2):
    """Clamp a state back onto the invariant region.

    Coordinates are clamped to [0, 1]; if the infected masses overshoot
    y1 + y2 <= 1 they are rescaled by 1/(y1 + y2).
    """
    y1 = min(max(y1, 0.0), 1.0)
    y2 = min(max(y2, 0.0), 1.0)
    z_s = min(max(z_s, 0.0), 1.0)
    z1 = min(max(z1, 0.0), 1.0)
    z2 = min(max(z2, 0.0), 1.0)
    tot = y1 + y2
    if tot > 1.0:
        y1 = y1 / tot
        y2 = y2 / tot
    return y1, y2, z_s, z1, z2


@njit(cache=True)
def rk4_step_raw(y1, y2, z_s, z1, z2, b1, b2, d1, d2, r1, r2, c1, c2, cd, q, h):
    """One classical 4-stage Runge-Kutta step without projection.

    Returns the tentative next state plus an error code: 0 when all stages
    are finite, otherwise the 1-based index of the first non-finite stage.
    """
    a1, a2, a3, a4, a5 = rhs(y1, y2, z_s, z1, z2, b1, b2, d1, d2, r1, r2, c1, c2, cd, q)
    if not _finite5(a1, a2, a3, a4, a5):
        return y1, y2, z_s, z1, z2, 1

    hh = 0.5 * h
    b1_, b2_, b3_, b4_, b5_ = rhs(y1 + hh * a1, y2 + hh * a2, z_s + hh * a3,
                                  z1 + hh * a4, z2 + hh * a5,
                                  b1, b2, d1, d2, r1, r2, c1, c2, cd, q)
    if not _finite5(b1_, b2_, b3_, b4_, b5_):
        return y1, y2, z_s, z1, z2, 2

    c1_, c2_, c3_, c4_, c5_ = rhs(y1 + hh * b1_, y2 + hh * b2_, z_s + hh * b3_,
                                  z1 + hh * b4_, z2 + hh * b5_,
                                  b1, b2, d1, d2, r1, r2, c1, c2, cd, q)
    if not _finite5(c1_, c2_, c3_, c4_, c5_):
        return y1, y2, z_s, z1, z2, 3

    d1_, d2_, d3_, d4_, d5_ = rhs(y1 + h * c1_, y2 + h * c2_, z_s + h * c3_,
                                  z1 + h * c4_, z2 + h * c5_,
                                  b1, b2, d1, d2, r1, r2, c1, c2, cd, q)
    if not _finite5(d1_, d2_, d3_, d4_, d5_):
        return y1, y2, z_s, z1, z2, 4

    w = h / 6.0
    n1 = y1 + w * (a1 + 2.0 * b1_ + 2.0 * c1_ + d1_)
    n2 = y2 + w * (a2 + 2.0 * b2_ + 2.0 * c2_ + d2_)
    n3 = z_s + w * (a3 + 2.0 * b3_ + 2.0 * c3_ + d3_)
    n4 = z1 + w * (a4 + 2.0 * b4_ + 2.0 * c4_ + d4_)
    n5 = z2 + w * (a5 + 2.0 * b5_ + 2.0 * c5_ + d5_)
    return n1, n2, n3, n4, n5, 0


# Status codes returned by integrate_loop.
STATUS_TMAX = 0
STATUS_CONVERGED = 1
STATUS_NONFINITE = 2


@njit(cache=True)
def integrate_loop(x0, pv, h, n_steps, record_every, conv_eps, conv_window,
                   rec_times, rec_states):
    """Fixed-step integration loop with recording and convergence detection.

    Records the initial state, every ``record_every``-th step, and the final
    state into the preallocated ``rec_times`` / ``rec_states`` buffers.
    Convergence triggers once the max-norm of the vector field stays below
    ``conv_eps`` for a continuous time span of ``conv_window``.

    Returns (n_recorded, status, stop_time, error_stage).
    """
    b1, b2, d1, d2, r1, r2, c1, c2, cd, q = (pv[0], pv[1], pv[2], pv[3], pv[4],
                                             pv[5], pv[6], pv[7], pv[8], pv[9])
    y1, y2, z_s, z1, z2 = x0[0], x0[1], x0[2], x0[3], x0[4]

    n_rec = 0
    rec_times[n_rec] = 0.0
    rec_states[n_rec, 0] = y1
    rec_states[n_rec, 1] = y2
    rec_states[n_rec, 2] = z_s
    rec_states[n_rec, 3] = z1
    rec_states[n_rec, 4] = z2
    n_rec += 1

    below_time = 0.0
    t = 0.0
    for k in range(1, n_steps + 1):
        # Convergence bookkeeping uses the derivative at the current state,
        # which is exactly the first Runge-Kutta stage of this step.
        f1, f2, f3, f4, f5 = rhs(y1, y2, z_s, z1, z2,
                                 b1, b2, d1, d2, r1, r2, c1, c2, cd, q)
        norm = max(abs(f1), abs(f2), abs(f3), abs(f4), abs(f5))
        if norm < conv_eps:
            below_time += h
        else:
            below_time = 0.0
        if below_time >= conv_window:
            if rec_times[n_rec - 1] < t:
                rec_times[n_rec] = t
                rec_states[n_rec, 0] = y1
                rec_states[n_rec, 1] = y2
                rec_states[n_rec, 2] = z_s
                rec_states[n_rec, 3] = z1
                rec_states[n_rec, 4] = z2
                n_rec += 1
            return n_rec, STATUS_CONVERGED, t, 0

        y1, y2, z_s, z1, z2, err = rk4_step_raw(y1, y2, z_s, z1, z2,
                                                b1, b2, d1, d2, r1, r2,
                                                c1, c2, cd, q, h)
        if err != 0:
            return n_rec, STATUS_NONFINITE, t, err
        y1, y2, z_s, z1, z2 = project_gamma(y1, y2, z_s, z1, z2)
        t = k * h

        if k % record_every == 0 or k == n_steps:
            rec_times[n_rec] = t
            rec_states[n_rec, 0] = y1
            rec_states[n_rec, 1] = y2
            rec_states[n_rec, 2] = z_s
            rec_states[n_rec, 3] = z1
            rec_states[n_rec, 4] = z2
            n_rec += 1

    return n_rec, STATUS_TMAX, t, 0

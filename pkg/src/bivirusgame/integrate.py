"""Fixed-step Runge-Kutta integration with recording and convergence detection.

The integrator is deliberately fixed-step (classical RK4) so results are
bit-reproducible across runs.  After every step the state is projected
back onto the invariant region by coordinate clamping, which absorbs the
O(1e-16) round-off excursions a polynomial vector field produces at the
boundary.  Convergence is declared when the max-norm of the vector field
stays below a threshold for a sustained time window; a state-difference
criterion would chase moving targets along lines of equilibria.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import IntegrationError, NonFiniteStageError, StateSpaceError
from .model import GAMMA_SLACK, ModelParams, State, in_gamma, validate_params


@dataclass(frozen=True)
class SimConfig:
    """Integration settings.

    ``h`` is the step size, ``t_max`` the horizon, ``record_every`` the
    recording stride in steps, and convergence triggers once the vector
    field's max-norm stays below ``conv_eps`` over a span of ``conv_window``
    time units.
    """

    h: float = 1e-4
    t_max: float = 500.0
    record_every: int = 1000
    conv_eps: float = 1e-9
    conv_window: float = 1.0

    def __post_init__(self):
        if not self.h > 0.0:
            raise ValueError(f"step size h must be positive, got {self.h!r}")
        if self.t_max < self.h:
            raise ValueError("t_max must be at least one step")
        if self.record_every < 1:
            raise ValueError("record_every must be a positive integer")
        if self.conv_eps < 0.0:
            raise ValueError("conv_eps must be nonnegative")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_max / self.h))


@dataclass(frozen=True)
class Trajectory:
    """Recorded integration run: times, states, and convergence outcome."""

    times: np.ndarray            # shape (n,)
    states: np.ndarray           # shape (n, 5), columns y1, y2, z_s, z1, z2
    converged_to: Optional[State]
    converged_at: Optional[float]

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> State:
        return State.from_iterable(self.states[i])

    @property
    def final_state(self) -> State:
        return self.state(len(self.times) - 1)

    @property
    def final_time(self) -> float:
        return float(self.times[-1])


def rk4_step(p: ModelParams, x: State, h: float) -> State:
    """One classical RK4 step from ``x``, projected back onto the region.

    Raises :class:`NonFiniteStageError` (carrying the 1-based stage index)
    if any intermediate stage evaluates to a non-finite value.
    """
    if not h > 0.0:
        raise ValueError(f"step size must be positive, got {h!r}")
    if not in_gamma(x, GAMMA_SLACK):
        raise StateSpaceError(f"state {x} outside the invariant region")
    y1, y2, z_s, z1, z2, err = _kernels.rk4_step_raw(
        x.y1, x.y2, x.z_s, x.z1, x.z2,
        p.beta1, p.beta2, p.delta1, p.delta2,
        p.r1, p.r2, p.c1, p.c2, p.c_d, p.q, h)
    if err != 0:
        raise NonFiniteStageError(err)
    return State(*_kernels.project_gamma(y1, y2, z_s, z1, z2))


def integrate(p: ModelParams, x0: State, cfg: SimConfig = SimConfig()) -> Trajectory:
    """Integrate from ``x0`` until ``t_max`` or until convergence.

    The initial state must lie in the invariant region (slack 1e-9).  The
    returned trajectory records the initial state, every
    ``record_every``-th step, and the final state; ``converged_to`` /
    ``converged_at`` are filled when the convergence rule triggered.

    Raises :class:`IntegrationError` with the failing time attached if a
    Runge-Kutta stage turns non-finite.
    """
    validate_params(p).raise_if_errors()
    if not in_gamma(x0, GAMMA_SLACK):
        raise StateSpaceError(f"initial state {x0} outside the invariant region")

    n_steps = cfg.n_steps
    n_buf = n_steps // cfg.record_every + 3
    rec_times = np.empty(n_buf, dtype=np.float64)
    rec_states = np.empty((n_buf, 5), dtype=np.float64)

    start = np.array(_kernels.project_gamma(x0.y1, x0.y2, x0.z_s, x0.z1, x0.z2),
                     dtype=np.float64)
    n_rec, status, stop_t, err_stage = _kernels.integrate_loop(
        start, p.as_array(), cfg.h, n_steps, cfg.record_every,
        cfg.conv_eps, cfg.conv_window, rec_times, rec_states)

    if status == _kernels.STATUS_NONFINITE:
        raise IntegrationError(stop_t, err_stage)

    times = rec_times[:n_rec].copy()
    states = rec_states[:n_rec].copy()
    if status == _kernels.STATUS_CONVERGED:
        final = State.from_iterable(states[-1])
        return Trajectory(times, states, converged_to=final, converged_at=float(stop_t))
    return Trajectory(times, states, converged_to=None, converged_at=None)


def detect_convergence(traj: Trajectory, p: ModelParams,
                       eps: float = 1e-9, window: float = 1.0) -> Optional[State]:
    """Post-hoc convergence test on a recorded trajectory.

    Returns the terminal state when the vector field's max-norm stays
    below ``eps`` at every recorded sample in the trailing ``window`` time
    units (the whole trajectory if it is shorter); otherwise None.
    """
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    t_end = traj.final_time
    pv = p.as_array()
    for i in range(len(traj) - 1, -1, -1):
        if traj.times[i] < t_end - window:
            break
        row = traj.states[i]
        d = _kernels.rhs(row[0], row[1], row[2], row[3], row[4], *pv)
        if max(abs(v) for v in d) >= eps:
            return None
    return traj.final_state

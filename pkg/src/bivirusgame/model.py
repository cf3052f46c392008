"""Core model: parameters, state, payoffs, and the coupled vector field.

Two competitive SIS strains spread through a single well-mixed population
of unit mass.  Individuals are susceptible or infected with exactly one
strain; each chooses whether to social distance, which scales their
contact rate by a factor q in (0, 1).  The distancing shares evolve by
replicator dynamics driven by perceived infection risk against the cost
of distancing.

The state is the 5-vector p = [y1, y2, z_s, z1, z2]:

* ``y1``, ``y2``   -- mass fractions infected with strain 1 / strain 2,
* ``z_s``          -- fraction of susceptibles who social distance,
* ``z1``, ``z2``   -- distancing fractions among each infected group.

The susceptible mass is the derived quantity s = 1 - y1 - y2.  The
dynamics are

    dy_i/dt  = y_i * (beta_i * s * (1 - z_s*(1-q)) * (1 - z_i*(1-q)) - delta_i)
    dz_s/dt  = z_s * (1 - z_s) * (2*(r1*y1 + r2*y2) - c_d)
    dz_i/dt  = z_i * (1 - z_i) * (c_i - c_d)

The region Gamma = {y1, y2 >= 0, y1 + y2 <= 1} x [0, 1]^3 is positively
invariant: trajectories starting inside it never leave.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import _kernels
from .errors import StateSpaceError

#: Additive slack used when the vector field accepts states that left the
#: invariant region by round-off.
GAMMA_SLACK = 1e-9

STATE_FIELDS = ("y1", "y2", "z_s", "z1", "z2")


@dataclass(frozen=True)
class ModelParams:
    """All rate, cost, and game parameters of the coupled model.

    Parameters
    ----------
    beta1, beta2 : float
        Contact spreading rates of the two strains (1/time, > 0).
    delta1, delta2 : float
        Healing rates (1/time, > 0).
    r1, r2 : float
        Perceived risk factors for exposure to each strain (> 0).
    c1, c2 : float
        Perceived costs of socializing while infected with each strain.
    c_d : float
        Economic/social cost of distancing (> 0).
    q : float
        Interaction reduction factor in (0, 1); lower means more isolation.
    """

    beta1: float
    beta2: float
    delta1: float
    delta2: float
    r1: float
    r2: float
    c1: float
    c2: float
    c_d: float
    q: float

    def as_array(self) -> np.ndarray:
        """Pack into the kernel parameter order."""
        return np.array([getattr(self, name) for name in _kernels.PARAM_ORDER],
                        dtype=np.float64)

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class State:
    """One point of the 5-dimensional state space.

    Intended domain is the invariant region (see :func:`in_gamma`); the
    record itself does not enforce membership so that round-off excursions
    remain representable.
    """

    y1: float
    y2: float
    z_s: float
    z1: float
    z2: float

    @property
    def s(self) -> float:
        """Susceptible mass 1 - y1 - y2, computed on demand."""
        return 1.0 - self.y1 - self.y2

    def as_array(self) -> np.ndarray:
        return np.array([self.y1, self.y2, self.z_s, self.z1, self.z2],
                        dtype=np.float64)

    @classmethod
    def from_iterable(cls, values: Iterable[float]) -> "State":
        y1, y2, z_s, z1, z2 = (float(v) for v in values)
        return cls(y1, y2, z_s, z1, z2)


@dataclass(frozen=True)
class Derivative:
    """Time derivatives of the five state coordinates."""

    dy1: float
    dy2: float
    dz_s: float
    dz1: float
    dz2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.dy1, self.dy2, self.dz_s, self.dz1, self.dz2],
                        dtype=np.float64)

    def max_norm(self) -> float:
        return max(abs(self.dy1), abs(self.dy2), abs(self.dz_s),
                   abs(self.dz1), abs(self.dz2))


class Payoffs(NamedTuple):
    """Perceived payoffs of distancing / not distancing for each group."""

    pi_sd: float
    pi_sn: float
    pi_1d: float
    pi_1n: float
    pi_2d: float
    pi_2n: float


class GrowthRates(NamedTuple):
    """Per-capita growth rates appearing as factors of the vector field."""

    h1: float
    h2: float
    h_s: float


@dataclass(frozen=True)
class ParamCheck:
    """Outcome of one validity check: positive margin means satisfied."""

    name: str
    passed: bool
    severity: str  # "error" or "warning"
    margin: float
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    """Collected parameter checks; callers decide whether to abort."""

    checks: tuple[ParamCheck, ...]

    @property
    def errors(self) -> tuple[ParamCheck, ...]:
        return tuple(c for c in self.checks if not c.passed and c.severity == "error")

    @property
    def warnings(self) -> tuple[ParamCheck, ...]:
        return tuple(c for c in self.checks if not c.passed and c.severity == "warning")

    @property
    def ok(self) -> bool:
        return not self.errors

    def raise_if_errors(self) -> None:
        from .errors import InvalidParamsError

        if self.errors:
            raise InvalidParamsError(self)


def validate_params(p: ModelParams, strict: bool = False) -> ValidationReport:
    """Check the model parameters against their validity conditions.

    Hard conditions (positive rates, q strictly inside (0, 1), positive
    distancing cost and risk factors, finite values) are always reported
    as errors when violated.  The two soft modeling conditions -- the
    second strain being perceived as riskier (r1 < r2) and infection costs
    exceeding the distancing cost (c_i > c_d) -- are warnings by default
    and escalate to errors under ``strict``; several standard demonstration
    parameter sets violate them deliberately.
    """
    values = [p.beta1, p.beta2, p.delta1, p.delta2, p.r1, p.r2,
              p.c1, p.c2, p.c_d, p.q]
    finite = all(math.isfinite(v) for v in values)
    soft = "error" if strict else "warning"
    rate_margin = min(p.beta1, p.beta2, p.delta1, p.delta2)
    q_margin = min(p.q, 1.0 - p.q)
    risk_margin = min(p.r1, p.r2)
    order_margin = p.r2 - p.r1
    cost_margin = min(p.c1, p.c2) - p.c_d

    checks = (
        ParamCheck("finite_parameters", finite, "error",
                   0.0 if finite else -math.inf,
                   "all parameters are finite numbers"),
        ParamCheck("positive_rates", finite and rate_margin > 0.0, "error",
                   rate_margin,
                   "spreading and healing rates beta_i, delta_i are positive"),
        ParamCheck("q_in_open_unit_interval", finite and q_margin > 0.0, "error",
                   q_margin,
                   "interaction reduction factor q lies strictly inside (0, 1)"),
        ParamCheck("positive_distancing_cost", finite and p.c_d > 0.0, "error",
                   p.c_d,
                   "distancing cost c_d is positive"),
        ParamCheck("positive_risk_factors", finite and risk_margin > 0.0, "error",
                   risk_margin,
                   "perceived risk factors r_i are positive"),
        ParamCheck("risk_ordering", finite and order_margin > 0.0, soft,
                   order_margin,
                   "strain 2 is perceived as riskier than strain 1 (r1 < r2)"),
        ParamCheck("infection_cost_dominates", finite and cost_margin > 0.0, soft,
                   cost_margin,
                   "socializing while infected costs more than distancing (c_i > c_d)"),
    )
    return ValidationReport(checks)


def in_gamma(x: State, tol: float = 0.0) -> bool:
    """Membership test for the invariant region with additive slack ``tol``."""
    lo, hi = -tol, 1.0 + tol
    return (lo <= x.y1 <= hi and lo <= x.y2 <= hi and x.y1 + x.y2 <= hi
            and lo <= x.z_s <= hi and lo <= x.z1 <= hi and lo <= x.z2 <= hi)


def payoffs(p: ModelParams, x: State) -> Payoffs:
    """Perceived payoffs for distancing vs. not, per population group.

    Susceptibles weigh the distancing cost against the perceived risk
    r1*y1 + r2*y2; infected individuals face the constant costs c_d
    (distancing) or c_i (socializing while infected).
    """
    risk = p.r1 * x.y1 + p.r2 * x.y2
    return Payoffs(pi_sd=-p.c_d + risk, pi_sn=-risk,
                   pi_1d=-p.c_d, pi_1n=-p.c1,
                   pi_2d=-p.c_d, pi_2n=-p.c2)


def helper_h(p: ModelParams, x: State) -> GrowthRates:
    """Growth-rate factors (h1, h2, h_s) of the coupled system.

    These satisfy dy_i/dt = y_i * h_i and dz_s/dt = z_s*(1-z_s) * h_s with
    the exact same floating-point expressions as :func:`vector_field`, and
    h_s equals the susceptibles' payoff difference pi_sd - pi_sn.
    """
    h1, h2, hs = _kernels.growth_rates(x.y1, x.y2, x.z_s, x.z1, x.z2,
                                       p.beta1, p.beta2, p.delta1, p.delta2,
                                       p.r1, p.r2, p.c1, p.c2, p.c_d, p.q)
    return GrowthRates(h1, h2, hs)


def vector_field(p: ModelParams, x: State) -> Derivative:
    """Right-hand side of the coupled system at state ``x``.

    Accepts states that left the invariant region by at most
    :data:`GAMMA_SLACK` (integrator round-off); anything further out, or
    non-finite, raises :class:`StateSpaceError`.
    """
    arr = (x.y1, x.y2, x.z_s, x.z1, x.z2)
    if not all(math.isfinite(v) for v in arr):
        raise StateSpaceError(f"non-finite state {arr}")
    if not in_gamma(x, GAMMA_SLACK):
        raise StateSpaceError(
            f"state {arr} outside the invariant region beyond slack {GAMMA_SLACK:g}")
    d = _kernels.rhs(x.y1, x.y2, x.z_s, x.z1, x.z2,
                     p.beta1, p.beta2, p.delta1, p.delta2,
                     p.r1, p.r2, p.c1, p.c2, p.c_d, p.q)
    return Derivative(*d)


def vector_field_norm(p: ModelParams, x: State) -> float:
    """Max-norm of the vector field; small values indicate a near-fixed point."""
    return vector_field(p, x).max_norm()

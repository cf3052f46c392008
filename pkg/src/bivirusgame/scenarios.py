"""Canonical demonstration scenarios, one per long-run outcome.

Each scenario pairs a parameter set with interior (or deliberately
boundary-pinned) initial conditions that converge to one kind of
equilibrium: total extinction, a single endemic strain with partial
distancing, and the two coexistence lines.  The first two deliberately
violate the soft assumption r1 < r2, which is why that check is a
warning rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import ModelParams, State


@dataclass(frozen=True)
class Scenario:
    name: str
    description: str
    params: ModelParams
    initial_states: tuple[State, ...]


def virus_extinction() -> Scenario:
    """Both strains die out; nobody ends up distancing (converges to DFE0)."""
    return Scenario(
        name="virus_extinction",
        description="strong isolation (q=0.1) pushes both strains below "
                    "threshold; the system converges to the disease-free "
                    "point with no distancing",
        params=ModelParams(beta1=0.8, beta2=0.8, delta1=0.2, delta2=0.2,
                           r1=0.5, r2=0.5, c1=0.5, c2=0.5, c_d=0.4, q=0.1),
        initial_states=(State(0.6, 0.4, 0.1, 0.9, 0.7),),
    )


def partial_distancing_endemic() -> Scenario:
    """Strain 1 stays endemic, strain 2 dies out, susceptibles mix (U1S).

    The target point has y1 = c_d/(2*r1) = 0.5 and z_s = 2/3.
    """
    return Scenario(
        name="partial_distancing_endemic",
        description="strain 1 has a much larger reproduction ratio and "
                    "persists with two thirds of the susceptibles "
                    "distancing; strain 2 dies out",
        params=ModelParams(beta1=0.5, beta2=0.4, delta1=0.06, delta2=0.3,
                           r1=0.6, r2=0.4, c1=1.0, c2=0.9, c_d=0.6, q=0.4),
        initial_states=(State(0.5, 0.2, 0.7, 0.9, 0.8),),
    )


_COEX_Y0 = ((0.5, 0.4), (0.1, 0.8), (0.1, 0.1), (0.8, 0.1))


def coexistence_no_distancing() -> Scenario:
    """Both strains coexist on the line y1 + y2 = 7/12 with z_s = 0 (L0).

    The four initial conditions start on the z_s = 0 face (which the
    replicator dynamics pin exactly), so trajectories can be projected
    onto the (y1, y2) simplex without losing information.  Which line
    point each trajectory reaches depends on its initial condition.
    """
    return Scenario(
        name="coexistence_no_distancing",
        description="equal reproduction ratios (R0=3) with q*R0>1 produce "
                    "a stable segment of coexistence points at zero "
                    "distancing; four starts land on four line points",
        params=ModelParams(beta1=0.3, beta2=0.3, delta1=0.1, delta2=0.1,
                           r1=0.5, r2=0.1, c1=3.0, c2=3.0, c_d=2.0, q=0.8),
        initial_states=tuple(State(a, b, 0.0, 1.0, 1.0) for a, b in _COEX_Y0),
    )


def coexistence_full_distancing() -> Scenario:
    """Both strains coexist on the line y1 + y2 = 23/48 with z_s = 1 (L1).

    Starts on the z_s = 1 face (pinned, so the simplex projection again
    loses nothing).  Same infection rates as the no-distancing line, but
    the cheap distancing cost keeps everyone distancing; the line sits at
    a lower total infection level because q^2*R0 < q*R0.
    """
    return Scenario(
        name="coexistence_full_distancing",
        description="cheap distancing (c_d=0.1) keeps all susceptibles "
                    "distancing; the coexistence segment persists at "
                    "q^2*R0=1.92",
        params=ModelParams(beta1=0.3, beta2=0.3, delta1=0.1, delta2=0.1,
                           r1=0.4, r2=0.4, c1=0.9, c2=0.9, c_d=0.1, q=0.8),
        initial_states=tuple(State(a, b, 1.0, 1.0, 1.0) for a, b in _COEX_Y0),
    )


def all_scenarios() -> tuple[Scenario, ...]:
    return (virus_extinction(), partial_distancing_endemic(),
            coexistence_no_distancing(), coexistence_full_distancing())

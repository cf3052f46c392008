"""Closed-form enumeration of every fixed point of the coupled system.

Infected individuals always gain from distancing (c_i > c_d), so any
fixed point with z_1 < 1 or z_2 < 1 sits on a repelling face; attention
is restricted to fixed points of the form (y1, y2, z_s, 1, 1).  Those
fall into three families:

* two disease-free points (nobody / everybody distancing among
  susceptibles), which always exist;
* six unilateral endemic points (one strain survives) with z_s = 0,
  z_s = 1, or a partial distancing level z_s in (0, 1);
* lines of coexistence fixed points, which exist only when both strains
  share the same reproduction ratio R0 = beta_i / delta_i.

Every candidate is returned together with its existence conditions and
their margins (signed distance to the condition boundary), so callers can
flag near-marginal parameter sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import DegenerateRiskRatioError, LineRangeError
from .model import ModelParams, State, validate_params

KIND_DFE0 = "DFE0"
KIND_DFE1 = "DFE1"
POINT_KINDS = ("DFE0", "DFE1", "U10", "U11", "U1S", "U20", "U21", "U2S")
LINE_KINDS = ("L0", "L1", "LS")

#: Default relative tolerance for declaring the two reproduction ratios equal.
R0_MATCH_RTOL = 1e-12


@dataclass(frozen=True)
class Condition:
    """One labeled inequality with its signed margin (positive = satisfied)."""

    label: str
    holds: bool
    margin: float


class ReproductionNumbers(NamedTuple):
    rho1: float
    rho2: float
    equal: bool


@dataclass(frozen=True)
class Equilibrium:
    """A closed-form isolated fixed point candidate.

    ``point`` is None when the defining formulas are not evaluable for the
    given parameters (which only happens when ``exists`` is False).
    """

    kind: str
    point: Optional[State]
    exists: bool
    existence_conditions: tuple[Condition, ...]


@dataclass(frozen=True)
class EquilibriumLine:
    """A one-parameter family of fixed points, parameterized by y1.

    For kind "L0" (z_s = 0) and "L1" (z_s = 1) the family is the segment
    y1 + y2 = level with y1 in [0, level]; both endpoints are themselves
    fixed points, so ``point_at`` accepts the closed range.  For kind "LS"
    the distancing level varies along the line and the parameter range
    (lower, upper) is open.
    """

    kind: str
    exists: bool
    param_range: Optional[tuple[float, float]]
    existence_conditions: tuple[Condition, ...]
    r0_equal: bool
    params: ModelParams
    r0: float
    degenerate: bool = False

    def point_at(self, y1: float) -> State:
        return point_on_line(self, y1)

    def sample(self, n: int = 11, inset: float = 1e-3) -> list[State]:
        """n points across the parameter range, inset from the endpoints."""
        lo, hi = self.param_range
        span = hi - lo
        return [self.point_at(lo + span * (inset + (1.0 - 2.0 * inset) * k / (n - 1)))
                for k in range(n)]


def reproduction_numbers(p: ModelParams, rtol: float = R0_MATCH_RTOL) -> ReproductionNumbers:
    """Reproduction ratios beta_i / delta_i and their equality verdict.

    Coexistence requires the two ratios to coincide; exact equality is
    only meaningful symbolically, so the verdict uses a relative tolerance.
    """
    rho1 = p.beta1 / p.delta1
    rho2 = p.beta2 / p.delta2
    equal = abs(rho1 - rho2) <= rtol * max(abs(rho1), abs(rho2))
    return ReproductionNumbers(rho1, rho2, equal)


def _strict(label: str, margin: float) -> Condition:
    return Condition(label, margin > 0.0, margin)


def _nonstrict(label: str, margin: float) -> Condition:
    return Condition(label, margin >= 0.0, margin)


def _unilateral(p: ModelParams, i: int) -> list[Equilibrium]:
    """The three unilateral candidates for strain i (1-based)."""
    beta = p.beta1 if i == 1 else p.beta2
    delta = p.delta1 if i == 1 else p.delta2
    r = p.r1 if i == 1 else p.r2
    q = p.q

    out = []

    # Nobody distancing: y_i = 1 - delta/(q beta), z_s = 0.
    ratio0 = delta / (q * beta)
    cond0 = _strict(f"delta{i}/(q*beta{i}) < 1", 1.0 - ratio0)
    point0 = None
    if cond0.holds:
        y = 1.0 - ratio0
        point0 = _unilateral_state(i, y, 0.0)
    out.append(Equilibrium(f"U{i}0", point0, cond0.holds, (cond0,)))

    # Everybody distancing: y_i = 1 - delta/(q^2 beta), z_s = 1.
    ratio1 = delta / (q * q * beta)
    cond1 = _strict(f"delta{i}/(q^2*beta{i}) < 1", 1.0 - ratio1)
    point1 = None
    if cond1.holds:
        y = 1.0 - ratio1
        point1 = _unilateral_state(i, y, 1.0)
    out.append(Equilibrium(f"U{i}1", point1, cond1.holds, (cond1,)))

    # Partial distancing: y_i = c_d/(2 r_i), z_s interior.
    yi = p.c_d / (2.0 * r)
    conds = (
        _nonstrict(f"c_d/(2*r{i}) <= 1", 1.0 - yi),
        _strict(f"q*(1 - c_d/(2*r{i})) < delta{i}/(q*beta{i})",
                ratio0 - q * (1.0 - yi)),
        _strict(f"delta{i}/(q*beta{i}) < 1 - c_d/(2*r{i})",
                (1.0 - yi) - ratio0),
    )
    exists = all(c.holds for c in conds)
    point_s = None
    if exists:
        z_s = 1.0 / (1.0 - q) - delta / (beta * (1.0 - yi) * q * (1.0 - q))
        point_s = _unilateral_state(i, yi, z_s)
    out.append(Equilibrium(f"U{i}S", point_s, exists, conds))
    return out


def _unilateral_state(i: int, y: float, z_s: float) -> State:
    if i == 1:
        return State(y, 0.0, z_s, 1.0, 1.0)
    return State(0.0, y, z_s, 1.0, 1.0)


def enumerate_isolated(p: ModelParams) -> list[Equilibrium]:
    """All eight isolated fixed-point candidates with existence verdicts.

    The two disease-free points always exist.  Unilateral candidates carry
    their defining inequalities; a candidate whose conditions fail is
    returned with ``exists=False`` and the per-condition margins.
    """
    validate_params(p).raise_if_errors()
    always = Condition("always exists", True, math.inf)
    out = [
        Equilibrium(KIND_DFE0, State(0.0, 0.0, 0.0, 1.0, 1.0), True, (always,)),
        Equilibrium(KIND_DFE1, State(0.0, 0.0, 1.0, 1.0, 1.0), True, (always,)),
    ]
    out.extend(_unilateral(p, 1))
    out.extend(_unilateral(p, 2))
    # Fixed presentation order DFE0, DFE1, U10, U11, U1S, U20, U21, U2S.
    order = {k: j for j, k in enumerate(POINT_KINDS)}
    out.sort(key=lambda e: order[e.kind])
    return out


def coexistence_lines(p: ModelParams, rtol: float = R0_MATCH_RTOL) -> list[EquilibriumLine]:
    """The three candidate lines of coexistence fixed points.

    All three require matching reproduction ratios; with a mismatch every
    line is returned as non-existent with the failed matching condition.
    The mixed-distancing line LS additionally requires r1 != r2 (its
    bounds divide by 1 - r1/r2); with equal risk factors it is returned
    with ``degenerate=True`` and cannot be evaluated.
    """
    validate_params(p).raise_if_errors()
    rn = reproduction_numbers(p, rtol)
    rel_diff = abs(rn.rho1 - rn.rho2) / max(abs(rn.rho1), abs(rn.rho2))
    match = Condition("R0 match (beta1/delta1 = beta2/delta2)",
                      rn.equal, rtol - rel_diff)
    r0 = rn.rho1
    q = p.q

    lines = []
    if not rn.equal:
        for kind in LINE_KINDS:
            lines.append(EquilibriumLine(kind, False, None, (match,),
                                         False, p, r0))
        return lines

    # L0: z_s = 0, y1 + y2 = 1 - 1/(q R0).
    c_l0 = _strict("q*R0 > 1", q * r0 - 1.0)
    level0 = 1.0 - 1.0 / (q * r0)
    lines.append(EquilibriumLine(
        "L0", c_l0.holds, (0.0, level0) if c_l0.holds else None,
        (match, c_l0), True, p, r0))

    # L1: z_s = 1, y1 + y2 = 1 - 1/(q^2 R0).
    c_l1 = _strict("q^2*R0 > 1", q * q * r0 - 1.0)
    level1 = 1.0 - 1.0 / (q * q * r0)
    lines.append(EquilibriumLine(
        "L1", c_l1.holds, (0.0, level1) if c_l1.holds else None,
        (match, c_l1), True, p, r0))

    # LS: z_s in (0, 1) varies along the line, bounds divide by 1 - r1/r2.
    if p.r1 == p.r2:
        degen = Condition("risk ratio nondegenerate (r1 != r2)", False, 0.0)
        lines.append(EquilibriumLine("LS", False, None, (match, degen),
                                     True, p, r0, degenerate=True))
        return lines

    cd2r1 = p.c_d / (2.0 * p.r1)
    cd2r2 = p.c_d / (2.0 * p.r2)
    ratio = 1.0 - p.r1 / p.r2
    b_lo = max(0.0,
               (p.r2 / p.r1) * (cd2r2 - 1.0),
               (1.0 - cd2r2 - 1.0 / (q * q * r0)) / ratio)
    b_hi = min(cd2r1,
               (1.0 - cd2r2) / ratio,
               (1.0 - cd2r2 - 1.0 / (q * r0)) / ratio,
               1.0)
    c_ls = _strict("B_lower < B_upper", b_hi - b_lo)
    lines.append(EquilibriumLine(
        "LS", c_ls.holds, (b_lo, b_hi) if c_ls.holds else None,
        (match, c_ls), True, p, r0))
    return lines


def point_on_line(line: EquilibriumLine, y1: float) -> State:
    """Full 5-dimensional state of the line at parameter value ``y1``.

    For L0/L1 the closed range [0, level] is accepted (the endpoints are
    unilateral fixed points on the same segment); for LS the range is
    strictly open.  Out-of-range values raise :class:`LineRangeError`
    naming the violated bound.
    """
    if line.degenerate:
        raise DegenerateRiskRatioError(
            "mixed-distancing line is degenerate for r1 == r2")
    if not line.exists:
        raise ValueError(f"line {line.kind} does not exist for these parameters")
    lo, hi = line.param_range
    p = line.params
    if line.kind in ("L0", "L1"):
        if not lo <= y1 <= hi:
            raise LineRangeError(y1, lo, hi)
        z_s = 0.0 if line.kind == "L0" else 1.0
        return State(y1, hi - y1, z_s, 1.0, 1.0)
    if not lo < y1 < hi:
        raise LineRangeError(y1, lo, hi)
    y2 = p.c_d / (2.0 * p.r2) - (p.r1 / p.r2) * y1
    ell = 1.0 - y1 - y2
    z_s = 1.0 / (1.0 - p.q) - 1.0 / (p.q * (1.0 - p.q) * line.r0 * ell)
    return State(y1, y2, z_s, 1.0, 1.0)


def distance_to_point(eq: Equilibrium, x: State) -> float:
    """Max-norm distance between a state and an isolated fixed point."""
    e = eq.point
    return max(abs(x.y1 - e.y1), abs(x.y2 - e.y2), abs(x.z_s - e.z_s),
               abs(x.z1 - e.z1), abs(x.z2 - e.z2))


def _golden_min(f, lo: float, hi: float, iters: int = 120) -> tuple[float, float]:
    """Golden-section minimizer for a unimodal scalar function on [lo, hi]."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    xm = 0.5 * (a + b)
    return xm, f(xm)


def distance_to_line(line: EquilibriumLine, x: State, grid: int = 201) -> float:
    """Max-norm distance from a state to the line's constraint set.

    Minimizes over the line parameter with a coarse grid followed by a
    golden-section refinement of the best bracket.
    """
    lo, hi = line.param_range
    if line.kind == "LS":
        span = hi - lo
        lo, hi = lo + 1e-12 * span, hi - 1e-12 * span

    def dist(y1: float) -> float:
        return distance_to_point(
            Equilibrium(line.kind, line.point_at(y1), True, ()), x)

    best_i, best_v = 0, math.inf
    ts = [lo + (hi - lo) * k / (grid - 1) for k in range(grid)]
    for i, t in enumerate(ts):
        v = dist(t)
        if v < best_v:
            best_i, best_v = i, v
    a = ts[max(best_i - 1, 0)]
    b = ts[min(best_i + 1, grid - 1)]
    if a == b:
        return best_v
    _, refined = _golden_min(dist, a, b)
    return min(best_v, refined)

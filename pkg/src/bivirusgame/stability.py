"""Analytic Jacobians, eigenvalues, and stability classification.

Every fixed point (or line of fixed points) is classified twice:

* numerically, from the eigenvalues of the analytic 5x5 Jacobian, and
* in closed form, from parameter inequalities tied to that Jacobian's
  structure (diagonal at the disease-free points, upper triangular at
  the unilateral points, block triangular on the coexistence lines).

The two verdicts are cross-checked; ``agreement`` treats a closed-form
"inconclusive" as compatible with any numeric outcome.  Lines of
equilibria carry a structural zero eigenvalue along the line direction,
so a "stable" line means exactly one zero mode and four eigenvalues with
negative real part at every sampled point.

The closed-form verdicts follow the Jacobian diagonals exactly.  Two
stated shortcut clauses for instability of the unilateral points (a bare
threshold on the competing strain's rates, and a distancing-cost bound
with a mismatched power of q) do not match the corresponding Jacobian
entries; they are evaluated and reported with a ``stated:`` prefix, but
the verdict is driven by the sign of the actual diagonal entries (the
growth-rate ordering beta/delta of the two strains, and the correctly
scaled cost threshold).  Reports carry a note whenever a stated clause
disagrees with the verdict-driving condition.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .equilibria import (Condition, Equilibrium, EquilibriumLine,
                         reproduction_numbers)
from .model import ModelParams, State, validate_params

#: 5x5 real matrices are plain float64 arrays in state order (y1, y2, z_s, z1, z2).
Matrix5 = np.ndarray

#: Real parts within this band count as zero modes by default.
ZERO_TOL = 1e-9

STABLE = "stable"
UNSTABLE = "unstable"
MARGINAL = "marginal"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class StabilityReport:
    """Eigenvalue-based and closed-form verdicts for one equilibrium.

    ``conditions`` lists every closed-form inequality with its margin;
    labels are prefixed with the verdict side they support ("stable:",
    "unstable:") or with "stated:" for report-only clauses.
    """

    kind: str
    eigenvalues: tuple[complex, ...]
    numeric_verdict: str
    zero_modes: int
    closed_form_verdict: Optional[str]
    conditions: tuple[Condition, ...]
    agreement: bool
    notes: str = ""


def jacobian(p: ModelParams, x: State) -> Matrix5:
    """Closed-form Jacobian of the vector field at ``x``."""
    y1, y2, z_s, z1, z2 = x.y1, x.y2, x.z_s, x.z1, x.z2
    b1, b2 = p.beta1, p.beta2
    s = 1.0 - y1 - y2
    omq = 1.0 - p.q
    u = 1.0 - z_s * omq
    v1 = 1.0 - z1 * omq
    v2 = 1.0 - z2 * omq
    h1 = -p.delta1 + b1 * s * u * v1
    h2 = -p.delta2 + b2 * s * u * v2
    hs = 2.0 * (p.r1 * y1 + p.r2 * y2) - p.c_d

    j = np.zeros((5, 5), dtype=np.float64)
    j[0, 0] = h1 - y1 * b1 * u * v1
    j[0, 1] = -y1 * b1 * u * v1
    j[0, 2] = -y1 * b1 * s * v1 * omq
    j[0, 3] = -y1 * b1 * s * u * omq
    j[1, 0] = -y2 * b2 * u * v2
    j[1, 1] = h2 - y2 * b2 * u * v2
    j[1, 2] = -y2 * b2 * s * v2 * omq
    j[1, 4] = -y2 * b2 * s * u * omq
    w = z_s * (1.0 - z_s)
    j[2, 0] = w * 2.0 * p.r1
    j[2, 1] = w * 2.0 * p.r2
    j[2, 2] = (1.0 - 2.0 * z_s) * hs
    j[3, 3] = (1.0 - 2.0 * z1) * (p.c1 - p.c_d)
    j[4, 4] = (1.0 - 2.0 * z2) * (p.c2 - p.c_d)
    return j


def eigenvalues(m: Matrix5) -> np.ndarray:
    """Spectrum of a 5x5 matrix, sorted by real part (descending).

    Uses the standard balanced-Hessenberg + shifted-QR dense solver; the
    contract is the characteristic-polynomial residual, checked in the
    test suite, not the method.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.shape != (5, 5):
        raise ValueError(f"expected a 5x5 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    try:
        eig = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK cap
        raise ArithmeticError(f"eigenvalue iteration did not converge: {exc}") from exc
    order = np.lexsort((-eig.imag, -eig.real))
    return eig[order]


def _numeric_verdict(eig: np.ndarray, zero_tol: float) -> tuple[str, int]:
    re = eig.real
    zero_modes = int(np.sum(np.abs(re) <= zero_tol))
    if np.any(re > zero_tol):
        return UNSTABLE, zero_modes
    if np.all(re < -zero_tol):
        return STABLE, zero_modes
    return MARGINAL, zero_modes


def _strict(label: str, margin: float) -> Condition:
    return Condition(label, margin > 0.0, margin)


def _cost_precondition(p: ModelParams) -> Condition:
    return _strict("c_i > c_d for i=1,2", min(p.c1, p.c2) - p.c_d)


def _closed_form_point(p: ModelParams, kind: str):
    """Closed-form verdict, condition list, and notes for one point kind."""
    q = p.q
    pre = _cost_precondition(p)
    notes = []

    if kind == "DFE0":
        stable = [_strict("stable: delta1 > q*beta1", p.delta1 - q * p.beta1),
                  _strict("stable: delta2 > q*beta2", p.delta2 - q * p.beta2)]
        unstable = [_strict("unstable: delta1 < q*beta1", q * p.beta1 - p.delta1),
                    _strict("unstable: delta2 < q*beta2", q * p.beta2 - p.delta2)]
        stated = []
    elif kind == "DFE1":
        # The distancing share of susceptibles always grows back from 1
        # when nobody is infected: eigenvalue +c_d.
        cond = _strict("unstable: c_d > 0", p.c_d)
        verdict = UNSTABLE if cond.holds else INCONCLUSIVE
        return verdict, (cond,), ""
    else:
        i = int(kind[1])
        j = 3 - i
        beta_i, delta_i, r_i = ((p.beta1, p.delta1, p.r1) if i == 1 else
                                (p.beta2, p.delta2, p.r2))
        beta_j, delta_j = (p.beta1, p.delta1) if j == 1 else (p.beta2, p.delta2)
        growth = _strict(
            f"unstable: beta{j}/delta{j} > beta{i}/delta{i}",
            beta_j / delta_j - beta_i / delta_i)

        if kind.endswith("0"):
            yi = 1.0 - delta_i / (q * beta_i)
            stable = [
                _strict(f"stable: q*beta{i}/delta{i} > 1", q * beta_i / delta_i - 1.0),
                _strict(f"stable: q*beta{j}/delta{j} < 1", 1.0 - q * beta_j / delta_j),
                _strict(f"stable: c_d/(2*r{i}) > 1 - delta{i}/(q*beta{i})",
                        p.c_d / (2.0 * r_i) - yi),
            ]
            cost = _strict(f"unstable: c_d < 2*r{i}*(1 - delta{i}/(q*beta{i}))",
                           2.0 * r_i * yi - p.c_d)
            unstable = [growth, cost]
            stated = [_strict(f"stated: delta{j} < q*beta{j}",
                              q * beta_j - delta_j)]
            if stated[0].holds and not growth.holds:
                notes.append(
                    f"stated threshold delta{j} < q*beta{j} holds but the "
                    f"growth-rate ordering beta{j}/delta{j} > beta{i}/delta{i} "
                    "does not; the verdict follows the ordering")
        elif kind.endswith("1"):
            q2 = q * q
            yi = 1.0 - delta_i / (q2 * beta_i)
            stable = [
                _strict(f"stable: q^2*beta{i}/delta{i} > 1", q2 * beta_i / delta_i - 1.0),
                _strict(f"stable: q^2*beta{j}/delta{j} < 1", 1.0 - q2 * beta_j / delta_j),
                _strict(f"stable: c_d/(2*r{i}) < 1 - delta{i}/(q^2*beta{i})",
                        yi - p.c_d / (2.0 * r_i)),
            ]
            cost = _strict(f"unstable: c_d > 2*r{i}*(1 - delta{i}/(q^2*beta{i}))",
                           p.c_d - 2.0 * r_i * yi)
            unstable = [growth, cost]
            stated = [
                _strict(f"stated: delta{j} < q^2*beta{j}", q2 * beta_j - delta_j),
                _strict(f"stated: c_d < 2*r{i}*(1 - delta{i}/(q*beta{i}))",
                        2.0 * r_i * (1.0 - delta_i / (q * beta_i)) - p.c_d),
            ]
            if stated[0].holds and not growth.holds:
                notes.append(
                    f"stated threshold delta{j} < q^2*beta{j} holds but the "
                    f"growth-rate ordering beta{j}/delta{j} > beta{i}/delta{i} "
                    "does not; the verdict follows the ordering")
            if stated[1].holds and all(c.holds for c in stable):
                notes.append(
                    "stated distancing-cost clause (power q) is satisfied "
                    "together with the full stability chain (power q^2); the "
                    "clauses contradict and the verdict follows the chain")
        else:  # UiS: partial distancing, verdict by growth-rate ordering.
            stable = [_strict(
                f"stable: beta{i}/delta{i} > beta{j}/delta{j}",
                beta_i / delta_i - beta_j / delta_j)]
            unstable = [growth]
            stated = []

    if all(c.holds for c in stable) and pre.holds:
        verdict = STABLE
    elif any(c.holds for c in unstable):
        verdict = UNSTABLE
    else:
        verdict = INCONCLUSIVE
        if all(c.holds for c in stable) and not pre.holds:
            notes.append("stability chain holds but c_i > c_d fails; the "
                         "closed-form criteria assume it")

    conditions = tuple(stable) + tuple(unstable) + tuple(stated) + (pre,)
    return verdict, conditions, "; ".join(notes)


def classify_point(p: ModelParams, eq: Equilibrium,
                   zero_tol: float = ZERO_TOL) -> StabilityReport:
    """Classify one existing isolated fixed point.

    The numeric verdict comes from the eigenvalues of the analytic
    Jacobian at the point; the closed-form verdict from the parameter
    conditions matching the equilibrium kind.
    """
    validate_params(p).raise_if_errors()
    if not eq.exists:
        raise ValueError(f"{eq.kind} does not exist for these parameters")
    eig = eigenvalues(jacobian(p, eq.point))
    numeric, zero_modes = _numeric_verdict(eig, zero_tol)
    closed, conditions, notes = _closed_form_point(p, eq.kind)
    agreement = closed == INCONCLUSIVE or closed == numeric
    return StabilityReport(eq.kind, tuple(eig), numeric, zero_modes,
                           closed, conditions, agreement, notes)


def _closed_form_line(p: ModelParams, line: EquilibriumLine):
    pre = _cost_precondition(p)
    if line.kind == "LS":
        cond = Condition("no closed-form criterion for the mixed-distancing line",
                         False, 0.0)
        return INCONCLUSIVE, (cond, pre), (
            "verdict is numeric-only; no closed-form stability criterion is "
            "established for this line")

    q = p.q
    if line.kind == "L0":
        level = 1.0 - 1.0 / (q * line.r0)
        stable = [_strict("stable: 1 - 1/(q*R0) < c_d/(2*r1)",
                          p.c_d / (2.0 * p.r1) - level),
                  _strict("stable: 1 - 1/(q*R0) < c_d/(2*r2)",
                          p.c_d / (2.0 * p.r2) - level)]
    else:
        level = 1.0 - 1.0 / (q * q * line.r0)
        stable = [_strict("stable: 1 - 1/(q^2*R0) > c_d/(2*r1)",
                          level - p.c_d / (2.0 * p.r1)),
                  _strict("stable: 1 - 1/(q^2*R0) > c_d/(2*r2)",
                          level - p.c_d / (2.0 * p.r2))]
    unstable = [Condition("unstable: " + c.label[len("stable: "):] + " reversed",
                          (not c.holds) and c.margin < 0.0, -c.margin)
                for c in stable]
    if all(c.holds for c in stable) and pre.holds:
        verdict = STABLE
    elif any(c.holds for c in unstable):
        verdict = UNSTABLE
    else:
        verdict = INCONCLUSIVE
    return verdict, tuple(stable) + tuple(unstable) + (pre,), ""


def classify_line(p: ModelParams, line: EquilibriumLine, samples: int = 11,
                  zero_tol: float = ZERO_TOL) -> StabilityReport:
    """Classify a line of fixed points from sampled Jacobians.

    At each of ``samples`` points across the parameter range the spectrum
    must show exactly one zero mode (the line direction) and four
    eigenvalues with negative real part for a "stable" verdict; any
    sampled eigenvalue with positive real part makes the line "unstable".
    The reported eigenvalues are those of the middle sample.
    """
    validate_params(p).raise_if_errors()
    if not line.exists:
        raise ValueError(f"line {line.kind} does not exist for these parameters")

    points = line.sample(samples)
    all_stable = True
    any_positive = False
    max_zero_modes = 0
    mid_eig: tuple[complex, ...] = ()
    for k, x in enumerate(points):
        eig = eigenvalues(jacobian(p, x))
        re = eig.real
        zero_modes = int(np.sum(np.abs(re) <= zero_tol))
        negatives = int(np.sum(re < -zero_tol))
        if np.any(re > zero_tol):
            any_positive = True
        if not (zero_modes == 1 and negatives == 4):
            all_stable = False
        max_zero_modes = max(max_zero_modes, zero_modes)
        if k == len(points) // 2:
            mid_eig = tuple(eig)

    if any_positive:
        numeric = UNSTABLE
    elif all_stable:
        numeric = STABLE
    else:
        numeric = MARGINAL
    closed, conditions, notes = _closed_form_line(p, line)
    agreement = closed == INCONCLUSIVE or closed == numeric
    return StabilityReport(line.kind, mid_eig, numeric, max_zero_modes,
                           closed, conditions, agreement, notes)


def l0_form_jacobian(p: ModelParams, y1: float, y2: float) -> Matrix5:
    """Simplified Jacobian form on the no-distancing coexistence line.

    Valid at states (y1, y2, 0, 1, 1) satisfying beta_i*(1-y1-y2)*q = delta_i,
    where the diagonal infection terms vanish; taken here as a formula of
    (y1, y2) alone so it can also be evaluated at matched points of the
    full-distancing line.
    """
    s = 1.0 - y1 - y2
    omq = 1.0 - p.q
    j = np.zeros((5, 5), dtype=np.float64)
    j[0, 0] = -p.beta1 * y1 * p.q
    j[0, 1] = -p.beta1 * y1 * p.q
    j[0, 2] = -p.beta1 * y1 * s * omq * p.q
    j[0, 3] = -p.beta1 * y1 * s * omq
    j[1, 0] = -p.beta2 * y2 * p.q
    j[1, 1] = -p.beta2 * y2 * p.q
    j[1, 2] = -p.beta2 * y2 * s * omq * p.q
    j[1, 4] = -p.beta2 * y2 * s * omq
    j[2, 2] = 2.0 * (p.r1 * y1 + p.r2 * y2) - p.c_d
    j[3, 3] = -(p.c1 - p.c_d)
    j[4, 4] = -(p.c2 - p.c_d)
    return j


#: Entries of the 5x5 grid that determine the spectrum under the block
#: upper-triangular partition (everything except the 2x3 coupling block).
_SPECTRAL_ENTRIES = tuple((i, j) for i in range(5) for j in range(5)
                          if not (i < 2 and j >= 2))
_COUPLING_ENTRIES = tuple((i, j) for i in range(2) for j in range(2, 5))


@dataclass(frozen=True)
class RelationCheck:
    """Result of comparing the two coexistence-line Jacobian forms.

    ``holds_on_spectral_blocks`` covers the 2x2 infection block, the
    lower-right 3x3 block, and the structural zeros below them -- the
    entries that determine the spectrum.  ``mismatched_entries`` lists
    coupling-block entries where the stated diagonal-scaling relation
    fails (they deviate by a factor q).
    """

    holds_on_spectral_blocks: bool
    holds_entrywise: bool
    mismatched_entries: tuple[tuple[int, int], ...]
    max_spectral_rel_error: float
    samples: int

    def __bool__(self) -> bool:
        return self.holds_on_spectral_blocks


def _compare_line_jacobians(actual: Matrix5, predicted: Matrix5,
                            rtol: float) -> tuple[bool, tuple, float]:
    scale = max(np.max(np.abs(actual)), 1e-30)
    spectral_ok = True
    max_err = 0.0
    for (i, j) in _SPECTRAL_ENTRIES:
        denom = max(abs(actual[i, j]), abs(predicted[i, j]), 1e-6 * scale)
        err = abs(actual[i, j] - predicted[i, j]) / denom
        max_err = max(max_err, err)
        if err > rtol:
            spectral_ok = False
    mismatched = []
    for (i, j) in _COUPLING_ENTRIES:
        denom = max(abs(actual[i, j]), abs(predicted[i, j]), 1e-6 * scale)
        if abs(actual[i, j] - predicted[i, j]) / denom > rtol:
            mismatched.append((i, j))
    return spectral_ok, tuple(mismatched), max_err


def check_l1_l0_relation(p: ModelParams, samples: int = 10,
                         rtol: float = 1e-12) -> RelationCheck:
    """Verify the diagonal-scaling relation between the two line Jacobians.

    The full-distancing line's Jacobian equals diag(q, q, -1, 1, 1) times
    the no-distancing form evaluated at the same (y1, y2) -- on the blocks
    that carry the spectrum.  The relation is checked entrywise at
    ``samples`` points across the line; the two infection/distancing
    coupling entries in column 2 deviate from the stated scaling by a
    factor q and are reported in ``mismatched_entries``.
    """
    rn = reproduction_numbers(p)
    if not rn.equal:
        raise ValueError("relation requires matching reproduction ratios")
    if not p.q * p.q * rn.rho1 > 1.0:
        raise ValueError("relation requires q^2*R0 > 1 so both line forms exist")

    level1 = 1.0 - 1.0 / (p.q * p.q * rn.rho1)
    d = np.diag([p.q, p.q, -1.0, 1.0, 1.0])
    spectral_ok = True
    entrywise_ok = True
    mismatched: set[tuple[int, int]] = set()
    max_err = 0.0
    for k in range(samples):
        t = (k + 0.5) / samples
        y1 = t * level1
        y2 = level1 - y1
        actual = jacobian(p, State(y1, y2, 1.0, 1.0, 1.0))
        predicted = d @ l0_form_jacobian(p, y1, y2)
        ok, bad, err = _compare_line_jacobians(actual, predicted, rtol)
        spectral_ok = spectral_ok and ok
        entrywise_ok = entrywise_ok and ok and not bad
        mismatched.update(bad)
        max_err = max(max_err, err)
    return RelationCheck(spectral_ok, entrywise_ok,
                         tuple(sorted(mismatched)), max_err, samples)

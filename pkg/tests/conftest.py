"""Shared helpers: seeded random parameter and state generators."""

import numpy as np

from bivirusgame import ModelParams, State


def random_params(rng, equal_r0=False):
    """Random parameter set satisfying all hard and soft validity checks."""
    beta1 = rng.uniform(0.2, 2.0)
    delta1 = rng.uniform(0.1, 1.2)
    if equal_r0:
        delta2 = rng.uniform(0.1, 1.2)
        beta2 = (beta1 / delta1) * delta2
    else:
        beta2 = rng.uniform(0.2, 2.0)
        delta2 = rng.uniform(0.1, 1.2)
    c_d = rng.uniform(0.05, 1.0)
    r1 = rng.uniform(0.1, 1.2)
    return ModelParams(
        beta1=beta1, beta2=beta2, delta1=delta1, delta2=delta2,
        r1=r1, r2=r1 + rng.uniform(0.05, 1.0),
        c1=c_d + rng.uniform(0.05, 1.5), c2=c_d + rng.uniform(0.05, 1.5),
        c_d=c_d, q=rng.uniform(0.1, 0.9))


def random_state(rng):
    """State drawn from the whole invariant region (boundaries included)."""
    y = rng.dirichlet((1.0, 1.0, 1.0))
    return State(float(y[0]), float(y[1]),
                 float(rng.uniform()), float(rng.uniform()), float(rng.uniform()))


def interior_state(rng, margin=0.03):
    """State strictly inside the region, away from every boundary face."""
    y = rng.dirichlet((1.0, 1.0, 1.0))
    scale = 1.0 - 3.0 * margin
    return State(margin + scale * float(y[0]), margin + scale * float(y[1]),
                 float(rng.uniform(margin, 1.0 - margin)),
                 float(rng.uniform(margin, 1.0 - margin)),
                 float(rng.uniform(margin, 1.0 - margin)))


def states_equal(a: State, b: State, tol: float) -> bool:
    return max(abs(a.y1 - b.y1), abs(a.y2 - b.y2), abs(a.z_s - b.z_s),
               abs(a.z1 - b.z1), abs(a.z2 - b.z2)) <= tol


def max_norm_to(x: State, target) -> float:
    t = np.asarray(target, dtype=float)
    return float(np.max(np.abs(x.as_array() - t)))


def nearest_enumerated_distance(p: ModelParams, roots: np.ndarray) -> np.ndarray:
    """Max-norm distance from scan roots (y1, y2, z_s) to the enumerated set.

    Exact segment projection for the constant-distancing lines; for the
    mixed line the root's own y1 parameterizes an upper-bound candidate.
    """
    from bivirusgame import coexistence_lines, enumerate_isolated

    best = np.full(len(roots), np.inf)
    for e in enumerate_isolated(p):
        if e.exists:
            pt = np.array([e.point.y1, e.point.y2, e.point.z_s])
            best = np.minimum(best, np.max(np.abs(roots - pt), axis=1))
    for line in coexistence_lines(p):
        if not line.exists:
            continue
        lo, hi = line.param_range
        a, b, zs = roots[:, 0], roots[:, 1], roots[:, 2]
        if line.kind in ("L0", "L1"):
            level = hi
            t = np.clip((a - b + level) / 2.0, lo, hi)
            z_ref = 0.0 if line.kind == "L0" else 1.0
            d = np.maximum.reduce([np.abs(a - t), np.abs(b - (level - t)),
                                   np.abs(zs - z_ref)])
        else:
            span = hi - lo
            t = np.clip(a, lo + 1e-12 * span, hi - 1e-12 * span)
            y2c = p.c_d / (2.0 * p.r2) - (p.r1 / p.r2) * t
            ell = 1.0 - t - y2c
            zc = 1.0 / (1.0 - p.q) - 1.0 / (p.q * (1.0 - p.q) * line.r0 * ell)
            d = np.maximum.reduce([np.abs(a - t), np.abs(b - y2c),
                                   np.abs(zs - zc)])
        best = np.minimum(best, d)
    return best

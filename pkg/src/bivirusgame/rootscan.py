"""Brute-force fixed-point scan on the full-distancing-when-infected slice.

Independent cross-check for the closed-form enumeration: on the slice
z1 = z2 = 1 the last two equations vanish identically, leaving a reduced
3-dimensional field over (y1, y2, z_s).  A dense grid of starting points
is driven by a damped pseudo-inverse Newton iteration (projected back
into the box), and every iterate that lands on a root within tolerance is
reported.  Lines of fixed points appear as many nearby roots; the scan
makes no use of the closed forms, only of the vector field itself.
"""

from __future__ import annotations

import numpy as np

from .model import ModelParams, validate_params


def _reduced_field(p: ModelParams, x: np.ndarray) -> np.ndarray:
    y1, y2, zs = x[:, 0], x[:, 1], x[:, 2]
    s = 1.0 - y1 - y2
    u = 1.0 - zs * (1.0 - p.q)
    h1 = -p.delta1 + p.beta1 * s * u * p.q
    h2 = -p.delta2 + p.beta2 * s * u * p.q
    hs = 2.0 * (p.r1 * y1 + p.r2 * y2) - p.c_d
    return np.stack([y1 * h1, y2 * h2, zs * (1.0 - zs) * hs], axis=1)


def _reduced_jacobian(p: ModelParams, x: np.ndarray) -> np.ndarray:
    y1, y2, zs = x[:, 0], x[:, 1], x[:, 2]
    s = 1.0 - y1 - y2
    omq = 1.0 - p.q
    u = 1.0 - zs * omq
    h1 = -p.delta1 + p.beta1 * s * u * p.q
    h2 = -p.delta2 + p.beta2 * s * u * p.q
    hs = 2.0 * (p.r1 * y1 + p.r2 * y2) - p.c_d
    w = zs * (1.0 - zs)

    j = np.empty((x.shape[0], 3, 3))
    j[:, 0, 0] = h1 - y1 * p.beta1 * u * p.q
    j[:, 0, 1] = -y1 * p.beta1 * u * p.q
    j[:, 0, 2] = -y1 * p.beta1 * s * p.q * omq
    j[:, 1, 0] = -y2 * p.beta2 * u * p.q
    j[:, 1, 1] = h2 - y2 * p.beta2 * u * p.q
    j[:, 1, 2] = -y2 * p.beta2 * s * p.q * omq
    j[:, 2, 0] = w * 2.0 * p.r1
    j[:, 2, 1] = w * 2.0 * p.r2
    j[:, 2, 2] = (1.0 - 2.0 * zs) * hs
    return j


def _project_box(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, 1.0)
    tot = x[:, 0] + x[:, 1]
    over = tot > 1.0
    if np.any(over):
        x[over, 0] /= tot[over]
        x[over, 1] /= tot[over]
    return x


def scan_fixed_points(p: ModelParams, grid: int = 21, iters: int = 80,
                      damping: float = 0.85, tol: float = 1e-11) -> np.ndarray:
    """Find fixed points of the reduced slice by dense-grid Newton descent.

    Returns an array of shape (k, 3) with the (y1, y2, z_s) coordinates of
    every start that converged to a root (max-norm residual below ``tol``
    inside the box).  Roots on a line of fixed points are returned once
    per converged start.
    """
    validate_params(p).raise_if_errors()
    ys = np.linspace(0.0, 1.0, grid)
    g1, g2, g3 = np.meshgrid(ys, ys, ys, indexing="ij")
    x = np.stack([g1.ravel(), g2.ravel(), g3.ravel()], axis=1)
    x = x[x[:, 0] + x[:, 1] <= 1.0]

    for _ in range(iters):
        f = _reduced_field(p, x)
        j = _reduced_jacobian(p, x)
        step = np.einsum("nij,nj->ni", np.linalg.pinv(j), f)
        x = _project_box(x - damping * step)

    residual = np.max(np.abs(_reduced_field(p, x)), axis=1)
    return x[residual < tol]

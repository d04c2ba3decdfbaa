"""Generalized cluster centers: the q-norm average-distance minimizer.

For a point cloud Z = {z_1..z_m} and exponent q > 2, the center is the unique
minimizer of

    D_q(z; Z) = (1/(m*q)) * sum_i ||z - z_i||^q .

At q = 2 this is the arithmetic mean; as q grows it approaches the 1-center
(minimum enclosing ball center).  The minimizer is found by accelerated
gradient descent with step 1/beta_bar, where beta_bar bounds the largest
Hessian eigenvalue of D_q over the convex hull of Z.  All internal arithmetic
runs on points rescaled by the cluster spread so large coordinates or
exponents do not overflow.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._parallel import dist_pow
from .errors import NumericFailure


@dataclass
class AgdConfig:
    """Settings for the accelerated gradient center solver.

    eps_in is the stopping tolerance on successive-iterate distance; when
    None it defaults to 1e-4 times the cluster spread (twice the largest
    distance from the centroid, a cheap diameter estimate).
    """

    q: float = 10.0
    eps_in: float | None = None
    max_iter: int = 1000


def _check_q(q: float):
    if not q > 2.0:
        raise ValueError("q must exceed 2 (the q = 2 center is the arithmetic mean)")


def _as_cloud(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError("points must be a non-empty (m, p) array")
    return pts


def dq_objective(z, points, q: float) -> float:
    """D_q(z; Z) = (1/(m q)) sum ||z - z_i||^q, overflow-guarded."""
    _check_q(q)
    pts = _as_cloud(points)
    z = np.asarray(z, dtype=float)
    diff = z[None, :] - pts
    d2 = np.einsum("ij,ij->i", diff, diff)
    top = float(d2.max())
    if top == 0.0:
        return 0.0
    val = top ** (q / 2.0) * float(np.mean(dist_pow(d2 / top, q))) / q
    if not np.isfinite(val):
        raise NumericFailure("objective overflowed; rescale coordinates to a moderate range")
    return val


def dq_gradient(z, points, q: float) -> np.ndarray:
    """Gradient of D_q at z: (1/m) sum ||z - z_i||^(q-2) (z - z_i)."""
    _check_q(q)
    pts = _as_cloud(points)
    z = np.asarray(z, dtype=float)
    diff = z[None, :] - pts
    d2 = np.einsum("ij,ij->i", diff, diff)
    top = float(d2.max())
    if top == 0.0:
        return np.zeros_like(z)
    w = dist_pow(d2 / top, q - 2.0)
    grad = top ** ((q - 2.0) / 2.0) * (w @ diff) / pts.shape[0]
    if not np.all(np.isfinite(grad)):
        raise NumericFailure("gradient overflowed; rescale coordinates to a moderate range")
    return grad


def _mean_dist_pow(z_rows: np.ndarray, pts: np.ndarray, s: float) -> np.ndarray:
    """(1/m) sum_i ||row - z_i||^s for each query row."""
    d2 = (
        np.einsum("ij,ij->i", z_rows, z_rows)[:, None]
        - 2.0 * (z_rows @ pts.T)
        + np.einsum("ij,ij->i", pts, pts)[None, :]
    )
    np.maximum(d2, 0.0, out=d2)
    return dist_pow(d2, s).mean(axis=1)


def _max_mean_dist_pow(pts: np.ndarray, s: float) -> float:
    """max_j (1/m) sum_i ||z_j - z_i||^s.

    The per-point sum is a convex function of the query, so its maximum over
    the cloud is attained at a vertex of the convex hull; for p <= 3 and
    large m the search is restricted to hull vertices.
    """
    m, p = pts.shape
    rows = pts
    if p <= 3 and m >= 256:
        try:
            from scipy.spatial import ConvexHull

            rows = pts[ConvexHull(pts).vertices]
        except Exception:
            rows = pts
    best = -np.inf
    step = max(1, 10**7 // max(m, 1))
    for lo in range(0, rows.shape[0], step):
        vals = _mean_dist_pow(rows[lo : lo + step], pts, s)
        best = max(best, float(vals.max()))
    return best


def smoothness_constants(points, q: float) -> tuple[float, float]:
    """Hessian eigenvalue bounds (beta_bar, mu_bar) of D_q over conv(Z).

    beta_bar = (q-1) * max_j (1/m) sum_i ||z_j - z_i||^(q-2) bounds the
    largest eigenvalue.  mu_bar = (1/m) sum_i ||C - z_i||^(q-2), with C the
    (q-2)-center, bounds the smallest; in one dimension the full (q-1)
    factor is kept, where it equals the exact Hessian minimum (the rank-one
    curvature term that must be dropped in higher dimensions is the whole
    Hessian there).  A single cloud point gives (0, 0), the trivial-center
    signal.  C is the arithmetic mean when q = 4 and is otherwise located by
    a long accelerated gradient run: any slack in C inflates mu_bar above
    the true Hessian minimum and breaks the lower bound, while the flatness
    of the objective at its minimizer makes an accurate C essentially free.
    """
    if q < 4.0:
        raise ValueError("smoothness constants need q >= 4 (the center recursion grounds at the mean)")
    pts = _as_cloud(points)
    if pts.shape[0] == 1:
        return 0.0, 0.0
    scale = _spread(pts)
    if scale == 0.0:
        return 0.0, 0.0
    c = pts.mean(axis=0)
    work = (pts - c) / scale
    s = q - 2.0
    beta = (q - 1.0) * _max_mean_dist_pow(work, s) * scale**s
    if q == 4.0:
        center = np.zeros(pts.shape[1])
    else:
        center = _agd(work, q - 2.0, eps=1e-12, max_iter=4000)
    factor = (q - 1.0) if pts.shape[1] == 1 else 1.0
    mu = factor * float(_mean_dist_pow(center[None, :], work, s)[0]) * scale**s
    if not (np.isfinite(beta) and np.isfinite(mu)):
        raise NumericFailure("smoothness constants overflowed; rescale coordinates")
    return float(beta), float(mu)


def _spread(pts: np.ndarray) -> float:
    c = pts.mean(axis=0)
    diff = pts - c
    return float(np.sqrt(np.einsum("ij,ij->i", diff, diff).max()))


def _agd(pts: np.ndarray, q: float, eps: float, max_iter: int) -> np.ndarray:
    """Accelerated gradient descent on D_q for a centered, unit-spread cloud.

    Starts from the arithmetic mean, steps by 1/beta_bar, extrapolates with
    the usual momentum recursion, and stops when successive extrapolated
    iterates move less than eps on three consecutive iterations.  The stop is
    not consulted before sqrt((q-1) 2^(q-2)) iterations: that is the square
    root of the worst condition number of D_q over unit-spread clouds, the
    horizon momentum needs before movement sizes say anything about
    convergence.  Early steps are gradient/beta_bar, which on asymmetric
    clouds sits far below eps while the iterate is still essentially the
    starting mean; without the gate the loop would quit there.  Returns the
    last gradient-step point, which stays inside the convex hull of the
    cloud.
    """
    m = pts.shape[0]
    s = q - 2.0
    beta = (q - 1.0) * _max_mean_dist_pow(pts, s)
    if beta <= 0.0 or not np.isfinite(beta):
        return pts[0].copy()
    inv = 1.0 / (m * beta)
    half = 0.5 * s
    int_half = int(half) if half == int(half) else None
    eps2 = eps * eps
    min_iter = int(np.ceil(np.sqrt((q - 1.0) * 2.0 ** min(q - 2.0, 60.0))))
    z = pts.mean(axis=0)
    u = z.copy()
    lam = 1.0  # lambda_1
    calm = 0
    for t in range(max_iter):
        diff = z - pts
        d2 = np.einsum("ij,ij->i", diff, diff)
        if int_half is None:
            w = np.power(d2, half)
        else:  # exact integer power by repeated squaring
            w = np.ones_like(d2) if int_half == 0 else None
            base, e = d2, int_half
            while e:
                if e & 1:
                    w = base if w is None else w * base
                e >>= 1
                if e:
                    base = base * base
        u_next = z - (w @ diff) * inv
        lam_next = 0.5 * (1.0 + np.sqrt(1.0 + 4.0 * lam * lam))
        gamma = (1.0 - lam) / lam_next
        z_next = (1.0 - gamma) * u_next + gamma * u
        dz = z_next - z
        u, z, lam = u_next, z_next, lam_next
        calm = calm + 1 if float(dz @ dz) < eps2 else 0
        if calm >= 3 and t >= min_iter:
            break
    if not np.all(np.isfinite(u)):
        raise NumericFailure("center iteration diverged; rescale coordinates")
    return u


def cq_center(points, cfg: AgdConfig | None = None) -> np.ndarray:
    """Minimizer of D_q over the cloud, by accelerated gradient descent."""
    cfg = cfg or AgdConfig()
    _check_q(cfg.q)
    pts = _as_cloud(points)
    if pts.shape[0] == 1:
        return pts[0].copy()
    scale = _spread(pts)
    if scale == 0.0:
        return pts[0].copy()
    c = pts.mean(axis=0)
    work = (pts - c) / scale
    eps = cfg.eps_in if cfg.eps_in is not None else 1e-4 * 2.0 * scale
    center = _agd(work, cfg.q, eps=eps / scale, max_iter=cfg.max_iter)
    return center * scale + c


def kappa_diagnostic(points, q: float) -> float:
    """Spread ratio max_j D_q(z_j; Z) / D_q(C_q(Z); Z); 1 for a single point.

    Quadratic in the cloud size; intended for diagnostics, not hot loops.
    """
    _check_q(q)
    pts = _as_cloud(points)
    scale = _spread(pts)
    if pts.shape[0] == 1 or scale == 0.0:
        return 1.0
    work = (pts - pts.mean(axis=0)) / scale  # ratio is scale-invariant
    center = _agd(work, q, eps=1e-10, max_iter=1000)
    worst = _max_mean_dist_pow(work, q) / q
    at_center = float(_mean_dist_pow(center[None, :], work, q)[0]) / q
    if at_center == 0.0:
        return float(np.inf)
    return float(worst / at_center)

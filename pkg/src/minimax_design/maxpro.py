"""Projection-aware refinement of minimax designs.

Each design point carries a slack: the overall minimax distance d* minus the
point's own worst assigned-candidate distance d_i.  Moving the point anywhere
inside the ball of radius d* - d_i around its current position cannot raise
the minimax distance over the candidate set, so that ball is a free budget
for improving a secondary criterion.  The secondary criterion used here is
the MaxPro measure

    sum_{i<j} 1 / prod_k (m_ik - m_jk)^2

which rewards designs whose points stay apart in every coordinate projection.
Points are refined one at a time in index order, with the slack profile
recomputed before each update so the no-inflation guarantee applies to the
current configuration, not a stale one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._parallel import nearest_assignment
from .lds import CandidateSet
from .mmc import Design
from .region import Region

_COLLIDE_TOL = 1e-12
_NUDGE = 1e-10


@dataclass(eq=False)
class SlackProfile:
    """Per-point worst assigned distances d, overall minimax d*, and the
    farthest assigned candidate (witness) of every design point."""

    d: np.ndarray  # (n,)
    d_star: float
    witness: np.ndarray  # (n, p)


def per_point_minimax(design: Design, candidates: CandidateSet) -> SlackProfile:
    """Worst nearest-assigned candidate distance for every design point.

    A design point whose cluster is empty gets d = 0 and itself as witness.
    d* is the maximum over all candidates, i.e. the minimax criterion on
    this candidate set.
    """
    pts = design.points
    n = pts.shape[0]
    owner, dist = nearest_assignment(candidates.points, pts)
    d = np.zeros(n)
    np.maximum.at(d, owner, dist)
    witness = pts.copy()
    order = np.lexsort((dist, owner))
    tail = order[np.flatnonzero(np.diff(owner[order], append=n + 1))]
    witness[owner[tail]] = candidates.points[tail]
    return SlackProfile(d=d, d_star=float(d.max()) if n else 0.0, witness=witness)


def eps_prop(n_candidates: int, region: Region) -> float:
    """Documented minimax-inflation tolerance for refinement driven by
    candidate-estimated slacks: the candidate resolution N^(-1/p) scaled by
    the region diameter."""
    return float(n_candidates) ** (-1.0 / region.dim) * region.diameter()


def maxpro_criterion(design: Design) -> float:
    """MaxPro criterion sum_{i<j} 1/prod_k (m_ik - m_jk)^2; +inf when two
    points share a coordinate exactly (degenerate projection)."""
    pts = np.asarray(design.points, dtype=float)
    n = pts.shape[0]
    if n < 2:
        return 0.0
    iu, ju = np.triu_indices(n, k=1)
    diff = np.abs(pts[iu] - pts[ju])
    if np.any(diff <= 0.0):
        return np.inf
    logs = -2.0 * np.sum(np.log(diff), axis=1)
    top = logs.max()
    return float(np.exp(top) * np.sum(np.exp(logs - top)))


def _block_eval(m: np.ndarray, others: np.ndarray):
    """Log of the block objective sum_j 1/prod_k (m_k - m_jk)^2 plus its
    softmax weights; returns (+inf, None) on a coordinate collision."""
    diff = m - others
    if np.any(np.abs(diff) <= _COLLIDE_TOL):
        return np.inf, None
    logs = -2.0 * np.sum(np.log(np.abs(diff)), axis=1)
    top = logs.max()
    w = np.exp(logs - top)
    total = w.sum()
    g = top + np.log(total)
    return g, w / total


def _block_grad(m: np.ndarray, others: np.ndarray, w: np.ndarray) -> np.ndarray:
    return -2.0 * (w[:, None] / (m - others)).sum(axis=0)


def _nudge_collisions(m: np.ndarray, others: np.ndarray, scale: float) -> np.ndarray:
    """Push coordinates that lie within 1e-12 of a fixed neighbour's
    coordinate by 1e-10 x scale, away from the neighbour."""
    out = m.copy()
    for _ in range(4):
        diff = out - others
        hit = np.abs(diff) <= _COLLIDE_TOL
        if not np.any(hit):
            return out
        cols = np.flatnonzero(hit.any(axis=0))
        for k in cols:
            rows = np.flatnonzero(hit[:, k])
            sign = 1.0 if diff[rows[0], k] >= 0 else -1.0
            out[k] += sign * _NUDGE * scale
    return out


def _ball_clip(m: np.ndarray, center: np.ndarray, radius: float) -> np.ndarray:
    gap = m - center
    norm = float(np.linalg.norm(gap))
    if norm <= radius or norm == 0.0:
        return m
    return center + gap * (radius / norm)


def _project(m: np.ndarray, center: np.ndarray, radius: float, region: Region):
    """Point of the slack ball that also lies in the region, or None.

    For convex regions one geometric projection suffices (projections are
    non-expansive, so they cannot leave the ball around an interior center);
    the loop covers non-convex polygons, falling back to None when the two
    constraints cannot be reconciled.
    """
    out = m
    for _ in range(8):
        out = _ball_clip(out, center, radius)
        if region.contains(out):
            return out
        out = region.project(out)
    out = _ball_clip(out, center, radius)
    if region.contains(out):
        return out
    return None


def block_refine(
    design: Design,
    i: int,
    slack: SlackProfile,
    region: Region,
    rng: np.random.Generator | None = None,
    n_restarts: int = 5,
    max_iter: int = 60,
) -> np.ndarray:
    """Best replacement for design point i inside its slack ball.

    Minimizes the MaxPro block objective against all other (fixed) points
    over {m : ||m - m_i|| <= d* - d_i} intersected with the region, by
    projected gradient descent with backtracking from the incumbent and
    n_restarts random interior starts.  The incumbent is always a candidate,
    so the returned point is never worse.
    """
    rng = rng or np.random.default_rng(0)
    pts = design.points
    center = pts[i].copy()
    radius = float(slack.d_star - slack.d[i])
    if radius < -1e-12 * max(1.0, slack.d_star):
        raise ValueError("stale slack profile: d* - d_i is negative")
    radius = max(radius, 0.0)
    if radius == 0.0 or pts.shape[0] < 2:
        return center
    others = np.delete(pts, i, axis=0)
    scale = region.diameter()

    def evaluate(m):
        g, w = _block_eval(m, others)
        if not np.isfinite(g):
            fixed = _nudge_collisions(m, others, scale)
            fixed = _project(fixed, center, radius, region)
            if fixed is None:
                return np.inf, None, m
            g, w = _block_eval(fixed, others)
            return g, w, fixed
        return g, w, m

    best_g, _, best_m = evaluate(center)
    starts = [center]
    for _ in range(n_restarts):
        direction = rng.standard_normal(center.shape)
        norm = np.linalg.norm(direction)
        if norm == 0.0:
            continue
        step = radius * rng.random() ** (1.0 / center.size)
        cand = _project(center + direction * (step / norm), center, radius, region)
        if cand is not None:
            starts.append(cand)

    for start in starts:
        m = start.copy()
        g, w, m = evaluate(m)
        if not np.isfinite(g):
            continue
        step = 0.25 * radius
        for _ in range(max_iter):
            grad = _block_grad(m, others, w)
            gnorm = float(np.linalg.norm(grad))
            if gnorm == 0.0 or step < 1e-14 * radius:
                break
            moved = False
            while step >= 1e-14 * radius:
                trial = _project(m - (step / gnorm) * grad, center, radius, region)
                if trial is not None:
                    g_t, w_t, trial = evaluate(trial)
                    if g_t < g - 1e-12:
                        m, g, w = trial, g_t, w_t
                        moved = True
                        break
                step *= 0.5
            if not moved:
                break
            step *= 1.3
        if g < best_g:
            best_g, best_m = g, m
    return best_m


def minimaxpro(
    design: Design,
    candidates: CandidateSet,
    region: Region | None = None,
    max_sweeps: int = 10,
    eps_in: float = 1e-4,
    seed: int = 0,
) -> Design:
    """Refine a design for projected space-filling without raising its
    minimax distance over the candidate set.

    Sweeps points in index order; before each point update the slack profile
    is recomputed so the moving budget reflects the current configuration.
    Stops when a full sweep moves every point less than eps_in, or after
    max_sweeps sweeps.
    """
    region = region or design.region
    pts = design.points.astype(float).copy()
    rng = np.random.default_rng(seed)
    for _ in range(max_sweeps):
        largest_move = 0.0
        for i in range(pts.shape[0]):
            current = Design(points=pts, region=region)
            slack = per_point_minimax(current, candidates)
            new_point = block_refine(current, i, slack, region, rng=rng)
            largest_move = max(largest_move, float(np.linalg.norm(new_point - pts[i])))
            pts[i] = new_point
        if largest_move < eps_in:
            break
    return Design(points=pts, region=region)

"""Minimax clustering: alternate nearest assignment and q-norm center updates.

Each iteration assigns every candidate point to its nearest design point,
replaces each design point by the C_q-center of its cluster, clips the
result into the region, and re-seeds any design point whose cluster came up
empty at the candidate currently farthest from the design (the point
realizing the minimax distance).  The clustering objective

    h_q(D) = (1/N) * sum_j min_i ||y_j - m_i||^q

is non-increasing across iterations up to the tolerance of the inner center
solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._parallel import nearest_assignment
from .cqcenter import AgdConfig, cq_center
from .lds import CandidateSet
from .region import Region


@dataclass(eq=False)
class Design:
    """An unordered set of n design points inside a region."""

    points: np.ndarray
    region: Region

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(eq=False)
class Assignment:
    """Nearest-design-point index for every candidate, plus cluster sizes."""

    owner: np.ndarray
    cluster_sizes: np.ndarray


def same_point_set(a: np.ndarray, b: np.ndarray, tol: float = 1e-12) -> bool:
    """Set equality of two point collections under coordinate tolerance."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        return False
    used = np.zeros(len(b), dtype=bool)
    for row in a:
        d = np.max(np.abs(b - row[None, :]), axis=1)
        d[used] = np.inf
        j = int(np.argmin(d))
        if d[j] > tol:
            return False
        used[j] = True
    return True


def assign_nearest(candidates: CandidateSet, design: Design) -> Assignment:
    """Assign each candidate to its nearest design point (lowest index on ties)."""
    owner, _ = nearest_assignment(candidates.points, design.points)
    sizes = np.bincount(owner, minlength=design.n)
    return Assignment(owner=owner, cluster_sizes=sizes)


def hq_objective(candidates: CandidateSet, design: Design, q: float) -> float:
    """Clustering objective (1/N) sum_j min_i ||y_j - m_i||^q."""
    _, dist = nearest_assignment(candidates.points, design.points)
    return _hq_from_dist(dist, q)


def _hq_from_dist(dist: np.ndarray, q: float) -> float:
    top = float(dist.max())
    if top == 0.0:
        return 0.0
    return top**q * float(np.mean((dist / top) ** q))


def _update_points(
    cand_pts: np.ndarray,
    design_pts: np.ndarray,
    owner: np.ndarray,
    dist: np.ndarray,
    cfg: AgdConfig,
    region: Region,
    candidates: CandidateSet,
) -> np.ndarray:
    """One center-update pass given an assignment; handles empty clusters."""
    n = design_pts.shape[0]
    new_pts = design_pts.copy()
    sizes = np.bincount(owner, minlength=n)
    for i in range(n):
        if sizes[i] > 0:
            new_pts[i] = cq_center(cand_pts[owner == i], cfg)
    empties = np.flatnonzero(sizes == 0)
    if len(empties):
        new_pts[empties] = reseed_targets(cand_pts, dist, len(empties))
    return region.clip_to_region(new_pts, candidates)


def reseed_targets(cand_pts: np.ndarray, dist: np.ndarray, count: int) -> np.ndarray:
    """Replacement positions for empty clusters: the candidates farthest from
    their current owners, distinct, in decreasing-distance order."""
    order = np.argsort(-dist, kind="stable")
    return cand_pts[order[:count]]


def mmc_step(
    candidates: CandidateSet, design: Design, cfg: AgdConfig | None = None
) -> tuple[Design, Assignment, float]:
    """One clustering iteration; returns the new design, its fresh assignment,
    and the h_q value of the new design under that assignment."""
    cfg = cfg or AgdConfig()
    owner, dist = nearest_assignment(candidates.points, design.points)
    new_pts = _update_points(candidates.points, design.points, owner, dist, cfg, design.region, candidates)
    new_design = Design(points=new_pts, region=design.region)
    new_owner, new_dist = nearest_assignment(candidates.points, new_pts)
    assignment = Assignment(owner=new_owner, cluster_sizes=np.bincount(new_owner, minlength=design.n))
    return new_design, assignment, _hq_from_dist(new_dist, cfg.q)


def mmc(
    candidates: CandidateSet,
    init: Design,
    cfg: AgdConfig | None = None,
    t_mmc: int = 500,
    trace: list | None = None,
) -> Design:
    """Run minimax clustering from an initial design.

    Stops when the largest design-point displacement falls below cfg.eps_in
    (default 1e-4) or after t_mmc iterations.  If ``trace`` is given, the
    h_q value after each iteration is appended to it.
    """
    if t_mmc < 1:
        raise ValueError("t_mmc must be at least 1")
    cfg = cfg or AgdConfig()
    eps = cfg.eps_in if cfg.eps_in is not None else 1e-4
    pts = init.points.astype(float).copy()
    region = init.region
    owner, dist = nearest_assignment(candidates.points, pts)
    for _ in range(t_mmc):
        new_pts = _update_points(candidates.points, pts, owner, dist, cfg, region, candidates)
        owner, dist = nearest_assignment(candidates.points, new_pts)
        if trace is not None:
            trace.append(_hq_from_dist(dist, cfg.q))
        moved = float(np.sqrt(np.max(np.einsum("ij,ij->i", new_pts - pts, new_pts - pts))))
        pts = new_pts
        if moved < eps:
            break
    return Design(points=pts, region=region)

"""Comparison design generators: Lloyd principal points, Ward-linkage
cluster centroids, and a greedy covering stand-in for integer-programming
minimax selection.

These exist so design tables can compare the clustering-based minimax
methods against the standard alternatives on the same candidate sets.
"""

from __future__ import annotations

import numpy as np

from ._parallel import nearest_assignment
from .lds import CandidateSet
from .mmc import Design, reseed_targets

_WARD_LIMIT = 2 * 10**4


def lloyd(
    candidates: CandidateSet,
    init: Design,
    t_max: int = 500,
    eps: float = 1e-4,
    trace: list | None = None,
) -> Design:
    """K-means (principal points): nearest assignment plus arithmetic-mean
    updates until the largest center movement drops below eps or t_max
    iterations pass.

    The mean-squared-error objective (1/N) sum_j min_i ||y_j - m_i||^2 is
    appended to ``trace`` after each iteration and is non-increasing.  Empty
    clusters are re-seeded exactly as in minimax clustering: at the
    candidates farthest from their current owners.  Centers are candidate
    means, so they stay inside any convex region; no clipping is applied.
    """
    if t_max < 1:
        raise ValueError("t_max must be at least 1")
    cand_pts = candidates.points
    pts = init.points.astype(float).copy()
    n = pts.shape[0]
    owner, dist = nearest_assignment(cand_pts, pts)
    for _ in range(t_max):
        new_pts = pts.copy()
        sizes = np.bincount(owner, minlength=n)
        sums = np.zeros_like(pts)
        np.add.at(sums, owner, cand_pts)
        filled = sizes > 0
        new_pts[filled] = sums[filled] / sizes[filled, None]
        empties = np.flatnonzero(~filled)
        if len(empties):
            new_pts[empties] = reseed_targets(cand_pts, dist, len(empties))
        owner, dist = nearest_assignment(cand_pts, new_pts)
        if trace is not None:
            trace.append(float(np.mean(dist * dist)))
        moved = float(np.sqrt(np.max(np.einsum("ij,ij->i", new_pts - pts, new_pts - pts))))
        pts = new_pts
        if moved < eps:
            break
    return Design(points=pts, region=init.region)


def fff_ward(candidates: CandidateSet, n: int) -> Design:
    """Centroids of the n clusters produced by Ward minimum-variance
    agglomeration of the candidates.

    Memory grows with the square of the candidate count, so the set is
    capped; subsample the candidates to stay under the cap.
    """
    cand_pts = candidates.points
    n_cand = cand_pts.shape[0]
    if not 1 <= n <= n_cand:
        raise ValueError("cluster count must be between 1 and the candidate count")
    if n_cand > _WARD_LIMIT:
        raise ValueError(
            f"Ward agglomeration is limited to {_WARD_LIMIT} candidates; subsample the candidate set"
        )
    if n == n_cand:
        return Design(points=cand_pts.copy(), region=candidates.region)
    from scipy.cluster.hierarchy import fcluster, linkage

    merge_tree = linkage(cand_pts, method="ward")
    labels = fcluster(merge_tree, t=n, criterion="maxclust")
    ids = np.unique(labels)
    if len(ids) != n:
        raise ValueError("Ward tree cut produced a degenerate clustering; candidates may be duplicated")
    pts = np.empty((n, cand_pts.shape[1]))
    for row, label in enumerate(ids):
        pts[row] = cand_pts[labels == label].mean(axis=0)
    return Design(points=pts, region=candidates.region)


def _greedy_cover_at(tree, cand_pts: np.ndarray, radius: float, limit: int, first_witness: int):
    """Greedy set cover with balls of the given radius; returns the chosen
    candidate indices, or None once more than ``limit`` picks are needed.

    Each pick must cover the current witness, the uncovered candidate
    farthest from the points already chosen (the hardest point to cover);
    among its coverers the one adding the most new coverage wins, lowest
    index on ties.  Anchoring picks at witnesses keeps the cover tight where
    covering is hardest, which plain max-coverage greedy misses.
    """
    n_cand = cand_pts.shape[0]
    covered = np.zeros(n_cand, dtype=bool)
    # distance from each candidate to the chosen set; +inf before any pick
    dist_chosen = np.full(n_cand, np.inf)
    chosen: list[int] = []
    witness = first_witness
    r2 = radius * radius
    while True:
        if len(chosen) == limit and not covered.all():
            return None
        members = np.sort(np.asarray(tree.query_ball_point(cand_pts[witness], r=radius), dtype=np.intp))
        open_pts = cand_pts[~covered]
        open_sq = np.einsum("ij,ij->i", open_pts, open_pts)
        best_count, best_j = -1, -1
        for lo in range(0, len(members), 256):
            block = members[lo : lo + 256]
            centers = cand_pts[block]
            d2 = (
                np.einsum("ij,ij->i", centers, centers)[:, None]
                - 2.0 * (centers @ open_pts.T)
                + open_sq[None, :]
            )
            counts = (d2 <= r2).sum(axis=1)
            j_local = int(np.argmax(counts))
            if counts[j_local] > best_count:
                best_count, best_j = int(counts[j_local]), int(block[j_local])
        chosen.append(best_j)
        ball = tree.query_ball_point(cand_pts[best_j], r=radius)
        covered[ball] = True
        if covered.all():
            return chosen
        gap = cand_pts - cand_pts[best_j]
        np.minimum(dist_chosen, np.sqrt(np.einsum("ij,ij->i", gap, gap)), out=dist_chosen)
        open_dist = np.where(covered, -np.inf, dist_chosen)
        witness = int(np.argmax(open_dist))


def greedy_cover(candidates: CandidateSet, n: int, tol_factor: float = 1e-4) -> Design:
    """Minimax-flavoured candidate selection by radius bisection over greedy
    set covers.

    Bisects the covering radius until the interval is below tol_factor times
    the candidate diameter, keeping the smallest radius whose greedy cover
    needs at most n points; the cover from that radius is padded to exactly
    n points with farthest-point additions (every output point is a
    candidate).  Comparison tables label this method "bip-approx".
    """
    from scipy.spatial import cKDTree

    cand_pts = candidates.points
    n_cand = cand_pts.shape[0]
    if not 1 <= n <= n_cand:
        raise ValueError("design size must be between 1 and the candidate count")
    if n == n_cand:
        return Design(points=cand_pts.copy(), region=candidates.region)
    tree = candidates.kdtree if hasattr(candidates, "kdtree") else cKDTree(cand_pts)

    lo, hi = 0.0, 0.0
    bbox_span = cand_pts.max(axis=0) - cand_pts.min(axis=0)
    hi = float(np.linalg.norm(bbox_span))
    if hi == 0.0:
        return Design(points=cand_pts[:n].copy(), region=candidates.region)

    # start every cover at the candidate farthest from the centroid: the
    # outermost point is covering-critical at any radius
    off_center = cand_pts - cand_pts.mean(axis=0)
    first_witness = int(np.argmax(np.einsum("ij,ij->i", off_center, off_center)))

    def attempt(radius):
        return _greedy_cover_at(tree, cand_pts, radius, n, first_witness)

    # at the full bounding-box diagonal every ball covers everything, so the
    # greedy cover is a single candidate near the first witness
    best = attempt(hi)
    tol = tol_factor * hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        picked = attempt(mid)
        if picked is None:
            lo = mid
        else:
            hi = mid
            best = picked
    pts = cand_pts[best]

    # farthest-point padding keeps all n rows distinct candidates
    if len(best) < n:
        chosen = set(best)
        _, dist = nearest_assignment(cand_pts, pts)
        while len(chosen) < n:
            order = np.argsort(-dist, kind="stable")
            nxt = next(int(j) for j in order if int(j) not in chosen)
            chosen.add(nxt)
            pts = np.vstack([pts, cand_pts[nxt]])
            gap = cand_pts - cand_pts[nxt]
            np.minimum(dist, np.sqrt(np.einsum("ij,ij->i", gap, gap)), out=dist)
    return Design(points=pts, region=candidates.region)

"""Design quality metrics: minimax distance and projected space-filling.

The minimax criterion is the largest nearest-design distance over a candidate
set, reported together with the witness (the candidate realizing it).  The
projection metrics scan coordinate subspaces of a chosen dimension k:

    mM_k  = max over subsets r of  sup_x {(1/n) sum_i 1/||x - P_r m_i||^(2k)}^(-1/(2k))
    avg_k = max over subsets r of  mean nearest-projected-design distance
    Mm_k  = min over subsets r of  {(1/C(n,2)) sum_{i<j} 1/||P_r m_i - P_r m_j||^(2k)}^(-1/(2k))

mM_k and avg_k are worst-subspace covering measures (smaller is better);
Mm_k is a worst-subspace separation measure (larger is better).  A zero
projected distance sends the harmonic sums to infinity and the bracketed
terms to zero, so degenerate projections yield 0 rather than an error.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from ._parallel import CHUNK, ipow, nearest_assignment
from .lds import CandidateSet
from .maxpro import SlackProfile, per_point_minimax
from .mmc import Design

_MAX_SUBSETS = 10**5


def minimax_criterion(design: Design, candidates: CandidateSet) -> tuple[float, np.ndarray]:
    """Largest nearest-design distance over the candidates, with the witness
    candidate (lowest index on ties)."""
    _, dist = nearest_assignment(candidates.points, design.points)
    j = int(np.argmax(dist))
    return float(dist[j]), candidates.points[j].copy()


@dataclass(eq=False)
class ProjectionMetrics:
    """The three k-dimensional projection metrics and their extremal
    coordinate subsets; iterates as the (mM, avg, Mm) triple."""

    mM: float
    avg: float
    Mm: float
    mM_r: tuple
    avg_r: tuple
    Mm_r: tuple

    def __iter__(self):
        yield self.mM
        yield self.avg
        yield self.Mm


def _covering_scan(proj_cand: np.ndarray, proj_des: np.ndarray, k: int) -> tuple[float, float]:
    """(min over candidates of sum_i 1/d^(2k), mean nearest distance) for one
    projection, chunked over candidates with an ordered reduction."""
    n_cand = proj_cand.shape[0]
    des_sq = np.einsum("ij,ij->i", proj_des, proj_des)
    min_s = np.inf
    dist_total = 0.0
    for lo in range(0, n_cand, CHUNK):
        block = proj_cand[lo : lo + CHUNK]
        d2 = np.einsum("ij,ij->i", block, block)[:, None] - 2.0 * (block @ proj_des.T)
        d2 += des_sq[None, :]
        np.maximum(d2, 0.0, out=d2)
        nearest = np.sqrt(d2.min(axis=1))
        dist_total += float(nearest.sum())
        with np.errstate(divide="ignore"):
            s = (1.0 / ipow(d2, k)).sum(axis=1)  # d^(2k) == (d^2)^k
        min_s = min(min_s, float(s.min()))
    return min_s, dist_total / n_cand


def _separation_index(proj_des: np.ndarray, k: int) -> float:
    """{(1/C(n,2)) sum_{i<j} 1/d^(2k)}^(-1/(2k)); 0 when points coincide in
    this projection, +inf for designs with fewer than two points."""
    n = proj_des.shape[0]
    if n < 2:
        return np.inf
    iu, ju = np.triu_indices(n, k=1)
    gap = proj_des[iu] - proj_des[ju]
    d2 = np.einsum("ij,ij->i", gap, gap)
    with np.errstate(divide="ignore"):
        total = float((1.0 / ipow(d2, k)).sum())  # d^(2k) == (d^2)^k
    if not np.isfinite(total):
        return 0.0
    return float((total / comb(n, 2)) ** (-0.5 / k))


def projection_metrics(design: Design, candidates: CandidateSet, k: int) -> ProjectionMetrics:
    """Scan every k-dimensional coordinate projection of the design.

    The sup inside mM_k and the average inside avg_k run over the projected
    candidate set.  Extremal subset indices report the first subset (in
    lexicographic order) achieving each extremum.
    """
    p = design.dim
    if not 1 <= k <= p:
        raise ValueError("projection dimension k must satisfy 1 <= k <= p")
    if comb(p, k) > _MAX_SUBSETS:
        raise ValueError(f"C({p},{k}) coordinate subsets exceed the enumeration guard {_MAX_SUBSETS}")
    pts = design.points
    cand = candidates.points
    n = pts.shape[0]
    mm_val, mm_r = -np.inf, None
    avg_val, avg_r = -np.inf, None
    sep_val, sep_r = np.inf, None
    for r in combinations(range(p), k):
        idx = list(r)
        min_s, avg_dist = _covering_scan(cand[:, idx], pts[:, idx], k)
        with np.errstate(divide="ignore"):
            covering = float((min_s / n) ** (-0.5 / k)) if min_s > 0 else np.inf
        if not np.isfinite(min_s):
            covering = 0.0
        if covering > mm_val or mm_r is None:
            mm_val, mm_r = covering, r
        if avg_dist > avg_val or avg_r is None:
            avg_val, avg_r = avg_dist, r
        sep = _separation_index(pts[:, idx], k)
        if sep < sep_val or sep_r is None:
            sep_val, sep_r = sep, r
    return ProjectionMetrics(mM=mm_val, avg=avg_val, Mm=sep_val, mM_r=mm_r, avg_r=avg_r, Mm_r=sep_r)


@dataclass(eq=False)
class MetricsReport:
    """Full evaluation of a design on a candidate set."""

    minimax: float
    witness: np.ndarray
    per_point: SlackProfile
    projections: dict  # k -> ProjectionMetrics

    def to_dict(self) -> dict:
        return {
            "minimax": self.minimax,
            "witness": [float(v) for v in self.witness],
            "per_point": {
                "d": [float(v) for v in self.per_point.d],
                "d_star": self.per_point.d_star,
            },
            "projections": {
                str(k): {
                    "mM": _json_float(m.mM),
                    "avg": _json_float(m.avg),
                    "Mm": _json_float(m.Mm),
                    "mM_r": list(m.mM_r),
                    "avg_r": list(m.avg_r),
                    "Mm_r": list(m.Mm_r),
                }
                for k, m in sorted(self.projections.items())
            },
        }


def _json_float(v: float):
    return float(v) if np.isfinite(v) else ("inf" if v > 0 else "-inf")


METRICS_REPORT_SCHEMA = {
    "type": "object",
    "required": ["minimax", "witness", "per_point", "projections"],
    "properties": {
        "minimax": {"type": "number", "minimum": 0},
        "witness": {"type": "array", "items": {"type": "number"}},
        "per_point": {
            "type": "object",
            "required": ["d", "d_star"],
            "properties": {
                "d": {"type": "array", "items": {"type": "number", "minimum": 0}},
                "d_star": {"type": "number", "minimum": 0},
            },
        },
        "projections": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["mM", "avg", "Mm", "mM_r", "avg_r", "Mm_r"],
                "properties": {
                    "mM": {"type": ["number", "string"]},
                    "avg": {"type": "number", "minimum": 0},
                    "Mm": {"type": ["number", "string"]},
                    "mM_r": {"type": "array", "items": {"type": "integer"}},
                    "avg_r": {"type": "array", "items": {"type": "integer"}},
                    "Mm_r": {"type": "array", "items": {"type": "integer"}},
                },
            },
        },
    },
}


def compute_report(design: Design, candidates: CandidateSet, proj_dims=()) -> MetricsReport:
    """Minimax value with witness, per-point slack profile, and projection
    metrics for every requested subspace dimension."""
    slack = per_point_minimax(design, candidates)
    value, witness = minimax_criterion(design, candidates)
    projections = {int(k): projection_metrics(design, candidates, int(k)) for k in proj_dims}
    return MetricsReport(minimax=value, witness=witness, per_point=slack, projections=projections)

"""Swarm-accelerated minimax clustering.

A swarm of candidate designs each takes one minimax-clustering step per
iteration, then drifts toward its own best and the swarm's best position
under the clustering objective h_q.  A post-processing phase re-targets the
swarm directly at the minimax criterion h (the largest nearest-design
distance over the candidate set) with plain particle swarm updates.

Local and global bests are refreshed on the freshly clustered position,
before the velocity move, following the clustering/swarm hybrid of van der
Merwe and Engelbrecht: evaluating only the post-move position buries the
clustered configurations under velocity noise and stalls the search.  At
the phase boundary each particle's remembered best is re-scored under the
minimax criterion and kept if it beats the particle's current position, so
the swarm enters post-processing attracted to the cleanest designs found
so far.

Particles keep row identity across iterations: the velocity arithmetic
subtracts row-aligned matrices, with no re-matching of points between
designs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._parallel import nearest_assignment
from .cqcenter import AgdConfig
from .lds import CandidateSet, candidate_set, scrambled_sobol
from .mmc import Design, _update_points, hq_objective as _hq_cd
from .region import Region


@dataclass
class PsoConfig:
    """Swarm settings; inertia and attraction constants follow common practice."""

    s: int = 10
    w: float = 0.72
    c1: float = 1.49
    c2: float = 1.49
    t_mmc: int = 500
    t_pp: int = 250
    seed: int = 0
    agd: AgdConfig = field(default_factory=AgdConfig)
    parallel_particles: bool = False

    def __post_init__(self):
        if self.s < 1:
            raise ValueError("swarm size must be at least 1")
        if min(self.w, self.c1, self.c2) <= 0:
            raise ValueError("w, c1, c2 must be positive")
        if self.t_mmc < 0 or self.t_pp < 0:
            raise ValueError("iteration caps must be non-negative")


@dataclass(eq=False)
class SwarmState:
    """Positions, velocities and bests of the whole swarm, plus its RNG."""

    particles: np.ndarray  # (s, n, p)
    velocities: np.ndarray  # (s, n, p)
    local_best: np.ndarray  # (s, n, p)
    local_best_obj: np.ndarray  # (s,)
    global_best: np.ndarray  # (n, p)
    global_best_obj: float
    rng: np.random.Generator
    candidates: CandidateSet
    region: Region


def hq_objective(design: Design, candidates: CandidateSet, q: float) -> float:
    """Clustering objective (1/N) sum_j min_i ||y_j - m_i||^q."""
    return _hq_cd(candidates, design, q)


def _minimax_h(cand_pts: np.ndarray, pts: np.ndarray) -> float:
    """Minimax criterion over the candidate set: max nearest-design distance."""
    _, dist = nearest_assignment(cand_pts, pts)
    return float(dist.max())


def _sample_particle(region: Region, n: int, scramble_seed: int, rng: np.random.Generator) -> np.ndarray:
    """n feasible points for one particle: scrambled Sobol' through the
    region transform, or rejection from the bounding box for polygons."""
    if region.kind == "polygon":
        lo, hi = region.bounding_box()
        out = np.empty((n, region.dim))
        got = 0
        while got < n:
            draw = lo + rng.random((max(4 * n, 64), region.dim)) * (hi - lo)
            keep = draw[region.contains(draw)]
            take = min(n - got, len(keep))
            out[got : got + take] = keep[:take]
            got += take
        return out
    return region.inverse_rosenblatt(scrambled_sobol(n, region.dim, scramble_seed))


def init_swarm(region: Region, n: int, candidates: CandidateSet, cfg: PsoConfig) -> SwarmState:
    """Seeded swarm: scrambled low-discrepancy particles, zero velocities,
    local bests at the particles, global best at the h_q argmin."""
    ss = np.random.SeedSequence(cfg.seed)
    children = ss.spawn(cfg.s + 1)
    q = cfg.agd.q
    particles = np.empty((cfg.s, n, region.dim))
    objs = np.empty(cfg.s)
    for k in range(cfg.s):
        scramble_seed = int(children[k].generate_state(1, np.uint64)[0])
        particles[k] = _sample_particle(region, n, scramble_seed, np.random.default_rng(children[k]))
        _, dist = nearest_assignment(candidates.points, particles[k])
        objs[k] = _hq_from(dist, q)
    best = int(np.argmin(objs))
    return SwarmState(
        particles=particles,
        velocities=np.zeros_like(particles),
        local_best=particles.copy(),
        local_best_obj=objs.copy(),
        global_best=particles[best].copy(),
        global_best_obj=float(objs[best]),
        rng=np.random.default_rng(children[cfg.s]),
        candidates=candidates,
        region=region,
    )


def _hq_from(dist: np.ndarray, q: float) -> float:
    top = float(dist.max())
    if top == 0.0:
        return 0.0
    return top**q * float(np.mean((dist / top) ** q))


def velocity_update(state: SwarmState, k: int, cfg: PsoConfig, r1=None, r2=None) -> np.ndarray:
    """Move particle k: v <- w v + c1 r1 (L - D) + c2 r2 (G - D); D <- D + v,
    rows clipped into the region.  r1, r2 default to fresh uniform draws."""
    shape = state.particles[k].shape
    if r1 is None:
        r1 = state.rng.random(shape)
    if r2 is None:
        r2 = state.rng.random(shape)
    v = (
        cfg.w * state.velocities[k]
        + cfg.c1 * r1 * (state.local_best[k] - state.particles[k])
        + cfg.c2 * r2 * (state.global_best - state.particles[k])
    )
    state.velocities[k] = v
    moved = state.particles[k] + v
    state.particles[k] = state.region.clip_to_region(moved, state.candidates)
    return state.particles[k]


def _refresh_bests(state: SwarmState, k: int, value: float, serial: bool, staged: list) -> None:
    if value < state.local_best_obj[k]:
        state.local_best[k] = state.particles[k].copy()
        state.local_best_obj[k] = value
    if serial:
        if value < state.global_best_obj:
            state.global_best = state.particles[k].copy()
            state.global_best_obj = float(value)
    else:
        staged.append((k, value))


def _commit_staged(state: SwarmState, staged: list) -> None:
    for k, value in staged:
        if value < state.global_best_obj:
            state.global_best = state.local_best[k].copy()
            state.global_best_obj = float(value)
    staged.clear()


def mmc_pso(
    region: Region,
    n: int,
    n_candidates: int = 10**5,
    cfg: PsoConfig | None = None,
    candidates: CandidateSet | None = None,
    record: dict | None = None,
) -> Design:
    """Two-phase swarm search for an n-point minimax design on the region.

    Phase 1 alternates clustering steps with swarm moves under h_q; phase 2
    resets the bests and runs plain PSO on the minimax criterion h itself.
    Deterministic for a fixed seed.  ``candidates`` overrides the internally
    generated candidate set; ``record``, when given, is filled with objective
    traces and the final criterion value.
    """
    cfg = cfg or PsoConfig()
    if candidates is None:
        candidates = candidate_set(region, n_candidates, seed=cfg.seed)
    if n > candidates.n_points:
        raise ValueError("design size n must not exceed the candidate count")
    cand_pts = candidates.points
    q = cfg.agd.q
    serial = not cfg.parallel_particles
    state = init_swarm(region, n, candidates, cfg)
    trace1: list[float] = []
    staged: list = []

    # With every cell non-empty, the center update is a pure function of the
    # ownership partition, so a particle whose assignment repeats can reuse
    # its previous centers and objective bit for bit.  This only skips
    # redundant arithmetic; iteration counts, rng draws and results are
    # unchanged.
    seen_owner: list = [None] * cfg.s
    seen_centers: list = [None] * cfg.s
    seen_hq = np.empty(cfg.s)

    for _ in range(cfg.t_mmc):
        for k in range(cfg.s):
            owner, dist = nearest_assignment(cand_pts, state.particles[k])
            if seen_owner[k] is not None and np.array_equal(owner, seen_owner[k]):
                state.particles[k] = seen_centers[k]
                hq_val = float(seen_hq[k])
            else:
                state.particles[k] = _update_points(
                    cand_pts, state.particles[k], owner, dist, cfg.agd, region, candidates
                )
                _, dist = nearest_assignment(cand_pts, state.particles[k])
                hq_val = _hq_from(dist, q)
                if np.bincount(owner, minlength=n).all():
                    seen_owner[k] = owner
                    seen_centers[k] = state.particles[k].copy()
                    seen_hq[k] = hq_val
                else:
                    seen_owner[k] = None
            _refresh_bests(state, k, hq_val, serial, staged)
            velocity_update(state, k, cfg)
        if not serial:
            _commit_staged(state, staged)
        trace1.append(state.global_best_obj)

    # phase boundary: re-score remembered bests and current particles under
    # the minimax criterion; each particle keeps the better of the two
    if record is not None:
        record["hq_at_reset"] = trace1[-1] if trace1 else None
    for k in range(cfg.s):
        h_local = _minimax_h(cand_pts, state.local_best[k])
        h_particle = _minimax_h(cand_pts, state.particles[k])
        if h_particle < h_local:
            state.local_best[k] = state.particles[k].copy()
            h_local = h_particle
        state.local_best_obj[k] = h_local
    best = int(np.argmin(state.local_best_obj))
    state.global_best = state.local_best[best].copy()
    state.global_best_obj = float(state.local_best_obj[best])
    state.velocities[:] = 0.0
    if record is not None:
        record["h_at_reset"] = state.global_best_obj

    trace2: list[float] = []
    for _ in range(cfg.t_pp):
        for k in range(cfg.s):
            velocity_update(state, k, cfg)
            _refresh_bests(state, k, _minimax_h(cand_pts, state.particles[k]), serial, staged)
        if not serial:
            _commit_staged(state, staged)
        trace2.append(state.global_best_obj)

    if record is not None:
        record["phase1_hq"] = trace1
        record["phase2_h"] = trace2
        record["h_final"] = state.global_best_obj
    return Design(points=state.global_best.copy(), region=region)

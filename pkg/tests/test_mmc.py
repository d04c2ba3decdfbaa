import numpy as np
import pytest

from minimax_design.cqcenter import AgdConfig, cq_center
from minimax_design.lds import CandidateSet
from minimax_design.mmc import (
    Design,
    assign_nearest,
    hq_objective,
    mmc,
    mmc_step,
    reseed_targets,
    same_point_set,
)
from minimax_design.region import Hypercube

from conftest import random_candidates


def make_design(pts, region=None):
    pts = np.asarray(pts, dtype=float)
    return Design(points=pts, region=region or Hypercube(pts.shape[1]))


def test_design_properties(square):
    d = Design(points=np.zeros((5, 2)), region=square)
    assert d.n == 5 and d.dim == 2


def test_same_point_set_is_order_insensitive():
    a = np.array([[0.0, 0.0], [1.0, 1.0], [0.5, 0.2]])
    b = a[[2, 0, 1]]
    assert same_point_set(a, b)
    assert not same_point_set(a, b + 1e-6)


def test_assign_nearest_matches_brute_force():
    rng = np.random.default_rng(0)
    cands = random_candidates(rng, 300, 3)
    design = make_design(rng.random((6, 3)))
    asg = assign_nearest(cands, design)
    d2 = np.sum((cands.points[:, None, :] - design.points[None, :, :]) ** 2, axis=-1)
    assert np.array_equal(asg.owner, d2.argmin(axis=1))
    assert asg.cluster_sizes.sum() == cands.n_points


def test_hq_objective_matches_naive_mean():
    rng = np.random.default_rng(1)
    cands = random_candidates(rng, 200, 2)
    design = make_design(rng.random((4, 2)))
    d2 = np.sum((cands.points[:, None, :] - design.points[None, :, :]) ** 2, axis=-1)
    nearest = np.sqrt(d2.min(axis=1))
    for q in (4.0, 10.0):
        assert np.isclose(hq_objective(cands, design, q), float(np.mean(nearest**q)), rtol=1e-12)


def test_mmc_step_moves_centers_to_cluster_centers():
    """After one step each design point with a non-empty cluster sits at the
    center of the candidates previously assigned to it."""
    rng = np.random.default_rng(2)
    cands = random_candidates(rng, 500, 2)
    design = make_design(rng.random((5, 2)))
    cfg = AgdConfig(q=10.0, eps_in=1e-10)
    owner_before = assign_nearest(cands, design).owner
    new_design, assignment, hq = mmc_step(cands, design, cfg)
    for i in range(5):
        members = cands.points[owner_before == i]
        if len(members):
            assert np.allclose(new_design.points[i], cq_center(members, cfg), atol=1e-8)
    assert hq == hq_objective(cands, new_design, 10.0)
    assert assignment.cluster_sizes.sum() == cands.n_points


def test_mmc_trace_is_nonincreasing():
    rng = np.random.default_rng(3)
    for trial in range(5):
        cands = random_candidates(rng, 400, 2)
        design = make_design(rng.random((6, 2)))
        trace: list[float] = []
        mmc(cands, design, cfg=AgdConfig(q=10.0), trace=trace)
        diffs = np.diff(trace)
        assert (diffs <= 1e-8).all()


def test_mmc_stops_at_fixed_point():
    rng = np.random.default_rng(4)
    cands = random_candidates(rng, 300, 2)
    design = make_design(rng.random((4, 2)))
    first = mmc(cands, design, cfg=AgdConfig(q=10.0, eps_in=1e-6))
    trace: list[float] = []
    again = mmc(cands, first, cfg=AgdConfig(q=10.0, eps_in=1e-6), trace=trace)
    assert len(trace) <= 2
    assert np.allclose(again.points, first.points, atol=1e-4)


def test_mmc_respects_iteration_cap():
    rng = np.random.default_rng(5)
    cands = random_candidates(rng, 300, 2)
    design = make_design(rng.random((6, 2)))
    trace: list[float] = []
    mmc(cands, design, cfg=AgdConfig(q=10.0, eps_in=0.0), t_mmc=3, trace=trace)
    assert len(trace) == 3
    with pytest.raises(ValueError):
        mmc(cands, design, t_mmc=0)


def test_reseed_targets_picks_farthest_distinct_candidates():
    cand_pts = np.array([[0.0, 0.0], [0.5, 0.0], [0.9, 0.0], [0.2, 0.0]])
    dist = np.array([0.1, 0.6, 0.9, 0.2])
    got = reseed_targets(cand_pts, dist, 2)
    assert np.allclose(got, [[0.9, 0.0], [0.5, 0.0]])


def test_duplicate_design_points_get_reseeded():
    """Two identical design points leave one cluster empty; the empty one
    must be re-seeded at a far candidate rather than left in place."""
    rng = np.random.default_rng(6)
    cands = random_candidates(rng, 400, 2)
    pts = np.array([[0.5, 0.5], [0.5, 0.5], [0.1, 0.9]])
    new_design, _, _ = mmc_step(cands, make_design(pts), AgdConfig(q=10.0))
    d2 = np.sum((new_design.points[:, None, :] - new_design.points[None, :, :]) ** 2, axis=-1)
    iu = np.triu_indices(3, k=1)
    assert d2[iu].min() > 1e-6


def test_mmc_improves_minimax_against_start():
    rng = np.random.default_rng(7)
    cands = random_candidates(rng, 2000, 2)
    start = make_design(rng.random((10, 2)) * 0.2)  # bunched in a corner
    out = mmc(cands, start, cfg=AgdConfig(q=10.0))
    def minimax(design):
        d2 = np.sum((cands.points[:, None, :] - design.points[None, :, :]) ** 2, axis=-1)
        return float(np.sqrt(d2.min(axis=1)).max())
    assert minimax(out) < minimax(start)

import numpy as np
import pytest

from minimax_design.baselines import fff_ward, greedy_cover, lloyd
from minimax_design.lds import CandidateSet
from minimax_design.metrics import minimax_criterion
from minimax_design.mmc import Design
from minimax_design.region import Hypercube

from conftest import random_candidates


def make_design(pts, region=None):
    pts = np.asarray(pts, dtype=float)
    return Design(points=pts, region=region or Hypercube(pts.shape[1]))


def grid_candidates(m):
    side = (np.arange(m) + 0.5) / m
    xx, yy = np.meshgrid(side, side)
    pts = np.column_stack([xx.ravel(), yy.ravel()])
    return CandidateSet(points=pts, region=Hypercube(2))


def test_lloyd_matches_scipy_kmeans2_trajectory():
    """Fixed iteration count with eps=0 reproduces scipy's k-means loop."""
    from scipy.cluster.vq import kmeans2

    rng = np.random.default_rng(0)
    cands = random_candidates(rng, 400, 2)
    init = rng.random((5, 2))
    for t in (1, 3, 7):
        ours = lloyd(cands, make_design(init), t_max=t, eps=0.0)
        ref, _ = kmeans2(cands.points, init.copy(), iter=t, minit="matrix", missing="raise")
        assert np.allclose(ours.points, ref, atol=1e-10)


def test_lloyd_single_center_is_candidate_mean():
    rng = np.random.default_rng(1)
    cands = random_candidates(rng, 300, 3)
    out = lloyd(cands, make_design(rng.random((1, 3))))
    assert np.allclose(out.points[0], cands.points.mean(axis=0), atol=1e-10)


def test_lloyd_identity_when_design_equals_candidates():
    rng = np.random.default_rng(2)
    pts = rng.random((12, 2))
    cands = CandidateSet(points=pts, region=Hypercube(2))
    trace: list = []
    out = lloyd(cands, make_design(pts), trace=trace)
    assert np.allclose(out.points, pts)
    assert trace[-1] == pytest.approx(0.0, abs=1e-20)


def test_lloyd_quadrant_centroids_on_dense_grid():
    cands = grid_candidates(40)
    init = np.array([[0.3, 0.3], [0.7, 0.3], [0.3, 0.7], [0.7, 0.7]])
    out = lloyd(cands, make_design(init))
    expected = np.array([[0.25, 0.25], [0.75, 0.25], [0.25, 0.75], [0.75, 0.75]])
    got = out.points[np.lexsort((out.points[:, 0], out.points[:, 1]))]
    assert np.allclose(got, expected, atol=1e-2)


def test_lloyd_mse_trace_non_increasing():
    rng = np.random.default_rng(3)
    for _ in range(5):
        cands = random_candidates(rng, 500, 2)
        init = make_design(rng.random((6, 2)))
        trace: list = []
        lloyd(cands, init, t_max=40, trace=trace)
        diffs = np.diff(np.asarray(trace))
        assert np.all(diffs <= 1e-12)


def test_lloyd_converged_output_is_a_fixed_point():
    rng = np.random.default_rng(4)
    cands = random_candidates(rng, 600, 2)
    out = lloyd(cands, make_design(rng.random((5, 2))))
    again = lloyd(cands, out, t_max=1)
    assert np.allclose(again.points, out.points, atol=1e-4)


def test_lloyd_reseeds_empty_cluster_from_duplicate_init():
    rng = np.random.default_rng(5)
    cands = random_candidates(rng, 400, 2)
    dup = np.array([[0.5, 0.5], [0.5, 0.5], [0.1, 0.9]])
    out = lloyd(cands, make_design(dup), t_max=30)
    gaps = out.points[:, None, :] - out.points[None, :, :]
    dist = np.sqrt(np.sum(gaps**2, axis=-1))
    np.fill_diagonal(dist, np.inf)
    assert dist.min() > 1e-6


def test_lloyd_rejects_nonpositive_iteration_cap():
    cands = random_candidates(np.random.default_rng(6), 50, 2)
    with pytest.raises(ValueError):
        lloyd(cands, make_design([[0.5, 0.5]]), t_max=0)


def test_ward_identity_at_full_cluster_count():
    rng = np.random.default_rng(7)
    pts = rng.random((9, 2))
    cands = CandidateSet(points=pts, region=Hypercube(2))
    out = fff_ward(cands, 9)
    assert np.allclose(out.points, pts)


def test_ward_two_points_single_cluster_midpoint():
    pts = np.array([[0.2, 0.2], [0.8, 0.6]])
    cands = CandidateSet(points=pts, region=Hypercube(2))
    out = fff_ward(cands, 1)
    assert np.allclose(out.points[0], [0.5, 0.4])


def test_ward_recovers_two_separated_blobs():
    rng = np.random.default_rng(8)
    blob_a = 0.1 + 0.05 * rng.random((30, 2))
    blob_b = 0.8 + 0.05 * rng.random((30, 2))
    cands = CandidateSet(points=np.vstack([blob_a, blob_b]), region=Hypercube(2))
    out = fff_ward(cands, 2)
    centers = out.points[np.argsort(out.points[:, 0])]
    assert np.allclose(centers[0], blob_a.mean(axis=0), atol=1e-8)
    assert np.allclose(centers[1], blob_b.mean(axis=0), atol=1e-8)


def test_ward_validates_cluster_count_and_cap():
    rng = np.random.default_rng(9)
    cands = random_candidates(rng, 20, 2)
    with pytest.raises(ValueError):
        fff_ward(cands, 0)
    with pytest.raises(ValueError):
        fff_ward(cands, 21)
    big = CandidateSet(points=rng.random((2 * 10**4 + 1, 2)), region=Hypercube(2))
    with pytest.raises(ValueError, match="subsample"):
        fff_ward(big, 5)


def test_greedy_cover_outputs_distinct_candidate_rows():
    rng = np.random.default_rng(10)
    cands = random_candidates(rng, 300, 2)
    out = greedy_cover(cands, 8)
    assert out.points.shape == (8, 2)
    # every output row is one of the candidates, and no row repeats
    matches = np.all(np.isclose(out.points[:, None, :], cands.points[None, :, :]), axis=-1)
    idx = matches.argmax(axis=1)
    assert matches[np.arange(8), idx].all()
    assert len(set(idx.tolist())) == 8


def test_greedy_cover_deterministic():
    rng = np.random.default_rng(11)
    cands = random_candidates(rng, 400, 2)
    a = greedy_cover(cands, 6)
    b = greedy_cover(cands, 6)
    assert np.array_equal(a.points, b.points)


def test_greedy_cover_identity_at_full_size():
    rng = np.random.default_rng(12)
    pts = rng.random((15, 2))
    cands = CandidateSet(points=pts, region=Hypercube(2))
    out = greedy_cover(cands, 15)
    assert np.allclose(out.points, pts)


def test_greedy_cover_single_point_matches_brute_force_one_center():
    rng = np.random.default_rng(13)
    cands = random_candidates(rng, 200, 2)
    out = greedy_cover(cands, 1)
    got, _ = minimax_criterion(out, cands)
    gaps = cands.points[:, None, :] - cands.points[None, :, :]
    radii = np.sqrt(np.sum(gaps**2, axis=-1)).max(axis=1)
    best = float(radii.min())
    tol = 1e-4 * float(np.linalg.norm(cands.points.max(axis=0) - cands.points.min(axis=0)))
    assert got <= best + 2 * tol


def test_greedy_cover_quadrant_quality_bound():
    cands = grid_candidates(32)
    out = greedy_cover(cands, 4)
    value, _ = minimax_criterion(out, cands)
    assert value <= 1.25 * np.sqrt(2.0) / 4.0


def test_greedy_cover_validates_design_size():
    cands = random_candidates(np.random.default_rng(14), 30, 2)
    with pytest.raises(ValueError):
        greedy_cover(cands, 0)
    with pytest.raises(ValueError):
        greedy_cover(cands, 31)

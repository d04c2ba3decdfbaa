import io
import sys

import numpy as np
import pytest

from minimax_design.lds import CandidateSet, candidate_set
from minimax_design.region import Ball, Hypercube, Simplex


@pytest.fixture(scope="session")
def square():
    return Hypercube(2)


@pytest.fixture(scope="session")
def square_cands(square):
    """Moderate candidate approximation of the unit square, shared."""
    return candidate_set(square, 4096, seed=0)


@pytest.fixture(scope="session")
def ball_cands():
    return candidate_set(Ball(2), 2048, seed=0)


def random_candidates(rng, n_points, dim, region=None) -> CandidateSet:
    """Candidate set from seeded uniform points on [0,1]^dim."""
    pts = rng.random((n_points, dim))
    return CandidateSet(points=pts, region=region or Hypercube(dim))


def run_cli(argv):
    """Run the CLI in-process; returns (exit_code, stdout_text)."""
    from minimax_design import cli

    old = sys.stdout
    sys.stdout = io.StringIO()
    try:
        code = cli.main([str(a) for a in argv])
        out = sys.stdout.getvalue()
    finally:
        sys.stdout = old
    return code, out

"""Sobol' sequences, Owen-style scrambling, and candidate set construction.

The generator reads a bundled direction-number table (data/joe_kuo_directions.txt)
covering dimensions up to 1111.  Each table row is ``d s a m_1 ... m_s``:
dimension index, primitive-polynomial degree, the integer encoding the middle
polynomial coefficients, and the initial direction numbers.  Dimension 1 is
the implicit identity column (all m_k = 1).  Points are produced in Gray-code
order with 32-bit precision, so output is identical across platforms, runs,
and thread counts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .errors import MinimaxDesignError
from .region import Region

MAX_DIM = 1111
_BITS = 32

_table_cache: dict[int, tuple[int, list[int]]] | None = None
_dir_cache: dict[int, np.ndarray] = {}


def _load_table():
    """Parse the bundled direction-number file once."""
    global _table_cache
    if _table_cache is None:
        table = {}
        text = resources.files("minimax_design").joinpath("data/joe_kuo_directions.txt").read_text()
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("d "):
                continue
            parts = [int(tok) for tok in line.split()]
            d, s, a, ms = parts[0], parts[1], parts[2], parts[3:]
            if len(ms) != s:
                raise ValueError(f"malformed direction-number row for dimension {d}")
            table[d] = (a, ms)
        _table_cache = table
    return _table_cache


def _direction_vectors(p: int) -> np.ndarray:
    """Direction numbers as a (p, 32) uint64 array of bit-shifted values."""
    if p in _dir_cache:
        return _dir_cache[p]
    table = _load_table()
    v = np.zeros((p, _BITS), dtype=np.uint64)
    for j in range(p):
        if j == 0:
            m = [1] * _BITS
        else:
            a, m_init = table[j + 1]
            s = len(m_init)
            m = list(m_init) + [0] * max(0, _BITS - s)
            for k in range(s, _BITS):
                mk = m[k - s] ^ (m[k - s] << s)
                for i in range(1, s):
                    if (a >> (s - 1 - i)) & 1:
                        mk ^= m[k - i] << i
                m[k] = mk
        for k in range(_BITS):
            v[j, k] = np.uint64(m[k] << (_BITS - 1 - k))
    _dir_cache[p] = v
    return v


def _check_dims(n: int, p: int):
    if p < 1 or p > MAX_DIM:
        raise ValueError(f"dimension must be between 1 and {MAX_DIM} (direction-number table limit)")
    if n < 0 or n >= 2**31:
        raise ValueError("point count must satisfy 0 <= n < 2^31")


def _raw_sobol_ints(start: int, count: int, p: int) -> np.ndarray:
    """Gray-code Sobol' integers for indices start..start+count-1, shape (count, p)."""
    v = _direction_vectors(p)
    x = np.zeros((count, p), dtype=np.uint64)
    if count == 0:
        return x
    idx = np.arange(start, start + count, dtype=np.uint64)
    gray = idx ^ (idx >> np.uint64(1))
    maxbits = int(gray.max()).bit_length()
    for b in range(maxbits):
        mask = (gray >> np.uint64(b)) & np.uint64(1)
        x ^= mask[:, None] * v[None, :, b]
    return x


def sobol(n: int, p: int) -> np.ndarray:
    """First n points of the p-dimensional Sobol' sequence.

    The leading all-zeros point is skipped: a design seeded at the exact
    origin is a degenerate cluster seed.
    """
    _check_dims(n, p)
    return _raw_sobol_ints(1, n, p).astype(np.float64) / float(2**_BITS)


def scrambled_sobol(n: int, p: int, seed: int) -> np.ndarray:
    """Owen-style nested digit scramble of the Sobol' sequence.

    The scramble starts from raw index 0 (no zero-point skip: scrambling maps
    the origin to a generic point), which keeps the dyadic balance exact: for
    n = 2^k the points still place exactly one coordinate in every interval
    [j/n, (j+1)/n).  Deterministic for a fixed 64-bit seed.
    """
    _check_dims(n, p)
    x = _raw_sobol_ints(0, n, p)
    out = np.empty((n, p), dtype=np.float64)
    for j in range(p):
        out[:, j] = _owen_scramble_column(x[:, j], seed, j).astype(np.float64)
    return out / float(2**_BITS)


_M1 = np.uint64(0x9E3779B97F4A7C15)
_M2 = np.uint64(0xBF58476D1CE4E5B9)
_M3 = np.uint64(0x94D049BB133111EB)
_ONE = np.uint64(1)


def _mix64(z) -> np.ndarray:
    """splitmix64 finalizer; a bijective 64-bit mixer."""
    z = np.uint64(z) if np.isscalar(z) else z
    z = z + _M1
    z = (z ^ (z >> np.uint64(30))) * _M2
    z = (z ^ (z >> np.uint64(27))) * _M3
    return z ^ (z >> np.uint64(31))


def _owen_scramble_column(col: np.ndarray, seed: int, dim_index: int) -> np.ndarray:
    """Nested uniform scramble of one coordinate column of 32-bit integers.

    Every node of the binary digit tree (identified by the bit level and the
    path of digits above it) gets an independent pseudo-random flip bit, so
    points sharing a prefix flip together; this is a uniformly random nested
    digit permutation in distribution, truncated to 32 bits.
    """
    with np.errstate(over="ignore"):
        key = _mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF) ^ _mix64(np.uint64(dim_index + 1)))
        y = col.copy()
        for level in range(_BITS - 1, -1, -1):
            prefix = y >> np.uint64(level + 1)
            node = _mix64(key ^ _mix64(np.uint64(_BITS - level) * _M3) ^ prefix)
            y ^= (node & _ONE) << np.uint64(level)
    return y


class LowAcceptanceRate(MinimaxDesignError):
    """Rejection sampling is accepting almost nothing; the region is degenerate."""


@dataclass(eq=False)
class CandidateSet:
    """Finite approximation of a region: N points plus the region itself."""

    points: np.ndarray
    region: Region
    _tree: object = field(default=None, repr=False)

    @property
    def n_points(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def kdtree(self):
        if self._tree is None:
            from scipy.spatial import cKDTree

            self._tree = cKDTree(self.points)
        return self._tree


def candidate_set(region: Region, n_points: int = 10**5, seed: int = 0) -> CandidateSet:
    """Build the candidate approximation of a region.

    Regions with an inverse Rosenblatt transform get transformed Sobol'
    points (deterministic, seed unused); polygons fall back to seeded
    rejection sampling from the bounding box.
    """
    if n_points < 1:
        raise ValueError("candidate set needs at least one point")
    if region.kind == "polygon":
        pts = _rejection_sample(region, n_points, seed)
    else:
        pts = region.inverse_rosenblatt(sobol(n_points, region.dim))
    return CandidateSet(points=pts, region=region)


def _rejection_sample(region: Region, n_points: int, seed: int) -> np.ndarray:
    lo, hi = region.bounding_box()
    rng = np.random.default_rng(seed)
    got = []
    accepted = 0
    drawn = 0
    batch = max(2 * n_points, 1024)
    while accepted < n_points:
        u = rng.random((batch, region.dim))
        pts = lo + u * (hi - lo)
        keep = pts[region.contains(pts)]
        got.append(keep)
        accepted += len(keep)
        drawn += batch
        if drawn >= 10 * batch and accepted < drawn * 1e-3:
            raise LowAcceptanceRate(
                f"rejection sampling accepted {accepted}/{drawn} points (< 0.1%); "
                "the polygon is degenerate relative to its bounding box"
            )
    return np.concatenate(got, axis=0)[:n_points]

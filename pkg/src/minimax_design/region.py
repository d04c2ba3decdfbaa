"""Bounded design regions: containment, transforms, clipping.

Four region families are supported: the unit hypercube [0,1]^p, the ordered
simplex {0 <= x_1 <= ... <= x_p <= 1}, the unit ball {sum x_i^2 <= 1}, and
simple closed polygons in the plane.  The first three admit an inverse
Rosenblatt transform (sequential conditional quantile map) that carries
uniform points on [0,1]^p to uniform points on the region; polygons are
handled by rejection sampling elsewhere.
"""

from __future__ import annotations

import numpy as np
from scipy.special import betaincinv

from .errors import MinimaxDesignError


class UnsupportedTransform(MinimaxDesignError):
    """The region has no inverse Rosenblatt transform."""


def _as_rows(x, dim):
    """Coerce x to a (k, dim) float array; remember if it was a single point."""
    arr = np.asarray(x, dtype=float)
    single = arr.ndim == 1
    if single:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != dim:
        raise ValueError(f"expected points of dimension {dim}, got shape {np.asarray(x).shape}")
    return arr, single


class Region:
    """Base class; concrete regions implement containment and projection."""

    kind: str = ""
    dim: int = 0

    def contains(self, x) -> np.ndarray | bool:
        """True for rows of x inside the closed region (boundary included)."""
        arr, single = _as_rows(x, self.dim)
        mask = self._contains_rows(arr)
        return bool(mask[0]) if single else mask

    def inverse_rosenblatt(self, u) -> np.ndarray:
        """Map points u in [0,1]^p onto the region, preserving uniformity."""
        arr, single = _as_rows(u, self.dim)
        if np.any(arr < 0.0) or np.any(arr > 1.0):
            raise ValueError("inverse_rosenblatt input must lie in [0,1]^p")
        out = self._inverse_rosenblatt_rows(arr)
        return out[0] if single else out

    def clip_to_region(self, x, candidates) -> np.ndarray:
        """Return x unchanged where feasible, else the nearest candidate point.

        ``candidates`` is a CandidateSet or an (N, p) array.  Infeasible rows
        are replaced by their Euclidean nearest neighbour among the candidate
        points, so the result is always a legal (finite-approximation) point.
        """
        pts = getattr(candidates, "points", candidates)
        pts = np.asarray(pts, dtype=float)
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise ValueError("candidate set is empty")
        arr, single = _as_rows(x, self.dim)
        out = arr.copy()
        bad = ~self._contains_rows(arr)
        if np.any(bad):
            tree = getattr(candidates, "kdtree", None)
            if tree is None:
                from scipy.spatial import cKDTree

                tree = cKDTree(pts)
            _, idx = tree.query(arr[bad])
            out[bad] = pts[np.atleast_1d(idx)]
        return out[0] if single else out

    def project(self, x) -> np.ndarray:
        """Euclidean projection onto the region (geometric, not candidate-based)."""
        arr, single = _as_rows(x, self.dim)
        out = self._project_rows(arr)
        return out[0] if single else out

    def diameter(self) -> float:
        raise NotImplementedError

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def outline(self, resolution: int = 256) -> np.ndarray:
        """Closed 2-d boundary polyline for plotting (dim == 2 only)."""
        raise NotImplementedError

    # subclass hooks -----------------------------------------------------
    def _contains_rows(self, arr) -> np.ndarray:
        raise NotImplementedError

    def _inverse_rosenblatt_rows(self, arr) -> np.ndarray:
        raise UnsupportedTransform(f"{self.kind} region has no inverse Rosenblatt transform")

    def _project_rows(self, arr) -> np.ndarray:
        raise NotImplementedError


class Hypercube(Region):
    kind = "hypercube"

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(dim)

    def __repr__(self):
        return f"Hypercube(dim={self.dim})"

    def _contains_rows(self, arr):
        return np.all((arr >= 0.0) & (arr <= 1.0), axis=1)

    def _inverse_rosenblatt_rows(self, arr):
        return arr.copy()

    def _project_rows(self, arr):
        return np.clip(arr, 0.0, 1.0)

    def diameter(self):
        return float(np.sqrt(self.dim))

    def bounding_box(self):
        return np.zeros(self.dim), np.ones(self.dim)

    def outline(self, resolution: int = 256):
        if self.dim != 2:
            raise ValueError("outline is only available for 2-d regions")
        return np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])


class Simplex(Region):
    """Ordered simplex {0 <= x_1 <= x_2 <= ... <= x_p <= 1}."""

    kind = "simplex"

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(dim)

    def __repr__(self):
        return f"Simplex(dim={self.dim})"

    def _contains_rows(self, arr):
        ok = (arr[:, 0] >= 0.0) & (arr[:, -1] <= 1.0)
        if self.dim > 1:
            ok &= np.all(np.diff(arr, axis=1) >= 0.0, axis=1)
        return ok

    def _inverse_rosenblatt_rows(self, arr):
        p = self.dim
        out = np.empty_like(arr)
        out[:, p - 1] = arr[:, p - 1] ** (1.0 / p)
        for i in range(p - 2, -1, -1):
            out[:, i] = out[:, i + 1] * arr[:, i] ** (1.0 / (i + 1))
        return out

    def _project_rows(self, arr):
        # isotonic regression (pool adjacent violators), then clamp to [0,1];
        # with identical bounds on every coordinate the clamp stays optimal
        out = np.empty_like(arr)
        for r in range(arr.shape[0]):
            out[r] = _isotonic(arr[r])
        return np.clip(out, 0.0, 1.0)

    def diameter(self):
        return float(np.sqrt(self.dim))

    def bounding_box(self):
        return np.zeros(self.dim), np.ones(self.dim)

    def outline(self, resolution: int = 256):
        if self.dim != 2:
            raise ValueError("outline is only available for 2-d regions")
        return np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [0.0, 0.0]])


def _isotonic(y: np.ndarray) -> np.ndarray:
    """Nondecreasing sequence nearest to y in least squares (PAV)."""
    n = len(y)
    level = y.astype(float).copy()
    weight = np.ones(n)
    idx = 0
    # blocks stored compactly in the prefix of level/weight
    for i in range(1, n):
        idx += 1
        level[idx] = y[i]
        weight[idx] = 1.0
        while idx > 0 and level[idx - 1] > level[idx]:
            total = weight[idx - 1] + weight[idx]
            level[idx - 1] = (weight[idx - 1] * level[idx - 1] + weight[idx] * level[idx]) / total
            weight[idx - 1] = total
            idx -= 1
    out = np.empty(n)
    pos = 0
    for b in range(idx + 1):
        cnt = int(weight[b])
        out[pos : pos + cnt] = level[b]
        pos += cnt
    return out


class Ball(Region):
    """Unit ball {sum x_i^2 <= 1}."""

    kind = "ball"

    def __init__(self, dim: int):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(dim)

    def __repr__(self):
        return f"Ball(dim={self.dim})"

    def _contains_rows(self, arr):
        return np.einsum("ij,ij->i", arr, arr) <= 1.0

    def _inverse_rosenblatt_rows(self, arr):
        # sequential conditional quantiles: coordinate i given the first i-1
        # coordinates is a symmetric Beta on the remaining radius
        p = self.dim
        out = np.empty_like(arr)
        r2 = np.ones(arr.shape[0])
        for i in range(p):
            remaining = p - i
            a = 0.5 * (remaining + 1)
            c = 2.0 * betaincinv(a, a, arr[:, i]) - 1.0
            out[:, i] = np.sqrt(r2) * c
            r2 = r2 * (1.0 - c * c)
            np.maximum(r2, 0.0, out=r2)
        # guard against last-ulp overshoot of the boundary
        norms = np.sqrt(np.einsum("ij,ij->i", out, out))
        over = norms > 1.0
        if np.any(over):
            out[over] /= norms[over, None]
        return out

    def _project_rows(self, arr):
        norms = np.sqrt(np.einsum("ij,ij->i", arr, arr))
        out = arr.copy()
        over = norms > 1.0
        if np.any(over):
            out[over] /= norms[over, None]
        return out

    def diameter(self):
        return 2.0

    def bounding_box(self):
        return -np.ones(self.dim), np.ones(self.dim)

    def outline(self, resolution: int = 256):
        if self.dim != 2:
            raise ValueError("outline is only available for 2-d regions")
        t = np.linspace(0.0, 2.0 * np.pi, resolution + 1)
        return np.column_stack([np.cos(t), np.sin(t)])


class Polygon2D(Region):
    """Simple closed polygon in the plane, boundary included."""

    kind = "polygon"

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValueError("polygon vertices must be an (m, 2) array")
        if v.shape[0] < 3:
            raise ValueError("polygon needs at least 3 vertices")
        if np.allclose(v[0], v[-1]):
            raise ValueError("polygon must not repeat the first vertex at the end")
        area2 = float(np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]))
        scale = float(np.max(np.ptp(v, axis=0)))
        if scale <= 0.0 or abs(area2) <= 1e-12 * scale * scale:
            raise ValueError("polygon vertices are collinear or degenerate")
        _check_simple(v)
        self.vertices = v
        self.dim = 2

    def __repr__(self):
        return f"Polygon2D({self.vertices.shape[0]} vertices)"

    def _contains_rows(self, arr):
        return _polygon_contains(self.vertices, arr)

    def _project_rows(self, arr):
        out = arr.copy()
        outside = ~self._contains_rows(arr)
        if np.any(outside):
            out[outside] = _nearest_on_boundary(self.vertices, arr[outside])
        return out

    def diameter(self):
        v = self.vertices
        d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=-1)
        return float(np.sqrt(d2.max()))

    def bounding_box(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def outline(self, resolution: int = 256):
        return np.vstack([self.vertices, self.vertices[:1]])


def _segments(v):
    return v, np.roll(v, -1, axis=0)


def _check_simple(v):
    """Reject self-intersecting polygons (proper crossings between edges)."""
    a, b = _segments(v)
    m = len(v)
    for i in range(m):
        for j in range(i + 1, m):
            if j == i or (j + 1) % m == i or (i + 1) % m == j:
                continue  # adjacent edges share an endpoint
            if _segments_cross(a[i], b[i], a[j], b[j]):
                raise ValueError("polygon edges intersect; region must be a simple polygon")


def _cross2(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def _segments_cross(p1, p2, p3, p4):
    d1 = _cross2(p4 - p3, p1 - p3)
    d2 = _cross2(p4 - p3, p2 - p3)
    d3 = _cross2(p2 - p1, p3 - p1)
    d4 = _cross2(p2 - p1, p4 - p1)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def _polygon_contains(v, pts):
    """Even-odd containment with the boundary counted inside."""
    x, y = pts[:, 0], pts[:, 1]
    inside = np.zeros(len(pts), dtype=bool)
    on_edge = np.zeros(len(pts), dtype=bool)
    scale = float(np.max(np.ptp(v, axis=0)))
    tol = 1e-12 * max(scale, 1.0)
    a, b = _segments(v)
    for (x1, y1), (x2, y2) in zip(a, b):
        ex, ey = x2 - x1, y2 - y1
        seg2 = ex * ex + ey * ey
        # boundary test: zero cross product and projection within the segment
        cross = (x - x1) * ey - (y - y1) * ex
        t = (x - x1) * ex + (y - y1) * ey
        on_edge |= (np.abs(cross) <= tol * np.sqrt(seg2)) & (t >= -tol) & (t <= seg2 + tol)
        # crossing-number update for a ray cast in +x direction
        straddles = (y1 > y) != (y2 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xs = x1 + (y - y1) / ey * ex
        hit = straddles & (x < xs)
        inside ^= hit
    return inside | on_edge


def _nearest_on_boundary(v, pts):
    a, b = _segments(v)
    e = b - a
    seg2 = np.einsum("ij,ij->i", e, e)
    best = np.full(len(pts), np.inf)
    out = np.empty_like(pts)
    for k in range(len(v)):
        t = ((pts - a[k]) @ e[k]) / seg2[k]
        t = np.clip(t, 0.0, 1.0)
        proj = a[k] + t[:, None] * e[k]
        d2 = np.einsum("ij,ij->i", pts - proj, pts - proj)
        better = d2 < best
        best[better] = d2[better]
        out[better] = proj[better]
    return out


def polygon_from_file(path) -> Polygon2D:
    """Read a polygon from a text file, one "x,y" vertex per line."""
    verts = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split(",")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'x,y', got {text!r}")
            try:
                verts.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    return Polygon2D(np.array(verts))


def make_region(name: str, dim: int) -> Region:
    """Build a region from its CLI name: hypercube|simplex|ball|polygon:<file>."""
    if name == "hypercube":
        return Hypercube(dim)
    if name == "simplex":
        return Simplex(dim)
    if name == "ball":
        return Ball(dim)
    if name.startswith("polygon:"):
        reg = polygon_from_file(name.split(":", 1)[1])
        if dim not in (0, 2):
            raise ValueError("polygon regions are two-dimensional")
        return reg
    raise ValueError(f"unknown region {name!r}; expected hypercube, simplex, ball or polygon:<file>")

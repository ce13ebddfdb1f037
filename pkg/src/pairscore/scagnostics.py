"""Graph-theoretic scatterplot diagnostics.

Pipeline: rescale to the unit square and bin, build the Euclidean minimum
spanning tree, the convex hull and an alpha shape, then read nine scores off
those graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, errors
from .registry import SCAGNOSTIC_NAMES

# binning and shape constants
BIN_THRESHOLD = 250
GRID = 40
ALPHA_QUANTILE = 0.90
STRIATION_COS = 0.75


@dataclass(frozen=True)
class BinnedCloud:
    points: np.ndarray  # (m, 2), coordinates in [0, 1]
    weights: np.ndarray  # (m,), positive

    def __len__(self):
        return len(self.points)


@dataclass
class GeomGraphs:
    mst_edges: list  # (i, j, length)
    hull: list  # vertex indices, counter-clockwise
    hull_area: float
    alpha_value: float
    alpha_edges: list = field(default_factory=list)  # Delaunay edges, length <= alpha
    # alpha shape: union of Delaunay triangles with circumradius <= alpha
    alpha_area: float = 0.0
    alpha_perimeter: float = 0.0


def _unit(v):
    v = np.asarray(v, dtype=float)
    lo, hi = v.min(), v.max()
    return (v - lo) / (hi - lo)


def bin_cloud(x, y) -> BinnedCloud:
    """Rescale to the unit square; above 250 points, aggregate on a 40x40 grid.

    Each occupied cell contributes its points' centroid with their count as
    weight, which keeps the binning symmetric under swapping the axes.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise errors.LengthMismatch("inputs differ in length")
    if len(x) < 3:
        raise errors.DegenerateCloud("fewer than 3 points")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise errors.DegenerateCloud("constant axis")
    ux, uy = _unit(x), _unit(y)
    n = len(x)
    if n <= BIN_THRESHOLD:
        return BinnedCloud(np.column_stack([ux, uy]), np.ones(n))
    ix = np.minimum((ux * GRID).astype(np.int64), GRID - 1)
    iy = np.minimum((uy * GRID).astype(np.int64), GRID - 1)
    cell = ix * GRID + iy
    occupied, inv = np.unique(cell, return_inverse=True)
    inv = inv.reshape(-1)
    w = np.bincount(inv).astype(float)
    cx = np.bincount(inv, weights=ux) / w
    cy = np.bincount(inv, weights=uy) / w
    return BinnedCloud(np.column_stack([cx, cy]), w)


# -- geometry ----------------------------------------------------------------

def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> list[int]:
    """Andrew's monotone chain; returns indices in counter-clockwise order."""
    pts = np.asarray(points, dtype=float)
    order = sorted(range(len(pts)), key=lambda i: (pts[i, 0], pts[i, 1]))
    uniq = []
    for i in order:
        if not uniq or (pts[i] != pts[uniq[-1]]).any():
            uniq.append(i)
    if len(uniq) <= 2:
        return uniq

    def chain(seq):
        out = []
        for i in seq:
            while len(out) >= 2 and _cross(pts[out[-2]], pts[out[-1]], pts[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower = chain(uniq)
    upper = chain(reversed(uniq))
    return lower[:-1] + upper[:-1]


def polygon_area(pts) -> float:
    if len(pts) < 3:
        return 0.0
    p = np.asarray(pts, dtype=float)
    x, y = p[:, 0], p[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def _edge_len(pts, i, j):
    d = pts[i] - pts[j]
    return math.sqrt(float(d @ d))


def _delaunay(pts):
    try:
        from scipy.spatial import Delaunay, QhullError
    except ImportError:  # pragma: no cover - scipy is a hard dependency
        return None
    try:
        return Delaunay(pts).simplices
    except (QhullError, ValueError):
        return None


def build_graphs(c: BinnedCloud) -> GeomGraphs:
    pts = c.points
    m = len(pts)
    if m < 3:
        raise errors.DegenerateCloud("fewer than 3 points")
    parent, length = _kernels.prim_mst(pts)
    mst = [(int(parent[v]), v, float(length[v])) for v in range(1, m)]
    hull = convex_hull(pts)
    hull_area = polygon_area(pts[hull])
    lengths = np.array([e[2] for e in mst])
    alpha = float(np.quantile(lengths, ALPHA_QUANTILE))
    g = GeomGraphs(mst, hull, hull_area, alpha)

    tri = _delaunay(pts) if hull_area > 0 else None
    if tri is None:
        # no triangulation: alpha graph falls back to every pair within alpha
        d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(axis=-1))
        ii, jj = np.nonzero(np.triu(d <= alpha, k=1))
        g.alpha_edges = [(int(i), int(j), float(d[i, j])) for i, j in zip(ii, jj)]
        return g
    edges = {}
    kept = []
    for t in tri:
        a, b, cc = sorted(int(v) for v in t)
        sides = ((a, b), (a, cc), (b, cc))
        la, lb, lc = (edges.setdefault(s, _edge_len(pts, *s)) for s in sides)
        area = polygon_area(pts[[a, b, cc]])
        if area > 0 and la * lb * lc / (4.0 * area) <= alpha:
            kept.append(sides)
            g.alpha_area += area
    g.alpha_edges = sorted((i, j, ln) for (i, j), ln in edges.items() if ln <= alpha)
    boundary: dict = {}
    for sides in kept:
        for s in sides:
            boundary[s] = boundary.get(s, 0) + 1
    g.alpha_perimeter = float(sum(edges[s] for s, k in boundary.items() if k == 1))
    return g


# -- scores --------------------------------------------------------------------

def _outlying(lengths):
    q25, q75 = np.quantile(lengths, [0.25, 0.75])
    omega = q75 + 1.5 * (q75 - q25)
    total = lengths.sum()
    if total <= 0:
        return 0.0
    return float(lengths[lengths > omega].sum() / total)


def _skewed(lengths):
    q10, q50, q90 = np.quantile(lengths, [0.1, 0.5, 0.9])
    if q90 - q10 <= 0:
        return 0.0
    return float((q90 - q50) / (q90 - q10))


def _clumpy(m, mst):
    """max over edges of 1 - (longest edge in the runt) / (edge length).

    The runt of an edge is the smaller of the two subtrees joined by it when
    only strictly shorter edges are present.
    """
    parent = list(range(m))
    size = [1] * m
    longest = [0.0] * m
    n_edges = [0] * m

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    best = 0.0
    edges = sorted(mst, key=lambda e: e[2])
    k = 0
    while k < len(edges):
        j = k
        while j < len(edges) and edges[j][2] - edges[k][2] <= 1e-12 * edges[k][2]:
            j += 1
        batch = edges[k:j]
        for u, v, ln in batch:
            if ln <= 0:
                continue
            ru, rv = find(u), find(v)
            cands = sorted([(size[ru], n_edges[ru], longest[ru]),
                            (size[rv], n_edges[rv], longest[rv])])
            small = [cc for cc in cands if cc[0] == cands[0][0]]
            runt_edges = max(cc[1] for cc in small)
            runt_long = max(cc[2] for cc in small)
            if runt_edges > 0:
                best = max(best, 1.0 - runt_long / ln)
        for u, v, ln in batch:
            ru, rv = find(u), find(v)
            if ru == rv:
                continue
            if size[ru] < size[rv]:
                ru, rv = rv, ru
            parent[rv] = ru
            size[ru] += size[rv]
            n_edges[ru] += n_edges[rv] + 1
            longest[ru] = max(longest[ru], longest[rv], ln)
        k = j
    return best


def _degree_stats(m, pts, mst):
    nbrs = [[] for _ in range(m)]
    for u, v, _ in mst:
        nbrs[u].append(v)
        nbrs[v].append(u)
    deg = np.array([len(nb) for nb in nbrs])
    striated = 0
    for v in np.flatnonzero(deg == 2):
        a, b = nbrs[v]
        d1 = pts[a] - pts[v]
        d2 = pts[b] - pts[v]
        den = math.sqrt(float(d1 @ d1) * float(d2 @ d2))
        if den > 0 and abs(float(d1 @ d2)) / den >= STRIATION_COS:
            striated += 1
    return deg, striated


def weighted_midranks(v, w) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    _, inv = np.unique(v, return_inverse=True)
    inv = inv.reshape(-1)
    tie_w = np.bincount(inv, weights=w)
    below = np.concatenate([[0.0], np.cumsum(tie_w)[:-1]])
    return (below + (tie_w + 1.0) / 2.0)[inv]


def weighted_spearman(x, y, w) -> float:
    rx = weighted_midranks(x, w)
    ry = weighted_midranks(y, w)
    w = np.asarray(w, dtype=float) / np.sum(w)
    dx = rx - w @ rx
    dy = ry - w @ ry
    den = math.sqrt(float(w @ (dx * dx)) * float(w @ (dy * dy)))
    return float(w @ (dx * dy)) / den if den > 0 else math.nan


def _clip01(v):
    return v if math.isnan(v) else min(1.0, max(0.0, v))


def scores_from_cloud(c: BinnedCloud) -> dict[str, float]:
    g = build_graphs(c)
    pts = c.points
    m = len(pts)
    lengths = np.array([e[2] for e in g.mst_edges])
    deg, striated = _degree_stats(m, pts, g.mst_edges)
    leaves = int(np.sum(deg == 1))
    deg2 = int(np.sum(deg == 2))
    if g.hull_area > 0:
        convex = g.alpha_area / g.hull_area
        skinny = (1.0 - math.sqrt(4 * math.pi * g.alpha_area) / g.alpha_perimeter
                  if g.alpha_perimeter > 0 else 1.0)
    else:
        convex = skinny = math.nan
    rho = weighted_spearman(pts[:, 0], pts[:, 1], c.weights)
    out = {
        "outlying": _outlying(lengths),
        "skewed": _skewed(lengths),
        "clumpy": _clumpy(m, g.mst_edges),
        "sparse": float(np.quantile(lengths, 0.9)),
        "striated": striated / m,
        "convex": convex,
        "skinny": skinny,
        "stringy": deg2 / (m - leaves) if m > leaves else math.nan,
        "monotonic": rho * rho,
    }
    return {k: _clip01(out[k]) for k in SCAGNOSTIC_NAMES}


def scagnostics(x, y) -> dict[str, float]:
    """All nine scores; every score is NaN for a degenerate cloud."""
    try:
        cloud = bin_cloud(x, y)
    except errors.DegenerateCloud:
        return {k: math.nan for k in SCAGNOSTIC_NAMES}
    return scores_from_cloud(cloud)

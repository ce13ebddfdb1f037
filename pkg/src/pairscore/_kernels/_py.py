"""Reference kernels in Python/numpy.

These mirror ``_ckernels.pyx`` one-for-one and are used when the compiled
extension is unavailable (or ``PAIRSCORE_PURE=1``).
"""

import math

import numpy as np


def equipartition(sorted_vals, k):
    """Assign sorted values to ``k`` near-equal-size bins, keeping ties together.

    Returns ``(bin_index, n_bins_used)``.
    """
    vals = np.asarray(sorted_vals, dtype=float)
    n = len(vals)
    out = np.empty(n, dtype=np.int64)
    i = 0
    h = 0
    curr = 0
    size = n / k
    while i < n:
        s = 1
        while i + s < n and vals[i + s] == vals[i]:
            s += 1
        if h != 0 and abs(h + s - size) >= abs(h - size):
            curr += 1
            h = 0
            size = (n - i) / (k - curr) if k > curr else math.inf
        out[i:i + s] = curr
        i += s
        h += s
    return out, curr + 1


def clumps(sorted_x, rows):
    """Maximal runs of x-sorted points sharing a row; mixed tie-runs form their own clump."""
    xs = np.asarray(sorted_x, dtype=float)
    q = np.array(rows, dtype=np.int64)
    n = len(xs)
    i = 0
    c = -1
    while i < n:
        s = 1
        mixed = False
        while i + s < n and xs[i + s] == xs[i]:
            if q[i + s] != q[i]:
                mixed = True
            s += 1
        if s > 1 and mixed:
            q[i:i + s] = c
            c -= 1
        i += s
    out = np.zeros(n, dtype=np.int64)
    if n > 1:
        out[1:] = np.cumsum(q[1:] != q[:-1])
    return out, int(out[-1]) + 1 if n else 0


def _plogp_sum(counts, total):
    # -sum p log p over the last axis, treating 0 log 0 = 0
    with np.errstate(divide="ignore", invalid="ignore"):
        p = counts / total
        t = np.where(counts > 0, p * np.log(np.where(counts > 0, p, 1.0)), 0.0)
    return -t.sum(axis=-1)


def optimize_x_axis(rows, n_rows, cols, n_cols, max_cols):
    """Best mutual information over column partitions built from clump boundaries.

    ``rows`` and ``cols`` are per-point row and clump indices in x-sorted
    order. Returns normalized scores for 2..``max_cols`` columns.
    """
    p, q = n_cols, n_rows
    if p <= 1 or q <= 1 or max_cols < 2:
        return np.zeros(max(max_cols - 1, 0))
    hist = np.zeros((p, q), dtype=float)
    np.add.at(hist, (cols, rows), 1.0)
    cum = np.vstack([np.zeros((1, q)), np.cumsum(hist, axis=0)])  # cum[t] = first t clumps
    c = cum.sum(axis=1)
    n = c[p]
    hq = _plogp_sum(cum[p], n)

    # hp2q[s, t]: row entropy of the points in clumps s+1..t
    span = cum[None, :, :] - cum[:, None, :]
    tot = c[None, :] - c[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        hp2q = np.where(tot > 0, _plogp_sum(span, np.where(tot > 0, tot, 1.0)[..., None]), 0.0)

    I = np.full((p + 1, max(max_cols, 2) + 1), np.nan)
    for t in range(2, p + 1):
        ct = c[t]
        s = np.arange(1, t + 1)
        cs = c[s]
        left = cum[s]
        right = cum[t][None, :] - left
        hp3 = _plogp_sum(np.stack([cs, ct - cs], axis=1), ct)
        hp3q = _plogp_sum(np.concatenate([left, right], axis=1), ct)
        I[t, 2] = hq + np.max(hp3 - hp3q)
    for l in range(3, max_cols + 1):
        for t in range(l, p + 1):
            ct = c[t]
            s = np.arange(l - 1, t + 1)
            cs = c[s]
            f = (cs / ct) * (I[s, l - 1] - hq) - ((ct - cs) / ct) * hp2q[s, t]
            I[t, l] = hq + np.max(f)
    for l in range(p + 1, max_cols + 1):
        I[p, l] = I[p, p]
    ks = np.arange(2, max_cols + 1)
    return I[p, 2:max_cols + 1] / np.minimum(np.log(ks), math.log(q))


def prim_mst(points):
    """Euclidean minimum spanning tree by Prim's algorithm on the complete graph.

    Returns ``(parent, length)`` arrays; vertex 0 is the root with parent -1.
    """
    pts = np.asarray(points, dtype=float)
    m = len(pts)
    parent = np.full(m, -1, dtype=np.int64)
    length = np.zeros(m)
    if m == 0:
        return parent, length
    in_tree = np.zeros(m, dtype=bool)
    best = np.full(m, np.inf)
    best_from = np.full(m, -1, dtype=np.int64)
    u = 0
    for _ in range(m):
        in_tree[u] = True
        dx = pts[:, 0] - pts[u, 0]
        dy = pts[:, 1] - pts[u, 1]
        d = np.sqrt(dx * dx + dy * dy)
        better = (~in_tree) & (d < best)
        best[better] = d[better]
        best_from[better] = u
        cand = np.where(in_tree, np.inf, best)
        v = int(np.argmin(cand))
        if not np.isfinite(cand[v]):
            break
        parent[v] = best_from[v]
        length[v] = best[v]
        u = v
    return parent, length

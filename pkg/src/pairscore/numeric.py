"""Association scores for numeric-numeric pairs.

All functions take two equal-length float arrays with missing rows already
removed, and return NaN when the score is undefined (too few observations,
zero variance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import _kernels, errors

MIN_OBS = 3
MIC_MIN_OBS = 8


def _pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise errors.LengthMismatch(f"inputs differ in shape: {x.shape} vs {y.shape}")
    return x, y


def _clamp(v, lo=-1.0, hi=1.0):
    return min(hi, max(lo, v))


def pearson(x, y) -> float:
    """Product-moment correlation."""
    x, y = _pair(x, y)
    if len(x) < MIN_OBS:
        return math.nan
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    syy = float(yc @ yc)
    if sxx <= 0.0 or syy <= 0.0:
        return math.nan
    return _clamp(float(xc @ yc) / math.sqrt(sxx * syy))


def midranks(x) -> np.ndarray:
    return stats.rankdata(x, method="average")


def rank_correlation(x, y, method: str = "spearman") -> float:
    """Spearman's rho (Pearson on mid-ranks) or Kendall's tau-b."""
    x, y = _pair(x, y)
    if method == "spearman":
        if len(x) < MIN_OBS:
            return math.nan
        return pearson(midranks(x), midranks(y))
    if method == "kendall":
        if len(x) < MIN_OBS or np.ptp(x) == 0 or np.ptp(y) == 0:
            return math.nan
        tau = stats.kendalltau(x, y, variant="b").statistic
        return math.nan if math.isnan(tau) else _clamp(float(tau))
    raise ValueError(f"unknown rank correlation method {method!r}")


def correlation(x, y, method: str = "pearson") -> float:
    if method == "pearson":
        return pearson(x, y)
    return rank_correlation(x, y, method)


def _centered_distances(v):
    d = np.abs(v[:, None] - v[None, :])
    return d - d.mean(axis=0)[None, :] - d.mean(axis=1)[:, None] + d.mean()


def distance_correlation(x, y) -> float:
    """Distance correlation, reported as the root of the squared V-statistic ratio."""
    x, y = _pair(x, y)
    if len(x) < MIN_OBS:
        return math.nan
    a = _centered_distances(x)
    b = _centered_distances(y)
    vxy = float(np.mean(a * b))
    vxx = float(np.mean(a * a))
    vyy = float(np.mean(b * b))
    if vxx <= 0.0 or vyy <= 0.0:
        return math.nan
    r2 = vxy / math.sqrt(vxx * vyy)
    return _clamp(math.sqrt(max(r2, 0.0)), 0.0, 1.0)


# -- maximal information coefficient ----------------------------------------

@dataclass(frozen=True)
class MicParams:
    """Grid-search parameters: grids satisfy ``rows * cols <= n ** alpha``;
    each axis partition is built from at most ``c`` times as many clumps as
    final columns."""

    alpha: float = 0.6
    c: float = 15.0

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError("MIC alpha must lie in (0, 1]")
        if self.c < 1.0:
            raise ValueError("MIC clump factor c must be >= 1")

    def grid_bound(self, n: int) -> float:
        return max(n ** self.alpha, 4.0)


def _one_orientation(x, y, bound, c, out):
    """Equipartition y, optimise the x partition; update ``out[(cols, rows)]``."""
    n = len(x)
    by_y = np.argsort(y, kind="stable")
    by_x = np.argsort(x, kind="stable")
    xs = x[by_x]
    ys = y[by_y]
    for n_rows in range(2, max(int(bound / 2), 2) + 1):
        max_cols = int(bound / n_rows)
        if max_cols < 2:
            continue
        row_sorted, q = _kernels.equipartition(ys, n_rows)
        rows = np.empty(n, dtype=np.int64)
        rows[by_y] = row_sorted
        rows = rows[by_x]
        cl, p = _kernels.clumps(xs, rows)
        k_hat = max(int(c * max_cols), 1)
        if p > k_hat:
            cl, p = _kernels.equipartition(cl.astype(float), k_hat)
        scores = _kernels.optimize_x_axis(rows, q, cl, p, max_cols)
        for n_cols, s in zip(range(2, max_cols + 1), scores):
            key = (n_cols, n_rows)
            out[key] = max(out.get(key, -math.inf), float(s))


def characteristic_matrix(x, y, params: MicParams = MicParams()) -> dict:
    """Approximate characteristic matrix as ``{(x_bins, y_bins): score}``."""
    x, y = _pair(x, y)
    bound = params.grid_bound(len(x))
    xy: dict = {}
    _one_orientation(x, y, bound, params.c, xy)
    yx: dict = {}
    _one_orientation(y, x, bound, params.c, yx)
    out = dict(xy)
    for (a, b), s in yx.items():
        out[(b, a)] = max(out.get((b, a), -math.inf), s)
    return out


def mic(x, y, params: MicParams = MicParams()) -> dict[str, float]:
    """Maximal and total information coefficients.

    ``TIC`` is the mean of the characteristic matrix entries, so it lies in
    [0, 1] alongside ``MIC`` (the maximum entry).
    """
    x, y = _pair(x, y)
    if len(x) < MIC_MIN_OBS or np.ptp(x) == 0 or np.ptp(y) == 0:
        return {"MIC": math.nan, "TIC": math.nan}
    m = characteristic_matrix(x, y, params)
    vals = np.array(list(m.values()))
    vals = np.clip(vals, 0.0, 1.0)
    return {"MIC": float(vals.max()), "TIC": float(vals.mean())}

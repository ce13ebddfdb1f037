"""Alternating conditional expectations for a single variable pair."""

from __future__ import annotations

import math

import numpy as np

from . import errors
from .categorical import canonical_correlation, first_correspondence
from .dataset import Column

MIN_OBS = 10
MAX_ITER = 25
TOL = 1e-6
SPAN = 0.3


def _standardize(v):
    v = v - v.mean()
    sd = math.sqrt(float(v @ v) / len(v))
    return v / sd if sd > 0 else v * 0.0


def _cor(a, b):
    a = a - a.mean()
    b = b - b.mean()
    den = math.sqrt(float(a @ a) * float(b @ b))
    return float(a @ b) / den if den > 0 else 0.0


class _Smoother:
    """Conditional expectation given one variable.

    Factors average within levels; numerics use a centered running mean of
    width ceil(0.3 n) over the sorted values, averaged across ties.
    """

    def __init__(self, col: Column):
        n = len(col)
        self.factor = col.is_factor
        if self.factor:
            _, g = np.unique(col.values, return_inverse=True)
            self.groups = g.reshape(-1)
            self.counts = np.bincount(self.groups)
            return
        v = np.asarray(col.values, dtype=float)
        self.order = np.argsort(v, kind="stable")
        _, ties = np.unique(v[self.order], return_inverse=True)
        self.ties = ties.reshape(-1)
        self.tie_counts = np.bincount(self.ties)
        half = math.ceil(SPAN * n) // 2
        idx = np.arange(n)
        self.lo = np.maximum(idx - half, 0)
        self.hi = np.minimum(idx + half, n - 1) + 1

    def __call__(self, target):
        if self.factor:
            means = np.bincount(self.groups, weights=target) / self.counts
            return means[self.groups]
        t = target[self.order]
        cs = np.concatenate([[0.0], np.cumsum(t)])
        fit = (cs[self.hi] - cs[self.lo]) / (self.hi - self.lo)
        fit = (np.bincount(self.ties, weights=fit) / self.tie_counts)[self.ties]
        out = np.empty_like(fit)
        out[self.order] = fit
        return out


def _initial_response(x: Column, y: Column):
    """Starting scores for the response giving the canonical correlation."""
    if not y.is_factor:
        return _standardize(np.asarray(y.values, dtype=float))
    _, gy = np.unique(y.values, return_inverse=True)
    gy = gy.reshape(-1)
    if x.is_factor:
        _, gx = np.unique(x.values, return_inverse=True)
        counts = np.zeros((gx.max() + 1, gy.max() + 1))
        np.add.at(counts, (gx.reshape(-1), gy), 1.0)
        _, _, col_scores = first_correspondence(counts)
        return _standardize(col_scores[gy])
    xv = np.asarray(x.values, dtype=float)
    means = np.bincount(gy, weights=xv) / np.bincount(gy)
    return _standardize(means[gy])


def _ace_oriented(x: Column, y: Column) -> float:
    smooth_x = _Smoother(x)
    smooth_y = _Smoother(y)
    theta = _initial_response(x, y)
    best = -math.inf
    prev = math.inf
    for _ in range(MAX_ITER):
        phi = smooth_x(theta)
        r = _cor(theta, phi)
        best = max(best, r)
        if abs(r * r - prev) < TOL:
            break
        prev = r * r
        theta = _standardize(smooth_y(phi))
    return best


def ace_correlation(a: Column, b: Column) -> float:
    """Correlation between ACE-optimal transformations of ``a`` and ``b``.

    The result never falls below the canonical correlation: the canonical
    scoring is the starting point and the best correlation visited is kept.
    Both response orientations are run so the score is symmetric.
    """
    if len(a) != len(b):
        raise errors.LengthMismatch("columns differ in length")
    n = len(a)
    for col in (a, b):
        if col.is_factor and len(np.unique(col.values)) < 2:
            return math.nan
        if not col.is_factor and (n == 0 or np.ptp(col.values) == 0):
            return math.nan
    if (not a.is_factor or not b.is_factor) and n < MIN_OBS:
        return math.nan
    if n < 2:
        return math.nan
    start = canonical_correlation(a, b)
    if math.isnan(start):
        return math.nan
    best = max(start, _ace_oriented(a, b), _ace_oriented(b, a))
    return min(1.0, max(0.0, best))

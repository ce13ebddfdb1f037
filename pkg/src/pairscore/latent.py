"""Polychoric and polyserial correlation (two-step maximum likelihood)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import minimize_scalar
from scipy.special import ndtr, ndtri

from . import errors
from .categorical import contingency
from .dataset import Column

RHO_BOUND = 0.999
_TWO_PI = 2.0 * math.pi


def _half_nodes(m):
    x, w = leggauss(m)
    keep = x < 0
    return x[keep], w[keep]


# Gauss-Legendre rules used by Genz's BVNU (6, 12 and 20 points)
_GL = {3: _half_nodes(6), 6: _half_nodes(12), 10: _half_nodes(20)}


def bvn_upper(h, k, r: float) -> np.ndarray:
    """P(X > h, Y > k) for a standard bivariate normal with correlation ``r``.

    Drezner-Wesolowsky integration as refined by Genz (absolute error
    around 1e-15). Infinite limits are handled exactly.
    """
    h, k = np.broadcast_arrays(np.asarray(h, dtype=float), np.asarray(k, dtype=float))
    out = np.zeros(h.shape)
    lo_h, lo_k = np.isneginf(h), np.isneginf(k)
    hi = np.isposinf(h) | np.isposinf(k)
    out[lo_h & lo_k] = 1.0
    m = lo_h & ~lo_k & ~hi
    out[m] = ndtr(-k[m])
    m = lo_k & ~lo_h & ~hi
    out[m] = ndtr(-h[m])
    fin = np.isfinite(h) & np.isfinite(k)
    if fin.any():
        out[fin] = _bvnu_finite(h[fin], k[fin], float(r))
    return out


def _bvnu_finite(h, k, r):
    ar = abs(r)
    lg = 3 if ar < 0.3 else (6 if ar < 0.75 else 10)
    x, w = _GL[lg]
    hk = h * k
    if r == 0.0:
        return ndtr(-h) * ndtr(-k)
    if ar < 0.925:
        hs = (h * h + k * k) / 2.0
        asr = math.asin(r)
        bvn = np.zeros_like(h)
        for xi, wi in zip(x, w):
            for sgn in (-1.0, 1.0):
                sn = math.sin(asr * (1.0 + sgn * xi) / 2.0)
                bvn += wi * np.exp((sn * hk - hs) / (1.0 - sn * sn))
        return bvn * asr / (2.0 * _TWO_PI) + ndtr(-h) * ndtr(-k)
    if r < 0:
        k = -k
        hk = -hk
    bvn = np.zeros_like(h)
    if ar < 1.0:
        as_ = (1.0 - r) * (1.0 + r)
        a = math.sqrt(as_)
        bs = (h - k) ** 2
        c = (4.0 - hk) / 8.0
        d = (12.0 - hk) / 16.0
        bvn = a * np.exp(-(bs / as_ + hk) / 2.0) * (
            1.0 - c * (bs - as_) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as_ * as_ / 5.0)
        b = np.sqrt(bs)
        tail = np.where(
            hk > -160.0,
            np.exp(-hk / 2.0) * math.sqrt(_TWO_PI) * ndtr(-b / a) * b
            * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0),
            0.0)
        bvn = bvn - tail
        a /= 2.0
        for xi, wi in zip(x, w):
            for sgn in (-1.0, 1.0):
                xs = (a * (sgn * xi + 1.0)) ** 2
                rs = math.sqrt(1.0 - xs)
                bvn = bvn + a * wi * (
                    np.exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs
                    - np.exp(-(bs / xs + hk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs)))
        bvn = -bvn / _TWO_PI
    if r > 0:
        return bvn + ndtr(-np.maximum(h, k))
    bvn = -bvn
    return np.where(k > h, bvn + np.where(h < 0, ndtr(k) - ndtr(h), ndtr(-h) - ndtr(-k)), bvn)


def bvn_cdf(h, k, r: float) -> np.ndarray:
    """P(X < h, Y < k)."""
    return bvn_upper(-np.asarray(h, dtype=float), -np.asarray(k, dtype=float), r)


def rectangle_probs(tau_x, tau_y, r: float) -> np.ndarray:
    """Cell probabilities of the grid cut by thresholds ``tau_x`` x ``tau_y``."""
    ex = np.concatenate([[-np.inf], tau_x, [np.inf]])
    ey = np.concatenate([[-np.inf], tau_y, [np.inf]])
    if r == 0.0:
        px = np.diff(ndtr(ex))
        py = np.diff(ndtr(ey))
        return np.outer(px, py)
    F = bvn_cdf(ex[:, None], ey[None, :], r)
    F[0, :] = 0.0
    F[:, 0] = 0.0
    return np.diff(np.diff(F, axis=0), axis=1)


@dataclass(frozen=True)
class LatentThresholds:
    tau_x: np.ndarray
    tau_y: np.ndarray
    rho: float


def thresholds(margins) -> np.ndarray:
    """Normal quantiles of the cumulative marginal proportions (interior cuts)."""
    m = np.asarray(margins, dtype=float)
    cum = np.cumsum(m)[:-1] / m.sum()
    return ndtri(cum)


def _maximize(loglik) -> float:
    res = minimize_scalar(lambda r: -loglik(r), bounds=(-RHO_BOUND, RHO_BOUND),
                          method="bounded", options={"xatol": 1e-8})
    return float(res.x)


def polychoric_fit(counts) -> LatentThresholds | None:
    counts = np.asarray(counts, dtype=float)
    counts = counts[counts.sum(axis=1) > 0][:, counts.sum(axis=0) > 0]
    if min(counts.shape) < 2:
        return None
    tx = thresholds(counts.sum(axis=1))
    ty = thresholds(counts.sum(axis=0))
    pos = counts > 0

    def loglik(r):
        p = rectangle_probs(tx, ty, r)
        return float(np.sum(counts[pos] * np.log(np.maximum(p[pos], 1e-300))))

    return LatentThresholds(tx, ty, _maximize(loglik))


def polychoric(a: Column, b: Column) -> float:
    """Latent bivariate-normal correlation of two ordered factors."""
    if len(a) == 0:
        return math.nan
    counts = np.asarray(contingency(a, b).counts, dtype=float)
    # rho is invariant to transposing the table, but the optimizer's path is not;
    # fitting one canonical orientation makes polychoric(a, b) == polychoric(b, a) exactly
    if (counts.T.shape, counts.T.ravel().tolist()) < (counts.shape, counts.ravel().tolist()):
        counts = counts.T
    fit = polychoric_fit(counts)
    return math.nan if fit is None else fit.rho


def polyserial(a: Column, x: Column) -> float:
    """Latent correlation between an ordered factor and a numeric variable.

    Arguments may be given in either order.
    """
    if a.is_factor == x.is_factor:
        raise errors.MeasureError("polyserial needs one factor and one numeric column")
    if not a.is_factor:
        a, x = x, a
    if len(a) != len(x):
        raise errors.LengthMismatch("columns differ in length")
    _, codes = np.unique(a.values, return_inverse=True)
    codes = codes.reshape(-1)
    k = codes.max() + 1 if len(codes) else 0
    xv = np.asarray(x.values, dtype=float)
    if k < 2 or len(xv) < 3 or np.ptp(xv) == 0:
        return math.nan
    # fixed summation order, so the fit does not depend on how rows are arranged
    order = np.lexsort((xv, codes))
    codes, xv = codes[order], xv[order]
    z = (xv - xv.mean()) / xv.std()
    tau = np.concatenate([[-np.inf], thresholds(np.bincount(codes)), [np.inf]])
    upper = tau[codes + 1]
    lower = tau[codes]

    def loglik(r):
        s = math.sqrt(1.0 - r * r)
        p = ndtr((upper - r * z) / s) - ndtr((lower - r * z) / s)
        return float(np.sum(np.log(np.maximum(p, 1e-300))))

    return _maximize(loglik)

"""Scores for factor-factor and factor-numeric pairs.

Contingency-table measures work on :class:`ContingencyTable`; the measures
that accept any pair type (canonical correlation, max-NMI) take
:class:`~pairscore.dataset.Column` objects with missing rows already removed.
Empty factor levels are dropped before any computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import errors
from .dataset import Column
from .numeric import midranks, pearson

NMI_MIN_OBS = 8


@dataclass(frozen=True)
class ContingencyTable:
    """Cross-tabulation over observed levels with pair counts.

    ``ties_x`` counts observation pairs tied on the row variable only and
    ``ties_y`` those tied on the column variable only.
    """

    counts: np.ndarray
    concordant: float
    discordant: float
    ties_x: float
    ties_y: float

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def row_margins(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_margins(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def shape(self):
        return self.counts.shape

    @property
    def expected(self) -> np.ndarray:
        return np.outer(self.row_margins, self.col_margins) / self.n

    @property
    def chi2(self) -> float:
        e = self.expected
        return float(np.sum((self.counts - e) ** 2 / e))

    def transpose(self) -> "ContingencyTable":
        return ContingencyTable(self.counts.T.copy(), self.concordant, self.discordant,
                                self.ties_y, self.ties_x)


def _observed_codes(col: Column) -> np.ndarray:
    """Factor codes re-indexed over observed levels, preserving level order."""
    _, codes = np.unique(col.values, return_inverse=True)
    return codes.reshape(-1)


def table_from_counts(counts) -> ContingencyTable:
    """Build a table from a count matrix, computing concordance by level order."""
    a = np.asarray(counts, dtype=float)
    if a.ndim != 2 or a.sum() <= 0:
        raise errors.EmptyInput("contingency table is empty")
    a = a[a.sum(axis=1) > 0][:, a.sum(axis=0) > 0]
    # below_right[i, j] = sum of cells strictly below and to the right
    rc = np.cumsum(np.cumsum(a[::-1, ::-1], axis=0), axis=1)[::-1, ::-1]
    below_right = np.zeros_like(a)
    below_right[:-1, :-1] = rc[1:, 1:]
    lc = np.cumsum(np.cumsum(a[::-1, :], axis=0), axis=1)[::-1, :]
    below_left = np.zeros_like(a)
    below_left[:-1, 1:] = lc[1:, :-1]
    C = float(np.sum(a * below_right))
    D = float(np.sum(a * below_left))
    same_row = float(np.sum(a.sum(axis=1) * (a.sum(axis=1) - 1)) / 2)
    same_col = float(np.sum(a.sum(axis=0) * (a.sum(axis=0) - 1)) / 2)
    same_cell = float(np.sum(a * (a - 1)) / 2)
    return ContingencyTable(a, C, D, same_row - same_cell, same_col - same_cell)


def contingency(a: Column, b: Column) -> ContingencyTable:
    if len(a) != len(b):
        raise errors.LengthMismatch("columns differ in length")
    if len(a) == 0:
        raise errors.EmptyInput("no complete observations")
    ca, cb = _observed_codes(a), _observed_codes(b)
    counts = np.zeros((ca.max() + 1, cb.max() + 1))
    np.add.at(counts, (ca, cb), 1.0)
    return table_from_counts(counts)


def _nan_if_zero(num, den):
    return math.nan if den <= 0 else num / den


def _clamp(v, lo, hi):
    return v if math.isnan(v) else min(hi, max(lo, v))


def concordance_measure(t: ContingencyTable, method: str) -> float:
    """Kendall tau-a/b, Stuart tau-c or Goodman-Kruskal gamma."""
    C, D, n = t.concordant, t.discordant, t.n
    if method == "tauA":
        v = _nan_if_zero(C - D, n * (n - 1) / 2)
    elif method == "tauB":
        den = (C + D + t.ties_x) * (C + D + t.ties_y)
        v = _nan_if_zero(C - D, math.sqrt(den) if den > 0 else 0.0)
    elif method == "tauC":
        m = min(t.shape)
        v = math.nan if m < 2 else (C - D) * 2 * m / (n * n * (m - 1))
    elif method == "gkGamma":
        v = _nan_if_zero(C - D, C + D)
    else:
        raise ValueError(f"unknown concordance method {method!r}")
    return _clamp(v, -1.0, 1.0)


def kendall_w(a: Column, b: Column) -> float:
    """Tie-corrected Kendall W for two rankings, rescaled to [-1, 1] as 2W - 1."""
    if len(a) != len(b):
        raise errors.LengthMismatch("columns differ in length")
    n = len(a)
    if n == 0:
        raise errors.EmptyInput("no complete observations")
    ra, rb = midranks(a.values), midranks(b.values)
    if np.ptp(ra) == 0 or np.ptp(rb) == 0:
        return math.nan
    total = ra + rb
    s = float(np.sum((total - total.mean()) ** 2))
    # tie correction: sum over tie groups of t^3 - t, per ranking
    ties = sum(float(np.sum(c ** 3 - c)) for c in
               (np.unique(r, return_counts=True)[1].astype(float) for r in (ra, rb)))
    w = 12.0 * s / (4.0 * (n ** 3 - n) - 2.0 * ties)
    return _clamp(2.0 * w - 1.0, -1.0, 1.0)


def _gk_tau_directional(counts) -> float:
    # proportional reduction in error predicting the column variable from the row
    n = counts.sum()
    r = counts.sum(axis=1)
    c = counts.sum(axis=0)
    base = 1.0 - np.sum(c ** 2) / n ** 2
    if base <= 0:
        return math.nan
    within = np.sum(counts ** 2 / r[:, None]) / n
    return (within - np.sum(c ** 2) / n ** 2) / base


def gk_tau(t: ContingencyTable) -> float:
    """Symmetrized Goodman-Kruskal tau (mean of both directions)."""
    v = 0.5 * (_gk_tau_directional(t.counts) + _gk_tau_directional(t.counts.T))
    return _clamp(v, 0.0, 1.0)


def _entropy(p) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def _mutual_information(counts) -> tuple[float, float, float]:
    n = counts.sum()
    p = counts / n
    hx = _entropy(p.sum(axis=1))
    hy = _entropy(p.sum(axis=0))
    hxy = _entropy(p.ravel())
    return max(hx + hy - hxy, 0.0), hx, hy


def uncertainty_coef(t: ContingencyTable) -> float:
    """Mean of the two directional uncertainty coefficients (natural logs)."""
    mi, hx, hy = _mutual_information(t.counts)
    if hx <= 0 or hy <= 0:
        return math.nan
    return _clamp(0.5 * (mi / hx + mi / hy), 0.0, 1.0)


def contingency_coef(t: ContingencyTable) -> float:
    """Pearson's contingency coefficient divided by its maximum sqrt((m-1)/m)."""
    m = min(t.shape)
    if m < 2:
        return math.nan
    chi2 = t.chi2
    cc = math.sqrt(chi2 / (chi2 + t.n))
    return _clamp(cc / math.sqrt((m - 1) / m), 0.0, 1.0)


# -- measures for any pair type ---------------------------------------------

def _n_levels(col: Column) -> int:
    return len(np.unique(col.values))


def correlation_ratio(x: np.ndarray, groups: np.ndarray) -> float:
    """Square root of the between-group share of the total sum of squares."""
    xc = np.asarray(x, dtype=float)
    xc = xc - xc.mean()
    total = float(xc @ xc)
    if total <= 0:
        return math.nan
    _, g = np.unique(groups, return_inverse=True)
    sums = np.bincount(g.reshape(-1), weights=xc)
    counts = np.bincount(g.reshape(-1))
    between = float(np.sum(sums ** 2 / counts))
    return _clamp(math.sqrt(max(between, 0.0) / total), 0.0, 1.0)


def _standardized_residuals(counts):
    p = counts / counts.sum()
    r = p.sum(axis=1)
    c = p.sum(axis=0)
    return (p - np.outer(r, c)) / np.sqrt(np.outer(r, c)), r, c


def first_correspondence(counts):
    """Leading singular triple of the standardized residual matrix.

    Returns ``(sigma, row_scores, col_scores)``; scores are standardized
    (weighted mean 0, variance 1) and oriented so their correlation is sigma.
    """
    s, r, c = _standardized_residuals(np.asarray(counts, dtype=float))
    u, sv, vt = np.linalg.svd(s, full_matrices=False)
    sigma = float(sv[0]) if sv.size else 0.0
    return min(sigma, 1.0), u[:, 0] / np.sqrt(r), vt[0] / np.sqrt(c)


def canonical_correlation(a: Column, b: Column) -> float:
    """Largest correlation between linear scorings of the two variables."""
    if len(a) != len(b):
        raise errors.LengthMismatch("columns differ in length")
    if len(a) < 2:
        return math.nan
    if not a.is_factor and not b.is_factor:
        r = pearson(a.values, b.values)
        return math.nan if math.isnan(r) else abs(r)
    if a.is_factor and b.is_factor:
        if _n_levels(a) < 2 or _n_levels(b) < 2:
            return math.nan
        return first_correspondence(contingency(a, b).counts)[0]
    f, x = (a, b) if a.is_factor else (b, a)
    if _n_levels(f) < 2:
        return math.nan
    return correlation_ratio(x.values, f.values)


def equal_frequency_bins(x, k: int) -> np.ndarray:
    """Rank-based equal-frequency bin index in 0..k-1; tied values share a bin."""
    r = midranks(x)
    return np.minimum(np.floor((r - 0.5) * k / len(x)).astype(np.int64), k - 1)


def _nmi(ca, cb) -> float:
    ka, kb = ca.max() + 1, cb.max() + 1
    counts = np.bincount(ca * kb + cb, minlength=ka * kb).reshape(ka, kb).astype(float)
    mi, hx, hy = _mutual_information(counts)
    if hx <= 0 or hy <= 0:
        return math.nan
    return mi / math.sqrt(hx * hy)


def _candidate_codings(col: Column, max_bins: int) -> list[np.ndarray]:
    """Distinct codings of a variable: itself for factors, else each binning."""
    if col.is_factor:
        return [_observed_codes(col)]
    r = midranks(col.values)
    n = len(r)
    out, seen = [], set()
    for k in range(2, max_bins + 1):
        codes = np.minimum(np.floor((r - 0.5) * k / n).astype(np.int64), k - 1)
        _, codes = np.unique(codes, return_inverse=True)
        key = codes.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(codes.reshape(-1))
    return out


def max_nmi(a: Column, b: Column) -> float:
    """Normalized mutual information maximized over equal-frequency binnings.

    Numeric variables are tried with 2..ceil(n**0.6) bins; factors are used
    as they are.
    """
    if len(a) != len(b):
        raise errors.LengthMismatch("columns differ in length")
    n = len(a)
    if n < NMI_MIN_OBS:
        return math.nan
    max_bins = max(2, math.ceil(n ** 0.6))
    codings_b = _candidate_codings(b, max_bins)
    best = math.nan
    for ca in _candidate_codings(a, max_bins):
        for cb in codings_b:
            v = _nmi(ca, cb)
            if not math.isnan(v) and not (v <= best):
                best = v
    return _clamp(best, 0.0, 1.0)

"""Tidy pairwise score table.

A :class:`PairwiseTable` holds one row per ``(x, y, score, group)`` key with
``x < y``. Ungrouped scores use the reserved group label ``"all"``, which
sorts after the named groups of a pair.
"""

from __future__ import annotations

import csv
import io
import math
from collections import OrderedDict
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import errors
from .registry import score_range

ALL = "all"
PAIR_TYPES = ("nn", "ff", "fn")
CSV_HEADER = ("x", "y", "score", "group", "value", "pair_type")

_RANGE_TOL = 1e-12


def is_missing(v) -> bool:
    return v is None or (isinstance(v, float) and math.isnan(v))


@dataclass(frozen=True, order=False)
class PairwiseRow:
    x: str
    y: str
    score: str
    group: str
    value: float
    pair_type: str

    @property
    def key(self):
        return (self.x, self.y, self.score, self.group)

    @property
    def pair(self):
        return (self.x, self.y)

    @property
    def missing(self) -> bool:
        return math.isnan(self.value)


def _sort_key(r: PairwiseRow):
    return (r.x, r.y, r.score, r.group == ALL, r.group)


class PairwiseTable:
    """Immutable, canonically sorted collection of :class:`PairwiseRow`."""

    __slots__ = ("_rows",)

    def __init__(self, rows: Iterable[PairwiseRow] = ()):
        # trusted constructor: callers outside this module go through new_pairwise
        self._rows = tuple(sorted(rows, key=_sort_key))

    @property
    def rows(self) -> tuple[PairwiseRow, ...]:
        return self._rows

    def __len__(self):
        return len(self._rows)

    def __iter__(self):
        return iter(self._rows)

    def __getitem__(self, i):
        return self._rows[i]

    def __eq__(self, other):
        if not isinstance(other, PairwiseTable):
            return NotImplemented
        if len(self) != len(other):
            return False
        for a, b in zip(self._rows, other._rows):
            if a.key != b.key or a.pair_type != b.pair_type:
                return False
            if not (a.value == b.value or (a.missing and b.missing)):
                return False
        return True

    def __repr__(self):
        return f"<PairwiseTable: {len(self)} rows, {len(self.pairs())} pairs>"

    def pairs(self) -> list[tuple[str, str]]:
        """Distinct ``(x, y)`` pairs in canonical order."""
        return list(OrderedDict.fromkeys(r.pair for r in self._rows))

    def variables(self) -> list[str]:
        return sorted({v for r in self._rows for v in (r.x, r.y)})

    def scores(self) -> list[str]:
        return sorted({r.score for r in self._rows})

    def groups(self) -> list[str]:
        """Group labels, named groups first and ``"all"`` last."""
        gs = {r.group for r in self._rows}
        return sorted(gs - {ALL}) + ([ALL] if ALL in gs else [])

    def by_pair(self) -> "OrderedDict[tuple[str, str], list[PairwiseRow]]":
        out: OrderedDict = OrderedDict()
        for r in self._rows:
            out.setdefault(r.pair, []).append(r)
        return out

    def values(self) -> np.ndarray:
        return np.array([r.value for r in self._rows], dtype=float)

    def where(self, pred) -> "PairwiseTable":
        return PairwiseTable(r for r in self._rows if pred(r))

    def __add__(self, other: "PairwiseTable") -> "PairwiseTable":
        return new_pairwise(list(self._rows) + list(other._rows))


def _coerce(raw) -> PairwiseRow:
    if isinstance(raw, PairwiseRow):
        x, y, score, group, value, pair_type = (
            raw.x, raw.y, raw.score, raw.group, raw.value, raw.pair_type)
    elif isinstance(raw, dict):
        x, y, score = raw["x"], raw["y"], raw["score"]
        group = raw.get("group", ALL)
        value, pair_type = raw.get("value"), raw["pair_type"]
    else:
        x, y, score, group, value, pair_type = raw
    if not x or not y:
        raise errors.TableError("variable names must be nonempty")
    if x == y:
        raise errors.SelfPair(x)
    if pair_type not in PAIR_TYPES:
        raise errors.TableError(f"unknown pair_type {pair_type!r}")
    value = math.nan if is_missing(value) else float(value)
    if math.isinf(value):
        raise errors.TableError(f"non-finite score value for ({x}, {y}, {score})")
    if y < x:
        x, y = y, x
    return PairwiseRow(str(x), str(y), str(score), str(group), value, pair_type)


def new_pairwise(rows: Iterable = ()) -> PairwiseTable:
    """Build a validated, canonical table from raw rows.

    Raw rows may be :class:`PairwiseRow` instances, mappings with the CSV
    column names, or 6-tuples ``(x, y, score, group, value, pair_type)``.
    Variable names are swapped so that ``x < y``.
    """
    seen = set()
    out = []
    for raw in rows:
        r = _coerce(raw)
        if r.key in seen:
            raise errors.DuplicateKey(*r.key)
        seen.add(r.key)
        rng = score_range(r.score)
        if rng is not None and not r.missing:
            lo, hi = rng
            if r.value < lo - _RANGE_TOL or r.value > hi + _RANGE_TOL:
                raise errors.RangeViolation(r.score, r.value, lo, hi)
        out.append(r)
    return PairwiseTable(out)


# -- matrix conversion -------------------------------------------------------

class LabeledMatrix(NamedTuple):
    labels: list[str]
    values: np.ndarray


def from_matrix(m, labels: Sequence[str] | None = None, score: str = "value",
                pair_type: str = "nn") -> PairwiseTable:
    """Convert a symmetric labelled matrix into a pairwise table.

    ``m`` may be a :class:`LabeledMatrix`, in which case ``labels`` is taken
    from it. The diagonal is discarded.
    """
    if isinstance(m, LabeledMatrix):
        labels, m = m.labels if labels is None else labels, m.values
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise errors.AsymmetricInput(f"matrix must be square, got shape {a.shape}")
    p = a.shape[0]
    labels = [str(s) for s in (labels if labels is not None else range(1, p + 1))]
    if len(labels) != p:
        raise errors.TableError(f"{len(labels)} labels for a {p}x{p} matrix")
    if len(set(labels)) != p:
        raise errors.DuplicateLabels("matrix labels are not unique")
    both = ~(np.isnan(a) | np.isnan(a.T))
    if np.any(np.abs(a - a.T)[both] > 1e-12) or np.any(np.isnan(a) != np.isnan(a.T)):
        raise errors.AsymmetricInput("matrix is not symmetric within 1e-12")
    rows = []
    for i in range(p):
        for j in range(i + 1, p):
            rows.append((labels[i], labels[j], score, ALL, a[i, j], pair_type))
    return new_pairwise(rows)


def to_matrix(t: PairwiseTable) -> LabeledMatrix:
    """Square matrix over the variables mentioned in ``t``.

    Each off-diagonal cell takes the first row (canonical order) of its pair.
    The diagonal is 1 and absent pairs are NaN.
    """
    labels = t.variables()
    idx = {v: i for i, v in enumerate(labels)}
    k = len(labels)
    out = np.full((k, k), np.nan)
    np.fill_diagonal(out, 1.0)
    for (x, y), rows in t.by_pair().items():
        i, j = idx[x], idx[y]
        out[i, j] = out[j, i] = rows[0].value
    return LabeledMatrix(labels, out)


# -- filtering and reshaping -------------------------------------------------

def pair_stats(rows: Sequence[PairwiseRow]) -> tuple[float, float] | None:
    """``(max |value|, max - min)`` over non-missing values, or None."""
    vals = [r.value for r in rows if not r.missing]
    if not vals:
        return None
    return max(abs(v) for v in vals), max(vals) - min(vals)


def filter_pairs(t: PairwiseTable, min_max_abs: float | None = None,
                 min_range: float | None = None,
                 with_variable: str | None = None) -> PairwiseTable:
    """Keep whole pairs passing the supplied criteria.

    Numeric criteria combine with OR: a pair survives when its maximum
    absolute value reaches ``min_max_abs`` or its value range reaches
    ``min_range``. ``with_variable`` restricts to pairs containing that name.
    """
    for v in (min_max_abs, min_range):
        if v is not None and not math.isfinite(v):
            raise ValueError("filter thresholds must be finite")
    if with_variable is not None and with_variable not in t.variables():
        raise errors.UnknownVariable(with_variable)
    numeric = min_max_abs is not None or min_range is not None
    keep = []
    for (x, y), rows in t.by_pair().items():
        if with_variable is not None and with_variable not in (x, y):
            continue
        if numeric:
            stats = pair_stats(rows)
            if stats is None:
                continue
            vmax, vrange = stats
            ok = (min_max_abs is not None and vmax >= min_max_abs) or \
                 (min_range is not None and vrange >= min_range)
            if not ok:
                continue
        keep.extend(rows)
    return PairwiseTable(keep)


class WideTable(NamedTuple):
    columns: list[str]
    rows: list[tuple]


def pivot_wide(t: PairwiseTable) -> WideTable:
    """One row per ``(x, y, group)`` with a column per score.

    Missing score/key combinations are NaN. Columns are
    ``["x", "y", "group", "pair_type", *scores]``.
    """
    scores = t.scores()
    col = {s: i for i, s in enumerate(scores)}
    keyed: OrderedDict = OrderedDict()
    for r in t:
        k = (r.x, r.y, r.group)
        if k not in keyed:
            keyed[k] = (r.pair_type, [math.nan] * len(scores))
        keyed[k][1][col[r.score]] = r.value
    ordered = sorted(keyed, key=lambda k: (k[0], k[1], k[2] == ALL, k[2]))
    out = [(x, y, g, keyed[(x, y, g)][0], *keyed[(x, y, g)][1]) for x, y, g in ordered]
    return WideTable(["x", "y", "group", "pair_type", *scores], out)


# -- CSV ---------------------------------------------------------------------

def format_value(v: float) -> str:
    if math.isnan(v):
        return ""
    s = format(v, ".15g")
    return "0" if s == "-0" else s


def write_csv(t: PairwiseTable, dest=None) -> str | None:
    """Write ``t`` in score-CSV format to a path or text stream.

    With ``dest=None`` the CSV text is returned.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in t:
        w.writerow((r.x, r.y, r.score, r.group, format_value(r.value), r.pair_type))
    text = buf.getvalue()
    if dest is None:
        return text
    if hasattr(dest, "write"):
        dest.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="") as f:
            f.write(text)
    return None


def read_csv(src) -> PairwiseTable:
    """Parse a score CSV from a path or text stream."""
    if hasattr(src, "read"):
        text = src.read()
    else:
        with open(src, encoding="utf-8", newline="") as f:
            text = f.read()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise errors.MalformedScoreFile("score file is empty") from None
    if tuple(h.strip() for h in header) != CSV_HEADER:
        raise errors.MalformedScoreFile(
            f"expected header {','.join(CSV_HEADER)}, got {','.join(header)}")
    rows = []
    for lineno, rec in enumerate(reader, start=2):
        if not rec:
            continue
        if len(rec) != 6:
            raise errors.MalformedScoreFile(f"line {lineno}: expected 6 fields, got {len(rec)}")
        x, y, score, group, value, pair_type = rec
        try:
            v = math.nan if value.strip() in ("", "NA") else float(value)
        except ValueError:
            raise errors.MalformedScoreFile(f"line {lineno}: bad value {value!r}") from None
        try:
            rows.append(_coerce((x, y, score, group, v, pair_type)))
        except errors.TableError as e:
            raise errors.MalformedScoreFile(f"line {lineno}: {e}") from None
    return new_pairwise(rows)

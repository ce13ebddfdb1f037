"""Apply measures over all eligible variable pairs of a dataset."""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from . import categorical as cat
from . import errors, latent, numeric
from .ace import ace_correlation
from .dataset import Column, Dataset, complete_pairs, pair_type_of
from .registry import ALIASES, METHODS_BY_NAME, SCAGNOSTIC_NAMES, Method
from .scagnostics import scagnostics
from .table import ALL, PairwiseRow, PairwiseTable, new_pairwise

THREADS_ENV = "PAIRSCORE_THREADS"


# -- per-pair computations ---------------------------------------------------
# Each takes two complete columns plus options and returns {score: value}.

def _as_list(v):
    return [v] if isinstance(v, str) else list(v)


def _cor(a, b, method="pearson", **_):
    return {method: numeric.correlation(a.values, b.values, method)}


def _mine(a, b, method="MIC", alpha=0.6, c=15.0, **_):
    res = numeric.mic(a.values, b.values, numeric.MicParams(float(alpha), float(c)))
    return {m: res[m] for m in _as_list(method)}


def _table_measure(fn):
    def run(a, b, **_):
        if len(a) == 0:
            return math.nan
        return fn(cat.contingency(a, b))
    return run


def _concordance(method):
    return _table_measure(lambda t: cat.concordance_measure(t, method))


def _scag(a, b, scores=SCAGNOSTIC_NAMES, **_):
    res = scagnostics(a.values, b.values)
    return {s: res[s] for s in _as_list(scores)}


def _single(name, fn):
    def run(a, b, **opts):
        return {name: fn(a, b)}
    return run


_COMPUTE: dict[str, Callable] = {
    "cor": _cor,
    "dcor": _single("dcor", lambda a, b: numeric.distance_correlation(a.values, b.values)),
    "mine": _mine,
    "ace": _single("ace", ace_correlation),
    "cancor": _single("cancor", cat.canonical_correlation),
    "nmi": _single("nmi", cat.max_nmi),
    "polychor": _single("polychor", latent.polychoric),
    "polyserial": _single("polyserial", latent.polyserial),
    "tauA": _single("tauA", _concordance("tauA")),
    "tauB": _single("tauB", _concordance("tauB")),
    "tauC": _single("tauC", _concordance("tauC")),
    "tauW": _single("tauW", lambda a, b: math.nan if len(a) == 0 else cat.kendall_w(a, b)),
    "gkGamma": _single("gkGamma", _concordance("gkGamma")),
    "gkTau": _single("gkTau", _table_measure(cat.gk_tau)),
    "uncertainty": _single("uncertainty", _table_measure(cat.uncertainty_coef)),
    "chi": _single("chi", _table_measure(cat.contingency_coef)),
    "scagnostics": _scag,
}


def _score_names(method: Method, opts: dict) -> list[str]:
    if method.name == "cor":
        return [opts.get("method", "pearson")]
    if method.name == "mine":
        return _as_list(opts.get("method", "MIC"))
    if method.name == "scagnostics":
        return _as_list(opts.get("scores", SCAGNOSTIC_NAMES))
    return [method.name]


@dataclass(frozen=True)
class Measure:
    """A registry method bound to its options."""

    method: Method
    options: tuple

    @property
    def name(self):
        return self.method.name

    @property
    def opts(self) -> dict:
        return dict(self.options)

    def score_names(self) -> list[str]:
        return _score_names(self.method, self.opts)

    def eligible(self, a: Column, b: Column) -> bool:
        pt = pair_type_of(a, b)
        if not self.method.supports(pt):
            return False
        if self.method.ordinal:
            return all(c.is_ordered for c in (a, b) if c.is_factor)
        return True

    def compute(self, a: Column, b: Column) -> dict[str, float]:
        a, b = complete_pairs(a, b)
        names = self.score_names()
        try:
            res = _COMPUTE[self.name](a, b, **self.opts)
        except errors.MeasureError:
            return {s: math.nan for s in names}
        return {s: float(res.get(s, math.nan)) for s in names}


def resolve(measure, **options) -> Measure:
    """Turn a measure id (registry name, ``pair_`` name or alias) into a Measure."""
    if isinstance(measure, Measure):
        if not options:
            return measure
        return Measure(measure.method, tuple(sorted({**measure.opts, **options}.items())))
    name = str(measure)
    if name.startswith("pair_"):
        name = name[5:]
    fixed = {}
    if name in ALIASES:
        name, fixed = ALIASES[name]
    if name not in METHODS_BY_NAME:
        raise errors.UnknownMeasure(measure)
    method = METHODS_BY_NAME[name]
    opts = {**options, **fixed}
    if name == "cor" and opts.get("method", "pearson") not in ("pearson", "spearman", "kendall"):
        raise errors.UnknownMeasure(f"cor method {opts['method']!r}")
    if name == "mine":
        bad = [m for m in _as_list(opts.get("method", "MIC")) if m not in ("MIC", "TIC")]
        if bad:
            raise errors.UnknownMeasure(f"mine method {bad[0]!r}")
    return Measure(method, tuple(sorted((k, _freeze(v)) for k, v in opts.items())))


def _freeze(v):
    return tuple(v) if isinstance(v, list) else v


# -- task execution ----------------------------------------------------------

def _workers(workers):
    if workers is not None:
        return max(1, int(workers))
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _run(tasks, workers):
    """tasks: list of (measure, a_name, b_name, dataset, group, pair_type)."""
    def one(task):
        m, x, y, d, group, pt = task
        res = m.compute(d[x], d[y])
        return [PairwiseRow(*((x, y) if x < y else (y, x)), s, group, v, pt)
                for s, v in res.items()]

    n = _workers(workers)
    if n > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=n) as ex:
            chunks = list(ex.map(one, tasks))
    else:
        chunks = [one(t) for t in tasks]
    return new_pairwise(r for ch in chunks for r in ch)


def _pairs(d: Dataset, measure: Measure, exclude=()):
    names = [n for n in d.names if n not in exclude]
    return [(x, y) for x, y in combinations(names, 2) if measure.eligible(d[x], d[y])]


def apply_measure(d: Dataset, measure, workers=None, **options) -> PairwiseTable:
    """Score every eligible pair of ``d`` with one measure (group ``"all"``)."""
    m = resolve(measure, **options)
    tasks = [(m, x, y, d, ALL, pair_type_of(d[x], d[y])) for x, y in _pairs(d, m)]
    return _run(tasks, workers)


def pairwise_multi(d: Dataset, measures: Sequence, workers=None) -> PairwiseTable:
    """Row-wise union of :func:`apply_measure` over several measures.

    Items of ``measures`` are ids or ``(id, options)`` tuples.
    """
    if not measures:
        raise ValueError("at least one measure is required")
    tasks = []
    for item in measures:
        m = resolve(*item[:1], **item[1]) if isinstance(item, tuple) else resolve(item)
        tasks += [(m, x, y, d, ALL, pair_type_of(d[x], d[y])) for x, y in _pairs(d, m)]
    return _run(tasks, workers)


def _group_subsets(d: Dataset, by: str):
    if by not in d:
        raise errors.SchemaColumnMissing(by)
    col = d[by]
    if not col.is_factor:
        raise errors.NotAFactor(by)
    if ALL in col.levels:
        raise errors.ReservedGroup(f"grouping column {by!r} has a level named {ALL!r}")
    rest = d.drop(by)
    return rest, [(lv, rest.take(np.flatnonzero(col.values == i)))
                  for i, lv in enumerate(col.levels)]


def _grouped_tasks(d, by, assign, ungrouped):
    """assign(dataset) -> list of (measure, x, y); evaluated on the full data."""
    rest, subsets = _group_subsets(d, by)
    plan = assign(rest)
    tasks = []
    for level, sub in subsets:
        tasks += [(m, x, y, sub, level, pair_type_of(rest[x], rest[y])) for m, x, y in plan]
    if ungrouped:
        tasks += [(m, x, y, rest, ALL, pair_type_of(rest[x], rest[y])) for m, x, y in plan]
    return tasks


def pairwise_by(d: Dataset, by: str, measure, ungrouped: bool = True, workers=None,
                **options) -> PairwiseTable:
    """Score each level of the factor ``by`` separately, plus ``"all"`` when ``ungrouped``."""
    m = resolve(measure, **options)
    tasks = _grouped_tasks(d, by, lambda ds: [(m, x, y) for x, y in _pairs(ds, m)], ungrouped)
    return _run(tasks, workers)


@dataclass(frozen=True)
class ScoreControl:
    """Measure used for each pair type; ``oo`` covers two ordered factors."""

    nn: str = "pearson"
    fn: str = "cancor"
    ff: str = "cancor"
    oo: str = "polychor"

    def measures(self) -> dict[str, Measure]:
        out = {}
        for slot in ("nn", "fn", "ff", "oo"):
            m = resolve(getattr(self, slot))
            if not m.method.supports("ff" if slot == "oo" else slot):
                raise errors.UnknownMeasure(f"{m.name} does not score {slot} pairs")
            out[slot] = m
        return out

    def replace(self, **kw) -> "ScoreControl":
        return ScoreControl(**{**self.__dict__, **kw})


def _assign_by_type(control: ScoreControl):
    ms = control.measures()

    def assign(d: Dataset):
        plan = []
        for x, y in combinations(d.names, 2):
            a, b = d[x], d[y]
            pt = pair_type_of(a, b)
            slot = "oo" if pt == "ff" and a.is_ordered and b.is_ordered else pt
            m = ms[slot]
            if m.eligible(a, b):
                plan.append((m, x, y))
        return plan
    return assign


def pairwise_scores(d: Dataset, control: ScoreControl | None = None, by: str | None = None,
                    ungrouped: bool = True, workers=None) -> PairwiseTable:
    """Score each pair with the measure its type selects in ``control``."""
    assign = _assign_by_type(control or ScoreControl())
    if by is None:
        tasks = [(m, x, y, d, ALL, pair_type_of(d[x], d[y])) for m, x, y in assign(d)]
    else:
        tasks = _grouped_tasks(d, by, assign, ungrouped)
    return _run(tasks, workers)

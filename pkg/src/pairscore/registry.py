"""Catalog of the available association measures."""

from __future__ import annotations

from dataclasses import dataclass

SIGNED = (-1.0, 1.0)
UNIT = (0.0, 1.0)

SCAGNOSTIC_NAMES = (
    "outlying", "skewed", "clumpy", "sparse", "striated",
    "convex", "skinny", "stringy", "monotonic",
)


@dataclass(frozen=True)
class Method:
    name: str
    nn: bool
    ff: bool
    fn: bool
    source: str
    range: tuple[float, float]
    ordinal: bool
    description: str
    scores: tuple[str, ...]

    @property
    def range_label(self) -> str:
        lo, hi = self.range
        return f"[{lo:g},{hi:g}]"

    def supports(self, pair_type: str) -> bool:
        return getattr(self, pair_type)


def _m(name, desc, nn, ff, fn, source, rng, ordinal, scores=None):
    return Method(name, nn, ff, fn, source, rng, ordinal, desc, tuple(scores or (name,)))


METHODS: tuple[Method, ...] = (
    _m("cor", "Pearson/Spearman/Kendall", True, False, False, "cor", SIGNED, False,
       ("pearson", "spearman", "kendall")),
    _m("dcor", "Distance correlation", True, False, False, "energy::dcor2d", UNIT, False),
    _m("mine", "MIC and other measures", True, False, False, "minerva::mine", UNIT, False,
       ("MIC", "TIC")),
    _m("ace", "Ace correlation", True, True, True, "acepack::ace", UNIT, False),
    _m("cancor", "Canonical correlation", True, True, True, "cancor", UNIT, False),
    _m("nmi", "Maximal normalized mutual information", True, True, True,
       "linkspotter::maxNMI", UNIT, False),
    _m("polychor", "Polychoric correlation", False, True, False, "polycor::polychor",
       SIGNED, True),
    _m("polyserial", "Polyserial correlation", False, False, True, "polycor::polyserial",
       SIGNED, True),
    _m("tauA", "Kendall's tau A", False, True, False, "DescTools::KendallTauA", SIGNED, True),
    _m("tauB", "Kendall's tau B", False, True, False, "DescTools::KendallTauB", SIGNED, True),
    _m("tauC", "Stuart-Kendall tau C", False, True, False, "DescTools::StuartTauC",
       SIGNED, True),
    _m("tauW", "Kendall's W", False, True, False, "DescTools::KendallW", SIGNED, True),
    _m("gkGamma", "Goodman-Kruskal gamma", False, True, False,
       "DescTools::GoodmanKruskalGamma", SIGNED, True),
    _m("gkTau", "Goodman-Kruskal tau", False, True, False, "DescTools::GoodmanKruskalTau",
       UNIT, True),
    _m("uncertainty", "Uncertainty coefficient", False, True, False, "DescTools::UncertCoef",
       UNIT, False),
    _m("chi", "Pearson's contingency coefficient", False, True, False, "DescTools::ContCoef",
       UNIT, False),
    _m("scagnostics", "Scagnostics", True, False, False, "scagnostics::scagnostics", UNIT,
       False, SCAGNOSTIC_NAMES),
)

METHODS_BY_NAME = {m.name: m for m in METHODS}

# score identifier -> registered range
SCORE_RANGES: dict[str, tuple[float, float]] = {
    s: m.range for m in METHODS for s in m.scores
}

# Measure ids accepted by the dispatcher besides the registry names; each maps
# to (method name, fixed options).
ALIASES: dict[str, tuple[str, dict]] = {
    "pearson": ("cor", {"method": "pearson"}),
    "spearman": ("cor", {"method": "spearman"}),
    "kendall": ("cor", {"method": "kendall"}),
    "mic": ("mine", {}),
    "polychoric": ("polychor", {}),
    "contingency": ("chi", {}),
}


def score_range(score: str) -> tuple[float, float] | None:
    return SCORE_RANGES.get(score)


def filter_methods(types=()) -> list[Method]:
    """Registry rows having every flag in ``types`` set.

    ``types`` may contain ``"nn"``, ``"ff"``, ``"fn"`` and ``"ordinal"``.
    """
    out = []
    for m in METHODS:
        if all(getattr(m, t) for t in types):
            out.append(m)
    return out

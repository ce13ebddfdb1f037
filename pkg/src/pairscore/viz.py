"""SVG rendering of pairwise tables: matrix of bullseye glyphs, or linear rows.

Output is plain text built from sorted inputs with fixed number formatting,
so the same table always gives the same bytes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

from . import errors
from .registry import score_range
from .seriation import order_mode, order_pairs_linear, seriate_variables
from .table import ALL, PairwiseTable, format_value

NA_COLOR = "#808080"
INNER_FRACTION = 0.5
MATRIX_SIZE = (800, 800)
LINEAR_WIDTH = 800
ROW_HEIGHT = 40

# blue - white - red for signed scores, light to dark purple for [0, 1] scores
_DIVERGING = ((0x21, 0x66, 0xAC), (0xFF, 0xFF, 0xFF), (0xB2, 0x18, 0x2B))
_SEQUENTIAL = ((0xF2, 0xF0, 0xF7), (0x54, 0x27, 0x8F))
_CATEGORICAL = ("#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e",
                "#e6ab02", "#a6761d", "#666666", "#1f78b4", "#b15928")


def _hex(rgb) -> str:
    return "#%02x%02x%02x" % tuple(int(round(c)) for c in rgb)


def _lerp(c0, c1, f):
    return tuple(a + (b - a) * f for a, b in zip(c0, c1))


@dataclass(frozen=True)
class ColorScale:
    domain: tuple[float, float]
    kind: str  # "diverging" or "sequential"
    na_color: str = NA_COLOR

    @classmethod
    def for_score(cls, score: str, values: Sequence[float] = ()) -> "ColorScale":
        rng = score_range(score)
        if rng is None:
            # unregistered score (e.g. from a converted matrix): read the sign off the data
            signed = any(v < 0 for v in values if not math.isnan(v))
            rng = (-1.0, 1.0) if signed else (0.0, 1.0)
        lo, hi = rng
        return cls((float(lo), float(hi)), "diverging" if lo < 0 else "sequential")

    def __call__(self, v: float) -> str:
        if v is None or math.isnan(v):
            return self.na_color
        lo, hi = self.domain
        f = min(1.0, max(0.0, (v - lo) / (hi - lo)))
        if self.kind == "sequential":
            return _hex(_lerp(*_SEQUENTIAL, f))
        if f <= 0.5:
            return _hex(_lerp(_DIVERGING[0], _DIVERGING[1], f * 2))
        return _hex(_lerp(_DIVERGING[1], _DIVERGING[2], f * 2 - 1))


@dataclass(frozen=True)
class RenderDocument:
    text: str
    media_type: str  # "image/svg+xml" or "text/html"

    def write(self, path) -> None:
        Path(path).write_text(self.text, encoding="utf-8")


@dataclass(frozen=True)
class Wedge:
    score: str
    group: str
    value: float
    start: float  # radians, anti-clockwise from 3 o'clock
    end: float


@dataclass(frozen=True)
class GlyphSpec:
    x: str
    y: str
    center: tuple[int, int]  # (row, col)
    inner: tuple[Wedge, ...]
    outer: tuple[Wedge, ...]
    inner_fraction: float


def _f(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _pt(cx, cy, r, a):
    return _f(cx + r * math.cos(a)), _f(cy - r * math.sin(a))


def _circle_path(cx, cy, r, sweep=0):
    return (f"M{_f(cx + r)},{_f(cy)} A{_f(r)},{_f(r)} 0 1 {sweep} {_f(cx - r)},{_f(cy)} "
            f"A{_f(r)},{_f(r)} 0 1 {sweep} {_f(cx + r)},{_f(cy)} Z")


def wedge_path(cx, cy, r0, r1, a0, a1) -> str:
    """Sector (r0 == 0) or annulus sector between angles a0 < a1.

    Angles run anti-clockwise on screen, hence sweep flag 0 on the outer arc.
    """
    full = a1 - a0 >= 2 * math.pi - 1e-12
    if full:
        if r0 <= 0:
            return _circle_path(cx, cy, r1)
        return _circle_path(cx, cy, r1) + " " + _circle_path(cx, cy, r0, sweep=1)
    large = 1 if a1 - a0 > math.pi else 0
    ox0, oy0 = _pt(cx, cy, r1, a0)
    ox1, oy1 = _pt(cx, cy, r1, a1)
    outer = f"M{ox0},{oy0} A{_f(r1)},{_f(r1)} 0 {large} 0 {ox1},{oy1}"
    if r0 <= 0:
        return f"{outer} L{_f(cx)},{_f(cy)} Z"
    ix1, iy1 = _pt(cx, cy, r0, a1)
    ix0, iy0 = _pt(cx, cy, r0, a0)
    return f"{outer} L{ix1},{iy1} A{_f(r0)},{_f(r0)} 0 {large} 1 {ix0},{iy0} Z"


def _tooltip(x, y, score, group, value) -> str:
    v = "NA" if math.isnan(value) else format_value(value)
    return f"<title>{escape(f'x={x}; y={y}; score={score}; group={group}; value={v}')}</title>"


def _scales(t: PairwiseTable) -> dict[str, ColorScale]:
    vals: dict[str, list] = {}
    for r in t:
        vals.setdefault(r.score, []).append(r.value)
    return {s: ColorScale.for_score(s, vals[s]) for s in sorted(vals)}


def _named_groups(t: PairwiseTable, group_order: Sequence[str] | None) -> list[str]:
    present = [g for g in t.groups() if g != ALL]
    if group_order is None:
        return present
    return [g for g in group_order if g in present] + [g for g in present if g not in group_order]


def _spans(n):
    step = 2 * math.pi / n
    return [(i * step, (i + 1) * step) for i in range(n)]


def glyph_specs(t: PairwiseTable, variables: Sequence[str],
                group_order: Sequence[str] | None = None) -> list[GlyphSpec]:
    """One glyph per scored lower-triangle cell.

    Inner ring: the pair's scores for group "all". Outer ring: every named
    group of the table times the pair's scores, groups in level order. Combos
    absent from the table are drawn as missing so wedge counts stay regular.
    """
    groups = _named_groups(t, group_order)
    has_all = ALL in t.groups()
    frac = INNER_FRACTION if groups and has_all else (1.0 if has_all else 0.0)
    pos = {v: i for i, v in enumerate(variables)}
    out = []
    for (x, y), rows in t.by_pair().items():
        i, j = pos[x], pos[y]
        row, col = max(i, j), min(i, j)
        lookup = {(r.group, r.score): r.value for r in rows}
        scores = sorted({r.score for r in rows})
        inner = []
        if has_all:
            inner = [Wedge(s, ALL, lookup.get((ALL, s), math.nan), a0, a1)
                     for s, (a0, a1) in zip(scores, _spans(len(scores)))]
        combos = [(g, s) for g in groups for s in scores]
        outer = [Wedge(s, g, lookup.get((g, s), math.nan), a0, a1)
                 for (g, s), (a0, a1) in zip(combos, _spans(len(combos)))] if combos else []
        vx, vy = (variables[row], variables[col])
        out.append(GlyphSpec(vx, vy, (row, col), tuple(inner), tuple(outer), frac))
    return sorted(out, key=lambda g: g.center)


def _legend(scales: dict[str, ColorScale], x0: float, y0: float, width: float) -> list[str]:
    parts = ['<g class="legend">']
    y = y0
    steps = 10
    for score, sc in scales.items():
        lo, hi = sc.domain
        parts.append(f'<text x="{_f(x0)}" y="{_f(y)}" font-size="12">{escape(score)}</text>')
        y += 6
        w = width / (steps + 1)
        for k in range(steps + 1):
            v = lo + (hi - lo) * k / steps
            parts.append(f'<rect class="swatch" x="{_f(x0 + k * w)}" y="{_f(y)}" width="{_f(w)}" '
                         f'height="12" fill="{sc(v)}"/>')
        y += 24
        parts.append(f'<text x="{_f(x0)}" y="{_f(y)}" font-size="10">{format_value(lo)}</text>')
        parts.append(f'<text x="{_f(x0 + width)}" y="{_f(y)}" font-size="10" '
                     f'text-anchor="end">{format_value(hi)}</text>')
        y += 20
    parts.append(f'<rect class="swatch na" x="{_f(x0)}" y="{_f(y)}" width="12" height="12" '
                 f'fill="{NA_COLOR}"/>')
    parts.append(f'<text x="{_f(x0 + 18)}" y="{_f(y + 10)}" font-size="10">NA</text>')
    parts.append("</g>")
    return parts


def _svg(width, height, body: list[str]) -> str:
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
            f'height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif">')
    return "\n".join([head, f'<rect width="{width}" height="{height}" fill="#ffffff"/>',
                      *body, "</svg>", ""])


def _document(svg: str, interactive: bool) -> RenderDocument:
    if not interactive:
        return RenderDocument('<?xml version="1.0" encoding="UTF-8"?>\n' + svg, "image/svg+xml")
    html = ("<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\"/>\n</head>\n<body>\n"
            + svg + "</body>\n</html>\n")
    return RenderDocument(html, "text/html")


def _wedge_el(w: Wedge, ring: str, path: str, fill: str, x, y, interactive) -> str:
    rule = ' fill-rule="evenodd"' if ring == "outer" and w.end - w.start >= 2 * math.pi - 1e-12 else ""
    attrs = (f'class="wedge {ring}" d="{path}" fill="{fill}"{rule} stroke="#ffffff" '
             f'stroke-width="0.5" data-score={quoteattr(w.score)} data-group={quoteattr(w.group)}')
    if interactive:
        return f"<path {attrs}>{_tooltip(x, y, w.score, w.group, w.value)}</path>"
    return f"<path {attrs}/>"


def plot_matrix(t: PairwiseTable, var_order: str = "seriate_max_abs", interactive: bool = False,
                size: tuple[int, int] = MATRIX_SIZE,
                group_order: Sequence[str] | None = None) -> RenderDocument:
    """Lower-triangle matrix of bullseye glyphs with variable names on the diagonal."""
    if len(t) == 0:
        raise errors.EmptyTable("nothing to plot")
    variables = seriate_variables(t, order_mode(var_order))
    width, height = size
    legend_w = 150
    grid = max(1.0, min(width - legend_w - 40, height - 40))
    k = len(variables)
    cell = grid / k
    x0 = y0 = 20.0
    radius = cell * 0.45
    scales = _scales(t)
    body = ['<g class="labels">']
    for i, v in enumerate(variables):
        cx, cy = x0 + (i + 0.5) * cell, y0 + (i + 0.5) * cell
        body.append(f'<text class="label" x="{_f(cx)}" y="{_f(cy)}" text-anchor="middle" '
                    f'dominant-baseline="middle" font-size="{_f(min(12.0, cell / 5))}">'
                    f"{escape(v)}</text>")
    body.append("</g>")
    for g in glyph_specs(t, variables, group_order):
        row, col = g.center
        cx, cy = x0 + (col + 0.5) * cell, y0 + (row + 0.5) * cell
        r_in = radius * g.inner_fraction
        body.append(f'<g class="glyph" data-x={quoteattr(g.x)} data-y={quoteattr(g.y)}>')
        body.append(f'<rect class="cell" x="{_f(x0 + col * cell)}" y="{_f(y0 + row * cell)}" '
                    f'width="{_f(cell)}" height="{_f(cell)}" fill="none" stroke="#dddddd"/>')
        for w in g.inner:
            body.append(_wedge_el(w, "inner", wedge_path(cx, cy, 0.0, r_in, w.start, w.end),
                                  scales[w.score](w.value), g.x, g.y, interactive))
        for w in g.outer:
            body.append(_wedge_el(w, "outer", wedge_path(cx, cy, r_in, radius, w.start, w.end),
                                  scales[w.score](w.value), g.x, g.y, interactive))
        body.append("</g>")
    body += _legend(scales, width - legend_w, 30.0, legend_w - 20)
    return _document(_svg(width, height, body), interactive)


def _axis_domain(t: PairwiseTable) -> tuple[float, float]:
    signed = any(sc.domain[0] < 0 for sc in _scales(t).values())
    return (-1.0, 1.0) if signed else (0.0, 1.0)


def plot_linear(t: PairwiseTable, geom: str = "tile", pair_order: str = "seriate_max_abs",
                interactive: bool = False, width: int = LINEAR_WIDTH,
                group_order: Sequence[str] | None = None) -> RenderDocument:
    """One row per pair ("x:y"), tiles coloured by value or points placed on a shared axis.

    The canvas is ``ROW_HEIGHT * (rows + 2)`` tall: one extra band for the
    axis/column header and one for the legend.
    """
    if len(t) == 0:
        raise errors.EmptyTable("nothing to plot")
    if geom not in ("tile", "point"):
        raise ValueError(f"geom must be 'tile' or 'point', not {geom!r}")
    pairs = order_pairs_linear(t, order_mode(pair_order))
    height = ROW_HEIGHT * (len(pairs) + 2)
    left, right = 180.0, width - 20.0
    by_pair = t.by_pair()
    groups = _named_groups(t, group_order) + ([ALL] if ALL in t.groups() else [])
    scores = t.scores()
    scales = _scales(t)
    body = []
    for k, (x, y) in enumerate(pairs):
        cy = ROW_HEIGHT * (k + 1.5)
        body.append(f'<text class="label" x="{_f(left - 8)}" y="{_f(cy)}" text-anchor="end" '
                    f'dominant-baseline="middle" font-size="12">{escape(f"{x}:{y}")}</text>')
    if geom == "tile":
        combos = [(g, s) for s in scores for g in groups]
        tw = (right - left) / len(combos)
        for c, (g, s) in enumerate(combos):
            label = s if len(groups) == 1 else (f"{g}" if len(scores) == 1 else f"{s}/{g}")
            body.append(f'<text class="column" x="{_f(left + (c + 0.5) * tw)}" '
                        f'y="{_f(ROW_HEIGHT * 0.75)}" text-anchor="middle" font-size="11">'
                        f"{escape(label)}</text>")
        for k, pair in enumerate(pairs):
            lookup = {(r.group, r.score): r for r in by_pair[pair]}
            for c, (g, s) in enumerate(combos):
                r = lookup.get((g, s))
                v = math.nan if r is None else r.value
                attrs = (f'class="tile" x="{_f(left + c * tw)}" y="{_f(ROW_HEIGHT * (k + 1) + 2)}" '
                         f'width="{_f(tw)}" height="{ROW_HEIGHT - 4}" fill="{scales[s](v)}" '
                         f'stroke="#ffffff"')
                if interactive:
                    body.append(f"<rect {attrs}>{_tooltip(*pair, s, g, v)}</rect>")
                else:
                    body.append(f"<rect {attrs}/>")
        body += _linear_legend_scales(scales, left, height - ROW_HEIGHT + 8, right)
    else:
        lo, hi = _axis_domain(t)

        def px(v):
            return left + (v - lo) / (hi - lo) * (right - left)

        axis_y = ROW_HEIGHT * 0.9
        body.append(f'<line class="axis" x1="{_f(left)}" y1="{_f(axis_y)}" x2="{_f(right)}" '
                    f'y2="{_f(axis_y)}" stroke="#333333"/>')
        for v in (lo, (lo + hi) / 2, hi):
            body.append(f'<line class="gridline" x1="{_f(px(v))}" y1="{_f(axis_y)}" '
                        f'x2="{_f(px(v))}" y2="{_f(height - ROW_HEIGHT)}" stroke="#eeeeee"/>')
            body.append(f'<text class="tick" x="{_f(px(v))}" y="{_f(axis_y - 6)}" '
                        f'text-anchor="middle" font-size="10">{format_value(v)}</text>')
        by_group = len(groups) > 1
        keys = groups if by_group else scores
        colors = {key: _CATEGORICAL[i % len(_CATEGORICAL)] for i, key in enumerate(keys)}
        for k, pair in enumerate(pairs):
            cy = ROW_HEIGHT * (k + 1.5)
            for r in by_pair[pair]:
                if r.missing:
                    continue
                fill = colors[r.group if by_group else r.score]
                attrs = (f'class="point" cx="{_f(px(r.value))}" cy="{_f(cy)}" r="5" '
                         f'fill="{fill}" fill-opacity="0.85"')
                if interactive:
                    body.append(f"<circle {attrs}>{_tooltip(*pair, r.score, r.group, r.value)}"
                                "</circle>")
                else:
                    body.append(f"<circle {attrs}/>")
        body += _categorical_legend(colors, left, height - ROW_HEIGHT + 14)
    return _document(_svg(width, height, body), interactive)


def _linear_legend_scales(scales, x0, y0, x1) -> list[str]:
    parts = ['<g class="legend">']
    block = (x1 - x0) / (len(scales) + 1)
    for i, (score, sc) in enumerate(scales.items()):
        bx = x0 + i * block
        steps = 10
        w = (block - 20) / (steps + 1)
        parts.append(f'<text x="{_f(bx)}" y="{_f(y0 + 8)}" font-size="10">{escape(score)} '
                     f"[{format_value(sc.domain[0])}, {format_value(sc.domain[1])}]</text>")
        for k in range(steps + 1):
            v = sc.domain[0] + (sc.domain[1] - sc.domain[0]) * k / steps
            parts.append(f'<rect class="swatch" x="{_f(bx + k * w)}" y="{_f(y0 + 14)}" '
                         f'width="{_f(w)}" height="10" fill="{sc(v)}"/>')
    nx = x0 + len(scales) * block
    parts.append(f'<rect class="swatch na" x="{_f(nx)}" y="{_f(y0 + 14)}" width="10" height="10" '
                 f'fill="{NA_COLOR}"/>')
    parts.append(f'<text x="{_f(nx + 14)}" y="{_f(y0 + 23)}" font-size="10">NA</text>')
    parts.append("</g>")
    return parts


def _categorical_legend(colors: dict[str, str], x0, y0) -> list[str]:
    parts = ['<g class="legend">']
    x = x0
    for key, col in colors.items():
        parts.append(f'<circle class="swatch" cx="{_f(x + 5)}" cy="{_f(y0 + 5)}" r="5" '
                     f'fill="{col}"/>')
        parts.append(f'<text x="{_f(x + 14)}" y="{_f(y0 + 9)}" font-size="10">{escape(key)}</text>')
        x += 24 + 7 * len(key)
    parts.append("</g>")
    return parts

import math
import re
import xml.etree.ElementTree as ET

import pytest

from pairscore import dispatch, errors, viz
from pairscore.table import new_pairwise
from pairscore.viz import ColorScale, NA_COLOR, glyph_specs, plot_linear, plot_matrix

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def grouped(penguins):
    return dispatch.pairwise_scores(penguins, by="species")


def parse(doc):
    text = doc.text
    if doc.media_type == "text/html":
        text = text[text.index("<svg"):text.index("</svg>") + 6]
    return ET.fromstring(text.encode() if text.startswith("<?xml") else text)


def glyphs(root):
    return [g for g in root.iter(SVG + "g") if g.get("class") == "glyph"]


def wedges(g, ring):
    return [p for p in g.iter(SVG + "path") if p.get("class") == f"wedge {ring}"]


class TestColorScale:
    def test_registered_domains(self):
        assert ColorScale.for_score("pearson").domain == (-1.0, 1.0)
        assert ColorScale.for_score("nmi").kind == "sequential"

    def test_endpoints(self):
        sc = ColorScale.for_score("pearson")
        assert sc(-1) == "#2166ac" and sc(0) == "#ffffff" and sc(1) == "#b2182b"
        assert sc(math.nan) == NA_COLOR
        assert sc(5) == sc(1)

    def test_unregistered_reads_sign(self):
        assert ColorScale.for_score("custom", [0.1, 0.3]).domain == (0.0, 1.0)
        assert ColorScale.for_score("custom", [-0.1, math.nan]).domain == (-1.0, 1.0)


class TestGlyphSpecs:
    def test_wedge_law(self, grouped):
        variables = sorted(grouped.variables())
        specs = glyph_specs(grouped, variables)
        assert len(specs) == 21
        for g in specs:
            n_scores = len({r.score for r in grouped if r.pair == tuple(sorted((g.x, g.y)))})
            assert len(g.inner) == n_scores
            assert len(g.outer) == 3 * n_scores
            for ring in (g.inner, g.outer):
                spans = [w.end - w.start for w in ring]
                assert all(s == pytest.approx(2 * math.pi / len(ring)) for s in spans)
                assert ring[0].start == 0 and ring[-1].end == pytest.approx(2 * math.pi)
            assert g.inner_fraction == viz.INNER_FRACTION

    def test_lower_triangle(self, grouped):
        variables = sorted(grouped.variables())
        for g in glyph_specs(grouped, variables):
            row, col = g.center
            assert row > col

    def test_ungrouped_fills_disc(self, penguins):
        t = dispatch.apply_measure(penguins, "pearson")
        for g in glyph_specs(t, sorted(t.variables())):
            assert len(g.inner) == 1 and not g.outer and g.inner_fraction == 1.0

    def test_absent_combo_is_missing(self):
        t = new_pairwise([("a", "b", "nmi", "g1", 0.2, "nn"), ("a", "b", "nmi", "g2", 0.4, "nn"),
                          ("a", "c", "nmi", "g1", 0.5, "nn")])
        specs = {(g.x, g.y): g for g in glyph_specs(t, ["a", "b", "c"])}
        ac = specs[("c", "a")]
        assert [w.group for w in ac.outer] == ["g1", "g2"]
        assert math.isnan(ac.outer[1].value)
        assert ac.inner_fraction == 0.0


class TestMatrix:
    def test_structure(self, grouped):
        root = parse(plot_matrix(grouped))
        gs = glyphs(root)
        assert len(gs) == 21
        for g in gs:
            assert len(wedges(g, "inner")) == 1 and len(wedges(g, "outer")) == 3
        labels = [t.text for t in root.iter(SVG + "text") if t.get("class") == "label"]
        assert sorted(labels) == sorted(grouped.variables())

    def test_ungrouped_penguins_28_cells(self, penguins):
        gs = glyphs(parse(plot_matrix(dispatch.pairwise_scores(penguins))))
        assert len(gs) == 28
        for g in gs:
            (w,) = wedges(g, "inner")
            assert not wedges(g, "outer")
            assert w.get("d").count("A") == 2  # full disc

    def test_fill_matches_scale(self, grouped):
        scales = {s: ColorScale.for_score(s) for s in grouped.scores()}
        lookup = {(r.x, r.y, r.score, r.group): r.value for r in grouped}
        for g in glyphs(parse(plot_matrix(grouped))):
            x, y = sorted((g.get("data-x"), g.get("data-y")))
            for p in g.iter(SVG + "path"):
                v = lookup[(x, y, p.get("data-score"), p.get("data-group"))]
                assert p.get("fill") == scales[p.get("data-score")](v)

    def test_island_na_fill(self, grouped):
        n = 0
        for g in glyphs(parse(plot_matrix(grouped))):
            if "island" in (g.get("data-x"), g.get("data-y")):
                for p in wedges(g, "outer"):
                    if p.get("data-group") in ("Chinstrap", "Gentoo"):
                        assert p.get("fill") == NA_COLOR
                        n += 1
        assert n == 2 * 6

    def test_byte_stable(self, grouped):
        assert plot_matrix(grouped).text == plot_matrix(grouped).text

    def test_interactive_tooltips(self, grouped):
        doc = plot_matrix(grouped, interactive=True)
        assert doc.media_type == "text/html"
        root = parse(doc)
        paths = [p for p in root.iter(SVG + "path") if "wedge" in p.get("class", "")]
        titles = [p.find(SVG + "title") for p in paths]
        assert all(t is not None for t in titles)
        assert len(paths) == 84
        assert re.fullmatch(r"x=\w+; y=\w+; score=\w+; group=\w+; value=\S+", titles[0].text)

    def test_single_pair(self):
        t = new_pairwise([("a", "b", "pearson", "all", 0.5, "nn")])
        gs = glyphs(parse(plot_matrix(t)))
        assert len(gs) == 1 and len(wedges(gs[0], "inner")) == 1

    def test_order_option(self, grouped):
        a = plot_matrix(grouped, "seriate_max_abs").text
        b = plot_matrix(grouped, "seriate_max_diff").text
        assert a != b
        with pytest.raises(ValueError):
            plot_matrix(grouped, "random")

    def test_empty(self):
        with pytest.raises(errors.EmptyTable):
            plot_matrix(new_pairwise([]))

    def test_write(self, grouped, tmp_path):
        doc = plot_matrix(grouped)
        doc.write(tmp_path / "m.svg")
        assert (tmp_path / "m.svg").read_text(encoding="utf-8") == doc.text


class TestWedgePath:
    def test_full_disc_uses_two_arcs(self):
        d = viz.wedge_path(50, 50, 0, 10, 0, 2 * math.pi)
        assert d.count("A") == 2

    def test_quarter_endpoints(self):
        d = viz.wedge_path(0, 0, 0, 10, 0, math.pi / 2)
        # anti-clockwise from 3 o'clock: (10, 0) to (0, -10) in SVG coordinates
        assert "10 0" in d or "10,0" in d
        assert "0 -10" in d or "0,-10" in d


class TestLinear:
    def test_tile_count_and_height(self, grouped):
        doc = plot_linear(grouped)
        root = parse(doc)
        tiles = [r for r in root.iter(SVG + "rect") if r.get("class") == "tile"]
        # a full grid: every pair gets a tile for every (score, group) column
        assert len(tiles) == 21 * len(grouped.scores()) * len(grouped.groups())
        na = [r for r in tiles if r.get("fill") == NA_COLOR]
        assert len(na) == len(tiles) - sum(not r.missing for r in grouped)
        assert root.get("height") == str(viz.ROW_HEIGHT * (21 + 2))

    def test_row_labels_follow_order(self, grouped):
        from pairscore.seriation import order_pairs_linear
        root = parse(plot_linear(grouped))
        labels = [t.text for t in root.iter(SVG + "text") if t.get("class") == "label"]
        assert labels == [f"{x}:{y}" for x, y in order_pairs_linear(grouped)]

    def test_points_skip_missing(self, grouped):
        root = parse(plot_linear(grouped, geom="point", interactive=False))
        pts = [c for c in root.iter(SVG + "circle") if c.get("class") == "point"]
        assert len(pts) == sum(not r.missing for r in grouped)

    def test_point_tooltips(self, penguins):
        t = dispatch.apply_measure(penguins, "pearson")
        root = parse(plot_linear(t, geom="point", interactive=True))
        pts = [c for c in root.iter(SVG + "circle") if c.get("class") == "point"]
        assert len(pts) == 10 and all(c.find(SVG + "title") is not None for c in pts)

    def test_bad_geom(self, grouped):
        with pytest.raises(ValueError):
            plot_linear(grouped, geom="bar")

    def test_empty(self):
        with pytest.raises(errors.EmptyTable):
            plot_linear(new_pairwise([]))

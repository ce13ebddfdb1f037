import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairscore import errors, scagnostics as sc
from pairscore.registry import SCAGNOSTIC_NAMES


def prufer_trees(n):
    """Every labelled spanning tree on n nodes, as edge lists (Cayley: n^(n-2))."""
    for seq in product(range(n), repeat=n - 2):
        degree = [1] * n
        for v in seq:
            degree[v] += 1
        edges = []
        for v in seq:
            leaf = min(i for i in range(n) if degree[i] == 1)
            edges.append((leaf, v))
            degree[leaf] -= 1
            degree[v] -= 1
        u, w = [i for i in range(n) if degree[i] == 1]
        edges.append((u, w))
        yield edges


def exhaustive_mst_length(pts):
    d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
    return min(sum(d[i, j] for i, j in t) for t in prufer_trees(len(pts)))


class TestBinning:
    def test_identity_below_threshold(self):
        rng = np.random.default_rng(0)
        c = sc.bin_cloud(rng.normal(size=100), rng.normal(size=100))
        assert len(c) == 100
        assert np.all(c.weights == 1)
        assert c.points.min() == 0 and c.points.max() == 1

    def test_weight_conservation(self):
        rng = np.random.default_rng(1)
        c = sc.bin_cloud(rng.uniform(size=10000), rng.uniform(size=10000))
        assert len(c) <= 1600
        assert c.weights.sum() == 10000
        assert c.points.min() >= 0 and c.points.max() <= 1

    def test_constant_axis(self):
        with pytest.raises(errors.DegenerateCloud):
            sc.bin_cloud([1, 2, 3], [5, 5, 5])
        assert all(math.isnan(v) for v in sc.scagnostics([1, 2, 3], [5, 5, 5]).values())


class TestGraphs:
    def test_three_points(self):
        pts = np.array([[0, 0], [1, 0], [0, 2.0]])
        g = sc.build_graphs(sc.BinnedCloud(pts, np.ones(3)))
        assert sorted(round(e[2], 12) for e in g.mst_edges) == [1.0, 2.0]
        assert sorted(g.hull) == [0, 1, 2]

    def test_square(self):
        pts = np.array([[0, 0], [1, 0], [1, 1], [0, 1.0]])
        g = sc.build_graphs(sc.BinnedCloud(pts, np.ones(4)))
        assert sum(e[2] for e in g.mst_edges) == pytest.approx(3.0)
        assert g.hull_area == pytest.approx(1.0)

    def test_collinear(self):
        x = np.arange(10.0)
        g = sc.build_graphs(sc.bin_cloud(x, 2 * x + 1))
        assert g.hull_area == 0
        s = sc.scagnostics(x, 2 * x + 1)
        assert math.isnan(s["convex"]) and math.isnan(s["skinny"])

    @pytest.mark.parametrize("seed", range(30))
    def test_mst_matches_exhaustive(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(3, 8)) if seed else 8
        pts = rng.uniform(size=(n, 2))
        g = sc.build_graphs(sc.BinnedCloud(pts, np.ones(n)))
        assert len(g.mst_edges) == n - 1
        assert sum(e[2] for e in g.mst_edges) == pytest.approx(exhaustive_mst_length(pts), abs=1e-12)

    def test_hull_convex_ccw(self):
        rng = np.random.default_rng(3)
        pts = rng.uniform(size=(50, 2))
        h = sc.convex_hull(pts)
        for k in range(len(h)):
            a, b, c = pts[h[k]], pts[h[(k + 1) % len(h)]], pts[h[(k + 2) % len(h)]]
            assert (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]) > 0

    def test_alpha_edges_within_alpha(self):
        rng = np.random.default_rng(4)
        g = sc.build_graphs(sc.bin_cloud(rng.normal(size=120), rng.normal(size=120)))
        assert all(e[2] <= g.alpha_value for e in g.alpha_edges)
        assert 0 < g.alpha_area <= g.hull_area + 1e-12


class TestScores:
    def test_monotonic_increasing(self):
        x = np.sort(np.random.default_rng(2).uniform(size=80))
        assert sc.scagnostics(x, np.exp(x))["monotonic"] == pytest.approx(1.0, abs=1e-9)

    def test_line_is_stringy(self):
        x = np.arange(30.0)
        assert sc.scagnostics(x, x)["stringy"] == pytest.approx(1.0)

    @pytest.mark.parametrize("seed", range(20))
    def test_monotonic_is_squared_spearman(self, seed):
        from scipy.stats import spearmanr
        rng = np.random.default_rng(seed)
        x = rng.normal(size=90)
        y = x + rng.normal(size=90)
        rho = spearmanr(x, y).statistic
        assert sc.scagnostics(x, y)["monotonic"] == pytest.approx(rho ** 2, abs=1e-9)

    @pytest.mark.parametrize("seed", range(20))
    def test_outlier_injection(self, seed):
        rng = np.random.default_rng(seed)
        blob = rng.normal(size=(59, 2))
        inner = np.vstack([blob, rng.normal(size=(1, 2)) * 0.1])
        far = np.vstack([blob, [[25.0, 25.0]]])
        a = sc.scagnostics(*inner.T)["outlying"]
        b = sc.scagnostics(*far.T)["outlying"]
        assert b > a

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6), st.sampled_from([40, 150, 400]))
    def test_range_swap_affine(self, seed, n):
        rng = np.random.default_rng(seed)
        x = rng.normal(size=n)
        y = x ** 2 + rng.normal(scale=0.5, size=n)
        s = sc.scagnostics(x, y)
        for k in SCAGNOSTIC_NAMES:
            assert 0.0 <= s[k] <= 1.0
        swapped = sc.scagnostics(y, x)
        scaled = sc.scagnostics(3 * x - 7, 0.5 * y + 2)
        for k in SCAGNOSTIC_NAMES:
            assert swapped[k] == pytest.approx(s[k], abs=1e-9)
            assert scaled[k] == pytest.approx(s[k], abs=1e-9)


class TestClumpy:
    def test_two_clusters(self):
        rng = np.random.default_rng(0)
        a = rng.normal(size=(40, 2)) * 0.05
        pts = np.vstack([a, a + 5])
        assert sc.scagnostics(*pts.T)["clumpy"] > 0.9

    def test_even_spacing_is_zero(self):
        x = np.arange(20.0)
        assert sc.scagnostics(x, x)["clumpy"] == 0.0

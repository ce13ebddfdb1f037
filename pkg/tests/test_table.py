import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairscore import errors
from pairscore.table import (ALL, LabeledMatrix, PairwiseTable, filter_pairs, from_matrix,
                             new_pairwise, pivot_wide, read_csv, to_matrix, write_csv)


def _rows(*specs):
    return [(x, y, s, g, v, "nn") for x, y, s, g, v in specs]


class TestNewPairwise:
    def test_swaps_to_alphabetical(self):
        t = new_pairwise([("bill_len", "bill_dep", "pearson", "all", -0.235, "nn")])
        r = t[0]
        assert (r.x, r.y) == ("bill_dep", "bill_len")
        assert r.value == -0.235

    def test_empty(self):
        t = new_pairwise([])
        assert len(t) == 0
        assert t.variables() == []

    def test_duplicate_key_rejected(self):
        rows = _rows(("a", "b", "pearson", ALL, 0.1), ("b", "a", "pearson", ALL, 0.2))
        with pytest.raises(errors.DuplicateKey):
            new_pairwise(rows)

    def test_self_pair(self):
        with pytest.raises(errors.SelfPair):
            new_pairwise(_rows(("a", "a", "pearson", ALL, 0.1)))

    def test_range_checked_for_known_scores(self):
        with pytest.raises(errors.RangeViolation):
            new_pairwise(_rows(("a", "b", "dcor", ALL, -0.2)))
        with pytest.raises(errors.RangeViolation):
            new_pairwise(_rows(("a", "b", "pearson", ALL, 1.5)))

    def test_unknown_score_unchecked(self):
        t = new_pairwise(_rows(("a", "b", "my_score", ALL, 42.0)))
        assert t[0].value == 42.0

    def test_missing_value_allowed(self):
        t = new_pairwise(_rows(("a", "b", "pearson", ALL, None)))
        assert t[0].missing

    def test_all_sorts_after_named_groups(self):
        t = new_pairwise(_rows(("a", "b", "s", ALL, 1.0), ("a", "b", "s", "Zeta", 1.0),
                               ("a", "b", "s", "Alpha", 1.0)))
        assert [r.group for r in t] == ["Alpha", "Zeta", ALL]

    def test_idempotent(self):
        rows = _rows(("c", "a", "s", ALL, 0.3), ("b", "a", "s", "g", 0.1), ("a", "b", "r", ALL, 0.2))
        t = new_pairwise(rows)
        assert new_pairwise(t.rows) == t


class TestMatrix:
    def test_five_by_five_gives_ten_rows(self):
        rng = np.random.default_rng(0)
        a = rng.uniform(-1, 1, (5, 5))
        m = (a + a.T) / 2
        t = from_matrix(m, list("abcde"), score="pearson")
        assert len(t) == 10

    def test_one_by_one_is_empty(self):
        assert len(from_matrix(np.ones((1, 1)), ["a"])) == 0

    def test_asymmetric_rejected(self):
        m = np.eye(3)
        m[1, 2] = 1e-3
        with pytest.raises(errors.AsymmetricInput):
            from_matrix(m, list("abc"))

    def test_duplicate_labels(self):
        with pytest.raises(errors.DuplicateLabels):
            from_matrix(np.eye(2), ["a", "a"])

    def test_first_entry_wins(self):
        t = new_pairwise(_rows(("a", "b", "spearman", ALL, 0.5), ("a", "b", "pearson", ALL, 0.2)))
        m = to_matrix(t)
        assert m.values[0, 1] == 0.2  # pearson sorts first

    def test_variable_universe_is_mentioned_names(self):
        m = to_matrix(new_pairwise(_rows(("a", "b", "s", ALL, 0.3))))
        assert m.labels == ["a", "b"]
        assert m.values.shape == (2, 2)

    def test_empty_table(self):
        assert to_matrix(PairwiseTable()).values.shape == (0, 0)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(2, 8), st.integers(0, 2**31 - 1))
    def test_roundtrip(self, p, seed):
        a = np.random.default_rng(seed).uniform(-1, 1, (p, p))
        m = np.triu(a, 1)
        m = m + m.T
        np.fill_diagonal(m, 1.0)
        labels = [f"v{i:02d}" for i in range(p)]
        back = to_matrix(from_matrix(LabeledMatrix(labels, m), score="pearson"))
        assert back.labels == labels
        assert np.array_equal(back.values, m)
        assert len(from_matrix(m, labels)) == p * (p - 1) // 2


def _grouped():
    return new_pairwise(_rows(
        ("a", "b", "s", ALL, 0.1), ("a", "b", "s", "g1", 0.6),
        ("a", "c", "s", ALL, -0.4), ("a", "c", "s", "g1", -0.45),
        ("b", "c", "s", ALL, None), ("b", "c", "s", "g1", None),
    ))


class TestFilter:
    def test_vacuous_threshold(self):
        t = _grouped()
        kept = filter_pairs(t, min_max_abs=0)
        assert kept.pairs() == [("a", "b"), ("a", "c")]  # the all-missing pair goes

    def test_max_abs(self):
        assert filter_pairs(_grouped(), min_max_abs=0.5).pairs() == [("a", "b")]

    def test_range_or_max(self):
        t = _grouped()
        assert filter_pairs(t, min_max_abs=0.9, min_range=0.5).pairs() == [("a", "b")]
        assert filter_pairs(t, min_max_abs=0.42, min_range=0.9).pairs() == [("a", "b"), ("a", "c")]

    def test_above_one_empties(self):
        assert len(filter_pairs(_grouped(), min_max_abs=1.5)) == 0

    def test_with_variable(self):
        t = _grouped()
        assert filter_pairs(t, with_variable="c").pairs() == [("a", "c"), ("b", "c")]
        with pytest.raises(errors.UnknownVariable):
            filter_pairs(t, with_variable="zz")

    @settings(max_examples=40, deadline=None)
    @given(st.floats(0, 1), st.floats(0, 1))
    def test_monotone(self, lo, hi):
        lo, hi = sorted((lo, hi))
        t = _grouped()
        a = set(filter_pairs(t, min_max_abs=lo).pairs())
        b = set(filter_pairs(t, min_max_abs=hi).pairs())
        assert b <= a
        assert set(filter_pairs(t, min_max_abs=lo).rows) <= set(t.rows)


class TestPivot:
    def test_columns_and_keys(self):
        t = new_pairwise(_rows(("a", "b", "ace", ALL, 0.5), ("a", "b", "nmi", ALL, 0.2),
                               ("a", "c", "ace", ALL, 0.1)))
        w = pivot_wide(t)
        assert w.columns[-2:] == ["ace", "nmi"]
        assert len(w.rows) == 2
        assert math.isnan(w.rows[1][-1])

    def test_groups_are_keys(self):
        t = new_pairwise(_rows(("a", "b", "s", "g1", 0.5), ("a", "b", "s", "g2", 0.2),
                               ("a", "b", "r", "g2", 0.3)))
        w = pivot_wide(t)
        keys = [(r[0], r[1], r[2]) for r in w.rows]
        assert keys == [("a", "b", "g1"), ("a", "b", "g2")]


class TestCsv:
    def test_header_and_missing(self):
        text = write_csv(_grouped())
        lines = text.splitlines()
        assert lines[0] == "x,y,score,group,value,pair_type"
        assert "b,c,s,all,,nn" in lines

    def test_fifteen_digits(self):
        t = new_pairwise(_rows(("a", "b", "s", ALL, 1 / 3)))
        assert "0.333333333333333" in write_csv(t)

    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(3)
        rows = [(f"v{i}", f"w{j}", "pearson", g, float(rng.uniform(-1, 1)), "nn")
                for i in range(4) for j in range(3) for g in ("A", ALL)]
        t = read_csv(io.StringIO(write_csv(new_pairwise(rows))))
        p = tmp_path / "s.csv"
        write_csv(t, p)
        assert read_csv(p) == t

    def test_malformed(self):
        with pytest.raises(errors.MalformedScoreFile):
            read_csv(io.StringIO(""))
        with pytest.raises(errors.MalformedScoreFile):
            read_csv(io.StringIO("a,b\n1,2\n"))
        with pytest.raises(errors.MalformedScoreFile):
            read_csv(io.StringIO("x,y,score,group,value,pair_type\na,b,s,all,zz,nn\n"))

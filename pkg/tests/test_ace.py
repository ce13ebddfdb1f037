import math
from itertools import combinations

import numpy as np
import pytest

from conftest import random_mixed
from pairscore.ace import ace_correlation
from pairscore.categorical import canonical_correlation
from pairscore.dataset import complete_pairs, factor_column, numeric_column


def test_linear_is_one():
    x = np.linspace(-1, 1, 50)
    v = ace_correlation(numeric_column("x", x), numeric_column("y", 3 * x - 2))
    assert v == pytest.approx(1.0, abs=1e-6)


def test_square_recovered():
    x = np.linspace(-1, 1, 200)
    assert ace_correlation(numeric_column("x", x), numeric_column("y", x ** 2)) >= 0.99


def test_ff_equals_cancor(penguins):
    for a, b in combinations(["species", "island", "sex"], 2):
        ca, cb = complete_pairs(penguins[a], penguins[b])
        assert ace_correlation(ca, cb) == pytest.approx(canonical_correlation(ca, cb), abs=1e-6)


def test_symmetric_and_in_range():
    rng = np.random.default_rng(9)
    x = rng.normal(size=80)
    y = np.abs(x) + rng.normal(scale=0.3, size=80)
    a, b = numeric_column("x", x), numeric_column("y", y)
    v = ace_correlation(a, b)
    assert 0.0 <= v <= 1.0
    assert ace_correlation(b, a) == pytest.approx(v, abs=1e-12)


def test_degenerate_inputs_missing():
    x = numeric_column("x", np.arange(20.0))
    assert math.isnan(ace_correlation(x, numeric_column("c", np.ones(20))))
    assert math.isnan(ace_correlation(x, factor_column("f", ["a"] * 20)))
    short = numeric_column("s", np.arange(5.0))
    assert math.isnan(ace_correlation(short, short))


@pytest.mark.parametrize("seed", range(50))
def test_dominates_cancor(seed):
    d = random_mixed(np.random.default_rng(seed), n=int(np.random.default_rng(seed).integers(20, 90)))
    for x, y in combinations(d.names, 2):
        a, b = complete_pairs(d[x], d[y])
        c, v = canonical_correlation(a, b), ace_correlation(a, b)
        if math.isnan(c):
            continue
        assert v >= c - 1e-6
        if a.is_factor and b.is_factor:
            assert v == pytest.approx(c, abs=1e-6)

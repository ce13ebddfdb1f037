import numpy as np
import pytest

from pairscore.cli import bundled_path
from pairscore.dataset import Dataset, factor_column, load_csv, load_schema, numeric_column


@pytest.fixture(scope="session")
def penguins():
    return load_csv(bundled_path("penguins", ".csv"),
                    load_schema(bundled_path("penguins", "_schema.json")))


@pytest.fixture(scope="session")
def adelie(penguins):
    sp = penguins["species"]
    idx = np.flatnonzero(sp.values == sp.levels.index("Adelie"))
    return penguins.take(idx)


def random_mixed(rng, n=60, n_num=3, n_fac=2, n_ord=1):
    """Small mixed-type dataset with some dependence between columns."""
    z = rng.normal(size=n)
    cols = []
    for i in range(n_num):
        cols.append(numeric_column(f"n{i}", z * rng.uniform(-1, 1) + rng.normal(size=n)))
    for i in range(n_fac):
        k = int(rng.integers(2, 5))
        codes = np.clip(((z + rng.normal(size=n)) * k / 3 + k / 2).astype(int), 0, k - 1)
        cols.append(factor_column(f"f{i}", [f"L{c}" for c in codes], [f"L{j}" for j in range(k)]))
    for i in range(n_ord):
        codes = np.digitize(z + rng.normal(size=n), [-0.5, 0.5])
        cols.append(factor_column(f"o{i}", [f"q{c}" for c in codes], ["q0", "q1", "q2"],
                                  ordered=True))
    return Dataset(cols)


# -- acceptance summary ---------------------------------------------------------------

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[name] = "PASS" if report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        num, label = name[len("test_criterion_"):].split("_", 1)
        terminalreporter.write_line(f"{_acceptance[name]} criterion {int(num):2d} ({label})")

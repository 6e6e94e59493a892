import numpy as np
import pytest

from lrdboot.empirical import Grid
from lrdboot.hermite import Transform, build_profile
from lrdboot.lrd_gauss import CovarianceModel


@pytest.fixture(scope="session")
def poly03():
    return CovarianceModel.poly(0.3)


@pytest.fixture(scope="session")
def identity_profile():
    return build_profile(Transform("identity"))


@pytest.fixture(scope="session")
def hermite2_profile():
    return build_profile(Transform("hermite", 2))


@pytest.fixture(scope="session")
def identity_grid(identity_profile):
    return Grid.default(identity_profile)


def mc_mean_se(values):
    """Sample mean and its standard error."""
    v = np.asarray(values, dtype=float)
    return float(v.mean()), float(v.std(ddof=1) / np.sqrt(v.size))


def mc_var_se(values):
    """Sample variance (about the sample mean) and its standard error."""
    v = np.asarray(values, dtype=float)
    c = v - v.mean()
    var = float(np.mean(c**2))
    return var, float(np.sqrt(max(np.mean(c**4) - var**2, 0.0) / v.size))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line for an acceptance criterion and assert it."""

    def check(cid, ok, detail):
        line = f"criterion {cid}: {'PASS' if ok else 'FAIL'} | {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return check


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

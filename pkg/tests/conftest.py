import numpy as np
import pytest

from sipe.core import TimeSeriesMatrix, center_standardize


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_series(rng, n, p):
    return center_standardize(TimeSeriesMatrix(rng.standard_normal((n, p))))


def random_hermitian(rng, p, pd=False):
    X = rng.standard_normal((p, p)) + 1j * rng.standard_normal((p, p))
    if pd:
        return X @ X.conj().T / p + 0.5 * np.eye(p)
    return 0.5 * (X + X.conj().T)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)

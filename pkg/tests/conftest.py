import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    keys = sorted(k for k in mod.RESULTS if isinstance(k, int)) + [k for k in mod.RESULTS if not isinstance(k, int)]
    for k in keys:
        terminalreporter.write_line(mod.RESULTS[k])

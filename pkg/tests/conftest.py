from functools import lru_cache

import pytest

from acq.builtins import load_builtin


@lru_cache(maxsize=None)
def _load(name):
    return load_builtin(name)


@pytest.fixture
def model():
    """Return a cached built-in model by name."""
    return _load


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])

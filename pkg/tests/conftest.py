from __future__ import annotations

import pytest

from gtx.corpus import load_shipped


@pytest.fixture(scope="session")
def triad():
    return load_shipped("triad")


@pytest.fixture(scope="session")
def ccs():
    return load_shipped("ccs")


@pytest.fixture(scope="session")
def lafont():
    return load_shipped("lafont")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])

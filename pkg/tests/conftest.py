import pytest

from gwalg.brst import build_context
from gwalg.pyramids import build


@pytest.fixture(scope="session")
def ctx_factory():
    cache = {}

    def make(lam, mu):
        key = (tuple(lam), tuple(mu))
        if key not in cache:
            cache[key] = build_context(build(lam), build(mu))
        return cache[key]

    return make


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])

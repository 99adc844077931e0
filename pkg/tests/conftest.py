from functools import lru_cache

import pytest

from pseqfam.finite_field import build_field

# extension fields with q <= 2187 plus a few prime fields
SMALL_FIELDS = [(3, 1), (3, 3), (3, 5), (3, 7), (7, 1), (7, 3), (11, 1), (11, 3), (19, 1), (23, 1)]


@lru_cache(maxsize=None)
def field(p, n):
    return build_field(p, n)


@pytest.fixture(scope="session")
def F27():
    return field(3, 3)


@pytest.fixture(scope="session")
def F343():
    return field(7, 3)


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    """Record a one-line verdict printed in the terminal summary."""
    return _ACCEPTANCE_LINES.append


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

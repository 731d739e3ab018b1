import functools

import pytest

from cosetiq.algebra import AlgebraContext
from cosetiq.generic import discover


@functools.lru_cache(maxsize=None)
def context(alpha, n, q, method="quotient"):
    return AlgebraContext.build(alpha, n, q, method)


@pytest.fixture(scope="session")
def ctx_factory():
    return context


@functools.lru_cache(maxsize=None)
def discovery(alpha, q, basis="pbw"):
    return discover(alpha, q, basis)


ACCEPTANCE: list[str] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line for an acceptance criterion; the lines are repeated at the end of the run."""
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        print(line)
        ACCEPTANCE.append(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def cycle_spin(func, x):
    """Average of ``roll(func(roll(x, -s)), s)`` over every cyclic shift ``s``."""
    x = np.asarray(x, dtype=float)
    return np.mean([np.roll(func(np.roll(x, -s)), s) for s in range(x.size)], axis=0)


ACCEPTANCE_LINES = {}


@pytest.fixture
def acceptance(request):
    """Record a one-line verdict for an acceptance criterion.

    Call with ``(number, title, ok, detail)``; the lines are echoed as the
    test runs and collected into the terminal summary in criterion order.
    """
    def report(number, title, ok, detail):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        ACCEPTANCE_LINES[number] = line
        print(line)
        return ok
    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])

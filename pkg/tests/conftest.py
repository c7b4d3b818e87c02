import numpy as np
import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Record one acceptance line; it is echoed at the end of the session."""
    def _record(n, name, ok, detail=""):
        line = f"criterion {n} {name}: {'PASS' if ok else 'FAIL'} {detail}".rstrip()
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok
    return _record


@pytest.fixture
def rng():
    return np.random.default_rng(20240)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

"""Shared fixtures: engines are expensive, so one is built per curve."""

from __future__ import annotations

import pytest

from ramrec import Engine, SpectralCurve
from ramrec.parser import parse_to_function


class EngineCache:
    def __init__(self):
        self._engines = {}

    def get(self, x: str, y: str, swap: bool = False, g_max: int = 3, n_max: int = 3) -> Engine:
        key = (x, y, swap)
        engine = self._engines.get(key)
        if engine is None:
            curve = SpectralCurve(x, y)
            engine = Engine(curve.swap() if swap else curve, g_max=g_max, n_max=n_max)
            self._engines[key] = engine
        return engine


@pytest.fixture(scope="session")
def engines() -> EngineCache:
    return EngineCache()


def in_p0(src: str):
    """Parse an expression in t and rename t to p0."""
    return parse_to_function(src).rename({"t": "p0"})


# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE_LINES: dict = {}


def record_criterion(number: int, title: str, failures: list, seconds: float) -> None:
    status = "PASS" if not failures else "FAIL"
    line = f"criterion {number}: {status}  {title} ({seconds:.1f}s)"
    if failures:
        line += " -- " + "; ".join(failures)
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])

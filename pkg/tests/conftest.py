from fractions import Fraction
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "fixtures"
DEMO_CSV = ROOT / "src" / "hhikit" / "data" / "synthetic_os_sales.csv"


def partitions(total, cap):
    """All multisets of positive ints <= cap summing to total, non-increasing."""
    def rec(left, largest):
        if left == 0:
            yield []
            return
        for p in range(min(left, largest), 0, -1):
            for rest in rec(left - p, p):
                yield [p] + rest
    yield from rec(total, cap)


def brute_force_hhi_range(named, residual, unit):
    """Exact (min, max) sum of squares over completions on a ``unit`` grid.

    ``named`` and ``residual`` are decimal strings; every hidden firm is a
    whole number of units and no larger than the smallest named share.
    """
    shares = [Fraction(s) for s in named]
    r = Fraction(residual)
    u = Fraction(unit)
    base = sum(s * s for s in shares)
    cap = int(min(shares) / u)
    chunks = r / u
    assert chunks.denominator == 1
    values = [base + sum((p * u) ** 2 for p in parts) for parts in partitions(int(chunks), cap)]
    return min(values), max(values)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


# -- acceptance reporting ------------------------------------------------------

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(text): acceptance criterion description")


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.failed):
        return
    text = dict(report.user_properties).get("criterion")
    if text:
        _criteria.append(("PASS" if report.passed else "FAIL", text))


def pytest_runtest_setup(item):
    marker = item.get_closest_marker("criterion")
    if marker:
        item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for status, text in _criteria:
        terminalreporter.write_line(f"{status}  {text}")

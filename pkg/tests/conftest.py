"""Shared fixtures and the acceptance-criteria terminal summary."""

from fractions import Fraction

import pytest

import kpphase as kp

_criterion_lines: list[tuple[int, bool, str]] = []


def record_criterion(number: int, passed: bool, detail: str) -> None:
    """Collect one pass/fail line per acceptance criterion for the summary."""
    _criterion_lines[:] = [row for row in _criterion_lines if row[0] != number]
    _criterion_lines.append((number, passed, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_criterion_lines):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status} ({detail})")


@pytest.fixture
def four_item() -> kp.Instance:
    # weights sum to 19, values to 20; small enough to enumerate by hand
    return kp.Instance(weights=(2, 5, 8, 4), values=(3, 2, 6, 9))


@pytest.fixture
def tight_pair() -> kp.ConstraintPair:
    # capacity 10 of 19, profit floor 15 of 20: no subset meets both
    return kp.ConstraintPair(Fraction(10, 19), Fraction(15, 20))


@pytest.fixture
def loose_pair() -> kp.ConstraintPair:
    # capacity 12 of 19, profit floor 12 of 20: items {0, 3} are a witness
    return kp.ConstraintPair(Fraction(12, 19), Fraction(12, 20))

"""Fixture CSVs in the sweep artifact schemas, plus the acceptance recorder.

The grid covers a 4x4 lattice of (c, p) cells with probability falling in p
and rising in c, so both default isoquant levels cross every column; the
bounds file keeps p_El <= p_EL <= p_E cell by cell; the ratio file is sorted
by log_ratio with the effort peak at zero.
"""

from __future__ import annotations

import pytest

GRID_CSV = """\
n,c,p,trials,solvable,unknown,probability,nodes_mean,nodes_median,nodes_max,p_El,p_EL
12,0.200000,0.200000,20,14,0,0.700000,17.500000,17.000000,37,0.500000,0.600000
12,0.200000,0.400000,20,6,0,0.300000,13.500000,13.000000,29,0.100000,0.200000
12,0.200000,0.600000,20,2,0,0.100000,5.500000,5.000000,13,0.000000,0.000000
12,0.200000,0.800000,20,0,0,0.000000,1.500000,1.000000,5,0.000000,0.000000
12,0.400000,0.200000,20,17,0,0.850000,13.500000,13.000000,29,0.650000,0.750000
12,0.400000,0.400000,20,11,0,0.550000,25.500000,25.000000,53,0.350000,0.450000
12,0.400000,0.600000,20,6,0,0.300000,13.500000,13.000000,29,0.100000,0.200000
12,0.400000,0.800000,20,1,0,0.050000,3.500000,3.000000,9,0.000000,0.000000
12,0.600000,0.200000,20,20,0,1.000000,3.500000,3.000000,9,0.800000,0.900000
12,0.600000,0.400000,20,17,0,0.850000,13.500000,13.000000,29,0.650000,0.750000
12,0.600000,0.600000,20,11,0,0.550000,25.500000,25.000000,53,0.350000,0.450000
12,0.600000,0.800000,20,6,0,0.300000,13.500000,13.000000,29,0.100000,0.200000
12,0.800000,0.200000,20,20,0,1.000000,3.500000,3.000000,9,0.800000,0.900000
12,0.800000,0.400000,20,20,0,1.000000,3.500000,3.000000,9,0.800000,0.900000
12,0.800000,0.600000,20,17,0,0.850000,13.500000,13.000000,29,0.650000,0.750000
12,0.800000,0.800000,20,7,0,0.350000,21.500000,21.000000,45,0.150000,0.250000
"""

BOUNDS_CSV = """\
n,c,p,trials,p_E,p_El,p_EL,se_E,se_El,se_EL,unknown_count
12,0.200000,0.200000,20,0.700000,0.500000,0.600000,0.050000,0.050000,0.050000,0
12,0.200000,0.400000,20,0.300000,0.100000,0.200000,0.050000,0.050000,0.050000,0
12,0.200000,0.600000,20,0.100000,0.000000,0.000000,0.050000,0.050000,0.050000,0
12,0.200000,0.800000,20,0.000000,0.000000,0.000000,0.050000,0.050000,0.050000,0
12,0.400000,0.200000,20,0.850000,0.650000,0.750000,0.050000,0.050000,0.050000,0
12,0.400000,0.400000,20,0.550000,0.350000,0.450000,0.050000,0.050000,0.050000,0
12,0.400000,0.600000,20,0.300000,0.100000,0.200000,0.050000,0.050000,0.050000,0
12,0.400000,0.800000,20,0.050000,0.000000,0.000000,0.050000,0.050000,0.050000,0
12,0.600000,0.200000,20,1.000000,0.800000,0.900000,0.050000,0.050000,0.050000,0
12,0.600000,0.400000,20,0.850000,0.650000,0.750000,0.050000,0.050000,0.050000,0
12,0.600000,0.600000,20,0.550000,0.350000,0.450000,0.050000,0.050000,0.050000,0
12,0.600000,0.800000,20,0.300000,0.100000,0.200000,0.050000,0.050000,0.050000,0
12,0.800000,0.200000,20,1.000000,0.800000,0.900000,0.050000,0.050000,0.050000,0
12,0.800000,0.400000,20,1.000000,0.800000,0.900000,0.050000,0.050000,0.050000,0
12,0.800000,0.600000,20,0.850000,0.650000,0.750000,0.050000,0.050000,0.050000,0
12,0.800000,0.800000,20,0.350000,0.150000,0.250000,0.050000,0.050000,0.050000,0
"""

RATIO_CSV = """\
log_ratio,probability,nodes_median
-1.386294,0.000000,1.000000
-0.693147,0.050000,3.000000
-0.405465,0.300000,13.000000
-0.287682,0.300000,13.000000
0.000000,0.550000,25.000000
0.287682,0.700000,17.000000
0.405465,0.850000,13.000000
0.693147,0.850000,13.000000
1.386294,1.000000,3.000000
"""


@pytest.fixture
def grid_csv(tmp_path):
    path = tmp_path / "grid.csv"
    path.write_text(GRID_CSV)
    return path


@pytest.fixture
def bounds_csv(tmp_path):
    path = tmp_path / "bounds.csv"
    path.write_text(BOUNDS_CSV)
    return path


@pytest.fixture
def ratio_csv(tmp_path):
    path = tmp_path / "ratio.csv"
    path.write_text(RATIO_CSV)
    return path


_criterion_lines: list[tuple[int, bool, str]] = []


def record_criterion(number: int, passed: bool, detail: str) -> None:
    """Store one acceptance verdict for the terminal summary."""
    _criterion_lines[:] = [row for row in _criterion_lines if row[0] != number]
    _criterion_lines.append((number, passed, detail))


def pytest_terminal_summary(terminalreporter) -> None:
    if not _criterion_lines:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(_criterion_lines):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status} ({detail})")

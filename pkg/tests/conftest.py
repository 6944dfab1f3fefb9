import math

import pytest

from icp.angles import AngleData
from icp.complex import CellComplex, generate_keyexample, generate_lattice, square_patch

_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if not name.startswith("test_criterion_"):
        return
    num = int(name.split("_")[2])
    prev = _criteria.get(num, "PASS")
    _criteria[num] = "PASS" if prev == "PASS" and report.outcome == "passed" else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        terminalreporter.write_line(f"criterion {num:2d}: {_criteria[num]}")


@pytest.fixture
def w8():
    return generate_keyexample(0)


@pytest.fixture
def square_face():
    c = CellComplex([(0, 1, 2, 3)])
    return c, AngleData.constant(c.edges, math.pi / 2)


@pytest.fixture
def lattice6():
    return generate_lattice("square", 6)


def lattice(n):
    c = square_patch(n)
    return c, AngleData.constant(c.edges, math.pi / 2)

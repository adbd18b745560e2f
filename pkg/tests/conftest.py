import math
import re

import pytest

import lidarlayout as ll

REPORTED_RIGHT = (4.335641, -0.777785, 0.696529)
REPORTED_LEFT = (-4.335641, 1.893497, -0.696529)

# One line per acceptance criterion, filled in by tests/test_acceptance.py
# and echoed after the run so the verdicts survive output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    failed = []
    for report in terminalreporter.stats.get("failed", []):
        m = re.search(r"test_criterion_(\d+)", getattr(report, "nodeid", ""))
        if m:
            failed.append(f"[FAIL] criterion {m.group(1)}")
    lines = sorted(ACCEPTANCE_LINES + failed,
                   key=lambda s: int(re.search(r"criterion (\d+)", s).group(1)))
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def table_roi():
    """Scored box of the two-LiDAR reference scenario, 0.5 m cubes."""
    return ll.Roi((-8.5, 8.5), (-2.5, 2.5), (0.0, 5.0), cube_edge=0.5)


@pytest.fixture(scope="session")
def case_fleet():
    """Two LiDARs, one up and one down laser (+-10 deg) each."""
    return ll.FleetSpec(((math.radians(10.0), math.radians(-10.0)),) * 2)


@pytest.fixture(scope="session")
def reported_poses():
    return (ll.LidarPose(*REPORTED_RIGHT), ll.LidarPose(*REPORTED_LEFT))


@pytest.fixture(scope="session")
def case_lattice(table_roi):
    return ll.build_lattice(table_roi)


@pytest.fixture(scope="session")
def case_shells(table_roi, case_lattice):
    return ll.assign_shells(case_lattice, ll.build_cylinders(table_roi, 1.0))

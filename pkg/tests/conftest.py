from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from polylift.polyhedron import from_generators, from_inequalities
from polylift.scalar import sqrt

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

R3 = sqrt(3)


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def F(x):
    return Fraction(x)


def nonequal():
    return from_inequalities([(-1, -1), (1, 1), (1, -1), (-1, 1)], [-1, 3, 1, 1])


def hexagon_prism():
    h = R3 / 3
    A = [(1, h, 0), (0, 2 * h, 0), (-1, h, 0), (-1, -h, 0), (0, -2 * h, 0), (1, -h, 0), (0, 0, -1)]
    return from_inequalities(A, [1, 1, 1, 1, 1, 1, 0])


def half_line():
    return from_inequalities([(-1,)], [1])


def orthant(n):
    return from_generators([(0,) * n], [tuple(int(i == j) for j in range(n)) for i in range(n)])


coords = st.integers(min_value=-3, max_value=3)


@st.composite
def random_polyhedra(draw, dims=(2, 3)):
    """Random V-representations: a point cloud plus optional rays and lines."""
    n = draw(st.sampled_from(dims))
    vec = st.tuples(*[coords] * n)
    nonzero = vec.filter(any)
    points = draw(st.lists(vec, min_size=1, max_size=6))
    rays = draw(st.lists(nonzero, max_size=2))
    lines = draw(st.lists(nonzero, max_size=1))
    return from_generators(points, rays, lines, dim=n)


# -- acceptance summary --------------------------------------------------------

_ACCEPTANCE: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.failed:
        prev = _ACCEPTANCE.get(name, "PASS")
        _ACCEPTANCE[name] = "FAIL" if (report.failed or prev == "FAIL") else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[2])):
        terminalreporter.write_line(f"{_ACCEPTANCE[name]}  {name}")

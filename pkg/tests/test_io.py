import pytest

from conftest import FIXTURES
from polylift.errors import DomainMismatch, ParseError
from polylift.io import (
    format_hrep,
    format_lift,
    format_matrix,
    format_vrep,
    parse_lift_text,
    parse_matrix_text,
    parse_polyhedron_text,
    read_lift,
    read_matrix,
)
from polylift.polyhedron import HRep
from polylift.scalar import Domain


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.poly")), ids=lambda p: p.name)
def test_polyhedron_fixture_round_trip(path):
    rep, domain = parse_polyhedron_text(path.read_text())
    text = (format_hrep if isinstance(rep, HRep) else format_vrep)(rep, domain)
    again, dom2 = parse_polyhedron_text(text)
    assert again == rep and dom2 == domain
    assert (format_hrep if isinstance(rep, HRep) else format_vrep)(again, dom2) == text


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.mat")), ids=lambda p: p.name)
def test_matrix_fixture_round_trip(path):
    M = read_matrix(str(path))
    text = format_matrix(M)
    assert parse_matrix_text(text) == M
    assert format_matrix(parse_matrix_text(text)) == text


@pytest.mark.parametrize("path", sorted(FIXTURES.glob("*.lift")), ids=lambda p: p.name)
def test_lift_fixture_round_trip(path):
    lift = read_lift(str(path))
    text = format_lift(lift)
    assert parse_lift_text(text) == lift


def test_matrix_domain_line():
    M = parse_matrix_text("1 2\ndomain Q(sqrt 3)\n1 sqrt(3)\n")
    assert format_matrix(M).splitlines()[1] == "domain Q(sqrt 3)"
    with pytest.raises(ParseError):
        parse_matrix_text("1 2\n1 sqrt(3)\n")


@pytest.mark.parametrize("text", [
    "",
    "X\nQ\n",
    "H\nQ\nineq 1 2 3\n",
    "H\nQ\nineq 1 2 | 3\nineq 1 | 2\n",
    "V\nQ\nvertex 1 2\n",
    "H\nQ\n",
    "H\nQ(sqrt 4)\nineq 1 | 1\n",
    "H\nQ(sqrt 3)\nineq sqrt(2) | 1\n",
])
def test_malformed_polyhedra(text):
    with pytest.raises((ParseError, DomainMismatch)):
        parse_polyhedron_text(text)


@pytest.mark.parametrize("text", ["", "2\n1 2\n", "1 2\n1 2 3\n", "2 1\n1\n", "1 1\n1/0\n"])
def test_malformed_matrices(text):
    with pytest.raises(ParseError):
        parse_matrix_text(text)


def test_malformed_lifts():
    with pytest.raises(ParseError):
        parse_lift_text("cone cube 3\noffset 1\nproj 1\n")
    with pytest.raises(ParseError):
        parse_lift_text("cone orthant 2\noffset 1 0\nproj 1\n")
    with pytest.raises(ParseError):
        parse_lift_text("cone orthant 1\noffset 1\nbasis 1\nbasis 2\nproj 1\n")
    with pytest.raises(ParseError):
        parse_lift_text("cone orthant 1\noffset 1\nproj 1\nwitness point 1 1\n")


def test_empty_system_needs_dim():
    rep, dom = parse_polyhedron_text("H\nQ\ndim 2\n")
    assert rep.dim == 2 and dom == Domain()

import math
from fractions import Fraction
import random

from hypothesis import HealthCheck, given, settings

from conftest import half_line, hexagon_prism, nonequal, random_polyhedra
from polylift.linalg import vec
from polylift.polar import apex_by_d, barrier_cone, compute_d_sets, membership_by_d, polar_set, support_value
from polylift.polyhedron import (
    contains_point,
    decompose_lines,
    from_generators,
    from_inequalities,
    is_translated_cone,
    polyhedra_equal,
    recession_cone,
)

THIRD = Fraction(1, 3)
slow_ok = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _vecs(rows):
    return tuple(vec(r) for r in rows)


def test_support_value():
    assert support_value(nonequal(), vec((-1, -1))) == -1
    assert support_value(nonequal(), vec((0, 0))) == 0
    assert support_value(hexagon_prism(), vec((0, 0, 1))) == math.inf


def test_polar_examples():
    Q = polar_set(nonequal())
    expected = from_inequalities([(2, 1), (1, 2), (1, 0), (0, 1)], [1, 1, 1, 1])
    assert polyhedra_equal(Q, expected)
    square = from_generators([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    diamond = from_generators([(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert polyhedra_equal(polar_set(square), diamond)
    assert polyhedra_equal(polar_set(half_line()), from_generators([(-1,), (0,)]))


def test_d_sets_nonequal():
    pd = compute_d_sets(nonequal())
    assert pd.d1 == _vecs([(-1, 1), (THIRD, THIRD), (1, -1)])
    assert pd.d2 == _vecs([(-1, 0), (0, -1)])
    assert pd.d3 == _vecs([(-1, -1)])
    assert pd.d32 == ()


def test_d_sets_half_line():
    pd = compute_d_sets(half_line())
    assert pd.d1 == _vecs([(-1,)]) and pd.d2 == () and pd.d3 == ()


def test_d_sets_wedge_has_no_d2():
    # y >= x + 1 and y >= -x + 1: both polar rays have support -1
    P = from_inequalities([(1, -1), (-1, -1)], [-1, -1])
    pd = compute_d_sets(P)
    assert pd.d2 == ()
    for r in pd.polar_set.rays:
        assert support_value(P, r) < 0
    assert all(support_value(P, r) == -1 for r in pd.d32)


def test_membership_examples():
    P = nonequal()
    pd = compute_d_sets(P)
    assert membership_by_d(pd, vec((1, 1)))
    assert not membership_by_d(pd, vec((0, 0)))
    assert all(membership_by_d(pd, c) for c in P.points)


def test_barrier_cone_examples():
    square = from_generators([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert polyhedra_equal(barrier_cone(square), from_generators([(0, 0)], lines=[(1, 0), (0, 1)]))
    assert polyhedra_equal(barrier_cone(half_line()), from_inequalities([(1,)], [0]))
    assert polyhedra_equal(barrier_cone(hexagon_prism()), from_inequalities([(0, 0, 1)], [0]))


def _with_origin(P):
    return from_generators(tuple(P.points) + ((0,) * P.dim,), P.rays, P.lines, dim=P.dim)


@slow_ok
@given(random_polyhedra())
def test_polar_involution(P):
    P = _with_origin(P)
    assert polyhedra_equal(polar_set(polar_set(P)), P)


@slow_ok
@given(random_polyhedra())
def test_barrier_cone_polar_is_recession_cone(P):
    assert polyhedra_equal(polar_set(barrier_cone(P)), recession_cone(P))


@slow_ok
@given(random_polyhedra())
def test_membership_by_d_matches_contains_point(P):
    pd = compute_d_sets(P)
    rng = random.Random(hash(P.vrep))
    assert all(membership_by_d(pd, c) for c in P.points)
    for _ in range(20):
        x = vec(rng.randint(-4, 4) for _ in range(P.dim))
        assert membership_by_d(pd, x) == contains_point(P, x)


@slow_ok
@given(random_polyhedra())
def test_d_set_structure(P):
    pd = compute_d_sets(P)
    # D1 is empty exactly when the polar is a cone
    assert (pd.d1 == ()) == polyhedra_equal(pd.polar_set, pd.polar_recession)
    # L2 is nontrivial exactly when P lies in a proper linear subspace
    assert bool(pd.l_two_basis) == (pd.polar_set.lines != ())
    for l in pd.d2:
        assert support_value(P, l) == 0
    for l in pd.d32:
        assert support_value(P, l) == -1
    if not P.lines:
        apex = is_translated_cone(P)
        assert (apex is None) == (apex_by_d(pd) is None)


@slow_ok
@given(random_polyhedra())
def test_interior_origin_has_no_d2_or_d3(P):
    P = _with_origin(P)
    if not P.is_full_dimensional:
        return
    interior = all(b > 0 for b in P.hrep.b)
    if interior:
        pd = compute_d_sets(P)
        assert pd.d2 == () and pd.d3 == ()


@slow_ok
@given(random_polyhedra())
def test_polar_affine_hull_is_line_complement(P):
    C0, L1 = decompose_lines(P)
    Q = polar_set(P)
    for l in L1:
        for c in Q.points:
            assert sum(a * b for a, b in zip(c, l)) == 0
        for r in Q.rays + Q.lines:
            assert sum(a * b for a, b in zip(r, l)) == 0

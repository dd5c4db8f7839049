import pytest
from hypothesis import HealthCheck, given, settings

from conftest import fixture_path, half_line, hexagon_prism, orthant, random_polyhedra
from polylift.errors import QNotOrthogonal, RankTooSmall, RepresentationMismatch, SizeCap
from polylift.io import read_matrix, read_representation
from polylift.linalg import exact_rank, identity, in_span, matmul, row_space_basis, solve_affine, transpose, vec
from polylift.polyhedron import Polyhedron, hrep, vrep, decompose_lines, from_generators, from_inequalities, is_translated_cone
from polylift.slack import (
    build_slack,
    canonical_slack,
    check_rank_theorem,
    is_slack_matrix,
    pointed_reduction,
)

slow_ok = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _in_row_space(M, x):
    basis = row_space_basis(M)
    return solve_affine(transpose(basis), list(x), len(basis)) is not None


def test_prism_slack_reproduces_fixture():
    P = hexagon_prism()
    S = build_slack(P, read_representation(fixture_path("prism.poly")),
                    read_representation(fixture_path("prism_gens.poly")))
    assert S.matrix == read_matrix(fixture_path("prism_slack.mat"))
    # the canonical matrix is the same up to row and column order
    C = canonical_slack(P).matrix
    assert sorted(map(sorted, C)) == sorted(map(sorted, S.matrix))


def test_orthant_slack_is_zero_then_identity():
    for n in range(1, 5):
        P = orthant(n)
        facets = hrep([tuple(-x for x in e) for e in identity(n)], [0] * n)
        gens = vrep([(0,) * n], identity(n))
        S = build_slack(P, facets, gens)
        assert S.matrix == tuple((0,) + row for row in identity(n))


def test_noncom_slack_over_quadratic_field():
    P = Polyhedron.from_h(read_representation(fixture_path("noncom.poly")))
    S = build_slack(P, read_representation(fixture_path("noncom.poly")),
                    read_representation(fixture_path("noncom_gens.poly")), keep_order=True)
    assert S.matrix == read_matrix(fixture_path("noncom_S.mat"))
    assert exact_rank(S.matrix) == 3


def test_canonical_slack_small_cases():
    square = from_generators([(1, 1), (1, -1), (-1, 1), (-1, -1)])
    S = canonical_slack(square).matrix
    assert len(S) == 4 and all(sorted(r) == [0, 0, 2, 2] for r in S)
    assert canonical_slack(half_line()).matrix == ((0, 1),)


def test_factors_reproduce_slack():
    P = hexagon_prism()
    S = canonical_slack(P)
    U, V = S.factors()
    assert matmul(U, V) == S.matrix


def test_build_slack_rejects_invalid_rows():
    P = hexagon_prism()
    bad = type(P.hrep)(3, (vec((0, 0, 1)),), (vec((0,))[0],))
    with pytest.raises(RepresentationMismatch):
        build_slack(P, bad, P.vrep)


def test_rank_theorem_examples():
    assert check_rank_theorem(hexagon_prism()).rank == 4
    noncom = Polyhedron.from_h(read_representation(fixture_path("noncom.poly")))
    r = check_rank_theorem(noncom)
    assert r.rank == 3 and r.holds
    square = from_generators([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert check_rank_theorem(square).rank == 3
    cone = check_rank_theorem(orthant(2))
    assert cone.holds is None and not cone.applicable


def test_pointed_reduction():
    P = hexagon_prism()
    S = canonical_slack(P)
    U, V = S.factors()
    assert pointed_reduction(S.matrix, U, V, identity(3)) == (U, V)

    slab = from_inequalities([(0, -1), (0, 1)], [0, 1])
    S = build_slack(slab, slab.hrep, slab.vrep)
    U, V = S.factors()
    U2, V2 = pointed_reduction(S.matrix, U, V, [(0,), (1,)])
    assert len(U2[0]) == 2 and matmul(U2, V2) == S.matrix

    upper = from_inequalities([(0, -1)], [-1])
    S = build_slack(upper, upper.hrep, upper.vrep)
    U, V = S.factors()
    U2, V2 = pointed_reduction(S.matrix, U, V, [(0,), (1,)])
    line = from_inequalities([(-1,)], [-1])
    T = build_slack(line, line.hrep, line.vrep)
    assert matmul(U2, V2) == T.matrix
    assert (U2, V2) == T.factors()

    with pytest.raises(QNotOrthogonal):
        pointed_reduction(S.matrix, U, V, [(1, 1), (1, 0)])


def test_identify_prism_slack():
    S = read_matrix(fixture_path("prism_slack.mat"))
    res = is_slack_matrix(S)
    assert res.accepted
    assert res.zero_one == vec((1, 1, 1, 1, 1, 1, 0))
    assert _in_row_space(S, res.zero_one)


def test_identify_orthant_slack():
    for n in (2, 3, 4):
        M = tuple((0,) + row for row in identity(n))
        res = is_slack_matrix(M)
        assert res.accepted
        assert set(res.zero_one) <= {0, 1} and any(res.zero_one)
        assert _in_row_space(M, res.zero_one)
        # the first column vanishes identically, so (1, 0, ..., 0) is not available
        assert not _in_row_space(M, (1,) + (0,) * n)


def test_identify_rejects_with_witness():
    M = [[1, 2], [2, 1]]
    res = is_slack_matrix(M)
    assert not res.accepted and not res.cone_criterion
    w = res.witness
    assert all(x >= 0 for x in w) and _in_row_space(M, w)
    # outside cone(rows): no nonnegative combination of the rows gives w
    sol = solve_affine(transpose(M), list(w), 2)
    assert sol is not None and sol.dim == 0 and any(c < 0 for c in sol.offset)


def test_identify_limits():
    with pytest.raises(RankTooSmall):
        is_slack_matrix([[1, 1], [2, 2]])
    with pytest.raises(SizeCap):
        is_slack_matrix([[1] * 30, [0] * 29 + [1]])
    assert not is_slack_matrix([[1, -1], [0, 1]]).accepted


@slow_ok
@given(random_polyhedra())
def test_slack_factor_identity_and_rank(P):
    S = build_slack(P, P.hrep, P.vrep)
    if not S.matrix:
        return
    U, V = S.factors()
    assert matmul(U, V) == S.matrix
    C0, L1 = decompose_lines(P)
    if is_translated_cone(C0) is None:
        assert exact_rank(S.matrix) == C0.dimension + 1


@slow_ok
@given(random_polyhedra())
def test_identify_accepts_generated_slack(P):
    S = build_slack(P, P.hrep, P.vrep)
    if not S.matrix or exact_rank(S.matrix) < 2 or len(S.col_labels) > 24:
        return
    res = is_slack_matrix(S.matrix)
    assert res.accepted
    assert in_span(res.zero_one, S.matrix)


@slow_ok
@given(random_polyhedra(dims=(3,)))
def test_pointed_cone_rank(P):
    if P.lines or not P.rays:
        return
    cone = from_generators([(0, 0, 0)], P.rays)
    if cone.lines:
        return
    S = build_slack(cone, cone.hrep, cone.vrep)
    assert exact_rank(S.matrix) == cone.dimension


def test_identify_full_dimensional_recession_cone():
    # the rows alone miss the slack of the homogenizing inequality
    P = from_inequalities([(-1, 0), (0, -1), (-1, -1)], [0, 0, -1])
    S = build_slack(P, P.hrep, P.vrep)
    res = is_slack_matrix(S.matrix)
    assert res.accepted and not res.cone_criterion
    point_cols = tuple(1 if c.kind == "point" else 0 for c in S.col_labels)
    assert res.zero_one == point_cols
    assert res.witness is not None and not in_span(res.witness, []) and _in_row_space(S.matrix, res.witness)
    assert len(res.notes) == 2

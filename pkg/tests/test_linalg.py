from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import fixture_path
from polylift.errors import DimensionMismatch
from polylift.io import read_matrix
from polylift.linalg import (
    AffineSubspace,
    exact_rank,
    identity,
    left_inverse,
    matmul,
    matvec,
    nullspace,
    row_space_basis,
    solve_affine,
    subspace_equal,
    transpose,
    vec,
)
from polylift.scalar import QuadScalar


def _to_sympy(M):
    def conv(x):
        if isinstance(x, QuadScalar):
            return sympy.Rational(x.a.numerator, x.a.denominator) + sympy.Rational(
                x.b.numerator, x.b.denominator) * sympy.sqrt(x.d)
        x = Fraction(x)
        return sympy.Rational(x.numerator, x.denominator)
    return sympy.Matrix([[conv(x) for x in row] for row in M])


def test_rank_examples():
    assert exact_rank(identity(3)) == 3
    assert exact_rank([[0, 0], [0, 0]]) == 0
    S = read_matrix(fixture_path("prism_slack.mat"))
    assert exact_rank(S) == 4
    assert len(row_space_basis(S)) == 4
    assert len(row_space_basis([[1, 2], [2, 4]])) == 1
    assert len(row_space_basis(identity(4))) == 4


def test_rank_over_quadratic_field_matches_sympy():
    S = read_matrix(fixture_path("noncom_S.mat"))
    assert exact_rank(S) == _to_sympy(S).rank(simplify=True) == 3


matrices = st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=1, max_size=5))


@given(matrices)
def test_rank_transpose(M):
    assert exact_rank(M) == exact_rank(transpose(M, len(M[0])))


@given(matrices)
def test_rank_matches_sympy(M):
    assert exact_rank(M) == sympy.Matrix(M).rank()


@given(matrices, st.data())
def test_solve_affine_solutions(M, data):
    n = len(M[0])
    b = data.draw(st.lists(st.integers(-3, 3), min_size=len(M), max_size=len(M)))
    S = solve_affine(M, b, n)
    aug_rank = exact_rank([list(r) + [c] for r, c in zip(M, b)])
    if S is None:
        assert aug_rank > exact_rank(M)
        return
    assert matvec(M, S.offset) == vec(b)
    for v in S.basis:
        assert all(x == 0 for x in matvec(M, v))
    assert S.dim == n - exact_rank(M)


def test_solve_affine_examples():
    S = solve_affine([[1, 0], [0, 1]], [2, 3])
    assert S.offset == vec([2, 3]) and S.basis == ()
    S = solve_affine([[1, 1]], [1])
    assert S.offset == vec([1, 0])
    assert subspace_equal(S, AffineSubspace(vec([1, 0]), (vec([1, -1]),)))
    assert solve_affine([[1], [1]], [0, 1]) is None


def test_subspace_equal():
    assert subspace_equal(AffineSubspace(vec([0, 0]), (vec([1, 1]),)), AffineSubspace(vec([1, 1]), (vec([2, 2]),)))
    assert not subspace_equal(AffineSubspace(vec([0, 0]), (vec([1, 0]),)), AffineSubspace(vec([0, 1]), (vec([1, 0]),)))
    full = (vec([1, 0]), vec([0, 1]))
    assert subspace_equal(AffineSubspace(vec([0, 0]), full), AffineSubspace(vec([5, 7]), (vec([1, 1]), vec([1, -1]))))
    with pytest.raises(DimensionMismatch):
        subspace_equal(AffineSubspace(vec([0]), ()), AffineSubspace(vec([0, 0]), ()))


def test_nullspace_and_left_inverse():
    M = [[1, 2, 3], [2, 4, 6]]
    N = nullspace(M, 3)
    assert len(N) == 2
    assert all(all(x == 0 for x in matvec(M, v)) for v in N)
    H = [[1, 0], [1, 1], [0, 2]]
    G = left_inverse(H)
    assert matmul(G, H) == identity(2)
    assert left_inverse([[1, 1], [2, 2]]) is None

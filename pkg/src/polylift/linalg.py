"""Exact dense linear algebra over Fractions and quadratic scalars.

Vectors are tuples of scalars and matrices are tuples of row tuples.  Every
routine pivots on the first nonzero entry by index, so results are
reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import DimensionMismatch
from .scalar import QuadScalar, as_scalar, sign

Vector = tuple
Matrix = tuple

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(values) -> Vector:
    return tuple(as_scalar(v) for v in values)


def mat(rows) -> Matrix:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def identity(n: int) -> Matrix:
    return tuple(unit(n, i) for i in range(n))


def is_zero(v: Sequence) -> bool:
    return all(x == 0 for x in v)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise DimensionMismatch(f"dot of lengths {len(u)} and {len(v)}")
    s = ZERO
    for a, b in zip(u, v):
        if a and b:
            s = s + a * b
    return s


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    return tuple(c * a for a in v)


def neg(v: Sequence) -> Vector:
    return tuple(-a for a in v)


def simplify(x):
    """Demote a quadratic scalar with zero surd part to a Fraction."""
    if isinstance(x, QuadScalar) and x.b == 0:
        return x.a
    return x


def clean(v: Sequence) -> Vector:
    return tuple(simplify(x) for x in v)


def transpose(M: Sequence[Sequence], ncols: Optional[int] = None) -> Matrix:
    if not M:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*M))


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    if A and B and len(A[0]) != len(B):
        raise DimensionMismatch(f"cannot multiply {len(A)}x{len(A[0])} by {len(B)}x{len(B[0])}")
    Bt = transpose(B)
    return tuple(tuple(simplify(dot(row, col)) for col in Bt) for row in A)


def matvec(A: Sequence[Sequence], x: Sequence) -> Vector:
    return tuple(simplify(dot(row, x)) for row in A)


def first_nonzero(v: Sequence) -> Optional[int]:
    for i, x in enumerate(v):
        if x != 0:
            return i
    return None


def normalize_direction(v: Sequence) -> Vector:
    """Scale ``v`` by a positive factor so that its first nonzero entry is +-1."""
    i = first_nonzero(v)
    if i is None:
        return tuple(v)
    p = as_scalar(v[i])
    return clean(a / abs(p) for a in v)


def normalize_line(v: Sequence) -> Vector:
    """Scale ``v`` (sign included) so that its first nonzero entry is 1."""
    i = first_nonzero(v)
    if i is None:
        return tuple(v)
    p = as_scalar(v[i])
    return clean(a / p for a in v)


def sort_key(v: Sequence):
    """Total order on exact vectors (lexicographic, exact comparisons)."""
    return tuple(_ExactKey(x) for x in v)


class _ExactKey:
    __slots__ = ("x",)

    def __init__(self, x):
        self.x = x

    def __lt__(self, other):
        return self.x < other.x

    def __eq__(self, other):
        return self.x == other.x


# -- elimination -------------------------------------------------------------


def rref(M: Sequence[Sequence], ncols: Optional[int] = None):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows and
    ``pivots`` lists their pivot columns.
    """
    rows = [list(vec(r)) for r in M]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                p = i
                break
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        piv = rows[r][c]
        if piv != 1:
            inv = ONE / piv
            rows[r] = [x * inv if x else x for x in rows[r]]
        for i in range(len(rows)):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [a - f * b if b else a for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    R = tuple(clean(rows[i]) for i in range(r))
    return R, pivots


def exact_rank(M: Sequence[Sequence]) -> int:
    """Rank of ``M`` over its exact scalar field."""
    if not M:
        return 0
    return len(rref(M)[1])


def row_space_basis(M: Sequence[Sequence]) -> list:
    """Echelon (RREF) basis of the row space of ``M``."""
    if not M:
        return []
    return list(rref(M)[0])


def nullspace(M: Sequence[Sequence], ncols: Optional[int] = None) -> list:
    """Basis of ``{x : Mx = 0}``, one vector per free column."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    R, pivots = rref(M, ncols) if M else ((), [])
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        x = [ZERO] * ncols
        x[free] = ONE
        for row, pc in zip(R, pivots):
            x[pc] = -row[free]
        basis.append(clean(x))
    return basis


def left_nullspace(M: Sequence[Sequence]) -> list:
    """Basis of ``{y : yM = 0}``."""
    return nullspace(transpose(M), len(M))


def gram_schmidt(vectors: Sequence[Sequence]) -> list:
    """Orthogonalize without normalization; dependent vectors are dropped."""
    out: list = []
    norms: list = []
    for v in vectors:
        w = tuple(v)
        for u, nu in zip(out, norms):
            c = dot(w, u)
            if c != 0:
                w = sub(w, scale(c / nu, u))
        w = clean(w)
        if not is_zero(w):
            out.append(w)
            norms.append(dot(w, w))
    return out


def project_out(v: Sequence, orth_basis: Sequence[Sequence]) -> Vector:
    """Orthogonal projection of ``v`` onto the complement of ``span(orth_basis)``.

    ``orth_basis`` must be pairwise orthogonal.
    """
    w = tuple(v)
    for u in orth_basis:
        c = dot(w, u)
        if c != 0:
            w = sub(w, scale(c / dot(u, u), u))
    return clean(w)


def in_span(v: Sequence, basis: Sequence[Sequence]) -> bool:
    if is_zero(v):
        return True
    if not basis:
        return False
    return exact_rank(list(basis) + [v]) == exact_rank(basis)


# -- affine subspaces --------------------------------------------------------


@dataclass(frozen=True)
class AffineSubspace:
    """The set ``offset + span(basis)``; ``basis`` is linearly independent."""

    offset: Vector
    basis: tuple = ()

    @property
    def ambient(self) -> int:
        return len(self.offset)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: Sequence) -> bool:
        if len(x) != self.ambient:
            raise DimensionMismatch("point and subspace have different ambient dimension")
        return in_span(sub(x, self.offset), self.basis)

    def contains_direction(self, v: Sequence) -> bool:
        return in_span(v, self.basis)


def affine_subspace(offset: Sequence, basis: Sequence[Sequence] = ()) -> AffineSubspace:
    """Build an AffineSubspace, reducing ``basis`` to an independent echelon set."""
    off = vec(offset)
    b = tuple(row_space_basis([vec(v) for v in basis])) if basis else ()
    return AffineSubspace(off, b)


def solve_affine(A: Sequence[Sequence], b: Sequence, ncols: Optional[int] = None) -> Optional[AffineSubspace]:
    """All solutions of ``Ax = b`` as an AffineSubspace, or ``None`` if infeasible."""
    if len(A) != len(b):
        raise DimensionMismatch(f"{len(A)} rows but right-hand side of length {len(b)}")
    if ncols is None:
        if not A:
            raise DimensionMismatch("cannot infer column count of an empty system")
        ncols = len(A[0])
    aug = [tuple(row) + (rhs,) for row, rhs in zip(A, b)]
    R, pivots = rref(aug, ncols + 1) if aug else ((), [])
    if pivots and pivots[-1] == ncols:
        return None
    x = [ZERO] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    basis = nullspace(A, ncols) if A else [unit(ncols, i) for i in range(ncols)]
    return AffineSubspace(clean(x), tuple(basis))


def subspace_equal(S1: AffineSubspace, S2: AffineSubspace) -> bool:
    """True iff the two affine subspaces are the same point set."""
    if S1.ambient != S2.ambient:
        raise DimensionMismatch("subspaces live in different ambient spaces")
    if S1.dim != S2.dim:
        return False
    if not all(S1.contains_direction(v) for v in S2.basis):
        return False
    return S1.contains(S2.offset)


def solve_unique(A: Sequence[Sequence], b: Sequence, ncols: Optional[int] = None) -> Optional[Vector]:
    """Unique solution of ``Ax = b``; ``None`` if infeasible or not unique."""
    S = solve_affine(A, b, ncols)
    if S is None or S.dim:
        return None
    return S.offset


def left_inverse(H: Sequence[Sequence]) -> Optional[Matrix]:
    """A matrix ``G`` with ``G H = I`` when ``H`` has full column rank."""
    m = len(H)
    n = len(H[0]) if H else 0
    if exact_rank(H) != n:
        return None
    # G = (H^T H)^-1 H^T, computed column by column
    Ht = transpose(H)
    HtH = matmul(Ht, H)
    cols = []
    for j in range(m):
        x = solve_unique(HtH, [Ht[i][j] for i in range(n)], n)
        cols.append(x)
    return transpose(cols) if cols else tuple(() for _ in range(n))


def inverse(A: Sequence[Sequence]) -> Optional[Matrix]:
    n = len(A)
    aug = [tuple(A[i]) + unit(n, i) for i in range(n)]
    R, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return tuple(tuple(R[i][n:]) for i in range(n))


def sign_vector(v: Sequence) -> tuple:
    return tuple(sign(x) for x in v)

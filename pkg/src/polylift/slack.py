"""Slack matrices of polyhedra, rank checks and slack-matrix identification."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .dd import cone_generators
from .errors import (
    LinesPresent,
    NotFullDimensional,
    QNotOrthogonal,
    RankTooSmall,
    RepresentationMismatch,
    SizeCap,
)
from .linalg import (
    ONE,
    ZERO,
    clean,
    dot,
    exact_rank,
    is_zero,
    matmul,
    rref,
    transpose,
)
from .polar import PolarData
from .polyhedron import HRep, Polyhedron, VRep, decompose_lines, is_translated_cone

S1, S2, S3 = "S1", "S2", "S3"


@dataclass(frozen=True)
class RowLabel:
    block: str
    normal: tuple
    rhs: object


@dataclass(frozen=True)
class ColLabel:
    kind: str  # "point" or "ray"
    generator: tuple


@dataclass(frozen=True)
class SlackMatrix:
    matrix: tuple
    row_labels: tuple
    col_labels: tuple

    @property
    def shape(self):
        return len(self.matrix), len(self.col_labels)

    def factors(self):
        """The factors ``U = [rhs | -normal]`` and ``V = [1..1 0..0 ; c.. r..]``."""
        U = tuple((r.rhs,) + tuple(-x for x in r.normal) for r in self.row_labels)
        cols = [((ONE if c.kind == "point" else ZERO),) + tuple(c.generator) for c in self.col_labels]
        return U, transpose(cols)


def _block(rhs) -> str:
    return S1 if rhs > 0 else (S2 if rhs == 0 else S3)


def build_slack(P: Optional[Polyhedron], h: HRep, v: VRep, keep_order: bool = False) -> SlackMatrix:
    """Slack matrix of the inequalities ``h`` against the generators ``v``.

    Rows are grouped into the blocks S1 (rhs > 0), S2 (rhs = 0) and S3
    (rhs < 0) in their given order, unless ``keep_order`` is set.  Columns are
    the points of ``v`` followed by its rays.  Equations of ``h`` are ignored.
    """
    if P is not None and (h.dim != P.dim or v.dim != P.dim):
        raise RepresentationMismatch("representations and polyhedron differ in dimension")
    for a in h.A:
        for l in v.lines:
            if dot(a, l) != 0:
                raise RepresentationMismatch("an inequality is not constant along a lineality direction")
    order = list(range(len(h.A)))
    if not keep_order:
        rank = {S1: 0, S2: 1, S3: 2}
        order.sort(key=lambda i: rank[_block(h.b[i])])
    rows, labels = [], []
    for i in order:
        a, b = h.A[i], h.b[i]
        row = [b - dot(a, c) for c in v.points] + [-dot(a, r) for r in v.rays]
        row = clean(row)
        if any(x < 0 for x in row):
            raise RepresentationMismatch(f"inequality {i} is violated by a generator")
        rows.append(row)
        labels.append(RowLabel(_block(b), tuple(a), b))
    cols = [ColLabel("point", tuple(c)) for c in v.points] + [ColLabel("ray", tuple(r)) for r in v.rays]
    return SlackMatrix(tuple(rows), tuple(labels), tuple(cols))


def canonical_slack(P: Polyhedron) -> SlackMatrix:
    """Slack matrix of the normalized facets against vertices and extreme rays."""
    P.require_nonempty()
    if P.lines:
        raise LinesPresent("canonical slack matrix needs a polyhedron without lines")
    if not P.is_full_dimensional:
        raise NotFullDimensional("canonical slack matrix needs a full-dimensional polyhedron")
    return build_slack(P, P.hrep, P.vrep)


def dset_hrep(pd: PolarData) -> HRep:
    """The inequality system ``<l,x> <= 1, 0, -1`` over D1, D2, D3."""
    rows = list(pd.d1) + list(pd.d2) + list(pd.d3)
    rhs = [ONE] * len(pd.d1) + [ZERO] * len(pd.d2) + [-ONE] * len(pd.d3)
    return HRep(pd.source.dim, tuple(rows), tuple(rhs))


def dset_slack(P: Polyhedron, pd: PolarData) -> SlackMatrix:
    """Slack matrix whose rows are indexed by the D-set elements."""
    return build_slack(P, dset_hrep(pd), P.vrep)


# -- rank theorem ------------------------------------------------------------


@dataclass(frozen=True)
class RankReport:
    rank: int
    expected: int
    applicable: bool
    holds: Optional[bool]
    note: str = ""


def check_rank_theorem(P: Polyhedron) -> RankReport:
    """Compare the slack rank with ``dim(C0) + 1``.

    When the line-free part is a translated cone the statement does not
    apply; the rank is reported and ``holds`` is ``None``.
    """
    P.require_nonempty()
    C0, _ = decompose_lines(P)
    S = build_slack(P, P.hrep, P.vrep)
    rank = exact_rank(S.matrix)
    expected = C0.dimension + 1
    if is_translated_cone(C0) is not None:
        return RankReport(rank, expected, False, None, "translated cone: statement does not apply")
    return RankReport(rank, expected, True, rank == expected)


# -- reduction to the pointed case -------------------------------------------


def pointed_reduction(S: Sequence[Sequence], U: Sequence[Sequence], V: Sequence[Sequence], Q: Sequence[Sequence]):
    """Rewrite ``S = U V`` in coordinates of the orthogonal complement of the lines.

    ``Q`` is ``n x k`` with pairwise orthogonal columns spanning that
    complement.  Returns ``(U', V')`` with ``U' = U diag(1, Q)`` and
    ``V' = diag(1, (Q^T Q)^-1 Q^T) V`` so that ``U' V' = S`` exactly.
    """
    Qt = transpose(Q)
    k = len(Qt)
    for i in range(k):
        if is_zero(Qt[i]):
            raise QNotOrthogonal("Q has a zero column")
        for j in range(i + 1, k):
            if dot(Qt[i], Qt[j]) != 0:
                raise QNotOrthogonal(f"columns {i} and {j} of Q are not orthogonal")
    n = len(Q)
    D = [(ONE,) + (ZERO,) * k] + [(ZERO,) + tuple(Q[i]) for i in range(n)]
    Uq = matmul(U, D)
    gram_inv = [tuple((ONE / dot(Qt[i], Qt[i])) if i == j else ZERO for j in range(k)) for i in range(k)]
    Qplus = matmul(gram_inv, Qt)
    Dinv = [(ONE,) + (ZERO,) * n] + [(ZERO,) + tuple(r) for r in Qplus]
    Vq = matmul(Dinv, V)
    if matmul(Uq, Vq) != tuple(tuple(clean(r)) for r in S):
        raise RepresentationMismatch("generators do not lie in the span of Q")
    return Uq, Vq


# -- identification ----------------------------------------------------------


@dataclass(frozen=True)
class SlackIdentification:
    """Outcome of :func:`is_slack_matrix`.

    ``cone_criterion`` records the strict test on the rows alone.  When it
    fails but the rows together with the 0/1 vector pass, the matrix is
    accepted and ``witness`` still shows the strict violation.
    """

    accepted: bool
    zero_one: Optional[tuple]
    witness: Optional[tuple]
    cone_criterion: bool
    reason: str
    notes: tuple = field(default=("cone criterion: external",))


def _cone_contains(gens: Sequence[Sequence], x: Sequence, dim: int) -> bool:
    """Exact test ``x in cone(gens)`` through the dual cone's generators."""
    if is_zero(x):
        return True
    gens = [g for g in gens if not is_zero(g)]
    if not gens:
        return False
    lines, rays = cone_generators(gens, [], dim)
    if any(dot(l, x) != 0 for l in lines):
        return False
    return all(dot(r, x) >= 0 for r in rays)


def _first_outside(gens, nonneg, r):
    for w in nonneg:
        if not _cone_contains(gens, w, r):
            return w
    return None


def _zero_one_candidates(basis, pivots, q):
    r = len(basis)
    for bits in itertools.product((0, 1), repeat=r):
        if not any(bits):
            continue
        x = [ZERO] * q
        for bit, row in zip(bits, basis):
            if bit:
                x = [a + b for a, b in zip(x, row)]
        if all(v == 0 or v == 1 for v in x):
            yield tuple(clean(x))


MAX_IDENTIFY_COLS = 24


def is_slack_matrix(M: Sequence[Sequence]) -> SlackIdentification:
    """Decide whether ``M`` is the slack matrix of some polyhedron.

    Two conditions are checked exactly: the row space contains a nonzero
    0/1 vector (1 on point columns, 0 on ray columns), and every nonnegative
    vector of the row space lies in the cone spanned by the rows.  The second
    test is first run on the rows alone; if that fails it is rerun with the
    0/1 vector appended as a row, since that vector is the slack of the
    homogenizing inequality, which is a facet of the homogenized cone
    whenever the recession cone is full-dimensional.
    """
    rows = [tuple(r) for r in M]
    q = len(rows[0]) if rows else 0
    if q > MAX_IDENTIFY_COLS:
        raise SizeCap(f"identification is limited to {MAX_IDENTIFY_COLS} columns")
    if any(x < 0 for r in rows for x in r):
        return SlackIdentification(False, None, None, False, "matrix has a negative entry")
    basis, pivots = rref(rows, q) if rows else ((), [])
    r = len(basis)
    if r < 2:
        raise RankTooSmall(f"rank {r} is below 2")

    def coords(v):
        return tuple(v[p] for p in pivots)

    def expand(w):
        return tuple(clean(sum((wi * bi for wi, bi in zip(w, col)), ZERO) for col in cols))

    row_coords = [coords(row) for row in rows]
    cols = transpose(basis)  # q x r: x = sum w_i basis_i, x_j = cols[j] . w
    _, nonneg = cone_generators(cols, [], r)
    outside = _first_outside(row_coords, nonneg, r)
    witness = None if outside is None else expand(outside)
    strict_ok = witness is None

    candidates = list(_zero_one_candidates(basis, pivots, q))
    row_zero_sets = [frozenset(j for j, x in enumerate(row) if x == 0) for row in rows]

    def preferred(v):
        z = frozenset(j for j, x in enumerate(v) if x == 0)
        return not any(rz <= z for rz in row_zero_sets)

    def rank_key(v):
        return (not preferred(v), sum(1 for x in v if x == 1), tuple(-int(x) for x in v))

    ordered = sorted(candidates, key=rank_key)
    if not ordered:
        if not strict_ok:
            return SlackIdentification(False, None, witness, False,
                                       "a nonnegative row-space vector lies outside the cone of the rows")
        return SlackIdentification(False, None, None, True, "row space contains no 0/1 vector")
    if strict_ok:
        return SlackIdentification(True, ordered[0], None, True, "accepted")
    for v in ordered:
        if _first_outside(row_coords + [coords(v)], nonneg, r) is None:
            notes = ("cone criterion: external",
                     "rows alone fail the cone test; rows plus the 0/1 vector pass")
            return SlackIdentification(True, v, witness, False, "accepted with the 0/1 row appended", notes)
    return SlackIdentification(False, ordered[0], witness, False,
                               "a nonnegative row-space vector lies outside the cone of the rows")

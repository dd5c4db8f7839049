"""Lifts of polyhedra built from cone factorizations, and their exact verification.

A lift of ``C`` in ``R^n`` through a cone ``K`` is an affine slice ``L`` of
the ambient space of ``K`` and a linear map ``pi`` with
``C = shift + pi(K ∩ L)`` and ``rec(C) = pi(K ∩ rec(L))``.  Elements of
``S^k_+`` are stored flattened as (diagonal, upper triangle row-wise); the
trace inner product then weights off-diagonal coordinates by 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import (
    DegenerateSystem,
    DimensionMismatch,
    FactorizationMismatch,
    InconsistentSystem,
    LinesPresent,
    MissingLinealityFactors,
    NotFullDimensional,
    NotPointedCone,
    TranslatedCone,
    TranslatedComponent,
)
from .factorization import (
    PSD,
    ConeKind,
    Factorization,
    NonnegOrthant,
    in_cone,
    psd_flatten,
    psd_inner_weights,
    psd_unflatten,
    verify_factorization,
)
from .linalg import (
    ONE,
    ZERO,
    AffineSubspace,
    clean,
    dot,
    in_span,
    is_zero,
    left_inverse,
    left_nullspace,
    matmul,
    matvec,
    nullspace,
    rref,
    solve_affine,
    transpose,
)
from .polar import PolarData
from .polyhedron import (
    HRep,
    Polyhedron,
    VRep,
    contains_direction,
    contains_point,
    decompose_lines,
    is_translated_cone,
    polyhedra_equal,
    recession_cone,
)
from .slack import SlackMatrix, build_slack, dset_slack


# -- coordinates -------------------------------------------------------------


def flat(cone: ConeKind, a) -> tuple:
    """Ambient coordinates of a cone element."""
    if isinstance(cone, PSD):
        return tuple(psd_flatten(a))
    return tuple(a)


def unflat(cone: ConeKind, z: Sequence):
    if isinstance(cone, PSD):
        return psd_unflatten(z, cone.k)
    return tuple(z)


def dual_functional(cone: ConeKind, u) -> tuple:
    """Vector ``w`` with ``w . flat(z) = <z, u>`` for the cone's inner product."""
    if isinstance(cone, PSD):
        return tuple(c * x for c, x in zip(psd_inner_weights(cone.k), psd_flatten(u)))
    return tuple(u)


def ambient_dim(cone: ConeKind) -> int:
    return cone.ambient


# -- the lift type -----------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    kind: str  # "point", "ray" or "line"
    generator: tuple
    z: tuple  # flattened cone element


@dataclass(frozen=True)
class DualRow:
    normal: tuple
    rhs: object
    u: tuple  # flattened dual cone element


@dataclass(frozen=True)
class Lift:
    cone: ConeKind
    slice: AffineSubspace
    projection: tuple  # n x N matrix
    witnesses: tuple = ()
    duals: tuple = ()
    shift: Optional[tuple] = None

    @property
    def target_dim(self) -> int:
        return len(self.projection)

    def project(self, z: Sequence) -> tuple:
        x = matvec(self.projection, z)
        if self.shift is not None:
            x = clean(a + b for a, b in zip(x, self.shift))
        return x

    def project_direction(self, z: Sequence) -> tuple:
        return matvec(self.projection, z)


# -- construction ------------------------------------------------------------


def _check_factorization(M, F: Factorization):
    try:
        v = verify_factorization(M, F)
    except DimensionMismatch as exc:
        raise FactorizationMismatch(str(exc)) from None
    if not v:
        raise FactorizationMismatch(v.violation)


def _lift_from_system(n: int, H: Sequence, Uf: Sequence, d: Sequence, cone: ConeKind, homogeneous: bool = False):
    """Slice and projection for ``H x + Uf z = d`` with ``H`` of full column rank.

    Returns ``(slice, projection)``.  ``x`` is recovered as ``G (d - Uf z)``
    with ``G`` a left inverse of ``H``; the constant part is absorbed by a
    functional equal to 1 on the slice, so the projection is linear.
    """
    N = ambient_dim(cone)
    G = left_inverse(H) if H else None
    if G is None:
        raise DegenerateSystem("the lift system does not determine x uniquely")
    Nl = left_nullspace(H)
    A = [tuple(dot(row, col) for col in transpose(Uf, N)) for row in Nl]
    rhs = [dot(row, d) for row in Nl]
    S = solve_affine(A, rhs, N) if A else solve_affine([], [], N)
    if S is None:
        raise InconsistentSystem("the lift system has no solution")
    GU = matmul(G, Uf)
    if homogeneous:
        proj = tuple(tuple(-x for x in row) for row in GU)
        return S, proj
    if is_zero(S.offset) or in_span(S.offset, S.basis):
        raise DegenerateSystem("the slice passes through the origin")
    phi = solve_affine(list(S.basis) + [S.offset], [ZERO] * len(S.basis) + [ONE], N).offset
    Gd = matvec(G, d)
    proj = tuple(clean(Gd[i] * phi[j] - GU[i][j] for j in range(N)) for i in range(n))
    return S, proj


def _check_witness_slice(lift: Lift, witnesses):
    for w in witnesses:
        z = w.z
        if w.kind == "point":
            if not lift.slice.contains(z):
                raise FactorizationMismatch("a point witness is not on the slice")
        elif not lift.slice.contains_direction(z):
            raise FactorizationMismatch("a direction witness is not in the slice's recession space")


def build_lift(P: Polyhedron, pd: Optional[PolarData], F: Factorization, slack: Optional[SlackMatrix] = None) -> Lift:
    """Lift of a full-dimensional, line-free, non-cone polyhedron from a factorization.

    The rows of ``F`` belong to the rows of ``slack`` (by default the slack
    matrix whose rows are the D-set elements of ``pd``) and its columns to
    the generators.  Row factors give the slice equations, column factors
    the witnesses.
    """
    P.require_nonempty()
    if P.lines:
        raise LinesPresent("use build_lift_with_lines for polyhedra with lines")
    if not P.is_full_dimensional:
        raise NotFullDimensional("lift construction needs a full-dimensional polyhedron")
    if is_translated_cone(P) is not None:
        raise TranslatedCone("polyhedron is a translated cone; use build_cone_lift")
    if slack is None:
        if pd is None:
            raise ValueError("either D-set data or a slack matrix is required")
        slack = dset_slack(P, pd)
    _check_factorization(slack.matrix, F)
    cone = F.cone
    H = [r.normal for r in slack.row_labels]
    d = [r.rhs for r in slack.row_labels]
    Uf = [dual_functional(cone, a) for a in F.a_factors]
    S, proj = _lift_from_system(P.dim, H, Uf, d, cone)
    witnesses = tuple(Witness(c.kind, c.generator, flat(cone, b)) for c, b in zip(slack.col_labels, F.b_factors))
    duals = tuple(DualRow(r.normal, r.rhs, flat(cone, a)) for r, a in zip(slack.row_labels, F.a_factors))
    lift = Lift(cone, S, proj, witnesses, duals)
    _check_witness_slice(lift, witnesses)
    return lift


def build_cone_lift(P: Polyhedron, F: Factorization, slack: Optional[SlackMatrix] = None) -> Lift:
    """Linear lift of a pointed polyhedral cone with apex at the origin.

    The slack matrix has rows indexed by the facet normals (extreme rays of
    the polar) and columns by the extreme rays, with entries ``-<r, y>``.
    """
    P.require_nonempty()
    n = P.dim
    if P.lines or len(P.points) != 1 or not is_zero(P.points[0]):
        raise NotPointedCone("expected a pointed cone with apex at the origin")
    if slack is None:
        slack = build_slack(P, P.hrep, VRep(n, (), P.rays, ()))
    if any(r.rhs != 0 for r in slack.row_labels):
        raise NotPointedCone("cone slack rows must have zero right-hand side")
    _check_factorization(slack.matrix, F)
    cone = F.cone
    H = [r.normal for r in slack.row_labels]
    Uf = [dual_functional(cone, a) for a in F.a_factors]
    S, proj = _lift_from_system(n, H, Uf, [ZERO] * len(H), cone, homogeneous=True)
    witnesses = [Witness("point", (ZERO,) * n, (ZERO,) * ambient_dim(cone))]
    witnesses += [Witness(c.kind, c.generator, flat(cone, b)) for c, b in zip(slack.col_labels, F.b_factors)]
    duals = tuple(DualRow(r.normal, r.rhs, flat(cone, a)) for r, a in zip(slack.row_labels, F.a_factors))
    lift = Lift(cone, S, proj, tuple(witnesses), duals)
    _check_witness_slice(lift, witnesses)
    return lift


def build_lift_with_lines(P: Polyhedron, pd: Optional[PolarData], F: Factorization,
                          slack: Optional[SlackMatrix] = None) -> Lift:
    """Lift of ``P = C0 + span(L1)`` where ``C0`` is not a translated cone.

    ``F.lineality`` must supply, for each line ``l_i`` of ``P``, the dual
    element ``F_i`` with ``<z, F_i>`` reading off ``<x, l_i>`` and cone
    points representing both ``l_i`` and ``-l_i``.  Without the latter the
    image of the recession part would only be a half space of the lines.
    """
    P.require_nonempty()
    if not P.lines:
        return build_lift(P, pd, F, slack)
    C0, L1 = decompose_lines(P)
    if is_translated_cone(C0) is not None:
        raise TranslatedComponent("the line-free part is a translated cone")
    lin = F.lineality
    if not lin or any(key not in lin for key in ("lines", "F", "plus", "minus")):
        raise MissingLinealityFactors("factorization lacks lineality factors F, plus and minus")
    lines = [tuple(l) for l in lin["lines"]]
    if len(lines) != len(L1) or not all(in_span(l, L1) for l in lines):
        raise MissingLinealityFactors("lineality factors do not match the lines of the polyhedron")
    for i in range(len(lines)):
        for j in range(i + 1, len(lines)):
            if dot(lines[i], lines[j]) != 0:
                raise MissingLinealityFactors("lineality basis is not orthogonal")
    if slack is None:
        slack = build_slack(P, P.hrep, P.vrep)
    _check_factorization(slack.matrix, F)
    cone = F.cone
    Fl = [dual_functional(cone, f) for f in lin["F"]]
    plus = [flat(cone, z) for z in lin["plus"]]
    minus = [flat(cone, z) for z in lin["minus"]]
    if not (len(Fl) == len(plus) == len(minus) == len(lines)):
        raise MissingLinealityFactors("one F, plus and minus element is needed per line")
    Uf = [dual_functional(cone, a) for a in F.a_factors]
    wit_flat = [flat(cone, b) for b in F.b_factors]
    for j, l in enumerate(lines):
        for z, sgn in ((plus[j], 1), (minus[j], -1)):
            if not in_cone(cone, unflat(cone, z)):
                raise FactorizationMismatch("a lineality witness is not in the cone")
            if any(dot(u, z) != 0 for u in Uf):
                raise FactorizationMismatch("a lineality witness has nonzero slack")
            for i, li in enumerate(lines):
                if dot(Fl[i], z) != sgn * dot(li, l):
                    raise FactorizationMismatch("lineality witness does not read off its line")
    for w in wit_flat:
        if any(dot(f, w) != 0 for f in Fl):
            raise FactorizationMismatch("a generator witness has a nonzero line coordinate")
    H = [r.normal for r in slack.row_labels] + lines
    Ufull = Uf + [tuple(-x for x in f) for f in Fl]
    d = [r.rhs for r in slack.row_labels] + [ZERO] * len(lines)
    S, proj = _lift_from_system(P.dim, H, Ufull, d, cone)
    witnesses = [Witness(c.kind, c.generator, w) for c, w in zip(slack.col_labels, wit_flat)]
    for l, zp, zm in zip(lines, plus, minus):
        witnesses.append(Witness("line", l, zp))
        witnesses.append(Witness("line", tuple(-x for x in l), zm))
    duals = tuple(DualRow(r.normal, r.rhs, flat(cone, a)) for r, a in zip(slack.row_labels, F.a_factors))
    lift = Lift(cone, S, proj, tuple(witnesses), duals)
    _check_witness_slice(lift, witnesses)
    return lift


# -- verification ------------------------------------------------------------


@dataclass(frozen=True)
class Condition:
    name: str
    passed: bool
    level: str  # "exact" or "witness"
    detail: str = ""


@dataclass(frozen=True)
class LiftReport:
    conditions: tuple
    proper: Optional[bool] = None
    image_recession: Optional[Polyhedron] = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, name: str) -> Condition:
        return next(c for c in self.conditions if c.name == name)


def _check_witnesses(P: Polyhedron, lift: Lift) -> Condition:
    cone = lift.cone
    covered_points = set()
    for w in lift.witnesses:
        if len(w.z) != ambient_dim(cone):
            return Condition("a", False, "exact", "witness of wrong size")
        if not in_cone(cone, unflat(cone, w.z)):
            return Condition("a", False, "exact", f"witness for {w.kind} {_fmt(w.generator)} is not in the cone")
        if w.kind == "point":
            if not lift.slice.contains(w.z):
                return Condition("a", False, "exact", f"witness for point {_fmt(w.generator)} is off the slice")
            if lift.project(w.z) != tuple(w.generator):
                return Condition("a", False, "exact", f"witness for point {_fmt(w.generator)} projects elsewhere")
            if not contains_point(P, w.generator):
                return Condition("a", False, "exact", f"point {_fmt(w.generator)} is not in the polyhedron")
            covered_points.add(tuple(w.generator))
        else:
            if not lift.slice.contains_direction(w.z):
                return Condition("a", False, "exact", f"witness for {w.kind} {_fmt(w.generator)} is off the slice")
            if lift.project_direction(w.z) != tuple(w.generator):
                return Condition("a", False, "exact", f"witness for {w.kind} {_fmt(w.generator)} projects elsewhere")
            if not contains_direction(P, w.generator):
                return Condition("a", False, "exact", f"direction {_fmt(w.generator)} is not a recession direction")
    missing = [c for c in P.points if tuple(c) not in covered_points]
    if missing:
        return Condition("a", False, "exact", f"no witness for point {_fmt(missing[0])}")
    return Condition("a", True, "exact", f"{len(lift.witnesses)} witnesses valid")


def _check_duals(P: Polyhedron, lift: Lift) -> Condition:
    cone = lift.cone
    if not lift.duals:
        return Condition("b", False, "exact", "no dual rows")
    shift = lift.shift or (ZERO,) * P.dim
    for k, row in enumerate(lift.duals):
        if not in_cone(cone, unflat(cone, row.u)):
            return Condition("b", False, "exact", f"dual element {k} is not in the dual cone")
        w = dual_functional(cone, unflat(cone, row.u))
        a = row.normal
        # f(z) = rhs - <a, shift + pi z> - <z, u>
        lin = tuple(clean(-sum((a[i] * lift.projection[i][j] for i in range(P.dim)), ZERO) - w[j]
                          for j in range(ambient_dim(cone))))
        const = row.rhs - dot(a, shift)
        if const + dot(lin, lift.slice.offset) != 0:
            return Condition("b", False, "exact", f"row {k} does not vanish at the slice offset")
        if any(dot(lin, b) != 0 for b in lift.slice.basis):
            return Condition("b", False, "exact", f"row {k} does not vanish along the slice")
    rows = HRep(P.dim, tuple(r.normal for r in lift.duals), tuple(r.rhs for r in lift.duals), P.hrep.E, P.hrep.f)
    if not polyhedra_equal(Polyhedron.from_h(rows), P):
        return Condition("b", False, "exact", "dual rows do not describe the polyhedron")
    return Condition("b", True, "exact", f"{len(lift.duals)} dual identities hold on the slice")


def orthant_slice_polyhedron(lift: Lift, recession: bool = False) -> Polyhedron:
    """``K ∩ L`` (or ``K ∩ rec(L)``) for an orthant lift, as a polyhedron."""
    N = ambient_dim(lift.cone)
    basis = list(lift.slice.basis)
    E = nullspace(basis, N) if basis else [tuple(ONE if i == j else ZERO for i in range(N)) for j in range(N)]
    off = (ZERO,) * N if recession else lift.slice.offset
    A = tuple(tuple(-ONE if i == j else ZERO for i in range(N)) for j in range(N))
    return Polyhedron.from_h(HRep(N, A, (ZERO,) * N, tuple(E), tuple(dot(e, off) for e in E)))


def _orthant_recession(P: Polyhedron, lift: Lift):
    K0 = orthant_slice_polyhedron(lift, recession=True)
    img_rays = tuple(r for r in (lift.project_direction(r) for r in K0.rays) if not is_zero(r))
    img_lines = tuple(r for r in (lift.project_direction(l) for l in K0.lines) if not is_zero(r))
    image = Polyhedron.from_v(VRep(P.dim, ((ZERO,) * P.dim,), img_rays, img_lines))
    rec = recession_cone(P)
    if polyhedra_equal(image, rec):
        return Condition("c", True, "exact", "pi(K ∩ rec L) equals the recession cone"), image
    return Condition("c", False, "exact", f"pi(K ∩ rec L) = {_describe_cone(image)} differs from "
                                          f"recession cone {_describe_cone(rec)}"), image


def psd_facial_reduction(k: int, basis: Sequence[Sequence]):
    """Shrink ``span(basis)`` in flattened ``S^k`` using forced zero diagonals.

    A psd matrix with zero diagonal entry has a zero row and column, so any
    diagonal coordinate that vanishes on the whole subspace zeroes its row.
    Returns the reduced basis and the set of zeroed indices.
    """
    N = k * (k + 1) // 2
    index = {}
    pos = k
    for i in range(k):
        index[(i, i)] = i
    for i in range(k):
        for j in range(i + 1, k):
            index[(i, j)] = index[(j, i)] = pos
            pos += 1
    basis = [tuple(b) for b in basis]
    zeroed: set = set()
    changed = True
    while changed and basis:
        changed = False
        for i in range(k):
            if i in zeroed:
                continue
            if all(b[i] == 0 for b in basis):
                zeroed.add(i)
                coords = [index[(i, j)] for j in range(k)]
                rows = [tuple(b[c] for b in basis) for c in coords]
                t = nullspace(rows, len(basis))
                basis = [clean(sum((tk * b[c] for tk, b in zip(tv, basis)), ZERO) for c in range(N)) for tv in t]
                basis = [b for b in basis if not is_zero(b)]
                changed = True
                break
    return basis, zeroed


def _psd_recession(P: Polyhedron, lift: Lift) -> Condition:
    k = lift.cone.k
    reduced, zeroed = psd_facial_reduction(k, lift.slice.basis)
    rec = recession_cone(P)
    rec_trivial = not rec.rays and not rec.lines
    if all(is_zero(lift.project_direction(b)) for b in reduced):
        if rec_trivial:
            return Condition("c", True, "exact", "pi(K ∩ rec L) = {0} equals the recession cone {0}")
        return Condition("c", False, "exact",
                         f"pi(K ∩ rec L) = {{0}} differs from recession cone {_describe_cone(rec)}")
    missing = []
    for r in rec.rays:
        if not any(w.kind == "ray" and tuple(w.generator) == tuple(r) for w in lift.witnesses):
            missing.append(r)
    for l in rec.lines:
        for s in (l, tuple(-x for x in l)):
            if not any(w.kind == "line" and tuple(w.generator) == tuple(s) for w in lift.witnesses):
                missing.append(s)
    if missing:
        return Condition("c", False, "witness", f"no recession witness for {_fmt(missing[0])}")
    return Condition("c", True, "witness", "every recession generator has a witness")


def _proper_orthant(lift: Lift) -> bool:
    Q = orthant_slice_polyhedron(lift)
    if Q.empty:
        return False
    N = ambient_dim(lift.cone)
    gens = list(Q.points) + list(Q.rays)
    for i in range(N):
        if all(g[i] == 0 for g in gens) and all(l[i] == 0 for l in Q.lines):
            return False
    return True


def verify_lift(P: Polyhedron, lift: Lift) -> LiftReport:
    """Exact check of witnesses (a), dual identities (b) and the recession condition (c)."""
    if lift.target_dim != P.dim:
        raise DimensionMismatch("lift projects to a different dimension")
    a = _check_witnesses(P, lift)
    b = _check_duals(P, lift)
    image = None
    if isinstance(lift.cone, NonnegOrthant):
        c, image = _orthant_recession(P, lift)
        proper = _proper_orthant(lift)
    else:
        c = _psd_recession(P, lift)
        proper = None
    return LiftReport((a, b, c), proper, image)


def lift_image(lift: Lift) -> Polyhedron:
    """``shift + pi(K ∩ L)`` for an orthant lift, computed by double description."""
    if not isinstance(lift.cone, NonnegOrthant):
        raise TypeError("image computation is available for orthant lifts only")
    Q = orthant_slice_polyhedron(lift)
    n = lift.target_dim
    pts = tuple(lift.project(p) for p in Q.points)
    rays = tuple(r for r in (lift.project_direction(r) for r in Q.rays) if not is_zero(r))
    lines = tuple(r for r in (lift.project_direction(l) for l in Q.lines) if not is_zero(r))
    return Polyhedron.from_v(VRep(n, pts, rays, lines))


# -- elimination -------------------------------------------------------------


@dataclass(frozen=True)
class Presentation(AffineSubspace):
    """The slice as solved equations: pivot coordinates in terms of free ones."""

    pivots: tuple = ()
    equations: tuple = ()  # RREF rows (coefficients..., rhs)


def eliminate_presentation(lift: Optional[Lift], h, U: Sequence[Sequence], d: Optional[Sequence] = None) -> Presentation:
    """Eliminate ``x`` from ``H x + U z = d``.

    ``h`` is an HRep or a coefficient matrix ``H``; ``d`` defaults to the
    right-hand side of ``h``.
    """
    if isinstance(h, HRep):
        H = list(h.A)
        d = list(h.b) if d is None else list(d)
    else:
        H = [tuple(r) for r in h]
    if d is None or len(d) != len(H) or len(U) != len(H):
        raise DimensionMismatch("H, U and d must have the same number of rows")
    N = len(U[0])
    if lift is not None and ambient_dim(lift.cone) != N:
        raise DimensionMismatch("lift and U disagree on the cone dimension")
    Nl = left_nullspace(H)
    A = [tuple(dot(row, col) for col in transpose(U, N)) for row in Nl]
    rhs = [dot(row, d) for row in Nl]
    S = solve_affine(A, rhs, N) if A else solve_affine([], [], N)
    if S is None:
        raise InconsistentSystem("no z satisfies the eliminated system")
    R, pivots = rref([tuple(r) + (c,) for r, c in zip(A, rhs)], N + 1) if A else ((), [])
    return Presentation(S.offset, S.basis, tuple(pivots), tuple(R))


# -- formatting helpers ------------------------------------------------------


def _fmt(v) -> str:
    from .scalar import format_scalar

    return "(" + ", ".join(format_scalar(x) for x in v) + ")"


def _describe_cone(C: Polyhedron) -> str:
    if not C.rays and not C.lines:
        return "{0}"
    parts = []
    if C.rays:
        parts.append("cone{" + ", ".join(_fmt(r) for r in C.rays) + "}")
    if C.lines:
        parts.append("span{" + ", ".join(_fmt(l) for l in C.lines) + "}")
    return " + ".join(parts)

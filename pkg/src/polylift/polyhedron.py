"""Polyhedra held in both inequality (H) and generator (V) form.

A :class:`Polyhedron` is built from either representation and immediately
computes the other, so both are available and minimal.  Conventions:

* H form: ``A x <= b`` together with equations ``E x = f``.
* V form: points, rays and an orthogonal lineality basis.  Points and rays
  lie in the orthogonal complement of the lineality space.
* Rays are scaled so the first nonzero coordinate is +-1, lines so it is 1.
* Inequalities are scaled so ``|rhs| = 1``, or so that the first nonzero
  normal coordinate is +-1 when ``rhs = 0``.  They are ordered by the sign
  of the right-hand side (positive, zero, negative), then lexicographically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .dd import cone_generators
from .errors import DimensionMismatch, EmptyPolyhedron, LinesPresent
from .linalg import (
    ZERO,
    clean,
    dot,
    exact_rank,
    gram_schmidt,
    is_zero,
    matvec,
    normalize_direction,
    normalize_line,
    rref,
    sort_key,
    vec,
)
from .scalar import Domain, as_scalar, sign


@dataclass(frozen=True)
class HRep:
    """The set ``{x : A x <= b, E x = f}`` in ``R^dim``."""

    dim: int
    A: tuple = ()
    b: tuple = ()
    E: tuple = ()
    f: tuple = ()

    def __post_init__(self):
        if len(self.A) != len(self.b):
            raise DimensionMismatch(f"{len(self.A)} inequality rows but {len(self.b)} right-hand sides")
        if len(self.E) != len(self.f):
            raise DimensionMismatch(f"{len(self.E)} equation rows but {len(self.f)} right-hand sides")
        for row in self.A + self.E:
            if len(row) != self.dim:
                raise DimensionMismatch(f"row of length {len(row)} in dimension {self.dim}")

    @property
    def rows(self):
        return list(zip(self.A, self.b))

    def scalars(self):
        for row in self.A + self.E:
            yield from row
        yield from self.b
        yield from self.f


@dataclass(frozen=True)
class VRep:
    """``conv(points) + cone(rays) + span(lines)`` in ``R^dim``."""

    dim: int
    points: tuple = ()
    rays: tuple = ()
    lines: tuple = ()

    def __post_init__(self):
        for v in self.points + self.rays + self.lines:
            if len(v) != self.dim:
                raise DimensionMismatch(f"generator of length {len(v)} in dimension {self.dim}")

    def scalars(self):
        for v in self.points + self.rays + self.lines:
            yield from v


def hrep(A: Sequence[Sequence] = (), b: Sequence = (), E: Sequence[Sequence] = (), f: Sequence = (),
         dim: Optional[int] = None) -> HRep:
    """Convenience constructor coercing entries to exact scalars."""
    if dim is None:
        rows = list(A) + list(E)
        if not rows:
            raise DimensionMismatch("dimension required for an empty system")
        dim = len(rows[0])
    return HRep(dim, tuple(vec(r) for r in A), vec(b), tuple(vec(r) for r in E), vec(f))


def vrep(points: Sequence[Sequence] = (), rays: Sequence[Sequence] = (), lines: Sequence[Sequence] = (),
         dim: Optional[int] = None) -> VRep:
    if dim is None:
        gens = list(points) + list(rays) + list(lines)
        if not gens:
            raise DimensionMismatch("dimension required for an empty generator list")
        dim = len(gens[0])
    return VRep(dim, tuple(vec(p) for p in points), tuple(vec(r) for r in rays), tuple(vec(l) for l in lines))


# -- canonical forms ---------------------------------------------------------


def canonical_inequality(a: Sequence, b):
    """Positive rescaling of ``a.x <= b`` to the canonical scale."""
    if b != 0:
        s = abs(as_scalar(b))
    else:
        i = next(i for i, x in enumerate(a) if x != 0)
        s = abs(as_scalar(a[i]))
    return clean(x / s for x in a), clean([b / s])[0]


def _ineq_key(row):
    a, b = row
    block = 0 if b > 0 else (1 if b == 0 else 2)
    return (block, sort_key(a))


def canonical_equations(E: Sequence[Sequence], f: Sequence):
    aug = [tuple(e) + (g,) for e, g in zip(E, f)]
    if not aug:
        return (), ()
    R, _ = rref(aug)
    return tuple(r[:-1] for r in R), tuple(r[-1] for r in R)


# -- conversions -------------------------------------------------------------


def h_to_v(h: HRep) -> VRep:
    """Minimal generator form of ``h``; raises EmptyPolyhedron if infeasible."""
    n = h.dim
    ineqs = [(b,) + tuple(-x for x in a) for a, b in zip(h.A, h.b)]
    ineqs.append((1,) + (0,) * n)
    eqs = [(g,) + tuple(-x for x in e) for e, g in zip(h.E, h.f)]
    lines, rays = cone_generators(ineqs, eqs, n + 1)
    points, xrays = [], []
    for r in rays:
        t = r[0]
        if t > 0:
            points.append(clean(x / t for x in r[1:]))
        else:
            xrays.append(normalize_direction(r[1:]))
    if not points:
        raise EmptyPolyhedron("inequality system is infeasible")
    xlines = [normalize_line(l[1:]) for l in lines]
    points.sort(key=sort_key)
    xrays.sort(key=sort_key)
    return VRep(n, tuple(points), tuple(xrays), tuple(xlines))


def v_to_h(v: VRep) -> HRep:
    """Irredundant inequality form of the set generated by ``v``."""
    if not v.points:
        raise EmptyPolyhedron("generator list has no points")
    n = v.dim
    # cone of valid inequalities (b, a): b - a.c >= 0, -a.r >= 0, a.l = 0
    ineqs = [(1,) + tuple(-x for x in c) for c in v.points]
    ineqs += [(0,) + tuple(-x for x in r) for r in v.rays]
    eqs = [(0,) + tuple(l) for l in v.lines]
    lines, rays = cone_generators(ineqs, eqs, n + 1)
    rows = []
    for q in rays:
        b, a = q[0], q[1:]
        if is_zero(a):
            continue
        if not any(b - dot(a, c) == 0 for c in v.points):
            continue
        rows.append(canonical_inequality(a, b))
    rows.sort(key=_ineq_key)
    E, f = canonical_equations([l[1:] for l in lines], [l[0] for l in lines])
    return HRep(n, tuple(r[0] for r in rows), tuple(r[1] for r in rows), E, f)


# -- the polyhedron type -----------------------------------------------------


@dataclass(frozen=True)
class Polyhedron:
    """A polyhedron with both representations computed at construction."""

    dim: int
    hrep: HRep
    vrep: VRep
    domain: Domain = field(default_factory=Domain)
    empty: bool = False

    @classmethod
    def from_h(cls, h: HRep) -> "Polyhedron":
        domain = Domain.of(h.scalars())
        A, b = [], []
        for a, rhs in zip(h.A, h.b):
            if is_zero(a):
                if rhs < 0:
                    return cls._empty(h, domain)
                continue
            A.append(a)
            b.append(rhs)
        h2 = HRep(h.dim, tuple(A), tuple(b), h.E, h.f)
        try:
            v = h_to_v(h2)
        except EmptyPolyhedron:
            return cls._empty(h, domain)
        return cls(h.dim, v_to_h(v), v, domain)

    @classmethod
    def from_v(cls, v: VRep) -> "Polyhedron":
        domain = Domain.of(v.scalars())
        if not v.points:
            return cls._empty(HRep(v.dim, ((ZERO,) * v.dim,), (-1,)), domain)
        h = v_to_h(v)
        return cls(v.dim, h, h_to_v(h), domain)

    @classmethod
    def _empty(cls, h: HRep, domain: Domain) -> "Polyhedron":
        return cls(h.dim, h, VRep(h.dim), domain, True)

    @property
    def points(self):
        return self.vrep.points

    @property
    def rays(self):
        return self.vrep.rays

    @property
    def lines(self):
        return self.vrep.lines

    @property
    def dimension(self) -> int:
        """Affine dimension; -1 for the empty set."""
        if self.empty:
            return -1
        gens = [(1,) + tuple(c) for c in self.points]
        gens += [(0,) + tuple(r) for r in self.rays + self.lines]
        return exact_rank(gens) - 1

    @property
    def is_full_dimensional(self) -> bool:
        return self.dimension == self.dim

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lines

    def require_nonempty(self):
        if self.empty:
            raise EmptyPolyhedron("polyhedron is empty")


def from_inequalities(A, b, E=(), f=(), dim=None) -> Polyhedron:
    return Polyhedron.from_h(hrep(A, b, E, f, dim))


def from_generators(points=(), rays=(), lines=(), dim=None) -> Polyhedron:
    return Polyhedron.from_v(vrep(points, rays, lines, dim))


# -- operations --------------------------------------------------------------


def _check_dim(P: Polyhedron, x: Sequence):
    if len(x) != P.dim:
        raise DimensionMismatch(f"vector of length {len(x)} for polyhedron in dimension {P.dim}")


def contains_point(P: Polyhedron, x: Sequence) -> bool:
    """Membership by evaluating the inequality form."""
    _check_dim(P, x)
    if P.empty:
        return False
    h = P.hrep
    if any(dot(a, x) > b for a, b in zip(h.A, h.b)):
        return False
    return all(dot(e, x) == g for e, g in zip(h.E, h.f))


def contains_direction(P: Polyhedron, r: Sequence) -> bool:
    """True iff ``r`` lies in the recession cone of nonempty ``P``."""
    _check_dim(P, r)
    h = P.hrep
    if any(dot(a, r) > 0 for a in h.A):
        return False
    return all(dot(e, r) == 0 for e in h.E)


def contains_line(P: Polyhedron, l: Sequence) -> bool:
    return contains_direction(P, l) and contains_direction(P, tuple(-x for x in l))


def polyhedra_equal(P: Polyhedron, Q: Polyhedron) -> bool:
    """Mutual generator membership plus equal dimension."""
    if P.dim != Q.dim:
        raise DimensionMismatch("polyhedra live in different ambient spaces")
    if P.empty or Q.empty:
        return P.empty and Q.empty
    if P.dimension != Q.dimension:
        return False
    for X, Y in ((P, Q), (Q, P)):
        if not all(contains_point(Y, c) for c in X.points):
            return False
        if not all(contains_direction(Y, r) for r in X.rays):
            return False
        if not all(contains_line(Y, l) for l in X.lines):
            return False
    return True


def recession_cone(P: Polyhedron) -> Polyhedron:
    P.require_nonempty()
    return Polyhedron.from_v(VRep(P.dim, ((ZERO,) * P.dim,), P.rays, P.lines))


def lineality_space(P: Polyhedron) -> list:
    """Orthogonal basis of the lineality space."""
    return list(P.lines)


def decompose_lines(P: Polyhedron):
    """Split ``P = C0 + span(L1)`` with ``C0 = P`` intersected with ``L1``'s complement."""
    P.require_nonempty()
    if not P.lines:
        return P, []
    C0 = Polyhedron.from_v(VRep(P.dim, P.points, P.rays, ()))
    return C0, list(P.lines)


def is_translated_cone(P: Polyhedron):
    """The apex if ``P`` has exactly one extreme point, else ``None``."""
    P.require_nonempty()
    if P.lines:
        raise LinesPresent("polyhedron contains lines")
    if len(P.points) == 1:
        return P.points[0]
    return None


def linear_image(P: Polyhedron, M: Sequence[Sequence]) -> Polyhedron:
    """Image of ``P`` under the linear map with matrix ``M``."""
    if M and len(M[0]) != P.dim:
        raise DimensionMismatch(f"map has {len(M[0])} columns, polyhedron lives in R^{P.dim}")
    m = len(M)
    if P.empty:
        return Polyhedron.from_v(VRep(m))
    pts = tuple(matvec(M, c) for c in P.points)
    rays = tuple(y for y in (matvec(M, r) for r in P.rays) if not is_zero(y))
    lines = tuple(y for y in (matvec(M, l) for l in P.lines) if not is_zero(y))
    return Polyhedron.from_v(VRep(m, pts, rays, lines))


def intersect(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    if P.dim != Q.dim:
        raise DimensionMismatch("polyhedra live in different ambient spaces")
    h1, h2 = P.hrep, Q.hrep
    return Polyhedron.from_h(HRep(P.dim, h1.A + h2.A, h1.b + h2.b, h1.E + h2.E, h1.f + h2.f))


def orthogonal_lines(lines: Sequence[Sequence]) -> list:
    return [normalize_line(l) for l in gram_schmidt(lines)]


def inequality_signs(h: HRep) -> tuple:
    return tuple(sign(b) for b in h.b)

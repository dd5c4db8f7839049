"""Polar sets, support values and the D1/D2/D3/D32 decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .linalg import ZERO, clean, dot, is_zero, solve_affine, sort_key
from .polyhedron import HRep, Polyhedron, _check_dim


def support_value(P: Polyhedron, l: Sequence):
    """``sup {<l, y> : y in P}``; ``math.inf`` when unbounded."""
    P.require_nonempty()
    _check_dim(P, l)
    if any(dot(l, r) > 0 for r in P.rays):
        return math.inf
    if any(dot(l, w) != 0 for w in P.lines):
        return math.inf
    return max(dot(l, c) for c in P.points)


def _dual_rows(P: Polyhedron, rhs):
    """Rows ``<l,c> <= rhs``, ``<l,r> <= 0`` and ``<l,w> = 0`` over the generators of P."""
    A = [tuple(c) for c in P.points] + [tuple(r) for r in P.rays]
    b = [rhs] * len(P.points) + [ZERO] * len(P.rays)
    E = [tuple(w) for w in P.lines]
    return HRep(P.dim, tuple(A), tuple(b), tuple(E), (ZERO,) * len(E))


def polar_set(P: Polyhedron) -> Polyhedron:
    """``{l : <l, y> <= 1 for all y in P}``."""
    P.require_nonempty()
    return Polyhedron.from_h(_dual_rows(P, 1))


def barrier_cone(P: Polyhedron) -> Polyhedron:
    """Directions with finite support value, ``{l : <l,r> <= 0, <l,w> = 0}``."""
    P.require_nonempty()
    h = _dual_rows(P, ZERO)
    rays = tuple(P.rays)
    return Polyhedron.from_h(HRep(P.dim, rays, (ZERO,) * len(rays), h.E, h.f))


@dataclass(frozen=True)
class PolarData:
    """The polar of a polyhedron together with its D-sets.

    When the polar contains lines (the polyhedron lies in a proper linear
    subspace) the sets are taken inside the orthogonal complement of those
    lines, and ``l_two_basis`` holds an orthogonal basis of them.
    """

    source: Polyhedron
    polar_set: Polyhedron
    polar_recession: Polyhedron
    c_three: Polyhedron
    d1: tuple
    d2: tuple
    d3: tuple
    d32: tuple
    l_two_basis: tuple

    @property
    def primed(self) -> bool:
        return bool(self.l_two_basis)

    def blocks(self):
        return (("D1", self.d1), ("D2", self.d2), ("D3", self.d3), ("D32", self.d32))


def compute_d_sets(P: Polyhedron) -> PolarData:
    P.require_nonempty()
    polar = polar_set(P)
    rec = Polyhedron.from_v(type(polar.vrep)(P.dim, ((ZERO,) * P.dim,), polar.rays, polar.lines))
    c3 = Polyhedron.from_h(_dual_rows(P, -1))
    d1 = sorted((c for c in polar.points if not is_zero(c)), key=sort_key)
    d2, d32 = [], []
    for r in polar.rays:
        s = support_value(P, r)
        if s == 0:
            d2.append(r)
        else:
            # rays of the polar's recession cone have support <= 0
            d32.append(clean(x / abs(s) for x in r))
    d2.sort(key=sort_key)
    d32.sort(key=sort_key)
    d3 = [] if c3.empty else sorted(c3.points, key=sort_key)
    return PolarData(P, polar, rec, c3, tuple(d1), tuple(d2), tuple(d3), tuple(d32), tuple(polar.lines))


def membership_by_d(pd: PolarData, x: Sequence) -> bool:
    """Decide ``x in C`` using only the D-sets (and ``x`` orthogonal to L2)."""
    _check_dim(pd.source, x)
    if any(dot(w, x) != 0 for w in pd.l_two_basis):
        return False
    if any(dot(l, x) > 1 for l in pd.d1):
        return False
    if any(dot(l, x) > 0 for l in pd.d2):
        return False
    return all(dot(l, x) <= -1 for l in pd.d3)


def apex_by_d(pd: PolarData) -> Optional[tuple]:
    """Solve ``<l1,x>=1, <l2,x>=0, <l3,x>=-1`` over the D-sets.

    The system is solvable exactly when the polyhedron is a translated cone;
    a solution is returned, else ``None``.
    """
    n = pd.source.dim
    rows = list(pd.d1) + list(pd.d2) + list(pd.d3) + list(pd.l_two_basis)
    rhs = [1] * len(pd.d1) + [0] * len(pd.d2) + [-1] * len(pd.d3) + [0] * len(pd.l_two_basis)
    S = solve_affine(rows, rhs, n) if rows else solve_affine([], [], n)
    return None if S is None else S.offset

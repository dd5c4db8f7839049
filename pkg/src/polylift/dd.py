"""Double description method for polyhedral cones.

The single entry point :func:`cone_generators` turns a cone
``{x : A x >= 0, E x = 0}`` into its lineality space and extreme rays.
Constraints are inserted in the given order and adjacency of two rays is
decided by the algebraic rank test.
"""

from __future__ import annotations

from typing import Sequence

from .linalg import (
    clean,
    dot,
    exact_rank,
    gram_schmidt,
    inverse,
    is_zero,
    matvec,
    normalize_direction,
    normalize_line,
    nullspace,
    project_out,
    rref,
    sort_key,
    transpose,
)


def _pointed_rays(B: list, r: int) -> list:
    """Extreme rays of the pointed cone ``{w in R^r : B w >= 0}``.

    ``B`` must have rank ``r``.
    """
    if r == 0:
        return []
    # initial simplicial cone from the first r independent rows
    chosen: list[int] = []
    for i, row in enumerate(B):
        if exact_rank([B[j] for j in chosen] + [row]) > len(chosen):
            chosen.append(i)
            if len(chosen) == r:
                break
    Binv = inverse([B[i] for i in chosen])
    cols = transpose(Binv)
    rays = [normalize_direction(c) for c in cols]
    # zero sets are kept as frozensets of constraint indices
    zsets = [frozenset(chosen[k] for k in range(r) if k != j) for j in range(r)]
    for i, row in enumerate(B):
        if i in chosen:
            continue
        vals = [dot(row, x) for x in rays]
        pos = [j for j, v in enumerate(vals) if v > 0]
        negs = [j for j, v in enumerate(vals) if v < 0]
        zer = [j for j, v in enumerate(vals) if v == 0]
        new_rays = [rays[j] for j in pos] + [rays[j] for j in zer]
        new_z = [zsets[j] for j in pos] + [zsets[j] | {i} for j in zer]
        for p in pos:
            for q in negs:
                common = zsets[p] & zsets[q]
                if len(common) < r - 2:
                    continue
                rk = exact_rank([B[k] for k in common]) if common else 0
                if rk != r - 2:
                    continue
                ray = clean(vals[p] * a - vals[q] * b for a, b in zip(rays[q], rays[p]))
                new_rays.append(normalize_direction(ray))
                new_z.append(common | {i})
        rays, zsets = new_rays, new_z
    return rays


def cone_generators(ineqs: Sequence[Sequence], eqs: Sequence[Sequence], dim: int):
    """Generators of ``{x in R^dim : a.x >= 0 for a in ineqs, e.x = 0 for e in eqs}``.

    Returns ``(lines, rays)``.  ``lines`` is a pairwise orthogonal basis of the
    lineality space, each scaled so that its first nonzero entry is 1.  ``rays``
    are the extreme rays of the cone intersected with the orthogonal
    complement of the lineality space, scaled so that the first nonzero entry
    is +-1, sorted lexicographically.
    """
    eqs = [e for e in eqs if not is_zero(e)]
    N = nullspace(eqs, dim) if eqs else [tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim)]
    k = len(N)
    if k == 0:
        return [], []
    Nt = transpose(N)  # dim x k, columns span the equation subspace
    A = [tuple(dot(a, col) for col in N) for a in ineqs]
    A = [a for a in A if not is_zero(a)]
    # lineality in y-coordinates
    lin_y = nullspace(A, k) if A else [tuple(1 if i == j else 0 for i in range(k)) for j in range(k)]
    R = list(rref(A, k)[0]) if A else []
    r = len(R)
    Rt = transpose(R, k)  # k x r
    B = [tuple(dot(a, col) for col in R) for a in A] if r else []
    w_rays = _pointed_rays(B, r) if r else []
    lines_x = [matvec(Nt, y) for y in lin_y]
    lines = gram_schmidt(lines_x)
    rays = []
    for w in w_rays:
        y = matvec(Rt, w)
        x = project_out(matvec(Nt, y), lines)
        rays.append(normalize_direction(x))
    lines = [normalize_line(l) for l in lines]
    rays.sort(key=sort_key)
    return lines, rays

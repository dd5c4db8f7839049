"""Cone factorizations of nonnegative matrices.

Covers exact verification for nonnegative-orthant and psd factorizations,
lower bounds on nonnegative and psd rank (rank, rectangle covering, block
augmentation), and a search for nonnegative factorizations whose results are
always re-verified exactly before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union

from .errors import DimensionMismatch, LinesPresent, NotFullDimensional, SizeCap, TooFewSamples
from .linalg import ONE, ZERO, clean, dot, exact_rank, solve_affine, transpose, vec
from .polyhedron import Polyhedron


# -- cones -------------------------------------------------------------------


@dataclass(frozen=True)
class NonnegOrthant:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("orthant dimension must be at least 1")

    @property
    def ambient(self) -> int:
        return self.m

    def __str__(self):
        return f"orthant {self.m}"


@dataclass(frozen=True)
class PSD:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("matrix side must be at least 1")

    @property
    def ambient(self) -> int:
        return self.k * (self.k + 1) // 2

    def __str__(self):
        return f"psd {self.k}"


ConeKind = Union[NonnegOrthant, PSD]


def is_symmetric(A: Sequence[Sequence]) -> bool:
    k = len(A)
    return all(len(row) == k for row in A) and all(A[i][j] == A[j][i] for i in range(k) for j in range(i))


def is_psd(A: Sequence[Sequence]) -> bool:
    """Exact positive semidefiniteness by symmetric Gaussian elimination.

    A zero pivot is only allowed when the rest of its row vanishes.
    """
    if not is_symmetric(A):
        return False
    k = len(A)
    W = [list(vec(r)) for r in A]
    for i in range(k):
        p = W[i][i]
        if p < 0:
            return False
        if p == 0:
            if any(W[i][j] != 0 for j in range(i + 1, k)):
                return False
            continue
        for j in range(i + 1, k):
            f = W[j][i]
            if f != 0:
                f = f / p
                for l in range(i + 1, k):
                    if W[i][l] != 0:
                        W[j][l] = W[j][l] - f * W[i][l]
    return True


def psd_flatten(A: Sequence[Sequence]) -> tuple:
    """Coordinates of a symmetric matrix: diagonal first, then the upper triangle row-wise."""
    k = len(A)
    diag = [A[i][i] for i in range(k)]
    upper = [A[i][j] for i in range(k) for j in range(i + 1, k)]
    return tuple(diag + upper)


def psd_unflatten(v: Sequence, k: int) -> tuple:
    A = [[ZERO] * k for _ in range(k)]
    for i in range(k):
        A[i][i] = v[i]
    pos = k
    for i in range(k):
        for j in range(i + 1, k):
            A[i][j] = A[j][i] = v[pos]
            pos += 1
    return tuple(tuple(r) for r in A)


def psd_inner_weights(k: int) -> tuple:
    """Weights making the flattened dot product equal the trace inner product."""
    return (ONE,) * k + (Fraction(2),) * (k * (k - 1) // 2)


def cone_inner(cone: ConeKind, a, b):
    if isinstance(cone, PSD):
        return sum((a[i][j] * b[i][j] for i in range(cone.k) for j in range(cone.k) if a[i][j] and b[i][j]), ZERO)
    return dot(a, b)


def in_cone(cone: ConeKind, a) -> bool:
    if isinstance(cone, PSD):
        return len(a) == cone.k and is_psd(a)
    return len(a) == cone.m and all(x >= 0 for x in a)


# -- factorizations ----------------------------------------------------------


@dataclass(frozen=True)
class Factorization:
    """Cone factors: ``a_factors[i]`` in K per row, ``b_factors[j]`` in K* per column.

    ``lineality`` optionally holds extra data for polyhedra with lines, a
    dict with keys ``"lines"`` (orthogonal basis), ``"plus"`` and ``"minus"``
    (cone points for each line and its negative) and ``"F"`` (dual elements
    with ``<z, F_i>`` reading off the i-th line coordinate).
    """

    cone: ConeKind
    a_factors: tuple
    b_factors: tuple
    lineality: Optional[dict] = None

    @property
    def size(self) -> int:
        return self.cone.m if isinstance(self.cone, NonnegOrthant) else self.cone.k


def orthant_factorization(U: Sequence[Sequence], V: Sequence[Sequence]) -> Factorization:
    """Factorization with rows of ``U`` as a-factors and columns of ``V`` as b-factors."""
    m = len(V)
    return Factorization(NonnegOrthant(m), tuple(tuple(r) for r in U), tuple(transpose(V)))


def factor_matrices(F: Factorization):
    if not isinstance(F.cone, NonnegOrthant):
        raise TypeError("factor matrices exist only for orthant factorizations")
    return tuple(F.a_factors), transpose(F.b_factors, F.cone.m)


@dataclass(frozen=True)
class Verification:
    ok: bool
    violation: Optional[str] = None

    def __bool__(self):
        return self.ok


def verify_factorization(M: Sequence[Sequence], F: Factorization) -> Verification:
    """Exact check of cone membership and of ``<a_i, b_j> = M_ij``."""
    p = len(M)
    q = len(M[0]) if M else len(F.b_factors)
    if len(F.a_factors) != p or len(F.b_factors) != q:
        raise DimensionMismatch(
            f"matrix is {p}x{q} but factorization has {len(F.a_factors)} a-factors and {len(F.b_factors)} b-factors"
        )
    size = F.cone.k if isinstance(F.cone, PSD) else F.cone.m
    for fac in F.a_factors + F.b_factors:
        if len(fac) != size:
            raise DimensionMismatch(f"factor of size {len(fac)} for cone {F.cone}")
    for i, a in enumerate(F.a_factors):
        if not in_cone(F.cone, a):
            return Verification(False, f"a-factor {i} is not in the cone")
    for j, b in enumerate(F.b_factors):
        if not in_cone(F.cone, b):
            return Verification(False, f"b-factor {j} is not in the dual cone")
    for i, a in enumerate(F.a_factors):
        for j, b in enumerate(F.b_factors):
            if cone_inner(F.cone, a, b) != M[i][j]:
                return Verification(False, f"entry ({i},{j}) differs")
    return Verification(True)


# -- polynomial psd families -------------------------------------------------


def poly_eval(coeffs: Sequence, x):
    """Evaluate ``c0 + c1 x + c2 x^2 + ...`` (Horner)."""
    acc = ZERO
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def poly_degree(coeffs: Sequence) -> int:
    d = -1
    for i, c in enumerate(coeffs):
        if c != 0:
            d = i
    return max(d, 0)


@dataclass(frozen=True)
class FamilyReport:
    ok: bool
    degree: int
    samples: tuple
    identity_failures: tuple
    psd_failures: tuple


def psd_verify_family(A: Sequence[Sequence[Sequence]], B: Sequence[Sequence], samples: Sequence,
                      target: Sequence = (0,), in_domain: Optional[Callable] = None) -> FamilyReport:
    """Check ``<A(x), B> = target(x)`` and ``A(x)`` psd at sample parameters.

    ``A`` is a symmetric matrix of polynomial coefficient lists in one
    parameter, ``target`` a coefficient list.  With at least ``degree + 1``
    distinct samples the identity holds as polynomials.  ``in_domain``
    restricts the psd test to samples inside the parameter domain.
    """
    k = len(A)
    degree = max([poly_degree(A[i][j]) for i in range(k) for j in range(k)] + [poly_degree(target)])
    distinct = []
    for s in samples:
        if s not in distinct:
            distinct.append(s)
    if len(distinct) < degree + 1:
        raise TooFewSamples(f"{len(distinct)} distinct samples for degree {degree}")
    id_fail, psd_fail = [], []
    for s in distinct:
        As = tuple(tuple(poly_eval(A[i][j], s) for j in range(k)) for i in range(k))
        lhs = sum((As[i][j] * B[i][j] for i in range(k) for j in range(k)), ZERO)
        if lhs != poly_eval(target, s):
            id_fail.append(s)
        if (in_domain is None or in_domain(s)) and not is_psd(As):
            psd_fail.append(s)
    ok = not id_fail and not psd_fail and is_psd(B)
    return FamilyReport(ok, degree, tuple(distinct), tuple(id_fail), tuple(psd_fail))


# -- rectangle covering ------------------------------------------------------


MAX_RECT_SIDE = 12


def _support(M):
    rows = [i for i, r in enumerate(M) if any(x > 0 for x in r)]
    cols = [j for j in range(len(M[0]) if M else 0) if any(M[i][j] > 0 for i in range(len(M)))]
    return rows, cols


def maximal_rectangles(M: Sequence[Sequence]) -> list:
    """All inclusion-maximal all-positive rectangles as ``(row_mask, col_mask)``."""
    rows, cols = _support(M)
    if len(rows) > MAX_RECT_SIDE or len(cols) > MAX_RECT_SIDE:
        raise SizeCap(f"support exceeds {MAX_RECT_SIDE}x{MAX_RECT_SIDE}")
    rowmask = []
    for i in range(len(M)):
        mask = 0
        for j, x in enumerate(M[i]):
            if x > 0:
                mask |= 1 << j
        rowmask.append(mask)
    found = set()
    for sub in range(1, 1 << len(rows)):
        cmask = -1
        for t, i in enumerate(rows):
            if sub >> t & 1:
                cmask &= rowmask[i]
        if cmask <= 0:
            continue
        rmask = 0
        for i in rows:
            if rowmask[i] & cmask == cmask:
                rmask |= 1 << i
        found.add((rmask, cmask))
    return sorted(found)


def _cells(rmask: int, cmask: int, ncols: int) -> int:
    bits = 0
    i = 0
    while rmask:
        if rmask & 1:
            bits |= cmask << (i * ncols)
        rmask >>= 1
        i += 1
    return bits


def rectangle_covers(M: Sequence[Sequence], max_covers: int = 64):
    """Minimum rectangle cover size and up to ``max_covers`` covers attaining it.

    Exact branch and bound over maximal rectangles: each branch picks the
    uncovered cell with the fewest candidate rectangles.
    """
    ncols = len(M[0]) if M else 0
    rects = maximal_rectangles(M)
    cellsets = [_cells(r, c, ncols) for r, c in rects]
    target = 0
    for i, row in enumerate(M):
        for j, x in enumerate(row):
            if x > 0:
                target |= 1 << (i * ncols + j)
    if target == 0:
        return 0, [[]]
    covering = {}
    t = target
    while t:
        low = t & -t
        covering[low] = [k for k, cs in enumerate(cellsets) if cs & low]
        t ^= low
    best = [len(rects) + 1]
    covers: list = []

    def search(covered, chosen):
        if covered == target:
            n = len(chosen)
            if n < best[0]:
                best[0] = n
                covers.clear()
            if n == best[0] and len(covers) < max_covers:
                covers.append(sorted(chosen))
            return
        if len(chosen) + 1 > best[0]:
            return
        remaining = target & ~covered
        cand = None
        t2 = remaining
        while t2:
            low = t2 & -t2
            c = covering[low]
            if cand is None or len(c) < len(cand):
                cand = c
            t2 ^= low
        for k in cand:
            chosen.append(k)
            search(covered | cellsets[k], chosen)
            chosen.pop()

    search(0, [])
    unique = []
    for c in covers:
        if c not in unique:
            unique.append(c)
    return best[0], [[rects[k] for k in c] for c in unique]


def rectangle_cover_bound(M: Sequence[Sequence]) -> int:
    """Minimum number of all-positive rectangles covering the support of ``M``."""
    return rectangle_covers(M, max_covers=1)[0]


# -- block augmentation ------------------------------------------------------


MAX_BLOCK_SIDE = 16


@dataclass(frozen=True)
class BoundNode:
    value: int
    rule: str
    detail: str = ""
    child: Optional["BoundNode"] = None

    def render(self, indent: int = 0) -> str:
        line = " " * indent + f"{self.rule} >= {self.value}" + (f" ({self.detail})" if self.detail else "")
        if self.child is None:
            return line
        return line + "\n" + self.child.render(indent + 2)

    def to_dict(self) -> dict:
        d = {"rule": self.rule, "value": self.value, "detail": self.detail}
        if self.child is not None:
            d["child"] = self.child.to_dict()
        return d


def _psd_rank_from_rank(r: int) -> int:
    # a psd factorization of size k spans at most k(k+1)/2 dimensions
    k = 0
    while k * (k + 1) // 2 < r:
        k += 1
    return k


def block_augmentation_bound(M: Sequence[Sequence], cone: str = "nonneg") -> BoundNode:
    """Lower bound on nonnegative (``cone="nonneg"``) or psd (``"psd"``) rank.

    Looks for a row or column with a single positive entry; removing that row
    and column leaves a block ``A`` with ``M ~ [[A, w], [0, c]]``, and the
    bound for ``M`` is the bound for ``A`` plus one.  Base bounds are the
    exact rank and, for nonnegative rank, the rectangle covering number.
    """
    p = len(M)
    q = len(M[0]) if M else 0
    if p > MAX_BLOCK_SIDE or q > MAX_BLOCK_SIDE:
        raise SizeCap(f"block search is limited to {MAX_BLOCK_SIDE}x{MAX_BLOCK_SIDE}")
    rows_all = tuple(range(p))
    cols_all = tuple(range(q))
    budget = [4000]

    def base(rows, cols) -> BoundNode:
        sub = [[M[i][j] for j in cols] for i in rows]
        r = exact_rank(sub) if sub and cols else 0
        if cone == "psd":
            return BoundNode(_psd_rank_from_rank(r), "rank", f"rank {r}")
        node = BoundNode(r, "rank")
        if sub and cols:
            try:
                rect = rectangle_cover_bound(sub)
            except SizeCap:
                rect = -1
            if rect > r:
                node = BoundNode(rect, "rectangle")
        return node

    @lru_cache(maxsize=None)
    def bound(rows, cols) -> BoundNode:
        best = base(rows, cols)
        budget[0] -= 1
        if budget[0] < 0:
            return best
        peels = []
        for i in rows:
            pos = [j for j in cols if M[i][j] > 0]
            if len(pos) == 1:
                peels.append((i, pos[0]))
        for j in cols:
            pos = [i for i in rows if M[i][j] > 0]
            if len(pos) == 1 and (pos[0], j) not in peels:
                peels.append((pos[0], j))
        for i, j in peels:
            child = bound(tuple(x for x in rows if x != i), tuple(y for y in cols if y != j))
            # ties go to the block derivation, which carries the finer certificate
            if child.value + 1 > best.value or (child.value + 1 == best.value and best.rule != "block"):
                best = BoundNode(child.value + 1, "block", f"row {i + 1}, column {j + 1}", child)
        return best

    return bound(rows_all, cols_all)


# -- search ------------------------------------------------------------------


def _to_float(M):
    import numpy as np

    return np.array([[float(x) for x in row] for row in M], dtype=float)


def _rationalize(x: float, cap: int) -> Fraction:
    if abs(x) < 1e-9:
        return Fraction(0)
    return Fraction(x).limit_denominator(cap)


def _exact_from_float(M, W, H, cap: int) -> Optional[Factorization]:
    """Round ``W H ~ M`` to exact nonnegative factors and verify them."""
    k = H.shape[0]
    scale = H.max(axis=1)
    scale[scale <= 0] = 1.0
    H = H / scale[:, None]
    W = W * scale[None, :]
    Hq = [[_rationalize(x, cap) for x in row] for row in H]
    attempts = []
    Wq = [[_rationalize(x, cap) for x in row] for row in W]
    attempts.append(Wq)
    # re-solve each row of W exactly on its numerical support
    Wsolved = []
    for i in range(len(M)):
        supp = [l for l in range(k) if W[i, l] > 1e-7]
        if not supp:
            Wsolved.append([Fraction(0)] * k)
            continue
        A = transpose([Hq[l] for l in supp])
        S = solve_affine(A, list(M[i]), len(supp))
        if S is None:
            Wsolved = None
            break
        row = [Fraction(0)] * k
        for l, v in zip(supp, S.offset):
            row[l] = v
        Wsolved.append(row)
    if Wsolved is not None:
        attempts.append(Wsolved)
    for Wc in attempts:
        F = Factorization(NonnegOrthant(k), tuple(clean(r) for r in Wc), tuple(transpose(Hq)))
        if verify_factorization(M, F):
            return F
    return None


def _hals(Mf, W, H, iters: int, wmask=None, hmask=None, tol: float = 1e-12):
    import numpy as np

    k = W.shape[1]
    norm = max(np.linalg.norm(Mf), 1.0)
    used = 0
    for used in range(1, iters + 1):
        for l in range(k):
            R = Mf - W @ H + np.outer(W[:, l], H[l])
            wl = W[:, l]
            H[l] = np.maximum(0.0, wl @ R / (wl @ wl + 1e-300))
            if hmask is not None:
                H[l] *= hmask[l]
            hl = H[l]
            W[:, l] = np.maximum(0.0, R @ hl / (hl @ hl + 1e-300))
            if wmask is not None:
                W[:, l] *= wmask[:, l]
        if np.linalg.norm(Mf - W @ H) < tol * norm:
            break
    return W, H, used, float(np.linalg.norm(Mf - W @ H) / norm)


@dataclass
class SearchLog:
    restarts: int = 0
    iterations: int = 0
    found_at: Optional[int] = None
    notes: list = field(default_factory=list)


def nn_search(M: Sequence[Sequence], k: int, budget: int = 10**6, seed: int = 0, restarts: int = 10,
              warm_start=None, denominator_cap: int = 10**6, log: Optional[SearchLog] = None) -> Optional[Factorization]:
    """Look for an exactly verified ``R^k_+`` factorization of ``M``.

    Floating-point alternating least squares (HALS) runs from several starts:
    supports taken from minimum rectangle covers when they have at most
    ``k`` rectangles, and random dense starts.  Candidates are rounded to
    rationals with bounded denominators and re-verified exactly; nothing is
    returned unless the exact check passes.  ``budget`` caps the total number
    of HALS sweeps.  ``warm_start`` may be a pair ``(U, V)`` or a
    Factorization, checked first.  ``None`` means nothing was found.
    """
    import numpy as np

    log = log if log is not None else SearchLog()
    p = len(M)
    q = len(M[0]) if M else 0
    if warm_start is not None:
        F = warm_start if isinstance(warm_start, Factorization) else orthant_factorization(*warm_start)
        if isinstance(F.cone, NonnegOrthant) and F.cone.m == k and verify_factorization(M, F):
            log.notes.append("warm start verified")
            return F
        log.notes.append("warm start rejected")
    if p == 0 or q == 0:
        return None
    Mf = _to_float(M)
    supports = []
    try:
        size, covers = rectangle_covers(M, max_covers=32)
        if size <= k:
            for cover in covers:
                wmask = np.zeros((p, k))
                hmask = np.zeros((k, q))
                for l, (rm, cm) in enumerate(cover):
                    for i in range(p):
                        if rm >> i & 1:
                            wmask[i, l] = 1.0
                    for j in range(q):
                        if cm >> j & 1:
                            hmask[l, j] = 1.0
                supports.append((wmask, hmask))
    except SizeCap:
        pass
    rng = np.random.default_rng(seed)
    remaining = budget
    per_run = max(1, budget // max(restarts, 1))
    for t in range(restarts):
        if remaining <= 0:
            break
        log.restarts += 1
        W = rng.random((p, k))
        H = rng.random((k, q))
        wmask = hmask = None
        if supports and t % 2 == 0:
            wmask, hmask = supports[(t // 2) % len(supports)]
            W *= wmask
            H *= hmask
        iters = min(per_run, remaining)
        W, H, used, res = _hals(Mf, W, H, iters, wmask, hmask)
        remaining -= used
        log.iterations += used
        if res < 1e-8:
            F = _exact_from_float(M, W, H, denominator_cap)
            if F is not None:
                log.found_at = t
                return F
    return None


def pad_factorization(F: Factorization, k: int) -> Factorization:
    """Embed an orthant factorization into a larger orthant by zero padding."""
    m = F.cone.m
    if k < m:
        raise ValueError("cannot shrink a factorization by padding")
    z = (ZERO,) * (k - m)
    return Factorization(NonnegOrthant(k), tuple(tuple(a) + z for a in F.a_factors),
                         tuple(tuple(b) + z for b in F.b_factors))


def trivial_factorization(M: Sequence[Sequence]) -> Factorization:
    """``M = M I`` (or ``I M``) using the smaller side."""
    p = len(M)
    q = len(M[0])
    if q <= p:
        eye = [tuple(ONE if i == j else ZERO for i in range(q)) for j in range(q)]
        return Factorization(NonnegOrthant(q), tuple(tuple(r) for r in M), tuple(eye))
    eye = [tuple(ONE if i == j else ZERO for i in range(p)) for j in range(p)]
    return Factorization(NonnegOrthant(p), tuple(eye), tuple(transpose(M)))


@dataclass(frozen=True)
class RankDecision:
    verdict: str  # "yes", "no" or "unknown"
    factorization: Optional[Factorization] = None
    bound: Optional[BoundNode] = None


def nn_rank_decide(M: Sequence[Sequence], k: int, budget: int = 10**6, seed: int = 0,
                   restarts: int = 10, warm_start=None) -> RankDecision:
    """Decide whether the nonnegative rank of ``M`` is at most ``k``."""
    bound = block_augmentation_bound(M)
    if bound.value > k:
        return RankDecision("no", None, bound)
    p = len(M)
    q = len(M[0]) if M else 0
    if p and q and k >= min(p, q):
        return RankDecision("yes", pad_factorization(trivial_factorization(M), k), bound)
    F = nn_search(M, k, budget, seed, restarts, warm_start)
    if F is not None:
        return RankDecision("yes", F, bound)
    return RankDecision("unknown", None, bound)


# -- psd bounds and remarks --------------------------------------------------


def psd_rank_lower_bound(P: Polyhedron) -> int:
    """Lower bound ``n`` on the psd rank of a full-dimensional line-free ``P`` in ``R^n``.

    The bound comes from induction over facets: each step adds one to the
    psd rank of a facet's slack matrix.
    """
    P.require_nonempty()
    if P.lines:
        raise LinesPresent("psd bound needs a polyhedron without lines")
    if not P.is_full_dimensional:
        raise NotFullDimensional("psd bound needs a full-dimensional polyhedron")
    return P.dim


def shitov_report(M: Sequence[Sequence]) -> Optional[int]:
    """For rank-three ``M``, the non-constructive bound ``ceil(6 min(m,n) / 7)``."""
    if not M or exact_rank(M) != 3:
        return None
    return -(-6 * min(len(M), len(M[0])) // 7)

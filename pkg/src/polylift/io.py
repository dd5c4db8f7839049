"""Plain-text file formats for polyhedra, matrices and lifts.

All scalars use the canonical syntax ``p/q+r/s*sqrt(d)``.  Lines starting
with ``#`` and blank lines are ignored everywhere.

Polyhedron::

    H                      (or V)
    Q(sqrt 3)              (or Q)
    dim 2                  (optional, needed only without rows)
    ineq a1 ... an | b     (H files; also: eq a1 ... an | f)
    point x1 ... xn        (V files; also: ray ..., line ...)

Matrix::

    rows cols
    domain Q(sqrt 3)       (optional)
    one row of scalars per line

Lift::

    cone orthant m         (or: cone psd k, coordinates flattened as
                            diagonal then upper triangle row-wise)
    domain Q(sqrt 3)       (optional)
    offset z1 ... zN
    basis z1 ... zN        (zero or more)
    proj p1 ... pN         (one per target coordinate)
    shift x1 ... xn        (optional)
    witness point|ray|line x1 ... xn : z1 ... zN
    dual a1 ... an | rhs : u1 ... uN
"""

from __future__ import annotations

import json
from typing import Iterable, Optional, Sequence

from .errors import DomainMismatch, ParseError
from .factorization import PSD, NonnegOrthant
from .linalg import AffineSubspace
from .lift import DualRow, Lift, Witness, ambient_dim
from .polyhedron import HRep, Polyhedron, VRep
from .scalar import Domain, format_scalar, parse_domain


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line


def _scalars(tokens: Iterable[str], domain: Domain, no: int) -> tuple:
    try:
        return tuple(domain.parse(t) for t in tokens)
    except (ParseError, DomainMismatch) as exc:
        raise ParseError(f"line {no}: {exc}") from None


def fmt_vec(v: Sequence) -> str:
    return " ".join(format_scalar(x) for x in v)


def _domain_line(domain: Domain) -> str:
    return str(domain)


# -- polyhedra ---------------------------------------------------------------


def parse_polyhedron_text(text: str):
    """Parse a polyhedron file into an HRep or VRep plus its domain."""
    it = iter(_lines(text))
    try:
        no, header = next(it)
        no, dom = next(it)
    except StopIteration:
        raise ParseError("polyhedron file needs a header and a domain line") from None
    if header not in ("H", "V"):
        raise ParseError(f"line {no}: header must be H or V, got {header!r}")
    domain = parse_domain(dom)
    dim: Optional[int] = None
    A, b, E, f = [], [], [], []
    pts, rays, lines = [], [], []
    for no, line in it:
        kind, _, rest = line.partition(" ")
        if kind == "dim":
            try:
                dim = int(rest)
            except ValueError:
                raise ParseError(f"line {no}: bad dimension {rest!r}") from None
            continue
        if header == "H":
            if kind not in ("ineq", "eq"):
                raise ParseError(f"line {no}: expected 'ineq' or 'eq', got {kind!r}")
            lhs, bar, rhs = rest.partition("|")
            if not bar:
                raise ParseError(f"line {no}: missing '|' before the right-hand side")
            a = _scalars(lhs.split(), domain, no)
            r = _scalars(rhs.split(), domain, no)
            if len(r) != 1:
                raise ParseError(f"line {no}: expected one right-hand side")
            (A if kind == "ineq" else E).append(a)
            (b if kind == "ineq" else f).append(r[0])
        else:
            target = {"point": pts, "ray": rays, "line": lines}.get(kind)
            if target is None:
                raise ParseError(f"line {no}: expected 'point', 'ray' or 'line', got {kind!r}")
            target.append(_scalars(rest.split(), domain, no))
    rows = A + E if header == "H" else pts + rays + lines
    if dim is None:
        if not rows:
            raise ParseError("empty polyhedron file needs a 'dim' line")
        dim = len(rows[0])
    if any(len(r) != dim for r in rows):
        raise ParseError("rows of different lengths")
    if header == "H":
        return HRep(dim, tuple(A), tuple(b), tuple(E), tuple(f)), domain
    return VRep(dim, tuple(pts), tuple(rays), tuple(lines)), domain


def read_polyhedron(path: str) -> Polyhedron:
    with open(path) as fh:
        rep, _ = parse_polyhedron_text(fh.read())
    return Polyhedron.from_h(rep) if isinstance(rep, HRep) else Polyhedron.from_v(rep)


def read_representation(path: str):
    with open(path) as fh:
        return parse_polyhedron_text(fh.read())[0]


def format_hrep(h: HRep, domain: Optional[Domain] = None) -> str:
    domain = domain or Domain.of(h.scalars())
    out = ["H", _domain_line(domain), f"dim {h.dim}"]
    out += [f"ineq {fmt_vec(a)} | {format_scalar(r)}" for a, r in zip(h.A, h.b)]
    out += [f"eq {fmt_vec(e)} | {format_scalar(r)}" for e, r in zip(h.E, h.f)]
    return "\n".join(out) + "\n"


def format_vrep(v: VRep, domain: Optional[Domain] = None) -> str:
    domain = domain or Domain.of(v.scalars())
    out = ["V", _domain_line(domain), f"dim {v.dim}"]
    out += [f"point {fmt_vec(p)}" for p in v.points]
    out += [f"ray {fmt_vec(r)}" for r in v.rays]
    out += [f"line {fmt_vec(l)}" for l in v.lines]
    return "\n".join(out) + "\n"


# -- matrices ----------------------------------------------------------------


def parse_matrix_text(text: str) -> tuple:
    it = iter(_lines(text))
    try:
        no, head = next(it)
    except StopIteration:
        raise ParseError("empty matrix file") from None
    parts = head.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError(f"line {no}: expected 'rows cols'")
    m, n = int(parts[0]), int(parts[1])
    domain = Domain()
    rows = []
    for no, line in it:
        if line.startswith("domain"):
            if rows:
                raise ParseError(f"line {no}: domain must precede the rows")
            domain = parse_domain(line[len("domain"):])
            continue
        row = _scalars(line.split(), domain, no)
        if len(row) != n:
            raise ParseError(f"line {no}: expected {n} entries, got {len(row)}")
        rows.append(row)
    if len(rows) != m:
        raise ParseError(f"expected {m} rows, got {len(rows)}")
    return tuple(rows)


def read_matrix(path: str) -> tuple:
    with open(path) as fh:
        return parse_matrix_text(fh.read())


def format_matrix(M: Sequence[Sequence], comments: Sequence[str] = (), ncols: Optional[int] = None) -> str:
    n = len(M[0]) if M else (ncols or 0)
    out = [f"{len(M)} {n}"]
    domain = Domain.of(x for r in M for x in r)
    if domain.d is not None:
        out.append(f"domain {domain}")
    out += [f"# {c}" for c in comments]
    out += [fmt_vec(r) for r in M]
    return "\n".join(out) + "\n"


# -- lifts -------------------------------------------------------------------


def parse_lift_text(text: str) -> Lift:
    cone = None
    domain = Domain()
    offset = None
    basis, proj, witnesses, duals = [], [], [], []
    shift = None
    for no, line in _lines(text):
        kind, _, rest = line.partition(" ")
        if kind == "cone":
            parts = rest.split()
            if len(parts) != 2 or parts[0] not in ("orthant", "psd") or not parts[1].isdigit():
                raise ParseError(f"line {no}: expected 'cone orthant m' or 'cone psd k'")
            try:
                cone = NonnegOrthant(int(parts[1])) if parts[0] == "orthant" else PSD(int(parts[1]))
            except ValueError as exc:
                raise ParseError(f"line {no}: {exc}") from None
        elif kind == "domain":
            domain = parse_domain(rest)
        elif kind == "offset":
            offset = _scalars(rest.split(), domain, no)
        elif kind == "basis":
            basis.append(_scalars(rest.split(), domain, no))
        elif kind == "proj":
            proj.append(_scalars(rest.split(), domain, no))
        elif kind == "shift":
            shift = _scalars(rest.split(), domain, no)
        elif kind == "witness":
            wkind, _, body = rest.partition(" ")
            if wkind not in ("point", "ray", "line"):
                raise ParseError(f"line {no}: witness kind must be point, ray or line")
            gen, colon, z = body.partition(":")
            if not colon:
                raise ParseError(f"line {no}: missing ':' in witness")
            witnesses.append(Witness(wkind, _scalars(gen.split(), domain, no), _scalars(z.split(), domain, no)))
        elif kind == "dual":
            lhs, bar, tail = rest.partition("|")
            rhs, colon, u = tail.partition(":")
            if not bar or not colon:
                raise ParseError(f"line {no}: expected 'dual a... | rhs : u...'")
            r = _scalars(rhs.split(), domain, no)
            if len(r) != 1:
                raise ParseError(f"line {no}: expected one right-hand side")
            duals.append(DualRow(_scalars(lhs.split(), domain, no), r[0], _scalars(u.split(), domain, no)))
        else:
            raise ParseError(f"line {no}: unknown record {kind!r}")
    if cone is None or offset is None or not proj:
        raise ParseError("lift file needs 'cone', 'offset' and 'proj' records")
    N = ambient_dim(cone)
    for v in [offset] + basis + proj + [w.z for w in witnesses] + [d.u for d in duals]:
        if len(v) != N:
            raise ParseError(f"vector of length {len(v)} where the cone has {N} coordinates")
    n = len(proj)
    for v in [w.generator for w in witnesses] + [d.normal for d in duals] + ([shift] if shift else []):
        if len(v) != n:
            raise ParseError(f"vector of length {len(v)} where the target has {n} coordinates")
    from .linalg import exact_rank

    if basis and exact_rank(basis) != len(basis):
        raise ParseError("slice basis is linearly dependent")
    return Lift(cone, AffineSubspace(offset, tuple(basis)), tuple(proj), tuple(witnesses), tuple(duals), shift)


def read_lift(path: str) -> Lift:
    with open(path) as fh:
        return parse_lift_text(fh.read())


def format_lift(lift: Lift) -> str:
    vals = list(lift.slice.offset) + [x for b in lift.slice.basis for x in b]
    vals += [x for r in lift.projection for x in r]
    vals += [x for w in lift.witnesses for x in w.generator + w.z]
    vals += [x for d in lift.duals for x in d.normal + d.u + (d.rhs,)]
    domain = Domain.of(vals)
    out = [f"cone {lift.cone}"]
    if domain.d is not None:
        out.append(f"domain {domain}")
    out.append(f"offset {fmt_vec(lift.slice.offset)}")
    out += [f"basis {fmt_vec(b)}" for b in lift.slice.basis]
    out += [f"proj {fmt_vec(r)}" for r in lift.projection]
    if lift.shift is not None:
        out.append(f"shift {fmt_vec(lift.shift)}")
    out += [f"witness {w.kind} {fmt_vec(w.generator)} : {fmt_vec(w.z)}" for w in lift.witnesses]
    out += [f"dual {fmt_vec(d.normal)} | {format_scalar(d.rhs)} : {fmt_vec(d.u)}" for d in lift.duals]
    return "\n".join(out) + "\n"


# -- json --------------------------------------------------------------------


def to_jsonable(obj):
    """Recursively replace exact scalars by canonical strings."""
    from fractions import Fraction

    from .scalar import QuadScalar

    if isinstance(obj, (Fraction, QuadScalar)):
        return format_scalar(obj)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return "inf" if obj == float("inf") else obj
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return str(obj)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=False) + "\n"

"""Command-line interface.

Exit status: 0 success or accept, 1 checked negative (a bound refutes k, a
verification fails, a matrix is rejected), 2 malformed input or unusable
data, 3 undecided (``nnrank`` found neither a bound nor a factorization).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import io
from .errors import PolyliftError, RankTooSmall
from .factorization import (
    block_augmentation_bound,
    factor_matrices,
    nn_rank_decide,
    orthant_factorization,
    psd_rank_lower_bound,
    shitov_report,
    verify_factorization,
)
from .lift import build_cone_lift, build_lift, eliminate_presentation, verify_lift
from .linalg import is_zero
from .polar import compute_d_sets, polar_set
from .polyhedron import HRep, Polyhedron, VRep
from .scalar import format_scalar
from .slack import build_slack, canonical_slack, check_rank_theorem, is_slack_matrix

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_UNKNOWN = 0, 1, 2, 3
DEFAULT_SEED = 20240101


class _Output:
    def __init__(self, path: Optional[str]):
        self.path = path
        self.parts: list[str] = []

    def write(self, text: str):
        self.parts.append(text)

    def flush(self):
        text = "".join(self.parts)
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _load_polyhedron(path: str):
    rep, _ = io.parse_polyhedron_text(open(path).read())
    P = Polyhedron.from_h(rep) if isinstance(rep, HRep) else Polyhedron.from_v(rep)
    return rep, P


def _rows_text(rows) -> str:
    return "".join(f"  {io.fmt_vec(r)}\n" for r in rows)


# -- subcommands -------------------------------------------------------------


def cmd_convert(args, out):
    rep, P = _load_polyhedron(args.input)
    if args.format == "json":
        if isinstance(rep, HRep):
            out.write(io.dumps({"points": P.points, "rays": P.rays, "lines": P.lines}))
        else:
            h = P.hrep
            out.write(io.dumps({"inequalities": [{"normal": a, "rhs": b} for a, b in h.rows],
                                "equations": [{"normal": e, "rhs": f} for e, f in zip(h.E, h.f)]}))
        return EXIT_OK
    if isinstance(rep, HRep):
        out.write(io.format_vrep(P.vrep, P.domain))
    else:
        out.write(io.format_hrep(P.hrep, P.domain))
    return EXIT_OK


def cmd_polar(args, out):
    _, P = _load_polyhedron(args.input)
    Q = polar_set(P)
    if args.format == "json":
        h = Q.hrep
        out.write(io.dumps({"inequalities": [{"normal": a, "rhs": b} for a, b in h.rows],
                            "equations": [{"normal": e, "rhs": f} for e, f in zip(h.E, h.f)],
                            "points": Q.points, "rays": Q.rays, "lines": Q.lines}))
    else:
        out.write(io.format_hrep(Q.hrep, Q.domain))
    return EXIT_OK


def cmd_dsets(args, out):
    _, P = _load_polyhedron(args.input)
    pd = compute_d_sets(P)
    blocks = list(pd.blocks())
    if pd.l_two_basis:
        blocks.append(("L2", pd.l_two_basis))
    if args.format == "json":
        out.write(io.dumps({name: list(rows) for name, rows in blocks}))
    else:
        for name, rows in blocks:
            out.write(f"{name}:\n" + _rows_text(rows))
    return EXIT_OK


def _slack_for(args, rep, P):
    if args.canonical:
        return canonical_slack(P)
    h = rep if isinstance(rep, HRep) else P.hrep
    if args.gens:
        v = io.read_representation(args.gens)
        if not isinstance(v, VRep):
            raise PolyliftError("--gens must name a V file")
        return build_slack(P, h, v, keep_order=args.keep_order)
    return build_slack(P, h, P.vrep, keep_order=args.keep_order)


def _emit_slack(S, out, fmt):
    if fmt == "json":
        out.write(io.dumps({
            "matrix": S.matrix,
            "rows": [{"block": r.block, "rhs": r.rhs, "normal": r.normal} for r in S.row_labels],
            "cols": [{"kind": c.kind, "generator": c.generator} for c in S.col_labels],
        }))
        return
    comments = [f"row {i + 1}: {r.block} {format_scalar(r.rhs)} {io.fmt_vec(r.normal)}"
                for i, r in enumerate(S.row_labels)]
    comments += [f"col {j + 1}: {c.kind} {io.fmt_vec(c.generator)}" for j, c in enumerate(S.col_labels)]
    out.write(io.format_matrix(S.matrix, comments, ncols=len(S.col_labels)))


def cmd_slack(args, out):
    rep, P = _load_polyhedron(args.input)
    _emit_slack(_slack_for(args, rep, P), out, args.format)
    return EXIT_OK


def cmd_rank_check(args, out):
    _, P = _load_polyhedron(args.input)
    rep = check_rank_theorem(P)
    if args.format == "json":
        out.write(io.dumps(rep.__dict__))
    else:
        out.write(f"rank {rep.rank}\nexpected {rep.expected}\napplicable {str(rep.applicable).lower()}\n")
        out.write(f"holds {'n/a' if rep.holds is None else str(rep.holds).lower()}\n")
        if rep.note:
            out.write(f"note {rep.note}\n")
    return EXIT_NEGATIVE if rep.holds is False else EXIT_OK


def cmd_nnrank(args, out):
    M = io.read_matrix(args.input)
    warm = None
    if args.warm:
        warm = (io.read_matrix(args.warm[0]), io.read_matrix(args.warm[1]))
    dec = nn_rank_decide(M, args.k, budget=args.budget_iters, seed=args.seed, restarts=args.restarts,
                         warm_start=warm)
    cert_text = ""
    if dec.verdict == "yes":
        U, V = factor_matrices(dec.factorization)
        cert_text = "# U\n" + io.format_matrix(U) + "# V\n" + io.format_matrix(V, ncols=len(M[0]))
    elif dec.bound is not None:
        cert_text = "".join(f"# {line}\n" for line in dec.bound.render().splitlines())
    if args.format == "json":
        doc = {"verdict": dec.verdict, "k": args.k, "bound": dec.bound.to_dict() if dec.bound else None}
        if dec.verdict == "yes":
            doc["U"], doc["V"] = factor_matrices(dec.factorization)
        out.write(io.dumps(doc))
    else:
        out.write(f"verdict {dec.verdict}\n")
        if dec.bound is not None:
            out.write(f"lower bound {dec.bound.rule} >= {dec.bound.value}\n")
        r = shitov_report(M)
        if r is not None:
            out.write(f"rank-three upper bound {r}\n")
        if not args.cert_out:
            out.write(cert_text)
    if args.cert_out:
        with open(args.cert_out, "w") as fh:
            fh.write(cert_text)
    return {"yes": EXIT_OK, "no": EXIT_NEGATIVE}.get(dec.verdict, EXIT_UNKNOWN)


def cmd_psd_bound(args, out):
    _, P = _load_polyhedron(args.input)
    b = psd_rank_lower_bound(P)
    S = canonical_slack(P)
    blk = block_augmentation_bound(S.matrix, cone="psd") if len(S.matrix) <= 16 and len(S.col_labels) <= 16 else None
    if args.format == "json":
        out.write(io.dumps({"bound": b, "note": "induction over facets", "slack_bound": blk.to_dict() if blk else None}))
    else:
        out.write(f"psd rank >= {b}\nnote induction over facets, one per dimension\n")
        if blk is not None:
            out.write("".join(f"# {line}\n" for line in blk.render().splitlines()))
    return EXIT_OK


def cmd_verify_fact(args, out):
    S = io.read_matrix(args.matrix)
    U = io.read_matrix(args.U)
    V = io.read_matrix(args.V)
    res = verify_factorization(S, orthant_factorization(U, V))
    if args.format == "json":
        out.write(io.dumps({"ok": res.ok, "violation": res.violation}))
    else:
        out.write("accept\n" if res.ok else f"reject {res.violation}\n")
    return EXIT_OK if res.ok else EXIT_NEGATIVE


def cmd_lift_build(args, out):
    rep, P = _load_polyhedron(args.input)
    U = io.read_matrix(args.U)
    V = io.read_matrix(args.V)
    F = orthant_factorization(U, V)
    if not P.lines and len(P.points) == 1 and is_zero(P.points[0]):
        slack = None
        if args.gens:
            h = rep if isinstance(rep, HRep) else P.hrep
            slack = build_slack(P, h, io.read_representation(args.gens), keep_order=True)
        lift = build_cone_lift(P, F, slack)
    else:
        if args.gens:
            h = rep if isinstance(rep, HRep) else P.hrep
            slack = build_slack(P, h, io.read_representation(args.gens), keep_order=True)
            lift = build_lift(P, None, F, slack)
        else:
            lift = build_lift(P, compute_d_sets(P), F)
    out.write(io.format_lift(lift))
    return EXIT_OK


def cmd_lift_verify(args, out):
    _, P = _load_polyhedron(args.input)
    lift = io.read_lift(args.lift)
    rep = verify_lift(P, lift)
    if args.format == "json":
        out.write(io.dumps({"ok": rep.ok, "proper": rep.proper,
                            "conditions": [c.__dict__ for c in rep.conditions]}))
    else:
        for c in rep.conditions:
            out.write(f"({c.name}) {'pass' if c.passed else 'FAIL'} [{c.level}] {c.detail}\n")
        if rep.proper is not None:
            out.write(f"proper {str(rep.proper).lower()}\n")
    return EXIT_OK if rep.ok else EXIT_NEGATIVE


def cmd_identify(args, out):
    M = io.read_matrix(args.input)
    try:
        res = is_slack_matrix(M)
    except RankTooSmall as exc:
        out.write(f"out of scope: {exc}\n")
        return EXIT_NEGATIVE
    if args.format == "json":
        out.write(io.dumps(res.__dict__))
    else:
        out.write(("accept" if res.accepted else "reject") + f" {res.reason}\n")
        if res.zero_one is not None:
            out.write(f"zero-one {io.fmt_vec(res.zero_one)}\n")
        if res.witness is not None:
            out.write(f"witness {io.fmt_vec(res.witness)}\n")
        out.write("note cone criterion is an external criterion\n")
        for note in res.notes[1:]:
            out.write(f"note {note}\n")
    return EXIT_OK if res.accepted else EXIT_NEGATIVE


def _affine_expr(coeffs, const, names) -> str:
    terms = [format_scalar(const)]
    for c, nm in zip(coeffs, names):
        if c != 0:
            terms.append(f"({format_scalar(c)})*{nm}")
    return " + ".join(terms)


def cmd_eliminate(args, out):
    rep = io.read_representation(args.input)
    if not isinstance(rep, HRep):
        raise PolyliftError("eliminate needs an H file")
    U = io.read_matrix(args.U)
    pres = eliminate_presentation(None, rep, U)
    N = len(U[0])
    names = [f"y{j + 1}" for j in range(N)]
    if args.format == "json":
        out.write(io.dumps({"pivots": [names[p] for p in pres.pivots], "equations": pres.equations,
                            "offset": pres.offset, "basis": pres.basis}))
        return EXIT_OK
    for row, p in zip(pres.equations, pres.pivots):
        coeffs = [-c if j != p else 0 for j, c in enumerate(row[:-1])]
        out.write(f"{names[p]} = {_affine_expr(coeffs, row[-1], names)}\n")
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the result to this file instead of standard output")
    common.add_argument("--threads", type=int, default=1, help="accepted for compatibility; work is sequential")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    parser = argparse.ArgumentParser(prog="polylift", description="Exact polyhedral lifts and slack matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("convert", cmd_convert, "convert between H and V form").add_argument("input")
    add("polar", cmd_polar, "polar set in H form").add_argument("input")
    add("dsets", cmd_dsets, "D1, D2, D3 and D32").add_argument("input")
    p = add("slack", cmd_slack, "slack matrix")
    p.add_argument("input")
    p.add_argument("--canonical", action="store_true")
    p.add_argument("--gens", help="V file fixing the column order")
    p.add_argument("--keep-order", action="store_true", help="keep inequality order instead of S1/S2/S3 blocks")
    add("rank-check", cmd_rank_check, "slack rank against dim(C0) + 1").add_argument("input")
    p = add("nnrank", cmd_nnrank, "decide nonnegative rank <= k")
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget-iters", type=int, default=10**6)
    p.add_argument("--restarts", type=int, default=10)
    p.add_argument("--warm", nargs=2, metavar=("U", "V"))
    p.add_argument("--cert-out")
    add("psd-bound", cmd_psd_bound, "psd rank lower bound").add_argument("input")
    p = add("verify-fact", cmd_verify_fact, "verify S = U V exactly")
    p.add_argument("matrix")
    p.add_argument("U")
    p.add_argument("V")
    p = add("lift-build", cmd_lift_build, "lift from an orthant factorization")
    p.add_argument("input")
    p.add_argument("U")
    p.add_argument("V")
    p.add_argument("--gens", help="V file giving the generator order of the columns of V")
    p = add("lift-verify", cmd_lift_verify, "verify a lift")
    p.add_argument("input")
    p.add_argument("lift")
    add("identify-slack", cmd_identify, "is the matrix a slack matrix?").add_argument("input")
    p = add("eliminate", cmd_eliminate, "eliminate x from H x + U y = d")
    p.add_argument("input")
    p.add_argument("U")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = _Output(args.out)
    try:
        code = args.func(args, out)
    except (PolyliftError, ValueError, OSError, ZeroDivisionError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"error: {type(exc).__name__}: {msg}", file=sys.stderr)
        return EXIT_INPUT
    out.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())

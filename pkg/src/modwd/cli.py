"""Command-line front end.

Every invocation prints the context header line first, then the report.
Exit codes: 0 on success, 1 on domain errors (named error codes, no
tracebacks), 2 when a verification finds a mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import dsl
from .deligne import cv_map, dsum, dual_class, tensor_ss, twist_class
from .errors import ModwdError
from .factors import epsilon_factor, gamma_factor, l_factor
from .field import make_ctx
from .gln import c_map, v_map
from .matrixmodel import decompose, oracle_tensor_ss, realize
from . import verify as verify_mod


def _build_parser():
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--ell", type=int, help="residue characteristic ell")
    shared.add_argument("--q", type=int, help="residual cardinality q")
    shared.add_argument("--field-deg", type=int, default=1,
                        help="requested extension degree k (auto-doubled for sqrt q)")
    shared.add_argument("--fusion-file", help="fusion table file for abstract pairs")
    shared.add_argument("--format", choices=("text", "json"), default="text")

    p = argparse.ArgumentParser(
        prog="modwd",
        description="exact calculus for modular Weil-Deligne representations")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("normalize", parents=[shared])
    sp.add_argument("expr")
    sp = sub.add_parser("dsum", parents=[shared])
    sp.add_argument("expr")
    sp.add_argument("expr2")
    sp = sub.add_parser("dual", parents=[shared])
    sp.add_argument("expr")
    sp = sub.add_parser("twist", parents=[shared])
    sp.add_argument("expr")
    sp.add_argument("--nu", type=int, default=0, help="power of nu to twist by")
    sp.add_argument("--chi", help="unramified character expression chi(t=...)")
    sp = sub.add_parser("tensor", parents=[shared])
    sp.add_argument("expr")
    sp.add_argument("expr2")
    sp = sub.add_parser("cv", parents=[shared])
    sp.add_argument("expr")
    sp = sub.add_parser("factors", parents=[shared])
    sp.add_argument("expr")
    sp = sub.add_parser("realize", parents=[shared])
    sp.add_argument("expr")
    sp = sub.add_parser("decompose", parents=[shared])
    sp.add_argument("--file", help="matrix dump file (default: stdin)")
    sp = sub.add_parser("oracle", parents=[shared])
    sp.add_argument("expr")
    sp.add_argument("expr2")
    sp = sub.add_parser("correspond", parents=[shared])
    sp.add_argument("expr")
    sp = sub.add_parser("verify", parents=[shared])
    sp.add_argument("what", choices=("all", "witness", "preservation",
                                     "multiplicativity", "roundtrip", "tensor",
                                     "epsilon", "correspondence", "profile"))
    sp.add_argument("--grid", choices=("small", "full"), default="small")
    return p


def _need_ctx(args):
    if args.ell is None or args.q is None:
        raise ModwdError("this command needs --ell and --q")
    return make_ctx(args.ell, args.q, args.field_deg)


def _load_table(args, ctx):
    if not args.fusion_file:
        return None
    with open(args.fusion_file, "r", encoding="utf-8") as fh:
        return dsl.load_fusion_table(fh.read(), ctx)


def _emit(args, ctx, payload, out):
    """payload: list of (key, value-string) pairs, emitted in order."""
    if args.format == "json":
        doc = {"ctx": {"ell": ctx.ell, "q": ctx.q_residue, "k": ctx.k}}
        doc.update({k: v for k, v in payload})
        out.write(json.dumps(doc, sort_keys=False) + "\n")
    else:
        out.write(ctx.header() + "\n")
        for k, v in payload:
            if k == "raw":
                out.write(v)
            else:
                out.write(f"{k}= {v}\n")


_VERIFY_GRIDS = {
    "small": dict(max_segments=2, max_len=3, roundtrip_dim=6, rmax=2,
                  eps_dim=6, nmax=3, profile_nmax=4, randoms=100),
    "full": dict(max_segments=3, max_len=4, roundtrip_dim=12, rmax=4,
                 eps_dim=12, nmax=5, profile_nmax=6, randoms=1000),
}

_VERIFY_PARAMS = ((5, 2), (3, 2), (2, 3), (3, 4))


def _run_verify(what, grid, out):
    g = _VERIFY_GRIDS[grid]
    summaries = []
    if what in ("all", "witness"):
        summaries.append(verify_mod.run_witness())
    if what in ("all", "preservation"):
        for ell, q in _VERIFY_PARAMS:
            summaries.append(verify_mod.run_preservation(
                ell, q, max_segments=g["max_segments"], max_len=g["max_len"],
                processes=2))
    if what in ("all", "multiplicativity"):
        summaries.append(verify_mod.run_multiplicativity(nmax=g["nmax"]))
    if what in ("all", "roundtrip"):
        for ell, q in ((5, 2), (2, 3)):
            summaries.append(verify_mod.run_roundtrip(
                ell, q, max_dim=g["roundtrip_dim"], processes=2))
            summaries.append(verify_mod.run_random_transport(
                ell, q, count=g["randoms"]))
    if what in ("all", "tensor"):
        for ell, q in _VERIFY_PARAMS:
            summaries.append(verify_mod.run_tensor_oracle(ell, q, rmax=g["rmax"]))
    if what in ("all", "epsilon"):
        for ell, q in ((5, 2), (2, 3)):
            summaries.append(verify_mod.run_epsilon(ell, q, max_dim=g["eps_dim"]))
    if what in ("all", "correspondence"):
        for ell, q in _VERIFY_PARAMS:
            summaries.append(verify_mod.run_correspondence(
                ell, q, max_segments=g["max_segments"], max_len=g["max_len"]))
    if what in ("all", "profile"):
        summaries.append(verify_mod.run_profile_law(nmax=g["profile_nmax"]))
    ok = True
    for s in summaries:
        out.write(s.line() + "\n")
        ok = ok and s.passed
    out.write(("ALL PASS" if ok else "MISMATCH") + "\n")
    return 0 if ok else 2


def run(argv, out=None) -> int:
    out = out or sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return _run_verify(args.what, args.grid, out)
        ctx = _need_ctx(args)
        table = _load_table(args, ctx)
        if args.command == "normalize":
            a = dsl.parse_class(args.expr, ctx)
            _emit(args, ctx, [("class", repr(a)), ("dim", str(a.dim()))], out)
        elif args.command == "dsum":
            a = dsl.parse_class(args.expr, ctx)
            b = dsl.parse_class(args.expr2, ctx)
            _emit(args, ctx, [("class", repr(dsum(a, b)))], out)
        elif args.command == "dual":
            a = dsl.parse_class(args.expr, ctx)
            _emit(args, ctx, [("class", repr(dual_class(a)))], out)
        elif args.command == "twist":
            a = dsl.parse_class(args.expr, ctx)
            chi = dsl.parse_irr(args.chi, ctx) if args.chi else None
            _emit(args, ctx, [("class", repr(twist_class(a, nu_power=args.nu,
                                                         chi=chi)))], out)
        elif args.command == "tensor":
            a = dsl.parse_class(args.expr, ctx)
            b = dsl.parse_class(args.expr2, ctx)
            _emit(args, ctx, [("class", repr(tensor_ss(a, b, table)))], out)
        elif args.command == "cv":
            a = dsl.parse_class(args.expr, ctx)
            _emit(args, ctx, [("class", repr(cv_map(a)))], out)
        elif args.command == "factors":
            a = dsl.parse_class(args.expr, ctx)
            payload = [("L", repr(l_factor(a))),
                       ("GAMMA", repr(gamma_factor(a))),
                       ("EPSILON", repr(epsilon_factor(a)))]
            _emit(args, ctx, payload, out)
        elif args.command == "realize":
            a = dsl.parse_class(args.expr, ctx)
            m = realize(a, ctx)
            if args.format == "json":
                _emit(args, ctx, [("matrix", dsl.format_matrix(m, ctx))], out)
            else:
                out.write(dsl.format_matrix(m, ctx))
        elif args.command == "decompose":
            text = (open(args.file, "r", encoding="utf-8").read()
                    if args.file else sys.stdin.read())
            m = dsl.parse_matrix(text, ctx)
            _emit(args, ctx, [("class", repr(decompose(m, ctx)))], out)
        elif args.command == "oracle":
            a = dsl.parse_class(args.expr, ctx)
            b = dsl.parse_class(args.expr2, ctx)
            formal = tensor_ss(a, b, table)
            orc = oracle_tensor_ss(a, b)
            verdict = "MATCH" if formal == orc else "MISMATCH"
            _emit(args, ctx, [("formal", repr(formal)), ("oracle", repr(orc)),
                              ("verdict", verdict)], out)
            if verdict != "MATCH":
                return 2
        elif args.command == "correspond":
            pi = dsl.parse_rep(args.expr, ctx)
            _emit(args, ctx, [("rep", repr(pi)),
                              ("V", repr(v_map(pi))),
                              ("C", repr(c_map(pi)))], out)
        return 0
    except ModwdError as exc:
        out.write(f"error {exc.code}: {exc}\n")
        return 1


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

"""Command-line entry point.

Exit codes: 0 success, 1 a mathematical check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import pbw, reps, uqsl, verify
from .parser import ParseError, format_element, parse_expression
from .scalars import make_domain

OK, FAIL, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2, default=_json_default))
    else:
        print(text)


def _json_default(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, tuple):
        return list(x)
    return str(x)


def _cx(z: complex) -> str:
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _load_spec(path: str, args) -> reps.RepSpec:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    try:
        spec = reps.RepSpec.loads(text)
        spec.validate()
    except reps.SpecError as e:
        raise InputError(f"{path}: invalid spec\n" + "\n".join(f"  - {p}" for p in e.problems)) from None
    for flag in ("k", "s"):
        val = getattr(args, flag, None)
        if val is not None and val != getattr(spec, flag):
            raise InputError(f"--{flag} {val} conflicts with {flag} = {getattr(spec, flag)} in {path}")
    return spec


def _spec_from_args(args) -> reps.RepSpec:
    if args.spec is not None:
        return _load_spec(args.spec, args)
    if args.random is None:
        raise InputError("give a spec file or --random N")
    if args.random < 2:
        raise InputError(f"--random: n must be >= 2, got {args.random}")
    k = args.k or 3
    try:
        if args.cls == "minimal":
            return reps.random_minimal_spec(args.random, k, args.seed, args.s or 1)
        return reps.random_cyclic_spec(args.random, k, args.seed, args.s or 1)
    except ValueError as e:
        raise InputError(str(e)) from None


def _build(spec):
    try:
        return reps.build(spec)
    except reps.DegenerateDenominator as e:
        raise InputError(f"degenerate parameters: {e}") from None


# -- commands -----------------------------------------------------------------


def cmd_normalize(args) -> int:
    try:
        x = parse_expression(args.expr)
    except ParseError as e:
        caret = " " * (e.column - 1) + "^"
        raise InputError(f"syntax error at column {e.column}: {e.message}\n  {args.expr}\n  {caret}") from None
    nf = pbw.normal_form(x)
    if args.domain == "laurent":
        text = format_element(nf)
        terms = [{"word": [str(g) for g in w], "coeff": nf.terms[w].fmt()}
                 for w in sorted(nf.terms, key=lambda w: [g.key for g in w])]
    else:
        if args.k is None:
            raise InputError(f"--domain {args.domain} needs --k")
        try:
            dom = make_domain(args.domain, args.k, args.s or 1)
        except ValueError as e:
            raise InputError(str(e)) from None
        mapped = nf.map_coeffs(dom, dom.from_laurent)
        terms = [{"word": [str(g) for g in w], "coeff": dom.fmt(mapped.terms[w])}
                 for w in sorted(mapped.terms, key=lambda w: [g.key for g in w])]
        text = " + ".join(f"({t['coeff']})*{'*'.join(t['word']) or '1'}" for t in terms) or "0"
    _emit(args, {"input": args.expr, "domain": args.domain, "normal_form": text, "terms": terms}, text)
    return OK


def cmd_confluence(args) -> int:
    if not 3 <= args.n <= 7:
        raise InputError(f"--n must be in 3..7, got {args.n}")
    rep = pbw.check_confluence(args.n)
    payload = {"n": args.n, "triples": rep.triples, "types": rep.type_count,
               "reference_type_count": rep.reference_type_count, "resolvable": rep.ok,
               "failures": [[str(g) for g in t[0]] for t in rep.failures]}
    _emit(args, payload, rep.summary())
    return OK if rep.ok else FAIL


def cmd_build_rep(args) -> int:
    spec = _spec_from_args(args)
    rm = _build(spec)
    payload = {"spec": spec.to_json(), "dim": rm.dim}
    lines = [f"class {spec.cls}, n={spec.n}, k={spec.k}, s={spec.s}: dimension {rm.dim}"]
    code = OK
    if args.matrices:
        payload["matrices"] = rm.to_json()["matrices"]
        payload["basis"] = [str(t) for t in rm.tableaux]
    if args.check:
        rep = verify.check_relations(rm, args.tol)
        payload["relations"] = rep.to_json()
        lines.append(f"relations: {'pass' if rep.ok else 'FAIL'} (max residual {rep.max_residual:.3g}, tol {args.tol:g})")
        code = OK if rep.ok else FAIL
    if args.emit_spec and not args.json:
        lines.append(spec.dumps())
    _emit(args, payload, "\n".join(lines))
    return code


def cmd_verify_rep(args) -> int:
    spec = _spec_from_args(args)
    rm = _build(spec)
    rel = verify.check_relations(rm, args.tol)
    lines = [f"dimension {rm.dim}",
             f"relations: {'pass' if rel.ok else 'FAIL'} (max residual {rel.max_residual:.3g})"]
    payload = {"dim": rm.dim, "relations": rel.to_json()}
    ok = rel.ok
    reps.lift_all_roots(rm)
    central = {}
    for r in range(2, spec.n + 1):
        for l in range(1, r):
            flag, lam = verify.check_central_action(rm, r, l, args.tol)
            central[f"{r},{l}"] = {"scalar": flag, "value": lam}
            ok &= flag
    payload["central"] = central
    lines.append(f"central elements scalar: {all(v['scalar'] for v in central.values())}")
    if rm.dim <= verify.MAX_SYLVESTER_DIM:
        try:
            cd = verify.commutant_dimension(rm)
            payload["commutant_dimension"] = cd
            lines.append(f"commutant dimension: {cd}")
            ok &= cd == 1
        except verify.IllConditioned as e:
            payload["commutant_dimension"] = None
            lines.append(f"commutant dimension: undecided ({e})")
            ok = False
    else:
        lines.append(f"commutant dimension: skipped (dimension above {verify.MAX_SYLVESTER_DIM})")
    payload["ok"] = bool(ok)
    _emit(args, payload, "\n".join(lines))
    return OK if ok else FAIL


def cmd_branch(args) -> int:
    spec = _spec_from_args(args)
    if spec.cls != "cyclic":
        raise InputError("branch needs a cyclic spec")
    rep = verify.check_branching(_build(spec), args.tol if args.tol_set else 1e-10)
    text = (f"{rep.blocks} blocks (expected {rep.expected_blocks}), sizes {sorted(set(rep.block_dims))}; "
            f"max block mismatch {rep.max_mismatch:.3g}, max off-block {rep.max_off_block:.3g}: "
            f"{'pass' if rep.ok else 'FAIL ' + rep.message}")
    _emit(args, rep.to_json(), text)
    return OK if rep.ok else FAIL


def cmd_central(args) -> int:
    spec = _spec_from_args(args)
    rm = reps.lift_all_roots(_build(spec))
    pairs = [(args.r, args.l)] if args.r is not None else [(r, l) for r in range(2, spec.n + 1) for l in range(1, r)]
    out, lines, ok = {}, [], True
    for r, l in pairs:
        if not (spec.n >= r > l >= 1):
            raise InputError(f"need n >= r > l >= 1, got r={r}, l={l}")
        flag, lam = verify.check_central_action(rm, r, l, args.tol)
        ok &= flag
        out[f"{r},{l}"] = {"scalar": flag, "value": lam}
        lines.append(f"C(I({r},{l})): {'scalar ' + _cx(lam) if flag else 'NOT scalar'}")
    _emit(args, {"central": out, "ok": ok}, "\n".join(lines))
    return OK if ok else FAIL


def cmd_equiv(args) -> int:
    s1, s2 = _load_spec(args.spec1, args), _load_spec(args.spec2, args)
    r1, r2 = _build(s1), _build(s2)
    if r1.n != r2.n:
        raise InputError("specs are for different n")
    if r1.dim != r2.dim:
        _emit(args, {"intertwiner_dimension": 0, "equivalent": False}, "dimensions differ: not equivalent")
        return OK
    try:
        space = verify.intertwiner_space(r1, r2)
    except ValueError as e:
        raise InputError(str(e)) from None
    except verify.IllConditioned as e:
        _emit(args, {"error": str(e)}, f"undecided: {e}")
        return FAIL
    invertible = any(abs(np.linalg.det(A)) > 1e-8 * np.linalg.norm(A) ** A.shape[0] for A in space)
    payload = {"intertwiner_dimension": len(space), "equivalent": bool(invertible)}
    _emit(args, payload, f"intertwiner dimension {len(space)}: {'equivalent' if invertible else 'not equivalent'}")
    return OK


def cmd_dominant(args) -> int:
    spec = _spec_from_args(args)
    try:
        probs = verify.dominance_problems(spec)
    except reps.SpecError as e:
        raise InputError(str(e)) from None
    text = "dominant" if not probs else "not dominant:\n" + "\n".join(f"  - {p}" for p in probs)
    _emit(args, {"dominant": not probs, "problems": probs}, text)
    return OK if not probs else FAIL


def cmd_check_phi(args) -> int:
    if args.n not in (3, 4):
        raise InputError(f"--n must be 3 or 4, got {args.n}")
    rep = uqsl.check_homomorphism(args.n)
    payload = rep.to_json()
    lines = [f"n={args.n}: {len(rep.checked)} relations, "
             f"{'all residuals zero' if rep.ok else str(len(rep.failures)) + ' nonzero'}"]
    ok = rep.ok
    if args.n == 3:
        rank, count = uqsl.phi_rank_check()
        payload["rank_check"] = {"rank": rank, "monomials": count}
        lines.append(f"rank of images of {count} monomials of degree <= 2: {rank}")
        ok &= rank == count
    _emit(args, payload, "\n".join(lines))
    return OK if ok else FAIL


# -- argument parsing ------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, help="order of the root of unity (odd)")
    common.add_argument("--s", type=int, help="root selector: q = exp(2 pi i s / k)")
    common.add_argument("--tol", type=float, default=None, help="numerical tolerance (default 1e-9)")
    common.add_argument("--domain", choices=("laurent", "cyclotomic", "complex"), default="laurent")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--json", action="store_true", help="machine-readable output")

    p = argparse.ArgumentParser(prog="uqso", description="Twisted q-deformed so_n at roots of unity.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normalize", parents=[common], help="normal form of an expression")
    s.add_argument("expr")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("confluence", parents=[common], help="resolve all overlap ambiguities")
    s.add_argument("--n", type=int, default=5)
    s.set_defaults(func=cmd_confluence)

    def spec_source(s):
        s.add_argument("spec", nargs="?", help="RepSpec JSON file ('-' for stdin)")
        s.add_argument("--random", type=int, metavar="N", help="use a random dominant spec for this n")
        s.add_argument("--class", dest="cls", choices=("cyclic", "minimal"), default="cyclic")

    s = sub.add_parser("build-rep", parents=[common], help="build representation matrices")
    spec_source(s)
    s.add_argument("--check", action="store_true", help="also check the defining relations")
    s.add_argument("--matrices", action="store_true", help="include matrices in --json output")
    s.add_argument("--emit-spec", action="store_true", help="print the spec used")
    s.set_defaults(func=cmd_build_rep)

    for name, func, hlp in (("verify-rep", cmd_verify_rep, "relations, central action, commutant"),
                            ("branch", cmd_branch, "restriction to the smaller algebra"),
                            ("dominant", cmd_dominant, "dominance of the parameters")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        spec_source(s)
        s.set_defaults(func=func)

    s = sub.add_parser("central", parents=[common], help="central element action")
    spec_source(s)
    s.add_argument("--r", type=int)
    s.add_argument("--l", type=int)
    s.set_defaults(func=cmd_central)

    s = sub.add_parser("equiv", parents=[common], help="intertwiners between two representations")
    s.add_argument("spec1")
    s.add_argument("spec2")
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("check-phi", parents=[common], help="embedding into U_q(sl_n)")
    s.add_argument("--n", type=int, default=3)
    s.set_defaults(func=cmd_check_phi)
    return p


def run(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    args.tol_set = args.tol is not None
    if args.tol is None:
        args.tol = verify.DEFAULT_TOL
    if args.tol <= 0:
        print("error: --tol must be positive", file=sys.stderr)
        return INPUT_ERROR
    try:
        return args.func(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

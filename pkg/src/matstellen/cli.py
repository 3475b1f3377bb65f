"""Command line front end.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import certificates as C
from .matpoly import det_plus_lambda_coeffs, eval_charpoly_at
from .matpoly import charpoly as mat_charpoly
from .problem import ProblemError, ProblemFile, load_problem
from .reduction import DEFAULT_MAX_GENERATORS, DEFAULT_MAX_SIZE, SizeCapExceeded, full_reduce, pd_reduce
from .semidef import (
    eval_mat,
    is_pd,
    is_psd,
    parse_point,
    point_in_K,
    principal_minors,
    psd_by_coefficients,
    regions_agree,
    sturm_negative_count,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class InputError(Exception):
    pass


def _q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _pt(p) -> str:
    return "(" + ", ".join(_q(c) for c in p) + ")"


def _subset(s) -> str:
    return "{" + ",".join(str(i + 1) for i in s) + "}"


def _path(prob_names, path) -> str:
    parts = [prob_names[path[0]]]
    for p in path[1:]:
        parts.append(p if isinstance(p, str) else f"({p[0] + 1},{p[1] + 1})")
    return "/".join(parts)


# ---------------------------------------------------------------------------
# commands: each returns (exit code, report dict)


def cmd_reduce(prob: ProblemFile, args) -> tuple[int, dict]:
    names = prob.generators()
    gens = [prob.block(n).as_sym() for n in names]
    tree = full_reduce(gens, max_size=args.max_size, max_generators=args.max_generators,
                       verify=not args.no_eager_verify)
    levels = []
    for lvl in tree.levels:
        nodes = []
        for node in lvl:
            entry = {"path": _path(names, node.path), "size": node.matrix.n, "matrix": str(node.matrix)}
            red = node.reduction
            if red is not None:
                entry["t"] = str(red.t)
                entry["aggregate_ok"] = red.aggregate_ok
                entry["steps"] = [
                    {"i": s.i + 1, "j": s.j + 1, "a_tilde": str(s.a_tilde), "b": str(s.schur_block),
                     "diagonal_ok": s.diagonal_ok, "restore_ok": s.restore_ok}
                    for s in red.steps
                ]
            nodes.append(entry)
        levels.append({"size": lvl[0].matrix.n, "nodes": nodes})
    report = {
        "command": "reduce",
        "vars": list(prob.vars),
        "generators": names,
        "eager_verify": tree.eager,
        "levels": levels,
        "scalar_set": [{"poly": str(p), "provenance": _path(names, tree.provenance[p])} for p in tree.scalar_set],
        "verified": tree.verified if tree.eager else None,
    }
    return (EXIT_OK if tree.verified else EXIT_FAIL), report


def cmd_pd_reduce(prob: ProblemFile, args) -> tuple[int, dict]:
    out = []
    for n in prob.generators():
        out.append({"generator": n, "diagonal": [str(p) for p in pd_reduce(prob.block(n).as_sym())]})
    return EXIT_OK, {"command": "pd-reduce", "vars": list(prob.vars), "results": out}


def _verify_block(prob: ProblemFile, block) -> C.VerifyReport:
    S = prob.generator_set()
    cert = lambda part: prob.certificate(block, part)  # noqa: E731
    F = prob.block(block.target) if block.target else None
    if block.kind == "pd":
        return C.verify_pd_cert(F.as_sym(), cert("beta"), cert("c"))
    if block.kind == "psd":
        return C.verify_psd_cert(F.as_sym(), block.power, cert("beta"), cert("c"))
    if block.kind == "null":
        return C.verify_null_cert(F.as_sym(), block.power, cert("c"))
    if block.kind == "realnull":
        return C.verify_real_null_cert(F, block.power, cert("sos"), block.ideal_terms)
    return C.membership_witness_minusI(S, cert("c"))


def cmd_verify(prob: ProblemFile, args) -> tuple[int, dict]:
    blocks = [b for b in prob.certs if args.kind is None or b.kind == args.kind]
    if not blocks:
        raise InputError("no certificate blocks" + (f" of kind {args.kind}" if args.kind else ""))
    results = []
    ok = True
    for b in blocks:
        try:
            rep = _verify_block(prob, b)
        except C.MalformedCertificate as e:
            raise InputError(f"cert {b.name}: {e}") from e
        except ValueError as e:
            raise InputError(f"cert {b.name}: {e}") from e
        ok &= rep.verdict
        entry = {"name": b.name, "kind": b.kind, "target": b.target, "verdict": rep.verdict,
                 "checks": dict(rep.checks)}
        if rep.residuals:
            entry["residuals"] = {k: str(v) for k, v in rep.residuals.items()}
        if rep.problems:
            entry["problems"] = list(rep.problems)
        if rep.info:
            entry["info"] = dict(rep.info)
        results.append(entry)
    return (EXIT_OK if ok else EXIT_FAIL), {"command": "verify", "results": results, "all_pass": ok}


def _point_report(prob: ProblemFile, p, names):
    out = []
    for n in names:
        m = eval_mat(prob.block(n), p)
        minors = principal_minors(m)
        out.append({"name": n, "value": str(m), "minors": {_subset(s): _q(v) for s, v in minors.items()},
                    "psd": is_psd(m)})
    return out


def cmd_check_point(prob: ProblemFile, args) -> tuple[int, dict]:
    gens = prob.generators()
    targets = prob.targets()
    S = prob.generator_set()
    if args.point is not None:
        p = parse_point(args.point)
        if len(p) != len(prob.vars):
            raise InputError(f"point {args.point!r} has dimension {len(p)}, file declares {len(prob.vars)} vars")
        gen_rep = _point_report(prob, p, gens)
        in_k = all(g["psd"] for g in gen_rep)
        report = {"command": "check-point", "point": _pt(p), "in_K": in_k, "generators": gen_rep}
        if targets:
            report["targets"] = _point_report(prob, p, targets)
        return (EXIT_OK if in_k else EXIT_FAIL), report
    # sampled mode: targets must be PSD at every sampled point of K
    spec = _sampler(prob, args)
    total = in_k = 0
    failures = []
    for p in spec.points(len(prob.vars)):
        total += 1
        if not point_in_K(S, p):
            continue
        in_k += 1
        bad = [t for t in targets if not is_psd(eval_mat(prob.block(t), p))]
        if bad:
            failures.append({"point": _pt(p), "targets": bad})
    report = {"command": "check-point", "mode": "sample", "seed": spec.seed, "total": total, "in_K": in_k,
              "targets": targets, "failures": failures}
    return (EXIT_OK if not failures else EXIT_FAIL), report


def _sampler(prob: ProblemFile, args):
    return prob.sampler(seed=args.seed, lo=_frac(args.lo), hi=_frac(args.hi), grid_steps=args.grid_steps,
                        random_count=args.random_count)


def _frac(x):
    return None if x is None else Fraction(x)


def cmd_compare(prob: ProblemFile, args) -> tuple[int, dict]:
    S = prob.generator_set()
    if args.scalars:
        other = load_problem(args.scalars)
        if other.vars != prob.vars:
            raise InputError(f"scalar file vars {other.vars} differ from {prob.vars}")
        B = [other.scalars[n] for n in other.order if n in other.scalars]
        source = args.scalars
    else:
        names = prob.generators()
        gens = [prob.block(n).as_sym() for n in names]
        B = full_reduce(gens, max_size=args.max_size, max_generators=args.max_generators,
                        verify=not args.no_eager_verify).scalar_set
        source = "reduction"
    spec = _sampler(prob, args)
    rep = regions_agree(S, B, spec, vars=prob.vars)
    report = {
        "command": "compare",
        "scalar_source": source,
        "scalars": [str(b) for b in B],
        "seed": spec.seed,
        "total": rep.total,
        "agreements": rep.agreements,
        "agreement_percent": _percent(rep.agreements, rep.total),
        "disagreements": [{"point": _pt(p), "in_K": lhs, "scalars_nonneg": rhs} for p, lhs, rhs in rep.disagreements],
    }
    return (EXIT_OK if rep.all_agree else EXIT_FAIL), report


def _percent(a, b) -> str:
    if not b:
        return "100.00"
    q = Fraction(100 * a, b)
    return f"{float(q):.2f}"


def cmd_charpoly(prob: ProblemFile, args) -> tuple[int, dict]:
    out = []
    ok = True
    for n in prob.order:
        m = prob.block(n)
        c = mat_charpoly(m)
        ch = eval_charpoly_at(c, m).is_zero()
        ok &= ch
        out.append({"name": n, "charpoly": [str(x) for x in c],
                    "det_plus_lambda": [str(x) for x in det_plus_lambda_coeffs(m)], "cayley_hamilton": ch})
    return (EXIT_OK if ok else EXIT_FAIL), {"command": "charpoly", "vars": list(prob.vars), "results": out}


def cmd_psd_check(prob: ProblemFile, args) -> tuple[int, dict]:
    p = parse_point(args.point) if args.point is not None else ()
    if len(p) != len(prob.vars):
        raise InputError("psd-check needs --point matching the declared vars")
    out = []
    ok = True
    for n in prob.order:
        m = eval_mat(prob.block(n), p)
        if not m.symmetric:
            continue
        psd = is_psd(m)
        ok &= psd
        out.append({"name": n, "value": str(m), "psd": psd, "pd": is_pd(m),
                    "coefficient_test": psd_by_coefficients(m), "negative_eigenvalues": sturm_negative_count(m),
                    "minors": {_subset(s): _q(v) for s, v in principal_minors(m).items()}})
    return (EXIT_OK if ok else EXIT_FAIL), {"command": "psd-check", "point": _pt(p), "results": out}


COMMANDS = {
    "reduce": cmd_reduce,
    "pd-reduce": cmd_pd_reduce,
    "verify": cmd_verify,
    "check-point": cmd_check_point,
    "compare": cmd_compare,
    "charpoly": cmd_charpoly,
    "psd-check": cmd_psd_check,
}


# ---------------------------------------------------------------------------
# text rendering


def render_text(report: dict) -> str:
    lines = [f"# {report['command']}"]

    def emit(key, value, indent=0):
        pad = "  " * indent
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for k, v in value.items():
                emit(k, v, indent + 1)
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: [{len(value)}]")
            for idx, v in enumerate(value):
                if isinstance(v, (dict, list)):
                    emit(f"- {idx + 1}", v, indent + 1)
                else:
                    lines.append(f"{pad}  - {_scalar(v)}")
        else:
            lines.append(f"{pad}{key}: {_scalar(value)}")

    for k, v in report.items():
        if k != "command":
            emit(k, v)
    return "\n".join(lines) + "\n"


def _with_status(report: dict, code: int) -> dict:
    return {**report, "status": {EXIT_OK: "PASS", EXIT_FAIL: "FAIL"}.get(code, "ERROR")}


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "-"
    return str(v)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit JSON")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="sampler seed")
    common.add_argument("--max-size", type=int, default=argparse.SUPPRESS, help="reduction size cap")
    common.add_argument("--max-generators", type=int, default=argparse.SUPPRESS)
    common.add_argument("--no-eager-verify", action="store_true", default=argparse.SUPPRESS,
                        help="skip witness identity checks during reduction")
    sampler = argparse.ArgumentParser(add_help=False)
    sampler.add_argument("--lo")
    sampler.add_argument("--hi")
    sampler.add_argument("--grid-steps", type=int)
    sampler.add_argument("--random-count", type=int)

    parser = argparse.ArgumentParser(prog="matstellen", parents=[common],
                                     description="Exact matrix Positivstellensatz toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("reduce", parents=[common], help="scalar reduction of the generators").add_argument("input")
    sub.add_parser("pd-reduce", parents=[common], help="diagonal reduction for strict positivity").add_argument("input")
    v = sub.add_parser("verify", parents=[common], help="verify certificate blocks")
    v.add_argument("input")
    v.add_argument("--kind", choices=["pd", "psd", "null", "realnull", "emptiness"])
    cp = sub.add_parser("check-point", parents=[common, sampler], help="membership in K_S")
    cp.add_argument("input")
    g = cp.add_mutually_exclusive_group(required=True)
    g.add_argument("--point", help="comma-separated rational coordinates, e.g. 1,1/2")
    g.add_argument("--sample", action="store_true", help="check targets at every sampled point of K_S")
    c = sub.add_parser("compare", parents=[common, sampler], help="compare K_S with a scalar set by sampling")
    c.add_argument("input")
    c.add_argument("scalars", nargs="?", help="file with scalar blocks; default: reduction of input")
    sub.add_parser("charpoly", parents=[common], help="characteristic polynomials").add_argument("input")
    ps = sub.add_parser("psd-check", parents=[common], help="exact PSD tests at a point")
    ps.add_argument("input")
    ps.add_argument("--point")
    return parser


def _defaults(args):
    for name, value in (("json", False), ("seed", None), ("max_size", DEFAULT_MAX_SIZE),
                        ("max_generators", DEFAULT_MAX_GENERATORS), ("no_eager_verify", False),
                        ("kind", None), ("point", None), ("lo", None), ("hi", None), ("grid_steps", None),
                        ("random_count", None), ("scalars", None)):
        if not hasattr(args, name):
            setattr(args, name, value)
    return args


def main(argv=None) -> int:
    parser = build_parser()
    args = _defaults(parser.parse_args(argv))
    try:
        prob = load_problem(args.input)
        code, report = COMMANDS[args.command](prob, args)
    except (ProblemError, InputError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SizeCapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    report = _with_status(report, code)
    if args.json:
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
    else:
        sys.stdout.write(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())

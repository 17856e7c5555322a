"""Command-line front end: parse an algebra spec, dispatch to the verifier,
and print the outcome as human text or JSON.

Exit codes: 0 = identity holds / no witness found; 1 = identity violated /
witness found; 2 = usage, precondition, or budget error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .identities import BRIDGE_NAMES, IDENTITY_NAMES, TraceConditionError
from .kernel import (
    BudgetExceededError,
    DimensionBoundError,
    check_associativity,
    check_grassmann_relation,
    check_u3star_embedding,
    check_unit_laws,
)
from .specparse import AlgebraSpecError, build_algebra, parse_algebra_spec
from .verify import (
    SEARCHABLE,
    VerifyReport,
    WitnessPool,
    probe_question,
    search_witness,
    verify_bridge,
    verify_generic,
    verify_thm21_hypotheses,
)

SELFTEST_DEFAULTS = (
    "rat",
    "grassmann:3",
    "grassmann:4",
    "u3star(rat)",
    "u3star(u3star(rat))",
    "full:2",
    "full:3",
)

# Published schema for single-check reports (verify / search / ck).
REPORT_SCHEMA = {
    "type": "object",
    "required": [
        "tool_version",
        "command",
        "identity",
        "algebra",
        "dim",
        "generic_vars",
        "holds",
        "witness",
        "elapsed_ms",
    ],
    "properties": {
        "tool_version": {"type": "string"},
        "command": {"type": "string"},
        "identity": {"type": "string"},
        "algebra": {"type": "string"},
        "dim": {"type": "integer", "minimum": 1},
        "generic_vars": {"type": "integer", "minimum": 0},
        "holds": {"type": "boolean"},
        "witness": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["assignment", "residual_coordinate", "value"],
                    "properties": {
                        "assignment": {
                            "type": "object",
                            "additionalProperties": {"type": "string"},
                        },
                        "residual_coordinate": {"type": "string"},
                        "value": {"type": "string"},
                    },
                    "additionalProperties": False,
                },
            ]
        },
        "diff": {"type": "array"},
        "elapsed_ms": {"type": "number"},
    },
    "additionalProperties": False,
}


def report_dict(report: VerifyReport) -> dict:
    out = {"tool_version": __version__}
    out.update(report.facts())
    out["elapsed_ms"] = round(report.elapsed_ms, 3)
    return out


def _sub_report_dict(report: VerifyReport) -> dict:
    out = report.facts()
    out["elapsed_ms"] = round(report.elapsed_ms, 3)
    return out


def _print_report_text(report: VerifyReport, out) -> None:
    facts = report.facts()
    for key in ("command", "identity", "algebra", "dim", "generic_vars", "holds"):
        print(f"{key}: {json.dumps(facts[key])}", file=out)
    w = facts["witness"]
    if w is None:
        print("witness: none", file=out)
    else:
        print("witness:", file=out)
        for name, value in w["assignment"].items():
            print(f"  {name} = {value}", file=out)
        print(f"  residual_coordinate: {w['residual_coordinate']}", file=out)
        print(f"  value: {w['value']}", file=out)
    if facts.get("diff"):
        print(f"diff ({len(facts['diff'])} mismatching terms):", file=out)
        for rec in facts["diff"][:20]:
            print(
                f"  entry {rec['entry']} basis {rec['basis']} monomial "
                f"{rec['monomial']}: {rec['left']} vs {rec['right']}",
                file=out,
            )
    print(f"elapsed_ms: {round(report.elapsed_ms, 3)}", file=out)


def _emit_report(report: VerifyReport, fmt: str, out) -> None:
    if fmt == "json":
        print(json.dumps(report_dict(report), indent=2, ensure_ascii=False), file=out)
    else:
        _print_report_text(report, out)


def _pool_for(ring, name: str) -> WitnessPool:
    return WitnessPool.named(name, ring)


def _cmd_verify(args, out) -> int:
    ring = build_algebra(args.algebra)
    if args.identity in BRIDGE_NAMES:
        report = verify_bridge(args.identity, ring)
    elif args.identity in IDENTITY_NAMES:
        report = verify_generic(args.identity, ring, k=args.k, m=args.m)
    else:
        raise KeyError(f"unknown identity name: {args.identity!r}")
    _emit_report(report, args.format, out)
    return 0 if report.holds else 1


def _cmd_search(args, out) -> int:
    ring = build_algebra(args.algebra)
    if args.expr not in SEARCHABLE:
        raise KeyError(
            f"expression {args.expr!r} is not searchable; pick one of {SEARCHABLE}"
        )
    pool = _pool_for(ring, args.pool)
    report = search_witness(
        args.expr, ring, pool=pool, limit=args.limit, jobs=args.jobs
    )
    _emit_report(report, args.format, out)
    return 0 if report.holds else 1


def _cmd_probe(args, out) -> int:
    ring = build_algebra(args.algebra)
    pool = _pool_for(ring, args.pool)
    outcome = probe_question(ring, pool=pool, limit=args.limit, jobs=args.jobs)
    if args.format == "json":
        payload = {
            "tool_version": __version__,
            "command": "probe-question",
            "algebra": outcome.algebra,
            "status": outcome.status,
            "note": outcome.note,
            "hypothesis": _sub_report_dict(outcome.hypothesis),
            "search": _sub_report_dict(outcome.search) if outcome.search else None,
            "elapsed_ms": round(outcome.elapsed_ms, 3),
        }
        print(json.dumps(payload, indent=2, ensure_ascii=False), file=out)
    else:
        print(f"command: \"probe-question\"", file=out)
        print(f"algebra: {json.dumps(outcome.algebra)}", file=out)
        print(f"status: {outcome.status}", file=out)
        print(f"note: {outcome.note}", file=out)
        print("hypothesis check ([[x,y],[x,z]]=0):", file=out)
        _print_report_text(outcome.hypothesis, out)
        if outcome.search is not None:
            print("witness search ([[x,y],[u,v]] != 0):", file=out)
            _print_report_text(outcome.search, out)
        print(f"elapsed_ms: {round(outcome.elapsed_ms, 3)}", file=out)
    return 1 if outcome.status == "counterexample_found" else 0


def _cmd_thm21(args, out) -> int:
    ring = build_algebra(args.algebra)
    outcome = verify_thm21_hypotheses(ring)
    if args.format == "json":
        payload = {
            "tool_version": __version__,
            "command": "thm21",
            "algebra": outcome.algebra,
            "u3star_algebra": outcome.u3star_algebra,
            "status": outcome.status,
            "note": outcome.note,
            "hyp_comm_product": _sub_report_dict(outcome.hyp_comm_product),
            "hyp_double_comm_z": _sub_report_dict(outcome.hyp_double_comm_z),
            "conclusion": _sub_report_dict(outcome.conclusion),
            "elapsed_ms": round(outcome.elapsed_ms, 3),
        }
        print(json.dumps(payload, indent=2, ensure_ascii=False), file=out)
    else:
        print(f"command: \"thm21\"", file=out)
        print(f"algebra: {json.dumps(outcome.algebra)}", file=out)
        print(f"u3star_algebra: {json.dumps(outcome.u3star_algebra)}", file=out)
        print(f"status: {outcome.status}", file=out)
        print(f"note: {outcome.note}", file=out)
        print("hypothesis [x,y][u,v]=0 on the base ring:", file=out)
        _print_report_text(outcome.hyp_comm_product, out)
        print("hypothesis [[x,y],z]=0 on the base ring:", file=out)
        _print_report_text(outcome.hyp_double_comm_z, out)
        print("conclusion [[x,y],[u,v]]=0 on the u3star ring:", file=out)
        _print_report_text(outcome.conclusion, out)
        print(f"elapsed_ms: {round(outcome.elapsed_ms, 3)}", file=out)
    return 1 if outcome.status == "refuted" else 0


def _cmd_ck(args, out) -> int:
    ring = build_algebra(args.algebra)
    report = verify_generic("ck_vanish", ring, k=args.k)
    report.command = "ck"
    _emit_report(report, args.format, out)
    return 0 if report.holds else 1


def selftest_ring(spec: str) -> dict:
    """Run the exhaustive kernel oracles for one algebra spec."""
    ring = build_algebra(spec)
    checks = {}

    def run(name, fn) -> None:
        try:
            fn(ring)
            checks[name] = True
        except AssertionError:
            checks[name] = False

    run("associativity", check_associativity)
    run("unit_laws", check_unit_laws)
    if ring.kind == "grassmann":
        run("anticommutation", check_grassmann_relation)
    if ring.kind == "u3star":
        run("embedding", check_u3star_embedding)
    return {"algebra": ring.spec, "dim": ring.dim, "checks": checks}


def _cmd_selftest(args, out) -> int:
    start = time.perf_counter()
    specs = args.algebra if args.algebra else list(SELFTEST_DEFAULTS)
    results = [selftest_ring(spec) for spec in specs]
    ok = all(all(r["checks"].values()) for r in results)
    if args.format == "json":
        payload = {
            "tool_version": __version__,
            "command": "selftest",
            "results": results,
            "holds": ok,
            "elapsed_ms": round((time.perf_counter() - start) * 1000.0, 3),
        }
        print(json.dumps(payload, indent=2, ensure_ascii=False), file=out)
    else:
        for r in results:
            flat = ", ".join(
                f"{name}={'OK' if passed else 'FAIL'}"
                for name, passed in r["checks"].items()
            )
            print(f"{r['algebra']} (dim {r['dim']}): {flat}", file=out)
        print(f"selftest: {'OK' if ok else 'FAIL'}", file=out)
    return 0 if ok else 1


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chtrace",
        description=(
            "Exact verification of polynomial and trace identities for 2x2 "
            "matrices over structure-constant noncommutative rings."
        ),
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="cmd", required=True)

    def add_common(p, need_algebra=True):
        if need_algebra:
            p.add_argument("--algebra", required=True, help="algebra spec, e.g. u3star(u3star(rat))")
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("verify", help="generic identity check over one ring")
    add_common(p)
    p.add_argument(
        "--identity",
        required=True,
        help=f"one of {', '.join(IDENTITY_NAMES)} or a bridge: {', '.join(BRIDGE_NAMES)}",
    )
    p.add_argument("--k", type=int, default=None, help="index for lie_solv_k / ck_vanish")
    p.add_argument("--m", type=int, default=None, help="index for lie_nilp_m")
    p.set_defaults(run=_cmd_verify)

    p = sub.add_parser("search", help="deterministic witness search over a pool")
    add_common(p)
    p.add_argument("--expr", required=True, help=f"one of {', '.join(SEARCHABLE)}")
    p.add_argument("--pool", choices=("basis", "sums:2"), default="basis")
    p.add_argument("--limit", type=int, default=None, help="maximum tuples to scan")
    p.add_argument("--jobs", type=int, default=1, help="parallel scan workers")
    p.set_defaults(run=_cmd_search)

    p = sub.add_parser(
        "probe-question",
        help="probe whether [[x,y],[x,z]]=0 forces [[x,y],[u,v]]=0 on this ring",
    )
    add_common(p)
    p.add_argument("--pool", choices=("basis", "sums:2"), default="basis")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=_cmd_probe)

    p = sub.add_parser(
        "thm21",
        help="check the two base-ring hypotheses and the u3star conclusion",
    )
    add_common(p)
    p.set_defaults(run=_cmd_thm21)

    p = sub.add_parser("ck", help="generic vanishing of the half-square recursion")
    add_common(p)
    p.add_argument("--k", type=int, required=True, choices=(1, 2, 3))
    p.set_defaults(run=_cmd_ck)

    p = sub.add_parser("selftest", help="exhaustive kernel oracles")
    p.add_argument(
        "--algebra",
        action="append",
        help="algebra spec (repeatable); defaults to the built-in battery",
    )
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(run=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help/--version.
        return int(exc.code or 0)
    try:
        return args.run(args, sys.stdout)
    except (
        AlgebraSpecError,
        BudgetExceededError,
        DimensionBoundError,
        TraceConditionError,
        KeyError,
        ValueError,
    ) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"chtrace: error: {message}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

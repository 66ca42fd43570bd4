"""Command-line entry point: ``chowfilt <command> ...``.

Exit codes: 0 when every check passes (``axiom-cited`` and ``unknown`` do not
fail a run), 1 when a check fails, 2 on parse or validation errors.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from .checks import run_scenario, validate_checks
from .errors import ChowFiltError, ParseError, ValidationError
from .filtration import phi_r, psi_r_closed, psi_r_product
from .genus2 import genus2_example
from .randomgen import LEVELS, default_variety, random_cycle, random_datum
from .scenario import Scenario, bundled_path, expr_to_symbols, load_scenario

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _default_scenario(name: str, d: int, seed: int, checks: list[dict], g: int = 1) -> Scenario:
    v = default_variety(d, model_dimension=g)
    return Scenario(name, v, {}, {}, checks, seed, levels=list(LEVELS))


def _emit(report: dict, args) -> int:
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
    if not args.quiet:
        _print_summary(report)
    return EXIT_FAIL if report["status"] == "fail" else EXIT_OK


def _print_summary(report: dict):
    for rec in report.get("checks", []):
        tag = rec.get("label") or rec["check"]
        extra = f" ({rec['cases']} cases)" if "cases" in rec else ""
        print(f"[{rec['status']}] {tag}{extra}")
        if rec["status"] == "fail":
            print("    " + json.dumps(rec.get("witness") or rec.get("error")))
    for step in report.get("steps", []):
        print(f"[{step['status']}] {step['step']}")
    counts = report.get("counts")
    if counts:
        print(f"{report['status']}: " + ", ".join(f"{v} {k}" for k, v in counts.items()))
    else:
        print(report["status"])


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_validate(args) -> int:
    sc = load_scenario(bundled_path(args.file))
    validate_checks(sc)
    if not args.quiet:
        print(f"{sc.name}: {sc.variety.d} curve(s), {sc.ab.kind} abelian model, "
              f"{len(sc.inputs)} input(s), {len(sc.checks)} check(s): ok")
    return EXIT_OK


def cmd_run(args) -> int:
    sc = load_scenario(bundled_path(args.file))
    return _emit(run_scenario(sc, seed=args.seed, timing=args.timing), args)


def cmd_normalize(args) -> int:
    sc = load_scenario(bundled_path(args.scenario))
    S = expr_to_symbols(args.expr, sc)
    if args.report:
        Path(args.report).write_text(json.dumps({"expr": args.expr, "normal_form": S.to_json()},
                                                indent=2) + "\n", encoding="utf-8")
    if not args.quiet:
        print(S)
    return EXIT_OK


def cmd_phi(args) -> int:
    """``Phi_r`` of seeded random cycles, with trace compatibility checked."""
    seed = 0 if args.seed is None else args.seed
    rng = random.Random(seed)
    v = default_variety(args.d)
    images = []
    for _ in range(args.cases):
        Z = random_cycle(rng, v)
        images.append({"cycle": str(Z), "phi": str(phi_r(Z, args.r))})
    if not args.quiet:
        for im in images:
            print(f"{im['cycle']}\n    -> {im['phi']}")
    sc = _default_scenario("phi", args.d, seed,
                           [{"check": "trace_compatibility_random", "cases": args.cases}])
    report = run_scenario(sc, timing=args.timing)
    report["images"] = images
    return _emit(report, args)


def cmd_psi(args) -> int:
    """``Psi'_r`` of seeded random data through both constructions."""
    seed = 0 if args.seed is None else args.seed
    rng = random.Random(seed)
    v = default_variety(args.d)
    out = []
    ok = True
    for _ in range(args.cases):
        S = random_datum(rng, v, args.r)
        a, b = psi_r_closed(S), psi_r_product(S)
        ok &= a == b
        out.append({"datum": S.describe(), "cycle": str(a), "paths_agree": a == b})
    if not args.quiet:
        for o in out:
            rows = ", ".join("(" + ", ".join(r["z"] + [r["a"]]) + ")" for r in o["datum"]["rows"])
            print(f"{{{rows}}} @{o['datum']['level']}\n    -> {o['cycle']}")
    report = {"scenario": "psi", "seed": seed, "status": "pass" if ok else "fail", "cases": out}
    return _emit(report, args)


def cmd_roundtrip(args) -> int:
    seed = 0 if args.seed is None else args.seed
    checks = [{"check": "roundtrip_random", "r": args.r, "cases": args.cases},
              {"check": "path_equivalence_random", "r": args.r, "cases": args.cases}]
    sc = _default_scenario("roundtrip", args.d, seed, checks)
    return _emit(run_scenario(sc, timing=args.timing), args)


def cmd_genus2(args) -> int:
    rep = genus2_example()
    report = {"scenario": "genus2", "seed": args.seed, **rep}
    return _emit(report, args)


def cmd_vanish(args) -> int:
    if args.r <= args.d + args.g:
        raise ParseError(f"need r > d + g, got r = {args.r}, d = {args.d}, g = {args.g}")
    seed = 0 if args.seed is None else args.seed
    sc = _default_scenario("vanish", args.d, seed,
                           [{"check": "vanishing", "r": args.r, "g": args.g, "cases": args.cases}],
                           g=args.g)
    return _emit(run_scenario(sc, timing=args.timing), args)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    common.add_argument("--cases", type=int, default=20, help="random cases per configuration")
    common.add_argument("--report", metavar="PATH", help="write a JSON report")
    common.add_argument("--quiet", action="store_true", help="print nothing; use the exit code")
    common.add_argument("--timing", action="store_true",
                        help="add wall-clock seconds to the report (breaks byte-identity)")

    ap = argparse.ArgumentParser(prog="chowfilt", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="parse and validate a scenario file")
    p.add_argument("file", help="scenario file, or the name of a bundled scenario")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("run", parents=[common], help="run every check of a scenario file")
    p.add_argument("file", help="scenario file, or the name of a bundled scenario")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("normalize", parents=[common], help="normal form of a symbol expression")
    p.add_argument("expr")
    p.add_argument("--scenario", required=True, help="scenario file naming the atoms")
    p.set_defaults(fn=cmd_normalize)

    for name, fn, text in (("phi", cmd_phi, "Phi_r of random cycles"),
                           ("psi", cmd_psi, "Psi'_r of random data, both constructions"),
                           ("roundtrip", cmd_roundtrip, "round-trip suite on random data")):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--d", type=int, default=1, help="number of curve factors")
        p.set_defaults(fn=fn)

    p = sub.add_parser("genus2", parents=[common], help="the genus-2 worked example")
    p.set_defaults(fn=cmd_genus2)

    p = sub.add_parser("vanish", parents=[common], help="classify Psi'_r blocks for r > d + g")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--g", type=int, required=True, help="dimension of the abelian variety")
    p.add_argument("--d", type=int, default=1, help="number of curve factors")
    p.set_defaults(fn=cmd_vanish)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "r", 0) is not None and getattr(args, "r", 0) < 0:
        print("error: --r must be non-negative", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.fn(args)
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ChowFiltError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

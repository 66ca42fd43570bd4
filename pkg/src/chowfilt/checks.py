"""The closed check vocabulary and the scenario runner.

A scenario lists checks by name with typed parameters.  Each check returns a
record ``{"check", "status", "ref", ...}`` where ``status`` is one of
``pass``, ``fail``, ``axiom-cited`` (the computable part holds and the rest
rests on a named axiom) or ``unknown`` (a one-sided certificate that did not
certify).  Only ``fail`` makes a run fail.

Randomised checks get their own ``random.Random`` derived from the scenario
seed and the check's position, so reports are reproducible.
"""
from __future__ import annotations

import itertools
import random
import time
from math import factorial
from typing import Any, Callable

from .cycles import Variety, ZeroCycle, cyc_res, pushforward_base
from .errors import ChowFiltError, ParseError
from .ext_lattice import divides
from .filtration import (SymbolDatum, albanese, albanese_via_phi, binomial_closed_form,
                         binomial_count_oracle, certify_membership, multilinearity_sides, phi_r,
                         projection_formula_sides, psi_r_blocks, psi_r_closed, psi_r_product, q_of,
                         roundtrip_report, trace_compatibility_sides, vanishing_structural_check)
from .genus2 import genus2_example
from .models import div_res, div_tr, pic0_equal
from .randomgen import LEVELS, random_cycle, random_datum, random_divisor, random_element
from .scenario import Scenario, _load_divisor, expr_to_symbols
from .symbols import SymbolSum, row_slot, sym_normalize, sym_res, sym_trace, underline_quotient

__all__ = ["CHECKS", "STATUSES", "psi2_one_curve_lines", "run_check", "run_scenario", "validate_checks"]

STATUSES = ("pass", "fail", "axiom-cited", "unknown")

# name -> (runner, allowed parameters, what it verifies)
CHECKS: dict[str, tuple[Callable, set[str], str]] = {}


def _check(name: str, params: set[str], ref: str):
    def deco(fn):
        CHECKS[name] = (fn, params | {"check", "label"}, ref)
        return fn
    return deco


def _as_list(x) -> list:
    return list(x) if isinstance(x, (list, tuple)) else [x]


def _variety_for(sc: Scenario, d: int | None) -> Variety:
    """The scenario's variety, or ``d`` factors cycling through its curves."""
    v = sc.variety
    if d is None or d == v.d:
        return v
    if not v.curves:
        raise ParseError("scenario has no curves to build a product from")
    cache = sc.__dict__.setdefault("_varieties", {})
    if d not in cache:
        cache[d] = Variety([v.curves[i % v.d] for i in range(d)], v.ab)
    return cache[d]


def _levels(sc: Scenario, p: dict) -> list[int]:
    return [int(x) for x in p.get("levels", sc.levels or LEVELS)]


def _input(sc: Scenario, p: dict, kind=None):
    name = p.get("input")
    if name not in sc.inputs:
        raise ParseError(f"unknown input {name!r}")
    x = sc.inputs[name]
    if kind is not None and not isinstance(x, kind):
        raise ParseError(f"input {name!r} is a {type(x).__name__}, expected {kind.__name__}")
    return x


def _result(ok: bool, **detail) -> dict:
    return {"status": "pass" if ok else "fail", **detail}


def _random_suite(rng, sc, p, one: Callable) -> dict:
    """Run ``one(rng, variety, r, level)`` over ``d x r`` grids; ``one``
    returns ``None`` on success or a witness."""
    cases = int(p.get("cases", 20))
    ds = _as_list(p.get("d", sc.variety.d))
    rs = _as_list(p.get("r", [1, 2, 3]))
    levels = _levels(sc, p)
    ran = 0
    for d in ds:
        v = _variety_for(sc, int(d))
        for r in rs:
            for k in range(cases):
                ran += 1
                w = one(rng, v, int(r), rng.choice(levels))
                if w is not None:
                    return _result(False, cases=ran, witness={"d": d, "r": r, "case": k, **w})
    return _result(True, cases=ran)


# --------------------------------------------------------------------------
# round trip and the two constructions
# --------------------------------------------------------------------------

def _roundtrip_one(rng, v, r, level):
    S = random_datum(rng, v, r, level)
    rep = roundtrip_report(S)
    if rep["pass"]:
        return None
    bad = next(e for e in rep["checks"] if not e["pass"])
    return {"datum": S.describe(), "failed": bad["name"], "detail": bad["witness"]}


@_check("roundtrip", {"input"}, "Phi_t o Psi'_r = 0 for t < r and Phi_r o Psi'_r = r! q")
def check_roundtrip(sc, p, rng):
    S = _input(sc, p, SymbolDatum)
    rep = roundtrip_report(S)
    return _result(rep["pass"], r=rep["r"], detail=rep["checks"])


@_check("roundtrip_random", {"d", "r", "cases", "levels"},
        "Phi_t o Psi'_r = 0 for t < r and Phi_r o Psi'_r = r! q, random data")
def check_roundtrip_random(sc, p, rng):
    return _random_suite(rng, sc, p, _roundtrip_one)


def _paths_one(rng, v, r, level):
    S = random_datum(rng, v, r, level)
    a, b = psi_r_closed(S), psi_r_product(S)
    return None if a == b else {"datum": S.describe(), "closed": str(a), "product": str(b)}


@_check("path_equivalence", {"input"}, "closed formula for Psi'_r equals the product construction")
def check_path_equivalence(sc, p, rng):
    S = _input(sc, p, SymbolDatum)
    a, b = psi_r_closed(S), psi_r_product(S)
    out = _result(a == b, cycle=str(a))
    if a != b:
        out["witness"] = {"closed": str(a), "product": str(b)}
    return out


@_check("path_equivalence_random", {"d", "r", "cases", "levels"},
        "closed formula for Psi'_r equals the product construction, random data")
def check_path_equivalence_random(sc, p, rng):
    return _random_suite(rng, sc, p, _paths_one)


def psi2_one_curve_lines(v: Variety, level: int, n1: dict, n2: dict, a1, a2):
    """The three lines of ``Psi'_2`` for one curve, built directly from the
    coefficients ``n1, n2`` of ``z^1, z^2`` and the points ``a1, a2``."""
    ab = v.ab
    p = v.curves[0].base_point

    def pt(y, a, c=1):
        return ZeroCycle.point(v, (y,), a, level, c)

    pure = pt(p, ab.add(a1, a2)) - pt(p, a1) - pt(p, a2) + pt(p, ab.zero())
    mixed1 = ZeroCycle(v, level)
    for y, c in n1.items():
        mixed1 = mixed1 + pt(y, a2, c) - pt(y, ab.zero(), c)
    mixed2 = ZeroCycle(v, level)
    for y, c in n2.items():
        mixed2 = mixed2 + pt(y, a1, c) - pt(y, ab.zero(), c)
    return [pushforward_base(x, 1) for x in (pure, mixed1, mixed2)]


@_check("psi2_one_curve", {"levels", "cases"},
        "Psi'_2 on one curve splits into the pure-A line and the two mixed lines")
def check_psi2_one_curve(sc, p, rng):
    v = _variety_for(sc, 1)
    curve = v.curves[0]
    cases = int(p.get("cases", 5))
    ran = 0
    for level in [int(x) for x in p.get("levels", [1, 2])]:
        pool = [y for y in curve.points if level % curve.min_level(y) == 0]
        for k in range(cases):
            ran += 1
            n1, n2 = {}, {}
            for n in (n1, n2):
                for _ in range(rng.randint(1, 3)):
                    y = rng.choice(pool)
                    n[y] = n.get(y, 0) + rng.choice((-2, -1, 1, 2))
                n[curve.base_point] = n.get(curve.base_point, 0) - sum(n.values())
            a1 = random_element(rng, v)
            a2 = random_element(rng, v)
            z1 = curve.divisor(list(n1.items()), base=level)
            z2 = curve.divisor(list(n2.items()), base=level)
            S = SymbolDatum.build(v, level, [([z1], v.ab.res(a1, level)),
                                             ([z2], v.ab.res(a2, level))])
            want = psi2_one_curve_lines(v, level, n1, n2, a1, a2)
            got = {(I, images): Z for I, images, Z in psi_r_blocks(S)}
            lines = [got.get(((), ()), ZeroCycle(v, 1)), got.get(((0,), (0,)), ZeroCycle(v, 1)),
                     got.get(((0,), (1,)), ZeroCycle(v, 1))]
            total = psi_r_closed(S)
            for i, (g, w) in enumerate(zip(lines, want)):
                if g != w:
                    return _result(False, cases=ran, witness={"level": level, "line": i + 1,
                                                              "got": str(g), "expected": str(w)})
            if total != want[0] + want[1] + want[2] or total != psi_r_product(S):
                return _result(False, cases=ran, witness={"level": level, "total": str(total)})
    return _result(True, cases=ran)


# --------------------------------------------------------------------------
# structural identities on random data
# --------------------------------------------------------------------------

def _towers(levels):
    return [(e, l) for e in levels for l in levels if divides(e, l)]


@_check("multilinearity_random", {"d", "r", "cases", "levels"},
        "Psi'_r is additive in the curve part of a row once a_t moves to one summand")
def check_multilinearity_random(sc, p, rng):
    def one(rng, v, r, level):
        S = random_datum(rng, v, r, level, rational=False)
        t = rng.randrange(r)
        extra = [None if rng.random() < 0.3 else random_divisor(rng, c, level, rational=False)
                 for c in v.curves]
        x, y = multilinearity_sides(S, t, extra)
        return None if x == y else {"datum": S.describe(), "row": t + 1, "lhs": str(x), "rhs": str(y)}
    return _random_suite(rng, sc, p, one)


@_check("projection_formula_random", {"d", "r", "cases", "levels"},
        "Psi'_r commutes with the projection formula along a tower E | L")
def check_projection_formula_random(sc, p, rng):
    towers = _towers(_levels(sc, p))
    proper = [t for t in towers if t[0] != t[1]]

    def one(rng, v, r, _level):
        E, L = rng.choice(proper if proper and rng.random() < 0.8 else towers)
        S = random_datum(rng, v, r, level=E, rational=False)
        rows = [(row.zs, row.a) for row in S.rows]
        t = rng.randrange(r)
        zs_L = [None if rng.random() < 0.3 else random_divisor(rng, c, L, rational=False)
                for c in v.curves]
        up, down = projection_formula_sides(v, E, L, rows, t, zs_L)
        if up == down:
            return None
        return {"E": E, "L": L, "row": t + 1, "datum": S.describe(), "lhs": str(up), "rhs": str(down)}
    out = _random_suite(rng, sc, p, one)
    out["proper_towers"] = [list(t) for t in proper]
    return out


@_check("trace_compatibility_random", {"d", "cases", "levels"},
        "Phi_r of a pushforward is the trace of Phi_r over the base")
def check_trace_compatibility_random(sc, p, rng):
    def one(rng, v, _r, level):
        Z = random_cycle(rng, v, base=level)
        for r, (a, b) in enumerate(trace_compatibility_sides(Z)):
            if a != b:
                return {"cycle": str(Z), "phi_r": r, "lhs": str(a), "rhs": str(b)}
        return None
    return _random_suite(rng, sc, {**p, "r": [0]}, one)


def _alb_json(v, alb):
    deg, pics, a = alb
    return {"degree": deg, "jacobians": [str(x) for x in pics], "A": v.ab.format(a)}


@_check("albanese", {"input"}, "(degree, Albanese) agrees with (Phi_0, Tr o Phi_1)")
def check_albanese(sc, p, rng):
    Z = _input(sc, p, ZeroCycle)
    a, b = albanese(Z), albanese_via_phi(Z)
    out = _result(a == b, albanese=_alb_json(Z.variety, a))
    if a != b:
        out["witness"] = {"via_phi": _alb_json(Z.variety, b)}
    return out


@_check("albanese_random", {"d", "cases"},
        "(degree, Albanese) agrees with (Phi_0, Tr o Phi_1), random cycles")
def check_albanese_random(sc, p, rng):
    def one(rng, v, _r, _level):
        Z = random_cycle(rng, v)
        a, b = albanese(Z), albanese_via_phi(Z)
        if a == b:
            return None
        return {"cycle": str(Z), "albanese": _alb_json(v, a), "via_phi": _alb_json(v, b)}
    return _random_suite(rng, sc, {**p, "r": [0], "levels": [1]}, one)


@_check("functor_laws", {"levels", "cases"},
        "Tr o res = [L:E] on the abelian model, divisors, cycles and symbol sums")
def check_functor_laws(sc, p, rng):
    v = sc.variety
    ab = v.ab
    cases = int(p.get("cases", 3))
    symbolic = ab.kind != "table"
    pairs = _towers(_levels(sc, p))
    for E, L in pairs:
        n = L // E
        for _ in range(cases):
            x = ab.element([rng.randint(-3, 3) for _ in ab.group(E)], E)
            if ab.tr(ab.res(x, L), L, E) != ab.scale(n, x):
                return _result(False, witness={"E": E, "L": L, "law": "abelian model",
                                               "x": ab.format(x)})
            for c in v.curves:
                D = random_divisor(rng, c, E, rational=False)
                back = div_tr(div_res(D, L), E)
                if back != n * D or not pic0_equal(back, n * D):
                    return _result(False, witness={"E": E, "L": L, "law": "divisors",
                                                   "divisor": str(D), "got": str(back)})
            Z = random_cycle(rng, v, base=E)
            back = pushforward_base(cyc_res(Z, L), E)
            if back != n * Z:
                return _result(False, witness={"E": E, "L": L, "law": "cycles",
                                               "cycle": str(Z), "got": str(back)})
            if symbolic and v.d:
                D = random_datum(rng, v, rng.randint(1, 3), E)
                S = sym_normalize(v, E, [row_slot(v, E, row.zs, row.a) for row in D.rows], base=E)
                back = sym_trace(sym_res(S, L), E)
                if back != n * S:
                    return _result(False, witness={"E": E, "L": L, "law": "symbols",
                                                   "symbols": str(S), "got": str(back)})
    return _result(True, pairs=[list(t) for t in pairs], symbol_sums_checked=symbolic)


@_check("binomial_lemma", {"r_max"},
        "subset counts M(h, j) = C(r - |h|, j - |h|); alternating sums pick out |h| = r")
def check_binomial_lemma(sc, p, rng):
    r_max = int(p.get("r_max", 6))
    checked = 0
    for r in range(1, r_max + 1):
        for size in range(0, r + 1):
            # repeated entries are allowed; only set(h) matters
            for h in itertools.combinations_with_replacement(range(1, r + 1), size):
                counts = []
                for j in range(0, r + 1):
                    brute = binomial_count_oracle(r, h, j)
                    checked += 1
                    if brute != binomial_closed_form(r, h, j):
                        return _result(False, witness={"r": r, "h": list(h), "j": j, "count": brute})
                    counts.append(brute)
                alt = sum((-1) ** (r - j) * m for j, m in enumerate(counts))
                if alt != (1 if len(set(h)) == r else 0):
                    return _result(False, witness={"r": r, "h": list(h), "alternating_sum": alt})
    return _result(True, evaluated=checked)


# --------------------------------------------------------------------------
# single-input checks
# --------------------------------------------------------------------------

def _expected_symbols(sc: Scenario, raw) -> SymbolSum | None:
    """``"0"``, an expression, or ``{"expr": ..., "times": n}``."""
    if raw in (0, "0"):
        return None
    if isinstance(raw, str):
        return expr_to_symbols(raw, sc)
    if isinstance(raw, dict) and "expr" in raw:
        return int(raw.get("times", 1)) * expr_to_symbols(raw["expr"], sc)
    raise ParseError(f"cannot read expected symbols {raw!r}")


def _symbols_match(got: SymbolSum, want: SymbolSum | None) -> bool:
    return got.is_zero() if want is None else got == want


@_check("phi", {"input", "r", "expect"}, "Phi_r of an input against a stated symbol sum")
def check_phi(sc, p, rng):
    x = _input(sc, p)
    Z = psi_r_closed(x) if isinstance(x, SymbolDatum) else x
    r = int(p["r"])
    got = phi_r(Z, r)
    out = {"status": "pass", "phi": str(got)}
    if "expect" in p:
        # Phi_r lands in the underlined quotient; compare there
        want = _expected_symbols(sc, p["expect"])
        want = None if want is None else underline_quotient(want)
        if not _symbols_match(got, want):
            out.update(status="fail", witness={"expected": "0" if want is None else str(want)})
    return out


@_check("certify", {"input", "r", "expect"}, "one-sided F^r membership certificate")
def check_certify(sc, p, rng):
    x = _input(sc, p)
    Z = psi_r_closed(x) if isinstance(x, SymbolDatum) else x
    cert = certify_membership(Z, int(p["r"]))
    evidence = [str(e) for e in cert.evidence]
    expect = p.get("expect")
    if expect is None:
        return {"status": "pass" if cert.certified else "unknown", "certificate": cert.status,
                "evidence": evidence}
    return {"status": "pass" if cert.status == expect else "fail", "certificate": cert.status,
            "evidence": evidence}


@_check("normalize", {"expr", "expect"}, "normal form of a symbol expression")
def check_normalize(sc, p, rng):
    got = expr_to_symbols(p["expr"], sc)
    out = {"status": "pass", "normal_form": str(got)}
    if "expect" in p:
        want = _expected_symbols(sc, p["expect"])
        if not _symbols_match(got, want):
            out.update(status="fail", witness={"expected": "0" if want is None else str(want)})
    return out


@_check("pic0_equal", {"curve", "level", "lhs", "rhs", "expect"}, "equality in Pic^0 modulo relations")
def check_pic0_equal(sc, p, rng):
    i = sc.curve_index(p.get("curve", 0))
    level = int(p.get("level", 1))
    D1 = _load_divisor(sc, i, p["lhs"], level, "lhs")
    D2 = _load_divisor(sc, i, p["rhs"], level, "rhs")
    zero = sc.curves[i].divisor([], base=level)
    got = pic0_equal(D1 or zero, D2 or zero)
    return {"status": "pass" if got == bool(p.get("expect", True)) else "fail", "equal": got}


@_check("vanishing", {"input", "r", "g", "cases", "levels"},
        "every block of Psi'_r with r > d + g is classified as vanishing")
def check_vanishing(sc, p, rng):
    v = sc.variety
    g = int(p.get("g", v.ab.model_dimension))
    if "input" in p:
        data = [_input(sc, p, SymbolDatum)]
    else:
        r = int(p.get("r", v.d + g + 1))
        levels = _levels(sc, p)
        data = [random_datum(rng, v, r, rng.choice(levels)) for _ in range(int(p.get("cases", 20)))]
    totals = {"formally-zero": 0, "pontryagin-verified": 0, "pontryagin-axiom": 0, "unclassified": 0}
    for S in data:
        rep = vanishing_structural_check(S, g)
        if rep["error"]:
            return {"status": "fail", "error": rep["error"]}
        for k, c in rep["counts"].items():
            totals[k] += c
        if rep["counts"]["unclassified"]:
            bad = next(b for b in rep["blocks"] if b["bucket"] == "unclassified")
            return {"status": "fail", "counts": totals, "witness": {"datum": S.describe(), "block": bad}}
    status = "axiom-cited" if totals["pontryagin-axiom"] else "pass"
    return {"status": status, "cases": len(data), "counts": totals}


@_check("genus2", set(), "genus-2 curve times its Jacobian: generators and 2-torsion certificates")
def check_genus2(sc, p, rng):
    rep = genus2_example()
    return {"status": rep["status"], "steps": rep["steps"], "violations": rep["violations"]}


# --------------------------------------------------------------------------
# runner
# --------------------------------------------------------------------------

def _check_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed * 1_000_003 + index)


def validate_checks(sc: Scenario):
    for k, c in enumerate(sc.checks):
        name = c.get("check")
        if name not in CHECKS:
            raise ParseError(f"unknown check {name!r}; known: {', '.join(sorted(CHECKS))}",
                             f"checks[{k}]")
        extra = set(c) - CHECKS[name][1]
        if extra:
            raise ParseError(f"unexpected parameters {sorted(extra)} for {name}", f"checks[{k}]")


def run_check(sc: Scenario, params: dict, index: int, seed: int) -> dict:
    name = params["check"]
    fn, _, ref = CHECKS[name]
    rng = _check_rng(seed, index)
    record: dict[str, Any] = {"check": name, "index": index}
    if "label" in params:
        record["label"] = params["label"]
    record["ref"] = ref
    try:
        record.update(fn(sc, params, rng))
    except ParseError:
        raise
    except (ChowFiltError, KeyError) as exc:
        record.update(status="fail", error=f"{type(exc).__name__}: {exc}")
    return record


def run_scenario(sc: Scenario, seed: int | None = None, timing: bool = False) -> dict:
    """Run every check in declaration order and assemble the report."""
    validate_checks(sc)
    seed = sc.seed if seed is None else seed
    records = []
    started = time.perf_counter()
    for k, params in enumerate(sc.checks):
        t0 = time.perf_counter()
        rec = run_check(sc, params, k, seed)
        if timing:
            rec["seconds"] = round(time.perf_counter() - t0, 4)
        records.append(rec)
    counts = {s: sum(1 for r in records if r["status"] == s) for s in STATUSES}
    report = {"scenario": sc.name, "seed": seed,
              "status": "fail" if counts["fail"] else "pass",
              "counts": counts, "checks": records}
    if timing:
        report["seconds"] = round(time.perf_counter() - started, 4)
    return report

"""Scenario files: curves, abelian model, named inputs and checks.

The file is JSON with top-level keys ``curves``, ``ab_model``, ``atoms``,
``inputs``, ``checks`` and ``seed``.  Symbol data may be written as strings
``{(e_1, ..., e_d, a), ...}@level`` where every entry is a signed sum of
atom names (optionally with integer multipliers) or ``0``.
"""
from __future__ import annotations

import json
import re
from importlib import resources
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .cycles import Variety, ZeroCycle
from .errors import ChowFiltError, ParseError, ValidationError
from .filtration import SymbolDatum
from .models import (AbElement, AbModel, ConstantAbModel, CurveModel, Divisor, TableAbModel,
                     jacobian_ab_model, validate_models)
from .symbols import SymbolSum, row_slot, sym_normalize

__all__ = ["Scenario", "bundled_path", "bundled_scenarios", "expr_to_symbols", "load_scenario", "parse_entry", "parse_scenario",
           "parse_symbol_expr"]

_TOP_KEYS = {"name", "description", "curves", "ab_model", "atoms", "inputs", "checks", "seed"}


@dataclass
class Scenario:
    name: str
    variety: Variety
    atoms: dict[str, Any]
    inputs: dict[str, Any]
    checks: list[dict]
    seed: int
    description: str = ""
    source: str | None = None
    levels: list[int] = field(default_factory=list)

    @property
    def curves(self):
        return self.variety.curves

    @property
    def ab(self) -> AbModel:
        return self.variety.ab

    def curve_index(self, ref) -> int:
        if isinstance(ref, int):
            if not 0 <= ref < self.variety.d:
                raise ParseError(f"curve index {ref} out of range")
            return ref
        for i, c in enumerate(self.curves):
            if c.name == ref:
                return i
        raise ParseError(f"unknown curve {ref!r}")

    # name resolution --------------------------------------------------
    def curve_point(self, i: int, name: str) -> str:
        alias = self.atoms.get(name)
        if isinstance(alias, dict) and "point" in alias:
            ci = self.curve_index(alias.get("curve", i))
            if ci == i:
                return alias["point"]
        if name in self.curves[i].points:
            return name
        raise ParseError(f"{name!r} is not a point of curve {self.curves[i].name}")

    def ab_element(self, name: str) -> AbElement:
        alias = self.atoms.get(name)
        if isinstance(alias, dict) and "ab" in alias:
            return _ab_value(self.ab, alias["ab"], f"atoms.{name}")
        if name in self.ab.names:
            return self.ab.named(name)
        raise ParseError(f"{name!r} is not an element of the abelian model")


# --------------------------------------------------------------------------
# expression grammar
# --------------------------------------------------------------------------

_TERM = re.compile(r"\s*([+-])?\s*(\d+)?\s*\*?\s*([A-Za-z_][A-Za-z0-9_']*|0)\s*")


def parse_entry(text: str) -> dict[str, int]:
    """``"2y1 - y2 + 0"`` -> ``{"y1": 2, "y2": -1}``."""
    s = text.strip()
    if not s:
        raise ParseError("empty entry")
    out: dict[str, int] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse entry {text!r}", f"char {pos}")
        sign, mult, name = m.groups()
        if sign is None and not first:
            raise ParseError(f"missing operator in entry {text!r}", f"char {pos}")
        first = False
        c = (-1 if sign == "-" else 1) * (int(mult) if mult else 1)
        if name != "0":
            out[name] = out.get(name, 0) + c
        pos = m.end()
    return {k: v for k, v in out.items() if v}


def _split_top(text: str, sep: str = ",") -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced parentheses in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    parts.append("".join(cur))
    return parts


_EXPR = re.compile(r"^\s*\{(.*)\}\s*@\s*(\d+)\s*$", re.S)


def parse_symbol_expr(text: str, scenario: Scenario) -> SymbolDatum:
    """Parse ``{(z_1, ..., z_d, a), ...}@L`` into rows over level ``L``.

    Curve entries are combinations of ``iota(y)``; every named point must be
    rational over ``L``.
    """
    m = _EXPR.match(text)
    if not m:
        raise ParseError(f"expected '{{(...), ...}}@level', got {text!r}")
    body, level = m.group(1).strip(), int(m.group(2))
    if level < 1:
        raise ParseError("level must be positive")
    v = scenario.variety
    rows = []
    if body:
        for k, chunk in enumerate(_split_top(body)):
            chunk = chunk.strip()
            if not (chunk.startswith("(") and chunk.endswith(")")):
                raise ParseError(f"slot {k + 1} must be a parenthesised tuple, got {chunk!r}")
            entries = _split_top(chunk[1:-1])
            if len(entries) != v.d + 1:
                raise ParseError(f"slot {k + 1} has {len(entries)} entries, expected {v.d + 1}")
            zs = []
            for i, e in enumerate(entries[:-1]):
                combo = parse_entry(e)
                curve = v.curves[i]
                terms = []
                for name, c in combo.items():
                    pt = scenario.curve_point(i, name)
                    if level % curve.min_level(pt):
                        raise ParseError(f"slot {k + 1}: point {pt} is not rational over level {level}")
                    terms += [(pt, c), (curve.base_point, -c)]
                zs.append(Divisor.build(curve, level, terms))
            combo = parse_entry(entries[-1])
            parts = [v.ab.scale(c, scenario.ab_element(n)) for n, c in combo.items()]
            rows.append((zs, v.ab.add(*parts)))
    try:
        return SymbolDatum.build(v, level, rows)
    except ChowFiltError as exc:
        raise ParseError(str(exc)) from None


def expr_to_symbols(text: str, scenario: Scenario) -> SymbolSum:
    S = parse_symbol_expr(text, scenario)
    v = scenario.variety
    return sym_normalize(v, S.level, [row_slot(v, S.level, r.zs, r.a) for r in S.rows])


# --------------------------------------------------------------------------
# loading
# --------------------------------------------------------------------------

def _ab_value(ab: AbModel, raw, where: str) -> AbElement:
    """An element given as a name, a combination string, a vector or
    ``{"level": n, "vec": [...]}``."""
    try:
        if isinstance(raw, str):
            combo = parse_entry(raw)
            return ab.add(*(ab.scale(c, ab.named(n)) for n, c in combo.items()))
        if isinstance(raw, list):
            return ab.element(raw, 1)
        if isinstance(raw, dict) and "vec" in raw:
            return ab.element(raw["vec"], int(raw.get("level", 1)))
        if isinstance(raw, dict):
            return ab.combination({k: int(c) for k, c in raw.items()})
    except (KeyError, ValueError, ChowFiltError) as exc:
        raise ParseError(str(exc), where) from None
    raise ParseError(f"cannot read abelian-model element {raw!r}", where)


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ParseError(f"missing key {key!r}", where)
    return obj[key]


def _load_curve(raw: dict, k: int) -> CurveModel:
    where = f"curves[{k}]"
    if not isinstance(raw, dict):
        raise ParseError("curve entry must be an object", where)
    rels = []
    for j, rel in enumerate(raw.get("relations", [])):
        rw = f"{where}.relations[{j}]"
        if isinstance(rel, dict):
            rels.append((int(rel.get("level", 1)), dict(_require(rel, "divisor", rw))))
        else:
            raise ParseError("relation must be an object with 'level' and 'divisor'", rw)
    try:
        return CurveModel(str(raw.get("name", f"C{k + 1}")), dict(_require(raw, "points", where)),
                          str(_require(raw, "base_point", where)), rels,
                          raw.get("involution"), raw.get("weierstrass"))
    except (KeyError, ValueError, TypeError) as exc:
        raise ParseError(str(exc), where) from None


def _load_ab(raw: dict, curves: list[CurveModel]) -> AbModel:
    where = "ab_model"
    if not isinstance(raw, dict):
        raise ParseError("ab_model must be an object", where)
    kind = raw.get("kind", "constant")
    dim = int(raw.get("model_dimension", 1))
    try:
        if kind == "constant":
            inv = _require(raw, "invariants", where)
            ab = ConstantAbModel(inv, raw.get("basis"), model_dimension=dim,
                                 levels=raw.get("levels", (1,)))
        elif kind == "jacobian":
            ref = raw.get("curve", 0)
            idx = ref if isinstance(ref, int) else [c.name for c in curves].index(ref)
            ab = jacobian_ab_model(curves[idx], dim)
        elif kind == "table":
            groups = {int(k): v for k, v in _require(raw, "groups", where).items()}
            res = {(int(e["to"]), int(e["from"])): e["matrix"] for e in raw.get("res", [])}
            tr = {(int(e["from"]), int(e["to"])): e["matrix"] for e in raw.get("tr", [])}
            ab = TableAbModel(groups, res, tr, model_dimension=dim)
        else:
            raise ParseError(f"unknown ab_model kind {kind!r}", where)
    except ParseError:
        raise
    except (KeyError, ValueError, TypeError, ChowFiltError) as exc:
        raise ParseError(str(exc), where) from None
    for name, el in raw.get("elements", {}).items():
        ab.names[name] = _ab_value(ab, el, f"{where}.elements.{name}")
    return ab


def parse_scenario(data: dict, source: str | None = None, validate: bool = True) -> Scenario:
    if not isinstance(data, dict):
        raise ParseError("scenario must be a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ParseError(f"unknown top-level keys {sorted(unknown)}")
    curves = [_load_curve(c, k) for k, c in enumerate(data.get("curves", []))]
    ab = _load_ab(data.get("ab_model", {"kind": "constant", "invariants": []}), curves)
    variety = Variety(curves, ab)
    atoms = data.get("atoms", {}) or {}
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ParseError("seed must be an integer", "seed")
    checks = data.get("checks", []) or []
    for k, c in enumerate(checks):
        if not isinstance(c, dict) or "check" not in c:
            raise ParseError("each check needs a 'check' name", f"checks[{k}]")
    sc = Scenario(str(data.get("name", Path(source).stem if source else "scenario")), variety, atoms,
                  {}, checks, seed, data.get("description", ""), source)
    if validate:
        violations = validate_models(curves, ab)
        if violations:
            raise ValidationError(violations)
    for k, inp in enumerate(data.get("inputs", []) or []):
        where = f"inputs[{k}]"
        name = _require(inp, "name", where)
        sc.inputs[name] = _load_input(sc, inp, where)
    return sc


def load_scenario(path, validate: bool = True) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path.name}:{exc.lineno}:{exc.colno}") from None
    return parse_scenario(data, str(path), validate)


def bundled_scenarios() -> list[str]:
    root = resources.files("chowfilt") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def bundled_path(name_or_path) -> Path:
    """A path as given if it exists, else the bundled scenario of that name."""
    path = Path(name_or_path)
    if path.exists() or str(name_or_path) not in bundled_scenarios():
        return path
    return Path(str(resources.files("chowfilt") / "scenarios" / f"{name_or_path}.json"))


def _load_divisor(sc: Scenario, i: int, raw, level: int, where: str) -> Divisor | None:
    curve = sc.curves[i]
    try:
        if raw in (None, 0, "0"):
            return None
        if isinstance(raw, str):
            # a combination of iota(y): base point corrections are implicit
            terms = []
            for name, c in parse_entry(raw).items():
                pt = sc.curve_point(i, name)
                if level % curve.min_level(pt):
                    raise ParseError(f"{pt} is not rational over level {level}; "
                                     "give the divisor as an object instead", where)
                terms += [(pt, c), (curve.base_point, -c)]
            return Divisor.build(curve, level, terms)
        if isinstance(raw, dict):
            return Divisor.build(curve, level, {sc.curve_point(i, k): int(c) for k, c in raw.items()})
    except (KeyError, ValueError, ChowFiltError) as exc:
        raise ParseError(str(exc), where) from None
    raise ParseError(f"cannot read divisor {raw!r}", where)


def _load_input(sc: Scenario, inp: dict, where: str):
    kind = inp.get("kind")
    v = sc.variety
    try:
        if kind == "symbol":
            return parse_symbol_expr(_require(inp, "expr", where), sc)
        if kind == "datum":
            level = int(inp.get("level", 1))
            rows = []
            for j, row in enumerate(_require(inp, "rows", where)):
                rw = f"{where}.rows[{j}]"
                z = row.get("z", [None] * v.d)
                if len(z) != v.d:
                    raise ParseError(f"row needs {v.d} divisors", rw)
                zs = [_load_divisor(sc, i, zz, level, f"{rw}.z[{i}]") for i, zz in enumerate(z)]
                a = row.get("a")
                rows.append((zs, None if a in (None, 0, "0") else _ab_value(v.ab, a, f"{rw}.a")))
            return SymbolDatum.build(v, level, rows)
        if kind == "cycle":
            base = int(inp.get("base", 1))
            Z = ZeroCycle(v, base)
            for j, t in enumerate(_require(inp, "terms", where)):
                tw = f"{where}.terms[{j}]"
                pts = t.get("pts", list(v.base_points))
                if len(pts) != v.d:
                    raise ParseError(f"term needs {v.d} curve coordinates", tw)
                pts = [sc.curve_point(i, p) for i, p in enumerate(pts)]
                a = t.get("a")
                a = v.ab.zero() if a in (None, 0, "0") else _ab_value(v.ab, a, f"{tw}.a")
                Z = Z + ZeroCycle.point(v, pts, a, base, int(t.get("coeff", 1)))
            return Z
    except ParseError as exc:
        if exc.location is None:
            raise ParseError(str(exc), where) from None
        raise
    except (KeyError, ValueError, TypeError, ChowFiltError) as exc:
        raise ParseError(str(exc), where) from None
    raise ParseError(f"unknown input kind {kind!r}", where)

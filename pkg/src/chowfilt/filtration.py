"""The maps between zero-cycles and symbols, and the identities they satisfy.

``phi_r`` sends a closed point ``z`` to ``{phi(z), ..., phi(z)}`` over its
residue field, where ``phi = iota_1 x ... x iota_d x id_A``.  ``psi_r`` goes
back: from ``r`` rows ``(z_1, ..., z_d, a)`` over a level ``L`` it builds an
alternating sum of product points.  Two independent implementations of
``psi_r`` are provided (closed formula and product/Pontryagin formula).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, factorial, prod
from typing import Sequence

from .cycles import (ProductPoint, Variety, ZeroCycle, cyc_degree, modeled_chow_A,
                     pontryagin, product_cycle, pushforward_base)
from .errors import BaseNotGround, LevelMismatch, WrongDimension
from .ext_lattice import check_level, lcm, rel_degree
from .models import AbElement, Divisor, Pic0Class, div_res, div_tr, pic0_reduce
from .symbols import (A_FACTOR, Atom, SymbolSum, row_slot, sym_normalize, sym_trace,
                      symbol_power, underline_quotient)

__all__ = [
    "Certificate", "Row", "SymbolDatum", "albanese", "albanese_via_phi",
    "binomial_closed_form", "binomial_count_oracle", "certify_membership",
    "multilinearity_sides", "phi_r", "phi_r_at_base", "projection_formula_sides",
    "psi_r_blocks", "psi_r_closed", "psi_r_product", "q_of", "roundtrip_report",
    "trace_compatibility_sides", "vanishing_structural_check",
]


# --------------------------------------------------------------------------
# data
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Row:
    zs: tuple  # Divisor or None per curve
    a: AbElement | None


@dataclass(frozen=True)
class SymbolDatum:
    """``r`` rows ``(z_1, ..., z_d, a)`` over ``level``, before any relation."""

    variety: Variety
    level: int
    rows: tuple[Row, ...]

    @classmethod
    def build(cls, variety: Variety, level: int, rows: Sequence) -> "SymbolDatum":
        check_level(level)
        out = []
        for zs, a in rows:
            zs = tuple(zs)
            if len(zs) != variety.d:
                raise ValueError(f"each row needs {variety.d} divisors, got {len(zs)}")
            clean = []
            for i, z in enumerate(zs):
                if z is None or z.is_zero():
                    clean.append(None)
                    continue
                if z.curve is not variety.curves[i]:
                    raise ValueError(f"row entry {i} is not a divisor on {variety.curves[i].name}")
                if z.base != level:
                    raise LevelMismatch(f"divisor over base {z.base} in a datum of level {level}")
                if z.degree():
                    raise LevelMismatch(f"row divisor {z} has degree {z.degree()}, expected 0")
                clean.append(z)
            if a is not None:
                if level % a.level:
                    raise LevelMismatch(f"A-entry of level {a.level} is not rational over {level}")
                if variety.ab.is_zero(a):
                    a = None
            out.append(Row(tuple(clean), a))
        return cls(variety, level, tuple(out))

    @property
    def r(self) -> int:
        return len(self.rows)

    def a_of(self, j: int) -> AbElement:
        a = self.rows[j].a
        return self.variety.ab.zero() if a is None else a

    def describe(self) -> dict:
        ab = self.variety.ab
        return {
            "level": self.level,
            "rows": [{"z": [str(z) if z is not None else "0" for z in row.zs],
                      "a": ab.format(row.a) if row.a is not None else "0"} for row in self.rows],
        }


# --------------------------------------------------------------------------
# Phi
# --------------------------------------------------------------------------

def point_slot(variety: Variety, key: ProductPoint) -> dict[Atom, int]:
    """Atoms of ``phi(pt_1, ..., pt_d, a)``; base points give nothing."""
    slot: dict[Atom, int] = {}
    for i, (p, bp) in enumerate(zip(key.pts, variety.base_points)):
        if p != bp:
            slot[Atom(i + 1, p)] = 1
    for n, c in variety.ab.atom_coords(key.a).items():
        slot[Atom(A_FACTOR, n)] = c
    return slot


def _point_power(variety: Variety, key: ProductPoint, level: int, r: int):
    cache = variety.__dict__.setdefault("_phi_cache", {})
    ck = (key, level, r)
    hit = cache.get(ck)
    if hit is None:
        hit = symbol_power(variety, level, point_slot(variety, key), r, underline=True)
        cache[ck] = hit
    return hit


def phi_r_at_base(Z: ZeroCycle, r: int) -> SymbolSum:
    """``Phi_r`` of a cycle on ``X`` over its own base level."""
    if r < 0:
        raise ValueError("r must be non-negative")
    v = Z.variety

    def items():
        for key, c in Z.terms.items():
            for sym, n in _point_power(v, key, Z.level_of(key), r):
                yield sym, c * n
    return SymbolSum.from_items(v, Z.base, items())


def phi_r(Z: ZeroCycle, r: int) -> SymbolSum:
    """``Phi_r`` on ``CH_0(X)``; ``r = 0`` is the degree (as the empty symbol)."""
    if Z.base != 1:
        raise BaseNotGround(f"Phi_r is defined over the ground level, cycle is over {Z.base}")
    return phi_r_at_base(Z, r)


def q_of(S: SymbolDatum) -> SymbolSum:
    """The datum read as an element of the underlined symbol group."""
    v = S.variety
    slots = [row_slot(v, S.level, row.zs, row.a) for row in S.rows]
    return underline_quotient(sym_normalize(v, S.level, slots))


# --------------------------------------------------------------------------
# Psi
# --------------------------------------------------------------------------

def _blocks(d: int, r: int):
    """``(I, images)`` for all subsets ``I`` of curves and injections into rows."""
    for s in range(min(d, r) + 1):
        for I in itertools.combinations(range(d), s):
            for images in itertools.permutations(range(r), s):
                yield I, images


def psi_r_blocks(S: SymbolDatum) -> list[tuple[tuple, tuple, ZeroCycle]]:
    """``Psi'_r`` split by curve subset ``I`` and injection ``I -> rows``.

    Each entry is ``(I, images, cycle)``, curve and row indices 0-based; blocks
    with a zero selected divisor are omitted.
    """
    v, L, r = S.variety, S.level, S.r
    ab = v.ab
    sums: dict[tuple[int, ...], AbElement] = {}
    out = []

    def subset_sum(nu):
        if nu not in sums:
            sums[nu] = ab.add(*(S.a_of(j) for j in nu))
        return sums[nu]

    for I, images in _blocks(v.d, r):
        divs = [S.rows[row].zs[i] for i, row in zip(I, images)]
        if any(z is None for z in divs):
            continue
        acc: dict[ProductPoint, int] = {}
        free = [j for j in range(r) if j not in images]
        for choice in itertools.product(*(z.terms for z in divs)):
            n = prod(c for _, c in choice)
            pts = list(v.base_points)
            levels = []
            for i, (p, _), z in zip(I, choice, divs):
                pts[i] = p
                levels.append(z.level_of(p))
            pts = tuple(pts)
            # multiplicity of the subscheme over L, then pushed down to level 1
            splitting = prod(l // L for l in levels)
            for j in range(len(free) + 1):
                sign = -1 if (r - len(I) - j) % 2 else 1
                for nu in itertools.combinations(free, j):
                    a = subset_sum(nu)
                    m = v.point_min_level(pts, a)
                    key = ProductPoint(pts, a)
                    acc[key] = acc.get(key, 0) + sign * n * splitting * L // m
        out.append((I, images, ZeroCycle(v, 1, acc)))
    return out


def psi_r_closed(S: SymbolDatum) -> ZeroCycle:
    """``Psi'_r`` by the explicit alternating formula over index subsets."""
    acc: dict[ProductPoint, int] = {}
    for _, _, Z in psi_r_blocks(S):
        for k, c in Z.terms.items():
            acc[k] = acc.get(k, 0) + c
    return ZeroCycle(S.variety, 1, acc)


def psi_r_product(S: SymbolDatum) -> ZeroCycle:
    """``Psi'_r`` as a sum of intersections with Pontryagin products."""
    v, L, r = S.variety, S.level, S.r
    av = v.abelian_part()
    zero_pt = ZeroCycle.point(av, (), None, base=L)
    factors = [ZeroCycle.point(av, (), S.a_of(j), base=L) - zero_pt for j in range(r)]
    total = ZeroCycle(v, 1)
    for I, images in _blocks(v.d, r):
        selected = {}
        for i, row in zip(I, images):
            z = S.rows[row].zs[i]
            selected[i] = z if z is not None else Divisor.build(v.curves[i], L, {})
        a_cycle = zero_pt
        for j in range(r):
            if j not in images:
                a_cycle = pontryagin(a_cycle, factors[j])
        W = product_cycle(v, selected, a_cycle, L)
        total = total + pushforward_base(W, 1)
    return total


# --------------------------------------------------------------------------
# Albanese
# --------------------------------------------------------------------------

def albanese(Z: ZeroCycle) -> tuple[int, tuple[Pic0Class, ...], AbElement]:
    """``(deg, alb)`` with ``alb`` summing traces of ``phi`` of each point."""
    if Z.base != 1:
        raise BaseNotGround("the Albanese map is evaluated over the ground level")
    v = Z.variety
    ab = v.ab
    curve_parts = [Divisor.build(c, 1, {}) for c in v.curves]
    a_parts = []
    for key, c in Z.terms.items():
        lvl = Z.level_of(key)
        for i, (cv, p) in enumerate(zip(v.curves, key.pts)):
            D = cv.divisor([(p, 1), (cv.base_point, -1)], base=lvl)
            curve_parts[i] = curve_parts[i] + c * div_tr(D, 1)
        a_parts.append(ab.scale(c, ab.tr(key.a, lvl, 1)))
    return (cyc_degree(Z), tuple(pic0_reduce(D) for D in curve_parts), ab.add(*a_parts))


def albanese_via_phi(Z: ZeroCycle) -> tuple[int, tuple[Pic0Class, ...], AbElement]:
    """``(Phi_0, Tr o Phi_1)``: evaluate each degree-one symbol as a point."""
    v = Z.variety
    ab = v.ab
    s0 = phi_r(Z, 0)
    deg = sum(c * s.level for s, c in s0.terms.items())
    curve_parts = [Divisor.build(c, 1, {}) for c in v.curves]
    a_parts = []
    for sym, c in phi_r(Z, 1).terms.items():
        (atom,) = sym.atoms
        if atom.factor == A_FACTOR:
            a_parts.append(ab.scale(c, ab.tr(ab.named(atom.name), sym.level, 1)))
        else:
            cv = v.curves[atom.factor - 1]
            D = cv.divisor([(atom.name, 1), (cv.base_point, -1)], base=sym.level)
            curve_parts[atom.factor - 1] = curve_parts[atom.factor - 1] + c * div_tr(D, 1)
    return (deg, tuple(pic0_reduce(D) for D in curve_parts), ab.add(*a_parts))


# --------------------------------------------------------------------------
# certificates and reports
# --------------------------------------------------------------------------

@dataclass
class Certificate:
    """One-sided evidence for ``Z`` lying in ``F^r``.

    ``Certified`` means every ``Phi_j`` (``j < r``) has zero normal form.
    ``Unknown`` is not a disproof: relations beyond the normal form are not
    searched for.
    """

    cycle: ZeroCycle
    claimed_r: int
    status: str
    evidence: list[SymbolSum] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return self.status == "Certified"


def certify_membership(Z: ZeroCycle, r: int) -> Certificate:
    evidence = [phi_r(Z, j) for j in range(r)]
    status = "Certified" if all(e.is_zero() for e in evidence) else "Unknown"
    return Certificate(Z, r, status, evidence)


def roundtrip_report(S: SymbolDatum, Z: ZeroCycle | None = None) -> dict:
    """Check ``Phi_t(Psi'_r S) = 0`` for ``t < r`` and ``= r! q(S)`` at ``t = r``."""
    r = S.r
    if Z is None:
        Z = psi_r_closed(S)
    entries = []
    for t in range(r):
        img = phi_r(Z, t)
        entries.append({"name": f"phi_{t}_vanishes", "pass": img.is_zero(),
                        "witness": None if img.is_zero() else str(img)})
    img = phi_r(Z, r)
    want = factorial(r) * q_of(S)
    ok = img == want
    entries.append({"name": f"phi_{r}_is_{factorial(r)}_q", "pass": ok,
                    "witness": None if ok else {"got": str(img), "expected": str(want)}})
    return {"r": r, "level": S.level, "pass": all(e["pass"] for e in entries), "checks": entries}


# --------------------------------------------------------------------------
# combinatorial lemma
# --------------------------------------------------------------------------

def binomial_count_oracle(r: int, h: Sequence[int], j: int) -> int:
    """Number of ``j``-subsets of ``{1..r}`` containing every entry of ``h``
    (brute force)."""
    need = set(h)
    if not need <= set(range(1, r + 1)):
        raise ValueError("entries of h must lie in 1..r")
    return sum(1 for X in itertools.combinations(range(1, r + 1), j) if need <= set(X))


def binomial_closed_form(r: int, h: Sequence[int], j: int) -> int:
    k = len(set(h))
    return comb(r - k, j - k) if j >= k else 0


# --------------------------------------------------------------------------
# vanishing beyond the dimension
# --------------------------------------------------------------------------

def vanishing_structural_check(S: SymbolDatum, g: int) -> dict:
    """Classify each block of ``Psi'_r(S)`` for ``r > d + g``.

    A block is ``formally-zero`` when a selected divisor or a Pontryagin
    factor ``[a_j] - [0]`` vanishes.  Otherwise its A-part is a Pontryagin
    product of ``r - s`` degree-zero cycles; with ``r - s >= g + 1`` it
    is zero in CH_0(A) by the nilpotence axiom.  For ``g = 1`` the elliptic
    model also checks the product is ``(0, 0)`` in ``Z + A``.
    """
    v, r, L = S.variety, S.r, S.level
    report = {"r": r, "d": v.d, "g": g, "blocks": [], "counts": {}, "error": None}
    if r <= v.d + g:
        report["error"] = f"precondition r > d + g fails: {r} <= {v.d} + {g}"
        return report
    if g == 1 and v.ab.model_dimension != 1:
        raise WrongDimension("g = 1 requires an abelian model of dimension 1")
    av = v.abelian_part()
    zero_pt = ZeroCycle.point(av, (), None, base=L)
    counts = {"formally-zero": 0, "pontryagin-verified": 0, "pontryagin-axiom": 0, "unclassified": 0}
    for I, images in _blocks(v.d, r):
        free = [j for j in range(r) if j not in images]
        block = {"curves": [i + 1 for i in I], "rows": [j + 1 for j in images],
                 "factors": len(free)}
        zero_div = any(S.rows[row].zs[i] is None for i, row in zip(I, images))
        zero_a = [j + 1 for j in free if S.rows[j].a is None]
        if zero_div or zero_a:
            block["bucket"] = "formally-zero"
            block["reason"] = "zero divisor selected" if zero_div else f"a_{zero_a[0]} = 0"
        elif len(free) >= g + 1:
            prod_cycle = zero_pt
            for j in free:
                prod_cycle = pontryagin(prod_cycle, ZeroCycle.point(av, (), S.a_of(j), base=L) - zero_pt)
            block["a_part"] = str(prod_cycle)
            if g == 1:
                deg, alb = modeled_chow_A(prod_cycle)
                ok = deg == 0 and v.ab.is_zero(alb)
                block["bucket"] = "pontryagin-verified" if ok else "unclassified"
                block["chow_A"] = [deg, v.ab.format(alb)]
            else:
                block["bucket"] = "pontryagin-axiom"
                block["axiom"] = "degree-zero cycles are Pontryagin-nilpotent of order dim A + 1"
        else:
            block["bucket"] = "unclassified"
        counts[block["bucket"]] += 1
        report["blocks"].append(block)
    report["counts"] = counts
    return report


# --------------------------------------------------------------------------
# the three structural identities
# --------------------------------------------------------------------------

def trace_compatibility_sides(Z: ZeroCycle) -> list[tuple[SymbolSum, SymbolSum]]:
    """For ``r = 0..3``: ``Phi_r(pi_* Z)`` and ``Tr(Phi_r^{base}(Z))``."""
    out = []
    for r in range(4):
        out.append((phi_r(pushforward_base(Z, 1), r), sym_trace(phi_r_at_base(Z, r), 1)))
    return out


def multilinearity_sides(S: SymbolDatum, t: int, extra: Sequence[Divisor | None]):
    """Both sides of additivity in the curve part of row ``t``.

    Row ``t`` of ``S`` is ``(z, a_t)``; ``extra`` is ``z~``.  Returns
    ``Psi'(.., (z + z~, a_t), ..)`` and
    ``Psi'(.., (z, 0), ..) + Psi'(.., (z~, a_t), ..)``.
    """
    v, L = S.variety, S.level
    row = S.rows[t]

    def add(z, w):
        if z is None:
            return w
        if w is None:
            return z
        return z + w

    def with_row(zs, a):
        rows = [(r_.zs, r_.a) for r_ in S.rows]
        rows[t] = (zs, a)
        return SymbolDatum.build(v, L, rows)

    summed = with_row(tuple(add(z, w) for z, w in zip(row.zs, extra)), row.a)
    left = with_row(row.zs, None)
    right = with_row(tuple(extra), row.a)
    return psi_r_closed(summed), psi_r_closed(left) + psi_r_closed(right)


def projection_formula_sides(v: Variety, E: int, L: int, rows_E: Sequence, t: int,
                             zs_L: Sequence[Divisor | None]):
    """Both sides of the partial projection formula for a tower ``E | L``.

    ``rows_E`` are rows over ``E``; row ``t`` is replaced by ``(zs_L, 0)``
    over ``L`` on one side and by its trace ``(Tr zs_L, 0)`` over ``E`` on
    the other, with the remaining rows restricted to ``L``.
    """
    rel_degree(L, E)
    up = []
    down = []
    for j, (zs, a) in enumerate(rows_E):
        if j == t:
            up.append((tuple(zs_L), None))
            down.append((tuple(None if z is None else div_tr(z, E) for z in zs_L), None))
        else:
            up.append((tuple(None if z is None else div_res(z, L) for z in zs), a))
            down.append((tuple(zs), a))
    return (psi_r_closed(SymbolDatum.build(v, L, up)),
            psi_r_closed(SymbolDatum.build(v, E, down)))

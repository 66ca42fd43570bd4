"""Normal forms for symmetric K-group symbols on ``J_1 x ... x J_d x A``.

Every slot of a symbol is expanded into atoms, each living in exactly one
factor: ``J_i`` atoms are catalog points ``y`` standing for ``iota(y)``, and
``A`` atoms are basis generators of a constant abelian model.  After full
multilinear expansion the atoms of a pure symbol are sorted, which is the
symmetrization.

Two further relations are applied because they are consequences of the
projection formula and of torsion:

* a symbol at level ``l`` whose atoms are all defined over a smaller level
  ``l'`` (containing the base) equals ``l/l'`` times the same symbol at
  ``l'``;
* a symbol containing an ``A`` generator of order ``n`` is killed by ``n``.

Both are valid identities, so a zero normal form is a genuine zero.  Nothing
else (Weil relations, Pic^0 relations, general projection formulas) is
applied unless a caller asks for it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import factorial, gcd
from typing import Iterable, Mapping, Sequence

from .cycles import Variety
from .errors import DegreeCheckFailed, LevelMismatch, UnsupportedModel
from .ext_lattice import check_level, lcm, rel_degree
from .models import AbElement, ConstantAbModel, Divisor, pic0_reduce

__all__ = [
    "A_FACTOR", "Atom", "PureSymbol", "SymbolSum", "WRRow", "atom_expand_entry",
    "repeats_jacobian", "rewrite_atoms", "row_slot", "sym_normalize", "sym_res",
    "sym_trace", "symbol_power",
    "underline_quotient", "wr_element",
]

A_FACTOR = 0


@dataclass(frozen=True)
class Atom:
    """``factor`` is ``1..d`` for ``J_i`` and ``0`` for ``A``."""

    factor: int
    name: str

    def sort_key(self):
        return (self.factor == A_FACTOR, self.factor, self.name)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def label(self) -> str:
        return f"{self.name}_A" if self.factor == A_FACTOR else f"{self.name}_J{self.factor}"


@dataclass(frozen=True)
class PureSymbol:
    level: int
    atoms: tuple[Atom, ...]

    @property
    def r(self) -> int:
        return len(self.atoms)

    def __str__(self):
        return "{" + ", ".join(a.label() for a in self.atoms) + "}@" + str(self.level)


def _check_symbolic(variety: Variety):
    if not isinstance(variety.ab, ConstantAbModel):
        raise UnsupportedModel(f"symbols need a constant abelian model, got {variety.ab.kind}")


def atom_level(variety: Variety, atom: Atom) -> int:
    if atom.factor == A_FACTOR:
        return 1
    return variety.curves[atom.factor - 1].min_level(atom.name)


def atom_order(variety: Variety, atom: Atom) -> int:
    """Order of an atom, ``0`` meaning infinite.  ``J`` atoms are free."""
    if atom.factor == A_FACTOR:
        return variety.ab.atom_order(atom.name)
    return 0


class SymbolSum:
    """Canonical integer combination of pure symbols over a nominal base."""

    __slots__ = ("variety", "base", "terms")

    def __init__(self, variety: Variety, base: int = 1, terms: Mapping[PureSymbol, int] | None = None,
                 _canonical: bool = False):
        _check_symbolic(variety)
        self.variety = variety
        self.base = check_level(base)
        if _canonical:
            self.terms = dict(terms or {})
        else:
            self.terms = {}
            for s, c in (terms or {}).items():
                self._accumulate(s, c)
            self._finish()

    # canonical form -----------------------------------------------------
    def _canonical_key(self, sym: PureSymbol, c: int) -> tuple[PureSymbol, int]:
        v = self.variety
        lo = lcm(self.base, *(atom_level(v, a) for a in sym.atoms))
        if sym.level % lo:
            raise LevelMismatch(f"symbol {sym} carries atoms not defined over its level")
        atoms = tuple(sorted(sym.atoms))
        return PureSymbol(lo, atoms), c * (sym.level // lo)

    def _accumulate(self, sym: PureSymbol, c: int):
        key, c = self._canonical_key(sym, c)
        self.terms[key] = self.terms.get(key, 0) + c

    def _finish(self):
        out = {}
        for s, c in self.terms.items():
            n = 0
            for a in s.atoms:
                if a.factor == A_FACTOR:
                    n = gcd(n, atom_order(self.variety, a))
            if n:
                c %= n
            if c:
                out[s] = c
        self.terms = out

    @classmethod
    def from_items(cls, variety: Variety, base: int, items: Iterable[tuple[PureSymbol, int]]) -> "SymbolSum":
        out = cls(variety, base)
        for s, c in items:
            out._accumulate(s, c)
        out._finish()
        return out

    @classmethod
    def scalar(cls, variety: Variety, n: int, base: int = 1) -> "SymbolSum":
        """``n`` in the ``S_0 = Z`` summand (the empty symbol at the base)."""
        return cls(variety, base, {PureSymbol(base, ()): n})

    # inspection ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda t: (t[0].level, [a.sort_key() for a in t[0].atoms]))

    def __eq__(self, other):
        if not isinstance(other, SymbolSum):
            return NotImplemented
        return self.variety is other.variety and self.base == other.base and self.terms == other.terms

    def __hash__(self):
        return hash((self.base, frozenset(self.terms.items())))

    def _check(self, other: "SymbolSum"):
        if other.variety is not self.variety:
            raise ValueError("symbol sums over different varieties")
        if other.base != self.base:
            raise LevelMismatch(f"symbol sums over bases {self.base} and {other.base}")

    def __add__(self, other: "SymbolSum") -> "SymbolSum":
        self._check(other)
        return SymbolSum.from_items(self.variety, self.base,
                                    itertools.chain(self.terms.items(), other.terms.items()))

    def __neg__(self) -> "SymbolSum":
        return SymbolSum.from_items(self.variety, self.base, ((s, -c) for s, c in self.terms.items()))

    def __sub__(self, other: "SymbolSum") -> "SymbolSum":
        return self + (-other)

    def __rmul__(self, n: int) -> "SymbolSum":
        return SymbolSum.from_items(self.variety, self.base, ((s, n * c) for s, c in self.terms.items()))

    def __repr__(self):
        return f"SymbolSum(base={self.base}, {len(self.terms)} terms)"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for s, c in self.items():
            body = str(s) if s.atoms else f"[{s.level}]"
            parts.append(("+ " if c > 0 else "- ") + ("" if abs(c) == 1 else f"{abs(c)}") + body)
        out = " ".join(parts)
        return out[2:] if out.startswith("+ ") else "-" + out[2:]

    def to_json(self) -> list:
        return [{"level": s.level, "atoms": [a.label() for a in s.atoms], "coeff": c}
                for s, c in self.items()]


# --------------------------------------------------------------------------
# slot entries
# --------------------------------------------------------------------------

SlotEntry = Mapping[Atom, int]


def atom_expand_entry(variety: Variety, factor: int, value, level: int) -> dict[Atom, int]:
    """Atoms of one coordinate of a slot.

    ``value`` is a degree-zero ``Divisor`` for a curve factor (all points
    must be rational over ``level``) or an ``AbElement`` for ``A``.
    """
    if factor == A_FACTOR:
        if value is None:
            return {}
        if level % value.level:
            raise LevelMismatch(f"A-entry of level {value.level} is not rational over {level}")
        return {Atom(A_FACTOR, n): c for n, c in variety.ab.atom_coords(value).items()}
    if value is None:
        return {}
    D: Divisor = value
    if D.base != level:
        raise LevelMismatch(f"divisor over base {D.base} used at level {level}")
    if D.degree():
        raise LevelMismatch(f"divisor {D} does not have degree 0")
    out: dict[Atom, int] = {}
    bp = D.curve.base_point
    for p, c in D.terms:
        if level % D.curve.min_level(p):
            raise LevelMismatch(f"point {p} is not rational over level {level}; "
                                "expand it with a trace first")
        if p != bp:
            out[Atom(factor, p)] = out.get(Atom(factor, p), 0) + c
    return out


def row_slot(variety: Variety, level: int, zs: Sequence, a) -> dict[Atom, int]:
    """The slot entry ``(z_1, ..., z_d, a)`` expanded into atoms."""
    if len(zs) != variety.d:
        raise ValueError(f"row needs {variety.d} curve entries, got {len(zs)}")
    out: dict[Atom, int] = {}
    for i, z in enumerate(zs):
        out.update(atom_expand_entry(variety, i + 1, z, level))
    out.update(atom_expand_entry(variety, A_FACTOR, a, level))
    return {k: v for k, v in out.items() if v}


def sym_normalize(variety: Variety, level: int, slots: Sequence[SlotEntry], base: int = 1) -> SymbolSum:
    """Multilinear expansion of ``{slot_1, ..., slot_r}`` at ``level``."""
    check_level(level)
    acc: dict[tuple[Atom, ...], int] = {(): 1}
    for slot in slots:
        nxt: dict[tuple[Atom, ...], int] = {}
        for atoms, c in acc.items():
            for atom, n in slot.items():
                if not n:
                    continue
                key = atoms + (atom,)
                nxt[key] = nxt.get(key, 0) + c * n
        acc = nxt
    return SymbolSum.from_items(variety, base,
                                ((PureSymbol(level, k), c) for k, c in acc.items()))


def symbol_power(variety: Variety, level: int, slot: SlotEntry, r: int, base: int = 1,
                 coeff: int = 1, underline: bool = True) -> list[tuple[PureSymbol, int]]:
    """Terms of ``coeff * {slot, ..., slot}`` (``r`` copies), not yet canonical.

    Uses the multinomial theorem; with ``underline`` the patterns repeating
    a Jacobian factor are never generated.
    """
    atoms = sorted(a for a, n in slot.items() if n)
    j_atoms = [a for a in atoms if a.factor != A_FACTOR]
    a_atoms = [a for a in atoms if a.factor == A_FACTOR]
    out = []
    if underline:
        by_factor: dict[int, list[Atom]] = {}
        for a in j_atoms:
            by_factor.setdefault(a.factor, []).append(a)
        choices = []
        for f in sorted(by_factor):
            choices.append([None] + by_factor[f])
        j_patterns = []
        for pick in itertools.product(*choices):
            chosen = [a for a in pick if a is not None]
            if len(chosen) <= r:
                j_patterns.append({a: 1 for a in chosen})
    else:
        j_patterns = [dict(zip(j_atoms, ms)) for ms in _compositions_upto(len(j_atoms), r)]
    for jp in j_patterns:
        used = sum(jp.values())
        rest = r - used
        for ms in _compositions(len(a_atoms), rest):
            mult = factorial(r)
            c = coeff
            for a, m in jp.items():
                mult //= factorial(m)
                c *= slot[a] ** m
            for a, m in zip(a_atoms, ms):
                mult //= factorial(m)
                c *= slot[a] ** m
            if not c:
                continue
            seq = []
            for a in atoms:
                m = jp.get(a, 0) if a.factor != A_FACTOR else ms[a_atoms.index(a)]
                seq.extend([a] * m)
            out.append((PureSymbol(level, tuple(seq)), mult * c))
    return out


def _compositions(k: int, n: int):
    """All ``k``-tuples of non-negative integers summing to ``n``."""
    if k == 0:
        if n == 0:
            yield ()
        return
    if k == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(k - 1, n - first):
            yield (first,) + rest


def _compositions_upto(k: int, n: int):
    for total in range(n + 1):
        yield from _compositions(k, total)


# --------------------------------------------------------------------------
# quotient, trace, restriction
# --------------------------------------------------------------------------

def repeats_jacobian(sym: PureSymbol) -> bool:
    seen = set()
    for a in sym.atoms:
        if a.factor == A_FACTOR:
            continue
        if a.factor in seen:
            return True
        seen.add(a.factor)
    return False


def underline_quotient(S: SymbolSum) -> SymbolSum:
    """Keep only patterns with at most one atom from each Jacobian."""
    return SymbolSum(S.variety, S.base, {s: c for s, c in S.terms.items() if not repeats_jacobian(s)},
                     _canonical=True)


def sym_trace(S: SymbolSum, to: int) -> SymbolSum:
    """Reinterpret symbols over the smaller base ``to``.

    The level of a symbol is untouched by the trace itself; the canonical
    form may then move it down to the smallest level its atoms allow.
    """
    rel_degree(S.base, to)
    return SymbolSum.from_items(S.variety, to, S.terms.items())


def sym_res(S: SymbolSum, to: int) -> SymbolSum:
    """Restriction to base ``to``: ``gcd(E, to)/base`` copies at ``lcm(E, to)``."""
    rel_degree(to, S.base)
    return SymbolSum.from_items(
        S.variety, to,
        ((PureSymbol(lcm(s.level, to), s.atoms), c * gcd(s.level, to) // S.base)
         for s, c in S.terms.items()))


# --------------------------------------------------------------------------
# Weil relations and verified rewrites
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WRRow:
    """One place of a Weil relation: residue level, order of ``f``, slots."""

    level: int
    ord: int
    slots: tuple


def wr_element(variety: Variety, rows: Sequence[WRRow], base: int = 1) -> SymbolSum:
    """``sum ord_v(f) {s_v(g_1), ..., s_v(g_r)}`` from a tabulated place list.

    The result spans a relation: callers may treat it as zero.
    """
    deg = sum(row.ord * rel_degree(row.level, base) for row in rows)
    if deg:
        raise DegreeCheckFailed(f"orders of the tabulated divisor sum to degree {deg}, not 0")
    out = SymbolSum(variety, base)
    for row in rows:
        out = out + row.ord * sym_normalize(variety, row.level, row.slots, base)
    return out


def rewrite_atoms(S: SymbolSum, rules: Mapping[Atom, Mapping[Atom, int]]) -> SymbolSum:
    """Substitute ``J`` atoms by combinations whose ``iota`` classes agree.

    Each rule is checked with Pic^0 reduction at the atom's level before it
    is used; an invalid rule raises ``ValueError``.
    """
    v = S.variety
    for atom, repl in rules.items():
        if atom.factor == A_FACTOR or any(b.factor != atom.factor for b in repl):
            raise ValueError("rewrites are only supported between atoms of one Jacobian")
        curve = v.curves[atom.factor - 1]
        lvl = lcm(atom_level(v, atom), *(atom_level(v, b) for b in repl))
        bp = curve.base_point
        terms = [(atom.name, 1), (bp, -1)]
        for b, c in repl.items():
            terms += [(b.name, -c), (bp, c)]
        if not pic0_reduce(curve.divisor(terms, base=lvl)).is_zero():
            raise ValueError(f"rewrite {atom.label()} -> {repl} does not hold in Pic^0")
    return SymbolSum.from_items(v, S.base, _expand_all(v, S, rules))


def _expand_all(v, S, rules):
    for s, c in S.terms.items():
        slots = [dict(rules[a]) if a in rules else {a: 1} for a in s.atoms]
        for t, n in sym_normalize(v, s.level, slots, S.base).terms.items():
            yield t, c * n

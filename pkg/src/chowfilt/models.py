"""Curves with presented Jacobians and abelian varieties as point functors.

A curve is given by a catalog of named closed points (each with the minimal
level it is defined over), a rational base point and a list of principal
divisors.  ``Pic^0`` at a level is the free group on the catalog modulo the
relations declared at dividing levels, decided by Hermite reduction.

Galois conjugates are identified: a point of minimal level ``m`` seen over
base ``b`` is one closed point of level ``lcm(m, b)``, and restricting or
tracing only rescales multiplicities.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Iterable, Mapping

from .errors import LevelMismatch, NonZeroDegree, NotATower, UnsupportedModel
from .ext_lattice import check_level, divisors_of, lcm, rel_degree
from .lattice import hermite_basis, reduce_vector, smith_decomposition

__all__ = [
    "AbElement", "AbModel", "ConstantAbModel", "CurveModel", "Divisor",
    "Pic0Class", "TableAbModel", "Violation", "div_res", "div_tr", "iota",
    "jacobian_ab_model", "pic0_equal", "pic0_reduce", "validate_models",
]


# --------------------------------------------------------------------------
# curves and divisors
# --------------------------------------------------------------------------

@dataclass(eq=False)
class CurveModel:
    """A curve presented by its point catalog and principal divisors.

    ``relations`` holds ``(level, {point: coeff})`` pairs: the divisor is
    principal over ``level`` and every multiple of it.
    """

    name: str
    points: dict[str, int]
    base_point: str
    relations: list[tuple[int, dict[str, int]]] = field(default_factory=list)
    involution: dict[str, str] | None = None
    weierstrass: str | None = None

    def __post_init__(self):
        self.points = {str(k): check_level(v) for k, v in self.points.items()}
        if self.base_point not in self.points:
            raise ValueError(f"{self.name}: base point {self.base_point!r} not in catalog")
        if self.points[self.base_point] != 1:
            raise ValueError(f"{self.name}: base point must be rational (level 1)")
        rels = []
        for lvl, terms in self.relations:
            check_level(lvl)
            unknown = set(terms) - set(self.points)
            if unknown:
                raise ValueError(f"{self.name}: relation uses unknown points {sorted(unknown)}")
            rels.append((lvl, {k: int(v) for k, v in terms.items() if v}))
        self.relations = rels
        self._lattices: dict[int, list] = {}

    def __repr__(self):
        return f"CurveModel({self.name!r}, {len(self.points)} points)"

    @cached_property
    def index(self) -> dict[str, int]:
        return {pt: i for i, pt in enumerate(self.points)}

    def min_level(self, pt: str) -> int:
        try:
            return self.points[pt]
        except KeyError:
            raise KeyError(f"point {pt!r} is not in the catalog of {self.name}") from None

    def divisor(self, terms: Mapping[str, int] | Iterable[tuple[str, int]], base: int = 1) -> "Divisor":
        return Divisor.build(self, base, terms)

    def point(self, pt: str, base: int = 1) -> "Divisor":
        return Divisor.build(self, base, {pt: 1})

    def relation_divisors(self, level: int) -> list["Divisor"]:
        """Principal divisors over ``level`` coming from the declared relations."""
        out = []
        for lvl, terms in self.relations:
            if level % lvl == 0:
                out.append(div_res(Divisor.build(self, lvl, terms), level))
        return out

    def lattice(self, level: int):
        if level not in self._lattices:
            rows = [d.vector() for d in self.relation_divisors(level)]
            n = len(self.points)
            # later catalog entries become pivots so early names stay free
            self._lattices[level] = hermite_basis(rows, n, order=range(n - 1, -1, -1))
        return self._lattices[level]


@dataclass(frozen=True)
class Divisor:
    """Formal sum of catalog points over a base level.

    A term ``c [pt]`` stands for ``c`` times the closed point of level
    ``lcm(min_level(pt), base)``, of degree that level over ``base``.
    """

    curve: CurveModel
    base: int
    terms: tuple[tuple[str, int], ...]

    @classmethod
    def build(cls, curve, base, terms) -> "Divisor":
        check_level(base)
        acc: dict[str, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for pt, c in items:
            curve.min_level(pt)
            acc[pt] = acc.get(pt, 0) + int(c)
        order = curve.index
        return cls(curve, base, tuple(sorted(((p, c) for p, c in acc.items() if c),
                                             key=lambda t: order[t[0]])))

    def level_of(self, pt: str) -> int:
        return lcm(self.curve.min_level(pt), self.base)

    def degree(self) -> int:
        return sum(c * self.level_of(p) // self.base for p, c in self.terms)

    def vector(self) -> tuple[int, ...]:
        v = [0] * len(self.curve.points)
        for p, c in self.terms:
            v[self.curve.index[p]] = c
        return tuple(v)

    def as_dict(self) -> dict[str, int]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "Divisor"):
        if other.curve is not self.curve:
            raise ValueError("divisors live on different curves")
        if other.base != self.base:
            raise LevelMismatch(f"divisors over bases {self.base} and {other.base}")

    def __add__(self, other: "Divisor") -> "Divisor":
        self._check(other)
        return Divisor.build(self.curve, self.base, list(self.terms) + list(other.terms))

    def __neg__(self) -> "Divisor":
        return Divisor(self.curve, self.base, tuple((p, -c) for p, c in self.terms))

    def __sub__(self, other: "Divisor") -> "Divisor":
        return self + (-other)

    def __rmul__(self, k: int) -> "Divisor":
        return Divisor.build(self.curve, self.base, [(p, k * c) for p, c in self.terms])

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for p, c in self.terms:
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{abs(c)}"
            parts.append(f"{sign} {mag}[{p}]")
        s = " ".join(parts)
        return (s[2:] if s.startswith("+ ") else "-" + s[2:]) + f" @{self.base}"


def div_res(D: Divisor, to: int) -> Divisor:
    """Base change of ``D`` to the level ``to``.

    A term at level ``l`` splits into ``gcd(l, to) / base`` identified copies.
    """
    rel_degree(to, D.base)
    terms = [(p, c * gcd(D.level_of(p), to) // D.base) for p, c in D.terms]
    return Divisor.build(D.curve, to, terms)


def div_tr(D: Divisor, to: int) -> Divisor:
    """Pushforward of ``D`` to the subfield ``to``.

    The closed point of level ``l`` maps onto the point of level
    ``lcm(min_level, to)`` with multiplicity the residue degree between them.
    """
    rel_degree(D.base, to)
    terms = []
    for p, c in D.terms:
        lo = lcm(D.curve.min_level(p), to)
        terms.append((p, c * (D.level_of(p) // lo)))
    return Divisor.build(D.curve, to, terms)


@dataclass(frozen=True)
class Pic0Class:
    """A degree-zero class stored as its canonical reduced representative."""

    curve: CurveModel
    level: int
    vec: tuple[int, ...]

    @property
    def representative(self) -> Divisor:
        names = list(self.curve.points)
        return Divisor.build(self.curve, self.level,
                             [(names[i], c) for i, c in enumerate(self.vec) if c])

    def is_zero(self) -> bool:
        return not any(self.vec)

    def __add__(self, other: "Pic0Class") -> "Pic0Class":
        return pic0_reduce(self.representative + other.representative)

    def __neg__(self) -> "Pic0Class":
        return pic0_reduce(-self.representative)

    def __sub__(self, other: "Pic0Class") -> "Pic0Class":
        return self + (-other)

    def __rmul__(self, k: int) -> "Pic0Class":
        return pic0_reduce(k * self.representative)

    def __str__(self):
        return f"<{self.representative}>"


def pic0_reduce(D: Divisor, level: int | None = None) -> Pic0Class:
    """Canonical class of a degree-zero divisor modulo principal divisors."""
    if level is not None and level != D.base:
        D = div_res(D, level)
    if D.degree() != 0:
        raise NonZeroDegree(f"divisor {D} has degree {D.degree()}")
    vec = reduce_vector(D.vector(), D.curve.lattice(D.base))
    return Pic0Class(D.curve, D.base, vec)


def pic0_equal(D1: Divisor, D2: Divisor) -> bool:
    return pic0_reduce(D1 - D2).is_zero()


def iota(curve: CurveModel, pt: str, level: int = 1) -> Pic0Class:
    """Class of ``[pt] - [base point]`` over ``level``."""
    if level % curve.min_level(pt):
        raise LevelMismatch(f"{pt} (min level {curve.min_level(pt)}) is not rational over level {level}")
    return pic0_reduce(curve.divisor([(pt, 1), (curve.base_point, -1)], base=level))


# --------------------------------------------------------------------------
# abelian varieties
# --------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class AbElement:
    """A point of the abelian model, stored at its minimal level."""

    level: int
    vec: tuple[int, ...]


class AbModel:
    """Common interface of the abelian-variety point functors.

    Elements are always canonical: kept at the smallest level they are
    defined over, so restriction never changes the stored value.
    """

    kind = "abstract"

    def __init__(self, model_dimension: int = 1, names: Mapping[str, AbElement] | None = None):
        self.model_dimension = model_dimension
        self.names: dict[str, AbElement] = dict(names or {})

    # subclasses implement these on raw vectors
    def group(self, level: int) -> tuple[int, ...]:
        raise NotImplementedError

    def res_raw(self, vec, frm: int, to: int) -> tuple[int, ...]:
        raise NotImplementedError

    def tr_raw(self, vec, frm: int, to: int) -> tuple[int, ...]:
        raise NotImplementedError

    def canonical_raw(self, vec, level: int) -> AbElement:
        raise NotImplementedError

    def configured_levels(self) -> list[int]:
        return [1]

    # ----------------------------------------------------------------
    def reduce(self, vec, level: int) -> tuple[int, ...]:
        inv = self.group(level)
        if len(vec) != len(inv):
            raise ValueError(f"vector {vec} has wrong length for A({level}) = {inv}")
        return tuple(x % n if n else x for x, n in zip(vec, inv))

    def element(self, vec, level: int = 1) -> AbElement:
        return self.canonical_raw(self.reduce(tuple(vec), level), level)

    def named(self, name: str) -> AbElement:
        try:
            return self.names[name]
        except KeyError:
            raise KeyError(f"unknown abelian-variety element {name!r}") from None

    def zero(self) -> AbElement:
        return AbElement(1, tuple(0 for _ in self.group(1)))

    def is_zero(self, x: AbElement) -> bool:
        return not any(x.vec)

    def at(self, x: AbElement, level: int) -> tuple[int, ...]:
        """Raw coordinates of ``x`` viewed in ``A(level)``."""
        if level % x.level:
            raise LevelMismatch(f"element of level {x.level} is not defined over level {level}")
        return self.res_raw(x.vec, x.level, level)

    def add(self, *xs: AbElement) -> AbElement:
        if not xs:
            return self.zero()
        lvl = lcm(*(x.level for x in xs))
        acc = [0] * len(self.group(lvl))
        for x in xs:
            acc = [a + b for a, b in zip(acc, self.at(x, lvl))]
        return self.element(acc, lvl)

    def neg(self, x: AbElement) -> AbElement:
        return self.element([-c for c in x.vec], x.level)

    def scale(self, k: int, x: AbElement) -> AbElement:
        return self.element([k * c for c in x.vec], x.level)

    def sub(self, x: AbElement, y: AbElement) -> AbElement:
        return self.add(x, self.neg(y))

    def res(self, x: AbElement, to: int) -> AbElement:
        # canonical storage makes restriction the identity on stored values
        self.at(x, to)
        return x

    def tr(self, x: AbElement, frm: int, to: int) -> AbElement:
        """``Tr_{frm/to}`` of ``x`` viewed over ``frm``."""
        rel_degree(frm, to)
        return self.element(self.tr_raw(self.at(x, frm), frm, to), to)

    def combination(self, coeffs: Mapping[str, int]) -> AbElement:
        parts = [self.scale(c, self.named(n)) for n, c in coeffs.items() if c]
        return self.add(*parts)

    # symbol expansion -----------------------------------------------
    def atom_coords(self, x: AbElement) -> dict[str, int]:
        raise UnsupportedModel(f"{self.kind} abelian models cannot be expanded into symbol atoms")

    def atom_order(self, name: str) -> int:
        raise UnsupportedModel(f"{self.kind} abelian models have no symbol atoms")

    def format(self, x: AbElement) -> str:
        return f"{list(x.vec)}@{x.level}"


class ConstantAbModel(AbModel):
    """``A(n) = G`` for every level, restriction the identity and trace
    ``Tr_{n/m}`` multiplication by ``n/m``.

    ``invariants`` lists the cyclic orders of ``G`` (``0`` for a copy of Z).
    """

    kind = "constant"

    def __init__(self, invariants, basis_names=None, aliases=None, model_dimension=1,
                 levels=(1,)):
        self.invariants = tuple(int(n) for n in invariants)
        if any(n < 0 or n == 1 for n in self.invariants):
            raise ValueError("invariants must be 0 (free) or >= 2")
        if basis_names is None:
            basis_names = [f"e{i + 1}" for i in range(len(self.invariants))]
        self.basis_names = tuple(basis_names)
        if len(self.basis_names) != len(self.invariants):
            raise ValueError("one basis name per invariant is required")
        self.levels = tuple(sorted(set(levels) | {1}))
        super().__init__(model_dimension)
        for i, n in enumerate(self.basis_names):
            self.names[n] = self.element([int(i == j) for j in range(len(self.invariants))])
        for n, vec in (aliases or {}).items():
            self.names[n] = self.element(vec)
        self._index = {n: i for i, n in enumerate(self.basis_names)}

    def group(self, level):
        return self.invariants

    def res_raw(self, vec, frm, to):
        rel_degree(to, frm)
        return tuple(vec)

    def tr_raw(self, vec, frm, to):
        k = rel_degree(frm, to)
        return self.reduce([k * c for c in vec], to)

    def canonical_raw(self, vec, level):
        return AbElement(1, self.reduce(vec, 1))

    def configured_levels(self):
        return list(self.levels)

    def atom_coords(self, x):
        return {self.basis_names[i]: c for i, c in enumerate(x.vec) if c}

    def atom_order(self, name):
        return self.invariants[self._index[name]]

    def format(self, x):
        if not any(x.vec):
            return "0"
        parts = []
        for name, c in self.atom_coords(x).items():
            parts.append(f"{'-' if c < 0 else '+'}{'' if abs(c) == 1 else abs(c)}{name}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


class TableAbModel(AbModel):
    """Explicit finite groups per level with restriction and trace matrices.

    ``groups[n]`` lists the cyclic orders of ``A(n)``; ``res[(n, m)]`` is the
    matrix of ``A(m) -> A(n)`` and ``tr[(n, m)]`` of ``A(n) -> A(m)``, both
    acting on column vectors.
    """

    kind = "table"

    def __init__(self, groups, res, tr, model_dimension=1, names=None):
        self.groups = {check_level(int(n)): tuple(int(x) for x in inv) for n, inv in groups.items()}
        if 1 not in self.groups:
            raise ValueError("table model must declare the ground level 1")
        for inv in self.groups.values():
            if any(x < 2 for x in inv):
                raise ValueError("table models need finite cyclic factors of order >= 2")
        self.res_tab = {k: [list(map(int, row)) for row in m] for k, m in res.items()}
        self.tr_tab = {k: [list(map(int, row)) for row in m] for k, m in tr.items()}
        self._canon: dict = {}
        super().__init__(model_dimension)
        for n, (lvl, vec) in (names or {}).items():
            self.names[n] = self.element(vec, lvl)

    def configured_levels(self):
        return sorted(self.groups)

    def group(self, level):
        try:
            return self.groups[level]
        except KeyError:
            raise LevelMismatch(f"level {level} is not declared in the table model") from None

    @staticmethod
    def _apply(mat, vec):
        return [sum(a * b for a, b in zip(row, vec)) for row in mat]

    def res_raw(self, vec, frm, to):
        rel_degree(to, frm)
        if frm == to:
            return self.reduce(vec, to)
        try:
            mat = self.res_tab[(to, frm)]
        except KeyError:
            raise LevelMismatch(f"no restriction table for {frm} -> {to}") from None
        return self.reduce(self._apply(mat, vec), to)

    def tr_raw(self, vec, frm, to):
        rel_degree(frm, to)
        if frm == to:
            return self.reduce(vec, to)
        try:
            mat = self.tr_tab[(frm, to)]
        except KeyError:
            raise LevelMismatch(f"no trace table for {frm} -> {to}") from None
        return self.reduce(self._apply(mat, vec), to)

    def elements(self, level):
        return itertools.product(*(range(n) for n in self.group(level)))

    def canonical_raw(self, vec, level):
        key = (tuple(vec), level)
        if key not in self._canon:
            found = AbElement(level, tuple(vec))
            for m in sorted(self.groups):
                if m >= level or level % m:
                    continue
                pre = [u for u in self.elements(m) if self.res_raw(u, m, level) == tuple(vec)]
                if pre:
                    found = AbElement(m, tuple(pre[0]))
                    break
            self._canon[key] = found
        return self._canon[key]


def jacobian_ab_model(curve: CurveModel, model_dimension: int | None = None) -> ConstantAbModel:
    """The Jacobian of ``curve`` as a constant model, from its Pic^0 presentation.

    Only rational catalogs with ground-level relations are supported.  Every
    catalog point ``y`` is registered as the element ``iota(y)``.
    """
    if any(lvl != 1 for lvl in curve.points.values()):
        raise UnsupportedModel("jacobian models need every catalog point to be rational")
    if any(lvl != 1 for lvl, _ in curve.relations):
        raise UnsupportedModel("jacobian models need relations declared over the ground level")
    gens = [p for p in curve.points if p != curve.base_point]
    n = len(gens)
    rows = [tuple(terms.get(g, 0) for g in gens) for _, terms in curve.relations]
    basis = hermite_basis(rows, n, order=range(n - 1, -1, -1))
    pivots = {c for c, _ in basis}
    aliases: dict[str, list[int]] = {}
    if all(row[c] == 1 for c, row in basis):
        free = [i for i in range(n) if i not in pivots]
        names = [gens[i] for i in free]
        invariants = [0] * len(free)
        for i, g in enumerate(gens):
            unit = [int(i == j) for j in range(n)]
            red = reduce_vector(unit, basis)
            aliases[g] = [red[j] for j in free]
    else:
        diag, _, to_new = smith_decomposition(rows, n)
        keep = [i for i, dgt in enumerate(diag) if dgt != 1]
        names = [f"g{i + 1}" for i in range(len(keep))]
        invariants = [diag[i] for i in keep]
        for i, g in enumerate(gens):
            aliases[g] = [to_new[i][k] for k in keep]
    aliases[curve.base_point] = [0] * len(names)
    dim = model_dimension if model_dimension is not None else max(1, (n - len(basis)))
    alias_only = {k: v for k, v in aliases.items() if k not in names}
    return ConstantAbModel(invariants, names, alias_only, model_dimension=dim)


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    law: str
    where: dict
    message: str

    def __str__(self):
        return f"[{self.law}] {self.message}"


def _level_pairs(levels):
    levels = sorted(set(levels))
    return [(n, m) for n in levels for m in levels if n % m == 0 and n != m]


def validate_models(curves, ab: AbModel | None, levels=None) -> list[Violation]:
    """Check the functoriality laws; returns every violation found."""
    out: list[Violation] = []
    if ab is not None:
        ab_levels = ab.configured_levels() if levels is None else sorted(set(levels) | {1})
        if isinstance(ab, TableAbModel):
            ab_levels = ab.configured_levels()
            for (n, m) in _level_pairs(ab_levels):
                if (n, m) not in ab.res_tab:
                    out.append(Violation("table", {"n": n, "m": m}, f"missing res table {m}->{n}"))
                if (n, m) not in ab.tr_tab:
                    out.append(Violation("table", {"n": n, "m": m}, f"missing trace table {n}->{m}"))
            if out:
                return out
        for (n, m) in _level_pairs(ab_levels):
            inv = ab.group(m)
            for g in range(len(inv)):
                unit = tuple(int(g == j) for j in range(len(inv)))
                got = ab.tr_raw(ab.res_raw(unit, m, n), n, m)
                want = ab.reduce([c * (n // m) for c in unit], m)
                if got != want:
                    out.append(Violation(
                        "tr-res", {"n": n, "m": m, "generator": g},
                        f"Tr_{n}/{m} o res_{n}/{m} != {n // m} on generator e{g + 1} of A({m}): "
                        f"got {list(got)}, expected {list(want)}"))
            if isinstance(ab, TableAbModel):
                seen = {}
                for u in ab.elements(m):
                    img = ab.res_raw(u, m, n)
                    if img in seen:
                        out.append(Violation("res-injective", {"n": n, "m": m},
                                             f"res_{n}/{m} is not injective"))
                        break
                    seen[img] = u
    for curve in curves:
        for lvl, terms in curve.relations:
            D = Divisor.build(curve, lvl, terms)
            if D.degree() != 0:
                out.append(Violation("relation-degree", {"curve": curve.name, "level": lvl},
                                     f"{curve.name}: relation {D} has degree {D.degree()}"))
                continue
            for m in divisors_of(lvl):
                if m == lvl:
                    continue
                T = div_tr(D, m)
                if not pic0_reduce(T).is_zero():
                    out.append(Violation(
                        "tr-stable", {"curve": curve.name, "level": lvl, "to": m},
                        f"{curve.name}: trace of relation {D} to level {m} is not principal"))
        if curve.involution is not None:
            inv = curve.involution
            for y in curve.points:
                z = inv.get(y)
                if z is None or inv.get(z) != y:
                    out.append(Violation("involution", {"curve": curve.name, "point": y},
                                         f"{curve.name}: involution is not an involution at {y}"))
                elif curve.min_level(z) != curve.min_level(y):
                    out.append(Violation("involution", {"curve": curve.name, "point": y},
                                         f"{curve.name}: involution changes the level of {y}"))
            w = curve.weierstrass
            if w is not None and w == curve.base_point and not out:
                for y, z in inv.items():
                    lvl = curve.min_level(y)
                    if not (iota(curve, z, lvl) + iota(curve, y, lvl)).is_zero():
                        out.append(Violation(
                            "weierstrass", {"curve": curve.name, "point": y},
                            f"{curve.name}: iota({z}) != -iota({y}) with Weierstrass base point"))
    return out

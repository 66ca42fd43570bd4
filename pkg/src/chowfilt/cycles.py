"""Formal zero-cycles on ``C_1 x ... x C_d x A`` over a base level.

A product point is a tuple of catalog names (one per curve) together with
an element of the abelian model.  Its canonical level over base ``b`` is the
lcm of ``b`` with every minimal level involved; the same storage rule as for
divisors lets restriction and pushforward act by rescaling coefficients.

No rational equivalence is imposed here.  ``ZeroCycle`` is the free group.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd, prod
from typing import Iterable, Mapping, Sequence

from .errors import BaseMismatch, LevelMismatch, MixedSupport, WrongDimension
from .ext_lattice import check_level, lcm, rel_degree
from .models import AbElement, AbModel, CurveModel, Divisor

__all__ = [
    "ProductPoint", "Variety", "ZeroCycle", "cyc_degree", "cyc_res",
    "modeled_chow_A", "pontryagin", "product_cycle", "pushforward_base",
]


class Variety:
    """The product ``C_1 x ... x C_d x A`` with its fixed base points."""

    def __init__(self, curves: Sequence[CurveModel], ab: AbModel):
        self.curves = tuple(curves)
        self.ab = ab
        self.d = len(self.curves)
        self.base_points = tuple(c.base_point for c in self.curves)

    def __repr__(self):
        return f"Variety(d={self.d}, A={self.ab.kind})"

    def point_min_level(self, pts: tuple[str, ...], a: AbElement) -> int:
        return lcm(a.level, *(c.min_level(p) for c, p in zip(self.curves, pts)))

    def abelian_part(self) -> "Variety":
        """The factor ``A`` on its own, as a variety with no curves."""
        if self.d == 0:
            return self
        if not hasattr(self, "_apart"):
            self._apart = Variety((), self.ab)
        return self._apart

    def format_point(self, key: "ProductPoint") -> str:
        a = self.ab.format(key.a)
        return "(" + ", ".join(list(key.pts) + [a]) + ")"


@dataclass(frozen=True, order=True)
class ProductPoint:
    """Key of a cycle term: curve coordinates plus an abelian-model element."""

    pts: tuple[str, ...]
    a: AbElement


class ZeroCycle:
    """Integer combination of product points over ``base``."""

    __slots__ = ("variety", "base", "terms")

    def __init__(self, variety: Variety, base: int = 1, terms: Mapping[ProductPoint, int] | None = None):
        self.variety = variety
        self.base = check_level(base)
        self.terms: dict[ProductPoint, int] = {k: v for k, v in (terms or {}).items() if v}

    # construction ----------------------------------------------------
    @classmethod
    def point(cls, variety: Variety, pts=None, a: AbElement | None = None, base: int = 1,
              coeff: int = 1) -> "ZeroCycle":
        """``coeff`` times the point ``(pts, a)``; missing curve coordinates
        default to the base points and ``a`` to zero."""
        if pts is None:
            pts = variety.base_points
        elif isinstance(pts, Mapping):
            pts = tuple(pts.get(i, bp) for i, bp in enumerate(variety.base_points))
        pts = tuple(pts)
        if len(pts) != variety.d:
            raise ValueError(f"expected {variety.d} curve coordinates, got {len(pts)}")
        for c, p in zip(variety.curves, pts):
            c.min_level(p)
        if a is None:
            a = variety.ab.zero()
        return cls(variety, base, {ProductPoint(pts, a): coeff})

    @classmethod
    def from_terms(cls, variety: Variety, base: int, items: Iterable[tuple[ProductPoint, int]]) -> "ZeroCycle":
        acc: dict[ProductPoint, int] = {}
        for k, c in items:
            acc[k] = acc.get(k, 0) + c
        return cls(variety, base, acc)

    # inspection --------------------------------------------------------
    def level_of(self, key: ProductPoint) -> int:
        return lcm(self.base, self.variety.point_min_level(key.pts, key.a))

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def items(self):
        return sorted(self.terms.items())

    def _check(self, other: "ZeroCycle"):
        if other.variety is not self.variety:
            raise ValueError("cycles live on different varieties")
        if other.base != self.base:
            raise BaseMismatch(f"cycles over bases {self.base} and {other.base}")

    def __eq__(self, other):
        if not isinstance(other, ZeroCycle):
            return NotImplemented
        return (self.variety is other.variety and self.base == other.base
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.base, frozenset(self.terms.items())))

    # arithmetic --------------------------------------------------------
    def __add__(self, other: "ZeroCycle") -> "ZeroCycle":
        self._check(other)
        acc = dict(self.terms)
        for k, c in other.terms.items():
            acc[k] = acc.get(k, 0) + c
        return ZeroCycle(self.variety, self.base, acc)

    def __neg__(self) -> "ZeroCycle":
        return ZeroCycle(self.variety, self.base, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "ZeroCycle") -> "ZeroCycle":
        return self + (-other)

    def __rmul__(self, n: int) -> "ZeroCycle":
        return ZeroCycle(self.variety, self.base, {k: n * c for k, c in self.terms.items()})

    def __repr__(self):
        return f"ZeroCycle(base={self.base}, {len(self.terms)} terms)"

    def __str__(self):
        if not self.terms:
            return f"0 @{self.base}"
        out = []
        for k, c in self.items():
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            out.append(f"{sign} {mag}[{self.variety.format_point(k)}]")
        s = " ".join(out)
        return (s[2:] if s.startswith("+ ") else "-" + s[2:]) + f" @{self.base}"

    def to_json(self) -> list:
        ab = self.variety.ab
        return [{"pts": list(k.pts), "a": ab.format(k.a), "a_level": k.a.level,
                 "level": self.level_of(k), "coeff": c} for k, c in self.items()]


def cyc_degree(Z: ZeroCycle) -> int:
    return sum(c * Z.level_of(k) // Z.base for k, c in Z.terms.items())


def pushforward_base(Z: ZeroCycle, to: int) -> ZeroCycle:
    """Proper pushforward along ``X_m -> X_e``; degrees scale by ``[m:e]``."""
    rel_degree(Z.base, to)
    if to == Z.base:
        return Z
    out = ZeroCycle(Z.variety, to)
    acc = out.terms
    for k, c in Z.terms.items():
        lo = lcm(to, Z.variety.point_min_level(k.pts, k.a))
        coeff = c * (Z.level_of(k) // lo)
        acc[k] = acc.get(k, 0) + coeff
    out.terms = {k: v for k, v in acc.items() if v}
    return out


def cyc_res(Z: ZeroCycle, to: int) -> ZeroCycle:
    """Flat pullback along ``X_n -> X_m``, splitting each closed point."""
    rel_degree(to, Z.base)
    return ZeroCycle(Z.variety, to,
                     {k: c * gcd(Z.level_of(k), to) // Z.base for k, c in Z.terms.items()})


def _require_pure_A(Z: ZeroCycle):
    if Z.variety.d != 0:
        raise MixedSupport("Pontryagin product needs cycles supported on A only")


def pontryagin(Z1: ZeroCycle, Z2: ZeroCycle) -> ZeroCycle:
    """``m_*(Z1 x Z2)`` for cycles on ``A`` over a common base."""
    _require_pure_A(Z1)
    _require_pure_A(Z2)
    if Z1.variety is not Z2.variety:
        raise ValueError("operands live on different abelian models")
    if Z1.base != Z2.base:
        raise BaseMismatch(f"Pontryagin operands over bases {Z1.base} and {Z2.base}")
    ab, b = Z1.variety.ab, Z1.base
    acc: dict[ProductPoint, int] = {}
    for k1, c1 in Z1.terms.items():
        l1 = Z1.level_of(k1)
        for k2, c2 in Z2.terms.items():
            l2 = Z2.level_of(k2)
            s = ab.add(k1.a, k2.a)
            key = ProductPoint((), s)
            # gcd/b components of level lcm, each pushed onto the sum point
            ls = lcm(s.level, b)
            coeff = c1 * c2 * (gcd(l1, l2) // b) * (lcm(l1, l2) // ls)
            acc[key] = acc.get(key, 0) + coeff
    return ZeroCycle(Z1.variety, b, acc)


def product_cycle(variety: Variety, selected: Mapping[int, Divisor], a_cycle: ZeroCycle,
                  base: int) -> ZeroCycle:
    """Intersection of pulled-back divisors with a pulled-back cycle on ``A``.

    Unselected curves get their base point.  A product of closed points is
    formed one factor at a time: two points of levels ``l1, l2`` over ``base``
    meet in ``gcd(l1, l2)/base`` points of level ``lcm(l1, l2)``.
    """
    _require_pure_A(a_cycle)
    if a_cycle.base != base:
        raise LevelMismatch(f"A-cycle over base {a_cycle.base}, expected {base}")
    for i, D in selected.items():
        if not 0 <= i < variety.d:
            raise ValueError(f"curve index {i} out of range")
        if D.curve is not variety.curves[i]:
            raise ValueError(f"divisor for curve {i} lives on {D.curve.name}")
        if D.base != base:
            raise LevelMismatch(f"divisor on curve {i} over base {D.base}, expected {base}")

    # partial products: (pts dict, level, coeff)
    partial = [({}, base, 1)]
    for i in sorted(selected):
        D = selected[i]
        nxt = []
        for pts, lvl, c in partial:
            for p, n in D.terms:
                lp = D.level_of(p)
                nxt.append(({**pts, i: p}, lcm(lvl, lp), c * n * (gcd(lvl, lp) // base)))
        partial = nxt
    acc: dict[ProductPoint, int] = {}
    for pts, lvl, c in partial:
        tup = tuple(pts.get(i, bp) for i, bp in enumerate(variety.base_points))
        for k, n in a_cycle.terms.items():
            la = a_cycle.level_of(k)
            key = ProductPoint(tup, k.a)
            acc[key] = acc.get(key, 0) + c * n * (gcd(lvl, la) // base)
    return ZeroCycle(variety, base, acc)


def modeled_chow_A(Z: ZeroCycle) -> tuple[int, AbElement]:
    """``(degree, Albanese sum)`` of a cycle on an elliptic-curve model."""
    _require_pure_A(Z)
    ab = Z.variety.ab
    if ab.model_dimension != 1:
        raise WrongDimension(f"CH_0(A) is only modelled for dim A = 1, got {ab.model_dimension}")
    parts = [ab.scale(c, ab.tr(k.a, Z.level_of(k), Z.base)) for k, c in Z.terms.items()]
    return cyc_degree(Z), ab.add(*parts)

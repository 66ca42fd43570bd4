"""Seeded random varieties, data and cycles for the property suites."""
from __future__ import annotations

import random
from typing import Sequence

from .cycles import Variety, ZeroCycle
from .filtration import SymbolDatum
from .models import ConstantAbModel, CurveModel, Divisor

__all__ = ["LEVELS", "default_variety", "random_cycle", "random_datum", "random_divisor",
           "random_element", "standard_curve"]

LEVELS = (1, 2, 3, 4, 6)


def standard_curve(name: str) -> CurveModel:
    """A curve with rational points ``p, q, r`` and points of levels 2, 3, 4, 6.

    ``3([q] - [p])`` is principal, as are ``[u2] - 2[p]`` over the ground and
    ``[u2] - [p]`` once ``u2`` becomes rational.
    """
    pts = {"p": 1, "q": 1, "r": 1, "u2": 2, "u3": 3, "u4": 4, "u6": 6}
    rels = [
        (1, {"q": 3, "p": -3}),
        (1, {"u2": 1, "p": -2}),
        (2, {"u2": 1, "p": -1}),
    ]
    return CurveModel(name, pts, "p", rels)


def default_variety(d: int, invariants: Sequence[int] = (6, 0), names=("a", "b"),
                    model_dimension: int = 1) -> Variety:
    ab = ConstantAbModel(invariants, names, model_dimension=model_dimension)
    return Variety([standard_curve(f"C{i + 1}") for i in range(d)], ab)


def random_element(rng: random.Random, variety: Variety):
    ab = variety.ab
    vec = [rng.randint(-2, 2) for _ in ab.group(1)]
    return ab.element(vec, 1)


def random_divisor(rng: random.Random, curve: CurveModel, level: int, max_points: int = 2,
                   rational: bool = True) -> Divisor:
    """A degree-zero divisor over ``level`` corrected by the base point."""
    pool = [p for p in curve.points if p != curve.base_point
            and (not rational or level % curve.min_level(p) == 0)]
    k = rng.randint(1, max_points)
    terms = [(rng.choice(pool), rng.choice((-2, -1, 1, 1, 2))) for _ in range(k)]
    D = Divisor.build(curve, level, terms)
    return D - D.degree() * Divisor.build(curve, level, {curve.base_point: 1})


def random_datum(rng: random.Random, variety: Variety, r: int, level: int | None = None,
                 zero_rate: float = 0.35, rational: bool = True) -> SymbolDatum:
    if level is None:
        level = rng.choice(LEVELS)
    rows = []
    for _ in range(r):
        zs = []
        for c in variety.curves:
            zs.append(None if rng.random() < zero_rate else
                      random_divisor(rng, c, level, rational=rational))
        a = None if rng.random() < zero_rate else random_element(rng, variety)
        rows.append((zs, a))
    return SymbolDatum.build(variety, level, rows)


def random_cycle(rng: random.Random, variety: Variety, base: int = 1, terms: int = 4) -> ZeroCycle:
    Z = ZeroCycle(variety, base)
    for _ in range(terms):
        pts = tuple(rng.choice(list(c.points)) for c in variety.curves)
        Z = Z + ZeroCycle.point(variety, pts, random_element(rng, variety), base,
                                coeff=rng.choice((-2, -1, 1, 2, 3)))
    return Z

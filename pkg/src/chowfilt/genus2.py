"""A genus-2 curve times its Jacobian, with a Weierstrass base point.

The curve has rational points ``y1, y2, y3``, their hyperelliptic
conjugates ``s1, s2, s3`` and the base point ``p1``; ``[y] + [s] - 2[p1]`` is
principal for each pair.  The Jacobian is the constant model derived from
this presentation, so ``iota(s_i) = -iota(y_i)`` holds in both factors.

``genus2_example`` runs four steps and returns a structured report:

a. the ``F^3`` generator ``Psi'_3{(y1, 0), (0, y2), (0, y3)}`` has the
   expected eight-term shape and lies in ``F^3``;
b. ``Psi'_3`` of a pure-``A`` datum is a triple Pontryagin product of
   degree-zero cycles; its vanishing is the nilpotence axiom for ``dim J = 2``,
   cited in the step report rather than computed;
c. the coincidence ``y1 = y2`` makes the generator 2-torsion, via a Weil
   relation whose normal form is exactly twice the target symbol;
d. the ``F^2/F^3`` generator shapes and the diagonal cycle, whose ``Phi_2``
   image ``2{y_J, y_A}`` is itself a Weil-relation element.
"""
from __future__ import annotations

from math import factorial

from .cycles import ProductPoint, Variety, ZeroCycle, pontryagin
from .filtration import (SymbolDatum, certify_membership, phi_r, psi_r_blocks, psi_r_closed,
                         psi_r_product, q_of)
from .models import CurveModel, iota, jacobian_ab_model, validate_models
from .symbols import A_FACTOR, Atom, WRRow, rewrite_atoms, row_slot, sym_normalize, wr_element

__all__ = ["genus2_curve", "genus2_example", "genus2_variety"]


def genus2_curve() -> CurveModel:
    pts = {"p1": 1, "y1": 1, "y2": 1, "y3": 1, "s1": 1, "s2": 1, "s3": 1}
    rels = [(1, {f"y{i}": 1, f"s{i}": 1, "p1": -2}) for i in (1, 2, 3)]
    inv = {"p1": "p1"}
    for i in (1, 2, 3):
        inv[f"y{i}"], inv[f"s{i}"] = f"s{i}", f"y{i}"
    return CurveModel("C", pts, "p1", rels, inv, "p1")


def genus2_variety(curve: CurveModel | None = None) -> Variety:
    curve = curve or genus2_curve()
    return Variety([curve], jacobian_ab_model(curve, model_dimension=2))


def _iota_div(v: Variety, name: str | None, level: int = 1):
    c = v.curves[0]
    if name is None:
        return None
    return c.divisor([(name, 1), (c.base_point, -1)], base=level)


def _datum(v: Variety, rows) -> SymbolDatum:
    """Rows given as ``(curve point or None, A point or None)``, both via iota."""
    ab = v.ab
    return SymbolDatum.build(v, 1, [([_iota_div(v, y)], None if a is None else ab.named(a))
                                    for y, a in rows])


def _pt(v: Variety, y: str, *a_names: str, coeff: int = 1) -> ZeroCycle:
    ab = v.ab
    a = ab.add(*(ab.named(n) for n in a_names))
    return ZeroCycle.point(v, (y,), a, 1, coeff)


def _step(name: str, ok: bool, **detail) -> dict:
    return {"step": name, "status": "pass" if ok else "fail", **detail}


def step_a(v: Variety, y=("y1", "y2", "y3")) -> dict:
    y1, y2, y3 = y
    p = v.curves[0].base_point
    S = _datum(v, [(y1, None), (None, y2), (None, y3)])
    Z = psi_r_closed(S)
    expected = (_pt(v, y1, y2, y3) - _pt(v, y1, y2) - _pt(v, y1, y3) + _pt(v, y1)
                - _pt(v, p, y2, y3) + _pt(v, p, y2) + _pt(v, p, y3) - _pt(v, p))
    cert = certify_membership(Z, 3)
    top = phi_r(Z, 3) == factorial(3) * q_of(S)
    ok = Z == expected and len(Z) == 8 and cert.certified and top and Z == psi_r_product(S)
    return _step("a: F^3 generator shape", ok, cycle=str(Z), terms=len(Z),
                 in_F3=cert.status, phi3_is_6q=top)


def step_b(v: Variety, y=("y1", "y2", "y3")) -> dict:
    S = _datum(v, [(None, n) for n in y])
    g = v.ab.model_dimension
    witnesses = []
    ok = True
    for I, images, Z in psi_r_blocks(S):
        free = [j for j in range(S.r) if j not in images]
        av = v.abelian_part()
        zero = ZeroCycle.point(av, (), None, 1)
        prod_cycle = zero
        for j in free:
            prod_cycle = pontryagin(prod_cycle, ZeroCycle.point(av, (), S.a_of(j), 1) - zero)
        # the block must be exactly that product placed over the base points
        placed = ZeroCycle(v, 1, {ProductPoint(v.base_points, k.a): c
                                  for k, c in prod_cycle.terms.items()})
        ok &= placed == Z and len(free) >= g + 1 and not I
        witnesses.append({"factors": len(free), "product": str(prod_cycle)})
    ok &= len(witnesses) == 1
    out = _step("b: pure-A terms are Pontryagin products", ok, witnesses=witnesses)
    # the factorisation is checked; its vanishing in CH_0(A) is the cited axiom
    out["axiom"] = (f"a Pontryagin product of {g + 1} degree-zero cycles is zero in CH_0 "
                    f"of an abelian variety of dimension {g}")
    return out


def _wr_rows(v: Variety, y: str, extra_a: list[str], with_curve_slot: bool) -> list[WRRow]:
    """Weil relation for ``f`` with divisor ``[y] + [s] - 2[p1]`` and the maps
    ``iota x 0``, ``0 x iota`` and constants ``(0, iota(extra))``."""
    c = v.curves[0]
    ab = v.ab
    s = c.involution[y]
    rows = []
    for pt, order in ((y, 1), (s, 1), (c.base_point, -2)):
        slots = []
        if with_curve_slot:
            slots.append(row_slot(v, 1, [_iota_div(v, pt)], None))
        slots.append(row_slot(v, 1, [None], ab.named(pt)))
        for e in extra_a:
            slots.append(row_slot(v, 1, [None], ab.named(e)))
        rows.append(WRRow(1, order, tuple(slots)))
    return rows


def _conjugate_rewrite(v: Variety, y: str) -> dict:
    s = v.curves[0].involution[y]
    return {Atom(1, s): {Atom(1, y): -1}}


def step_c(v: Variety, y1="y1", y3="y3") -> dict:
    c = v.curves[0]
    s1 = c.involution[y1]
    pic_ok = (iota(c, s1) + iota(c, y1)).is_zero()
    a_ok = v.ab.is_zero(v.ab.add(v.ab.named(s1), v.ab.named(y1)))
    # {-x, -y, z} = {x, y, z}
    X, Y, W = Atom(1, y1), Atom(A_FACTOR, y1), Atom(A_FACTOR, y3)
    neg = sym_normalize(v, 1, [{X: -1}, {Y: -1}, {W: 1}])
    pos = sym_normalize(v, 1, [{X: 1}, {Y: 1}, {W: 1}])
    sign_ok = neg == pos
    target = q_of(_datum(v, [(y1, None), (None, y1), (None, y3)]))
    wr = wr_element(v, _wr_rows(v, y1, [y3], True))
    rewritten = rewrite_atoms(wr, _conjugate_rewrite(v, y1))
    ok = pic_ok and a_ok and sign_ok and rewritten == 2 * target and not target.is_zero()
    return _step("c: 2-torsion certificate for y1 = y2", ok,
                 iota_conjugate=pic_ok and a_ok, sign_rule=sign_ok, target=str(target),
                 wr_element=str(wr), wr_after_rewrite=str(rewritten),
                 conclusion="2 * target lies in the Weil-relation span; the generator "
                            "vanishes once 2 is inverted")


def step_d(v: Variety, y=("y1", "y2")) -> dict:
    y1, y2 = y
    p = v.curves[0].base_point
    mixed = psi_r_closed(_datum(v, [(y1, None), (None, y2)]))
    pure = psi_r_closed(_datum(v, [(None, y1), (None, y2)]))
    mixed_exp = _pt(v, y1, y2) - _pt(v, y1) - _pt(v, p, y2) + _pt(v, p)
    pure_exp = _pt(v, p, y1, y2) - _pt(v, p, y1) - _pt(v, p, y2) + _pt(v, p)
    shapes = mixed == mixed_exp and pure == pure_exp
    # diagonal cycle
    D = _pt(v, y1, y1) - _pt(v, y1) - _pt(v, p, y1) + _pt(v, p)
    low = all(phi_r(D, t).is_zero() for t in (0, 1))
    phi2 = phi_r(D, 2)
    sym = sym_normalize(v, 1, [{Atom(1, y1): 1}, {Atom(A_FACTOR, y1): 1}])
    image_ok = phi2 == 2 * sym
    wr = rewrite_atoms(wr_element(v, _wr_rows(v, y1, [], True)), _conjugate_rewrite(v, y1))
    cert_ok = wr == phi2
    ok = shapes and low and image_ok and cert_ok
    return _step("d: F^2/F^3 generators and the diagonal cycle", ok,
                 mixed_generator=str(mixed), pure_generator=str(pure),
                 diagonal=str(D), diagonal_phi2=str(phi2), phi2_is_wr_element=cert_ok,
                 conclusion="Phi_2 of the diagonal cycle is a Weil-relation element, so the "
                            "cycle lies in F^3; {y_J, y_A} is 2-torsion")


def genus2_example(variety: Variety | None = None) -> dict:
    v = variety or genus2_variety()
    violations = validate_models(v.curves, v.ab)
    steps = [step_a(v), step_b(v), step_c(v), step_d(v)]
    failed = bool(violations) or any(s["status"] == "fail" for s in steps)
    return {"name": "genus2", "status": "fail" if failed else "pass",
            "violations": [str(x) for x in violations], "steps": steps}

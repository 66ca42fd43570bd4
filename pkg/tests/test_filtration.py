import random
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from chowfilt.cycles import ProductPoint, ZeroCycle, modeled_chow_A, pontryagin
from chowfilt.errors import BaseNotGround
from chowfilt.filtration import (SymbolDatum, albanese, albanese_via_phi, binomial_closed_form,
                                 binomial_count_oracle, certify_membership, multilinearity_sides,
                                 phi_r, projection_formula_sides, psi_r_closed, psi_r_product, q_of,
                                 roundtrip_report, trace_compatibility_sides,
                                 vanishing_structural_check)
from chowfilt.models import iota
from chowfilt.randomgen import LEVELS, default_variety, random_cycle, random_datum, random_divisor
from chowfilt.symbols import A_FACTOR, Atom, SymbolSum, sym_normalize

TOWERS = [(e, l) for e in LEVELS for l in LEVELS if l % e == 0 and e != l]


def pt(v, pts=None, a=None, base=1, coeff=1):
    return ZeroCycle.point(v, pts, a, base, coeff)


def iota_div(v, i, y, level=1):
    c = v.curves[i]
    return c.divisor([(y, 1), (c.base_point, -1)], base=level)


# -- Phi -------------------------------------------------------------------------------

def test_phi_of_base_point(v2):
    assert phi_r(pt(v2), 0) == SymbolSum.scalar(v2, 1)
    assert phi_r(pt(v2), 1).is_zero()


def test_phi_needs_ground_base(v1):
    with pytest.raises(BaseNotGround):
        phi_r(pt(v1, base=2), 1)


def test_phi2_of_diagonal(g2):
    ab = g2.ab
    y = ab.named("y1")
    D = pt(g2, ("y1",), y) - pt(g2, ("y1",)) - pt(g2, ("p1",), y) + pt(g2, ("p1",))
    # hand expansion: only the cross term of {(y, y), (y, y)} survives
    want = 2 * sym_normalize(g2, 1, [{Atom(1, "y1"): 1}, {Atom(A_FACTOR, "y1"): 1}])
    assert phi_r(D, 2) == want
    assert phi_r(D, 0).is_zero() and phi_r(D, 1).is_zero()


# -- Psi' ------------------------------------------------------------------------------

def test_psi_zero_rows(v2):
    assert psi_r_closed(SymbolDatum.build(v2, 1, [])) == pt(v2)
    assert psi_r_product(SymbolDatum.build(v2, 1, [])) == pt(v2)


def test_psi1_pure_a(v2):
    a = v2.ab.named("a")
    S = SymbolDatum.build(v2, 1, [([None, None], a)])
    want = pt(v2, None, a) - pt(v2)
    assert psi_r_closed(S) == want == psi_r_product(S)


def test_psi3_pure_a_is_triple_product():
    v = default_variety(1, invariants=(4, 0), names=("P", "Q"))
    ab = v.ab
    rows = [([None], ab.named("P")), ([None], ab.named("Q")), ([None], ab.add(ab.named("P"), ab.named("Q")))]
    S = SymbolDatum.build(v, 1, rows)
    av = v.abelian_part()
    prod_ = pt(av)
    for _, a in rows:
        prod_ = pontryagin(prod_, pt(av, (), a) - pt(av))
    placed = ZeroCycle(v, 1, {ProductPoint(v.base_points, k.a): c for k, c in prod_.terms.items()})
    assert psi_r_closed(S) == placed == psi_r_product(S)
    assert modeled_chow_A(prod_) == (0, ab.zero())


def test_roundtrip_r2(v1):
    a = v1.ab.named("a")
    S = SymbolDatum.build(v1, 1, [([iota_div(v1, 0, "r")], None), ([None], a)])
    Z = psi_r_closed(S)
    assert phi_r(Z, 1).is_zero()
    assert phi_r(Z, 2) == 2 * sym_normalize(v1, 1, [{Atom(1, "r"): 1}, {Atom(A_FACTOR, "a"): 1}])


def test_roundtrip_r1_is_identity(v2):
    rng = random.Random(3)
    for _ in range(20):
        S = random_datum(rng, v2, 1)
        assert phi_r(psi_r_closed(S), 1) == q_of(S)


def test_roundtrip_r3_d2():
    rng = random.Random(11)
    v = default_variety(2)
    for _ in range(20):
        S = random_datum(rng, v, 3)
        rep = roundtrip_report(S)
        assert rep["pass"], rep
        Z = psi_r_closed(S)
        assert phi_r(Z, 3) == 6 * q_of(S)


@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 4))
def test_roundtrip_and_paths(seed, d, r):
    v = default_variety(d)
    S = random_datum(random.Random(seed), v, r)
    Z = psi_r_closed(S)
    for t in range(r):
        assert phi_r(Z, t).is_zero()
    assert phi_r(Z, r) == factorial(r) * q_of(S)
    assert Z == psi_r_product(S)


# -- structural identities ----------------------------------------------------------------

@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3), st.sampled_from(LEVELS))
def test_partial_multilinearity(seed, d, r, level):
    rng = random.Random(seed)
    v = default_variety(d)
    S = random_datum(rng, v, r, level, rational=False)
    t = rng.randrange(r)
    extra = [random_divisor(rng, c, level, rational=False) for c in v.curves]
    lhs, rhs = multilinearity_sides(S, t, extra)
    assert lhs == rhs


@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3), st.sampled_from(TOWERS))
def test_projection_formula(seed, d, r, tower):
    E, L = tower
    rng = random.Random(seed)
    v = default_variety(d)
    S = random_datum(rng, v, r, E, rational=False)
    zs_L = [random_divisor(rng, c, L, rational=False) for c in v.curves]
    up, down = projection_formula_sides(v, E, L, [(row.zs, row.a) for row in S.rows],
                                        rng.randrange(r), zs_L)
    assert up == down


@given(st.integers(0, 10**6), st.integers(1, 3), st.sampled_from(LEVELS))
def test_trace_compatibility(seed, d, base):
    v = default_variety(d)
    Z = random_cycle(random.Random(seed), v, base=base)
    for lhs, rhs in trace_compatibility_sides(Z):
        assert lhs == rhs


@given(st.integers(0, 10**6), st.integers(1, 3))
def test_albanese_triangle(seed, d):
    v = default_variety(d)
    Z = random_cycle(random.Random(seed), v)
    assert albanese(Z) == albanese_via_phi(Z)


def test_albanese_examples(v2):
    deg, jac, a = albanese(pt(v2))
    assert deg == 1 and all(x.is_zero() for x in jac) and v2.ab.is_zero(a)
    deg, jac, a = albanese(pt(v2, ("r", "p")) - pt(v2))
    assert deg == 0 and jac[0] == iota(v2.curves[0], "r") and jac[1].is_zero()
    assert v2.ab.is_zero(a)


# -- certificates ----------------------------------------------------------------------------

def test_certificate_levels(v1):
    Z = pt(v1, ("r",)) - pt(v1)
    assert certify_membership(Z, 1).certified
    cert = certify_membership(Z, 2)
    assert cert.status == "Unknown" and not cert.evidence[1].is_zero()


def test_zero_cycle_always_certified(v1):
    for r in range(5):
        assert certify_membership(ZeroCycle(v1, 1), r).certified


def test_psi_output_certified():
    rng = random.Random(5)
    v = default_variety(2)
    for r in range(1, 5):
        S = random_datum(rng, v, r)
        assert certify_membership(psi_r_closed(S), r).certified


# -- subset counts ---------------------------------------------------------------------------

def test_binomial_examples():
    assert binomial_count_oracle(3, (1, 1), 2) == 2 == comb(2, 1)
    assert binomial_count_oracle(3, (1, 2, 3), 3) == 1
    alt = sum((-1) ** (3 - j) * binomial_count_oracle(3, (1, 2, 3), j) for j in range(4))
    assert alt == 1


@given(st.integers(1, 6), st.data())
def test_binomial_lemma(r, data):
    h = data.draw(st.lists(st.integers(1, r), max_size=r))
    counts = [binomial_count_oracle(r, h, j) for j in range(r + 1)]
    assert counts == [binomial_closed_form(r, h, j) for j in range(r + 1)]
    alt = sum((-1) ** (r - j) * m for j, m in enumerate(counts))
    assert alt == (1 if len(set(h)) == r else 0)


# -- vanishing ---------------------------------------------------------------------------------

def test_vanishing_precondition(v1):
    S = SymbolDatum.build(v1, 1, [([None], v1.ab.named("a"))] * 2)
    assert vanishing_structural_check(S, 1)["error"]


def test_vanishing_pure_a(v1):
    ab = v1.ab
    S = SymbolDatum.build(v1, 1, [([None], ab.named("a")), ([None], ab.named("b")),
                                  ([None], ab.add(ab.named("a"), ab.named("b")))])
    rep = vanishing_structural_check(S, 1)
    assert rep["error"] is None
    assert rep["counts"]["pontryagin-verified"] == 1
    assert rep["counts"]["unclassified"] == 0


def test_vanishing_mixed_rows(v1):
    rng = random.Random(8)
    for _ in range(50):
        S = random_datum(rng, v1, 3, zero_rate=0.2)
        rep = vanishing_structural_check(S, 1)
        assert rep["counts"]["unclassified"] == 0


def test_vanishing_higher_dimension_cites_axiom():
    v = default_variety(1, model_dimension=2)
    ab = v.ab
    rows = [([iota_div(v, 0, "q")], ab.named("a"))] + [([None], ab.named("b"))] * 3
    rep = vanishing_structural_check(SymbolDatum.build(v, 1, rows), 2)
    assert rep["counts"]["pontryagin-axiom"] >= 1
    assert rep["counts"]["unclassified"] == 0

import random

import pytest
from hypothesis import given, strategies as st

from chowfilt.cycles import (ZeroCycle, cyc_degree, cyc_res, modeled_chow_A, pontryagin,
                             product_cycle, pushforward_base)
from chowfilt.errors import BaseMismatch, MixedSupport, WrongDimension
from chowfilt.randomgen import LEVELS, default_variety, random_cycle

TOWERS = [(e, l) for e in LEVELS for l in LEVELS if l % e == 0]


def pt(v, pts=None, a=None, base=1, coeff=1):
    return ZeroCycle.point(v, pts, a, base, coeff)


# -- degree ------------------------------------------------------------------------

def test_degree_of_base_point(v2):
    assert cyc_degree(pt(v2)) == 1


def test_degree_of_difference(v1):
    assert cyc_degree(pt(v1, ("q",)) - pt(v1, ("r",))) == 0


def test_degree_of_cubic_point(v1):
    assert cyc_degree(pt(v1, ("u3",), coeff=2)) == 6


# -- base change --------------------------------------------------------------------

def test_pushforward_rational_point(v1):
    Z = pushforward_base(pt(v1, ("q",), base=2), 1)
    assert Z == pt(v1, ("q",), coeff=2)
    assert cyc_degree(Z) == 2


def test_pushforward_zero(v1):
    assert pushforward_base(ZeroCycle(v1, 6), 1).is_zero()


def test_pushforward_sextic_point_to_level3(v1):
    Z = pushforward_base(pt(v1, ("u6",), base=6), 3)
    assert Z == pt(v1, ("u6",), base=3)
    assert cyc_degree(Z) == 2


def test_res_rational_point(v1):
    assert cyc_res(pt(v1, ("q",)), 5) == pt(v1, ("q",), base=5)


def test_res_splits_quadratic_point(v1):
    assert cyc_res(pt(v1, ("u2",)), 2) == pt(v1, ("u2",), base=2, coeff=2)


@given(st.integers(0, 10**6), st.sampled_from(TOWERS), st.integers(1, 3))
def test_base_change_laws(seed, tower, d):
    E, L = tower
    v = default_variety(d)
    Z = random_cycle(random.Random(seed), v, base=E)
    up = cyc_res(Z, L)
    assert cyc_degree(up) == cyc_degree(Z)
    assert pushforward_base(up, E) == (L // E) * Z
    assert cyc_degree(pushforward_base(Z, 1)) == cyc_degree(Z) * E


# -- Pontryagin product ---------------------------------------------------------------

@pytest.fixture(scope="module")
def av(v1):
    return v1.abelian_part()


def test_pontryagin_identity(av):
    a = av.ab.named("a")
    assert pontryagin(pt(av, (), a), pt(av)) == pt(av, (), a)


def test_pontryagin_of_degree_zero_factors(av):
    ab = av.ab
    a, b = ab.named("a"), ab.named("b")
    zero = pt(av)
    got = pontryagin(pt(av, (), a) - zero, pt(av, (), b) - zero)
    assert got == pt(av, (), ab.add(a, b)) - pt(av, (), a) - pt(av, (), b) + zero
    assert modeled_chow_A(got) == (0, ab.zero())


def test_pontryagin_rejects_curve_factors(v1, av):
    with pytest.raises(MixedSupport):
        pontryagin(pt(v1), pt(v1))


def test_pontryagin_rejects_mixed_bases(av):
    with pytest.raises(BaseMismatch):
        pontryagin(pt(av), pt(av, base=2))


@given(st.integers(0, 10**6))
def test_pontryagin_ring_laws(seed):
    rng = random.Random(seed)
    av = default_variety(0)
    X, Y, W = (random_cycle(rng, av, terms=3) for _ in range(3))
    assert pontryagin(X, Y) == pontryagin(Y, X)
    assert pontryagin(pontryagin(X, Y), W) == pontryagin(X, pontryagin(Y, W))
    assert pontryagin(X, Y + W) == pontryagin(X, Y) + pontryagin(X, W)
    assert pontryagin(X, pt(av)) == X


# -- product cycles and the elliptic model ----------------------------------------------

def test_product_cycle_without_curves(v2):
    av = v2.abelian_part()
    a = v2.ab.named("a")
    assert product_cycle(v2, {}, pt(av, (), a), 1) == pt(v2, None, a)


def test_product_cycle_one_curve(v1):
    c = v1.curves[0]
    D = c.divisor([("q", 1), ("p", -1)])
    got = product_cycle(v1, {0: D}, pt(v1.abelian_part()), 1)
    assert got == pt(v1, ("q",)) - pt(v1, ("p",))


def test_product_cycle_nested_loop_oracle(v2):
    av = v2.abelian_part()
    a = v2.ab.named("a")
    c = v2.curves[0]
    D = c.divisor([("q", 2), ("r", -1), ("p", -1)])
    A = pt(av, (), a) - pt(av)
    want = ZeroCycle(v2, 1)
    for y, n in [("q", 2), ("r", -1), ("p", -1)]:
        for x, m in [(a, 1), (v2.ab.zero(), -1)]:
            want = want + pt(v2, (y, "p"), x, coeff=n * m)
    assert product_cycle(v2, {0: D}, A, 1) == want


def test_modeled_chow(av):
    ab = av.ab
    a = ab.named("a")
    assert modeled_chow_A(pt(av)) == (1, ab.zero())
    assert modeled_chow_A(pt(av, (), a) - pt(av)) == (0, a)


def test_modeled_chow_needs_dimension_one():
    av = default_variety(0, model_dimension=2)
    with pytest.raises(WrongDimension):
        modeled_chow_A(pt(av))

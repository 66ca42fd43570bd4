import random

import pytest
from hypothesis import given, strategies as st

from chowfilt.errors import LevelMismatch, NonZeroDegree, NotATower
from chowfilt.genus2 import genus2_curve
from chowfilt.models import (ConstantAbModel, CurveModel, TableAbModel, div_res, div_tr, iota,
                             jacobian_ab_model, pic0_equal, pic0_reduce, validate_models)
from chowfilt.randomgen import LEVELS, random_divisor, standard_curve


@pytest.fixture(scope="module")
def curve():
    # y rational, w2 of level 2, w4 of level 4; no relations
    return CurveModel("C", {"p": 1, "y": 1, "w2": 2, "w4": 4}, "p", [])


# -- restriction / trace -----------------------------------------------------

def test_res_rational_point(curve):
    D = div_res(curve.divisor([("y", 1)]), 2)
    assert D.base == 2 and D.degree() == 1
    assert D == curve.divisor([("y", 1)], base=2)


def test_res_splits_quadratic_point(curve):
    D = curve.divisor([("w2", 1)])
    assert D.degree() == 2
    R = div_res(D, 2)
    # two copies of the now-rational point
    assert R == 2 * curve.divisor([("w2", 1)], base=2)
    assert R.degree() == 2


def test_res_keeps_degree_zero(curve):
    R = div_res(curve.divisor([("y", 1), ("p", -1)]), 3)
    assert R.base == 3 and R.degree() == 0


def test_trace_of_level4_point_to_level2(curve):
    T = div_tr(curve.divisor([("w4", 1)], base=4), 2)
    assert T.base == 2 and T.degree() == 2


def test_trace_of_rational_point_scales_degree(curve):
    # pushforward along a degree-2 base change doubles the degree
    T = div_tr(curve.divisor([("y", 1)], base=2), 1)
    assert T.degree() == 2


def test_res_needs_tower(curve):
    with pytest.raises(NotATower):
        div_res(curve.divisor([("y", 1)], base=2), 3)


@given(st.integers(0, 10**6), st.sampled_from([(e, l) for e in LEVELS for l in LEVELS if l % e == 0]))
def test_trace_of_restriction(seed, tower):
    E, L = tower
    c = standard_curve("C")
    D = random_divisor(random.Random(seed), c, E, rational=False)
    back = div_tr(div_res(D, L), E)
    assert back == (L // E) * D
    assert pic0_equal(back, (L // E) * D)
    assert div_res(D, L).degree() == D.degree()


# -- Pic^0 ----------------------------------------------------------------------

def test_reduce_zero(curve):
    assert pic0_reduce(curve.divisor([])).is_zero()


def test_reduce_free_class(curve):
    cls = pic0_reduce(curve.divisor([("y", 1), ("p", -1)]))
    assert not cls.is_zero()
    assert cls.representative == curve.divisor([("y", 1), ("p", -1)])


def test_reduce_needs_degree_zero(curve):
    with pytest.raises(NonZeroDegree):
        pic0_reduce(curve.divisor([("y", 1)]))


def test_conjugate_is_negative_at_weierstrass_point():
    c = genus2_curve()
    for i in (1, 2, 3):
        y, s = f"y{i}", f"s{i}"
        assert pic0_reduce(c.divisor([(s, 1), ("p1", -1)])) == -pic0_reduce(c.divisor([(y, 1), ("p1", -1)]))
        assert iota(c, s) == -iota(c, y)


def test_iota(curve):
    assert iota(curve, "p").is_zero()
    assert not iota(curve, "y").is_zero()
    with pytest.raises(LevelMismatch):
        iota(curve, "w2", 1)
    assert not iota(curve, "w2", 2).is_zero()


def test_relation_level_matters():
    c = standard_curve("C")
    D = c.divisor([("u2", 1), ("p", -1)], base=2)
    # [u2] - [p] is principal only once u2 is rational
    assert pic0_reduce(D).is_zero()
    assert not pic0_reduce(c.divisor([("q", 1), ("p", -1)])).is_zero()
    assert pic0_reduce(c.divisor([("q", 3), ("p", -3)])).is_zero()


@given(st.integers(0, 10**6), st.sampled_from(LEVELS))
def test_reduce_is_idempotent_and_additive(seed, level):
    rng = random.Random(seed)
    c = standard_curve("C")
    D1 = random_divisor(rng, c, level, rational=False)
    D2 = random_divisor(rng, c, level, rational=False)
    r1 = pic0_reduce(D1)
    assert pic0_reduce(r1.representative) == r1
    assert pic0_reduce(D1 + D2) == r1 + pic0_reduce(D2)
    assert pic0_equal(D1, D1) and pic0_equal(D1 + D2, D2 + D1)


# -- abelian models and validation ----------------------------------------------

def test_constant_model_z5_validates():
    ab = ConstantAbModel([5], ["a"], levels=(1, 2, 3, 6))
    assert validate_models([], ab) == []
    a = ab.named("a")
    assert ab.tr(ab.res(a, 6), 6, 2) == ab.scale(3, a)


def test_table_with_wrong_trace_names_the_generator():
    ab = TableAbModel({1: [3], 2: [3]}, {(2, 1): [[1]]}, {(2, 1): [[1]]})
    bad = [v for v in validate_models([], ab) if v.law == "tr-res"]
    assert len(bad) == 1
    assert bad[0].where == {"n": 2, "m": 1, "generator": 0}


def test_table_with_right_trace_validates():
    ab = TableAbModel({1: [3], 2: [3]}, {(2, 1): [[1]]}, {(2, 1): [[2]]})
    assert validate_models([], ab) == []


def test_genus2_relations_validate():
    c = genus2_curve()
    assert validate_models([c], jacobian_ab_model(c, 2)) == []


def test_jacobian_model_aliases():
    c = genus2_curve()
    J = jacobian_ab_model(c, 2)
    for i in (1, 2, 3):
        assert J.is_zero(J.add(J.named(f"y{i}"), J.named(f"s{i}")))
    assert J.is_zero(J.named("p1"))

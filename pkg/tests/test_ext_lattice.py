import pytest
from hypothesis import given, strategies as st

from chowfilt.errors import NotATower
from chowfilt.ext_lattice import divisors_of, lcm, rel_degree, tensor_decompose


@pytest.mark.parametrize("l, m, want", [(6, 3, 2), (5, 5, 1), (12, 4, 3)])
def test_rel_degree(l, m, want):
    assert rel_degree(l, m) == want


def test_rel_degree_needs_tower():
    with pytest.raises(NotATower):
        rel_degree(6, 4)


@pytest.mark.parametrize("l, m, base, want", [
    (2, 3, 1, [6]),
    (4, 4, 1, [4, 4, 4, 4]),
    (6, 4, 2, [12]),
])
def test_tensor_decompose(l, m, base, want):
    assert sorted(tensor_decompose(l, m, base)) == want


def test_tensor_decompose_6_4_2_bookkeeping():
    parts = tensor_decompose(6, 4, 2)
    # gcd * lcm = l * m, and the components account for [6:2] = 3 over level 4
    assert 2 * 12 == 6 * 4
    assert sum(rel_degree(c, 4) for c in parts) == 3


def test_tensor_decompose_needs_common_base():
    with pytest.raises(NotATower):
        tensor_decompose(4, 6, 4)


levels = st.integers(1, 60)


@given(levels, levels, st.data())
def test_components_account_for_degree(l, m, data):
    from math import gcd
    base = data.draw(st.sampled_from(divisors_of(gcd(l, m))))
    parts = tensor_decompose(l, m, base)
    assert sum(rel_degree(c, m) for c in parts) == rel_degree(l, base)
    assert sorted(parts) == sorted(tensor_decompose(m, l, base))
    assert all(c == lcm(l, m) for c in parts)


@given(levels, st.data())
def test_degree_is_multiplicative(l, data):
    m = data.draw(st.sampled_from(divisors_of(l)))
    base = data.draw(st.sampled_from(divisors_of(m)))
    assert rel_degree(l, base) == rel_degree(l, m) * rel_degree(m, base)


def test_divisors_of():
    assert divisors_of(12) == [1, 2, 3, 4, 6, 12]

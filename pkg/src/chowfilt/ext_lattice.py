"""Finite extensions of the base field, modelled as positive integers.

Level ``n`` stands for the unique extension of degree ``n`` of a finite-field
style base.  Level ``m`` embeds into level ``l`` iff ``m`` divides ``l``; the
compositum of two levels is their lcm and ``L (x) E`` over ``k`` splits into
``gcd`` copies of the compositum.
"""
from __future__ import annotations

from math import gcd

from .errors import NotATower

__all__ = ["check_level", "divides", "divisors_of", "lcm", "rel_degree", "tensor_decompose"]


def lcm(*levels: int) -> int:
    out = 1
    for n in levels:
        out = out * n // gcd(out, n)
    return out


def check_level(n) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError(f"extension level must be a positive integer, got {n!r}")
    return n


def divides(m: int, l: int) -> bool:
    return l % m == 0


def divisors_of(n: int) -> list[int]:
    check_level(n)
    return [m for m in range(1, n + 1) if n % m == 0]


def rel_degree(l: int, m: int) -> int:
    """Degree ``[l : m]`` of level ``l`` over its subfield ``m``."""
    check_level(l)
    check_level(m)
    if l % m:
        raise NotATower(f"level {m} does not divide level {l}")
    return l // m


def tensor_decompose(l: int, m: int, base: int = 1) -> list[int]:
    """Components of ``l (x)_base m`` as a multiset of levels.

    Returns ``gcd(l, m) / base`` copies of ``lcm(l, m)``.
    """
    for n in (l, m, base):
        check_level(n)
    if l % base or m % base:
        raise NotATower(f"base {base} must divide both {l} and {m}")
    return [lcm(l, m)] * (gcd(l, m) // base)

import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from src.algebra import regular_matrix
from src.errors import DeskScaleError, GroupError
from src.gf import euler_totient, field_make, mult_order
from src.group import (
    Group,
    Permutation,
    conjugacy_classes,
    group_inv,
    group_op,
    group_pow,
    parse_group,
    regular_permutation,
)

C15 = parse_group("C15")
C33 = parse_group("C3xC3")


def test_parse_group():
    assert C33.label == "C3xC3"
    assert C33.order == 9
    assert C33.exponent == 3
    assert not C33.is_cyclic
    assert parse_group(" c5 x c9 ").orders == (5, 9)
    assert parse_group("C1").order == 1
    assert parse_group("C1").label == "C1"


@pytest.mark.parametrize("spec", ["D4", "C", "C3xx", "S3"])
def test_parse_group_rejects(spec):
    with pytest.raises(GroupError):
        parse_group(spec)


def test_group_order_limit():
    with pytest.raises(DeskScaleError):
        Group((2048,))
    with pytest.raises(GroupError):
        Group((1, 3))


def test_enumeration_last_factor_fastest():
    names = [str(g) for g in C33.elements()]
    assert names == ["e", "y", "y^2", "x", "xy", "xy^2", "x^2", "x^2y", "x^2y^2"]
    assert [str(g) for g in C15.elements()[:3]] == ["e", "y", "y^2"]


@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_group_axioms(i, j, k):
    g, h, f = C33.element(i), C33.element(j), C33.element(k)
    assert (g * h) * f == g * (h * f)
    assert g * h == h * g
    assert g * ~g == C33.identity
    assert C33.mul_table[i, j] == (g * h).index
    assert C33.quotient_table[i, j] == group_op(group_inv(g), h).index


def test_group_pow():
    y = C15.element(1)
    assert group_pow(y, 15) == C15.identity
    assert str(y ** 3) == "y^3"
    with pytest.raises(GroupError):
        group_op(y, C33.element(1))


@given(st.integers(0, 14), st.integers(0, 14))
def test_regular_representation_is_a_homomorphism(i, j):
    g, h = C15.element(i), C15.element(j)
    composed = regular_permutation(g).compose(regular_permutation(h))
    assert composed == regular_permutation(g * h)
    F = field_make(2)
    assert np.array_equal(
        regular_matrix(g, F) @ regular_matrix(h, F), regular_matrix(g * h, F)
    )


def test_permutation_apply_matches_matrix():
    perm = Permutation((2, 0, 1))
    F = field_make(3)
    v = F.GF([1, 2, 0])
    assert np.array_equal(perm.apply(v), perm.to_matrix(F) @ v)
    assert perm.inverse().compose(perm) == Permutation((0, 1, 2))
    with pytest.raises(GroupError):
        Permutation((0, 0, 1))


def test_conjugacy_classes_of_c15():
    classes = conjugacy_classes(C15, 2)
    assert [c.indices for c in classes] == [(0,), (1, 2, 4, 8), (3, 6, 12, 9), (7, 14, 13, 11), (5, 10)]
    assert [str(c.representative) for c in classes] == ["e", "y", "y^3", "y^7", "y^5"]


def test_conjugacy_classes_of_c3xc3():
    classes = conjugacy_classes(C33, 2)
    assert [c.indices for c in classes] == [(0,), (1, 2), (3, 6), (4, 8), (5, 7)]


@pytest.mark.parametrize("spec, q", [("C15", 2), ("C3xC3", 2), ("C5", 3), ("C7", 2), ("C5xC3", 4)])
def test_classes_partition_the_group(spec, q):
    group = parse_group(spec)
    classes = conjugacy_classes(group, q)
    members = sorted(i for c in classes for i in c.indices)
    assert members == list(range(group.order))
    for c in classes:
        assert (c.members[-1] ** q) == c.representative


def test_conjugacy_classes_need_coprime_q():
    with pytest.raises(GroupError):
        conjugacy_classes(parse_group("C4"), 2)


def test_conjugacy_classes_of_c9():
    classes = conjugacy_classes(parse_group("C9"), 2)
    assert [c.indices for c in classes] == [(0,), (1, 2, 4, 8, 7, 5), (3, 6)]
    assert [c.size for c in classes] == [1, 6, 2]


@given(st.sampled_from([2, 3, 4, 5]), st.integers(2, 90))
def test_generator_classes_have_size_of_the_order_of_q(q, n):
    assume(math.gcd(q, n) == 1)
    classes = conjugacy_classes(parse_group(f"C{n}"), q)
    size_of = {i: c.size for c in classes for i in c.indices}
    l0 = mult_order(q, n)
    assert all(size_of[j] == l0 for j in range(1, n) if math.gcd(j, n) == 1)
    t0 = sum(1 for c in classes if c.size == l0)
    assert t0 * l0 >= euler_totient(n)

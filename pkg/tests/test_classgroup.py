from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from diagquartic.classgroup import (
    FOUR,
    IDENTITY,
    MINUS_ONE,
    CapExceeded,
    class_of,
    h_generators,
    h_group,
    meets_235,
    subgroup_closure,
)

from oracles import closure_order

coeff = st.integers(-3000, 3000).filter(bool)
quads = st.tuples(coeff, coeff, coeff, coeff)
small = st.integers(-200, 200).filter(bool)


def test_class_arithmetic():
    assert class_of(16) == IDENTITY
    assert class_of(-16) == MINUS_ONE
    assert class_of(Fraction(1, 81)) == IDENTITY
    assert class_of(4) == FOUR and FOUR.order() == 2
    assert class_of(2).order() == 4
    assert class_of(8) * class_of(2) == IDENTITY
    assert class_of(Fraction(3, 2)) == class_of(3 * 8)
    assert class_of(-12).representative() == -12
    assert class_of(48).representative() == 3


def test_counterexample_group():
    H = h_group((1, 47, -103, -82297))
    assert H.order == 256
    assert not meets_235(H)
    assert class_of(-1) in H and class_of(4) in H


def test_small_groups():
    # H always contains -1 and 4, which generate a group of order 4
    assert h_group((1, 1, 1, 1)).order == 4
    assert meets_235(h_group((1, 2, 3, 5)))
    assert h_group((1, 1, 1, -1)).order == 4


def test_closure_cap():
    gens = [class_of(p) for p in (2, 3, 5, 7, 11)]
    with pytest.raises(CapExceeded):
        subgroup_closure(gens, cap=256)
    assert subgroup_closure(gens, cap=4**5).order == 4**5
    with pytest.raises(ValueError):
        subgroup_closure(gens, cap=0)


@settings(max_examples=500)
@given(quads)
def test_h_order_divides_256(a):
    H = h_group(a)
    assert 256 % H.order == 0


@settings(max_examples=500)
@given(quads)
def test_generator_sets_agree(a):
    full = subgroup_closure(h_generators(a, all_ratios=True))
    short = subgroup_closure(h_generators(a, all_ratios=False))
    assert full.elements == short.elements


@settings(max_examples=500, deadline=None)
@given(st.tuples(small, small, small, small))
def test_h_order_matches_integer_closure(a):
    # ratio a_i/a_j has the same class as a_i * a_j^3
    gens = [-1, 4] + [a[i] * a[j] ** 3 for i in range(4) for j in range(4) if i != j]
    assert h_group(a).order == closure_order(gens)

"""Continued fractions and cyclic-type contributions."""

from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, strategies as st

from kltledger import CyclicType, HJExpansion, delta_cyclic, dual_q, hj_evaluate, hj_expand

from oracles import cf_value


def coprime_pairs(max_n):
    for n in range(2, max_n + 1):
        for q in range(1, n):
            if gcd(n, q) == 1:
                yield n, q


def test_expand_known_values():
    assert hj_expand(2, 1).weights == (2,)
    assert hj_expand(5, 2).weights == (3, 2)
    assert hj_expand(7, 3).weights == (3, 2, 2)


def test_evaluate_known_values():
    assert hj_evaluate(HJExpansion((2,))) == (2, 1)
    assert hj_evaluate(HJExpansion((3, 2))) == (5, 2)
    # [2, 2, ..., 2] of length l evaluates to (l + 1, l).
    for length in range(1, 12):
        assert hj_evaluate(HJExpansion((2,) * length)) == (length + 1, length)


def test_evaluate_agrees_with_direct_fraction_oracle():
    for n, q in coprime_pairs(60):
        ws = hj_expand(n, q).weights
        assert cf_value(ws) == Fraction(n, q)


def test_dual_known_values():
    assert dual_q(2, 1) == 1
    assert dual_q(5, 2) == 3
    assert dual_q(7, 3) == 5
    assert dual_q(1, 0) == 0


def test_round_trip_and_reciprocity_up_to_500():
    for n, q in coprime_pairs(500):
        assert hj_evaluate(hj_expand(n, q)) == (n, q)
        qp = dual_q(n, q)
        assert 0 < qp < n
        assert (q * qp) % n == 1


def test_expand_rejects_bad_input():
    with pytest.raises(ValueError):
        hj_expand(4, 2)
    with pytest.raises(ValueError):
        hj_expand(3, 3)
    with pytest.raises(ValueError):
        hj_expand(3, 0)


def test_expansion_entries_validated():
    with pytest.raises(ValueError):
        HJExpansion((2, 1, 2))
    with pytest.raises(ValueError):
        HJExpansion(())


def test_delta_cyclic_values():
    assert delta_cyclic(CyclicType(2, 1, 1, 1)) == -4
    assert delta_cyclic(CyclicType(1, 0, 1, 1)) == -6
    assert delta_cyclic(CyclicType(2, 1, 2, 1)) == Fraction(-23, 8)
    assert delta_cyclic(CyclicType(1, 0, 2, 2)) == -3


@given(st.integers(2, 200), st.integers(1, 199), st.integers(1, 6), st.integers(1, 6))
def test_delta_symmetry_under_reversal(n, q, m1, m2):
    # delta(n, q; m1, m2) = delta(n, q'; m2, m1): the chain read backwards.
    if q >= n or gcd(n, q) != 1:
        return
    qp = dual_q(n, q)
    assert delta_cyclic(CyclicType(n, q, m1, m2)) == delta_cyclic(CyclicType(n, qp, m2, m1))


def test_cyclic_type_validation():
    with pytest.raises(ValueError):
        CyclicType(4, 2)
    with pytest.raises(ValueError):
        CyclicType(3, 1, 0, 1)
    assert CyclicType(1, 0).is_smooth

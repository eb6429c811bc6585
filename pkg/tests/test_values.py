from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from goedelkit.values import (
    ONE, ZERO, ConstantFamily, GoedelSet, connective, delta, dmax, limit_points, neg,
    parse_closed_form, parse_constant_family, parse_goedel_set, resid, strongimp, val,
)

unit = st.fractions(min_value=0, max_value=1, max_denominator=50)


@pytest.mark.parametrize("x,y,want", [("1/2", "1/2", 0), (0, 1, 1), ("1/3", "2/3", "2/3")])
def test_resid_examples(x, y, want):
    assert resid(val(x), val(y)) == val(want)


def test_other_connectives():
    assert connective("and", F(1, 3), F(1, 2)) == F(1, 2)
    assert delta(ZERO) == 0 and delta(F(1, 9)) == 1
    assert strongimp(F(1, 2), ZERO) == 0
    assert neg(ZERO) == ONE and neg(F(1, 3)) == ONE


@pytest.mark.parametrize("x,y,want", [("1/4", "1/4", 0), ("1/4", "3/4", "3/4"), (0, 1, 1)])
def test_dmax_examples(x, y, want):
    assert dmax(val(x), val(y)) == val(want)


@given(unit, unit, unit)
def test_adjunction_and_ultrametric(x, y, z):
    assert (max(x, y) >= z) == (x >= resid(y, z))
    assert dmax(x, z) <= max(dmax(x, y), dmax(y, z))


@given(unit, unit)
def test_strongimp_expansion(x, y):
    assert strongimp(x, y) == resid(resid(y, x), y)


def test_membership():
    D = GoedelSet.downward()
    assert D.member(F(1, 7)) and not D.member(F(2, 7))
    assert GoedelSet.full01().member(F(2, 7))


def test_gap_capacity():
    D = GoedelSet.downward()
    assert D.gap_capacity(F(1, 3), F(1, 2)) == 0
    assert D.gap_capacity(ZERO, F(1, 5)) == float("inf")
    assert GoedelSet.full01().gap_capacity(F(1, 3), F(1, 2)) == float("inf")


def test_limit_points():
    assert limit_points(ConstantFamily.finite(["1/4", "1/2"])) == frozenset()
    assert limit_points(ConstantFamily.downward()) == {ZERO}
    fam = parse_closed_form("1/2 + 1/(n+2)")
    assert limit_points(ConstantFamily.harmonic([fam])) == {F(1, 2)}


def test_descriptor_round_trip():
    for text in ("full01", "finite{0,1/4,1/2,1}", "downward"):
        V = parse_goedel_set(text)
        assert parse_goedel_set(V.describe()) == V
    assert parse_constant_family("finite{1/2}").member(F(1, 2))
    with pytest.raises(ValueError):
        parse_goedel_set("finite{1/2")


def test_rejects_values_outside_unit():
    with pytest.raises(ValueError):
        val("3/2")

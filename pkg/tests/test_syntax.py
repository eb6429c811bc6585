import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from goedelkit import syntax as sx
from goedelkit.generators import random_formula

rho = sx.atom("rho")


def test_parse_examples():
    assert sx.parse_formula("~~rho -> #1/2") == sx.Imp(sx.neg(sx.neg(rho)), sx.truth(F(1, 2)))
    assert sx.parse_formula("forall x. R(x)") == sx.Forall("x", sx.atom("R", sx.Var("x")))
    p, q = sx.atom("p"), sx.atom("q")
    assert sx.parse_formula("p => q") == sx.Imp(sx.Imp(q, p), q)


def test_print_examples():
    assert sx.print_formula(sx.Imp(sx.BOT, rho)) == "bot -> rho"
    assert sx.print_formula(sx.neg(rho)) == "~rho"
    assert sx.print_formula(sx.truth(F(1, 3))) == "#1/3"


def test_subformulas():
    p, q = sx.atom("p"), sx.atom("q")
    assert set(sx.subformulas(sx.And(p, q))) == {p, q, sx.And(p, q)}
    assert set(sx.subformulas(sx.neg(p))) == {p, sx.BOT, sx.neg(p)}
    assert sx.subformulas(p) == [p]


def test_family_instances():
    T = sx.parse_theory("family n: #(1/n) -> rho\n")
    got = sx.instantiate_family(T, 3)
    assert got == [sx.Imp(sx.truth(r), rho) for r in (F(1), F(1, 2), F(1, 3))]
    T2 = sx.parse_theory("family n: rho -> #(1/n)\n")
    assert sx.instantiate_family(T2, 2) == [sx.Imp(rho, sx.truth(1)), sx.Imp(rho, sx.truth(F(1, 2)))]
    T3 = sx.parse_theory("rho\n% just a sentence\n")
    assert sx.instantiate_family(T3, 5) == [rho]


def test_free_variables_and_substitution():
    f = sx.parse_formula("forall x. R(x, y)")
    assert sx.free_vars(f) == {"y"}
    assert not sx.substitutable(f, "y", sx.Var("x"))
    g = sx.substitute(sx.parse_formula("R(y) & forall y. R(y)"), "y", sx.Var("z"))
    assert sx.print_formula(g) == "R(z) & (forall y. R(y))"


@pytest.mark.parametrize("bad", ["p ->", "(p & q", "forall . p", "#2", "p q"])
def test_parse_errors(bad):
    with pytest.raises(sx.SyntaxError_):
        sx.parse_formula(bad)


@settings(max_examples=300)
@given(st.integers(0, 10 ** 6), st.integers(1, 14))
def test_print_parse_round_trip(seed, size):
    f = random_formula(random.Random(seed), ["p", "q", "rho"], ["1/4", "1/2"], size)
    assert sx.parse_formula(sx.print_formula(f)) == f

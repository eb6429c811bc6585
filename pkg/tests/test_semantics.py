from fractions import Fraction as F

import pytest

from goedelkit import syntax as sx
from goedelkit.semantics import (
    EvalError, Structure, dualize_display, eval_formula, eval_term, format_structure, models,
    parse_structure, propositional, tabulate,
)
from goedelkit.values import ONE, ZERO


@pytest.fixture
def M():
    return Structure(("a", "b"), {"R": {("a",): F(1, 3), ("b",): F(2, 3)}},
                     {"f": {("a",): "a", ("b",): "b"}}, {"c": "b"})


def test_terms(M):
    assert eval_term(M, sx.Var("x"), {"x": "a"}) == "a"
    assert eval_term(M, sx.Const("c"), {}) == "b"
    assert eval_term(M, sx.Func("f", (sx.Const("c"),)), {}) == "b"


def test_quantifiers(M):
    assert eval_formula(M, sx.parse_formula("forall x. R(x)")) == F(2, 3)
    assert eval_formula(M, sx.parse_formula("exists x. R(x)")) == F(1, 3)
    assert eval_formula(M, sx.BOT) == ONE


def test_models():
    rho = sx.atom("rho")
    assert models(propositional({"rho": ZERO}), [rho])
    chk = models(propositional({"rho": F(1, 2)}), [rho])
    assert not chk and chk.value == F(1, 2)
    T = [sx.parse_formula("~~rho -> #1/2"), sx.parse_formula("~rho")]
    assert models(propositional({"rho": ONE}), T)


def test_dual_display():
    assert [dualize_display(x) for x in (ZERO, ONE, F(1, 3))] == [ONE, ZERO, F(2, 3)]


def test_tabulate_matches_eval(M):
    f = sx.parse_formula("R(x) -> R(y)")
    tab = tabulate(M, f, ["x", "y"])
    for (a, b), v in tab.items():
        assert v == eval_formula(M, f, {"x": a, "y": b})


def test_unbound_variable(M):
    with pytest.raises(EvalError):
        eval_formula(M, sx.parse_formula("R(z)"))


def test_structure_text_round_trip():
    text = open("data/structures/discrete3.st").read()
    M = parse_structure(text)
    assert parse_structure(format_structure(M)) == M

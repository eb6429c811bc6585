import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from goedelkit import decide, syntax as sx
from goedelkit.generators import random_formula, random_theory
from goedelkit.semantics import models, propositional
from goedelkit.values import ONE, ZERO, ConstantFamily, GoedelSet

P = sx.parse_formula
FULL, DOWN = GoedelSet.full01(), GoedelSet.downward()


def arrangements(atoms, consts, V):
    return list(decide.enumerate_arrangements(atoms, consts, V))


def test_arrangement_counts():
    assert len(arrangements(["rho"], [0, 1], FULL)) == 3
    # the gap (1/2, 1) is empty in the downward set
    assert len(arrangements(["rho"], [0, F(1, 2), 1], DOWN)) == 4
    assert len(arrangements([], [0, 1], FULL)) == 1


def test_symbolic_evaluation():
    for arr in arrangements(["rho"], [0, F(1, 2), 1], FULL):
        assert decide.eval_symbolic(P("rho -> rho"), arr).is_zero
        w = arr.realize(FULL)
        if w["rho"] == ONE:
            assert decide.eval_symbolic(P("~~rho -> #1/2"), arr).is_zero
        if 0 < w["rho"] < F(1, 2):
            assert not decide.eval_symbolic(sx.Delta(sx.atom("rho")), arr).is_zero


def test_sat_examples():
    assert decide.sat([P("rho & ~rho")]).kind == "UNSAT"
    assert decide.sat([P("rho -> rho")]).kind == "SAT"
    v = decide.sat([P("#1/2 -> rho")])
    assert v.kind == "SAT" and v.witness["rho"] <= F(1, 2)
    # rho = 1 satisfies rho -> 1/2 under the reverse order
    v = decide.sat([P("~~rho -> #1/2"), P("rho -> #1/2")])
    assert v.kind == "SAT" and v.witness["rho"] == ONE


def test_entails_examples():
    A = ConstantFamily.finite(["1/2"])
    assert decide.entails([P("~~rho -> #1/2")], P("~rho"), None, A).kind == "ENTAILED"
    assert decide.entails([P("rho")], P("rho")).kind == "ENTAILED"
    v = decide.entails([], P("rho"))
    assert v.kind == "NOT_ENTAILED" and v.witness["rho"] != 0


def test_approx_entails_examples():
    A = ConstantFamily.finite(["1/8", "1/4", "1/2"])
    [(_, v)] = decide.approx_entails([P("#1/2 -> rho")], P("rho"), None, A, ["1/2"])
    assert v.kind == "ENTAILED"
    [(_, v)] = decide.approx_entails([], P("rho"), None, A, [1])
    assert v.kind == "ENTAILED"
    [(_, v)] = decide.approx_entails([P("#1/4 -> rho")], P("rho"), None, A, ["1/8"])
    assert v.kind == "NOT_ENTAILED" and v.witness["rho"] == F(1, 4)
    with pytest.raises(ValueError):
        decide.approx_entails([], P("rho"), None, A, ["1/3"])


def test_strong_implication_in_downward():
    v = decide.oracle_sat([P("#1/2 => rho")], DOWN)
    assert v.kind == "SAT" and v.witness["rho"] == F(1, 3)
    v = decide.sat([P("#1/2 => rho")], DOWN)
    assert v.kind == "SAT" and (v.witness["rho"] == 0 or v.witness["rho"] < F(1, 2))


def test_constants_outside_A_rejected():
    with pytest.raises(ValueError):
        decide.sat([P("#1/3 -> rho")], None, ConstantFamily.finite(["1/2"]))


def test_quantifiers_rejected():
    with pytest.raises(decide.NotPropositional):
        decide.sat([P("forall x. R(x)")])


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["full", "finite", "down"]))
def test_agrees_with_oracle(seed, which):
    V = {"full": FULL, "finite": GoedelSet.finite(["1/4", "1/2", "3/4"]), "down": DOWN}[which]
    rng = random.Random(seed)
    T = random_theory(rng, ["p", "q", "r"], ["1/4", "1/2"], rng.randint(1, 3), 9, use_delta=True)
    a, b = decide.sat(T, V), decide.oracle_sat(T, V)
    assert a.kind == b.kind
    if a.kind == "SAT":
        assert models(propositional(a.witness, V), T)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_semantic_deduction_one_way(seed):
    rng = random.Random(seed)
    T = random_theory(rng, ["p", "q"], ["1/2"], rng.randint(0, 2), 5)
    phi = random_formula(rng, ["p", "q"], ["1/2"], 4)
    psi = random_formula(rng, ["p", "q"], ["1/2"], 4)
    if decide.entails(T, sx.Imp(phi, psi)).kind == "ENTAILED":
        assert decide.entails(T + [phi], psi).kind == "ENTAILED"


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_semantic_deduction_without_constants(seed):
    rng = random.Random(seed)
    T = random_theory(rng, ["p", "q", "r"], [], rng.randint(0, 2), 5)
    phi = random_formula(rng, ["p", "q", "r"], [], 4, use_delta=False)
    psi = random_formula(rng, ["p", "q", "r"], [], 4, use_delta=False)
    assert decide.entails(T + [phi], psi).kind == decide.entails(T, sx.Imp(phi, psi)).kind


def test_deduction_gap_with_constants():
    # {~~rho -> 1/2} entails ~rho, but the implication is not valid
    A = ConstantFamily.finite(["1/2"])
    phi = P("~~rho -> #1/2")
    assert decide.entails([phi], P("~rho"), None, A).kind == "ENTAILED"
    assert decide.entails([], sx.Imp(phi, P("~rho")), None, A).kind == "NOT_ENTAILED"


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_entails_agrees_with_oracle(seed):
    rng = random.Random(seed)
    T = random_theory(rng, ["p", "q"], ["1/2"], rng.randint(0, 2), 6, use_delta=True)
    phi = random_formula(rng, ["p", "q"], ["1/2"], 5)
    assert decide.entails(T, phi).kind == decide.oracle_entails(T, phi).kind

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from goedelkit import decide, henkin, syntax as sx
from goedelkit.generators import random_structure, random_theory
from goedelkit.semantics import eval_formula, models
from goedelkit.values import ONE, ConstantFamily

P = sx.parse_formula
HALF = ConstantFamily.finite(["1/2"])


def decisions(trace):
    return [(st.decision, st.added) for st in trace.stages]


def test_first_branch_rule():
    tr = henkin.complete_theory([], [P("p"), P("q")], None, HALF)
    assert tr.guard == sx.truth(F(1, 2))
    assert tr.stages[0].added == P("p -> q")


def test_already_complete():
    T = [P("p -> #1/2"), P("#1/2 -> p")]
    tr = henkin.complete_theory(T, [P("p"), P("#1/2")], None, HALF)
    assert all(st.decision == "already complete" for st in tr.stages)
    assert tr.final == T


def test_bottom_pair():
    tr = henkin.complete_theory([P("q")], [P("q"), sx.BOT])
    assert tr.guard == sx.BOT
    assert P("bot -> q") in tr.final


def test_guard_choice():
    assert henkin.guard_for(None) == sx.BOT
    assert henkin.guard_for(ConstantFamily.finite(["1/4", "1/2"])) == sx.truth(F(1, 4))
    assert henkin.guard_for(ConstantFamily.downward(), [F(1, 3)]) == sx.truth(F(1, 3))


@pytest.mark.parametrize("T,want", [
    (["rho -> #1/2", "#1/2 -> rho"], F(1, 2)),
    (["rho"], 0),
    (["~~rho -> #1/2"], ONE),
])
def test_canonical_model_values(T, want):
    T = [P(t) for t in T]
    trace, cm = henkin.henkin_pipeline(T, None, HALF)
    assert cm.certificate
    assert cm.structure.preds["rho"][()] == want


def test_unsatisfiable_theory_is_rejected():
    with pytest.raises(henkin.HenkinError):
        henkin.henkin_pipeline([P("rho & ~rho")], None, HALF)


def test_theta_shape():
    w = henkin.build_theta(P("R(x)"), "x", F(1, 2), F(1, 3), "c", ConstantFamily.finite(["1/3", "1/2"]))
    sig = sx.Signature(preds={"R": 1}, consts={"c"})
    want = sx.or_(P("#1/2 -> forall x. R(x)"), P("R(c) -> #1/3", sig))
    assert w.formula == want


def test_theta_preconditions():
    with pytest.raises(henkin.HenkinError):
        henkin.build_theta(P("R(x)"), "x", F(1, 2), F(1, 2), "c")
    with pytest.raises(henkin.HenkinError):
        henkin.build_theta(P("R(x) & R(c)"), "x", F(1, 2), F(1, 3), "c")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_witness_extension_satisfies_theta(seed):
    rng = random.Random(seed)
    M = random_structure(rng, {"R": 1}, rng.randint(1, 4), [0, F(1, 4), F(1, 2), F(3, 4), 1])
    r, s = sorted(rng.sample([F(1, 4), F(1, 2), F(3, 4), ONE], 2), reverse=True)
    w = henkin.build_theta(P("R(x)"), "x", r, s, henkin.fresh_constant(M.consts))
    M2 = henkin.extend_with_witness(M, w)
    assert eval_formula(M2, w.formula) == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_pipeline_on_random_theories(seed):
    rng = random.Random(seed)
    A = ConstantFamily.finite(["1/4", "1/2", "3/4"])
    T = random_theory(rng, ["p", "q"], ["1/4", "1/2", "3/4"], rng.randint(1, 3), 5)
    if decide.sat(T, None, A).kind != "SAT":
        return
    trace, cm = henkin.henkin_pipeline(T, None, A)
    assert cm.certificate and models(cm.structure, T)
    assert henkin.guard_preserved(trace, None, A)

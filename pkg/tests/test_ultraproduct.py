import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from goedelkit import syntax as sx, ultraproduct as up
from goedelkit.generators import random_structure
from goedelkit.semantics import Structure, eval_formula, parse_structure
from goedelkit.values import ONE, ZERO, GoedelSet, parse_closed_form

DOWN = GoedelSet.downward()


def load(name):
    return parse_structure(open(f"data/structures/{name}.st").read())


def test_principal_limit():
    assert up.dlimit([F(1, 2), F(1, 3), F(1, 4)], up.Principal(2)) == F(1, 3)
    with pytest.raises(up.UltraError):
        up.dlimit([F(1, 2)], up.Principal(3))


def test_frechet_limits():
    assert up.dlimit(up.EventuallyConstant((F(1, 3),), F(1, 2)), up.FrechetExtension(), DOWN) == F(1, 2)
    assert up.dlimit(parse_closed_form("1/n"), up.FrechetExtension(), DOWN) == 0


def test_frechet_needs_compact_set():
    with pytest.raises(up.UltraError):
        up.dlimit(parse_closed_form("1/n"), up.FrechetExtension(), GoedelSet.full01())


def test_parsers():
    assert up.parse_family("1/2,1/3") == [F(1, 2), F(1, 3)]
    assert up.parse_family("(1/2, 0, ...)") == up.EventuallyConstant((F(1, 2),), ZERO)
    assert up.parse_ultrafilter("principal(2)") == up.Principal(2)
    assert up.parse_ultrafilter("frechet") == up.FrechetExtension()


def test_product_shapes():
    M1, M2 = load("m1"), load("m2")
    P = up.ultraproduct([M1, M2], up.Principal(1))
    assert len(P.universe) == len(M1.universe) * len(M2.universe)
    for e in P.universe:
        for p, table in P.preds.items():
            if P.arity(p) == 1:
                assert table[(e,)] == M1.preds[p][(up.components(e)[0],)]
    single = up.ultraproduct([M1], up.Principal(1))
    assert [up.components(e)[0] for e in single.universe] == list(M1.universe)


def test_los_small_and_negative_control():
    M1, M2 = load("m1"), load("m2")
    assert up.los_check([M1, M2], up.Principal(2), 2).ok
    bad = up.corrupt(up.ultraproduct([M1, M2], up.Principal(2)))
    assert not up.los_check([M1, M2], up.Principal(2), 2, product=bad).ok


def test_existential_commutes_with_projection():
    M1, M2 = load("m1"), load("m2")
    f = sx.parse_formula("exists x. R(x)")
    for j in (1, 2):
        P = up.ultraproduct([M1, M2], up.Principal(j))
        assert eval_formula(P, f) == eval_formula([M1, M2][j - 1], f)


def test_signature_mismatch():
    A = Structure(("a",), {"R": {("a",): ZERO}})
    B = Structure(("b",), {"S": {("b",): ZERO}})
    with pytest.raises(up.UltraError):
        up.ultraproduct([A, B], up.Principal(1))


def test_continuity_only_fails_for_delta():
    fams = [parse_closed_form("1/n"), parse_closed_form("1/(n+1)"),
            up.EventuallyConstant((), F(1, 2)), up.EventuallyConstant((), ZERO)]
    bad = up.continuity_check(fams, DOWN)
    assert bad and {v.op for v in bad} == {"Δ"}
    assert any(v.limit_of_op == ONE and v.op_of_limits == ZERO for v in bad)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_los_on_random_triples(seed):
    rng = random.Random(seed)
    pool = [ZERO, F(1, 4), F(1, 2), ONE]
    ms = [random_structure(rng, {"R": 1, "S": 1}, rng.randint(1, 2), pool, prefix=f"m{i}_") for i in range(3)]
    assert up.los_check(ms, [up.Principal(j) for j in (1, 2, 3)], 2).ok

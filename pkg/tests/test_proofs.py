import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from goedelkit import proofs, syntax as sx
from goedelkit.generators import random_formula
from goedelkit.values import ConstantFamily

P = sx.parse_formula


def load(path):
    return proofs.parse_proof(open(path).read())


def test_match_axiom_examples():
    assert proofs.match_axiom(P("p & q -> p")) == [("G2", {"φ": P("p"), "ψ": P("q")})]
    names = [n for n, _ in proofs.match_axiom(P("(#1/4 -> #1/2) <-> #1/2"))]
    assert "RG2(b)" in names
    assert proofs.match_axiom(P("p -> q")) == []


def test_side_conditions():
    # r >= s fails, so this is not an RG2(a) instance
    assert "RG2(a)" not in [n for n, _ in proofs.match_axiom(P("#1/4 -> #1/2"))]
    assert [n for n, _ in proofs.match_axiom(P("~~#1/3"))] == ["RG3"]
    assert proofs.match_axiom(P("~~#1/3"), ConstantFamily.finite(["1/2"])) == []
    # x is free in R(x), so the G∀2 side condition fails
    f = P("(forall x. R(x) -> R(x)) -> R(x) -> (forall x. R(x))")
    assert "G∀2" not in [n for n, _ in proofs.match_axiom(f)]


def test_quantifier_schemata():
    assert "G∀1" in [n for n, _ in proofs.match_axiom(P("(forall x. R(x, y)) -> R(c, y)"))]
    assert "G∃1" in [n for n, _ in proofs.match_axiom(P("R(c) -> exists x. R(x)"))]
    assert proofs.match_axiom(P("(forall x. R(x)) -> R(c) & R(d)")) == []


def test_checker_accepts_proofs():
    res = proofs.check_proof([], load("data/proofs/identity.prf"))
    assert res and res.conclusion == P("p -> p")
    T = [P("#1/4 -> rho")]
    assert proofs.check_proof(T, load("data/proofs/half_bound.prf"), ConstantFamily.finite(["1/4", "1/2"]))


def test_mp_and_gen():
    pf = proofs.parse_proof("1. p ; premise\n2. p -> q ; premise\n3. q ; mp 1 2\n")
    assert proofs.check_proof([P("p"), P("p -> q")], pf)
    pf = proofs.parse_proof("1. R(x) & R(x) -> R(x) ; axiom G2\n2. forall x. R(x) & R(x) -> R(x) ; gen 1 x\n")
    assert proofs.check_proof([], pf)


def test_checker_errors():
    res = proofs.check_proof([P("p")], load("data/proofs/bad_mp.prf"))
    assert not res and str(res).startswith("Error line 3")
    res = proofs.check_proof([], proofs.parse_proof("1. q ; mp 0 0\n"))
    assert str(res) == "Error line 1: bad index"
    res = proofs.check_proof([], proofs.parse_proof("1. p ; premise\n"))
    assert "premise not in theory" in str(res)
    res = proofs.check_proof([], proofs.parse_proof("1. p -> q ; axiom G2\n"))
    assert "not an instance" in str(res)


def test_delta_rule_disabled():
    pf = proofs.parse_proof("1. delta(p) -> p ; axiom D3\n")
    assert proofs.check_proof([], pf)
    assert not proofs.check_proof([], pf, delta_enabled=False)


def test_canonical_names():
    assert proofs.canonical_name("RG2b") == "RG2(b)"
    assert proofs.canonical_name("GA1") == "G∀1"
    assert proofs.canonical_name("Delta3") == "Δ3"
    with pytest.raises(KeyError):
        proofs.canonical_name("G99")


def test_format_round_trip():
    pf = load("data/proofs/identity.prf")
    again = proofs.parse_proof(proofs.format_proof(pf))
    assert [(l.formula, l.rule, l.args) for l in again.lines] == [(l.formula, l.rule, l.args) for l in pf.lines]


@pytest.mark.parametrize("text", ["~~#1/3", "p & q -> p", "delta(p) -> p"])
def test_spotcheck_examples(text):
    assert proofs.soundness_spotcheck(P(text)).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([s.name for s in proofs.SCHEMATA if s.pattern is not None]))
def test_instances_are_valid(seed, name):
    rng = random.Random(seed)
    s = {m: random_formula(rng, ["p", "q"], ["1/2"], rng.randint(1, 4)) for m in ("φ", "ψ", "χ")}
    s |= {c: rng.choice([F(1, 4), F(1, 2), F(3, 4)]) for c in ("r", "s", "t")}
    f = proofs.instantiate(name, s)
    if any(n == name for n, _ in proofs.match_axiom(f)):
        assert proofs.soundness_spotcheck(f, samples=30, seed=seed).ok

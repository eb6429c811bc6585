from fractions import Fraction as F

import pytest

from goedelkit import lab
from goedelkit.lab import IntervalSet, Interval


def test_sweep_witnesses():
    rows = dict(lab.finite_sat_sweep(lab.get_scenario("EX_3_1_INC"), 3).rows)
    assert rows[3]["rho"] == F(3, 10)
    rows = dict(lab.finite_sat_sweep(lab.get_scenario("EX_DELTA"), 4).rows)
    assert rows[4]["rho"] == F(1, 4)
    rows = dict(lab.finite_sat_sweep(lab.get_scenario("EX_ENTAIL_FAIL"), 5).rows)
    assert rows[5]["rho"] == F(1, 5)


@pytest.mark.parametrize("name", ["EX_3_1_INC", "EX_3_1_DEC", "EX_3_2", "EX_DELTA"])
def test_unsat_scenarios(name):
    rep = lab.full_unsat(lab.get_scenario(name))
    assert rep.empty and rep.verdict == "FINITELY-SAT ∧ UNSAT"


def test_forced_scenario():
    rep = lab.full_unsat(lab.get_scenario("EX_ENTAIL_FAIL"))
    assert not rep.empty and rep.forced == {"rho": 0} and rep.goal_empty


@pytest.mark.parametrize("name", [s.name for s in lab.scenario_catalog()])
def test_every_scenario_reaches_its_verdict(name):
    ok, report = lab.run(name, 5)
    assert ok and "VERDICT" in report


def test_unknown_scenario():
    with pytest.raises(KeyError):
        lab.get_scenario("EX_NOPE")


def test_sweep_rejects_zero_k():
    with pytest.raises(ValueError):
        lab.finite_sat_sweep(lab.get_scenario("EX_DELTA"), 0)


def test_interval_meet_and_emptiness():
    a = Interval(F(0), True, F(1, 2), False)
    b = Interval(F(1, 2), True, F(1), True)
    assert a.meet(b).empty
    assert a.contains(F(1, 4)) and not a.contains(F(1, 2))
    assert IntervalSet.point(F(1, 2)).forced_value(lab.GoedelSet.full01()) == F(1, 2)

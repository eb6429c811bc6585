"""Compactness counterexamples, checked by machine.

Each scenario is a theory with parametric families.  Two independent checks
are run:

* a *sweep* builds a concrete model of every finite prefix (via ``decide`` or
  a scenario-supplied first-order witness) and re-checks it with
  ``semantics.models``;
* a *constraint trace* transcribes the hand argument that the whole theory
  has no model (or forces a value): each sentence schema becomes a
  constraint on a tracked value, families are replaced by their limit
  constraint, and the intersection is tested against V.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import decide
from . import syntax as sx
from .semantics import Structure, eval_formula, models
from .values import ONE, ZERO, ClosedForm, ConstantFamily, GoedelSet, fmt


class ScenarioError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# interval sets

@dataclass(frozen=True)
class Interval:
    lo: Fraction
    lo_closed: bool
    hi: Fraction
    hi_closed: bool

    @property
    def empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed))

    def contains(self, x: Fraction) -> bool:
        above = x > self.lo or (x == self.lo and self.lo_closed)
        below = x < self.hi or (x == self.hi and self.hi_closed)
        return above and below

    def meet(self, other: "Interval") -> "Interval":
        if self.lo > other.lo:
            lo, lc = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lc = other.lo, other.lo_closed
        else:
            lo, lc = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hc = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hc = other.hi, other.hi_closed
        else:
            hi, hc = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, lc, hi, hc)

    def __str__(self) -> str:
        if self.lo == self.hi:
            return "{" + fmt(self.lo) + "}"
        return f"{'[' if self.lo_closed else '('}{fmt(self.lo)},{fmt(self.hi)}{']' if self.hi_closed else ')'}"


def _touch(a: Interval, b: Interval) -> bool:
    # a starts no later than b; do they overlap or abut without a hole?
    if a.hi > b.lo:
        return True
    return a.hi == b.lo and (a.hi_closed or b.lo_closed)


class IntervalSet:
    """Finite union of disjoint, sorted intervals inside [0,1]."""

    def __init__(self, parts=()):
        items = sorted((p for p in parts if not p.empty), key=lambda p: (p.lo, not p.lo_closed))
        merged: list[Interval] = []
        for p in items:
            if merged and _touch(merged[-1], p):
                q = merged[-1]
                if p.hi > q.hi or (p.hi == q.hi and p.hi_closed):
                    hi, hc = p.hi, p.hi_closed
                else:
                    hi, hc = q.hi, q.hi_closed
                merged[-1] = Interval(q.lo, q.lo_closed, hi, hc)
            else:
                merged.append(p)
        self.parts = tuple(merged)

    @classmethod
    def unit(cls) -> "IntervalSet":
        return cls([Interval(ZERO, True, ONE, True)])

    @classmethod
    def point(cls, x) -> "IntervalSet":
        x = Fraction(x)
        return cls([Interval(x, True, x, True)])

    def __and__(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet([a.meet(b) for a in self.parts for b in other.parts])

    def __or__(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.parts + other.parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalSet) and self.parts == other.parts

    def __contains__(self, x) -> bool:
        return any(p.contains(Fraction(x)) for p in self.parts)

    def restrict(self, V: GoedelSet) -> "IntervalSet":
        """Drop parts that contain no member of V."""
        return IntervalSet([p for p in self.parts if V.has_member_in(p.lo, p.lo_closed, p.hi, p.hi_closed)])

    def is_empty_in(self, V: GoedelSet) -> bool:
        return not self.restrict(V).parts

    def forced_value(self, V: GoedelSet) -> Fraction | None:
        """The unique member of V in the set, if there is exactly one."""
        parts = self.restrict(V).parts
        if len(parts) != 1:
            return None
        p = parts[0]
        if p.lo == p.hi:
            return p.lo
        members = V.members_between(p.lo, p.hi)
        if members is None:
            return None
        pts = list(members)
        if p.lo_closed and V.member(p.lo):
            pts.append(p.lo)
        if p.hi_closed and V.member(p.hi):
            pts.append(p.hi)
        return pts[0] if len(pts) == 1 else None

    def sup(self) -> tuple[Fraction, bool] | None:
        if not self.parts:
            return None
        last = self.parts[-1]
        return last.hi, last.hi_closed

    def __str__(self) -> str:
        return " ∪ ".join(map(str, self.parts)) if self.parts else "∅"


def _le(c, closed=True):
    return IntervalSet([Interval(ZERO, True, Fraction(c), closed)])


def _ge(c, closed=True):
    return IntervalSet([Interval(Fraction(c), closed, ONE, True)])


# ---------------------------------------------------------------------------
# constraint rules

@dataclass(frozen=True)
class Rule:
    """A constraint on ``var``: ``var op bound``, optionally ``or var = 0``.

    ``bound`` is a value, a closed-form family (the rule then holds for every
    n >= 1) or the name of another tracked variable (the rule then reads
    "var op some value of that variable").
    """

    var: str
    op: str                      # le | lt | ge | gt
    bound: Fraction | ClosedForm | str
    or_zero: bool = False
    why: str = ""

    def is_family(self) -> bool:
        return isinstance(self.bound, ClosedForm)

    def text(self, bound_text: str | None = None) -> str:
        sym = {"le": "≤", "lt": "<", "ge": "≥", "gt": ">"}[self.op]
        b = bound_text or (f"{self.bound}" if self.is_family() else
                           self.bound if isinstance(self.bound, str) else fmt(self.bound))
        s = f"{self.var} {sym} {b}"
        if self.is_family():
            s = f"∀n: {s}"
        return s + (f" or {self.var} = 0" if self.or_zero else "")


def _atomic(op: str, c: Fraction, closed_override: bool | None = None) -> IntervalSet:
    closed = op in ("le", "ge") if closed_override is None else closed_override
    return _le(c, closed) if op in ("le", "lt") else _ge(c, closed)


def _limit_of(rule: Rule) -> tuple[Fraction, bool, str]:
    """Replace a family rule by the equivalent single constraint.

    x ≤ f(n) for all n  iff  x ≤ inf f.   x < f(n) for all n  iff  x < inf f
    when the infimum is attained, else x ≤ inf f.  Dually for ≥ and >.
    """
    f = rule.bound
    if rule.op in ("le", "lt"):
        v, attained = f.inf()
        closed = rule.op == "le" or not attained
        note = f"inf {f} = {fmt(v)} ({'attained' if attained else 'not attained'})"
    else:
        v, attained = f.sup()
        closed = rule.op == "ge" or not attained
        note = f"sup {f} = {fmt(v)} ({'attained' if attained else 'not attained'})"
    return v, closed, note


def apply_rule(rule: Rule, state: dict[str, IntervalSet]) -> tuple[IntervalSet, str]:
    """Constraint set contributed by ``rule`` in the current state, plus a note."""
    note = ""
    if isinstance(rule.bound, str):
        other = state[rule.bound]
        if rule.op != "lt":
            raise ScenarioError(f"variable coupling only supports '<', got {rule.op}")
        top = other.sup()
        if top is None:
            cs = IntervalSet()
        else:
            # var < v for some feasible v  iff  var < sup of the feasible set
            cs = _le(top[0], False)
            note = f"sup of {rule.bound} = {fmt(top[0])}"
    elif rule.is_family():
        v, closed, note = _limit_of(rule)
        cs = _le(v, closed) if rule.op in ("le", "lt") else _ge(v, closed)
    else:
        cs = _atomic(rule.op, rule.bound)
    if rule.or_zero:
        cs = cs | IntervalSet.point(ZERO)
    return cs, note


def instantiate_rule(rule: Rule, m: int) -> list[Rule]:
    """Finite version of a rule: a family rule becomes its first m instances."""
    if not rule.is_family():
        return [rule]
    return [Rule(rule.var, rule.op, rule.bound(n), rule.or_zero, rule.why) for n in range(1, m + 1)]


# ---------------------------------------------------------------------------
# scenarios

@dataclass
class Scenario:
    name: str
    title: str
    theory_text: str
    V: GoedelSet
    A: ConstantFamily
    tracked: tuple[str, ...]
    rules: list[Rule]
    expect: str                   # unsat | forced
    goal: str | None = None       # sentence claimed entailed (expect == forced)
    goal_fails: list[Rule] = field(default_factory=list)
    witness: Callable[[int], Structure] | None = None
    value_of: Callable[[Structure], dict[str, Fraction]] | None = None
    approx: bool = False
    families: bool = True

    def signature(self) -> sx.Signature:
        return sx.Signature(A=self.A)

    def theory(self) -> sx.Theory:
        return sx.parse_theory(self.theory_text, self.signature())

    def prefix(self, m: int) -> list[sx.Formula]:
        return sx.instantiate_family(self.theory(), m)

    def goal_formula(self) -> sx.Formula | None:
        return None if self.goal is None else sx.parse_formula(self.goal, self.signature())


def _prop_values(M: Structure) -> dict[str, Fraction]:
    return {p: t[()] for p, t in M.preds.items() if M.arity(p) == 0}


def _ex_3_2_witness(m: int) -> Structure:
    r = ClosedForm(Fraction(1, 2), Fraction(-1), Fraction(2))
    universe = tuple(f"e{j}" for j in range(1, m + 2))
    R = {(f"e{j}",): r(j) for j in range(1, m + 2)}
    return Structure(universe, {"R": R, "rho": {(): r(m)}})


def _ex_3_2_values(M: Structure) -> dict[str, Fraction]:
    v = eval_formula(M, sx.parse_formula("forall x. R(x)"))
    return {"v": v, "rho": M.preds["rho"][()]}


HALF = Fraction(1, 2)
_INC = ClosedForm(HALF, Fraction(-1), Fraction(2))     # 1/2 - 1/(n+2), increasing to 1/2
_INC_NEXT = ClosedForm(HALF, Fraction(-1), Fraction(3))
_DEC = ClosedForm(HALF, Fraction(1), Fraction(2))      # 1/2 + 1/(n+2), decreasing to 1/2
_HARM = ClosedForm(ZERO, ONE, ZERO)                    # 1/n


def scenario_catalog() -> list[Scenario]:
    full = GoedelSet.full01()
    return [
        Scenario(
            "EX_2_1",
            "strong completeness gap: {~~rho -> 1/2} entails ~rho",
            "~~rho -> #1/2\n",
            full, ConstantFamily.finite([HALF]), ("rho",),
            [Rule("rho", "ge", ONE, why="~~rho is 0 for rho = 1 and 1 otherwise; 1 -> 1/2 is 0, 0 -> 1/2 is 1/2")],
            "forced", goal="~rho",
            goal_fails=[Rule("rho", "lt", ONE, why="~rho is 0 exactly when rho = 1")],
            families=False,
        ),
        Scenario(
            "EX_3_1_INC",
            "limit point a = 1/2 approached from below by r_n = 1/2 - 1/(n+2)",
            "#1/2 => rho\nfamily n: rho -> #(1/2-1/(n+2))\n",
            full, ConstantFamily.harmonic([_INC], [HALF]), ("rho",),
            [
                Rule("rho", "lt", HALF, or_zero=True, why="a => rho is 0 iff rho < a or rho = 0"),
                Rule("rho", "ge", _INC, why="rho -> r_n is 0 iff rho >= r_n"),
            ],
            "unsat",
        ),
        Scenario(
            "EX_3_1_DEC",
            "limit point a = 1/2 approached from above by r_n = 1/2 + 1/(n+2)",
            "rho => #1/2\nfamily n: #(1/2+1/(n+2)) -> rho\n",
            full, ConstantFamily.harmonic([_DEC], [HALF]), ("rho",),
            [
                Rule("rho", "gt", HALF, why="rho => a is 0 iff rho > a"),
                Rule("rho", "le", _DEC, why="r_n -> rho is 0 iff rho <= r_n"),
            ],
            "unsat",
        ),
        Scenario(
            "EX_3_2",
            "limit point 1/2 outside A, reached only as the value v of forall x R(x)",
            "family n: exists x. (#(1/2-1/(n+3)) -> R(x)) & (R(x) -> #(1/2-1/(n+2)))\n"
            "family n: #(1/2+1/(n+2)) => forall x. R(x)\n"
            "(forall x. R(x)) => rho\n"
            "family n: rho -> #(1/2-1/(n+2))\n",
            full, ConstantFamily.harmonic([_INC, _DEC]), ("v", "rho"),
            [
                Rule("v", "ge", _INC, why="some element has r_n <= R(x) <= r_(n+1), so v = max R >= r_n"),
                Rule("v", "lt", _DEC, or_zero=True, why="s_n => v is 0 iff v < s_n or v = 0"),
                Rule("rho", "lt", "v", or_zero=True, why="v => rho is 0 iff rho < v or rho = 0"),
                Rule("rho", "ge", _INC, why="rho -> r_n is 0 iff rho >= r_n"),
            ],
            "unsat",
            witness=_ex_3_2_witness, value_of=_ex_3_2_values,
        ),
        Scenario(
            "EX_ENTAIL_FAIL",
            "{1/n -> rho} entails rho although no finite part does",
            "family n: #(1/n) -> rho\n",
            full, ConstantFamily.downward(), ("rho",),
            [Rule("rho", "le", _HARM, why="1/n -> rho is 0 iff rho <= 1/n")],
            "forced", goal="rho",
            goal_fails=[Rule("rho", "gt", ZERO, why="rho fails iff rho > 0")],
        ),
        Scenario(
            "EX_DELTA",
            "with delta: {1/n -> rho} ∪ {~delta(rho)} over A = {1/n}",
            "family n: #(1/n) -> rho\n~delta(rho)\n",
            full, ConstantFamily.downward(), ("rho",),
            [
                Rule("rho", "le", _HARM, why="1/n -> rho is 0 iff rho <= 1/n"),
                Rule("rho", "gt", ZERO, why="~delta(rho) is 0 iff delta(rho) = 1 iff rho > 0"),
            ],
            "unsat",
        ),
        Scenario(
            "EX_APPROX",
            "approximate entailment: every 1/m -> rho follows from a finite part of {1/n -> rho}",
            "family n: #(1/n) -> rho\n",
            full, ConstantFamily.downward(), ("rho",),
            [Rule("rho", "le", _HARM, why="1/n -> rho is 0 iff rho <= 1/n")],
            "forced", goal="rho",
            goal_fails=[Rule("rho", "gt", ZERO, why="rho fails iff rho > 0")],
            approx=True,
        ),
    ]


def get_scenario(name: str) -> Scenario:
    for s in scenario_catalog():
        if s.name == name:
            return s
    raise KeyError(f"unknown scenario {name!r}; known: {[s.name for s in scenario_catalog()]}")


# ---------------------------------------------------------------------------
# reports

@dataclass
class SweepReport:
    name: str
    rows: list[tuple[int, dict[str, Fraction]]]
    lines: list[str]
    ok: bool

    def __str__(self) -> str:
        return "\n".join(self.lines)


def _propagate(s: Scenario, rules: list[Rule], lines: list[str] | None = None) -> dict[str, IntervalSet]:
    state = {v: IntervalSet.unit() for v in s.tracked}
    for rule in rules:
        cs, note = apply_rule(rule, state)
        state[rule.var] = (state[rule.var] & cs).restrict(s.V)
        if lines is not None:
            extra = f"   [{note}]" if note else ""
            lines.append(f"  {rule.text():<34} ⇒ {rule.var} ∈ {state[rule.var]}{extra}")
    return state


def finite_sat_sweep(s: Scenario, k: int) -> SweepReport:
    if k < 1:
        raise ValueError("k must be at least 1")
    lines = [f"sweep {s.name}: {s.title}"]
    rows = []
    goal = s.goal_formula()
    ms = range(1, k + 1) if s.families else [1]
    for m in ms:
        T = s.prefix(m)
        if s.witness is not None:
            M = s.witness(m)
        else:
            verdict = decide.sat(T, s.V, s.A)
            if verdict.kind != "SAT":
                raise ScenarioError(f"{s.name}: prefix {m} unexpectedly unsatisfiable")
            M = _structure_from(verdict.witness, s.V)
        chk = models(M, T)
        if not chk:
            raise ScenarioError(f"{s.name}: witness for prefix {m} fails {sx.print_formula(chk.failing)}")
        values = (s.value_of or _prop_values)(M)
        # the constraint trace restricted to the first m instances must admit the witness
        state = _propagate(s, [r for rule in s.rules for r in instantiate_rule(rule, m)])
        for var in s.tracked:
            if values[var] not in state[var]:
                raise ScenarioError(f"{s.name}: witness {var}={fmt(values[var])} outside prefix constraints")
        desc = ", ".join(f"{v}={fmt(values[v])}" for v in s.tracked)
        extra = ""
        if goal is not None and s.families:
            ent = decide.entails(T, goal, s.V, s.A)
            extra += f"; prefix ⊨ {s.goal}: {ent.kind}"
            if ent.kind != "NOT_ENTAILED":
                raise ScenarioError(f"{s.name}: prefix {m} already entails {s.goal}")
        if s.approx:
            r = ONE / m
            ent = decide.entails(T, sx.Imp(sx.truth(r), goal), s.V, s.A)
            extra += f"; prefix ⊨ {fmt(r)} -> {s.goal}: {ent.kind}"
            if ent.kind != "ENTAILED":
                raise ScenarioError(f"{s.name}: prefix {m} fails to entail {fmt(r)} -> {s.goal}")
        lines.append(f"  m={m:<3} model: {desc}{extra}")
        rows.append((m, values))
    return SweepReport(s.name, rows, lines, True)


def _structure_from(w: dict[str, Fraction], V: GoedelSet) -> Structure:
    from .semantics import propositional
    return propositional(w, V)


@dataclass
class UnsatReport:
    name: str
    state: dict[str, IntervalSet]
    empty: bool
    forced: dict[str, Fraction]
    goal_empty: bool | None
    lines: list[str]
    verdict: str

    def __str__(self) -> str:
        return "\n".join(self.lines)


def full_unsat(s: Scenario) -> UnsatReport:
    lines = [f"constraints {s.name} over V = {s.V}, A = {s.A.describe()}"]
    for r in s.rules:
        if r.why:
            lines.append(f"  # {r.text()}: {r.why}")
    state = _propagate(s, s.rules, lines)
    empty = any(state[v].is_empty_in(s.V) for v in s.tracked)
    forced = {}
    for v in s.tracked:
        fv = state[v].forced_value(s.V)
        if fv is not None:
            forced[v] = fv
    goal_empty = None
    if s.goal_fails:
        lines.append(f"  goal {s.goal} fails:")
        st2 = _propagate(s, s.rules + s.goal_fails, lines)
        goal_empty = any(st2[v].is_empty_in(s.V) for v in s.tracked)
    if s.expect == "unsat":
        verdict = "FINITELY-SAT ∧ UNSAT" if empty else "UNEXPECTED: feasible set nonempty"
    else:
        f = ", ".join(f"{v} = {fmt(x)}" for v, x in forced.items())
        if empty or not goal_empty:
            verdict = "UNEXPECTED: goal not forced"
        elif s.approx:
            verdict = f"FORCED {f}; T ⊨ {s.goal}; T ⊨ r -> {s.goal} witnessed by finite parts"
        elif s.families:
            verdict = f"FORCED {f}; T ⊨ {s.goal} ∧ T ⊭_f {s.goal}"
        else:
            verdict = f"FORCED {f}; T ⊨ {s.goal}"
    lines.append(f"VERDICT: {verdict}")
    return UnsatReport(s.name, state, empty, forced, goal_empty, lines, verdict)


def run(name: str, k: int = 20) -> tuple[bool, str]:
    """Sweep plus constraint trace; returns (expected verdict reached, report)."""
    s = get_scenario(name)
    sweep = finite_sat_sweep(s, k)
    un = full_unsat(s)
    ok = not un.verdict.startswith("UNEXPECTED")
    return ok, f"{sweep}\n{un}\n"

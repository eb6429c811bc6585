"""Pair-stage completion, witness axioms and canonical models at desk scale.

Every "does not prove" condition of the textbook constructions is rendered
semantically and decided by :mod:`decide`.  Reports name that relation.
With a guard χ = r̄ for some r > 0, "T does not entail χ" is the same as "T
has a model", so the guard condition is a satisfiability check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from . import syntax as sx
from .algebra import Embedding, Lindenbaum, embed, lindenbaum
from .decide import DEFAULT_ATOM_BOUND, ModelSpace, _vocabulary
from .semantics import Structure, eval_formula, models, propositional
from .values import ONE, ZERO, ConstantFamily, GoedelSet, fmt

RELATION = "semantic (⊨, decided by order-type enumeration)"


class HenkinError(ValueError):
    pass


@dataclass
class Stage:
    n: int
    theta: sx.Formula
    psi: sx.Formula
    added: sx.Formula | None
    decision: str


@dataclass
class CompletionTrace:
    initial: list[sx.Formula]
    universe: list[sx.Formula]
    guard: sx.Formula
    stages: list[Stage]
    final: list[sx.Formula]
    relation: str = RELATION

    def describe(self) -> str:
        lines = [f"completion over {len(self.universe)} sentences; relation: {self.relation}",
                 f"guard χ = {sx.print_formula(self.guard)}"]
        for st in self.stages:
            pair = f"({sx.print_formula(st.theta)}, {sx.print_formula(st.psi)})"
            lines.append(f"  stage {st.n}: {pair}: {st.decision}")
        lines.append(f"final theory: {len(self.final)} sentences")
        return "\n".join(lines)


def guard_for(A: ConstantFamily | None, mentioned: Iterable[Fraction] = ()) -> sx.Formula:
    """χ₀: the least constant of A, else the least mentioned one, else ⊥."""
    if A is None:
        return sx.BOT
    m = A.minimum()
    if m is None:
        inside = sorted(r for r in mentioned if 0 < r < 1 and A.member(r))
        m = inside[0] if inside else None
    return sx.BOT if m is None else sx.truth(m)


def complete_theory(T: Sequence[sx.Formula], S: Sequence[sx.Formula], V: GoedelSet | None = None,
                    A: ConstantFamily | None = None, bound: int = DEFAULT_ATOM_BOUND,
                    space: ModelSpace | None = None) -> CompletionTrace:
    """Extend T so that every pair of S is decided.

    Ordered pairs (θ, ψ), θ ≠ ψ, are visited lexicographically by printed
    form.  If both θ→ψ and ψ→θ already follow the stage is recorded as
    already complete; otherwise θ→ψ is added when the result still does not
    entail the guard, else ψ→θ.
    """
    V = V or GoedelSet.full01()
    T = list(T)
    S = list(dict.fromkeys(S))
    guard = guard_for(A, {c for f in T + S for c in sx.constants_of(f)})
    if space is None:
        atoms, consts = _vocabulary(T + S + [guard], A)
        space = ModelSpace(atoms, consts, V, bound)
    cur = space.models_mask(T)
    if not cur.any():
        raise HenkinError("T is unsatisfiable")
    gz = space.zero_mask(guard)

    def guarded(mask) -> bool:
        return bool(mask.any()) and not bool(gz[mask].all())

    if not guarded(cur):
        raise HenkinError("guard already entailed at stage 0")
    theory = list(T)
    stages = []
    pairs = sorted(((a, b) for a in S for b in S if a != b),
                   key=lambda p: (sx.print_formula(p[0]), sx.print_formula(p[1])))
    for n, (theta, psi) in enumerate(pairs, 1):
        fwd, bwd = sx.Imp(theta, psi), sx.Imp(psi, theta)
        zf, zb = space.zero_mask(fwd), space.zero_mask(bwd)
        if zf[cur].all() and zb[cur].all():
            stages.append(Stage(n, theta, psi, None, "already complete"))
            continue
        if guarded(cur & zf):
            chosen, cur, label = fwd, cur & zf, "θ→ψ"
        else:
            chosen, cur, label = bwd, cur & zb, "ψ→θ"
        if not guarded(cur):
            raise HenkinError("guard became entailed; prelinearity should prevent this")
        if chosen in theory:
            stages.append(Stage(n, theta, psi, None, f"{label} already present"))
            continue
        theory.append(chosen)
        stages.append(Stage(n, theta, psi, chosen, f"add {label}: {sx.print_formula(chosen)}"))
    return CompletionTrace(T, S, guard, stages, theory)


def guard_preserved(trace: CompletionTrace, V: GoedelSet | None = None,
                    A: ConstantFamily | None = None, bound: int = DEFAULT_ATOM_BOUND) -> bool:
    """Recheck, independently of the trace, that no stage entails the guard."""
    V = V or GoedelSet.full01()
    atoms, consts = _vocabulary(trace.final + trace.universe + [trace.guard], A)
    space = ModelSpace(atoms, consts, V, bound)
    theory = list(trace.initial)
    if space.entails(theory, trace.guard).kind == "ENTAILED":
        return False
    for st in trace.stages:
        if st.added is not None:
            theory.append(st.added)
            if space.entails(theory, trace.guard).kind == "ENTAILED":
                return False
    return True


def closure_universe(T: Iterable[sx.Formula], S: Iterable[sx.Formula] = (),
                     A: ConstantFamily | None = None) -> list[sx.Formula]:
    """Subformula closure of T ∪ S plus 0̄, ⊥ and (for finite A) every constant of A.

    Completing over this set fixes how each atom sits relative to every
    constant, which the canonical model needs.
    """
    out: dict[sx.Formula, None] = {}
    for f in list(T) + list(S):
        for g in sx.subformulas(f):
            out[g] = None
    out[sx.TruthConst(ZERO)] = None
    out[sx.BOT] = None
    if A is not None and A.is_finite:
        for r in A.points:
            out[sx.truth(r)] = None
    return list(out)


@dataclass
class CanonicalModel:
    structure: Structure
    lindenbaum: Lindenbaum
    embedding: Embedding
    certificate: bool
    failing: sx.Formula | None = None

    def describe(self) -> str:
        lines = [self.lindenbaum.describe(), self.embedding.describe()]
        vals = ", ".join(f"{p}={fmt(t[()])}" for p, t in sorted(self.structure.preds.items()))
        lines.append(f"canonical model: {vals or '(no atoms)'}")
        lines.append(f"certificate M ⊨ T′: {'yes' if self.certificate else 'NO'}")
        return "\n".join(lines)


def canonical_model(Tc: Sequence[sx.Formula], S: Sequence[sx.Formula], V: GoedelSet | None = None,
                    A: ConstantFamily | None = None, bound: int = DEFAULT_ATOM_BOUND) -> CanonicalModel:
    """Lindenbaum quotient of S modulo Tc, embedded into [0,1]; atoms get g([ρ])."""
    V = V or GoedelSet.full01()
    A = A if A is not None else ConstantFamily.empty()
    S = list(S)
    L = lindenbaum(Tc, S, V, A, bound)
    g = embed(L.algebra, A, V)
    atoms = sorted({f.pred for f in S if isinstance(f, sx.Atom) and not f.args})
    missing = set().union(*(sx.atoms_of(f) for f in Tc)) - set(atoms) if Tc else set()
    if missing:
        raise HenkinError(f"atoms {sorted(missing)} are not in the universe S")
    assignment = {p: g(L.class_of[sx.atom(p)]) for p in atoms}
    M = propositional(assignment, V)
    chk = models(M, Tc)
    return CanonicalModel(M, L, g, bool(chk), chk.failing)


def henkin_pipeline(T: Sequence[sx.Formula], V: GoedelSet | None = None, A: ConstantFamily | None = None,
                    S: Sequence[sx.Formula] = ()) -> tuple[CompletionTrace, CanonicalModel]:
    universe = closure_universe(T, S, A)
    trace = complete_theory(T, universe, V, A)
    cm = canonical_model(trace.final, universe, V, A)
    return trace, cm


# ---------------------------------------------------------------------------
# witness axioms

@dataclass(frozen=True)
class WitnessAxiom:
    formula: sx.Formula
    phi: sx.Formula
    var: str
    r: Fraction
    s: Fraction
    constant: str


def fresh_constant(used: Iterable[str], prefix: str = "w") -> str:
    used = set(used)
    i = 0
    while f"{prefix}{i}" in used:
        i += 1
    return f"{prefix}{i}"


def build_theta(phi: sx.Formula, var: str, r, s, fresh: str, A: ConstantFamily | None = None,
                ambient: Iterable[sx.Formula] = ()) -> WitnessAxiom:
    """(r̄ → ∀x φ) ∨ (φ(c) → s̄) with c fresh."""
    r, s = Fraction(r), Fraction(s)
    if not r > s:
        raise HenkinError(f"need r > s, got r = {fmt(r)}, s = {fmt(s)}")
    if A is not None:
        for v in (r, s):
            if v != ONE and not A.member(v):
                raise HenkinError(f"{fmt(v)} is not in A ∪ {{1}}")
    if var not in sx.free_vars(phi):
        raise HenkinError(f"{var} is not free in {sx.print_formula(phi)}")
    if sx.free_vars(phi) - {var}:
        raise HenkinError("φ may have only the witnessed variable free")
    used = set(sx.symbol_consts(phi))
    for f in ambient:
        used |= sx.symbol_consts(f)
    if fresh in used:
        raise HenkinError(f"constant {fresh} is not fresh")
    c = sx.Const(fresh)
    theta = sx.or_(sx.Imp(sx.truth(r), sx.Forall(var, phi)), sx.Imp(sx.substitute(phi, var, c), sx.truth(s)))
    return WitnessAxiom(theta, phi, var, r, s, fresh)


def extend_with_witness(M: Structure, w: WitnessAxiom) -> Structure:
    """Interpret the fresh constant where φ is largest, which makes θ hold."""
    best, best_v = None, None
    for e in M.universe:
        v = eval_formula(M, w.phi, {w.var: e})
        if best_v is None or v > best_v:
            best, best_v = e, v
    consts = dict(M.consts)
    consts[w.constant] = best
    return Structure(M.universe, M.preds, M.funcs, consts, M.V)

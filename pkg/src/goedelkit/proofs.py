"""Hilbert-style proof checking for Gödel logic with truth constants and Δ.

Axiom schemata are stored as patterns over formula metavariables
(:class:`Meta`), constant metavariables (:class:`MetaConst`, matching a truth
constant or ``bot`` as the constant 1) and binder variables (``?x``).  The two
schemata that mention a substitution instance ``φ(t)`` are matched by a small
dedicated search instead.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from . import syntax as sx
from .semantics import eval_formula, tabulate
from .values import ONE, ZERO, ConstantFamily, GoedelSet, fmt


@dataclass(frozen=True)
class Meta:
    name: str


@dataclass(frozen=True)
class MetaConst:
    name: str


# pattern shorthands
P, Q, R = Meta("φ"), Meta("ψ"), Meta("χ")
RC, SC, TC = MetaConst("r"), MetaConst("s"), MetaConst("t")
X = "?x"
I, A_, N = sx.Imp, sx.And, sx.neg


def _or(a, b):
    return sx.or_(a, b)


def _iff(a, b):
    return sx.iff(a, b)


@dataclass
class Schema:
    name: str
    pattern: object | None
    side: Callable[[dict], bool] | None = None
    side_text: str = ""
    delta: bool = False


def _not_free(fvar: str, var: str) -> Callable[[dict], bool]:
    return lambda s: s[var] not in sx.free_vars(s[fvar])


SCHEMATA: list[Schema] = [
    Schema("G1", I(I(P, Q), I(I(Q, R), I(P, R)))),
    Schema("G2", I(A_(P, Q), P)),
    Schema("G3", I(A_(P, Q), A_(Q, P))),
    Schema("G4", I(P, A_(P, P))),
    Schema("G5", _iff(I(P, I(Q, R)), I(A_(P, Q), R))),
    Schema("G6", I(I(I(P, Q), R), I(I(I(Q, P), R), R))),
    Schema("G7", I(sx.BOT, P)),
    Schema("G∀1", None, side_text="t substitutable for x in φ"),
    Schema("G∀2", I(sx.Forall(X, I(Q, P)), I(Q, sx.Forall(X, P))), _not_free("ψ", X), "x not free in ψ"),
    Schema("G∀3", I(sx.Forall(X, _or(Q, P)), _or(Q, sx.Forall(X, P))), _not_free("ψ", X), "x not free in ψ"),
    Schema("G∃1", None, side_text="t substitutable for x in φ"),
    Schema("G∃2", I(sx.Forall(X, I(P, Q)), I(sx.Exists(X, P), Q)), _not_free("ψ", X), "x not free in ψ"),
    Schema("RG1", _iff(A_(RC, SC), TC), lambda s: s["t"] == max(s["r"], s["s"]), "t = max{r,s}"),
    Schema("RG2(a)", I(RC, SC), lambda s: s["r"] >= s["s"], "r ≥ s"),
    Schema("RG2(b)", _iff(I(RC, SC), SC), lambda s: s["r"] < s["s"], "r < s"),
    Schema("RG3", N(N(RC)), lambda s: s["r"] < 1, "r < 1"),
    Schema("Δ1", _or(sx.Delta(P), N(sx.Delta(P))), delta=True),
    Schema("Δ2", I(sx.Delta(_or(P, Q)), _or(sx.Delta(P), sx.Delta(Q))), delta=True),
    Schema("Δ3", I(sx.Delta(P), P), delta=True),
    Schema("Δ4", I(sx.Delta(P), sx.Delta(sx.Delta(P))), delta=True),
    Schema("Δ5", I(sx.Delta(I(P, Q)), I(sx.Delta(P), sx.Delta(Q))), delta=True),
]
SCHEMA_BY_NAME = {s.name: s for s in SCHEMATA}


def canonical_name(name: str) -> str:
    """Accept spellings like ``RG2b``, ``RG2(b)``, ``GA1``, ``Gforall1``, ``D3``, ``Delta3``."""
    t = name.strip()
    t = re.sub(r"(?i)forall|∀", "∀", t)
    t = re.sub(r"(?i)exists|∃", "∃", t)
    t = re.sub(r"(?i)^(delta|d)(?=\d)", "Δ", t)
    t = re.sub(r"^G[Aa](?=\d)", "G∀", t)
    t = re.sub(r"^G[Ee](?=\d)", "G∃", t)
    m = re.fullmatch(r"(?i)rg2\(?([ab])\)?", t)
    if m:
        t = f"RG2({m.group(1).lower()})"
    t = re.sub(r"^[Gg](?=[∀∃\d])", "G", t)
    for known in SCHEMA_BY_NAME:
        if known.lower() == t.lower():
            return known
    raise KeyError(f"unknown axiom schema {name!r}")


# ---------------------------------------------------------------------------
# matching

def _const_value(f) -> Fraction | None:
    if isinstance(f, sx.Bot):
        return ONE
    if isinstance(f, sx.TruthConst):
        return f.value
    return None


def _match(pat, f, s: dict) -> dict | None:
    if isinstance(pat, Meta):
        if pat.name in s:
            return s if s[pat.name] == f else None
        s = dict(s)
        s[pat.name] = f
        return s
    if isinstance(pat, MetaConst):
        v = _const_value(f)
        if v is None:
            return None
        if pat.name in s:
            return s if s[pat.name] == v else None
        s = dict(s)
        s[pat.name] = v
        return s
    if type(pat) is not type(f):
        return None
    if isinstance(pat, (sx.Forall, sx.Exists)):
        if pat.var.startswith("?"):
            if pat.var in s and s[pat.var] != f.var:
                return None
            s = dict(s)
            s[pat.var] = f.var
        elif pat.var != f.var:
            return None
        return _match(pat.body, f.body, s)
    if isinstance(pat, (sx.And, sx.Imp)):
        s = _match(pat.left, f.left, s)
        return None if s is None else _match(pat.right, f.right, s)
    if isinstance(pat, sx.Delta):
        return _match(pat.body, f.body, s)
    return s if pat == f else None


def _find_instance_term(body: sx.Formula, var: str, inst: sx.Formula) -> sx.Term | None | bool:
    """Find t with body[t/var] == inst.  Returns False if impossible, None if var is not free."""
    found: list = []

    def walk_terms(a, b, bound) -> bool:
        if isinstance(a, sx.Var) and a.name == var and var not in bound:
            found.append(b)
            return True
        if type(a) is not type(b):
            return False
        if isinstance(a, sx.Func):
            return a.name == b.name and len(a.args) == len(b.args) and all(
                walk_terms(x, y, bound) for x, y in zip(a.args, b.args))
        return a == b

    def walk(a, b, bound) -> bool:
        if type(a) is not type(b):
            return False
        if isinstance(a, sx.Atom):
            return a.pred == b.pred and len(a.args) == len(b.args) and all(
                walk_terms(x, y, bound) for x, y in zip(a.args, b.args))
        if isinstance(a, (sx.Forall, sx.Exists)):
            return a.var == b.var and walk(a.body, b.body, bound | {a.var})
        if isinstance(a, (sx.And, sx.Imp)):
            return walk(a.left, b.left, bound) and walk(a.right, b.right, bound)
        if isinstance(a, sx.Delta):
            return walk(a.body, b.body, bound)
        return a == b

    if not walk(body, inst, frozenset()):
        return False
    if not found:
        return None
    t = found[0]
    if any(u != t for u in found):
        return False
    return t


def _quant_instance(f: sx.Formula, universal: bool) -> dict | None:
    if not isinstance(f, sx.Imp):
        return None
    q, inst = (f.left, f.right) if universal else (f.right, f.left)
    kind = sx.Forall if universal else sx.Exists
    if not isinstance(q, kind):
        return None
    t = _find_instance_term(q.body, q.var, inst)
    if t is False:
        return None
    if t is None:
        t = sx.Var(q.var)
    if not sx.substitutable(q.body, q.var, t):
        return None
    if sx.substitute(q.body, q.var, t) != inst:
        return None
    return {"φ": q.body, X: q.var, "t": t}


def match_schema(schema: Schema, f: sx.Formula) -> dict | None:
    if schema.name == "G∀1":
        return _quant_instance(f, True)
    if schema.name == "G∃1":
        return _quant_instance(f, False)
    s = _match(schema.pattern, f, {})
    if s is None:
        return None
    if schema.side is not None and not schema.side(s):
        return None
    return s


def match_axiom(f: sx.Formula, A: ConstantFamily | None = None, delta_enabled: bool = True) -> list[tuple[str, dict]]:
    """All schemata that ``f`` instantiates, with their substitutions."""
    out = []
    for sch in SCHEMATA:
        if sch.delta and not delta_enabled:
            continue
        s = match_schema(sch, f)
        if s is None:
            continue
        if A is not None and not all(_const_ok(v, A) for k, v in s.items() if k in ("r", "s", "t") and isinstance(v, Fraction)):
            continue
        out.append((sch.name, s))
    return out


def _const_ok(v: Fraction, A: ConstantFamily) -> bool:
    return v in (ZERO, ONE) or A.member(v)


def show_subst(s: dict) -> str:
    parts = []
    for k, v in s.items():
        if isinstance(v, Fraction):
            parts.append(f"{k}↦{fmt(v)}")
        elif isinstance(v, str):
            parts.append(f"x↦{v}")
        elif isinstance(v, (sx.Var, sx.Const, sx.Func)):
            parts.append(f"{k}↦{sx.print_term(v)}")
        else:
            parts.append(f"{k}↦{sx.print_formula(v)}")
    return "{" + ", ".join(parts) + "}"


# ---------------------------------------------------------------------------
# instantiation (used to generate test instances)

def instantiate(schema: Schema | str, s: dict) -> sx.Formula:
    """Fill a schema with formulas / constants / a binder variable name."""
    sch = SCHEMA_BY_NAME[schema] if isinstance(schema, str) else schema
    if sch.name in ("G∀1", "G∃1"):
        body, var, t = s["φ"], s.get(X, "x"), s.get("t", sx.Var(s.get(X, "x")))
        inst = sx.substitute(body, var, t)
        return sx.Imp(sx.Forall(var, body), inst) if sch.name == "G∀1" else sx.Imp(inst, sx.Exists(var, body))

    def fill(p):
        if isinstance(p, Meta):
            return s[p.name]
        if isinstance(p, MetaConst):
            return sx.truth(s[p.name])
        if isinstance(p, (sx.Forall, sx.Exists)):
            return type(p)(s.get(p.var, "x") if p.var.startswith("?") else p.var, fill(p.body))
        if isinstance(p, (sx.And, sx.Imp)):
            return type(p)(fill(p.left), fill(p.right))
        if isinstance(p, sx.Delta):
            return sx.Delta(fill(p.body))
        return p

    return fill(sch.pattern)


# ---------------------------------------------------------------------------
# proofs

@dataclass
class ProofLine:
    label: int
    formula: sx.Formula
    rule: str                    # premise | axiom | mp | gen | delta
    args: tuple = ()
    text: str = ""


@dataclass
class Proof:
    lines: list[ProofLine] = field(default_factory=list)

    @property
    def conclusion(self) -> sx.Formula | None:
        return self.lines[-1].formula if self.lines else None


@dataclass
class CheckResult:
    ok: bool
    conclusion: sx.Formula | None = None
    line: int | None = None
    reason: str = ""
    notes: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return f"OK {sx.print_formula(self.conclusion)}"
        return f"Error line {self.line}: {self.reason}"


_LINE_RE = re.compile(r"^\s*(\d+)\s*\.\s*(.*?)\s*;\s*(.*?)\s*$")


def parse_proof(text: str, sig: sx.Signature | None = None) -> Proof:
    """Lines ``n. <formula> ; <justification>``; ``%`` starts a comment."""
    pf = Proof()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise sx.SyntaxError_("expected 'n. formula ; justification'", None, lineno)
        label, ftxt, jtxt = int(m.group(1)), m.group(2), m.group(3)
        try:
            f = sx.parse_formula(ftxt, sig)
        except sx.SyntaxError_ as exc:
            raise sx.SyntaxError_(str(exc).rsplit(" (", 1)[0], exc.pos, lineno) from None
        parts = jtxt.split()
        if not parts:
            raise sx.SyntaxError_("missing justification", None, lineno)
        head = parts[0].lower()
        try:
            if head == "premise" and len(parts) == 1:
                pf.lines.append(ProofLine(label, f, "premise", (), raw))
            elif head == "axiom" and len(parts) == 2:
                pf.lines.append(ProofLine(label, f, "axiom", (parts[1],), raw))
            elif head == "mp" and len(parts) == 3:
                pf.lines.append(ProofLine(label, f, "mp", (int(parts[1]), int(parts[2])), raw))
            elif head == "gen" and len(parts) == 3:
                pf.lines.append(ProofLine(label, f, "gen", (int(parts[1]), parts[2]), raw))
            elif head in ("delta", "deltar", "Δ") and len(parts) == 2:
                pf.lines.append(ProofLine(label, f, "delta", (int(parts[1]),), raw))
            else:
                raise ValueError
        except ValueError:
            raise sx.SyntaxError_(f"bad justification {jtxt!r}", None, lineno) from None
    return pf


def format_proof(pf: Proof) -> str:
    out = []
    for ln in pf.lines:
        just = ln.rule if not ln.args else f"{ln.rule} " + " ".join(map(str, ln.args))
        out.append(f"{ln.label}. {sx.print_formula(ln.formula)} ; {just}")
    return "\n".join(out) + "\n"


def check_proof(T: Iterable[sx.Formula], pf: Proof, A: ConstantFamily | None = None,
                delta_enabled: bool = True) -> CheckResult:
    """Check every line; rule applications compare formulas by exact syntactic equality."""
    premises = set(T)
    done: dict[int, sx.Formula] = {}
    notes = []
    if not pf.lines:
        return CheckResult(False, None, 0, "empty proof")
    for ln in pf.lines:
        def err(msg):
            return CheckResult(False, None, ln.label, msg, notes)

        if ln.label in done:
            return err(f"duplicate line number {ln.label}")

        def fetch(i):
            if not isinstance(i, int) or i not in done or i >= ln.label:
                return None
            return done[i]

        f = ln.formula
        if ln.rule == "premise":
            if f not in premises:
                return err("premise not in theory")
        elif ln.rule == "axiom":
            try:
                name = canonical_name(ln.args[0])
            except KeyError as exc:
                return err(str(exc.args[0]))
            sch = SCHEMA_BY_NAME[name]
            if sch.delta and not delta_enabled:
                return err(f"{name} needs delta")
            s = match_schema(sch, f)
            if s is None:
                return err(f"not an instance of {name}")
            if A is not None and not all(_const_ok(v, A) for k, v in s.items() if isinstance(v, Fraction)):
                return err(f"constant outside A in {name} instance")
            notes.append(f"{ln.label}: {name} {show_subst(s)}")
        elif ln.rule == "mp":
            i, j = ln.args
            a, b = fetch(i), fetch(j)
            if a is None or b is None:
                return err("bad index")
            if b != sx.Imp(a, f):
                return err(f"mp mismatch: line {j} is not (line {i}) -> (line {ln.label})")
        elif ln.rule == "gen":
            i, var = ln.args
            a = fetch(i)
            if a is None:
                return err("bad index")
            if f != sx.Forall(var, a):
                return err(f"gen mismatch: expected forall {var}. (line {i})")
        elif ln.rule == "delta":
            if not delta_enabled:
                return err("delta rule used but delta not enabled")
            a = fetch(ln.args[0])
            if a is None:
                return err("bad index")
            if f != sx.Delta(a):
                return err(f"delta rule mismatch: expected delta(line {ln.args[0]})")
        else:
            return err(f"unknown rule {ln.rule}")
        done[ln.label] = f
    return CheckResult(True, pf.lines[-1].formula, None, "", notes)


# ---------------------------------------------------------------------------
# semantic spot check

@dataclass
class SpotReport:
    samples: int
    counterexample: object | None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def __str__(self) -> str:
        if self.ok:
            return f"sound on {self.samples} samples"
        return f"COUNTERMODEL FOUND (checker bug): {self.counterexample}"


def soundness_spotcheck(phi: sx.Formula, samples: int = 200, seed: int = 0,
                        V: GoedelSet | None = None, consts: Sequence = ()) -> SpotReport:
    """Evaluate ``phi`` in random models; any nonzero value is a checker bug."""
    from .generators import random_structure, value_pool
    from . import decide

    rng = random.Random(seed)
    V = V or GoedelSet.full01()
    pool = value_pool(V, sorted(sx.constants_of(phi) | {Fraction(c) for c in consts}), extra=4)
    if sx.is_propositional(phi):
        atoms = sorted(sx.atoms_of(phi))
        for _ in range(samples):
            w = {a: rng.choice(pool) for a in atoms}
            from .semantics import propositional
            if eval_formula(propositional(w, V), phi) != 0:
                return SpotReport(samples, w)
        verdict = decide.entails([], phi, V)
        if verdict.kind != "ENTAILED":
            return SpotReport(samples, verdict.witness)
        return SpotReport(samples, None)
    preds = sx.predicates_of(phi)
    variables = sorted(sx.free_vars(phi) | _bound_vars(phi))
    consts_ = sorted(sx.symbol_consts(phi))
    for _ in range(samples):
        M = random_structure(rng, preds, rng.randint(1, 3), pool, consts=consts_, V=V)
        table = tabulate(M, phi, variables)
        bad = [k for k, v in table.items() if v != 0]
        if bad:
            return SpotReport(samples, (M, bad[0]))
    return SpotReport(samples, None)


def _bound_vars(f: sx.Formula) -> set[str]:
    return {g.var for g in sx.subformulas(f) if isinstance(g, (sx.Forall, sx.Exists))}

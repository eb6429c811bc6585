"""Terms, formulas, signatures and theories, with a parser and printer.

Sugar (``~``, ``|``, ``=>``, ``<->``) is expanded while parsing, so the rest
of the package only sees the primitive connectives: ``bot``, truth constants,
atoms, ``&``, ``->``, ``delta`` and the two quantifiers.
"""

from __future__ import annotations

import re
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .values import ONE, ZERO, ClosedForm, ConstantFamily, parse_closed_form


class SyntaxError_(ValueError):
    """Lexing, parsing or well-formedness failure; carries a character position."""

    def __init__(self, msg: str, pos: int | None = None, line: int | None = None):
        self.pos = pos
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"col {pos + 1}")
        super().__init__(f"{msg} ({', '.join(where)})" if where else msg)


ParseError = SyntaxError_


# ---------------------------------------------------------------------------
# terms

@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Func:
    name: str
    args: tuple

    def __str__(self):
        return f"{self.name}({', '.join(map(str, self.args))})"


Term = Union[Var, Const, Func]


# ---------------------------------------------------------------------------
# formulas

@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class TruthConst:
    value: Fraction


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple = ()


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Delta:
    body: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ParamConst:
    """Placeholder ``#(c+s/(n+k))`` inside a parametric family template."""

    form: ClosedForm


Formula = Union[Bot, TruthConst, Atom, And, Imp, Delta, Forall, Exists, ParamConst]


def _cached_hash(self):
    # trees are hashed constantly by evaluators and caches; fields are immutable
    h = self.__dict__.get("_hash")
    if h is None:
        h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))
        object.__setattr__(self, "_hash", h)
    return h


for _cls in (Var, Const, Func, Bot, TruthConst, Atom, And, Imp, Delta, Forall, Exists, ParamConst):
    _cls.__hash__ = _cached_hash

BOT = Bot()


def truth(r) -> Formula:
    """The truth constant for ``r``; the constant 1 is ``bot`` itself."""
    r = Fraction(r)
    if r == ONE:
        return BOT
    return TruthConst(r)


def atom(name: str, *args: Term) -> Atom:
    return Atom(name, tuple(args))


def neg(f: Formula) -> Formula:
    return Imp(f, BOT)


def or_(a: Formula, b: Formula) -> Formula:
    return And(Imp(Imp(a, b), b), Imp(Imp(b, a), a))


def strongimp(a: Formula, b: Formula) -> Formula:
    return Imp(Imp(b, a), b)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


# ---------------------------------------------------------------------------
# signatures and theories

@dataclass
class Signature:
    preds: dict[str, int] = field(default_factory=dict)
    funcs: dict[str, int] = field(default_factory=dict)
    consts: set[str] = field(default_factory=set)
    delta_enabled: bool = True
    A: ConstantFamily | None = None
    strict: bool = False

    def __post_init__(self):
        names = list(self.preds) + list(self.funcs) + list(self.consts)
        if len(names) != len(set(names)):
            raise SyntaxError_("symbol names must be unique across predicates, functions and constants")

    def copy(self) -> "Signature":
        return Signature(dict(self.preds), dict(self.funcs), set(self.consts), self.delta_enabled, self.A, self.strict)

    def allows_constant(self, r: Fraction) -> bool:
        if r in (ZERO, ONE):
            return True
        if self.A is None:
            return 0 < r < 1
        return self.A.member(r)


@dataclass
class Family:
    """A sentence schema instantiated for n = 1, 2, ..."""

    template: Formula
    text: str = ""


@dataclass
class Theory:
    sentences: list = field(default_factory=list)
    families: list = field(default_factory=list)
    signature: Signature | None = None

    def instantiate(self, n: int) -> list[Formula]:
        return instantiate_family(self, n)


# ---------------------------------------------------------------------------
# structural helpers

def term_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Func):
        out: set[str] = set()
        for a in t.args:
            out |= term_vars(a)
        return out
    return set()


@lru_cache(maxsize=None)
def free_vars(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        out: set[str] = set()
        for a in f.args:
            out |= term_vars(a)
        return frozenset(out)
    if isinstance(f, (And, Imp)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, Delta):
        return free_vars(f.body)
    if isinstance(f, (Forall, Exists)):
        return free_vars(f.body) - {f.var}
    return frozenset()


def is_sentence(f: Formula) -> bool:
    return not free_vars(f)


def children(f: Formula) -> tuple:
    if isinstance(f, (And, Imp)):
        return (f.left, f.right)
    if isinstance(f, (Delta, Forall, Exists)):
        return (f.body,)
    return ()


def subformulas(f: Formula) -> list[Formula]:
    """Post-order list of distinct subformulas (children before parents)."""
    seen: dict[Formula, None] = {}

    def walk(g):
        for c in children(g):
            walk(c)
        if g not in seen:
            seen[g] = None

    walk(f)
    return list(seen)


def size(f: Formula) -> int:
    return 1 + sum(size(c) for c in children(f))


def depth(f: Formula) -> int:
    cs = children(f)
    return 0 if not cs else 1 + max(depth(c) for c in cs)


def atoms_of(f: Formula) -> set[str]:
    """Predicate names of nullary atoms (propositional variables)."""
    return {g.pred for g in subformulas(f) if isinstance(g, Atom) and not g.args}


def predicates_of(f: Formula) -> dict[str, int]:
    return {g.pred: len(g.args) for g in subformulas(f) if isinstance(g, Atom)}


def constants_of(f: Formula) -> set[Fraction]:
    out = set()
    for g in subformulas(f):
        if isinstance(g, TruthConst):
            out.add(g.value)
        elif isinstance(g, Bot):
            out.add(ONE)
    return out


def is_propositional(f: Formula) -> bool:
    for g in subformulas(f):
        if isinstance(g, (Forall, Exists, ParamConst)):
            return False
        if isinstance(g, Atom) and g.args:
            return False
    return True


def has_delta(f: Formula) -> bool:
    return any(isinstance(g, Delta) for g in subformulas(f))


def term_consts(t: Term) -> set[str]:
    if isinstance(t, Const):
        return {t.name}
    if isinstance(t, Func):
        out: set[str] = set()
        for a in t.args:
            out |= term_consts(a)
        return out
    return set()


def symbol_consts(f: Formula) -> set[str]:
    out: set[str] = set()
    for g in subformulas(f):
        if isinstance(g, Atom):
            for a in g.args:
                out |= term_consts(a)
    return out


def subst_term(t: Term, var: str, s: Term) -> Term:
    if isinstance(t, Var):
        return s if t.name == var else t
    if isinstance(t, Func):
        return Func(t.name, tuple(subst_term(a, var, s) for a in t.args))
    return t


def substitutable(f: Formula, var: str, t: Term) -> bool:
    """No free occurrence of ``var`` in ``f`` sits under a binder of a variable of ``t``."""
    tv = term_vars(t)

    def ok(g, bound: frozenset) -> bool:
        if isinstance(g, Atom):
            if any(var in term_vars(a) for a in g.args):
                return not (bound & tv)
            return True
        if isinstance(g, (Forall, Exists)):
            if g.var == var:
                return True
            return ok(g.body, bound | {g.var})
        return all(ok(c, bound) for c in children(g))

    return ok(f, frozenset())


def substitute(f: Formula, var: str, t: Term) -> Formula:
    """Replace free occurrences of ``var`` by ``t`` (no renaming; check substitutable first)."""
    if isinstance(f, Atom):
        return Atom(f.pred, tuple(subst_term(a, var, t) for a in f.args))
    if isinstance(f, And):
        return And(substitute(f.left, var, t), substitute(f.right, var, t))
    if isinstance(f, Imp):
        return Imp(substitute(f.left, var, t), substitute(f.right, var, t))
    if isinstance(f, Delta):
        return Delta(substitute(f.body, var, t))
    if isinstance(f, (Forall, Exists)):
        if f.var == var:
            return f
        return type(f)(f.var, substitute(f.body, var, t))
    return f


def instantiate_template(f: Formula, n: int) -> Formula:
    if isinstance(f, ParamConst):
        return truth(f.form(n))
    if isinstance(f, And):
        return And(instantiate_template(f.left, n), instantiate_template(f.right, n))
    if isinstance(f, Imp):
        return Imp(instantiate_template(f.left, n), instantiate_template(f.right, n))
    if isinstance(f, Delta):
        return Delta(instantiate_template(f.body, n))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, instantiate_template(f.body, n))
    return f


def instantiate_family(T: Theory, n: int) -> list[Formula]:
    """Base sentences followed by every family instantiated at 1..n."""
    if n < 1:
        raise ValueError("instantiate_family needs n >= 1")
    sig = T.signature
    out = list(T.sentences)
    for fam in T.families:
        for i in range(1, n + 1):
            s = instantiate_template(fam.template, i)
            for r in constants_of(s):
                if not 0 <= r <= 1:
                    raise SyntaxError_(f"family {fam.text or fam.template} gives constant {r} outside [0,1] at n={i}")
                if sig is not None and sig.A is not None and not sig.allows_constant(r):
                    raise SyntaxError_(f"family {fam.text or fam.template} gives constant {r} not in A at n={i}")
            out.append(s)
    return out


# ---------------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<param>\#\()
  | (?P<const>\#\d+(?:/\d+)?)
  | (?P<op><->|->|=>|[~&|().,])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)

KEYWORDS = {"bot", "forall", "exists", "delta"}


@dataclass
class Tok:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Tok]:
    toks: list[Tok] = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if not m:
            raise SyntaxError_(f"unexpected character {text[i]!r}", i)
        kind = m.lastgroup
        if kind == "param":
            depth, j = 1, m.end()
            while j < len(text) and depth:
                depth += text[j] == "("
                depth -= text[j] == ")"
                j += 1
            if depth:
                raise SyntaxError_("unterminated #( ... )", i)
            toks.append(Tok("param", text[i + 1 : j], i))
            i = j
            continue
        if kind != "ws":
            toks.append(Tok(kind, m.group(), i))
        i = m.end()
    toks.append(Tok("eof", "", len(text)))
    return toks


# ---------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, text: str, sig: Signature | None, allow_params: bool):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.sig = sig if sig is not None else Signature()
        self.allow_params = allow_params
        self.seen_preds: dict[str, int] = {}
        self.seen_funcs: dict[str, int] = {}

    @property
    def tok(self) -> Tok:
        return self.toks[self.i]

    def take(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Tok:
        if self.tok.text != text:
            raise SyntaxError_(f"expected {text!r}, found {self.tok.text or 'end of input'!r}", self.tok.pos)
        return self.take()

    def parse(self) -> Formula:
        f = self.iff_level(frozenset())
        if self.tok.kind != "eof":
            raise SyntaxError_(f"unexpected {self.tok.text!r}", self.tok.pos)
        return f

    # precedence: ~ > & > | > -> > => > <->
    def iff_level(self, bound):
        left = self.simp_level(bound)
        while self.tok.text == "<->":
            self.take()
            left = iff(left, self.simp_level(bound))
        return left

    def simp_level(self, bound):
        left = self.imp_level(bound)
        while self.tok.text == "=>":
            self.take()
            left = strongimp(left, self.imp_level(bound))
        return left

    def imp_level(self, bound):
        left = self.or_level(bound)
        if self.tok.text == "->":
            self.take()
            return Imp(left, self.imp_level(bound))
        return left

    def or_level(self, bound):
        left = self.and_level(bound)
        while self.tok.text == "|":
            self.take()
            left = or_(left, self.and_level(bound))
        return left

    def and_level(self, bound):
        left = self.unary(bound)
        while self.tok.text == "&":
            self.take()
            left = And(left, self.unary(bound))
        return left

    def unary(self, bound):
        t = self.tok
        if t.text == "~":
            self.take()
            return neg(self.unary(bound))
        if t.text == "(":
            self.take()
            f = self.iff_level(bound)
            self.expect(")")
            return f
        if t.kind == "const":
            self.take()
            r = Fraction(t.text[1:])
            return self.check_const(r, t.pos)
        if t.kind == "param":
            self.take()
            if not self.allow_params:
                raise SyntaxError_("parametric constant outside a family line", t.pos)
            try:
                form = parse_closed_form(t.text)
            except ValueError as exc:
                raise SyntaxError_(str(exc), t.pos) from None
            return ParamConst(form)
        if t.kind == "ident":
            if t.text == "bot":
                self.take()
                return BOT
            if t.text in ("forall", "exists"):
                self.take()
                v = self.take()
                if v.kind != "ident" or v.text in KEYWORDS:
                    raise SyntaxError_("expected a variable after quantifier", v.pos)
                if v.text in bound:
                    raise SyntaxError_(f"variable {v.text} is already bound here (shadowing is not allowed)", v.pos)
                if v.text in self.sig.consts or v.text in self.sig.preds or v.text in self.sig.funcs:
                    raise SyntaxError_(f"{v.text} is a declared symbol, not a variable", v.pos)
                self.expect(".")
                body = self.iff_level(bound | {v.text})
                return (Forall if t.text == "forall" else Exists)(v.text, body)
            if t.text == "delta":
                self.take()
                if not self.sig.delta_enabled:
                    raise SyntaxError_("delta is not enabled in this signature", t.pos)
                self.expect("(")
                f = self.iff_level(bound)
                self.expect(")")
                return Delta(f)
            return self.atom(bound)
        raise SyntaxError_(f"unexpected {t.text or 'end of input'!r}", t.pos)

    def check_const(self, r: Fraction, pos: int) -> Formula:
        if not 0 <= r <= 1:
            raise SyntaxError_(f"truth constant {r} outside [0,1]", pos)
        if not self.sig.allows_constant(r):
            raise SyntaxError_(f"truth constant {r} is not in A", pos)
        return truth(r)

    def atom(self, bound) -> Atom:
        t = self.take()
        name = t.text
        args: list = []
        if self.tok.text == "(":
            self.take()
            if self.tok.text != ")":
                args.append(self.term(bound))
                while self.tok.text == ",":
                    self.take()
                    args.append(self.term(bound))
            self.expect(")")
        if name in self.sig.funcs or name in self.sig.consts:
            raise SyntaxError_(f"{name} is not a predicate symbol", t.pos)
        self.note_arity(self.sig.preds, self.seen_preds, name, len(args), t.pos, "predicate")
        return Atom(name, tuple(args))

    def term(self, bound) -> Term:
        t = self.take()
        if t.kind != "ident" or t.text in KEYWORDS:
            raise SyntaxError_(f"expected a term, found {t.text!r}", t.pos)
        name = t.text
        if self.tok.text == "(":
            self.take()
            args = [self.term(bound)]
            while self.tok.text == ",":
                self.take()
                args.append(self.term(bound))
            self.expect(")")
            self.note_arity(self.sig.funcs, self.seen_funcs, name, len(args), t.pos, "function")
            return Func(name, tuple(args))
        if name in self.sig.consts:
            return Const(name)
        if name in self.sig.funcs:
            raise SyntaxError_(f"function {name} used without arguments", t.pos)
        if self.sig.strict and name not in bound:
            raise SyntaxError_(f"unknown symbol {name}", t.pos)
        return Var(name)

    def note_arity(self, declared, seen, name, n, pos, what):
        if name in declared:
            if declared[name] != n:
                raise SyntaxError_(f"{what} {name} has arity {declared[name]}, used with {n}", pos)
            return
        if self.sig.strict:
            raise SyntaxError_(f"unknown {what} {name}", pos)
        if name in seen and seen[name] != n:
            raise SyntaxError_(f"{what} {name} used with arities {seen[name]} and {n}", pos)
        seen[name] = n


def parse_formula(text: str, sig: Signature | None = None, *, allow_params: bool = False) -> Formula:
    """Parse one formula.  Without a signature, arities are inferred from use."""
    return _Parser(text, sig, allow_params).parse()


# ---------------------------------------------------------------------------
# printer

_LEVEL = {"imp": 3, "and": 5}


def _is_neg(f) -> bool:
    return isinstance(f, Imp) and isinstance(f.right, Bot)


def print_term(t: Term) -> str:
    return str(t)


def print_formula(f: Formula) -> str:
    """Render ``f`` so that ``parse_formula(print_formula(f)) == f``.

    Negation is shown as ``~``; other sugar is printed in expanded form.
    """
    return _pr(f)


def _wrap(f, need: bool) -> str:
    s = _pr(f)
    return f"({s})" if need else s


def _prec(f) -> int:
    if _is_neg(f):
        return 6
    if isinstance(f, Imp):
        return 3
    if isinstance(f, And):
        return 5
    if isinstance(f, (Forall, Exists)):
        return 0
    return 7


def _pr(f) -> str:
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, TruthConst):
        return f"#{f.value}"
    if isinstance(f, ParamConst):
        return f"#({f.form})"
    if isinstance(f, Atom):
        if not f.args:
            return f.pred
        return f"{f.pred}({', '.join(map(print_term, f.args))})"
    if _is_neg(f):
        return "~" + _wrap(f.left, _prec(f.left) < 6)
    if isinstance(f, Imp):
        return f"{_wrap(f.left, _prec(f.left) <= 3)} -> {_wrap(f.right, _prec(f.right) < 3)}"
    if isinstance(f, And):
        return f"{_wrap(f.left, _prec(f.left) < 5)} & {_wrap(f.right, _prec(f.right) <= 5)}"
    if isinstance(f, Delta):
        return f"delta({_pr(f.body)})"
    if isinstance(f, Forall):
        return f"forall {f.var}. {_pr(f.body)}"
    if isinstance(f, Exists):
        return f"exists {f.var}. {_pr(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# theory files

_COMMENT_RE = re.compile(r"%|#(?![\d(])")


def strip_comment(line: str) -> str:
    m = _COMMENT_RE.search(line)
    return line[: m.start()] if m else line


def parse_theory(text: str, sig: Signature | None = None) -> Theory:
    """Parse a theory file.

    Lines are sentences, ``family n: <template>`` parametric families, or
    declarations ``pred R/1``, ``fun f/1``, ``const c``, ``nodelta``.
    """
    sig = sig.copy() if sig is not None else Signature()
    th = Theory(signature=sig)
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = strip_comment(raw).strip()
        if not line:
            continue
        try:
            if _declare(line, sig):
                continue
            m = re.match(r"family\s+n\s*:\s*(.*)$", line)
            if m:
                tmpl = parse_formula(m.group(1), sig, allow_params=True)
                _require_sentence(tmpl)
                th.families.append(Family(tmpl, m.group(1).strip()))
            else:
                f = parse_formula(line, sig)
                _require_sentence(f)
                th.sentences.append(f)
        except SyntaxError_ as exc:
            raise SyntaxError_(str(exc).split(" (")[0], exc.pos, lineno) from None
    return th


def _require_sentence(f: Formula) -> None:
    fv = free_vars(f)
    if fv:
        raise SyntaxError_(f"not a sentence: free variables {sorted(fv)}")


def _declare(line: str, sig: Signature) -> bool:
    m = re.match(r"(pred|fun)\s+([A-Za-z_][\w']*)\s*/\s*(\d+)$", line)
    if m:
        table = sig.preds if m.group(1) == "pred" else sig.funcs
        table[m.group(2)] = int(m.group(3))
        return True
    m = re.match(r"const\s+([A-Za-z_][\w']*)$", line)
    if m:
        sig.consts.add(m.group(1))
        return True
    if line == "nodelta":
        sig.delta_enabled = False
        return True
    return False


def format_theory(T: Theory) -> str:
    lines = [print_formula(s) for s in T.sentences]
    lines += [f"family n: {print_formula(f.template)}" for f in T.families]
    return "\n".join(lines) + "\n"


def iter_formulas(fs: Iterable[Formula]) -> Iterator[str]:
    for f in fs:
        yield print_formula(f)

"""Finite structures and evaluation of terms and formulas (reverse reading)."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import syntax as sx
from .values import ONE, ZERO, GoedelSet, delta, resid, val


class EvalError(ValueError):
    pass


@dataclass(frozen=True)
class Structure:
    """A finite structure.

    ``preds`` maps a predicate name to a table from argument tuples (of
    element names) to values; ``funcs`` maps to tables into the universe.
    """

    universe: tuple[str, ...]
    preds: Mapping[str, Mapping[tuple, Fraction]] = field(default_factory=dict)
    funcs: Mapping[str, Mapping[tuple, str]] = field(default_factory=dict)
    consts: Mapping[str, str] = field(default_factory=dict)
    V: GoedelSet = field(default_factory=GoedelSet.full01)

    def __post_init__(self):
        if not self.universe:
            raise ValueError("a structure needs a nonempty universe")
        if len(set(self.universe)) != len(self.universe):
            raise ValueError("duplicate universe elements")
        elems = set(self.universe)
        for name, table in self.preds.items():
            n = self.arity(name)
            for tup in itertools.product(self.universe, repeat=n):
                if tup not in table:
                    raise ValueError(f"predicate {name} has no value at {tup}")
            for tup, v in table.items():
                if len(tup) != n or not set(tup) <= elems:
                    raise ValueError(f"bad argument tuple {tup} for {name}")
                if not self.V.member(v):
                    raise ValueError(f"{name}{tup} = {v} is not in V = {self.V}")
        for name, table in self.funcs.items():
            n = self.func_arity(name)
            for tup in itertools.product(self.universe, repeat=n):
                if tup not in table:
                    raise ValueError(f"function {name} undefined at {tup}")
                if table[tup] not in elems:
                    raise ValueError(f"function {name} leaves the universe at {tup}")
        for c, e in self.consts.items():
            if e not in elems:
                raise ValueError(f"constant {c} names unknown element {e}")

    def arity(self, pred: str) -> int:
        table = self.preds[pred]
        return len(next(iter(table))) if table else 0

    def func_arity(self, fn: str) -> int:
        table = self.funcs[fn]
        return len(next(iter(table)))

    def with_preds(self, **updates) -> "Structure":
        p = dict(self.preds)
        p.update(updates)
        return Structure(self.universe, p, self.funcs, self.consts, self.V)


def propositional(assignment: Mapping[str, Fraction], V: GoedelSet | None = None) -> Structure:
    """One-element structure interpreting nullary predicates by ``assignment``."""
    return Structure(("*",), {p: {(): Fraction(v)} for p, v in assignment.items()}, V=V or GoedelSet.full01())


# ---------------------------------------------------------------------------
# evaluation

def eval_term(M: Structure, t: sx.Term, env: Mapping[str, str]) -> str:
    if isinstance(t, sx.Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvalError(f"unbound variable {t.name}") from None
    if isinstance(t, sx.Const):
        try:
            return M.consts[t.name]
        except KeyError:
            raise EvalError(f"constant {t.name} not interpreted") from None
    if isinstance(t, sx.Func):
        args = tuple(eval_term(M, a, env) for a in t.args)
        try:
            return M.funcs[t.name][args]
        except KeyError:
            raise EvalError(f"function {t.name} not interpreted at {args}") from None
    raise TypeError(f"not a term: {t!r}")


def eval_formula(M: Structure, f: sx.Formula, env: Mapping[str, str] | None = None,
                 *, delta_enabled: bool = True) -> Fraction:
    """Truth value of ``f`` in ``M`` under ``env``; quantifiers are max/min over M."""
    cache: dict = {}
    return _ev(M, f, dict(env or {}), cache, delta_enabled)


def _ev(M, f, env, cache, delta_ok) -> Fraction:
    key = (f, tuple(env[v] for v in sorted(sx.free_vars(f)) if v in env))
    hit = cache.get(key)
    if hit is not None:
        return hit
    if isinstance(f, sx.Bot):
        out = ONE
    elif isinstance(f, sx.TruthConst):
        out = f.value
    elif isinstance(f, sx.Atom):
        args = tuple(eval_term(M, a, env) for a in f.args)
        try:
            out = M.preds[f.pred][args]
        except KeyError:
            raise EvalError(f"predicate {f.pred} not interpreted at {args}") from None
    elif isinstance(f, sx.And):
        out = max(_ev(M, f.left, env, cache, delta_ok), _ev(M, f.right, env, cache, delta_ok))
    elif isinstance(f, sx.Imp):
        out = resid(_ev(M, f.left, env, cache, delta_ok), _ev(M, f.right, env, cache, delta_ok))
    elif isinstance(f, sx.Delta):
        if not delta_ok:
            raise EvalError("delta used but not enabled")
        out = delta(_ev(M, f.body, env, cache, delta_ok))
    elif isinstance(f, (sx.Forall, sx.Exists)):
        vals = []
        for b in M.universe:
            e2 = dict(env)
            e2[f.var] = b
            vals.append(_ev(M, f.body, e2, cache, delta_ok))
        out = max(vals) if isinstance(f, sx.Forall) else min(vals)
    elif isinstance(f, sx.ParamConst):
        raise EvalError("cannot evaluate a family template; instantiate it first")
    else:
        raise TypeError(f"not a formula: {f!r}")
    cache[key] = out
    return out


def tabulate(M: Structure, f: sx.Formula, variables: Sequence[str]) -> dict[tuple, Fraction]:
    """Values of ``f`` for every assignment of ``variables`` (bottom-up, one pass per node)."""
    variables = tuple(variables)
    missing = sx.free_vars(f) - set(variables)
    if missing:
        raise EvalError(f"free variables {sorted(missing)} not among {variables}")
    grid = list(itertools.product(M.universe, repeat=len(variables)))
    idx = {v: i for i, v in enumerate(variables)}
    memo: dict = {}

    def tab(g) -> list[Fraction]:
        if g in memo:
            return memo[g]
        if isinstance(g, sx.Bot):
            out = [ONE] * len(grid)
        elif isinstance(g, sx.TruthConst):
            out = [g.value] * len(grid)
        elif isinstance(g, sx.Atom):
            table = M.preds[g.pred]
            out = [table[tuple(eval_term(M, a, dict(zip(variables, row))) for a in g.args)] for row in grid]
        elif isinstance(g, sx.And):
            out = [max(a, b) for a, b in zip(tab(g.left), tab(g.right))]
        elif isinstance(g, sx.Imp):
            out = [resid(a, b) for a, b in zip(tab(g.left), tab(g.right))]
        elif isinstance(g, sx.Delta):
            out = [delta(a) for a in tab(g.body)]
        elif isinstance(g, (sx.Forall, sx.Exists)):
            if g.var not in idx:
                raise EvalError(f"bound variable {g.var} must be listed in variables")
            body = tab(g.body)
            pos = idx[g.var]
            agg = max if isinstance(g, sx.Forall) else min
            groups: dict[tuple, list] = {}
            for row, v in zip(grid, body):
                groups.setdefault(row[:pos] + row[pos + 1 :], []).append(v)
            red = {k: agg(vs) for k, vs in groups.items()}
            out = [red[row[:pos] + row[pos + 1 :]] for row in grid]
        else:
            raise TypeError(f"cannot tabulate {g!r}")
        memo[g] = out
        return out

    return dict(zip(grid, tab(f)))


@dataclass
class ModelCheck:
    ok: bool
    failing: sx.Formula | None = None
    value: Fraction | None = None

    def __bool__(self) -> bool:
        return self.ok


def models(M: Structure, T: Iterable[sx.Formula], *, delta_enabled: bool = True) -> ModelCheck:
    """Does every sentence of T take value 0 in M?  Reports the first failure."""
    for s in T:
        if sx.free_vars(s):
            raise EvalError(f"not a sentence: {sx.print_formula(s)}")
        v = eval_formula(M, s, delta_enabled=delta_enabled)
        if v != 0:
            return ModelCheck(False, s, v)
    return ModelCheck(True)


def dualize_display(v: Fraction) -> Fraction:
    """Translate a value to the usual reading (1 = true) for display only."""
    return ONE - Fraction(v)


# ---------------------------------------------------------------------------
# structure files

_PRED_RE = re.compile(r"pred\s+([A-Za-z_][\w']*)\s*/\s*(\d+)\s*:(.*)$")
_FUN_RE = re.compile(r"fun\s+([A-Za-z_][\w']*)\s*/\s*(\d+)\s*:(.*)$")


def parse_structure(text: str, V: GoedelSet | None = None) -> Structure:
    """Read the line format: ``universe a b``, ``pred R/1: a=1/3 b=2/3``,
    ``pred d/2: a,b=1/2 ...``, ``pred rho/0: 1/2``, ``fun f/1: a->b``, ``const c=a``,
    and optionally ``values <goedel-set>``.
    """
    from .values import parse_goedel_set

    universe: list[str] = []
    preds: dict[str, dict] = {}
    funcs: dict[str, dict] = {}
    consts: dict[str, str] = {}
    Vset = V
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("universe"):
                universe = line.split()[1:]
            elif line.startswith("values"):
                Vset = parse_goedel_set(line[len("values"):])
            elif line.startswith("pred"):
                m = _PRED_RE.match(line)
                if not m:
                    raise ValueError("bad pred line")
                name, n, body = m.group(1), int(m.group(2)), m.group(3).strip()
                table = {}
                if n == 0:
                    table[()] = val(body.lstrip("="))
                else:
                    for item in body.split():
                        lhs, _, rhs = item.rpartition("=")
                        tup = tuple(lhs.split(","))
                        if len(tup) != n:
                            raise ValueError(f"{item}: expected {n} arguments")
                        table[tup] = val(rhs)
                preds[name] = table
            elif line.startswith("fun"):
                m = _FUN_RE.match(line)
                if not m:
                    raise ValueError("bad fun line")
                name, n, body = m.group(1), int(m.group(2)), m.group(3).strip()
                table = {}
                for item in body.split():
                    lhs, _, rhs = item.partition("->")
                    tup = tuple(lhs.split(",")) if n else ()
                    if len(tup) != n:
                        raise ValueError(f"{item}: expected {n} arguments")
                    table[tup] = rhs
                funcs[name] = table
            elif line.startswith("const"):
                for item in line[len("const"):].split():
                    c, _, e = item.partition("=")
                    consts[c] = e
            else:
                raise ValueError(f"unrecognised line {line!r}")
        except ValueError as exc:
            raise sx.SyntaxError_(str(exc), None, lineno) from None
    return Structure(tuple(universe), preds, funcs, consts, Vset or GoedelSet.full01())


def format_structure(M: Structure, *, include_values: bool = False) -> str:
    lines = ["universe " + " ".join(M.universe)]
    if include_values:
        lines.append(f"values {M.V}")
    for name in sorted(M.preds):
        table = M.preds[name]
        n = M.arity(name)
        if n == 0:
            lines.append(f"pred {name}/0: {table[()]}")
            continue
        items = [f"{','.join(t)}={table[t]}" for t in itertools.product(M.universe, repeat=n)]
        lines.append(f"pred {name}/{n}: " + " ".join(items))
    for name in sorted(M.funcs):
        table = M.funcs[name]
        n = M.func_arity(name)
        items = [f"{','.join(t)}->{table[t]}" for t in itertools.product(M.universe, repeat=n)]
        lines.append(f"fun {name}/{n}: " + " ".join(items))
    for c in sorted(M.consts):
        lines.append(f"const {c}={M.consts[c]}")
    return "\n".join(lines) + "\n"

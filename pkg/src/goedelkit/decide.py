"""Propositional satisfiability and entailment by order-type enumeration.

Why finitely many cases suffice: with connectives max, resid, Δ and truth
constants, every subformula takes a value drawn from {0, 1} ∪ constants ∪
atom values, and each connective only compares its arguments.  So the value
of a formula (as a symbol) and in particular whether it equals 0 depends only
on how the atoms sit relative to the mentioned constants and to each other.
An *arrangement* records exactly that: every atom is pinned to a constant or
placed in a gap between two adjacent constants, with a weak order among the
atoms sharing a gap.  A gap of V with finitely many members can host at most
that many distinct values, which prunes unrealizable arrangements.

The brute-force :func:`oracle_sat` searches concrete values instead and is
used to cross-check the symbolic procedure.
"""

from __future__ import annotations

import itertools

import numpy as np
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import syntax as sx
from .semantics import eval_formula, propositional
from .values import ONE, ZERO, ConstantFamily, GoedelSet, fmt

DEFAULT_ATOM_BOUND = 6


class BoundExceeded(ValueError):
    pass


class NotPropositional(ValueError):
    pass


# ---------------------------------------------------------------------------
# arrangements

@dataclass(frozen=True)
class Arrangement:
    """Order type of the atoms relative to the sorted constants ``points``.

    ``where[atom]`` is ``("pin", i)`` for ``points[i]`` or ``("gap", j, rank)``
    for the open interval ``(points[j], points[j+1])``; a larger rank is a
    larger value, equal ranks are equal values.
    """

    points: tuple[Fraction, ...]
    where: tuple[tuple[str, tuple], ...]

    def loc(self, atom: str) -> tuple:
        return dict(self.where)[atom]

    def key(self, atom: str) -> tuple[int, int]:
        return _loc_key(self.loc(atom))

    def gap_ranks(self) -> dict[int, int]:
        """Number of strict classes used in each occupied gap."""
        out: dict[int, int] = {}
        for _, loc in self.where:
            if loc[0] == "gap":
                out[loc[1]] = max(out.get(loc[1], 0), loc[2])
        return out

    def realize(self, V: GoedelSet) -> dict[str, Fraction]:
        """Concrete values; within a gap the highest rank gets the largest pick."""
        picks = {}
        for j, k in self.gap_ranks().items():
            picks[j] = V.pick_between(self.points[j], self.points[j + 1], k)
        out = {}
        for atom, loc in self.where:
            out[atom] = self.points[loc[1]] if loc[0] == "pin" else picks[loc[1]][loc[2] - 1]
        return out

    def describe(self) -> str:
        parts = []
        for atom, loc in self.where:
            if loc[0] == "pin":
                parts.append(f"{atom}={fmt(self.points[loc[1]])}")
            else:
                a, b = self.points[loc[1]], self.points[loc[1] + 1]
                parts.append(f"{atom}∈({fmt(a)},{fmt(b)})#{loc[2]}")
        return ", ".join(parts) if parts else "(no atoms)"


def _loc_key(loc: tuple) -> tuple[int, int]:
    return (2 * loc[1], 0) if loc[0] == "pin" else (2 * loc[1] + 1, loc[2])


def _ordered_partitions(items: Sequence[str], max_classes: float) -> Iterator[dict[str, int]]:
    """All weak orders of ``items`` as maps item -> rank 1..k, k <= max_classes."""
    n = len(items)
    top = n if max_classes == float("inf") else min(n, int(max_classes))
    for k in range(1, top + 1):
        for ranks in itertools.product(range(1, k + 1), repeat=n):
            if len(set(ranks)) == k:
                yield dict(zip(items, ranks))


def _check_bound(atoms: Sequence[str], bound: int) -> None:
    if len(atoms) > bound:
        raise BoundExceeded(f"{len(atoms)} atoms exceed the bound {bound}")


def enumerate_arrangements(atoms: Iterable[str], constants: Iterable, V: GoedelSet,
                           bound: int = DEFAULT_ATOM_BOUND) -> Iterator[Arrangement]:
    """Every realizable arrangement exactly once, in a fixed order.

    Each atom tries pins (constants lying in V, largest first) and then gaps
    (largest first); gap occupants then run through their weak orders.
    """
    atoms = sorted(set(atoms))
    _check_bound(atoms, bound)
    points = tuple(sorted({Fraction(c) for c in constants} | {ZERO, ONE}))
    pins = [("pin", i) for i in reversed(range(len(points))) if V.member(points[i])]
    caps = {j: V.gap_capacity(points[j], points[j + 1]) for j in range(len(points) - 1)}
    gaps = [("gap", j) for j in reversed(range(len(points) - 1)) if caps[j] > 0]
    options = pins + gaps
    for choice in itertools.product(options, repeat=len(atoms)):
        occupants: dict[int, list[str]] = {}
        for atom, opt in zip(atoms, choice):
            if opt[0] == "gap":
                occupants.setdefault(opt[1], []).append(atom)
        gap_ids = sorted(occupants)
        per_gap = [list(_ordered_partitions(occupants[j], caps[j])) for j in gap_ids]
        for combo in itertools.product(*per_gap):
            rank = {}
            for part in combo:
                rank.update(part)
            where = tuple(
                (atom, opt if opt[0] == "pin" else ("gap", opt[1], rank[atom]))
                for atom, opt in zip(atoms, choice)
            )
            yield Arrangement(points, where)


# ---------------------------------------------------------------------------
# symbolic evaluation

def _require_propositional(f: sx.Formula) -> None:
    for g in sx.subformulas(f):
        if isinstance(g, (sx.Forall, sx.Exists, sx.ParamConst)) or (isinstance(g, sx.Atom) and g.args):
            raise NotPropositional(f"not propositional: {sx.print_formula(f)}")


def _sym(f: sx.Formula, atom_key: dict, const_key: dict, memo: dict) -> tuple[int, int]:
    hit = memo.get(f)
    if hit is not None:
        return hit
    zero = (0, 0)
    if isinstance(f, sx.Bot):
        out = const_key[ONE]
    elif isinstance(f, sx.TruthConst):
        out = const_key[f.value]
    elif isinstance(f, sx.Atom):
        out = atom_key[f.pred]
    elif isinstance(f, sx.And):
        out = max(_sym(f.left, atom_key, const_key, memo), _sym(f.right, atom_key, const_key, memo))
    elif isinstance(f, sx.Imp):
        x = _sym(f.left, atom_key, const_key, memo)
        y = _sym(f.right, atom_key, const_key, memo)
        out = zero if x >= y else y
    elif isinstance(f, sx.Delta):
        out = zero if _sym(f.body, atom_key, const_key, memo) == zero else const_key[ONE]
    else:
        raise NotPropositional(f"cannot evaluate {f!r} symbolically")
    memo[f] = out
    return out


@dataclass(frozen=True)
class SymValue:
    """A symbolic value: a point of the arrangement or a gap class."""

    key: tuple[int, int]
    points: tuple[Fraction, ...]

    @property
    def is_zero(self) -> bool:
        return self.key == (0, 0)

    def __str__(self) -> str:
        i, r = self.key
        if i % 2 == 0:
            return fmt(self.points[i // 2])
        j = i // 2
        return f"({fmt(self.points[j])},{fmt(self.points[j + 1])})#{r}"


def eval_symbolic(f: sx.Formula, arr: Arrangement) -> SymValue:
    _require_propositional(f)
    const_key = {p: (2 * i, 0) for i, p in enumerate(arr.points)}
    missing = sx.constants_of(f) - set(const_key)
    if missing:
        raise ValueError(f"constants {sorted(missing)} not among the arrangement's points")
    atom_key = {a: _loc_key(loc) for a, loc in arr.where}
    return SymValue(_sym(f, atom_key, const_key, {}), arr.points)


# ---------------------------------------------------------------------------
# verdicts

@dataclass
class Verdict:
    kind: str                                   # SAT | UNSAT | ENTAILED | NOT_ENTAILED
    witness: dict[str, Fraction] | None = None
    arrangement: Arrangement | None = None
    examined: int = 0

    @property
    def positive(self) -> bool:
        return self.kind in ("SAT", "ENTAILED")

    def __str__(self) -> str:
        if self.witness is None:
            return self.kind
        w = ", ".join(f"{a}={fmt(v)}" for a, v in sorted(self.witness.items()))
        return f"{self.kind} [{w}]"


_RANK_BASE = 16


def _int_key(key: tuple[int, int]) -> int:
    return key[0] * _RANK_BASE + key[1]


class ModelSpace:
    """All arrangements for a fixed atom set and constant set over V.

    Each formula is turned into an integer vector (one symbolic value per
    arrangement) built bottom-up and cached per subformula, so repeated
    sat/entailment queries over the same vocabulary turn into filtering.
    """

    def __init__(self, atoms: Iterable[str], constants: Iterable, V: GoedelSet,
                 bound: int = DEFAULT_ATOM_BOUND):
        self.atoms = sorted(set(atoms))
        self.V = V
        self.arrs = list(enumerate_arrangements(self.atoms, constants, V, bound))
        self.points = self.arrs[0].points if self.arrs else (ZERO, ONE)
        self._const_key = {p: _int_key((2 * i, 0)) for i, p in enumerate(self.points)}
        self._top = self._const_key[ONE]
        n = len(self.arrs)
        self._atom_vec = {
            a: np.array([_int_key(_loc_key(arr.loc(a))) for arr in self.arrs], dtype=np.int64)
            for a in self.atoms
        }
        self._const_vec = {p: np.full(n, k, dtype=np.int64) for p, k in self._const_key.items()}
        self._cache: dict[sx.Formula, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self.arrs)

    def vector(self, f: sx.Formula) -> np.ndarray:
        got = self._cache.get(f)
        if got is not None:
            return got
        if isinstance(f, sx.Bot):
            out = self._const_vec[ONE]
        elif isinstance(f, sx.TruthConst):
            if f.value not in self._const_vec:
                raise ValueError(f"constant {fmt(f.value)} outside the model space")
            out = self._const_vec[f.value]
        elif isinstance(f, sx.Atom):
            if f.args:
                raise NotPropositional(f"not propositional: {sx.print_formula(f)}")
            if f.pred not in self._atom_vec:
                raise ValueError(f"atom {f.pred} outside the model space")
            out = self._atom_vec[f.pred]
        elif isinstance(f, sx.And):
            out = np.maximum(self.vector(f.left), self.vector(f.right))
        elif isinstance(f, sx.Imp):
            x, y = self.vector(f.left), self.vector(f.right)
            out = np.where(x >= y, 0, y)
        elif isinstance(f, sx.Delta):
            out = np.where(self.vector(f.body) == 0, 0, self._top)
        else:
            raise NotPropositional(f"not propositional: {sx.print_formula(f)}")
        self._cache[f] = out
        return out

    def keys(self, f: sx.Formula) -> list[tuple[int, int]]:
        return [divmod(int(k), _RANK_BASE) for k in self.vector(f)]

    def zero_mask(self, f: sx.Formula) -> np.ndarray:
        return self.vector(f) == 0

    def models_mask(self, T: Sequence[sx.Formula]) -> np.ndarray:
        mask = np.ones(len(self.arrs), dtype=bool)
        for s in T:
            mask &= self.vector(s) == 0
        return mask

    def models(self, T: Sequence[sx.Formula]) -> list[int]:
        """Indices of arrangements satisfying every sentence of T."""
        return np.flatnonzero(self.models_mask(T)).tolist()

    def witness(self, i: int) -> dict[str, Fraction]:
        return self.arrs[i].realize(self.V)

    def sat(self, T: Sequence[sx.Formula]) -> Verdict:
        found = self.models(T)
        if not found:
            return Verdict("UNSAT", examined=len(self.arrs))
        i = found[0]
        w = self.witness(i)
        _recheck(T, w, self.V)
        return Verdict("SAT", w, self.arrs[i], len(self.arrs))

    def entails(self, T: Sequence[sx.Formula], phi: sx.Formula) -> Verdict:
        bad = np.flatnonzero(self.models_mask(T) & (self.vector(phi) != 0))
        if len(bad):
            i = int(bad[0])
            w = self.witness(i)
            _recheck(T, w, self.V)
            return Verdict("NOT_ENTAILED", w, self.arrs[i], len(self.arrs))
        return Verdict("ENTAILED", examined=len(self.arrs))


def _recheck(T: Sequence[sx.Formula], w: dict[str, Fraction], V: GoedelSet) -> None:
    M = propositional(w, V)
    for s in T:
        v = eval_formula(M, s)
        if v != 0:
            raise AssertionError(f"witness {w} gives {sx.print_formula(s)} value {v}")


def _vocabulary(formulas: Sequence[sx.Formula], A: ConstantFamily | None) -> tuple[set, set]:
    atoms: set[str] = set()
    consts: set[Fraction] = set()
    for f in formulas:
        _require_propositional(f)
        atoms |= sx.atoms_of(f)
        consts |= sx.constants_of(f)
    if A is not None:
        bad = [c for c in consts if c not in (ZERO, ONE) and not A.member(c)]
        if bad:
            raise ValueError(f"truth constants {[fmt(b) for b in sorted(bad)]} not in A")
    return atoms, consts


def space_for(formulas: Sequence[sx.Formula], V: GoedelSet, A: ConstantFamily | None = None,
              bound: int = DEFAULT_ATOM_BOUND, extra_constants: Iterable = ()) -> ModelSpace:
    atoms, consts = _vocabulary(formulas, A)
    return ModelSpace(atoms, consts | {Fraction(c) for c in extra_constants}, V, bound)


def sat(T: Sequence[sx.Formula], V: GoedelSet | None = None, A: ConstantFamily | None = None,
        bound: int = DEFAULT_ATOM_BOUND) -> Verdict:
    V = V or GoedelSet.full01()
    return space_for(list(T), V, A, bound).sat(list(T))


def entails(T: Sequence[sx.Formula], phi: sx.Formula, V: GoedelSet | None = None,
            A: ConstantFamily | None = None, bound: int = DEFAULT_ATOM_BOUND) -> Verdict:
    V = V or GoedelSet.full01()
    T = list(T)
    return space_for(T + [phi], V, A, bound).entails(T, phi)


def approx_entails(T: Sequence[sx.Formula], phi: sx.Formula, V: GoedelSet | None,
                   A: ConstantFamily, rs: Iterable, bound: int = DEFAULT_ATOM_BOUND) -> list[tuple[Fraction, Verdict]]:
    """Verdict of ``T ⊨ r̄ → φ`` for each listed r in A ∪ {1}."""
    out = []
    for r in rs:
        r = Fraction(r)
        if r != ONE and not A.member(r):
            raise ValueError(f"{fmt(r)} is not in A ∪ {{1}}")
        out.append((r, entails(T, sx.Imp(sx.truth(r), phi), V, A, bound)))
    return out


# ---------------------------------------------------------------------------
# brute-force oracle

def _compile(f: sx.Formula):
    """Turn a formula into a closure over a concrete assignment."""
    if isinstance(f, sx.Bot):
        return lambda env: ONE
    if isinstance(f, sx.TruthConst):
        v = f.value
        return lambda env: v
    if isinstance(f, sx.Atom):
        name = f.pred
        return lambda env: env[name]
    if isinstance(f, sx.And):
        l, r = _compile(f.left), _compile(f.right)
        return lambda env: max(l(env), r(env))
    if isinstance(f, sx.Imp):
        l, r = _compile(f.left), _compile(f.right)

        def imp(env):
            y = r(env)
            return ZERO if l(env) >= y else y
        return imp
    if isinstance(f, sx.Delta):
        b = _compile(f.body)
        return lambda env: ZERO if b(env) == 0 else ONE
    raise NotPropositional(f"cannot compile {f!r}")


def oracle_candidates(atoms: Sequence[str], constants: Iterable, V: GoedelSet) -> list[Fraction]:
    """Constants in V plus up to |atoms| members of V from every gap."""
    points = sorted({Fraction(c) for c in constants} | {ZERO, ONE})
    cands = {p for p in points if V.member(p)}
    n = max(1, len(atoms))
    for a, b in zip(points, points[1:]):
        cap = V.gap_capacity(a, b)
        k = int(min(n, cap))
        cands.update(V.pick_between(a, b, k))
    return sorted(cands, reverse=True)


def oracle_sat(T: Sequence[sx.Formula], V: GoedelSet | None = None, A: ConstantFamily | None = None,
               bound: int = DEFAULT_ATOM_BOUND) -> Verdict:
    V = V or GoedelSet.full01()
    T = list(T)
    atoms, consts = _vocabulary(T, A)
    atoms = sorted(atoms)
    _check_bound(atoms, bound)
    cands = oracle_candidates(atoms, consts, V)
    checks = [_compile(s) for s in T]
    n = 0
    for combo in itertools.product(cands, repeat=len(atoms)):
        n += 1
        env = dict(zip(atoms, combo))
        if all(c(env) == 0 for c in checks):
            _recheck(T, env, V)
            return Verdict("SAT", env, None, n)
    return Verdict("UNSAT", examined=n)


def oracle_entails(T: Sequence[sx.Formula], phi: sx.Formula, V: GoedelSet | None = None,
                   A: ConstantFamily | None = None, bound: int = DEFAULT_ATOM_BOUND) -> Verdict:
    V = V or GoedelSet.full01()
    T = list(T)
    atoms, consts = _vocabulary(T + [phi], A)
    atoms = sorted(atoms)
    _check_bound(atoms, bound)
    checks = [_compile(s) for s in T]
    goal = _compile(phi)
    for combo in itertools.product(oracle_candidates(atoms, consts, V), repeat=len(atoms)):
        env = dict(zip(atoms, combo))
        if all(c(env) == 0 for c in checks) and goal(env) != 0:
            return Verdict("NOT_ENTAILED", env)
    return Verdict("ENTAILED")

"""Ultrametric and Lipschitz structures, the formula bound and the quotient M/d.

The distance is the ordinary binary predicate ``d``; being a pseudo-ultrametric
is a property checked here, not something the syntax promises.  Tuples are
compared with the max of coordinate distances.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import syntax as sx
from .semantics import Structure
from .tables import TableSpace, leaf_atoms, signature_of
from .values import ONE, ZERO, GoedelSet, dmax, fmt

D = "d"


class MetricError(ValueError):
    pass


def dist(M: Structure, a: str, b: str, d: str = D) -> Fraction:
    return M.preds[d][(a, b)]


def tuple_dist(M: Structure, xs: Sequence[str], ys: Sequence[str], d: str = D) -> Fraction:
    return max((dist(M, a, b, d) for a, b in zip(xs, ys)), default=ZERO)


def _require_d(M: Structure, d: str) -> None:
    if d not in M.preds or M.arity(d) != 2:
        raise MetricError(f"structure has no binary predicate {d}")


@dataclass
class UltrametricReport:
    ok: bool
    witnesses: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "OK pseudo-ultrametric"
        return "\n".join(f"{law} fails at ({', '.join(t)})" for law, t in self.witnesses)


def validate_pseudo_ultrametric(M: Structure, d: str = D, *, limit: int = 20) -> UltrametricReport:
    """Reflexivity, symmetry and the strong triangle inequality on all triples."""
    _require_d(M, d)
    U = M.universe
    bad: list[tuple[str, tuple[str, ...]]] = []
    for a in U:
        if dist(M, a, a, d) != 0:
            bad.append(("reflexivity", (a,)))
    for a, b in itertools.combinations(U, 2):
        if dist(M, a, b, d) != dist(M, b, a, d):
            bad.append(("symmetry", (a, b)))
    for a, b, c in itertools.product(U, repeat=3):
        if dist(M, a, b, d) > max(dist(M, a, c, d), dist(M, c, b, d)):
            bad.append(("strong triangle", (a, b, c)))
    return UltrametricReport(not bad, bad[:limit])


@dataclass(frozen=True)
class LipschitzWitness:
    symbol: str
    left: tuple[str, ...]
    right: tuple[str, ...]
    lhs: Fraction
    rhs: Fraction

    def __str__(self) -> str:
        return (f"{self.symbol}: ({','.join(self.left)}) vs ({','.join(self.right)}): "
                f"{fmt(self.lhs)} > {fmt(self.rhs)}")


@dataclass
class LipschitzCertificate:
    """Per symbol: ``None`` for OK, else a violating pair of tuples."""

    entries: dict[str, LipschitzWitness | None]

    @property
    def ok(self) -> bool:
        return all(w is None for w in self.entries.values())

    def __bool__(self) -> bool:
        return self.ok

    def recheck(self, M: Structure, d: str = D) -> bool:
        """Every recorded witness really violates the bound."""
        for sym, w in self.entries.items():
            if w is None:
                continue
            rhs = tuple_dist(M, w.left, w.right, d)
            if sym in M.funcs:
                lhs = dist(M, M.funcs[sym][w.left], M.funcs[sym][w.right], d)
            else:
                lhs = dmax(M.preds[sym][w.left], M.preds[sym][w.right])
            if not lhs > rhs:
                return False
        return True

    def __str__(self) -> str:
        return "\n".join(f"{s}: {'OK' if w is None else w}" for s, w in sorted(self.entries.items()))


def validate_lipschitz(M: Structure, d: str = D) -> LipschitzCertificate:
    """1-Lipschitz check of every function and predicate, d included."""
    _require_d(M, d)
    out: dict[str, LipschitzWitness | None] = {}
    symbols = [(f, True) for f in sorted(M.funcs)] + [(p, False) for p in sorted(M.preds)]
    for sym, is_fun in symbols:
        n = M.func_arity(sym) if is_fun else M.arity(sym)
        tuples = list(itertools.product(M.universe, repeat=n))
        table = M.funcs[sym] if is_fun else M.preds[sym]
        out[sym] = None
        for xs, ys in itertools.combinations(tuples, 2):
            rhs = tuple_dist(M, xs, ys, d)
            lhs = dist(M, table[xs], table[ys], d) if is_fun else dmax(table[xs], table[ys])
            if lhs > rhs:
                out[sym] = LipschitzWitness(sym, xs, ys, lhs, rhs)
                break
    return LipschitzCertificate(out)


@dataclass
class BoundReport:
    depth: int
    tables: int
    pairs: int
    violations: list[tuple[sx.Formula, tuple, tuple, Fraction, Fraction]]
    min_slack: Fraction | None

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        head = (f"depth {self.depth}: {self.tables} distinct formula tables, "
                f"{self.pairs} tuple pairs each; violations {len(self.violations)}")
        if self.min_slack is not None:
            head += f"; least slack {fmt(self.min_slack)}"
        lines = [head]
        for f, a, b, l, r in self.violations[:10]:
            lines.append(f"  {sx.print_formula(f)} at ({','.join(a)}) vs ({','.join(b)}): {fmt(l)} > {fmt(r)}")
        return "\n".join(lines)


def _variables(M: Structure) -> tuple[str, ...]:
    n = max([2] + [M.arity(p) for p in M.preds] + [M.func_arity(f) for f in M.funcs])
    return tuple("xyzuvw"[:n])


def formula_space(M: Structure, depth: int, *, worlds: Sequence[Structure] | None = None,
                  use_delta: bool = False, truth_constants: Sequence = ()) -> TableSpace:
    preds, funcs, consts = signature_of(M)
    vs = _variables(M)
    space = TableSpace(list(worlds or [M]), vs, leaf_atoms(preds, vs, funcs, consts), truth_constants)
    return space.close(depth, use_delta)


def lipschitz_formula_bound(M: Structure, depth: int = 3, d: str = D, *, use_delta: bool = False,
                            truth_constants: Sequence = (), space: TableSpace | None = None) -> BoundReport:
    """d_max(φ(ā), φ(b̄)) ≤ d(ā, b̄) for every formula table up to ``depth``.

    Formulas are enumerated up to equality of their tables over all
    assignments of the free variables, which is all the bound can see.
    """
    S = space or formula_space(M, depth, use_delta=use_delta, truth_constants=truth_constants)
    grid = S.worlds[0].grid
    code = {v: i for i, v in enumerate(S.values)}
    extra = sorted({dist(M, a, b, d) for a in M.universe for b in M.universe} - set(code))
    values = sorted(set(S.values) | set(extra))
    remap = np.array([values.index(v) for v in S.values], dtype=np.int16)
    code = {v: i for i, v in enumerate(values)}
    Dm = np.array([[code[tuple_dist(M, p, q, d)] for q in grid] for p in grid], dtype=np.int16)
    rows = remap[S.segment(0)]
    viol = []
    slack = None
    step = max(1, (1 << 22) // max(1, Dm.size))
    for start in range(0, len(rows), step):
        r = rows[start:start + step]
        u, v = r[:, :, None], r[:, None, :]
        dm = np.where(u == v, 0, np.maximum(u, v))
        bad = dm > Dm[None]
        if bad.any():
            for k, i, j in zip(*np.nonzero(bad)):
                viol.append((S.formulas[start + k], grid[i], grid[j], values[dm[k, i, j]], values[Dm[i, j]]))
                if len(viol) >= 50:
                    break
        # least slack over pairs where φ actually separates the tuples
        sep = dm > 0
        if sep.any():
            combos = np.unique(np.broadcast_to(Dm[None], dm.shape)[sep].astype(np.int32) * 4096 + dm[sep])
            m = min(values[c // 4096] - values[c % 4096] for c in combos.tolist())
            slack = m if slack is None else min(slack, m)
    return BoundReport(depth, len(rows), len(grid) ** 2, viol, slack)


# ---------------------------------------------------------------------------
# quotient

@dataclass
class Quotient:
    structure: Structure
    class_of: dict[str, str]

    def classes(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {}
        for a, c in self.class_of.items():
            out.setdefault(c, []).append(a)
        return out


def quotient(M: Structure, d: str = D) -> Quotient:
    """Identify elements at distance 0; each class is named by its first member."""
    rep = validate_pseudo_ultrametric(M, d)
    if not rep:
        raise MetricError(f"not a pseudo-ultrametric: {rep}")
    class_of: dict[str, str] = {}
    for a in M.universe:
        class_of[a] = next(b for b in M.universe if dist(M, a, b, d) == 0)
    U = tuple(dict.fromkeys(class_of[a] for a in M.universe))
    preds = {}
    for p, table in M.preds.items():
        n = M.arity(p)
        new: dict[tuple, Fraction] = {}
        for xs in itertools.product(M.universe, repeat=n):
            key = tuple(class_of[x] for x in xs)
            if key in new and new[key] != table[xs]:
                raise MetricError(f"{p} is not well defined on classes at ({','.join(xs)})")
            new[key] = table[xs]
        preds[p] = new
    funcs = {}
    for f, table in M.funcs.items():
        n = M.func_arity(f)
        newf: dict[tuple, str] = {}
        for xs in itertools.product(M.universe, repeat=n):
            key = tuple(class_of[x] for x in xs)
            img = class_of[table[xs]]
            if key in newf and newf[key] != img:
                raise MetricError(f"{f} is not well defined on classes at ({','.join(xs)})")
            newf[key] = img
        funcs[f] = newf
    consts = {c: class_of[e] for c, e in M.consts.items()}
    return Quotient(Structure(U, preds, funcs, consts, M.V), class_of)


def is_ultrametric(M: Structure, d: str = D) -> bool:
    """Pseudo-ultrametric with distance 0 only on the diagonal."""
    if not validate_pseudo_ultrametric(M, d):
        return False
    return all(dist(M, a, b, d) != 0 for a, b in itertools.permutations(M.universe, 2))


def isomorphic(M: Structure, N: Structure) -> bool:
    """Brute-force isomorphism test for small structures."""
    if len(M.universe) != len(N.universe) or set(M.preds) != set(N.preds) or set(M.funcs) != set(N.funcs):
        return False
    for perm in itertools.permutations(N.universe):
        h = dict(zip(M.universe, perm))
        if any(h[M.consts[c]] != N.consts.get(c) for c in M.consts):
            continue
        if all(N.preds[p][tuple(h[x] for x in xs)] == v for p, t in M.preds.items() for xs, v in t.items()) and \
                all(N.funcs[f][tuple(h[x] for x in xs)] == h[y] for f, t in M.funcs.items() for xs, y in t.items()):
            return True
    return False


@dataclass
class InvarianceReport:
    tables: int
    mismatches: list[tuple[sx.Formula, tuple, Fraction, Fraction]]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def quotient_invariance(M: Structure, depth: int = 3, d: str = D, *, use_delta: bool = False) -> InvarianceReport:
    """φ(ā) in M equals φ([ā]) in M/d for every formula table up to ``depth``."""
    Q = quotient(M, d)
    S = formula_space(M, depth, worlds=[M, Q.structure], use_delta=use_delta)
    gm, gq = S.worlds[0].grid, S.worlds[1].grid
    qpos = {t: i for i, t in enumerate(gq)}
    proj = np.array([qpos[tuple(Q.class_of[x] for x in t)] for t in gm])
    a, b = S.segment(0), S.segment(1)[:, proj]
    bad = np.argwhere(a != b)
    out = [(S.formulas[k], gm[i], S.values[a[k, i]], S.values[b[k, i]]) for k, i in bad[:20]]
    return InvarianceReport(len(S.formulas), out)


# ---------------------------------------------------------------------------
# generator

DEFAULT_POOL = tuple(Fraction(x) for x in ("0", "1/4", "1/3", "1/2", "2/3", "3/4", "1"))


def random_ultrametric(rng: random.Random, universe: Sequence[str], heights: Sequence[Fraction],
                       zero_prob: float = 0.2) -> dict[tuple[str, str], Fraction]:
    """Distances read off a random dendrogram; some merges happen at height 0."""
    hs = sorted({Fraction(h) for h in heights if h > 0})
    d: dict[tuple[str, str], Fraction] = {(a, a): ZERO for a in universe}

    def split(items: list[str], hi: int) -> None:
        if len(items) < 2:
            return
        if hi < 0 or rng.random() < zero_prob:
            for a, b in itertools.permutations(items, 2):
                d[(a, b)] = ZERO
            return
        j = rng.randint(0, hi)
        h, nxt = hs[j], j - 1
        k = rng.randint(2, len(items))
        blocks = [[] for _ in range(k)]
        shuffled = list(items)
        rng.shuffle(shuffled)
        for i, a in enumerate(shuffled):
            blocks[i % k if i < k else rng.randrange(k)].append(a)
        for b1, b2 in itertools.permutations(blocks, 2):
            for a in b1:
                for b in b2:
                    d[(a, b)] = h
        for blk in blocks:
            split(blk, nxt)

    split(list(universe), len(hs) - 1)
    return d


def random_lipschitz_structure(rng: random.Random, size: int, preds: dict[str, int] | None = None,
                               funcs: dict[str, int] | None = None, consts: Sequence[str] = (),
                               pool: Sequence[Fraction] = DEFAULT_POOL, V: GoedelSet | None = None,
                               d: str = D) -> Structure:
    """A random structure whose every symbol is 1-Lipschitz for a random pseudo-ultrametric.

    Tables are filled greedily in random order.  A value is drawn among those
    consistent with what is already assigned; copying the value of the
    nearest assigned tuple is always consistent, so the draw never fails.
    """
    preds = dict(preds if preds is not None else {"R": 1})
    U = tuple(f"a{i}" for i in range(size))
    pool = sorted(set(pool))
    dt = random_ultrametric(rng, U, pool)
    M0 = Structure(U, {d: dt}, {}, {}, V or GoedelSet.full01())

    def fill(n: int, choices: list, ok) -> dict:
        table: dict[tuple, object] = {}
        tuples = list(itertools.product(U, repeat=n))
        rng.shuffle(tuples)
        for xs in tuples:
            if not table:
                table[xs] = rng.choice(choices)
                continue
            cands = [c for c in choices if all(ok(c, table[ys], tuple_dist(M0, xs, ys, d)) for ys in table)]
            near = min(table, key=lambda ys: tuple_dist(M0, xs, ys, d))
            cands.append(table[near])
            table[xs] = rng.choice(cands)
        return table

    ptabs = {d: dt}
    for p, n in preds.items():
        if p == d:
            continue
        ptabs[p] = fill(n, pool, lambda v, w, r: dmax(v, w) <= r)
    ftabs = {}
    for f, n in (funcs or {}).items():
        ftabs[f] = fill(n, list(U), lambda e, e2, r: dt[(e, e2)] <= r)
    ctab = {c: rng.choice(U) for c in consts}
    return Structure(U, ptabs, ftabs, ctab, V or GoedelSet.full01())

"""Formulas as value tables, enumerated up to semantic equality.

Checks such as the Lipschitz bound or the Łoś equality only depend on the
function a formula denotes, not on its syntax.  So instead of walking the
(astronomically many) formulas of a given depth we close a set of leaf tables
under the connectives and quantifiers one layer at a time, dropping duplicate
tables.  Every table of depth ≤ k is reached, and one representative formula
is kept for each so failures can still be reported syntactically.

Several structures ("worlds") can be carried side by side: a row is the
concatenation of the formula's table in each world, and quantifiers reduce
inside each world separately.  Values are coded as indices into one sorted
list, so comparisons on codes are comparisons on values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import syntax as sx
from .semantics import Structure, eval_term
from .values import ONE, ZERO

_CHUNK = 1 << 22


@dataclass
class _World:
    M: Structure
    offset: int
    grid: list[tuple[str, ...]]

    @property
    def width(self) -> int:
        return len(self.grid)


def leaf_atoms(preds: dict[str, int], variables: Sequence[str], funcs: dict[str, int] | None = None,
               consts: Sequence[str] = ()) -> list[sx.Formula]:
    """Atoms whose arguments are variables, constants or one function application."""
    terms: list[sx.Term] = [sx.Var(v) for v in variables] + [sx.Const(c) for c in consts]
    base = list(terms)
    for f, n in sorted((funcs or {}).items()):
        for args in itertools.product(base, repeat=n):
            terms.append(sx.Func(f, tuple(args)))
    out = []
    for p, n in sorted(preds.items()):
        for args in itertools.product(terms, repeat=n):
            out.append(sx.Atom(p, tuple(args)))
    return out


def signature_of(M: Structure) -> tuple[dict[str, int], dict[str, int], list[str]]:
    return ({p: M.arity(p) for p in M.preds}, {f: M.func_arity(f) for f in M.funcs}, sorted(M.consts))


class TableSpace:
    """Closure of leaf tables under ∧, →, optional Δ and ∀/∃ over ``variables``."""

    def __init__(self, worlds: Sequence[Structure], variables: Sequence[str],
                 leaves: Sequence[sx.Formula], truth_constants: Sequence = ()):
        self.variables = tuple(variables)
        self.worlds: list[_World] = []
        off = 0
        for M in worlds:
            grid = list(itertools.product(M.universe, repeat=len(self.variables)))
            self.worlds.append(_World(M, off, grid))
            off += len(grid)
        self.width = off
        leaves = list(leaves) + [sx.BOT] + [sx.truth(c) for c in truth_constants if Fraction(c) != ONE]
        values = {ZERO, ONE} | {Fraction(c) for c in truth_constants}
        raw = [self._raw(f) for f in leaves]
        for r in raw:
            values.update(r)
        self.values = sorted(values)
        self.code = {v: i for i, v in enumerate(self.values)}
        self.top = self.code[ONE]
        rows = np.array([[self.code[v] for v in r] for r in raw], dtype=np.int16).reshape(len(raw), self.width)
        self.rows = np.empty((0, self.width), dtype=np.int16)
        self.formulas: list[sx.Formula] = []
        self._mult = np.random.default_rng(0).integers(1, 2**63, size=self.width, dtype=np.uint64) | np.uint64(1)
        self._seen_h = np.empty(0, dtype=np.uint64)
        self._seen_i = np.empty(0, dtype=np.int64)
        self.layers: list[tuple[int, int]] = []
        self._add(rows, leaves)
        self.layers.append((0, len(self.formulas)))

    # -- leaves -----------------------------------------------------------
    def _raw(self, f: sx.Formula) -> list[Fraction]:
        out = []
        for w in self.worlds:
            for row in w.grid:
                env = dict(zip(self.variables, row))
                if isinstance(f, sx.Atom):
                    args = tuple(eval_term(w.M, a, env) for a in f.args)
                    out.append(w.M.preds[f.pred][args])
                elif isinstance(f, sx.Bot):
                    out.append(ONE)
                elif isinstance(f, sx.TruthConst):
                    out.append(f.value)
                else:
                    raise TypeError(f"leaf must be atomic: {sx.print_formula(f)}")
        return out

    def _hash(self, rows: np.ndarray) -> np.ndarray:
        return (rows.astype(np.uint64) * self._mult[: rows.shape[1]]).sum(axis=1, dtype=np.uint64)

    def _add(self, rows: np.ndarray, formulas) -> None:
        """Append the rows not seen before.  Hashes only shortlist; equality is exact."""
        if len(rows) == 0:
            return
        h = self._hash(rows)
        uh, first, inv = np.unique(h, return_index=True, return_inverse=True)
        if not np.array_equal(rows, rows[first[inv.ravel()]]):
            # a hash collision inside the batch: fall back to exact row uniqueness
            _, first = np.unique(rows, axis=0, return_index=True)
            uh = h[first]
        pos = np.searchsorted(self._seen_h, uh)
        pos_c = np.minimum(pos, max(len(self._seen_h) - 1, 0))
        hit = (pos < len(self._seen_h)) & (self._seen_h[pos_c] == uh) if len(self._seen_h) else np.zeros(len(uh), bool)
        fresh = []
        for k in np.flatnonzero(hit):
            if not np.array_equal(self.rows[self._seen_i[pos_c[k]]], rows[first[k]]):
                fresh.append(k)  # same hash, different table
        fresh = np.sort(np.concatenate([np.flatnonzero(~hit), np.array(fresh, dtype=np.int64)]))
        if len(fresh) == 0:
            return
        order = np.sort(first[fresh])
        start = len(self.formulas)
        self.rows = np.vstack([self.rows, rows[order]])
        self.formulas.extend(formulas(int(i)) if callable(formulas) else formulas[int(i)] for i in order)
        nh = h[order]
        allh = np.concatenate([self._seen_h, nh])
        alli = np.concatenate([self._seen_i, np.arange(start, start + len(order))])
        srt = np.argsort(allh, kind="stable")
        self._seen_h, self._seen_i = allh[srt], alli[srt]

    # -- operations -------------------------------------------------------
    def _quant(self, rows: np.ndarray, pos: int, forall: bool) -> np.ndarray:
        out = np.empty_like(rows)
        nv = len(self.variables)
        for w in self.worlds:
            n = len(w.M.universe)
            seg = rows[:, w.offset:w.offset + w.width].reshape((rows.shape[0],) + (n,) * nv)
            red = seg.max(axis=pos + 1, keepdims=True) if forall else seg.min(axis=pos + 1, keepdims=True)
            out[:, w.offset:w.offset + w.width] = np.broadcast_to(red, seg.shape).reshape(rows.shape[0], w.width)
        return out

    def grow(self, use_delta: bool = False, quantifiers: bool = True) -> int:
        """Add one layer; returns the number of new tables."""
        lo, hi = self.layers[-1]
        before = len(self.formulas)
        last = self.rows[lo:hi]
        last_f = self.formulas[lo:hi]
        if use_delta:
            d = np.where(last == 0, 0, self.top).astype(np.int16)
            self._add(d, lambda i: sx.Delta(last_f[i]))
        if quantifiers:
            for pos, v in enumerate(self.variables):
                for forall in (True, False):
                    q = self._quant(last, pos, forall)
                    ctor = sx.Forall if forall else sx.Exists
                    self._add(q, lambda i, v=v, ctor=ctor: ctor(v, last_f[i]))
        allr = self.rows[:hi]
        all_f = self.formulas[:hi]
        step = max(1, _CHUNK // max(1, hi * self.width))
        # pairs with at least one member from the last layer: (new, any) and (old, new)
        for A_lo, A_hi, B_lo, B_hi in ((lo, hi, 0, hi), (0, lo, lo, hi)):
            nb = B_hi - B_lo
            if nb == 0:
                continue
            y = allr[B_lo:B_hi][None, :, :]
            for start in range(A_lo, A_hi, step):
                stop = min(start + step, A_hi)
                x = allr[start:stop][:, None, :]

                def pick(k, start=start, nb=nb, B_lo=B_lo):
                    return all_f[start + k // nb], all_f[B_lo + k % nb]

                conj = np.maximum(x, y).reshape(-1, self.width)
                self._add(conj, lambda k, pick=pick: sx.And(*pick(k)))
                imp = np.where(x >= y, 0, y).astype(np.int16).reshape(-1, self.width)
                self._add(imp, lambda k, pick=pick: sx.Imp(*pick(k)))
        self.layers.append((hi, len(self.formulas)))
        return len(self.formulas) - before

    def close(self, depth: int, use_delta: bool = False, quantifiers: bool = True) -> "TableSpace":
        for _ in range(depth):
            if self.grow(use_delta, quantifiers) == 0:
                break
        return self

    def segment(self, world: int) -> np.ndarray:
        w = self.worlds[world]
        return self.rows[:, w.offset:w.offset + w.width]

    def value(self, c: int) -> Fraction:
        return self.values[c]

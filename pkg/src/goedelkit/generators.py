"""Seeded random and exhaustive generators for formulas, theories and structures."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Iterator, Sequence

from . import syntax as sx
from .semantics import Structure
from .values import ONE, ZERO, GoedelSet


def value_pool(V: GoedelSet, constants: Sequence = (), extra: int = 3) -> list[Fraction]:
    """0, 1, the constants, and a few members of V from every gap between them."""
    pts = sorted({Fraction(c) for c in constants} | {ZERO, ONE})
    pool = {p for p in pts if V.member(p)}
    for a, b in zip(pts, pts[1:]):
        k = int(min(extra, V.gap_capacity(a, b)))
        pool.update(V.pick_between(a, b, k))
    return sorted(pool)


def random_formula(rng: random.Random, atoms: Sequence[str], consts: Sequence = (),
                   size: int = 7, use_delta: bool = True) -> sx.Formula:
    """A random propositional formula with roughly ``size`` nodes."""
    if size <= 1:
        leaves: list[sx.Formula] = [sx.atom(a) for a in atoms]
        leaves += [sx.truth(c) for c in consts]
        leaves.append(sx.BOT)
        weights = [3] * len(atoms) + [1] * (len(consts) + 1)
        return rng.choices(leaves, weights)[0]
    ops = ["and", "imp", "imp"] + (["delta"] if use_delta else [])
    op = rng.choice(ops)
    if op == "delta":
        return sx.Delta(random_formula(rng, atoms, consts, size - 1, use_delta))
    left = rng.randint(1, max(1, size - 2))
    right = max(1, size - 1 - left)
    a = random_formula(rng, atoms, consts, left, use_delta)
    b = random_formula(rng, atoms, consts, right, use_delta)
    return sx.And(a, b) if op == "and" else sx.Imp(a, b)


def formulas_up_to_depth(leaves: Sequence[sx.Formula], depth: int, use_delta: bool = True,
                         unary: Sequence = (), binary: Sequence = ()) -> list[sx.Formula]:
    """All formulas built from ``leaves`` with nesting depth at most ``depth``.

    ``unary``/``binary`` add extra constructors (e.g. quantifiers as unary).
    """
    layers = [list(dict.fromkeys(leaves))]
    seen = set(layers[0])
    for _ in range(depth):
        prev = [f for layer in layers for f in layer]
        new = []

        def add(f):
            if f not in seen:
                seen.add(f)
                new.append(f)

        for f in prev:
            if use_delta:
                add(sx.Delta(f))
            for u in unary:
                add(u(f))
        for f, g in itertools.product(prev, repeat=2):
            add(sx.And(f, g))
            add(sx.Imp(f, g))
            for b in binary:
                add(b(f, g))
        layers.append(new)
    return [f for layer in layers for f in layer]


def enumerate_by_size(atoms: Sequence[str], consts: Sequence, max_size: int,
                      use_delta: bool = True) -> Iterator[sx.Formula]:
    """Every formula (up to syntactic identity) with at most ``max_size`` nodes."""
    by_size: dict[int, list[sx.Formula]] = {1: [sx.atom(a) for a in atoms] + [sx.truth(c) for c in consts] + [sx.BOT]}
    yield from by_size[1]
    for n in range(2, max_size + 1):
        cur = []
        if use_delta:
            cur += [sx.Delta(f) for f in by_size[n - 1]]
        for i in range(1, n - 1):
            for f in by_size[i]:
                for g in by_size[n - 1 - i]:
                    cur.append(sx.And(f, g))
                    cur.append(sx.Imp(f, g))
        by_size[n] = cur
        yield from cur


def random_theory(rng: random.Random, atoms: Sequence[str], consts: Sequence, n: int,
                  size: int = 5, use_delta: bool = False) -> list[sx.Formula]:
    return [random_formula(rng, atoms, consts, rng.randint(2, size), use_delta) for _ in range(n)]


def random_structure(rng: random.Random, preds: dict[str, int], size: int,
                     pool: Sequence[Fraction], funcs: dict[str, int] | None = None,
                     consts: Sequence[str] = (), V: GoedelSet | None = None,
                     prefix: str = "a") -> Structure:
    universe = tuple(f"{prefix}{i}" for i in range(size))
    ptabs = {}
    for p, n in preds.items():
        ptabs[p] = {t: rng.choice(pool) for t in itertools.product(universe, repeat=n)}
    ftabs = {}
    for f, n in (funcs or {}).items():
        ftabs[f] = {t: rng.choice(universe) for t in itertools.product(universe, repeat=n)}
    ctab = {c: rng.choice(universe) for c in consts}
    return Structure(universe, ptabs, ftabs, ctab, V or GoedelSet.full01())

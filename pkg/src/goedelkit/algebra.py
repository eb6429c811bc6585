"""Finite linear Gödel algebras with constants, the semantic Lindenbaum
algebra of a complete theory, dense completion, and embeddings into [0,1].

Elements of a :class:`GAlgebra` are the indices ``0..n-1`` of a chain; index 0
is the bottom (absolute truth) and ``n-1`` the top.  Join and meet are max and
min of indices.  The residuum defaults to the Gödel one derived from the
order but may be overridden entry by entry, which is how broken algebras are
built for negative tests.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import syntax as sx
from .decide import DEFAULT_ATOM_BOUND, ModelSpace, _vocabulary
from .values import ONE, ZERO, ConstantFamily, GoedelSet, delta as delta_v, fmt, limits_within_zero, resid as resid_v


class AlgebraError(ValueError):
    pass


@dataclass
class GAlgebra:
    names: tuple[str, ...]
    consts: dict[Fraction, int] = field(default_factory=dict)
    resid_override: dict[tuple[int, int], int] = field(default_factory=dict)
    has_delta: bool = False
    delta_override: dict[int, int] = field(default_factory=dict)
    infinitesimals: frozenset[int] = frozenset()

    def __post_init__(self):
        if len(self.names) < 2:
            raise AlgebraError("a Gödel algebra needs distinct 0 and 1")
        if len(set(self.names)) != len(self.names):
            raise AlgebraError("duplicate element names")
        self.consts = {Fraction(r): i for r, i in self.consts.items()}

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.names) - 1

    def join(self, a: int, b: int) -> int:
        return max(a, b)

    def meet(self, a: int, b: int) -> int:
        return min(a, b)

    def resid(self, a: int, b: int) -> int:
        got = self.resid_override.get((a, b))
        if got is not None:
            return got
        return 0 if a >= b else b

    def delta(self, a: int) -> int:
        if not self.has_delta:
            raise AlgebraError("this algebra has no delta")
        got = self.delta_override.get(a)
        if got is not None:
            return got
        return 0 if a == 0 else self.top

    def index(self, name: str) -> int:
        return self.names.index(name)

    def const_of(self, r) -> int:
        r = Fraction(r)
        if r == 0:
            return 0
        if r == 1:
            return self.top
        return self.consts[r]


# ---------------------------------------------------------------------------
# validation

@dataclass
class Violation:
    law: str
    witness: tuple

    def __str__(self) -> str:
        return f"{self.law}: {self.witness}"


def validate_galgebra(D: GAlgebra, limit: int | None = None) -> list[Violation]:
    """Exhaustive check of the Gödel-algebra laws; empty list means valid."""
    out: list[Violation] = []
    n = D.size
    nm = D.names
    rng = range(n)

    def add(law, *w):
        if limit is None or len(out) < limit:
            out.append(Violation(law, w))

    for a in rng:
        for b in rng:
            r = D.resid(a, b)
            if not 0 <= r < n:
                add("resid closed", nm[a], nm[b])
    if out:
        return out
    for a in rng:
        for b in rng:
            for c in rng:
                if (D.join(a, b) >= c) != (a >= D.resid(b, c)):
                    add("(2) adjointness", nm[a], nm[b], nm[c])
    for a in rng:
        for b in rng:
            if D.meet(D.resid(a, b), D.resid(b, a)) != 0:
                add("(3) prelinearity", nm[a], nm[b])
    items = sorted(D.consts.items())
    for r, i in items:
        if not 0 <= i < n:
            add("constant in range", fmt(r))
            continue
        if 0 < r < 1 and not 0 < i < D.top:
            add("(7) 0 < r < 1", fmt(r), nm[i])
        if r == 0 and i != 0:
            add("(7) 0 constant is bottom", nm[i])
        if r == 1 and i != D.top:
            add("(7) 1 constant is top", nm[i])
    inner = [(r, i) for r, i in items if 0 < r < 1]
    for r, i in inner:
        for s, j in inner:
            if max(r, s) in D.consts and D.join(i, j) != D.consts[max(r, s)]:
                add("(4) r ⊕ s = max{r,s}", fmt(r), fmt(s))
            if (D.resid(i, j) == 0) != (r >= s):
                add("(5) r ⊸ s = 0 iff r ≥ s", fmt(r), fmt(s))
            if (D.resid(i, j) == j) != (r < s):
                add("(6) r ⊸ s = s iff r < s", fmt(r), fmt(s))
    if D.has_delta:
        if D.delta(0) != 0:
            add("(8) δ(0) = 0", nm[D.delta(0)])
        for a in range(1, n):
            if D.delta(a) != D.top:
                add("(9) δ(a) = 1 for a ≠ 0", nm[a])
    return out


# ---------------------------------------------------------------------------
# text format

def parse_algebra(text: str) -> GAlgebra:
    """``chain e0 < e1 < ...``, ``const 1/3 = e2``, ``resid a b = c``, ``delta``,
    ``delta a = b``, ``infinitesimal e1``; ``%`` or ``#`` start comments."""
    names: list[str] = []
    consts: dict[Fraction, str] = {}
    res: dict[tuple[str, str], str] = {}
    dl: dict[str, str] = {}
    has_delta = False
    inf: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%", 1)[0].split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head, _, rest = line.partition(" ")
            if head == "chain":
                names = [t.strip() for t in rest.split("<")]
                if any(not t for t in names):
                    raise ValueError("empty element name")
            elif head == "const":
                r, _, e = rest.partition("=")
                consts[Fraction(r.strip())] = e.strip()
            elif head == "resid":
                lhs, _, e = rest.partition("=")
                a, b = lhs.split()
                res[(a, b)] = e.strip()
            elif head == "delta":
                has_delta = True
                if rest.strip():
                    a, _, b = rest.partition("=")
                    dl[a.strip()] = b.strip()
            elif head == "infinitesimal":
                inf.extend(rest.split())
            else:
                raise ValueError(f"unrecognised line {line!r}")
        except ValueError as exc:
            raise sx.SyntaxError_(str(exc), None, lineno) from None
    if not names:
        raise sx.SyntaxError_("missing chain line")
    idx = {n: i for i, n in enumerate(names)}

    def get(n):
        if n not in idx:
            raise sx.SyntaxError_(f"unknown element {n!r}")
        return idx[n]

    return GAlgebra(
        tuple(names),
        {r: get(e) for r, e in consts.items()},
        {(get(a), get(b)): get(c) for (a, b), c in res.items()},
        has_delta,
        {get(a): get(b) for a, b in dl.items()},
        frozenset(get(e) for e in inf),
    )


def format_algebra(D: GAlgebra) -> str:
    lines = ["chain " + " < ".join(D.names)]
    for r, i in sorted(D.consts.items()):
        lines.append(f"const {fmt(r)} = {D.names[i]}")
    for (a, b), c in sorted(D.resid_override.items()):
        lines.append(f"resid {D.names[a]} {D.names[b]} = {D.names[c]}")
    if D.has_delta:
        lines.append("delta")
    for e in sorted(D.infinitesimals):
        lines.append(f"infinitesimal {D.names[e]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# semantic Lindenbaum algebra

@dataclass
class Lindenbaum:
    algebra: GAlgebra
    class_of: dict[sx.Formula, int]
    classes: list[list[sx.Formula]]
    relation: str = "semantic Lindenbaum (mutual entailment, decided)"

    def describe(self) -> str:
        lines = [f"{self.relation}: {len(self.classes)} classes, bottom first"]
        for i, cls in enumerate(self.classes):
            members = ", ".join(sorted(sx.print_formula(f) for f in cls))
            lines.append(f"  {self.algebra.names[i]}: {{{members}}}")
        return "\n".join(lines)


class NotComplete(AlgebraError):
    pass


def lindenbaum(T: Sequence[sx.Formula], S: Iterable[sx.Formula], V: GoedelSet | None = None,
               A: ConstantFamily | None = None, bound: int = DEFAULT_ATOM_BOUND,
               space: ModelSpace | None = None) -> Lindenbaum:
    """Quotient of S ∪ {0̄, ⊥} by mutual entailment modulo T, ordered by entailment.

    ``[φ] ≤ [ψ]`` iff ``T ⊨ ψ → φ``; T must be complete over S (every pair
    comparable) and satisfiable.
    """
    V = V or GoedelSet.full01()
    T = list(T)
    S = list(dict.fromkeys(list(S) + [sx.TruthConst(ZERO), sx.BOT]))
    if space is None:
        atoms, consts = _vocabulary(T + S, A)
        space = ModelSpace(atoms, consts, V, bound)
    mods = space.models(T)
    if not mods:
        raise AlgebraError("T is unsatisfiable; its Lindenbaum algebra is trivial")
    vec = {f: tuple(space.vector(f)[mods].tolist()) for f in S}
    # complete over S means the pointwise order on value vectors is total
    distinct = sorted(set(vec.values()))
    for u, w in zip(distinct, distinct[1:]):
        if not all(x <= y for x, y in zip(u, w)):
            f = next(g for g in S if vec[g] == u)
            g = next(g for g in S if vec[g] == w)
            raise NotComplete(
                f"T decides neither {sx.print_formula(f)} -> {sx.print_formula(g)} nor the converse")
    rank = {v: i for i, v in enumerate(distinct)}
    class_of = {f: rank[vec[f]] for f in S}
    classes = [[f for f in S if class_of[f] == i] for i in range(len(distinct))]
    names = tuple(f"c{i}" for i in range(len(distinct)))
    consts = {}
    has_delta = False
    for f in S:
        if isinstance(f, sx.TruthConst) and 0 < f.value < 1:
            consts[f.value] = class_of[f]
        if sx.has_delta(f):
            has_delta = True
    D = GAlgebra(names, consts, has_delta=has_delta)
    # operations are induced by the order; check the classes present agree
    for f in S:
        if isinstance(f, sx.And) and f.left in class_of and f.right in class_of:
            if class_of[f] != D.join(class_of[f.left], class_of[f.right]):
                raise AlgebraError(f"∧ not induced on {sx.print_formula(f)}")
        if isinstance(f, sx.Imp) and f.left in class_of and f.right in class_of:
            if class_of[f] != D.resid(class_of[f.left], class_of[f.right]):
                raise AlgebraError(f"→ not induced on {sx.print_formula(f)}")
        if isinstance(f, sx.Delta) and f.body in class_of:
            if class_of[f] != D.delta(class_of[f.body]):
                raise AlgebraError(f"Δ not induced on {sx.print_formula(f)}")
    return Lindenbaum(D, class_of, classes)


# ---------------------------------------------------------------------------
# dense completion

@dataclass(frozen=True)
class StreamedChain:
    """A countable chain given by its order type.

    ``omega``: e0 < e1 < ...;  ``omega+1``: e0 < e1 < ... < top;
    ``1+reverse-omega``: bottom < ... < e2 < e1 < e0.
    """

    kind: str

    def __post_init__(self):
        if self.kind not in ("omega", "omega+1", "1+reverse-omega"):
            raise AlgebraError(f"unsupported order type {self.kind!r}")

    def successor_free(self) -> list[str]:
        """Non-maximal elements without an immediate successor."""
        return ["bottom"] if self.kind == "1+reverse-omega" else []

    def maximal(self) -> str | None:
        return {"omega": None, "omega+1": "top", "1+reverse-omega": "e0"}[self.kind]

    def elements(self, n: int) -> Iterator[str]:
        if self.kind == "omega":
            yield from (f"e{i}" for i in range(n))
        elif self.kind == "omega+1":
            yield from (f"e{i}" for i in range(n - 1))
            yield "top"
        else:
            yield "bottom"
            yield from (f"e{i}" for i in reversed(range(n - 1)))


@dataclass
class DenseCompletion:
    """D × {0} plus a rational block {u} × ((0,1) ∩ Q) after each successor-free u."""

    base: GAlgebra | StreamedChain
    blocks: tuple[str, ...]

    def embed(self, u: str) -> tuple[str, Fraction]:
        return (u, ZERO)

    def constant(self, r) -> tuple[str, Fraction]:
        if not isinstance(self.base, GAlgebra):
            raise AlgebraError("streamed chains carry no constants")
        return (self.base.names[self.base.const_of(r)], ZERO)

    def elements(self, n: int = 0) -> list[tuple[str, Fraction]]:
        """All elements for a finite base; a prefix (with sample block points) otherwise."""
        if isinstance(self.base, GAlgebra):
            return [(u, ZERO) for u in self.base.names]
        out = []
        for u in self.base.elements(n):
            out.append((u, ZERO))
            if u in self.blocks:
                out.extend((u, Fraction(i, 4)) for i in (1, 2, 3))
        return out

    def is_isomorphic_copy(self) -> bool:
        return not self.blocks


def dense_completion(D: GAlgebra | StreamedChain) -> DenseCompletion:
    if isinstance(D, GAlgebra):
        # in a finite chain every non-maximal element has a successor
        return DenseCompletion(D, ())
    return DenseCompletion(D, tuple(D.successor_free()))


# ---------------------------------------------------------------------------
# embedding into [0,1]

@dataclass
class Embedding:
    algebra: GAlgebra
    values: tuple[Fraction, ...]
    case: str
    norms: dict[int, Fraction] | None = None
    injective: bool = True
    notes: list[str] = field(default_factory=list)

    def __call__(self, a: int) -> Fraction:
        return self.values[a]

    def describe(self) -> str:
        lines = [f"embedding ({self.case}); injective: {'yes' if self.injective else 'no'}"]
        for i, name in enumerate(self.algebra.names):
            extra = f"   ‖·‖ = {fmt(self.norms[i])}" if self.norms is not None else ""
            lines.append(f"  {name} ↦ {fmt(self.values[i])}{extra}")
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)


def _check_constants(D: GAlgebra, A: ConstantFamily) -> None:
    bad = [r for r in D.consts if 0 < r < 1 and not A.member(r)]
    if bad:
        raise AlgebraError(f"constants {[fmt(r) for r in sorted(bad)]} are not in A")


def norm(D: GAlgebra, u: int) -> Fraction:
    """‖u‖: least constant value r (including 1) with u ≤ rᴰ; 0 for infinitesimals and 0ᴰ."""
    if u == 0 or u in D.infinitesimals:
        return ZERO
    best = ONE
    for r, i in D.consts.items():
        if u <= i and r < best:
            best = r
    return best


def embed(D: GAlgebra, A: ConstantFamily, V: GoedelSet | None = None) -> Embedding:
    V = V or GoedelSet.full01()
    _check_constants(D, A)
    if not limits_within_zero(A):
        raise AlgebraError("A has a limit point other than 0; no embedding is guaranteed")
    if A.is_finite:
        return _embed_finite(D, V)
    return _embed_norm(D, A, V)


def _spread(a: Fraction, b: Fraction, k: int, V: GoedelSet) -> list[Fraction]:
    """k ascending points strictly inside (a, b)."""
    if V.kind == "full01":
        return [a + (b - a) * i / (k + 1) for i in range(1, k + 1)]
    return V.pick_between(a, b, k)


def _embed_finite(D: GAlgebra, V: GoedelSet) -> Embedding:
    if D.infinitesimals:
        raise AlgebraError("infinitesimals need a constant family accumulating at 0")
    anchors = {0: ZERO, D.top: ONE}
    for r, i in D.consts.items():
        anchors[i] = r
    vals: list[Fraction | None] = [None] * D.size
    keys = sorted(anchors)
    for i in keys:
        vals[i] = anchors[i]
    for lo, hi in zip(keys, keys[1:]):
        free = hi - lo - 1
        for j, x in enumerate(_spread(anchors[lo], anchors[hi], free, V), 1):
            vals[lo + j] = x
    return Embedding(D, tuple(vals), "A finite: equal subdivision between constants")


def _embed_norm(D: GAlgebra, A: ConstantFamily, V: GoedelSet) -> Embedding:
    low = min(D.consts.values(), default=D.top)
    if any(u >= low for u in D.infinitesimals):
        raise AlgebraError("infinitesimals must lie below every constant")
    norms = {u: norm(D, u) for u in range(D.size)}
    vals: list[Fraction | None] = [None] * D.size
    classes: dict[Fraction, list[int]] = {}
    for u, r in norms.items():
        classes.setdefault(r, []).append(u)
    notes = []
    injective = True
    for r, members in sorted(classes.items()):
        members.sort()
        if r == 0:
            for u in members:
                vals[u] = ZERO
            if len(members) > 1:
                injective = False
                notes.append(f"{len(members)} elements of norm 0 collapse to 0")
            continue
        lo = A.predecessor(r) if r < 1 else (A.maximum() or ZERO)
        top = members[-1]
        if r < 1 and D.consts.get(r) != top:
            raise AlgebraError(f"class of norm {fmt(r)} does not end at its constant")
        # right endpoint, then dyadic steps towards lo: r, lo + (r-lo)/2, lo + (r-lo)/4, ...
        if V.kind == "full01":
            for j, u in enumerate(reversed(members)):
                vals[u] = lo + (r - lo) / 2 ** j if j else r
        else:
            inner = V.pick_between(lo, r, len(members) - 1)
            for u, x in zip(members, inner + [r]):
                vals[u] = x
        notes.append(f"norm {fmt(r)} class → ({fmt(lo)}, {fmt(r)}]")
    return Embedding(D, tuple(vals), "A′ = {0}: norm partition", norms, injective, notes)


@dataclass
class TransferReport:
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_embedding(g: Embedding) -> TransferReport:
    """Exhaustive: order, constants, join/meet, residuum and δ transfer."""
    D = g.algebra
    v = g.values
    bad = []
    if v[0] != 0 or v[D.top] != 1:
        bad.append("bounds not fixed")
    for r, i in D.consts.items():
        if v[i] != r:
            bad.append(f"constant {fmt(r)} ↦ {fmt(v[i])}")
    n = D.size
    for a in range(n):
        for b in range(n):
            if g.injective:
                if (a <= b) != (v[a] <= v[b]):
                    bad.append(f"order {D.names[a]},{D.names[b]}")
            elif a <= b and not v[a] <= v[b]:
                bad.append(f"monotone {D.names[a]},{D.names[b]}")
            if v[D.join(a, b)] != max(v[a], v[b]) or v[D.meet(a, b)] != min(v[a], v[b]):
                bad.append(f"lattice {D.names[a]},{D.names[b]}")
            if g.injective and v[D.resid(a, b)] != resid_v(v[a], v[b]):
                bad.append(f"residuum {D.names[a]},{D.names[b]}")
        if D.has_delta and g.injective and v[D.delta(a)] != delta_v(v[a]):
            bad.append(f"delta {D.names[a]}")
    return TransferReport(bad)


# ---------------------------------------------------------------------------
# random algebras

def random_galgebra(rng: random.Random, A: ConstantFamily, max_size: int = 20,
                    with_delta: bool = False, pool: int = 12) -> GAlgebra:
    """A random valid chain whose constants are an increasing sample of A."""
    n = rng.randint(2, max_size)
    cands = list(A.members(pool)) if A.kind != "dense-rationals" else []
    cands = sorted(set(cands))
    k = rng.randint(0, min(len(cands), n - 2))
    chosen = sorted(rng.sample(cands, k))
    slots = sorted(rng.sample(range(1, n - 1), k))
    names = tuple(f"u{i}" for i in range(n))
    return GAlgebra(names, dict(zip(chosen, slots)), has_delta=with_delta)

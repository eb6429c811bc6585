"""D-limits, ultraproducts over finite index sets, and the Łoś equality check.

On a Gödel set whose only limit point is 0 every positive value is isolated
for d_max, so a family has a d_max-limit iff it is eventually constant or
tends to 0.  Those are the only families a Fréchet-extending ultrafilter is
asked about here, which makes its limit independent of the ultrafilter.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from . import syntax as sx
from .semantics import Structure
from .tables import TableSpace, leaf_atoms, signature_of
from .values import ONE, ZERO, ClosedForm, GoedelSet, delta, fmt, resid, val

SEP = "|"


class UltraError(ValueError):
    pass


@dataclass(frozen=True)
class Principal:
    """The principal ultrafilter at index ``j`` (1-based) of a finite index set."""

    j: int

    def __post_init__(self):
        if self.j < 1:
            raise UltraError("indices start at 1")

    def __str__(self) -> str:
        return f"principal({self.j})"


@dataclass(frozen=True)
class FrechetExtension:
    """Any ultrafilter on ℕ containing the cofinite sets."""

    def __str__(self) -> str:
        return "frechet"


Ultrafilter = Union[Principal, FrechetExtension]


@dataclass(frozen=True)
class EventuallyConstant:
    """``prefix[0], prefix[1], ...`` then ``value`` forever (indices from 1)."""

    prefix: tuple[Fraction, ...]
    value: Fraction

    def __call__(self, n: int) -> Fraction:
        return self.prefix[n - 1] if n <= len(self.prefix) else self.value

    def __str__(self) -> str:
        head = ", ".join(fmt(x) for x in self.prefix)
        return f"({head + ', ' if head else ''}{fmt(self.value)}, ...)"


SymbolicFamily = Union[EventuallyConstant, ClosedForm]


def compact(V: GoedelSet) -> bool:
    """(V, d_max) is compact iff V has no limit point other than 0."""
    lp = V.limit_points()
    return isinstance(lp, frozenset) and lp <= {ZERO}


def classify(fam: SymbolicFamily) -> str:
    if isinstance(fam, EventuallyConstant) or (isinstance(fam, ClosedForm) and fam.constant):
        return "eventually constant"
    if isinstance(fam, ClosedForm):
        return "convergent"
    raise UltraError(f"cannot classify family {fam!r}")


def dlimit(fam, U: Ultrafilter, V: GoedelSet | None = None, *, check_members: int = 30) -> Fraction:
    """The D-limit of ``fam`` in (V, d_max).

    Principal(j) needs a finite sequence and returns its j-th entry.
    FrechetExtension needs a symbolic family and a compact V.
    """
    V = V or GoedelSet.full01()
    if isinstance(U, Principal):
        if isinstance(fam, (EventuallyConstant, ClosedForm)):
            return Fraction(fam(U.j))
        fam = list(fam)
        if U.j > len(fam):
            raise UltraError(f"index {U.j} outside the index set 1..{len(fam)}")
        return Fraction(fam[U.j - 1])
    if not compact(V):
        raise UltraError(f"{V} is not compact under d_max")
    if not isinstance(fam, (EventuallyConstant, ClosedForm)):
        raise UltraError("a Fréchet limit needs a symbolic family")
    for n in range(1, check_members + 1):
        if not V.member(fam(n)):
            raise UltraError(f"member {n} of the family ({fmt(fam(n))}) is not in {V}")
    kind = classify(fam)
    if kind == "eventually constant":
        return fam.value if isinstance(fam, EventuallyConstant) else fam(1)
    if fam.limit != 0:
        # positive points are d_max-isolated; a non-constant tail cannot reach them
        raise UltraError(f"family tends to {fmt(fam.limit)} > 0 and has no d_max-limit")
    return ZERO


def _family_from_text(text: str):
    from .values import parse_closed_form
    t = text.strip()
    if t.startswith("(") and "..." in t:
        items = [x.strip() for x in t.strip("()").split(",") if x.strip() and x.strip() != "..."]
        vals = [val(x) for x in items]
        return EventuallyConstant(tuple(vals[:-1]), vals[-1])
    if "n" in t:
        return parse_closed_form(t)
    return [val(x) for x in t.split(",")]


def parse_family(text: str):
    """``1/2,1/3,1/4`` (finite), ``(1/2, 1/3, 0, ...)`` (eventually constant) or ``1/n``."""
    return _family_from_text(text)


def parse_ultrafilter(text: str) -> Ultrafilter:
    t = text.strip().lower()
    if t in ("frechet", "fréchet"):
        return FrechetExtension()
    if t.startswith("principal"):
        return Principal(int(t[len("principal"):].strip("() ")))
    return Principal(int(t))


# ---------------------------------------------------------------------------
# ultraproducts

def _check_signature(structures: Sequence[Structure]) -> None:
    if not structures:
        raise UltraError("need at least one structure")
    sig = signature_of(structures[0])
    for i, M in enumerate(structures[1:], 2):
        if signature_of(M) != sig:
            raise UltraError(f"structure {i} has a different signature")


def ultraproduct(structures: Sequence[Structure], U: Principal) -> Structure:
    """Product universe, predicates by D-limit, functions and constants componentwise.

    Elements are named by joining component names with ``|``.
    """
    if not isinstance(U, Principal):
        raise UltraError("ultraproducts are built for principal ultrafilters only")
    _check_signature(structures)
    if U.j > len(structures):
        raise UltraError(f"index {U.j} outside 1..{len(structures)}")
    for M in structures:
        if any(SEP in e for e in M.universe):
            raise UltraError(f"element names may not contain {SEP!r}")
    comps = list(itertools.product(*(M.universe for M in structures)))
    name = {c: SEP.join(c) for c in comps}
    M0 = structures[0]
    preds = {}
    for p in M0.preds:
        n = M0.arity(p)
        table = {}
        for xs in itertools.product(comps, repeat=n):
            fam = [M.preds[p][tuple(x[i] for x in xs)] for i, M in enumerate(structures)]
            table[tuple(name[x] for x in xs)] = dlimit(fam, U)
        preds[p] = table
    funcs = {}
    for f in M0.funcs:
        n = M0.func_arity(f)
        table = {}
        for xs in itertools.product(comps, repeat=n):
            img = tuple(M.funcs[f][tuple(x[i] for x in xs)] for i, M in enumerate(structures))
            table[tuple(name[x] for x in xs)] = name[img]
        funcs[f] = table
    consts = {c: name[tuple(M.consts[c] for M in structures)] for c in M0.consts}
    return Structure(tuple(name[c] for c in comps), preds, funcs, consts, M0.V)


def components(element: str) -> tuple[str, ...]:
    return tuple(element.split(SEP))


@dataclass
class LosReport:
    depth: int
    tables: int
    tuples: int
    mismatches: list[tuple[sx.Formula, tuple, Fraction, Fraction]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def __str__(self) -> str:
        lines = [f"depth {self.depth}: {self.tables} distinct formula tables over {self.tuples} "
                 f"product tuples; mismatches {len(self.mismatches)}"]
        for f, t, got, want in self.mismatches[:10]:
            lines.append(f"  {sx.print_formula(f)} at ({', '.join(t)}): product {fmt(got)}, limit {fmt(want)}")
        return "\n".join(lines)


def los_check(structures: Sequence[Structure], U: Principal | Sequence[Principal], depth: int = 2, *,
              product: Structure | None = None, use_delta: bool = True,
              truth_constants: Sequence = ()) -> LosReport:
    """φ in the ultraproduct equals the D-limit of the componentwise values.

    Formulas are enumerated up to equality of their joint tables across the
    factors and the products.  Several principal ultrafilters may be given;
    they share one enumeration.  ``product`` replaces the computed
    ultraproduct (single ultrafilter only), which lets a test feed in a
    corrupted table.
    """
    _check_signature(structures)
    Us = [U] if isinstance(U, Principal) else list(U)
    if product is not None and len(Us) != 1:
        raise UltraError("an explicit product needs exactly one ultrafilter")
    prods = [product] if product is not None else [ultraproduct(structures, u) for u in Us]
    preds, funcs, consts = signature_of(structures[0])
    nv = max([2] + list(preds.values()) + list(funcs.values()))
    vs = tuple("xyzuvw"[:nv])
    k = len(structures)
    S = TableSpace(list(structures) + prods, vs, leaf_atoms(preds, vs, funcs, consts), truth_constants)
    S.close(depth, use_delta)
    pw = S.worlds[k]
    fam = []
    for i, w in enumerate(S.worlds[:k]):
        pos = {t: n for n, t in enumerate(w.grid)}
        idx = np.array([pos[tuple(components(e)[i] for e in t)] for t in pw.grid])
        fam.append(S.segment(i)[:, idx])
    mism = []
    for n, u in enumerate(Us):
        got, want = S.segment(k + n), fam[u.j - 1]
        bad = np.argwhere(got != want)
        mism += [(S.formulas[r], pw.grid[c], S.values[got[r, c]], S.values[want[r, c]]) for r, c in bad[:50]]
    return LosReport(depth, len(S.formulas), len(pw.grid), mism)


def corrupt(P: Structure, pred: str | None = None) -> Structure:
    """A copy of P with one predicate entry flipped between 0 and 1 (test fixture)."""
    pred = pred or sorted(P.preds)[0]
    table = dict(P.preds[pred])
    key = sorted(table)[0]
    table[key] = ONE if table[key] != ONE else ZERO
    return P.with_preds(**{pred: table})


# ---------------------------------------------------------------------------
# connective continuity along symbolic families

_FAR = 10 ** 9


@dataclass
class ContinuityViolation:
    op: str
    x: SymbolicFamily
    y: SymbolicFamily | None
    limit_of_op: Fraction
    op_of_limits: Fraction

    def __str__(self) -> str:
        args = str(self.x) if self.y is None else f"{self.x}, {self.y}"
        return (f"{self.op}({args}): limit of values {fmt(self.limit_of_op)} "
                f"≠ {self.op} of limits {fmt(self.op_of_limits)}")


def _tail_limit(fams: Sequence[SymbolicFamily], V: GoedelSet, op_tail: Callable[[int], Fraction]) -> Fraction:
    """Limit of op(x_n, y_n): the tail agrees with 0, 1, x_n or y_n from some point on."""
    candidates: list = [EventuallyConstant((), ZERO), EventuallyConstant((), ONE)] + list(fams)
    for c in candidates:
        if all(op_tail(n) == c(n) for n in (_FAR, _FAR + 1, _FAR + 7)):
            return dlimit(c, FrechetExtension(), V)
    raise UltraError("could not identify the tail of the combined family")


OPS2 = {"max": max, "min": min, "resid": resid}


def continuity_check(families: Sequence[SymbolicFamily], V: GoedelSet) -> list[ContinuityViolation]:
    """Compare lim op(x_n, y_n) with op(lim x_n, lim y_n) for max, min, resid and Δ.

    Comparisons between two families c + s/(n+k) change sign finitely often,
    so far enough out op picks a fixed branch; the tail is identified by
    sampling at n around 10^9.
    """
    lims = [dlimit(f, FrechetExtension(), V) for f in families]
    out = []
    for (x, lx), (y, ly) in itertools.product(list(zip(families, lims)), repeat=2):
        for name, op in OPS2.items():
            lhs = _tail_limit([x, y], V, lambda n: op(x(n), y(n)))
            rhs = op(lx, ly)
            if lhs != rhs:
                out.append(ContinuityViolation(name, x, y, lhs, rhs))
    for x, lx in zip(families, lims):
        lhs = _tail_limit([x], V, lambda n: delta(x(n)))
        if lhs != delta(lx):
            out.append(ContinuityViolation("Δ", x, None, lhs, delta(lx)))
    return out

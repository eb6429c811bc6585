"""Exact truth values for Goedel logics with the reverse reading (0 = true, 1 = false).

Values are :class:`fractions.Fraction` instances in ``[0, 1]``.  The module also
provides descriptors for truth-value sets (``GoedelSet``) and for families of
truth constants (``ConstantFamily``) with decidable membership and gap queries.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

Value = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
INF = math.inf


class ValueError01(ValueError):
    """A number outside ``[0, 1]`` or a malformed value literal."""


def val(x) -> Fraction:
    """Coerce ``x`` (int, Fraction, or a string like ``"1/3"``) to a truth value."""
    if isinstance(x, str):
        try:
            v = Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError01(f"bad value literal {x!r}") from exc
    elif isinstance(x, float):
        raise ValueError01("floating point values are not accepted; use Fraction or 'p/q'")
    else:
        v = Fraction(x)
    if not 0 <= v <= 1:
        raise ValueError01(f"{v} is outside [0,1]")
    return v


def fmt(v: Fraction) -> str:
    return str(v)


# ---------------------------------------------------------------------------
# connectives

def resid(x: Fraction, y: Fraction) -> Fraction:
    """Goedel residuum in the reverse reading: 0 if x >= y, otherwise y."""
    return ZERO if x >= y else y


def dmax(x: Fraction, y: Fraction) -> Fraction:
    return ZERO if x == y else max(x, y)


def neg(x: Fraction) -> Fraction:
    return resid(x, ONE)


def strongimp(x: Fraction, y: Fraction) -> Fraction:
    # (x => y) := (y -> x) -> y
    return resid(resid(y, x), y)


def delta(x: Fraction) -> Fraction:
    return ZERO if x == 0 else ONE


_CONNECTIVES = {
    "and": (2, max),
    "or": (2, min),
    "to": (2, resid),
    "neg": (1, neg),
    "strongimp": (2, strongimp),
    "equiv": (2, dmax),
    "delta": (1, delta),
}


def connective(op: str, *args: Fraction) -> Fraction:
    try:
        arity, fn = _CONNECTIVES[op]
    except KeyError:
        raise ValueError(f"unknown connective {op!r}") from None
    if len(args) != arity:
        raise TypeError(f"{op} takes {arity} argument(s), got {len(args)}")
    return fn(*args)


# ---------------------------------------------------------------------------
# closed forms c + s/(n+k), n = 1, 2, ...

@dataclass(frozen=True)
class ClosedForm:
    """The sequence ``n -> c + s/(n+k)`` for integers ``n >= 1``."""

    c: Fraction
    s: Fraction
    k: Fraction = ZERO

    def __post_init__(self):
        if self.k <= -1:
            raise ValueError("closed form needs k > -1 so that n+k > 0 for n >= 1")

    def __call__(self, n: int) -> Fraction:
        if n < 1:
            raise ValueError("closed forms are indexed from n = 1")
        return self.c + self.s / (n + self.k)

    @property
    def limit(self) -> Fraction:
        return self.c

    @property
    def constant(self) -> bool:
        return self.s == 0

    @property
    def decreasing(self) -> bool:
        return self.s > 0

    def index_of(self, x: Fraction) -> int | None:
        """Return ``n`` with ``self(n) == x`` or None."""
        if self.s == 0:
            return 1 if x == self.c else None
        if x == self.c:
            return None
        n = self.s / (x - self.c) - self.k
        if n.denominator == 1 and n >= 1:
            return int(n)
        return None

    def first_index_beyond(self, eps: Fraction) -> int:
        """Smallest n with |self(m) - c| < eps for all m >= n (eps > 0)."""
        if self.s == 0:
            return 1
        # |s|/(n+k) < eps  <=>  n > |s|/eps - k
        bound = abs(self.s) / eps - self.k
        return max(1, math.floor(bound) + 1)

    def inf(self) -> tuple[Fraction, bool]:
        """Infimum over n >= 1 and whether it is attained."""
        if self.s == 0:
            return self.c, True
        if self.s > 0:
            return self.c, False
        return self(1), True

    def sup(self) -> tuple[Fraction, bool]:
        if self.s == 0:
            return self.c, True
        if self.s > 0:
            return self(1), True
        return self.c, False

    def __str__(self) -> str:
        if self.k == 0:
            den = "n"
        elif self.k > 0:
            den = f"(n+{self.k})"
        else:
            den = f"(n-{-self.k})"
        if self.s == 0:
            return str(self.c)
        mag = abs(self.s)
        if self.c == 0 and self.s > 0:
            return f"{mag}/{den}" if mag.denominator == 1 else f"({mag})/{den}"
        sign = "+" if self.s > 0 else "-"
        smag = str(mag) if mag.denominator == 1 else f"({mag})"
        return f"{self.c}{sign}{smag}/{den}"


_NUM = r"\d+(?:/\d+)?"
_CF_RE = re.compile(
    rf"^(?:(?P<c>{_NUM})(?P<op>[+-]))?(?P<neg>-)?(?:\((?P<sp>{_NUM})\)|(?P<s>\d+))"
    rf"/(?:\(n(?:(?P<kop>[+-])(?P<k>{_NUM}))?\)|(?P<bare>n))$"
)


def parse_closed_form(text: str) -> ClosedForm:
    """Parse ``c+s/(n+k)`` style expressions, e.g. ``1/2-1/(n+2)`` or ``1/n``."""
    t = re.sub(r"\s+", "", text)
    if t.startswith("(") and t.endswith(")") and _balanced(t[1:-1]):
        t = t[1:-1]
    m = _CF_RE.match(t)
    if not m:
        try:
            return ClosedForm(Fraction(t), ZERO)
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"cannot parse closed form {text!r}") from None
    c = Fraction(m["c"]) if m["c"] else ZERO
    s = Fraction(m["sp"] or m["s"])
    if m["op"] == "-":
        s = -s
    if m["neg"]:
        s = -s
    k = Fraction(m["k"]) if m["k"] else ZERO
    if m["kop"] == "-":
        k = -k
    return ClosedForm(c, s, k)


def _balanced(t: str) -> bool:
    depth = 0
    for ch in t:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


# ---------------------------------------------------------------------------
# Goedel sets

@dataclass(frozen=True)
class GoedelSet:
    """A closed subset of [0,1] containing 0 and 1.

    ``kind`` is one of ``full01``, ``finite``, ``downward``, ``seq``.  The
    last three are all stored as a finite ``base`` plus monotone ``families``
    together with their limits, so membership and gap questions reduce to
    finitely many rational comparisons.
    """

    kind: str
    base: tuple[Fraction, ...] = ()
    families: tuple[ClosedForm, ...] = ()

    def __post_init__(self):
        if self.kind not in ("full01", "finite", "downward", "seq"):
            raise ValueError(f"unknown Goedel set kind {self.kind!r}")
        if self.kind == "full01":
            return
        if ZERO not in self.base or ONE not in self.base:
            raise ValueError("a Goedel set must contain 0 and 1")
        for b in self.base:
            if not 0 <= b <= 1:
                raise ValueError(f"{b} outside [0,1]")
        for f in self.families:
            _check_family_in_unit(f)

    # constructors -----------------------------------------------------------
    @classmethod
    def full01(cls) -> "GoedelSet":
        return cls("full01")

    @classmethod
    def finite(cls, points: Iterable) -> "GoedelSet":
        pts = {val(p) for p in points} | {ZERO, ONE}
        return cls("finite", tuple(sorted(pts)))

    @classmethod
    def downward(cls) -> "GoedelSet":
        return cls("downward", (ZERO, ONE), (ClosedForm(ZERO, ONE, ZERO),))

    @classmethod
    def seq(cls, base: Iterable = (), families: Iterable[ClosedForm] = ()) -> "GoedelSet":
        fams = tuple(families)
        pts = {val(p) for p in base} | {ZERO, ONE} | {f.limit for f in fams}
        return cls("seq", tuple(sorted(pts)), fams)

    # queries ----------------------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.kind == "finite" or (self.kind == "seq" and all(f.constant for f in self.families))

    def __contains__(self, x) -> bool:
        return self.member(x)

    def member(self, x) -> bool:
        x = Fraction(x)
        if not 0 <= x <= 1:
            return False
        if self.kind == "full01":
            return True
        if x in self.base:
            return True
        return any(f.index_of(x) is not None for f in self.families)

    def limit_points(self) -> frozenset[Fraction] | "Continuum":
        if self.kind == "full01":
            return CONTINUUM
        return frozenset(f.limit for f in self.families if not f.constant)

    def _family_members_between(self, f: ClosedForm, a: Fraction, b: Fraction) -> list[Fraction] | None:
        """Members of ``f`` in the open interval (a, b); None if infinitely many."""
        if f.constant:
            return [f.c] if a < f.c < b else []
        c = f.limit
        if a < c < b or (c == a and f.s > 0) or (c == b and f.s < 0):
            return None
        eps = min(abs(c - a), abs(c - b))
        stop = f.first_index_beyond(eps)
        return [f(n) for n in range(1, stop + 1) if a < f(n) < b]

    def members_between(self, a, b) -> list[Fraction] | None:
        """Sorted members of ``V ∩ (a, b)``, or None when that set is infinite."""
        a, b = Fraction(a), Fraction(b)
        if self.kind == "full01":
            return None if a < b else []
        out = {x for x in self.base if a < x < b}
        for f in self.families:
            got = self._family_members_between(f, a, b)
            if got is None:
                return None
            out.update(got)
        return sorted(out)

    def gap_capacity(self, a, b) -> int | float:
        """Cardinality of ``V ∩ (a, b)``; ``math.inf`` when infinite."""
        a, b = Fraction(a), Fraction(b)
        if a >= b:
            raise ValueError(f"gap_capacity needs a < b, got ({a}, {b})")
        got = self.members_between(a, b)
        return INF if got is None else len(got)

    def pick_between(self, a, b, count: int) -> list[Fraction]:
        """``count`` distinct members of ``V ∩ (a, b)`` in ascending order.

        The choice is deterministic: for dense stretches the interval is cut
        into ``count + 1`` equal parts; for countable sets the largest
        available members are taken.
        """
        a, b = Fraction(a), Fraction(b)
        if count <= 0:
            return []
        if self.kind == "full01":
            return [a + (b - a) * i / (count + 1) for i in range(1, count + 1)]
        got = self.members_between(a, b)
        if got is None:
            got = self._sample_infinite(a, b, count)
        if len(got) < count:
            raise ValueError(f"only {len(got)} members of V in ({a}, {b}), need {count}")
        return got[-count:]

    def _sample_infinite(self, a: Fraction, b: Fraction, count: int) -> list[Fraction]:
        cand = {x for x in self.base if a < x < b}
        for f in self.families:
            got = self._family_members_between(f, a, b)
            if got is not None:
                cand.update(got)
                continue
            # walk the family until enough in-gap members are collected
            n, found = 1, 0
            limit_hits = 0
            while found < count:
                x = f(n)
                if a < x < b:
                    cand.add(x)
                    found += 1
                elif found:
                    limit_hits += 1
                    if limit_hits > 10_000:
                        break
                n += 1
        return sorted(cand)

    def has_member_in(self, lo, lo_closed: bool, hi, hi_closed: bool) -> bool:
        """Does V meet the interval with the given endpoints?"""
        lo, hi = Fraction(lo), Fraction(hi)
        if lo > hi:
            return False
        if lo == hi:
            return lo_closed and hi_closed and self.member(lo)
        if lo_closed and self.member(lo):
            return True
        if hi_closed and self.member(hi):
            return True
        return self.gap_capacity(lo, hi) > 0

    def describe(self) -> str:
        if self.kind == "full01":
            return "full01"
        if self.kind == "downward":
            return "downward"
        if self.kind == "finite":
            return "finite{" + ",".join(map(str, self.base)) + "}"
        parts = ["base={" + ",".join(map(str, self.base)) + "}"]
        parts += [f"fam={f}" for f in self.families]
        return "seq{" + "; ".join(parts) + "}"

    def __str__(self) -> str:
        return self.describe()


def _check_family_in_unit(f: ClosedForm) -> None:
    if not 0 <= f.limit <= 1:
        raise ValueError(f"family {f} has its limit outside [0,1]")
    lo, _ = f.inf()
    hi, _ = f.sup()
    if lo < 0 or hi > 1:
        raise ValueError(f"family {f} leaves [0,1]")


class Continuum:
    """Stands for the whole interval [0,1] as a set of limit points."""

    def __contains__(self, x) -> bool:
        return 0 <= Fraction(x) <= 1

    def __repr__(self) -> str:
        return "[0,1]"

    def __eq__(self, other) -> bool:
        return isinstance(other, Continuum)

    def __hash__(self) -> int:
        return hash("continuum")


CONTINUUM = Continuum()


# ---------------------------------------------------------------------------
# truth-constant families

@dataclass(frozen=True)
class ConstantFamily:
    """The set A of truth-constant values, always inside (0, 1).

    kinds: ``finite``, ``downward`` ({1/n : n >= 2}), ``harmonic`` (finite
    points plus closed-form families), ``dense-rationals``.
    """

    kind: str
    points: tuple[Fraction, ...] = ()
    families: tuple[ClosedForm, ...] = ()

    def __post_init__(self):
        if self.kind not in ("finite", "downward", "harmonic", "dense-rationals"):
            raise ValueError(f"unknown constant family kind {self.kind!r}")
        for p in self.points:
            if not 0 < p < 1:
                raise ValueError(f"truth constant {p} must lie strictly between 0 and 1")
        for f in self.families:
            lo, lo_att = f.inf()
            hi, hi_att = f.sup()
            if lo < 0 or (lo == 0 and lo_att) or hi > 1 or (hi == 1 and hi_att):
                raise ValueError(f"family {f} leaves (0,1)")

    @classmethod
    def finite(cls, points: Iterable) -> "ConstantFamily":
        return cls("finite", tuple(sorted({val(p) for p in points})))

    @classmethod
    def empty(cls) -> "ConstantFamily":
        return cls("finite", ())

    @classmethod
    def downward(cls) -> "ConstantFamily":
        # 1/(n+1) for n >= 1 is {1/2, 1/3, ...}
        return cls("downward", (), (ClosedForm(ZERO, ONE, ONE),))

    @classmethod
    def harmonic(cls, families: Iterable[ClosedForm], points: Iterable = ()) -> "ConstantFamily":
        return cls("harmonic", tuple(sorted({val(p) for p in points})), tuple(families))

    @classmethod
    def dense_rationals(cls) -> "ConstantFamily":
        return cls("dense-rationals")

    def member(self, x) -> bool:
        x = Fraction(x)
        if self.kind == "dense-rationals":
            return 0 < x < 1
        if x in self.points:
            return True
        return any(f.index_of(x) is not None for f in self.families)

    def __contains__(self, x) -> bool:
        return self.member(x)

    @property
    def is_finite(self) -> bool:
        return self.kind == "finite"

    def members(self, limit: int | None = None) -> Iterator[Fraction]:
        """Enumerate members in descending order (finite kinds enumerate all)."""
        if self.kind == "dense-rationals":
            raise ValueError("dense rationals cannot be enumerated in order")
        if self.kind == "finite":
            yield from sorted(self.points, reverse=True)
            return
        bound = limit if limit is not None else 64
        pool = set(self.points)
        for n in range(1, bound + 1):
            pool.update(f(n) for f in self.families)
        yield from sorted(pool, reverse=True)

    def minimum(self) -> Fraction | None:
        """Least member, or None when A is empty or has no least member."""
        if self.kind == "dense-rationals":
            return None
        if self.kind == "finite":
            return min(self.points) if self.points else None
        cands = list(self.points)
        for f in self.families:
            lo, att = f.inf()
            if not att:
                return None
            cands.append(lo)
        return min(cands) if cands else None

    def maximum(self) -> Fraction | None:
        if self.kind == "dense-rationals":
            return None
        cands = list(self.points)
        for f in self.families:
            hi, att = f.sup()
            if not att:
                return None
            cands.append(hi)
        return max(cands) if cands else None

    def predecessor(self, r: Fraction) -> Fraction:
        """Largest member of ``A ∪ {0}`` strictly below ``r``.

        Only meaningful when the members below r do not accumulate anywhere
        except possibly at 0 from above; raises otherwise.
        """
        r = Fraction(r)
        if self.kind == "dense-rationals":
            raise ValueError("dense rationals have no predecessors")
        best = ZERO
        for p in self.points:
            if p < r:
                best = max(best, p)
        for f in self.families:
            if f.constant:
                if f.c < r:
                    best = max(best, f.c)
                continue
            if f.s > 0:
                # decreasing towards c; members below r exist iff c < r
                if f.limit >= r:
                    continue
                n = 1
                while f(n) >= r:
                    n += 1
                best = max(best, f(n))
            else:
                if f.limit <= r:
                    raise ValueError(f"members of {f} accumulate below {r}")
                if f(1) < r:
                    n = 1
                    while f(n + 1) < r:
                        n += 1
                    best = max(best, f(n))
        return best

    def describe(self) -> str:
        if self.kind == "dense-rationals":
            return "dense-rationals"
        if self.kind == "downward":
            return "downward"
        if self.kind == "finite":
            return "finite{" + ",".join(map(str, self.points)) + "}"
        parts = []
        if self.points:
            parts.append("base={" + ",".join(map(str, self.points)) + "}")
        parts += [f"fam={f}" for f in self.families]
        return "seq{" + "; ".join(parts) + "}"

    def __str__(self) -> str:
        return self.describe()


def limit_points(A: ConstantFamily) -> frozenset[Fraction] | Continuum:
    """Accumulation points of A inside [0,1]."""
    if A.kind == "dense-rationals":
        return CONTINUUM
    return frozenset(f.limit for f in A.families if not f.constant)


def limits_within_zero(A: ConstantFamily) -> bool:
    """True iff every limit point of A is 0 (A' ⊆ {0})."""
    lp = limit_points(A)
    return not isinstance(lp, Continuum) and lp <= {ZERO}


def gs_member(V: GoedelSet, x) -> bool:
    return V.member(x)


def gap_capacity(V: GoedelSet, a, b) -> int | float:
    return V.gap_capacity(a, b)


# ---------------------------------------------------------------------------
# descriptor text syntax

def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "{(":
            depth += 1
        elif ch in "})":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _parse_point_list(body: str) -> list[Fraction]:
    body = body.strip()
    if body.startswith("{") and body.endswith("}"):
        body = body[1:-1]
    return [val(p) for p in _split_top(body, ",")]


def _parse_seq_body(body: str) -> tuple[list[Fraction], list[ClosedForm]]:
    base: list[Fraction] = []
    fams: list[ClosedForm] = []
    for item in _split_top(body, ";"):
        key, _, rhs = item.partition("=")
        key = key.strip()
        if key == "base":
            base.extend(_parse_point_list(rhs))
        elif key == "fam":
            fams.append(parse_closed_form(rhs))
        else:
            raise ValueError(f"unknown seq item {item!r}")
    return base, fams


def _unwrap(text: str, head: str) -> str | None:
    t = text.strip()
    if t.startswith(head + "{") and t.endswith("}"):
        return t[len(head) + 1 : -1]
    return None


def parse_goedel_set(text: str) -> GoedelSet:
    """Parse ``full01``, ``finite{0,1/4,1}``, ``downward`` or ``seq{base={..}; fam=..}``."""
    t = text.strip()
    if t == "full01":
        return GoedelSet.full01()
    if t == "downward":
        return GoedelSet.downward()
    body = _unwrap(t, "finite")
    if body is not None:
        return GoedelSet.finite(_parse_point_list(body))
    body = _unwrap(t, "seq")
    if body is not None:
        base, fams = _parse_seq_body(body)
        return GoedelSet.seq(base, fams)
    raise ValueError(f"unknown Goedel set descriptor {text!r}")


def parse_constant_family(text: str) -> ConstantFamily:
    """Parse ``finite{1/4,1/2}``, ``downward``, ``seq{fam=..}`` or ``dense-rationals``."""
    t = text.strip()
    if t == "downward":
        return ConstantFamily.downward()
    if t == "dense-rationals":
        return ConstantFamily.dense_rationals()
    if t in ("empty", "none", "finite{}"):
        return ConstantFamily.empty()
    body = _unwrap(t, "finite")
    if body is not None:
        return ConstantFamily.finite(_parse_point_list(body))
    body = _unwrap(t, "seq")
    if body is not None:
        base, fams = _parse_seq_body(body)
        return ConstantFamily.harmonic(fams, base)
    raise ValueError(f"unknown constant family descriptor {text!r}")


def ambient_contains(V: GoedelSet, A: ConstantFamily, sample: Sequence[Fraction] | None = None) -> bool:
    """Spot-check that the members of A belong to V (all members when A is finite)."""
    if A.kind == "dense-rationals":
        return V.kind == "full01"
    pts = list(A.members(limit=32)) if sample is None else list(sample)
    return all(V.member(p) for p in pts)

"""Acceptance criteria 1-10, each with its time limit."""

import itertools
import random
import time
from fractions import Fraction as F

from goedelkit import algebra, decide, henkin, lab, metric, proofs, ultraproduct
from goedelkit import syntax as sx
from goedelkit.generators import enumerate_by_size, random_formula, random_structure, random_theory
from goedelkit.semantics import Structure, eval_formula, models, propositional, tabulate
from goedelkit.values import ONE, ZERO, ConstantFamily, GoedelSet, delta, dmax, parse_closed_form, resid

FIVE = GoedelSet.finite(["1/4", "1/2", "3/4"])


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


# 1 ---------------------------------------------------------------------------

def test_c01_connective_algebra(record):
    def run():
        pts = FIVE.base
        bad = []
        for x, y, z in itertools.product(pts, repeat=3):
            if (max(x, y) >= z) != (x >= resid(y, z)):
                bad.append(("adjunction", x, y, z))
            if dmax(x, z) > dmax(x, y) + dmax(y, z) or dmax(x, z) > max(dmax(x, y), dmax(y, z)):
                bad.append(("triangle", x, y, z))
        for x, y in itertools.product(pts, repeat=2):
            # residuum as the least w with max(w, x) >= y, and the piecewise form
            least = min(w for w in pts if max(w, x) >= y)
            piece = ZERO if x >= y else y
            if not resid(x, y) == least == piece:
                bad.append(("resid", x, y))
            if dmax(x, y) != dmax(y, x) or (dmax(x, y) == 0) != (x == y) or dmax(x, y) < 0:
                bad.append(("metric", x, y))
        for x in pts:
            if delta(x) not in (ZERO, ONE) or (delta(x) == 0) != (x == 0):
                bad.append(("delta", x))
        return bad

    bad, dt = timed(run)
    ok = not bad and dt < 1
    record(1, ok, f"connective laws on 5 points: {len(bad)} violations, {dt:.3f}s")
    assert ok, bad[:5]


# 2 ---------------------------------------------------------------------------

def test_c02_example_double_negation(record):
    def run():
        A = ConstantFamily.finite(["1/2"])
        T = [sx.parse_formula("~~rho -> #1/2")]
        v = decide.entails(T, sx.parse_formula("~rho"), None, A)
        space = decide.space_for(T + [sx.parse_formula("~rho")], GoedelSet.full01(), A)
        pinned = {space.witness(i)["rho"] for i in space.models(T)}
        return v, pinned

    (v, pinned), dt = timed(run)
    ok = v.kind == "ENTAILED" and pinned == {ONE} and dt < 1
    record(2, ok, f"{{~~rho -> 1/2}} ⊨ ~rho: {v.kind}; model values of rho: {sorted(map(str, pinned))}; {dt:.3f}s")
    assert ok


# 3 ---------------------------------------------------------------------------

def _corpus(seed: int = 3) -> list[list[sx.Formula]]:
    out = [[f] for f in enumerate_by_size(["p", "q"], ["1/2"], 6)]
    rng = random.Random(seed)
    for _ in range(600):
        atoms = ["p", "q", "r"][: rng.randint(1, 3)]
        out.append([random_formula(rng, atoms, ["1/4", "1/2"], rng.randint(6, 12))])
    for _ in range(300):
        out.append(random_theory(rng, ["p", "q", "r"], ["1/4", "1/2"], rng.randint(2, 3), 8, use_delta=True))
    return out


def test_c03_decision_vs_oracle(record):
    def run():
        corpus = _corpus()
        disagree, unchecked, n = [], 0, 0
        for V in (GoedelSet.full01(), FIVE, GoedelSet.downward()):
            for T in corpus:
                n += 1
                a, b = decide.sat(T, V), decide.oracle_sat(T, V)
                if a.kind != b.kind:
                    disagree.append((V, T))
                if a.kind == "SAT":
                    M = propositional(a.witness, V)
                    if not models(M, T) or not all(V.member(x) for x in a.witness.values()):
                        unchecked += 1
        return disagree, unchecked, n

    (disagree, unchecked, n), dt = timed(run)
    ok = not disagree and not unchecked and dt < 60
    record(3, ok, f"{n} sat problems over 3 Gödel sets: {len(disagree)} disagreements, "
                  f"{unchecked} bad witnesses, {dt:.1f}s")
    assert ok


# 4 ---------------------------------------------------------------------------

def _fillers(rng: random.Random) -> list[sx.Formula]:
    base = [sx.atom(a) for a in "pqr"] + [sx.truth("1/4"), sx.truth("1/2"), sx.BOT, sx.truth(0)]
    small = list(enumerate_by_size(["p", "q"], ["1/2"], 3))
    rand = [random_formula(rng, ["p", "q", "r"], ["1/4", "1/2"], rng.randint(3, 6)) for _ in range(6)]
    return list(dict.fromkeys(base + small + rand))


def _quantified_structures():
    pool = [ZERO, F(1, 4), F(1, 2), ONE]
    U = ("a", "b")
    for vals in itertools.product(pool, repeat=4):
        R = {("a",): vals[0], ("b",): vals[1]}
        S = {("a",): vals[2], ("b",): vals[3]}
        yield Structure(U, {"R": R, "S": S, "q": {(): vals[2]}})


def test_c04_axiom_soundness(record):
    def run():
        rng = random.Random(4)
        fill = _fillers(rng)
        consts = [F(1, 4), F(1, 2)]
        A = ConstantFamily.finite(consts)
        violations, checked = [], 0
        for sch in proofs.SCHEMATA:
            if sch.name.startswith(("G∀", "G∃")):
                continue
            metas = sorted({m.name for m in _metas(sch.pattern)})
            cmetas = sorted({m.name for m in _cmetas(sch.pattern)})
            fsets = itertools.product(fill, repeat=len(metas)) if len(metas) <= 2 else \
                (tuple(rng.choice(fill) for _ in metas) for _ in range(1500))
            for fs in fsets:
                for cs in itertools.product(consts, repeat=len(cmetas)):
                    s = dict(zip(metas, fs)) | dict(zip(cmetas, cs))
                    f = proofs.instantiate(sch, s)
                    if not proofs.match_axiom(f, A):
                        continue  # side condition not met
                    checked += 1
                    if decide.entails([], f, None, A).kind != "ENTAILED":
                        violations.append(sx.print_formula(f))
        # quantifier schemata: every structure over a 2-element universe with values in a pool
        q_inst = [sx.parse_formula(t) for t in (
            "(forall x. R(x)) -> R(y)",
            "R(y) -> (exists x. R(x))",
            "(forall x. q -> R(x)) -> q -> (forall x. R(x))",
            "(forall x. q | R(x)) -> q | (forall x. R(x))",
            "(forall x. R(x) -> q) -> (exists x. R(x)) -> q",
            "(forall x. S(x) & R(x)) -> S(y) & R(y)",
        )]
        for f in q_inst:
            if not proofs.match_axiom(f):
                violations.append("not recognised: " + sx.print_formula(f))
        for M in _quantified_structures():
            for f in q_inst:
                checked += 1
                if any(v != 0 for v in tabulate(M, f, ["x", "y"]).values()):
                    violations.append(sx.print_formula(f))
        return violations, checked

    (violations, checked), dt = timed(run)
    ok = not violations and dt < 30
    record(4, ok, f"{checked} axiom instances: {len(violations)} violations, {dt:.1f}s")
    assert ok, violations[:5]


def _metas(p):
    if isinstance(p, proofs.Meta):
        yield p
    for c in _kids(p):
        yield from _metas(c)


def _cmetas(p):
    if isinstance(p, proofs.MetaConst):
        yield p
    for c in _kids(p):
        yield from _cmetas(c)


def _kids(p):
    if isinstance(p, (sx.And, sx.Imp)):
        return (p.left, p.right)
    if isinstance(p, (sx.Delta,)):
        return (p.body,)
    if isinstance(p, (sx.Forall, sx.Exists)):
        return (p.body,)
    return ()


# 5 ---------------------------------------------------------------------------

def test_c05_compactness_lab(record):
    names = ["EX_3_1_INC", "EX_3_1_DEC", "EX_3_2", "EX_ENTAIL_FAIL", "EX_DELTA"]

    def run():
        res = {}
        for name in names:
            s = lab.get_scenario(name)
            sweep = lab.finite_sat_sweep(s, 20)
            un = lab.full_unsat(s)
            if s.expect == "unsat":
                good = sweep.ok and len(sweep.rows) == 20 and un.empty
            else:
                good = (sweep.ok and len(sweep.rows) == 20 and un.goal_empty
                        and un.forced.get("rho") == ZERO and "T ⊭_f" in un.verdict)
            res[name] = (good, un.verdict)
        return res

    res, dt = timed(run)
    ok = all(g for g, _ in res.values()) and dt < 10
    record(5, ok, "; ".join(f"{n}: {v}" for n, (_, v) in res.items()) + f"; {dt:.1f}s")
    assert ok, res


# 6 ---------------------------------------------------------------------------

def test_c06_approximate_entailment(record):
    def run():
        s = lab.get_scenario("EX_ENTAIL_FAIL")
        rho = sx.atom("rho")
        approx, plain = [], []
        for m in range(1, 11):
            T = s.prefix(m)
            approx.append(decide.entails(T, sx.Imp(sx.truth(ONE / m), rho), s.V, s.A).kind)
            plain.append(decide.entails(T, rho, s.V, s.A).kind)
        return approx, plain

    (approx, plain), dt = timed(run)
    ok = set(approx) == {"ENTAILED"} and set(plain) == {"NOT_ENTAILED"} and dt < 5
    record(6, ok, f"prefix m ⊨ 1/m -> rho for m ≤ 10: {set(approx)}; prefix ⊨ rho: {set(plain)}; {dt:.2f}s")
    assert ok


# 7 ---------------------------------------------------------------------------

def test_c07_embedding(record):
    def run():
        rng = random.Random(7)
        fails, norm_cases, n = [], 0, 0
        for i in range(100):
            A = ConstantFamily.finite(["1/5", "1/3", "1/2", "3/4"]) if i % 2 else ConstantFamily.downward()
            D = algebra.random_galgebra(rng, A, 20, with_delta=rng.random() < 0.5)
            if algebra.validate_galgebra(D):
                fails.append(("invalid", D))
                continue
            g = algebra.embed(D, A)
            rep = algebra.check_embedding(g)
            order = all(g(a) < g(b) for a, b in zip(range(D.size), range(1, D.size)))
            fixed = all(g(i_) == r for r, i_ in D.consts.items())
            norm_cases += "norm" in g.case
            n += 1
            if not (rep.ok and order and fixed):
                fails.append((D, rep.violations))
        return fails, norm_cases, n

    (fails, norm_cases, n), dt = timed(run)
    ok = not fails and norm_cases > 0 and dt < 30
    record(7, ok, f"{n} random G-algebras embedded: {len(fails)} failures, "
                  f"{norm_cases} via norm partition, {dt:.1f}s")
    assert ok, fails[:3]


# 8 ---------------------------------------------------------------------------

def test_c08_henkin(record):
    def run():
        A = ConstantFamily.finite(["1/4", "1/2", "3/4"])
        rng = random.Random(8)
        good, n = 0, 0
        while n < 50:
            T = random_theory(rng, ["p", "q", "r"], ["1/4", "1/2", "3/4"], rng.randint(1, 3), 6)
            if decide.sat(T, None, A).kind != "SAT":
                continue
            n += 1
            trace, cm = henkin.henkin_pipeline(T, None, A)
            good += bool(cm.certificate and models(cm.structure, T) and henkin.guard_preserved(trace, None, A))
        return good, n

    (good, n), dt = timed(run)
    ok = good == n == 50 and dt < 60
    record(8, ok, f"canonical models satisfy the theory: {good}/{n}, {dt:.1f}s")
    assert ok


# 9 ---------------------------------------------------------------------------

def test_c09_lipschitz(record):
    def run():
        rng = random.Random(9)
        bad, tables = [], 0
        for i in range(100):
            size = rng.randint(1, 4)
            funcs = {"f": 1} if i % 3 == 0 and size <= 3 else None
            M = metric.random_lipschitz_structure(rng, size, {"R": 1, "S": 1}, funcs)
            if not (metric.validate_pseudo_ultrametric(M) and metric.validate_lipschitz(M)):
                bad.append(("generator", i))
                continue
            rep = metric.lipschitz_formula_bound(M, 3, truth_constants=["1/4", "1/2"])
            inv = metric.quotient_invariance(M, 3)
            tables += rep.tables
            if not rep.ok or not inv.ok:
                bad.append((i, str(rep), inv.mismatches[:1]))
        return bad, tables

    (bad, tables), dt = timed(run)
    ok = not bad and dt < 60
    record(9, ok, f"100 Lipschitz structures, {tables} depth-3 formula tables: {len(bad)} violations, {dt:.1f}s")
    assert ok, bad[:3]


# 10 --------------------------------------------------------------------------

def test_c10_los(record):
    def run():
        rng = random.Random(10)
        pool = [ZERO, F(1, 3), F(1, 2), ONE]
        unary = [random_structure(rng, {"R": 1}, s, pool, consts=["c"], prefix=f"g{i}_")
                 for i, s in enumerate((1, 2, 3, 2, 3))]
        binary = [random_structure(rng, {"S": 2}, s, pool, prefix=f"h{i}_")
                  for i, s in enumerate((1, 2, 2, 3))]
        mism, triples = 0, 0
        for gens in (unary, binary):
            for trip in itertools.combinations(gens, 3):
                rep = ultraproduct.los_check(trip, [ultraproduct.Principal(j) for j in (1, 2, 3)], 3)
                mism += len(rep.mismatches)
                triples += 1
        lim = ultraproduct.dlimit(parse_closed_form("1/n"), ultraproduct.FrechetExtension(), GoedelSet.downward())
        return mism, triples, lim

    (mism, triples, lim), dt = timed(run)
    ok = mism == 0 and lim == 0 and dt < 60
    record(10, ok, f"{triples} triples x 3 principal ultrafilters at depth 3: {mism} mismatches; "
                   f"dlimit(1/n) = {lim}; {dt:.1f}s")
    assert ok

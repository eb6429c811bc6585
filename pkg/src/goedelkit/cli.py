"""Command-line front end.

Exit codes: 0 when the expected (positive) verdict is reached, 1 for a
negative verdict, 2 for usage or input errors.  Reports are assembled in
memory and printed only once a command has finished, so a failing command
leaves no partial report on standard output.
"""

from __future__ import annotations

import argparse
import contextlib
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from . import algebra, decide, henkin, lab, metric, proofs, ultraproduct
from . import syntax as sx
from .semantics import eval_formula, dualize_display, format_structure, models, parse_structure, propositional
from .values import ConstantFamily, GoedelSet, fmt, parse_constant_family, parse_goedel_set, val

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class Out:
    """Buffered report with value formatting according to ``--display``."""

    dual: bool = False
    lines: list[str] = field(default_factory=list)

    def __call__(self, *parts) -> None:
        self.lines.append(" ".join(str(p) for p in parts))

    def v(self, x: Fraction) -> str:
        return fmt(dualize_display(x)) if self.dual else fmt(x)

    def assignment(self, w: dict[str, Fraction]) -> str:
        return ", ".join(f"{a}={self.v(x)}" for a, x in sorted(w.items()))

    def text(self) -> str:
        head = ["% display: dual (1 = true)"] if self.dual else []
        return "\n".join(head + self.lines) + "\n"


# ---------------------------------------------------------------------------
# inputs

def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _V(args) -> GoedelSet:
    return parse_goedel_set(args.V)


def _A(args) -> ConstantFamily | None:
    return parse_constant_family(args.A) if args.A else None


def _theory(args, required: bool = True) -> sx.Theory:
    if not getattr(args, "theory", None):
        if required:
            raise UsageError("--theory is required")
        return sx.Theory(signature=sx.Signature())
    return sx.parse_theory(_read(args.theory))


def _sentences(th: sx.Theory, prefix: int | None) -> list[sx.Formula]:
    if th.families and prefix is None:
        raise UsageError("the theory has parametric families; pass --prefix m to use the first m instances")
    return list(th.sentences) + (sx.instantiate_family(th, prefix) if th.families else [])


def _formula(text: str, th: sx.Theory) -> sx.Formula:
    return sx.parse_formula(text, th.signature)


# ---------------------------------------------------------------------------
# verbs

def cmd_eval(args, out: Out) -> int:
    th = _theory(args, required=False)
    fs = [_formula(t, th) for t in args.formula] + list(th.sentences)
    if not fs:
        raise UsageError("nothing to evaluate: give --formula or --theory")
    if args.structure:
        M = parse_structure(_read(args.structure), _V(args))
    else:
        M = propositional({k: val(v) for k, v in (a.split("=", 1) for a in args.assign)}, _V(args))
    env = dict(a.split("=", 1) for a in args.env)
    zero = True
    for f in fs:
        x = eval_formula(M, f, env, delta_enabled=th.signature.delta_enabled)
        zero &= x == 0
        out(f"{sx.print_formula(f)} = {out.v(x)}")
    return OK if zero else NEGATIVE


def cmd_sat(args, out: Out) -> int:
    th = _theory(args)
    T = _sentences(th, args.prefix)
    V = _V(args)
    v = decide.sat(T, V, _A(args), args.bound)
    out(f"V = {V}; {len(T)} sentences; {v.examined} arrangements")
    out(v.kind if v.witness is None else f"{v.kind} [{out.assignment(v.witness)}]")
    return OK if v.positive else NEGATIVE


def cmd_entail(args, out: Out) -> int:
    th = _theory(args, required=False)
    T = _sentences(th, args.prefix)
    goal = _formula(args.goal, th)
    v = decide.entails(T, goal, _V(args), _A(args), args.bound)
    out(f"T ⊨ {sx.print_formula(goal)}?")
    out(v.kind if v.witness is None else f"{v.kind}; countermodel [{out.assignment(v.witness)}]")
    return OK if v.positive else NEGATIVE


def cmd_approx(args, out: Out) -> int:
    th = _theory(args, required=False)
    T = _sentences(th, args.prefix)
    goal = _formula(args.goal, th)
    A = _A(args)
    if A is None:
        raise UsageError("approx-entail needs --A")
    res = decide.approx_entails(T, goal, _V(args), A, [val(r) for r in args.r], args.bound)
    for r, v in res:
        out(f"T ⊨ {fmt(r)} -> {sx.print_formula(goal)}: {v.kind}")
    return OK if all(v.positive for _, v in res) else NEGATIVE


def cmd_check_proof(args, out: Out) -> int:
    th = _theory(args, required=False)
    pf = proofs.parse_proof(_read(args.proof), th.signature)
    res = proofs.check_proof(th.sentences, pf, _A(args), th.signature.delta_enabled)
    out(res)
    for n in res.notes:
        out(f"note: {n}")
    return OK if res.ok else NEGATIVE


def cmd_lab(args, out: Out) -> int:
    if args.action == "list":
        for s in lab.scenario_catalog():
            out(f"{s.name}: {s.title}")
        return OK
    if not args.name:
        raise UsageError("lab run needs a scenario name")
    try:
        ok, report = lab.run(args.name, args.k)
    except KeyError:
        raise UsageError(f"unknown scenario {args.name}") from None
    out(report.rstrip("\n"))
    return OK if ok else NEGATIVE


def _universe(args, th: sx.Theory) -> list[sx.Formula]:
    if not args.universe:
        return henkin.closure_universe(th.sentences, (), _A(args))
    return [_formula(t, th) for t in args.universe.split(";") if t.strip()]


def cmd_lindenbaum(args, out: Out) -> int:
    th = _theory(args, required=False)
    try:
        L = algebra.lindenbaum(th.sentences, _universe(args, th), _V(args), _A(args), args.bound)
    except algebra.NotComplete as exc:
        out(f"NOT COMPLETE: {exc}")
        return NEGATIVE
    out(L.describe())
    return OK


def cmd_embed(args, out: Out) -> int:
    D = algebra.parse_algebra(_read(args.algebra))
    bad = algebra.validate_galgebra(D)
    if bad:
        for b in bad:
            out(f"invalid: {b}")
        return NEGATIVE
    A = _A(args) or ConstantFamily.finite(sorted(D.consts))
    g = algebra.embed(D, A, _V(args))
    out(g.describe())
    rep = algebra.check_embedding(g)
    out("transfer checks: " + ("OK" if rep.ok else "; ".join(rep.violations)))
    return OK if rep.ok else NEGATIVE


def cmd_henkin(args, out: Out) -> int:
    th = _theory(args)
    V, A = _V(args), _A(args)
    extra = [_formula(t, th) for t in args.universe.split(";")] if args.universe else []
    trace, cm = henkin.henkin_pipeline(th.sentences, V, A, extra)
    out(trace.describe())
    out(cm.describe())
    return OK if cm.certificate else NEGATIVE


def cmd_metric(args, out: Out) -> int:
    M = parse_structure(_read(args.structure), _V(args))
    rep = metric.validate_pseudo_ultrametric(M)
    out(str(rep))
    if not rep:
        return NEGATIVE
    cert = metric.validate_lipschitz(M)
    out("Lipschitz certificate:")
    out(str(cert))
    if not cert:
        return NEGATIVE
    bound = metric.lipschitz_formula_bound(M, args.depth)
    out(str(bound))
    Q = metric.quotient(M)
    out(f"quotient: {len(Q.structure.universe)} classes")
    for rep_, members in Q.classes().items():
        out(f"  [{rep_}] = {{{', '.join(members)}}}")
    if args.show_quotient:
        out(format_structure(Q.structure).rstrip("\n"))
    return OK if bound.ok else NEGATIVE


def _structures(args) -> list:
    if not args.structures:
        raise UsageError("--structures is required")
    return [parse_structure(_read(p), _V(args)) for p in args.structures]


def cmd_ultraproduct(args, out: Out) -> int:
    Ms = _structures(args)
    P = ultraproduct.ultraproduct(Ms, ultraproduct.Principal(args.principal))
    text = format_structure(P)
    if args.out:
        Path(args.out).write_text(text)
        out(f"wrote {args.out}: {len(P.universe)} elements")
    else:
        out(text.rstrip("\n"))
    return OK


def cmd_los(args, out: Out) -> int:
    Ms = _structures(args)
    js = [args.principal] if args.principal else list(range(1, len(Ms) + 1))
    rep = ultraproduct.los_check(Ms, [ultraproduct.Principal(j) for j in js], args.depth)
    out(f"principal ultrafilters at {', '.join(map(str, js))}")
    out(str(rep))
    return OK if rep.ok else NEGATIVE


def cmd_validate(args, out: Out) -> int:
    ok = True
    did = False
    if args.V_only or args.A:
        did = True
        out(f"V = {_V(args)}")
        if args.A:
            out(f"A = {_A(args)}")
    if args.theory:
        did = True
        th = _theory(args)
        out(f"theory: {len(th.sentences)} sentences, {len(th.families)} families")
    if args.algebra:
        did = True
        bad = algebra.validate_galgebra(algebra.parse_algebra(_read(args.algebra)))
        out("algebra: " + ("OK" if not bad else "; ".join(map(str, bad))))
        ok &= not bad
    if args.structure:
        did = True
        M = parse_structure(_read(args.structure), _V(args))
        if metric.D in M.preds:
            rep = metric.validate_pseudo_ultrametric(M)
            out(f"structure: {rep}")
            ok &= bool(rep)
        else:
            out(f"structure: {len(M.universe)} elements, predicates {', '.join(sorted(M.preds)) or '-'}")
    if args.suite:
        did = True
        ok &= _suite(args, out)
    if not did:
        raise UsageError("nothing to validate")
    return OK if ok else NEGATIVE


def _suite(args, out: Out) -> bool:
    rng = random.Random(args.seed)
    if args.suite == "embedding":
        A = _A(args) or ConstantFamily.downward()
        fails = 0
        for _ in range(args.count):
            D = algebra.random_galgebra(rng, A)
            fails += not algebra.check_embedding(algebra.embed(D, A, _V(args))).ok
        out(f"embedding suite (seed {args.seed}): {args.count} algebras, {fails} failures")
        return fails == 0
    if args.suite == "lipschitz":
        fails = 0
        for _ in range(args.count):
            M = metric.random_lipschitz_structure(rng, rng.randint(1, 4), {"R": 1, "S": 1})
            fails += not (metric.validate_lipschitz(M) and metric.lipschitz_formula_bound(M, 2).ok)
        out(f"lipschitz suite (seed {args.seed}): {args.count} structures, {fails} failures")
        return fails == 0
    if args.suite == "axioms":
        bad = []
        for s in proofs.SCHEMATA:
            for f in _schema_samples(s, rng, args.count):
                if decide.entails([], f, _V(args)).kind != "ENTAILED":
                    bad.append(sx.print_formula(f))
        out(f"axiom suite (seed {args.seed}): {len(bad)} failing instances")
        return not bad
    raise UsageError(f"unknown suite {args.suite}")


def _schema_samples(schema, rng: random.Random, count: int) -> list[sx.Formula]:
    """Random propositional instances that the axiom matcher accepts (side conditions included)."""
    from .generators import random_formula
    A = ConstantFamily.finite(["1/4", "1/2"])
    out = []
    for _ in range(count):
        s: dict = {m: random_formula(rng, ["p", "q"], ["1/4", "1/2"], rng.randint(1, 4)) for m in ("φ", "ψ", "χ")}
        s.update({m: Fraction(rng.choice(["1/4", "1/2"])) for m in ("r", "s", "t")})
        try:
            f = proofs.instantiate(schema, s)
        except (ValueError, KeyError, TypeError, AttributeError):
            continue
        if sx.is_propositional(f) and proofs.match_axiom(f, A):
            out.append(f)
    return out


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--V", default="full01", help="Gödel set: full01, finite{...}, downward, seq{...}")
    common.add_argument("--A", default=None, help="constants: finite{...}, empty, downward, ...")
    common.add_argument("--bound", type=int, default=decide.DEFAULT_ATOM_BOUND, help="atom bound for enumeration")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--display", choices=("reverse", "dual"), default="reverse")

    p = argparse.ArgumentParser(prog="goedelkit", description="Gödel logics with truth constants and Δ")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name: str, fn: Callable, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sp = verb("eval", cmd_eval, "evaluate formulas in a structure or under an assignment")
    sp.add_argument("--structure")
    sp.add_argument("--theory")
    sp.add_argument("--formula", action="append", default=[])
    sp.add_argument("--assign", nargs="*", default=[], metavar="ATOM=VALUE")
    sp.add_argument("--env", nargs="*", default=[], metavar="VAR=ELEMENT")

    sp = verb("sat", cmd_sat, "propositional satisfiability")
    sp.add_argument("--theory", required=True)
    sp.add_argument("--prefix", type=int)

    for name, fn in (("entail", cmd_entail), ("approx-entail", cmd_approx)):
        sp = verb(name, fn, "semantic entailment" if name == "entail" else "T ⊨ r -> φ for listed r")
        sp.add_argument("--theory")
        sp.add_argument("--goal", required=True)
        sp.add_argument("--prefix", type=int)
        if name == "approx-entail":
            sp.add_argument("--r", nargs="+", required=True)

    sp = verb("check-proof", cmd_check_proof, "check a Hilbert-style proof")
    sp.add_argument("--theory")
    sp.add_argument("--proof", required=True)

    sp = verb("lab", cmd_lab, "compactness scenarios")
    sp.add_argument("action", choices=("run", "list"))
    sp.add_argument("name", nargs="?")
    sp.add_argument("--k", type=int, default=20)

    sp = verb("lindenbaum", cmd_lindenbaum, "Lindenbaum quotient of a complete theory")
    sp.add_argument("--theory")
    sp.add_argument("--universe", help="';'-separated sentences (default: subformula closure)")

    sp = verb("embed", cmd_embed, "embed a finite G-algebra into [0,1]")
    sp.add_argument("--algebra", required=True)

    sp = verb("henkin", cmd_henkin, "completion and canonical model")
    sp.add_argument("--theory", required=True)
    sp.add_argument("--universe")

    sp = verb("metric", cmd_metric, "ultrametric, Lipschitz and quotient checks")
    sp.add_argument("--structure", required=True)
    sp.add_argument("--depth", type=int, default=2)
    sp.add_argument("--show-quotient", action="store_true")

    sp = verb("ultraproduct", cmd_ultraproduct, "principal ultraproduct of structures")
    sp.add_argument("--structures", nargs="+")
    sp.add_argument("--principal", type=int, required=True)
    sp.add_argument("--out")

    sp = verb("los-check", cmd_los, "ultraproduct values against D-limits")
    sp.add_argument("--structures", nargs="+")
    sp.add_argument("--principal", type=int)
    sp.add_argument("--depth", type=int, default=2)

    sp = verb("validate", cmd_validate, "validate inputs or run a seeded suite")
    sp.add_argument("--theory")
    sp.add_argument("--algebra")
    sp.add_argument("--structure")
    sp.add_argument("--V-only", action="store_true", help="only parse and echo --V")
    sp.add_argument("--suite", choices=("embedding", "lipschitz", "axioms"))
    sp.add_argument("--count", type=int, default=20)
    return p


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    out = Out(dual=args.display == "dual")
    try:
        code = args.fn(args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return USAGE
    except (sx.SyntaxError_, ValueError, KeyError, OSError) as exc:
        print(f"input error: {exc}", file=stderr)
        return USAGE
    stdout.write(out.text())
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

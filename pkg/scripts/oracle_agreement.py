"""Compare the order-type decision procedure with brute-force search on random theories."""

import argparse
import random
import sys
import time

from goedelkit import decide, syntax as sx
from goedelkit.generators import random_theory
from goedelkit.values import parse_goedel_set


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--V", nargs="+", default=["full01", "finite{0,1/4,1/2,3/4,1}", "downward"])
    ap.add_argument("--size", type=int, default=10, help="max formula size")
    args = ap.parse_args()
    rng = random.Random(args.seed)
    bad = 0
    for text in args.V:
        V = parse_goedel_set(text)
        t0, counts = time.perf_counter(), {"SAT": 0, "UNSAT": 0}
        for _ in range(args.count):
            T = random_theory(rng, ["p", "q", "r"], ["1/4", "1/2"], rng.randint(1, 3), args.size, use_delta=True)
            a, b = decide.sat(T, V), decide.oracle_sat(T, V)
            counts[a.kind] += 1
            if a.kind != b.kind:
                bad += 1
                print("DISAGREE", text, "; ".join(sx.print_formula(f) for f in T), a, b)
        dt = time.perf_counter() - t0
        print(f"{text}: {args.count} theories, {counts['SAT']} sat, {counts['UNSAT']} unsat, {dt:.1f}s")
    print("agreement" if not bad else f"{bad} disagreements")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())

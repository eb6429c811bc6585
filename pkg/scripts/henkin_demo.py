"""Complete a theory, build its Lindenbaum chain and print the canonical model."""

import argparse
import sys

from goedelkit import henkin, syntax as sx
from goedelkit.values import parse_constant_family, parse_goedel_set


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("formulas", nargs="*", default=["~~rho -> #1/2", "#1/2 -> p"])
    ap.add_argument("--A", default="finite{1/4,1/2}")
    ap.add_argument("--V", default="full01")
    args = ap.parse_args()
    T = [sx.parse_formula(f) for f in args.formulas]
    trace, cm = henkin.henkin_pipeline(T, parse_goedel_set(args.V), parse_constant_family(args.A))
    print(trace.describe())
    print(cm.describe())
    return 0 if cm.certificate else 1


if __name__ == "__main__":
    sys.exit(main())

"""Run every compactness scenario and print its sweep and constraint trace."""

import argparse
import sys

from goedelkit import lab


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, default=20, help="largest finite prefix")
    args = ap.parse_args()
    failed = 0
    for s in lab.scenario_catalog():
        ok, report = lab.run(s.name, args.k)
        print(report)
        failed += not ok
    print(f"{len(lab.scenario_catalog()) - failed} scenarios reached their verdict, {failed} did not")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

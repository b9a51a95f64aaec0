"""Run acceptance criteria and write a JSON report.

    python scripts/run_acceptance.py [--only 1 3] [--out reports/acceptance.json]
"""
import argparse
import json
import os
import sys

from torelli.experiments import CRITERIA, report, run_acceptance


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--only", nargs="*", choices=sorted(CRITERIA))
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="reports/acceptance.json")
    a = p.parse_args()
    results = run_acceptance(a.only, jobs=a.jobs)
    for r in results:
        print(r.line())
    rep = report(results)
    os.makedirs(os.path.dirname(os.path.abspath(a.out)), exist_ok=True)
    with open(a.out, "w") as fh:
        json.dump(rep, fh, indent=1, default=str)
    sys.exit(0 if rep["passed"] else 1)


if __name__ == "__main__":
    main()

"""Path-length histograms for T1, C0 and T_sep over several depths.

    python scripts/connectivity_sweep.py --depths 2 3
"""
import argparse
import json

from torelli.experiments import criterion_4


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--depths", nargs="*", type=int, default=[2, 3])
    p.add_argument("--jobs", type=int, default=1)
    a = p.parse_args()
    for d in a.depths:
        r = criterion_4(d=d, jobs=a.jobs)
        print(r.line())
        print(json.dumps(r.witnesses, indent=1, default=str))


if __name__ == "__main__":
    main()

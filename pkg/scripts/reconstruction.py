"""Soundness and completeness of the building edge criterion on the
window truncation, broken down by pair type.

    python scripts/reconstruction.py --genus 4
"""
import argparse
import json

from torelli.encoding import reconstruction_report
from torelli.experiments import fixture_truncation


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--genus", type=int, default=5, choices=(4, 5))
    p.add_argument("--kind", default="window", choices=("window", "recipe"))
    a = p.parse_args()
    u, data, tr = fixture_truncation(a.kind, a.genus)
    rep = reconstruction_report(tr, data)
    rep.pop("unsound_pairs")
    print(json.dumps({"truncation": tr.stats, **rep}, indent=1, default=str))


if __name__ == "__main__":
    main()

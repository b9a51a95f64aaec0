"""Compare homological and cut-based separation on orbit universes.

    python scripts/homology_vs_cut.py --genus 3 --seeds all --depth 3 --weight-cap 96
"""
import argparse
import json

from torelli.experiments import ExperimentConfig, build_universe, dual_definition_check


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--genus", type=int, default=2)
    p.add_argument("--seeds", default="mixed")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--weight-cap", type=int, default=64)
    p.add_argument("--budget", type=int, default=100000)
    a = p.parse_args()
    cfg = ExperimentConfig(a.genus, a.seeds, a.depth, a.weight_cap, a.budget)
    rep = dual_definition_check(build_universe(cfg))
    print(json.dumps(rep, indent=1, default=str))


if __name__ == "__main__":
    main()

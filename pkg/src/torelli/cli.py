"""Command line driver.

    torelli build-universe --genus 3 --seeds humphries --depth 3 --weight-cap 64 --out u.json
    torelli verify --suite acceptance --out report.json
    torelli export --object T1 --universe u.json --format dot --out t1.dot

Values come from built-in defaults, then a ``key = value`` config file
(``--config``), then flags.  Exit codes: 0 success, 1 hard failure or bad
input, 2 budget exhaustion.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from dataclasses import fields

from . import experiments as ex
from .complexes import (TorelliVertex, UniverseData, build_C0, build_curve_complex,
                        build_T1, build_torelli_truncation, link_sep)
from .curves import CurveError, curve_from_word
from .fixtures import seed_curves, seed_set_names
from .mcg import GENERATOR_VERSION, BudgetExhausted, CurveUniverse
from .surface import make_closed_surface

EXIT_OK, EXIT_FAIL, EXIT_BUDGET = 0, 1, 2

SUITES = {
    "acceptance": list("12345678"),
    "homology-vs-cut": None,
    "t1-genus2-no-edges": None,
    "dual-definition": ["1"], "transvection": ["2"], "genus-thresholds": ["3"],
    "connectivity": ["4"], "links": ["5"], "encoding": ["6"], "moves": ["7"],
    "reconstruction": ["8"],
    **{f"criterion-{k}": [k] for k in "12345678"},
}

OBJECTS = ("universe", "surface", "seeds", "curve-complex", "T1", "C0", "building",
           "truncation", "link:<SC vertex id>")


class CliError(Exception):
    pass


# ----------------------------------------------------------------------
# configuration

def read_config(path: str) -> dict:
    """Plain ``key = value`` lines; '#' starts a comment."""
    if not os.path.exists(path):
        raise CliError(f"config file not found: {path}")
    out = {}
    with open(path) as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise CliError(f"{path}:{n}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


def make_config(args) -> ex.ExperimentConfig:
    vals = {}
    if args.config:
        vals.update(read_config(args.config))
    for f in fields(ex.ExperimentConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            vals[f.name] = v
    known = {f.name: f.type for f in fields(ex.ExperimentConfig)}
    extra = set(vals) - set(known)
    if extra:
        raise CliError(f"unknown config keys: {sorted(extra)}")
    conv = {}
    for k, v in vals.items():
        conv[k] = v if k == "seeds" else int(v)
    try:
        return ex.ExperimentConfig(**conv)
    except ValueError as e:
        raise CliError(str(e)) from e


# ----------------------------------------------------------------------
# files

def write_atomic(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj) -> str:
    return json.dumps(obj, indent=1, default=str) + "\n"


def load_universe(path: str) -> CurveUniverse:
    if not os.path.exists(path):
        raise CliError(f"universe file not found: {path}")
    with open(path) as fh:
        try:
            return CurveUniverse.from_json(json.load(fh))
        except (KeyError, TypeError, json.JSONDecodeError) as e:
            raise CliError(f"malformed universe file {path}: {e}") from e


def universe_for(args, cfg) -> CurveUniverse:
    if args.universe:
        return load_universe(args.universe)
    return ex.build_universe(cfg)


# ----------------------------------------------------------------------
# commands

def cmd_build_universe(args) -> int:
    cfg = make_config(args)
    if args.words:
        seeds = [curve_from_word(cfg.genus, tuple(int(x) for x in w.split(",")))
                 for w in args.words]
    else:
        seeds = seed_curves(cfg.seeds, cfg.genus)
    u = ex.build_universe(cfg, seeds=seeds)
    write_atomic(args.out, dump_json(u.to_json()))
    print(f"curves={len(u)} levels={u.stats.get('levels')} digest={u.digest()}", file=sys.stderr)
    return EXIT_OK


def _suite_universe_check(name, args, cfg) -> ex.CriterionResult:
    t0 = time.perf_counter()
    u = universe_for(args, cfg)
    if name == "homology-vs-cut":
        rep = ex.dual_definition_check(u)
        ok = not rep["separation_disagreements"] and not rep["bp_disagreements"]
        title = "homology and cut agree on the given universe"
    else:
        if u.genus != 2:
            raise CliError("t1-genus2-no-edges needs a genus-2 universe")
        g = build_T1(u)
        rep = {"universe": ex.universe_summary(u), "vertices": len(g), "edges": g.n_edges}
        ok = g.n_edges == 0
        title = "T1 on genus 2 has no edges"
    return ex.CriterionResult(name, title, ok, rep, time.perf_counter() - t0)


def cmd_verify(args) -> int:
    cfg = make_config(args)
    if args.suite not in SUITES:
        raise CliError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}")
    crit = SUITES[args.suite]
    if crit is None:
        results = [_suite_universe_check(args.suite, args, cfg)]
    else:
        results = ex.run_acceptance(crit, jobs=cfg.jobs)
    for r in results:
        print(r.line(), file=sys.stderr)
    rep = ex.report(results, {"suite": args.suite, "config": cfg.to_json()})
    if args.universe:
        rep["universe_digest"] = load_universe(args.universe).digest()
    write_atomic(args.out, dump_json(rep))
    if not rep["passed"]:
        return EXIT_FAIL
    return EXIT_BUDGET if rep["budget_exhausted"] else EXIT_OK


def export_object(obj: str, args, cfg):
    """Returns (json-able data or None, Graph or None)."""
    if obj == "surface":
        return make_closed_surface(cfg.genus).to_json(), None
    if obj == "seeds":
        return {"schema": 1, "seed_set": cfg.seeds,
                "curves": [c.to_json() for c in seed_curves(cfg.seeds, cfg.genus)]}, None
    u = universe_for(args, cfg)
    if obj == "universe":
        return u.to_json(), None
    data = UniverseData(u)
    if obj == "curve-complex":
        return None, build_curve_complex(u, data)
    if obj == "T1":
        return None, build_T1(u, data=data)
    if obj == "C0":
        return None, build_C0(u, data, route="homology")
    tr = build_torelli_truncation(u, data)
    if obj in ("building", "truncation"):
        return (tr.to_json() if obj == "truncation" else None), tr.graph()
    if obj.startswith("link:"):
        try:
            v = TorelliVertex.parse(obj[5:])
        except (ValueError, KeyError, IndexError) as e:
            raise CliError(f"bad vertex id {obj[5:]!r}") from e
        try:
            return None, link_sep(v, tr)
        except KeyError as e:
            raise CliError(str(e)) from e
    raise CliError(f"unknown object {obj!r}; choose from {list(OBJECTS)}")


def cmd_export(args) -> int:
    cfg = make_config(args)
    data, graph = export_object(args.object, args, cfg)
    if args.format == "dot":
        if graph is None:
            raise CliError(f"object {args.object!r} is not a graph; use --format json")
        text = graph.to_dot()
    else:
        text = dump_json(data if data is not None else graph.to_json())
    write_atomic(args.out, text)
    if graph is not None:
        print(f"vertices={len(graph)} edges={graph.n_edges}", file=sys.stderr)
    return EXIT_OK


def cmd_list(args) -> int:
    print(dump_json({"seed_sets": seed_set_names(), "suites": sorted(SUITES),
                     "objects": list(OBJECTS), "generator_version": GENERATOR_VERSION}), end="")
    return EXIT_OK


# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--genus", type=int)
    common.add_argument("--seeds", help="named seed set")
    common.add_argument("--depth", type=int)
    common.add_argument("--weight-cap", dest="weight_cap", type=int)
    common.add_argument("--budget", type=int, help="curve budget for universe builds")
    common.add_argument("--jobs", type=int)
    common.add_argument("--rng-seed", dest="rng_seed", type=int)
    common.add_argument("--universe", help="universe JSON to use instead of building one")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "dot"), default="json")

    p = argparse.ArgumentParser(prog="torelli", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    b = sub.add_parser("build-universe", parents=[common], help="enumerate a curve universe")
    b.add_argument("--words", nargs="*", help="seed curves as comma separated letter words")
    b.set_defaults(func=cmd_build_universe)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", default="acceptance")
    v.set_defaults(func=cmd_verify)
    e = sub.add_parser("export", parents=[common], help="export a graph or data object")
    e.add_argument("--object", required=True)
    e.set_defaults(func=cmd_export)
    ls = sub.add_parser("list", parents=[common], help="list seed sets, suites and objects")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExhausted as e:
        print(f"budget exhausted: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (CliError, CurveError, KeyError, ValueError, OSError, AssertionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

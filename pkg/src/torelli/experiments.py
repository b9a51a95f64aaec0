"""Experiment drivers: one function per acceptance criterion.

Every driver returns a ``CriterionResult``; the CLI, the scripts and the
test-suite share them.  Universe parameters live in ``ExperimentConfig``
and the defaults below are the ones recorded in the decisions ledger.
"""
from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field
from itertools import combinations

import numpy as np

from . import encoding as enc
from .classify import (Subsurface, check_marked_triple, complement_of, cut_curves,
                       separation_routes)
from .complexes import (SC, UniverseData, build_C0, build_T1, build_Tsep,
                        build_torelli_truncation, curve_vid, link_sep)
from .curves import (OrientedCurve, curve_from_word, homology_class,
                     homology_class_by_pairing, twist_oriented)
from .fixtures import (disjoint_generators, link_fixture, moving_words, recipe_universe,
                       seed_curves, window_universe)
from .mcg import (GENERATOR_VERSION, BudgetExhausted, TwistWord, humphries_generators,
                  humphries_words, orbit_universe, transvection)
from .words import relator


@dataclass
class ExperimentConfig:
    genus: int = 2
    seeds: str = "mixed"
    depth: int = 3
    weight_cap: int = 64
    budget: int = 2000
    jobs: int = 1
    rng_seed: int = 0

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError("genus must be at least 2")
        for k in ("weight_cap", "budget", "jobs"):
            if getattr(self, k) <= 0:
                raise ValueError(f"{k} must be positive")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")

    def to_json(self):
        return asdict(self)


@dataclass
class CriterionResult:
    criterion: str
    title: str
    passed: bool
    witnesses: dict = field(default_factory=dict)
    timing: float = 0.0
    budget_exhausted: bool = False

    @property
    def verdict(self) -> str:
        if not self.passed:
            return "fail"
        return "budget_exhausted" if self.budget_exhausted else "pass"

    def line(self) -> str:
        return f"[{self.verdict.upper()}] {self.criterion}: {self.title} ({self.timing:.1f}s)"

    def to_json(self):
        return {"criterion": self.criterion, "title": self.title, "verdict": self.verdict,
                "passed": self.passed, "budget_exhausted": self.budget_exhausted,
                "timing": round(self.timing, 3), "witnesses": self.witnesses}


def _timed(criterion, title):
    def wrap(fn):
        def run(*args, **kw):
            t0 = time.perf_counter()
            res = fn(*args, **kw)
            res.criterion, res.title = criterion, title
            res.timing = time.perf_counter() - t0
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def universe_summary(u) -> dict:
    return {"surface": u.surface_id, "curves": len(u), "depth": u.depth,
            "weight_cap": u.weight_cap, "digest": u.digest(),
            "generator_version": u.generator_version}


def build_universe(cfg: ExperimentConfig, generators=None, seeds=None):
    seeds = seeds if seeds is not None else seed_curves(cfg.seeds, cfg.genus)
    return orbit_universe(seeds, cfg.depth, cfg.weight_cap, generators=generators,
                          jobs=cfg.jobs, budget=cfg.budget)


# ----------------------------------------------------------------------
# 1. homology vs cutting

DUAL_CONFIGS = (ExperimentConfig(2, "mixed", 4, 64, 10 ** 6),
                ExperimentConfig(3, "all", 3, 96, 10 ** 6))


def dual_definition_check(u, data: UniverseData | None = None) -> dict:
    """Separation and bounding pairs computed both ways on every curve and pair."""
    data = data or UniverseData(u)
    sep_bad = []
    for i, c in enumerate(data.curves):
        r = separation_routes(c)
        if len(set(r.values())) != 1:
            sep_bad.append(i)
    nonsep = ~data.separating
    Z = np.triu(data.M == 0, 1) & nonsep[:, None] & nonsep[None, :]
    bp_bad, positives = [], 0
    pairs = list(zip(*np.nonzero(Z)))
    for i, j in pairs:
        hom = bool(np.array_equal(data.H[i], data.H[j]) or np.array_equal(data.H[i], -data.H[j]))
        cut = len(cut_curves([data.curves[i], data.curves[j]]).components) == 2
        positives += cut
        if hom != cut:
            bp_bad.append([int(i), int(j)])
    return {"universe": universe_summary(u), "separating": int(data.separating.sum()),
            "separation_disagreements": sep_bad, "pairs_checked": len(pairs),
            "bounding_pairs": int(positives), "bp_disagreements": bp_bad}


@_timed("1", "homology and cut agree on separation and bounding pairs")
def criterion_1(configs=DUAL_CONFIGS) -> CriterionResult:
    out, ok = [], True
    for cfg in configs:
        u = build_universe(cfg)
        rep = dual_definition_check(u)
        ok &= (len(u) >= 300 and cfg.depth >= 3 and not rep["separation_disagreements"]
               and not rep["bp_disagreements"])
        out.append(rep)
    return CriterionResult("", "", ok, {"universes": out})


# ----------------------------------------------------------------------
# 2. transvection law

def transvection_samples(genus: int, count: int, rng: random.Random, cfg=None) -> list:
    cfg = cfg or ExperimentConfig(genus, "mixed", 2, 48, 10 ** 6)
    u = build_universe(cfg)
    gens = humphries_generators(genus)
    pool = [(c, k, e) for c in u.curves for k in range(len(gens)) for e in (1, -1)]
    rng.shuffle(pool)
    return pool[:count]


def check_transvection(c, t, sign: int) -> dict:
    g = c.genus
    a = OrientedCurve(c)
    img, _ = twist_oriented(a, t, sign)
    h = homology_class(a).vector()
    v = homology_class(OrientedCurve(t)).vector()
    want = transvection(v, sign, g) @ h
    got = homology_class(img).vector()
    got2 = homology_class_by_pairing(img).vector()
    return {"ok": bool(np.array_equal(want, got) and np.array_equal(want, got2)),
            "want": want.tolist(), "got": got.tolist(), "got_pairing": got2.tolist()}


@_timed("2", "twisted homology equals the matrix transvection")
def criterion_2(per_genus: int = 260, rng_seed: int = 0) -> CriterionResult:
    rng = random.Random(rng_seed)
    fails, n, nontrivial = [], 0, 0
    for g in (2, 3):
        gens = humphries_generators(g)
        for c, k, e in transvection_samples(g, per_genus, rng):
            r = check_transvection(c, gens[k], e)
            n += 1
            nontrivial += r["want"] != homology_class(OrientedCurve(c)).vector().tolist()
            if not r["ok"]:
                fails.append({"genus": g, "curve": c.word(), "generator": k, "sign": e, **r})
    return CriterionResult("", "", n >= 500 and not fails,
                           {"samples": n, "homology_moved": nontrivial, "failures": fails})


# ----------------------------------------------------------------------
# 3. genus thresholds

def tsep_region(genus: int):
    """R = closed genus-g model cut along b_1, with its stabiliser generators.

    The Humphries curve c_3 meets every T_sep seed below, so it is replaced
    by its mirror c_3' = (1, 4, 7, 6), which bounds a pair of pants with the
    other copy of b_1 and with b_2.
    """
    b1 = curve_from_word(genus, (1,))
    gens = disjoint_generators(genus, [b1])
    gens = [curve_from_word(genus, (1, 4, 7, 6))] + gens[1:]
    R = complement_of(b1)
    seeds = [curve_from_word(genus, (1,) + relator(genus)[4:4 * k + 4])
             for k in range(1, genus - 1)]
    return R, gens, seeds


@_timed("3", "genus thresholds: T1/T_sep edgeless at g=2, no marked triple or admissible pair at g=3")
def criterion_3() -> CriterionResult:
    w = {}
    # (a) genus 2
    u = orbit_universe(seed_curves("genus-one", 2), 6, 60)
    t1 = build_T1(u)
    w["T1_g2"] = {"universe": universe_summary(u), "vertices": len(t1), "edges": t1.n_edges}
    R, gens, seeds = tsep_region(3)
    u = orbit_universe(seeds, 5, 60, generators=gens)
    ts = build_Tsep(u, R)
    w["Tsep_g2"] = {"universe": universe_summary(u), "region": R.describe(),
                    "vertices": len(ts), "edges": ts.n_edges}
    ok_a = all(w[k]["vertices"] >= 30 and w[k]["edges"] == 0 for k in ("T1_g2", "Tsep_g2"))
    # (b) marked triples
    u3 = build_universe(ExperimentConfig(3, "all", 3, 96, 10 ** 6))
    d3 = UniverseData(u3)
    w["triples_g3"] = exhaustive_marked_triples(d3)
    u4 = window_universe(4)
    d4 = UniverseData(u4)
    w["triples_g4"] = exhaustive_marked_triples(d4, stop_after=1)
    ok_b = w["triples_g3"]["marked"] == 0 and w["triples_g4"]["marked"] >= 1
    # (c) admissible pairs
    tr3 = build_torelli_truncation(u3, d3, verify_triples=False)
    pairs = sum(1 for gm in tr3.bp_vertices for de in tr3.sc_vertices
                if enc.justifying_triples(gm, de, tr3))
    w["admissible_g3"] = {"sc": tr3.stats["sc"], "bp": tr3.stats["bp"],
                          "admissible_pairs": pairs,
                          "all_admissible_pairs": len(enc.all_admissible_pairs(tr3))}
    ok_c = pairs == 0 and tr3.stats["bp"] > 0 and tr3.stats["sc"] > 0
    return CriterionResult("", "", ok_a and ok_b and ok_c, w)


def exhaustive_marked_triples(data: UniverseData, stop_after: int | None = None) -> dict:
    """All pairwise disjoint non-separating triples; a pair is bounding by the
    cut criterion, so every candidate with three bounding pairs is cut again."""
    ids = [int(i) for i in np.flatnonzero(~data.separating)]
    Z = data.M == 0
    bounding = {}

    def bp(i, j):
        if (i, j) not in bounding:
            bounding[(i, j)] = len(cut_curves([data.curves[i], data.curves[j]]).components) == 2
        return bounding[(i, j)]

    disjoint_triples, found = 0, []
    for a in range(len(ids)):
        i = ids[a]
        nb = [j for j in ids[a + 1:] if Z[i, j]]
        for b, j in enumerate(nb):
            for k in nb[b + 1:]:
                if not Z[j, k]:
                    continue
                disjoint_triples += 1
                if bp(i, j) and bp(i, k) and bp(j, k):
                    chk = check_marked_triple(*(data.curves[x] for x in (i, j, k)), disjoint=True)
                    if chk.marked:
                        found.append([i, j, k])
                        if stop_after and len(found) >= stop_after:
                            break
            if stop_after and len(found) >= stop_after:
                break
        if stop_after and len(found) >= stop_after:
            break
    return {"universe": universe_summary(data.universe), "nonseparating": len(ids),
            "disjoint_triples": disjoint_triples, "pairs_cut": len(bounding),
            "marked": len(found), "examples": found[:5]}


# ----------------------------------------------------------------------
# 4. connectivity at truncation scale

def connectivity_check(graph, u, seed, d: int) -> dict:
    """Distances inside ``graph`` from ``seed`` to vertices of level <= d."""
    s = curve_vid(u.index_of(seed))
    dist = graph.distances_from(s)
    low = [v for v in graph.vertices
           if u.level[u.curves[int(v[1:])].crossings] <= d]
    missing = [v for v in low if v not in dist]
    lengths = [dist[v] for v in low if v in dist]
    hist = {}
    for x in lengths:
        hist[x] = hist.get(x, 0) + 1
    return {"universe": universe_summary(u), "graph_vertices": len(graph),
            "graph_edges": graph.n_edges, "seed": s, "depth_d_vertices": len(low),
            "reached": len(lengths), "missing": missing[:20],
            "max_path": max(lengths) if lengths else None,
            "path_length_histogram": {str(k): v for k, v in sorted(hist.items())}}


@_timed("4", "depth-3 vertices connect to a seed inside the depth-5 truncation (T1, C0, T_sep)")
def criterion_4(d: int = 3, jobs: int = 1) -> CriterionResult:
    w = {}
    u = orbit_universe(seed_curves("genus-one", 3), d + 2, 40, jobs=jobs)
    w["T1_g3"] = connectivity_check(build_T1(u), u, seed_curves("genus-one", 3)[0], d)
    u = orbit_universe(seed_curves("humphries", 3), d + 2, 24, jobs=jobs)
    data = UniverseData(u)
    w["C0_g3"] = connectivity_check(build_C0(u, data, route="homology"), u,
                                    seed_curves("humphries", 3)[0], d)
    R, gens, seeds = tsep_region(4)
    u = orbit_universe(seeds, d + 2, 80, generators=gens, jobs=jobs)
    w["Tsep_R"] = connectivity_check(build_Tsep(u, R), u, seeds[0], d)
    w["Tsep_R"]["region"] = R.describe()
    ok = all(x["depth_d_vertices"] > 0 and x["reached"] == x["depth_d_vertices"] for x in w.values())
    return CriterionResult("", "", ok, w)


# ----------------------------------------------------------------------
# 5. links

def link_sides(delta, u, graph) -> dict:
    """Side (component index of the cut along delta) of each link vertex."""
    side = {}
    for k in range(2):
        S = Subsurface([delta], k)
        for x in graph.vertices:
            if S.contains(u.curves[int(x.split(":")[1])]):
                side[x] = k
    return side


def link_case(genus, delta_word, other_words, F, depth=2, weight_cap=60) -> dict:
    delta, u = link_fixture(genus, delta_word, other_words, F, depth, weight_cap)
    data = UniverseData(u)
    tr = build_torelli_truncation(u, data)
    v = SC(u.index_of(delta))
    g = link_sep(v, tr)
    side = link_sides(delta, u, g)
    comps = g.components()
    return {"delta": delta.word(), "word": F.to_json(), "universe": universe_summary(u),
            "profile": data.profile(v.payload[0]).to_json(),
            "verdict": enc.genus_one_recognition(v, tr).value,
            "link_size": len(g), "components": sorted((len(c) for c in comps), reverse=True),
            "sides_populated": sorted(set(side.values())), "sided": len(side) == len(g),
            "refines": all(len({side.get(x) for x in c}) == 1 for c in comps)}


@_timed("5", "link_sep connected for genus-1 circles, split by sides otherwise")
def criterion_5(n: int = 6) -> CriterionResult:
    g1, g2 = [], []
    d1 = (0, 3, 2, 1)
    for F in [TwistWord((), 3)] + moving_words(3, curve_from_word(3, d1), n - 1):
        g1.append(link_case(3, d1, [(4, 7, 6, 5), (8, 11, 10, 9), relator(3)[:8]], F))
    d2 = relator(4)[:8]
    for F in [TwistWord((), 4)] + moving_words(4, curve_from_word(4, d2), n - 1):
        g2.append(link_case(4, d2, [(0, 3, 2, 1), (8, 11, 10, 9)], F))
    ok1 = len(g1) >= 5 and all(x["verdict"] == enc.CONNECTED and x["profile"]["genus_one"]
                               for x in g1)
    ok2 = len(g2) >= 5 and all(x["verdict"] == enc.DISCONNECTED and x["sided"] and x["refines"]
                               and x["sides_populated"] == [0, 1] for x in g2)
    return CriterionResult("", "", ok1 and ok2, {"genus_one": g1, "both_sides_genus_2": g2})


# ----------------------------------------------------------------------
# fixture truncations (criteria 6 to 8)

_CACHE = {}


def fixture_truncation(kind: str, genus: int):
    key = (kind, genus)
    if key not in _CACHE:
        u = recipe_universe(genus) if kind == "recipe" else window_universe(genus)
        data = UniverseData(u)
        _CACHE[key] = (u, data, build_torelli_truncation(u, data))
    return _CACHE[key]


@_timed("6", "encodings decode to their curve, independent of the witness")
def criterion_6(genus: int = 5) -> CriterionResult:
    u, data, tr = fixture_truncation("recipe", genus)
    curves, failures, triples, encs = 0, [], 0, 0
    for i in np.flatnonzero(~data.separating):
        try:
            ps = enc.encodings_of(int(i), tr, data)
        except (enc.DecodeError, AssertionError) as e:
            failures.append({"curve": int(i), "error": str(e)})
            continue
        if not ps:
            continue
        curves += 1
        encs += len(ps)
        for p in ps:
            for t in enc.justifying_triples(p.gamma, p.delta, tr):
                triples += 1
                if enc.decode(enc.AdmissiblePair(p.gamma, p.delta, t)) != i:
                    failures.append({"curve": int(i), "pair": p.to_json(), "triple": t.to_json()})
    return CriterionResult("", "", curves >= 20 and not failures,
                           {"universe": universe_summary(u), "truncation": tr.stats,
                            "curves_with_encodings": curves, "encodings": encs,
                            "triples_checked": triples, "failures": failures})


def one_move_pairs(tr) -> list:
    """(kind, before, after) built from marked triangles and adjacency alone."""
    out = []
    for tri in sorted(tr.marked_triangles, key=sorted):
        vs = sorted(tri)
        for beta in vs:
            gamma, gp = [x for x in vs if x != beta]
            deltas = [d for d in sorted(tr.adjacency[beta]) if d.tag == "SC"
                      and not tr.connected(d, gamma) and not tr.connected(d, gp)]
            for d in deltas:
                out.append(("I", enc.AdmissiblePair(gamma, d), enc.AdmissiblePair(gp, d)))
            for d1, d2 in combinations(deltas, 2):
                out.append(("II", enc.AdmissiblePair(gamma, d1), enc.AdmissiblePair(gamma, d2)))
    return out


@_timed("7", "moves preserve decoding; one-move fixtures connect in one step")
def criterion_7(genus: int = 5, budget: int = 200, random_pairs: int = 20,
                rng_seed: int = 0) -> CriterionResult:
    u, data, tr = fixture_truncation("recipe", genus)
    before = dict(enc.MOVE_AUDIT)
    fixtures = one_move_pairs(tr)
    kinds = {"I": 0, "II": 0}
    bad = []
    for kind, p, q in fixtures:
        r = enc.moves_connected(p, q, tr, budget)
        kinds[kind] += 1
        if not r.found or len(r.path) != 1:
            bad.append({"kind": kind, "from": p.to_json(), "to": q.to_json(), **r.to_json()})
    # best effort: random pairs encoding the same curve
    pairs = enc.all_admissible_pairs(tr)
    by_curve = {}
    for p in pairs:
        by_curve.setdefault(enc.decode(p), []).append(p)
    cands = [(a, b) for ps in by_curve.values() for a, b in combinations(ps, 2)]
    rng = random.Random(rng_seed)
    rng.shuffle(cands)
    found, lengths = 0, []
    for a, b in cands[:random_pairs]:
        r = enc.moves_connected(a, b, tr, budget)
        if r.found:
            found += 1
            lengths.append(len(r.path))
    audit = {k: enc.MOVE_AUDIT[k] - before[k] for k in before}
    attempted = min(random_pairs, len(cands))
    ok = (audit["produced"] == audit["decode_preserved"] and len(fixtures) >= 20 and not bad
          and kinds["I"] > 0 and kinds["II"] > 0)
    return CriterionResult("", "", ok, {
        "audit": audit, "fixtures": len(fixtures), "by_kind": kinds, "fixture_failures": bad[:10],
        "random_pairs": attempted, "random_found": found,
        "random_success_rate": found / attempted if attempted else None,
        "random_path_lengths": lengths, "budget": budget},
        budget_exhausted=found < attempted)


@_timed("8", "edge criterion is sound; generators induce building maps in-window")
def criterion_8(genus: int = 5, map_genera=(4, 5)) -> CriterionResult:
    u, data, tr = fixture_truncation("recipe", genus)
    rep = enc.reconstruction_report(tr, data)
    maps, ok_maps = [], True
    for g in map_genera:
        wu, wd, wt = fixture_truncation("window", g)
        for i in range(len(humphries_words(g))):
            for e in (1, -1):
                r = enc.induced_building_map(TwistWord(((i, e),), g), wt, wd)
                ok_maps &= r["valid"]
                maps.append({"genus": g, "generator": i, "sign": e, "valid": r["valid"],
                             "window_vertices": r["window_vertices"],
                             "edges_checked": r["edges_checked"],
                             "non_edges_checked": r["non_edges_checked"],
                             "triangles_checked": r["triangles_checked"],
                             "encodings_checked": r["encodings_checked"]})
    gens = {g: len(humphries_words(g)) for g in map_genera}
    rep_short = {k: v for k, v in rep.items() if k != "unsound_pairs"}
    rep_short["unsound_pairs"] = rep["unsound_pairs"][:10]
    return CriterionResult("", "", rep["soundness"] == 1.0 and ok_maps,
                           {"reconstruction": rep_short, "generators": gens, "maps": maps})


CRITERIA = {"1": criterion_1, "2": criterion_2, "3": criterion_3, "4": criterion_4,
            "5": criterion_5, "6": criterion_6, "7": criterion_7, "8": criterion_8}


def run_acceptance(which=None, jobs: int = 1) -> list:
    out = []
    for k in (which or sorted(CRITERIA)):
        fn = CRITERIA[k]
        out.append(fn(jobs=jobs) if k == "4" else fn())
    return out


def report(results, extra=None) -> dict:
    return {"schema": 1, "generator_version": GENERATOR_VERSION,
            "passed": all(r.passed for r in results),
            "budget_exhausted": any(r.budget_exhausted for r in results),
            "criteria": [r.to_json() for r in results], **(extra or {})}


__all__ = ["ExperimentConfig", "CriterionResult", "CRITERIA", "run_acceptance", "report",
           "BudgetExhausted"]

"""Encodings of non-separating curves by pairs of building vertices.

An admissible pair (gamma, delta) is a BP vertex and an SC vertex with a
justifying marked triangle (gamma, gamma', beta): delta is adjacent to
beta and to neither gamma nor gamma'.  Such a pair names the curve shared
by gamma and gamma'.  Every verdict here is relative to a finite
truncation: positives come with witnesses, negatives only mean that no
witness exists among the enumerated vertices.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .classify import is_bounding_pair, is_separating
from .complexes import (BP, SC, BuildingTruncation, TorelliVertex, UniverseData,
                        link_sep)
from .curves import CurveError, NormalCurve
from .mcg import TwistWord, apply_word, humphries_generators

WITNESSED = "witnessed_true"
NOT_FOUND = "not_found_in_truncation"
INSUFFICIENT = "insufficient_data"
HOLDS_ON_SAMPLE = "holds_on_sample"
CONNECTED = "connected_in_truncation"
DISCONNECTED = "disconnected_in_truncation"


@dataclass
class Verdict:
    value: str
    details: dict = field(default_factory=dict)

    @property
    def witnessed(self) -> bool:
        return self.value == WITNESSED

    def to_json(self):
        return {"verdict": self.value, **self.details}


@dataclass(frozen=True)
class JustifyingTriple:
    gamma: TorelliVertex
    gamma_prime: TorelliVertex
    beta: TorelliVertex

    def to_json(self):
        return [self.gamma.vid, self.gamma_prime.vid, self.beta.vid]


@dataclass(frozen=True)
class AdmissiblePair:
    gamma: TorelliVertex
    delta: TorelliVertex
    witness: JustifyingTriple = field(compare=False, hash=False, default=None)

    @property
    def key(self):
        return (self.gamma, self.delta)

    def to_json(self):
        return {"gamma": self.gamma.vid, "delta": self.delta.vid,
                "witness": self.witness.to_json() if self.witness else None}


@dataclass(frozen=True)
class MoveRecord:
    kind: str             # "I" or "II"
    before: AdmissiblePair
    after: AdmissiblePair
    shared: JustifyingTriple

    def to_json(self):
        return {"kind": self.kind, "before": self.before.to_json(),
                "after": self.after.to_json(), "shared": self.shared.to_json()}


# every move built anywhere is checked here; acceptance reads the tally
MOVE_AUDIT = {"produced": 0, "decode_preserved": 0}


def _check_tags(gamma, delta, tr):
    if gamma.tag != "BP" or delta.tag != "SC":
        raise ValueError("need a BP vertex and an SC vertex")
    if gamma not in tr or delta not in tr:
        raise KeyError("vertex not in the truncation")


def _justifies(tr, delta, g1, g2, beta) -> bool:
    return (tr.adjacent(delta, beta) and not tr.connected(delta, g1)
            and not tr.connected(delta, g2))


def justifying_triples(gamma: TorelliVertex, delta: TorelliVertex,
                       tr: BuildingTruncation) -> list:
    _check_tags(gamma, delta, tr)
    out = []
    for tri in tr.triangles_containing(gamma):
        a, b = sorted(tri - {gamma})
        for gp, beta in ((a, b), (b, a)):
            if _justifies(tr, delta, gamma, gp, beta):
                out.append(JustifyingTriple(gamma, gp, beta))
    return out


def is_admissible(gamma, delta, tr) -> Verdict:
    ts = justifying_triples(gamma, delta, tr)
    if ts:
        return Verdict(WITNESSED, {"witnesses": [t.to_json() for t in ts]})
    return Verdict(NOT_FOUND, {"triangles_searched": len(tr.triangles_containing(gamma))})


class DecodeError(ValueError):
    pass


def decode(pair: AdmissiblePair) -> int:
    w = pair.witness
    if w is None or w.gamma != pair.gamma:
        raise DecodeError("pair carries no matching witness")
    g, gp, b = set(w.gamma.payload), set(w.gamma_prime.payload), set(w.beta.payload)
    cap, d1, d2 = g & gp, g - b, gp - b
    if len(cap) != 1:
        raise DecodeError(f"gamma and gamma' share {len(cap)} curves")
    if not cap == d1 == d2:
        raise DecodeError("the three set expressions disagree")
    return next(iter(cap))


def admissible_pairs(gamma, delta, tr) -> list:
    """The pair once per justifying triple."""
    return [AdmissiblePair(gamma, delta, t) for t in justifying_triples(gamma, delta, tr)]


def decode_all_witnesses(gamma, delta, tr) -> int:
    """Decode with every justifying triple; they must agree."""
    vals = {decode(p) for p in admissible_pairs(gamma, delta, tr)}
    if len(vals) != 1:
        raise DecodeError(f"decode depends on the witness: {sorted(vals)}")
    return vals.pop()


def _sc_neighbours(tr, v) -> list:
    return sorted(x for x in tr.adjacency[v] if x.tag == "SC")


def all_admissible_pairs(tr: BuildingTruncation) -> list:
    """Every admissible pair of the truncation with its first witness."""
    found = {}
    for tri in sorted(tr.marked_triangles, key=sorted):
        vs = sorted(tri)
        for gamma in vs:
            for gp in vs:
                if gp == gamma:
                    continue
                beta = next(x for x in vs if x not in (gamma, gp))
                for delta in _sc_neighbours(tr, beta):
                    if _justifies(tr, delta, gamma, gp, beta):
                        found.setdefault((gamma, delta), JustifyingTriple(gamma, gp, beta))
    return [AdmissiblePair(g, d, w) for (g, d), w in sorted(found.items())]


def encodings_of(c, tr: BuildingTruncation, data: UniverseData) -> list:
    """All admissible pairs of the truncation decoding to curve ``c``.

    ``c`` is a universe index or a NormalCurve in the universe.
    """
    i = data.universe.index_of(c) if isinstance(c, NormalCurve) else int(c)
    if data.separating[i]:
        raise CurveError("separating curves have no encodings")
    found = {}
    for tri in sorted(tr.marked_triangles, key=sorted):
        holding = sorted(v for v in tri if i in v.payload)
        if len(holding) != 2:
            continue
        beta = next(v for v in tri if i not in v.payload)
        for gamma, gp in ((holding[0], holding[1]), (holding[1], holding[0])):
            for delta in _sc_neighbours(tr, beta):
                if _justifies(tr, delta, gamma, gp, beta):
                    found.setdefault((gamma, delta), JustifyingTriple(gamma, gp, beta))
    out = [AdmissiblePair(g, d, w) for (g, d), w in sorted(found.items())]
    for p in out:
        if decode_all_witnesses(p.gamma, p.delta, tr) != i:
            raise DecodeError("encoding decodes to a different curve")
    return out


# ----------------------------------------------------------------------
# moves

def _record(kind, before, after, shared) -> MoveRecord:
    MOVE_AUDIT["produced"] += 1
    if decode(before) != decode(after):
        raise AssertionError(f"move of type {kind} changed the decoded curve")
    MOVE_AUDIT["decode_preserved"] += 1
    return MoveRecord(kind, before, after, shared)


def move_neighbors(pair: AdmissiblePair, tr: BuildingTruncation) -> list:
    out = []
    for t in justifying_triples(pair.gamma, pair.delta, tr):
        before = AdmissiblePair(pair.gamma, pair.delta, t)
        after = AdmissiblePair(t.gamma_prime, pair.delta,
                               JustifyingTriple(t.gamma_prime, t.gamma, t.beta))
        out.append(_record("I", before, after, t))
        for d2 in _sc_neighbours(tr, t.beta):
            if d2 != pair.delta and _justifies(tr, d2, t.gamma, t.gamma_prime, t.beta):
                out.append(_record("II", before, AdmissiblePair(pair.gamma, d2, t), t))
    return out


def validate_move(m: MoveRecord, tr: BuildingTruncation) -> bool:
    s = m.shared
    if m.kind == "I":
        ok = (m.before.delta == m.after.delta
              and {m.before.gamma, m.after.gamma} == {s.gamma, s.gamma_prime}
              and _justifies(tr, m.before.delta, s.gamma, s.gamma_prime, s.beta))
    elif m.kind == "II":
        ok = (m.before.gamma == m.after.gamma == s.gamma
              and _justifies(tr, m.before.delta, s.gamma, s.gamma_prime, s.beta)
              and _justifies(tr, m.after.delta, s.gamma, s.gamma_prime, s.beta))
    else:
        return False
    return ok and frozenset((s.gamma, s.gamma_prime, s.beta)) in tr.marked_triangles \
        and decode(m.before) == decode(m.after)


@dataclass
class MoveSearch:
    path: list | None
    expansions: int
    frontier_sizes: list

    @property
    def found(self) -> bool:
        return self.path is not None

    def to_json(self):
        return {"found": self.found, "expansions": self.expansions,
                "frontier_sizes": self.frontier_sizes,
                "path": [m.to_json() for m in self.path] if self.path is not None else None}


def moves_connected(p: AdmissiblePair, q: AdmissiblePair, tr: BuildingTruncation,
                    budget: int) -> MoveSearch:
    """Breadth-first search over moves, expanding at most ``budget`` pairs."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    if p.key == q.key:
        return MoveSearch([], 0, [1])
    prev = {p.key: None}
    frontier = [p]
    sizes = [1]
    expansions = 0
    while frontier and expansions < budget:
        nxt = []
        for cur in frontier:
            if expansions >= budget:
                break
            expansions += 1
            for m in move_neighbors(cur, tr):
                k = m.after.key
                if k in prev:
                    continue
                prev[k] = m
                if k == q.key:
                    path = []
                    while prev[k] is not None:
                        path.append(prev[k])
                        k = prev[k].before.key
                    path.reverse()
                    for x in path:
                        if not validate_move(x, tr):
                            raise AssertionError("invalid move on the returned path")
                    return MoveSearch(path, expansions, sizes)
                nxt.append(m.after)
        frontier = sorted(nxt, key=lambda x: x.key)
        sizes.append(len(frontier))
    return MoveSearch(None, expansions, sizes)


# ----------------------------------------------------------------------
# recognising edges of the curve complex inside the building

def _genus_one_sides(data: UniverseData, d: int):
    prof = data.profile(d)
    if not prof.is_genus_one:
        raise CurveError("delta0 is not a genus-1 curve")
    return prof


class EncodingCache:
    def __init__(self, tr: BuildingTruncation, data: UniverseData):
        self.tr, self.data = tr, data
        self._enc = {}

    def of(self, i: int) -> list:
        if i not in self._enc:
            self._enc[i] = encodings_of(i, self.tr, self.data)
        return self._enc[i]


def _cache(tr, data, cache):
    return cache if cache is not None else EncodingCache(tr, data)


def check_S1(c: int, delta0: TorelliVertex, tr, data, cache=None) -> Verdict:
    """Some encoding (gamma, eps) of c has gamma adjacent to delta0."""
    _genus_one_sides(data, delta0.payload[0])
    enc = _cache(tr, data, cache).of(c)
    for p in enc:
        if tr.adjacent(p.gamma, delta0):
            return Verdict(WITNESSED, {"encoding": p.to_json()})
    return Verdict(NOT_FOUND, {"encodings": len(enc)})


def check_S0(c: int, delta0: TorelliVertex, tr, data, cache=None) -> Verdict:
    """For each enumerated separating D on the big side of delta0, some
    encoding of c has gamma adjacent to D.  A sample of a universal claim."""
    _genus_one_sides(data, delta0.payload[0])
    enc = _cache(tr, data, cache).of(c)
    if not enc:
        return Verdict(INSUFFICIENT, {"reason": "no encodings in truncation"})
    # separating curves disjoint from a genus-1 curve lie on its big side
    ds = _sc_neighbours(tr, delta0)
    if not ds:
        return Verdict(INSUFFICIENT, {"reason": "no separating curves on the big side"})
    failed = [d.vid for d in ds if not any(tr.connected(p.gamma, d) for p in enc)]
    if failed:
        return Verdict(NOT_FOUND, {"sample": len(ds), "failed": failed})
    return Verdict(HOLDS_ON_SAMPLE, {"sample": len(ds)})


def building_edge_criterion(u: int, v: int, tr: BuildingTruncation, data: UniverseData,
                            cache=None) -> Verdict:
    """Decide from building data alone whether curves u, v span an edge."""
    cache = _cache(tr, data, cache)
    if u == v:
        return Verdict(WITNESSED, {"case": "equal"})
    su, sv = bool(data.separating[u]), bool(data.separating[v])
    if su and sv:
        ok = tr.adjacent(SC(u), SC(v))
        return Verdict(WITNESSED if ok else NOT_FOUND, {"case": "sep-sep"})
    if not su and not sv:
        eu, ev = cache.of(u), cache.of(v)
        for p in eu:
            for q in ev:
                if tr.connected(p.gamma, q.gamma):
                    return Verdict(WITNESSED, {"case": "nonsep-nonsep", "encodings": [p.to_json(), q.to_json()]})
        return Verdict(NOT_FOUND, {"case": "nonsep-nonsep", "encodings": [len(eu), len(ev)]})
    c, d = (v, u) if su else (u, v)
    delta0 = SC(d)
    if data.profile(d).is_genus_one:
        s1 = check_S1(c, delta0, tr, data, cache)
        if s1.witnessed:
            return Verdict(WITNESSED, {"case": "nonsep-genus1", "via": "S1", **s1.details})
        s0 = check_S0(c, delta0, tr, data, cache)
        return Verdict(s0.value if s0.value != WITNESSED else HOLDS_ON_SAMPLE,
                       {"case": "nonsep-genus1", "via": "S0", **s0.details})
    for p in cache.of(c):
        if tr.adjacent(p.gamma, delta0):
            return Verdict(WITNESSED, {"case": "nonsep-sep", "encoding": p.to_json()})
    return Verdict(NOT_FOUND, {"case": "nonsep-sep"})


def genus_one_recognition(delta: TorelliVertex, tr: BuildingTruncation) -> Verdict:
    g = link_sep(delta, tr)
    if len(g) == 0:
        return Verdict(INSUFFICIENT, {"link_size": 0})
    comps = g.components()
    return Verdict(CONNECTED if len(comps) == 1 else DISCONNECTED,
                   {"link_size": len(g), "link_edges": g.n_edges,
                    "component_sizes": sorted((len(x) for x in comps), reverse=True)})


def reconstruction_report(tr: BuildingTruncation, data: UniverseData, pairs=None) -> dict:
    """Compare witnessed edge verdicts with disjointness ground truth."""
    n = len(data.curves)
    if pairs is None:
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    cache = EncodingCache(tr, data)
    tally = {"pairs": 0, "true_edges": 0, "witnessed": 0, "sound": 0, "complete": 0}
    by_case: dict = {}
    bad = []
    for i, j in pairs:
        vd = building_edge_criterion(i, j, tr, data, cache)
        truth = bool(data.M[i, j] == 0)
        tally["pairs"] += 1
        tally["true_edges"] += truth
        case = vd.details.get("case", "?")
        bc = by_case.setdefault(case, {"pairs": 0, "true_edges": 0, "witnessed": 0})
        bc["pairs"] += 1
        bc["true_edges"] += truth
        if vd.witnessed:
            tally["witnessed"] += 1
            bc["witnessed"] += 1
            if truth:
                tally["sound"] += 1
                tally["complete"] += 1
            else:
                bad.append([i, j])
    w, t = tally["witnessed"], tally["true_edges"]
    tally["soundness"] = 1.0 if w == 0 else tally["sound"] / w
    tally["completeness"] = 0.0 if t == 0 else tally["complete"] / t
    tally["unsound_pairs"] = bad
    tally["by_case"] = by_case
    return tally


# ----------------------------------------------------------------------
# induced maps

def check_vertex_map(vmap: dict, tr: BuildingTruncation, images_valid: dict | None = None) -> dict:
    """Check a partial vertex map of the truncation into itself.

    ``vmap`` sends vertices to vertices (absent when the image falls
    outside the window).  Returns counts of checked and failed items.
    """
    rep = {"vertices": 0, "marking_failures": [], "edges_checked": 0, "edge_failures": [],
           "non_edges_checked": 0, "non_edge_failures": [],
           "triangles_checked": 0, "triangle_failures": []}
    for v, w in vmap.items():
        rep["vertices"] += 1
        if tr.marking[v] != w.tag or (w in tr and tr.marking[w] != tr.marking[v]):
            rep["marking_failures"].append([v.vid, w.vid])
    if images_valid:
        for v, ok in images_valid.items():
            if not ok:
                rep["marking_failures"].append([v.vid, "image class changed"])
    inside = [v for v in tr.vertices if v in vmap and vmap[v] in tr]
    for a in range(len(inside)):
        for b in range(a + 1, len(inside)):
            u, v = inside[a], inside[b]
            fu, fv = vmap[u], vmap[v]
            if tr.adjacent(u, v):
                rep["edges_checked"] += 1
                if not tr.adjacent(fu, fv):
                    rep["edge_failures"].append([u.vid, v.vid])
            else:
                rep["non_edges_checked"] += 1
                if tr.adjacent(fu, fv):
                    rep["non_edge_failures"].append([u.vid, v.vid])
    for tri in sorted(tr.marked_triangles, key=sorted):
        if all(x in vmap and vmap[x] in tr for x in tri):
            rep["triangles_checked"] += 1
            img = frozenset(vmap[x] for x in tri)
            if img not in tr.marked_triangles:
                rep["triangle_failures"].append(sorted(x.vid for x in tri))
    return rep


def induced_building_map(word: TwistWord, tr: BuildingTruncation, data: UniverseData,
                         generators=None) -> dict:
    """Apply a twist word to every curve and check what survives in-window."""
    gens = generators if generators is not None else humphries_generators(data.universe.genus)
    img_curve = {}
    for i, c in enumerate(data.curves):
        img_curve[i] = apply_word(word, c, gens)
    idx = {i: (data.universe.index_of(d) if d in data.universe else None)
           for i, d in img_curve.items()}
    vmap, valid = {}, {}
    for v in tr.vertices:
        if v.tag == "SC":
            i = v.payload[0]
            valid[v] = is_separating(img_curve[i])
            if idx[i] is not None:
                vmap[v] = SC(idx[i])
        else:
            i, j = v.payload
            a, b = img_curve[i], img_curve[j]
            valid[v] = a != b and is_bounding_pair(a, b)
            if idx[i] is not None and idx[j] is not None:
                vmap[v] = BP(idx[i], idx[j])
    rep = check_vertex_map(vmap, tr, valid)
    # compatibility with decoding
    checked, failures = 0, []
    for p in all_admissible_pairs(tr):
        w = p.witness
        if not all(x in vmap and vmap[x] in tr for x in (w.gamma, w.gamma_prime, w.beta, p.delta)):
            continue
        checked += 1
        g2, d2 = vmap[p.gamma], vmap[p.delta]
        ts = justifying_triples(g2, d2, tr)
        want = idx[decode(p)]
        if not ts or decode(AdmissiblePair(g2, d2, ts[0])) != want:
            failures.append(p.to_json())
    rep["encodings_checked"] = checked
    rep["encoding_failures"] = failures
    rep["word"] = word.to_json()
    rep["window_vertices"] = sum(1 for v in vmap.values() if v in tr)
    rep["valid"] = not (rep["marking_failures"] or rep["edge_failures"] or rep["non_edge_failures"]
                        or rep["triangle_failures"] or failures)
    return rep

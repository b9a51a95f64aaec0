"""Dehn twist words, the symplectic representation and curve universes."""
from __future__ import annotations

import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .curves import (CurveError, NormalCurve, OrientedCurve, apply_twists, curve_from_word,
                     dehn_twist, homology_class, surface_id, symplectic_form)

GENERATOR_VERSION = "humphries-v1"


def humphries_words(genus: int) -> list[tuple]:
    """Words of the chain c_1..c_2g followed by the extra curve d.

    Homology: c_1 = B_1, c_2 = A_1, c_{2k+1} = +-(B_k - B_{k+1}),
    c_{2k+2} = A_{k+1}, d = B_2.  The words were found by a search over
    short words and their intersection pattern is checked in the tests.
    """
    if genus < 2:
        raise ValueError("Humphries generators need genus >= 2")
    ch = [(1,), (0,)]
    for k in range(1, genus):
        if k == 1:
            ch.append((0, 1, 2, 7))
        else:
            b = 4 * (k - 1)
            ch.append((b, b + 1, b + 2, b + 1, 4 * k + 3, b + 3))
        ch.append((4 * k,))
    return ch + [(5,)]


@lru_cache(maxsize=None)
def _humphries(genus: int) -> tuple:
    return tuple(curve_from_word(genus, w) for w in humphries_words(genus))


def humphries_generators(genus: int) -> list[NormalCurve]:
    return list(_humphries(genus))


@dataclass(frozen=True)
class TwistWord:
    """Letters (generator index, +-1); the map is letter_1 o letter_2 o ..."""
    letters: tuple = ()
    genus: int | None = None

    def __post_init__(self):
        for idx, e in self.letters:
            if e not in (1, -1):
                raise ValueError("exponents must be +1 or -1")
            if self.genus is not None and not 0 <= idx <= 2 * self.genus:
                raise ValueError(f"generator index {idx} out of range")

    def __mul__(self, other: "TwistWord") -> "TwistWord":
        return TwistWord(self.letters + other.letters, self.genus or other.genus)

    def inverse(self) -> "TwistWord":
        return TwistWord(tuple((i, -e) for i, e in reversed(self.letters)), self.genus)

    def __len__(self):
        return len(self.letters)

    def to_json(self):
        return [list(x) for x in self.letters]

    @classmethod
    def from_json(cls, d, genus=None):
        return cls(tuple((int(i), int(e)) for i, e in d), genus)


def apply_word(word: TwistWord, c: NormalCurve, generators=None) -> NormalCurve:
    gens = generators if generators is not None else humphries_generators(c.genus)
    return apply_twists(c, word.letters, gens)


# ----------------------------------------------------------------------
# symplectic representation

@dataclass(frozen=True)
class SymplecticMatrix:
    entries: tuple
    genus: int

    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)

    def is_identity(self) -> bool:
        return np.array_equal(self.array(), np.eye(2 * self.genus, dtype=np.int64))

    def is_symplectic(self) -> bool:
        M, J = self.array(), symplectic_form(self.genus)
        return np.array_equal(M.T @ J @ M, J)

    def __matmul__(self, other):
        return _sm(self.array() @ other.array(), self.genus)

    def apply(self, v) -> np.ndarray:
        return self.array() @ np.asarray(v, dtype=np.int64)


def _sm(a: np.ndarray, genus: int) -> SymplecticMatrix:
    return SymplecticMatrix(tuple(tuple(int(x) for x in r) for r in a), genus)


def transvection(v, sign: int, genus: int) -> np.ndarray:
    """Matrix of x -> x + sign * <x, v> v, with <x, v> = x^T J v."""
    v = np.asarray(v, dtype=np.int64)
    J = symplectic_form(genus)
    return np.eye(2 * genus, dtype=np.int64) - sign * np.outer(v, v) @ J


@lru_cache(maxsize=None)
def generator_classes(genus: int) -> tuple:
    return tuple(homology_class(OrientedCurve(c)).coords for c in _humphries(genus))


def symplectic_action(word: TwistWord, genus: int | None = None,
                      classes=None) -> SymplecticMatrix:
    g = genus or word.genus
    if g is None:
        raise ValueError("genus required")
    cls = classes if classes is not None else generator_classes(g)
    M = np.eye(2 * g, dtype=np.int64)
    for idx, e in word.letters:
        M = M @ transvection(cls[idx], e, g)
    return _sm(M, g)


def is_torelli(word: TwistWord, genus: int | None = None) -> bool:
    return symplectic_action(word, genus).is_identity()


# ----------------------------------------------------------------------
# universes

@dataclass
class CurveUniverse:
    surface_id: str
    curves: tuple                    # sorted canonical order
    provenance: dict                 # key -> (seed index, TwistWord)
    level: dict                      # key -> BFS depth of first appearance
    depth: int
    weight_cap: int
    generator_version: str = GENERATOR_VERSION
    generator_words: tuple = ()
    stats: dict = field(default_factory=dict)

    @property
    def genus(self) -> int:
        return self.curves[0].genus if self.curves else int(self.surface_id.split("g")[-1])

    def __len__(self):
        return len(self.curves)

    def index_of(self, c: NormalCurve) -> int:
        if not hasattr(self, "_pos"):
            self._pos = {x.crossings: i for i, x in enumerate(self.curves)}
        return self._pos[c.crossings]

    def __contains__(self, c: NormalCurve) -> bool:
        try:
            self.index_of(c)
            return True
        except KeyError:
            return False

    def restrict(self, max_level: int) -> "CurveUniverse":
        keep = tuple(c for c in self.curves if self.level[c.crossings] <= max_level)
        ks = {c.crossings for c in keep}
        return CurveUniverse(self.surface_id, keep,
                             {k: v for k, v in self.provenance.items() if k in ks},
                             {k: v for k, v in self.level.items() if k in ks},
                             max_level, self.weight_cap, self.generator_version,
                             self.generator_words, dict(self.stats))

    def digest(self) -> str:
        h = hashlib.sha256()
        for c in self.curves:
            h.update(json.dumps(c.crossings).encode())
        return h.hexdigest()[:16]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "header": {"surface": self.surface_id, "genus": self.genus,
                       "depth": self.depth, "weight_cap": self.weight_cap,
                       "generator_version": self.generator_version,
                       "generators": [list(w) for w in self.generator_words],
                       "count": len(self.curves), "digest": self.digest()},
            "curves": [{"curve": c.to_json(),
                        "seed": self.provenance[c.crossings][0],
                        "word": self.provenance[c.crossings][1].to_json(),
                        "level": self.level[c.crossings]} for c in self.curves],
        }

    @classmethod
    def from_json(cls, d: dict) -> "CurveUniverse":
        h = d["header"]
        curves, prov, lev = [], {}, {}
        for rec in d["curves"]:
            c = NormalCurve(rec["curve"]["surface"],
                            tuple(tuple(x) for x in rec["curve"]["crossings"]))
            curves.append(c)
            prov[c.crossings] = (rec["seed"], TwistWord.from_json(rec["word"], h["genus"]))
            lev[c.crossings] = rec["level"]
        u = cls(h["surface"], tuple(curves), prov, lev, h["depth"], h["weight_cap"],
                h["generator_version"], tuple(tuple(w) for w in h.get("generators", ())))
        if u.digest() != h["digest"]:
            raise CurveError("universe digest mismatch")
        return u


def _twist_images(args):
    """Worker: all generator images of a batch of curves."""
    genus, gen_words, batch, cap = args
    gens = [curve_from_word(genus, w) for w in gen_words]
    out = []
    for crossings in batch:
        c = NormalCurve(surface_id(genus), crossings)
        for gi, t in enumerate(gens):
            for e in (1, -1):
                d = dehn_twist(c, t, e)
                if d.total_weight <= cap:
                    out.append((crossings, gi, e, d.crossings))
    return out


class BudgetExhausted(RuntimeError):
    pass


def orbit_universe(seeds, depth: int, weight_cap: int, generators=None,
                   generator_words=None, jobs: int = 1, budget: int | None = None,
                   order=None) -> CurveUniverse:
    """Closure of ``seeds`` under generator twists up to word length ``depth``.

    Curves heavier than ``weight_cap`` are discarded (and not expanded).
    ``order`` permutes the generator application order; the resulting set
    does not depend on it.  ``budget`` bounds the number of stored curves.
    """
    seeds = list(seeds)
    if not seeds:
        raise CurveError("empty seed list")
    if depth < 0 or weight_cap <= 0:
        raise ValueError("depth must be >= 0 and weight_cap > 0")
    genus = seeds[0].genus
    if generator_words is None:
        if generators is None:
            generator_words = tuple(humphries_words(genus))
        else:
            generator_words = tuple(tuple(c.word()) for c in generators)
    gens = [curve_from_word(genus, w) for w in generator_words]
    gidx = list(range(len(gens)))
    if order is not None:
        gidx = [gidx[i] for i in order]
    prov, level = {}, {}
    for si, s in enumerate(seeds):
        if s.crossings not in prov:
            prov[s.crossings] = (si, TwistWord((), genus))
            level[s.crossings] = 0
    frontier = sorted(prov)
    stats = {"levels": [len(frontier)], "twists": 0}
    pool = ProcessPoolExecutor(jobs) if jobs > 1 else None
    try:
        for lev in range(1, depth + 1):
            found = {}
            if pool is not None:
                chunks = [frontier[i::jobs] for i in range(jobs)]
                results = pool.map(_twist_images,
                                   [(genus, [generator_words[i] for i in gidx], ch, weight_cap)
                                    for ch in chunks if ch])
                images = [(src, gidx[gi], e, dst) for r in results for src, gi, e, dst in r]
            else:
                images = []
                for src in frontier:
                    c = NormalCurve(surface_id(genus), src)
                    for gi in gidx:
                        for e in (1, -1):
                            d = dehn_twist(c, gens[gi], e)
                            if d.total_weight <= weight_cap:
                                images.append((src, gi, e, d.crossings))
            stats["twists"] += len(frontier) * len(gens) * 2
            for src, gi, e, dst in images:
                if dst in prov:
                    continue
                si, w = prov[src]
                cand = (si, TwistWord(((gi, e),) + w.letters, genus))
                old = found.get(dst)
                if old is None or _prov_key(cand) < _prov_key(old):
                    found[dst] = cand
            for k, v in found.items():
                prov[k] = v
                level[k] = lev
            frontier = sorted(found)
            stats["levels"].append(len(frontier))
            if budget is not None and len(prov) > budget:
                raise BudgetExhausted(f"universe exceeded {budget} curves at level {lev}")
    finally:
        if pool is not None:
            pool.shutdown()
    curves = tuple(sorted(NormalCurve(surface_id(genus), k) for k in prov))
    return CurveUniverse(surface_id(genus), curves, prov, level, depth, weight_cap,
                         GENERATOR_VERSION, tuple(generator_words), stats)


def _prov_key(p):
    si, w = p
    return (len(w.letters), si, w.letters)


def image_universe(seeds, words, weight_cap: int | None = None) -> CurveUniverse:
    """Universe of the images F(s) for seeds s and twist words F (identity included)."""
    seeds = list(seeds)
    if not seeds:
        raise CurveError("empty seed list")
    genus = seeds[0].genus
    gens = humphries_generators(genus)
    words = [TwistWord((), genus)] + [w if isinstance(w, TwistWord) else TwistWord(tuple(w), genus)
                                      for w in words]
    prov, level = {}, {}
    for w in words:
        for si, s in enumerate(seeds):
            d = apply_word(w, s, gens)
            if weight_cap is not None and d.total_weight > weight_cap:
                continue
            cand = (si, w)
            old = prov.get(d.crossings)
            if old is None or _prov_key(cand) < _prov_key(old):
                prov[d.crossings] = cand
                level[d.crossings] = len(w)
    curves = tuple(sorted(NormalCurve(surface_id(genus), k) for k in prov))
    depth = max(len(w) for w in words)
    cap = weight_cap or max(c.total_weight for c in curves)
    return CurveUniverse(surface_id(genus), curves, prov, level, depth, cap,
                         GENERATOR_VERSION, tuple(humphries_words(genus)),
                         {"words": len(words)})


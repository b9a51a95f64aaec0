"""Named seed sets and constructed configurations.

Words are over the side letters of the 4g-gon (see ``words``).  With R
the relator, R[:4h] bounds a subsurface of genus h, the block
(4i, 4i+3, 4i+2, 4i+1) is the commutator of handle i, and (1,) + R[4:4k+4]
runs parallel to b_1 around handles 2..k+1, so consecutive members of that
chain cobound a one-handle piece.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .curves import CurveError, NormalCurve, curve_from_word, dehn_twist
from .mcg import (CurveUniverse, TwistWord, apply_word, humphries_generators,
                  humphries_words, image_universe, orbit_universe)
from .words import relator


def basis_words(genus: int) -> list:
    return [(4 * i,) for i in range(genus)] + [(4 * i + 1,) for i in range(genus)]


def genus_one_words(genus: int) -> list:
    return [(4 * i, 4 * i + 3, 4 * i + 2, 4 * i + 1) for i in range(genus)]


def separating_words(genus: int) -> list:
    r = relator(genus)
    return [r[:4 * h] for h in range(1, genus)]


def chain_words(genus: int) -> list:
    """b_1 and its parallels across handles 2..g-1 (pairwise bounding pairs)."""
    r = relator(genus)
    return [(1,) + r[4:4 * k + 4] for k in range(genus - 1)]


SEED_SETS = {
    "humphries": humphries_words,
    "basis": basis_words,
    "genus-one": genus_one_words,
    "separating": separating_words,
    "chain": chain_words,
}

COMPOSITE_SETS = {
    "mixed": ("humphries", "genus-one", "separating"),
    "all": ("humphries", "genus-one", "separating", "chain"),
}


def seed_set_names() -> list:
    return sorted(SEED_SETS) + sorted(COMPOSITE_SETS)


def seed_words(name: str, genus: int) -> list:
    if name in COMPOSITE_SETS:
        out = []
        for k in COMPOSITE_SETS[name]:
            out += [w for w in seed_words(k, genus) if w not in out]
        return out
    if name not in SEED_SETS:
        raise KeyError(f"unknown seed set {name!r}; choose from {seed_set_names()}")
    return SEED_SETS[name](genus)


@lru_cache(maxsize=None)
def _curves(genus: int, words: tuple) -> tuple:
    out = []
    for w in words:
        c = curve_from_word(genus, w)
        if c not in out:
            out.append(c)
    return tuple(out)


def seed_curves(name: str, genus: int) -> list:
    return list(_curves(genus, tuple(seed_words(name, genus))))


# ----------------------------------------------------------------------
# encoding recipe: marked triple C0, C1, C2 and separating D meeting C0 only

# genus-1 curves meeting exactly one member of the chain triple; valid for
# genus 4 and 5 (checked in the tests)
RECIPE_D_WORDS = {
    0: [(12, 0, 4, 2, 12, 15, 14, 13, 14, 0, 6, 2), (12, 0, 4, 7, 4, 5, 6, 2, 14, 0, 6, 2)],
    1: [(5, 8, 4, 7, 10, 6), (5, 8, 5, 10, 7, 4, 7, 6)],
    2: [(9, 12, 8, 11, 14, 10), (9, 12, 9, 14, 11, 8, 11, 10)],
}


@dataclass(frozen=True)
class RecipeFixture:
    genus: int
    C: tuple              # marked triple C0, C1, C2
    D: tuple              # D[k]: separating curves meeting C_k only

    @property
    def C0(self) -> NormalCurve:
        return self.C[0]

    @property
    def curves(self) -> list:
        return list(self.C) + [d for ds in self.D for d in ds]


@lru_cache(maxsize=None)
def recipe_fixture(genus: int) -> RecipeFixture:
    if genus not in (4, 5):
        raise CurveError(f"no recipe fixture on genus {genus}")
    cs = tuple(curve_from_word(genus, w) for w in chain_words(genus)[:3])
    ds = tuple(tuple(curve_from_word(genus, w) for w in RECIPE_D_WORDS[k]) for k in range(3))
    return RecipeFixture(genus, cs, ds)


def moving_words(genus: int, curve: NormalCurve, count: int, max_len: int = 3) -> list:
    """Deterministic twist words with pairwise distinct images of ``curve``."""
    gens = humphries_generators(genus)
    letters = [(i, e) for i in range(len(gens)) for e in (1, -1)]
    seen = {curve.crossings}
    out = []
    frontier = [(TwistWord((), genus), curve)]
    for _ in range(max_len):
        nxt = []
        for w, c in frontier:
            for L in letters:
                d = dehn_twist(c, gens[L[0]], L[1])
                if d.crossings in seen:
                    continue
                seen.add(d.crossings)
                w2 = TwistWord((L,) + w.letters, genus)
                out.append(w2)
                nxt.append((w2, d))
                if len(out) >= count:
                    return out
        frontier = nxt
    return out


def recipe_universe(genus: int, n_images: int = 24) -> CurveUniverse:
    """Images of the recipe configuration under words moving C0."""
    fx = recipe_fixture(genus)
    words = moving_words(genus, fx.C0, n_images)
    return image_universe(fx.curves, words)


def window_universe(genus: int) -> CurveUniverse:
    """Recipe configuration together with its images under single twists."""
    fx = recipe_fixture(genus)
    n = len(humphries_words(genus))
    words = [((i, e),) for i in range(n) for e in (1, -1)]
    return image_universe(fx.curves, words)


# ----------------------------------------------------------------------
# link fixtures

def conjugated(word: TwistWord, curves) -> list:
    return [apply_word(word, c) for c in curves]


def disjoint_generators(genus: int, curves) -> list:
    from .curves import geometric_intersection
    return [g for g in humphries_generators(genus)
            if all(geometric_intersection(g, c) == 0 and g != c for c in curves)]


def link_fixture(genus: int, delta_word, other_words, word: TwistWord, depth: int,
                 weight_cap: int) -> tuple:
    """(delta, universe) with delta = F(D) and the orbit of F(others) under
    the F-conjugates of the generators disjoint from D."""
    d0 = curve_from_word(genus, delta_word)
    others = [curve_from_word(genus, w) for w in other_words]
    gens0 = disjoint_generators(genus, [d0])
    delta = apply_word(word, d0)
    seeds = [delta] + conjugated(word, others)
    gens = conjugated(word, gens0)
    u = orbit_universe(seeds, depth, weight_cap, generators=gens)
    return delta, u

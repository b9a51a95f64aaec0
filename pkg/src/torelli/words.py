"""Words in the side-pairing generators of the closed surface group.

The fundamental polygon is a 4g-gon whose sides are numbered 0..4g-1
counterclockwise.  Side ``j`` is glued to side ``sigma(j)`` where, in
block ``i``, ``4i <-> 4i+2`` and ``4i+1 <-> 4i+3``.  A letter ``j`` is the
deck transformation carrying the tile across side ``j``; its inverse is
the letter ``sigma(j)``.  Words are plain tuples of ints.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np


def side_pairing(genus: int) -> tuple[int, ...]:
    n = 4 * genus
    sig = [0] * n
    for i in range(genus):
        sig[4 * i], sig[4 * i + 2] = 4 * i + 2, 4 * i
        sig[4 * i + 1], sig[4 * i + 3] = 4 * i + 3, 4 * i + 1
    return tuple(sig)


@lru_cache(maxsize=None)
def relator(genus: int) -> tuple[int, ...]:
    """Product of letters met while turning once around the polygon vertex.

    Starting at corner 0 and crossing side ``c`` lands at corner
    ``sigma(c) + 1`` of the neighbouring tile; after 4g crossings the walk
    is back where it started, so the product is trivial.
    """
    sig = side_pairing(genus)
    n = 4 * genus
    out, c = [], 0
    for _ in range(n):
        out.append(c)
        c = (sig[c] + 1) % n
    assert c == 0
    return tuple(out)


def inverse(word, genus: int) -> tuple[int, ...]:
    sig = side_pairing(genus)
    return tuple(sig[x] for x in reversed(word))


def free_reduce(word, genus: int) -> tuple[int, ...]:
    sig = side_pairing(genus)
    out: list[int] = []
    for x in word:
        if out and out[-1] == sig[x]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_free_reduce(word, genus: int) -> tuple[int, ...]:
    sig = side_pairing(genus)
    w = list(free_reduce(word, genus))
    i, j = 0, len(w) - 1
    while i < j and w[j] == sig[w[i]]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


@lru_cache(maxsize=None)
def _dehn_table(genus: int):
    """Map each length-(2g+1) piece of a cyclic relator to its rotation."""
    r = relator(genus)
    n = len(r)
    rots = []
    for base in (r, inverse(r, genus)):
        for s in range(n):
            rots.append(base[s:] + base[:s])
    table = {}
    for rot in rots:
        table.setdefault(rot[:2 * genus + 1], []).append(rot)
    return table


def _dehn_step(w: tuple[int, ...], genus: int):
    """One cyclic Dehn replacement, or None if the cyclic word is reduced."""
    m = len(w)
    h = 2 * genus + 1
    if m < h:
        return None
    table = _dehn_table(genus)
    ww = w + w
    n = 4 * genus
    for i in range(m):
        rots = table.get(ww[i:i + h])
        if not rots:
            continue
        for rot in rots:
            L = h
            while L < min(n, m) and ww[i + L] == rot[L]:
                L += 1
            repl = inverse(rot[L:], genus)
            # piece occupies cyclic positions i..i+L-1
            rest = ww[i + L:i + m]
            return cyclic_free_reduce(repl + rest, genus)
    return None


def reduce_cyclic(word, genus: int) -> tuple[int, ...]:
    """Free, cyclic and Dehn reduction of a cyclic word.

    The result is empty exactly when the word is trivial in the surface
    group (Dehn's algorithm is valid for the one-relator surface group).
    """
    w = cyclic_free_reduce(tuple(word), genus)
    while True:
        nxt = _dehn_step(w, genus)
        if nxt is None:
            return w
        w = nxt


def reduce_word(word, genus: int) -> tuple[int, ...]:
    """Linear (non-cyclic) Dehn reduction; trivial words become ()."""
    w = free_reduce(tuple(word), genus)
    h = 2 * genus + 1
    n = 4 * genus
    table = _dehn_table(genus)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - h + 1):
            rots = table.get(w[i:i + h])
            if not rots:
                continue
            rot = rots[0]
            L = h
            while L < n and i + L < len(w) and w[i + L] == rot[L]:
                L += 1
            w = free_reduce(w[:i] + inverse(rot[L:], genus) + w[i + L:], genus)
            changed = True
            break
    return w


def abelianize(word, genus: int) -> np.ndarray:
    """Exponent sums (a_1..a_g, b_1..b_g) of letters 4i and 4i+1."""
    v = np.zeros(2 * genus, dtype=np.int64)
    for x in word:
        i, r = divmod(x, 4)
        if r == 0:
            v[i] += 1
        elif r == 2:
            v[i] -= 1
        elif r == 1:
            v[genus + i] += 1
        else:
            v[genus + i] -= 1
    return v


def cyclic_rotations(word):
    return [word[i:] + word[:i] for i in range(len(word))] or [()]

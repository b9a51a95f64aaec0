"""Batch intersection numbers for many curves at once.

Every chord endpoint on the polygon boundary gets an integer rank (the
ranking uses certified ball comparisons); two chords cross iff their
ranked endpoints interleave, which numpy evaluates for all pairs.
"""
from __future__ import annotations


import numpy as np

from .curves import NormalCurve, _trace_for, refine
from .hyperbolic import DegenerateGeometry, working_prec


class IntersectionIndex:
    def __init__(self, curves):
        self.curves = list(curves)
        self.pos = {c.crossings: i for i, c in enumerate(self.curves)}
        if len(self.pos) != len(self.curves):
            raise ValueError("index curves must be pairwise non-isotopic")
        for _ in range(8):
            try:
                prec = max(_trace_for(c).prec for c in self.curves)
                with working_prec(prec):
                    self._build()
                break
            except _Undecided as e:
                for i in e.owners:
                    refine(self.curves[i])
        else:
            raise DegenerateGeometry("ranking undecided at maximal precision")
        self._matrix = None

    def _build(self):
        items = []       # (side, t, owner, chord, end)
        counts = []
        for ci, c in enumerate(self.curves):
            tr = _trace_for(c)
            counts.append(len(tr.chords))
            for k, ch in enumerate(tr.chords):
                items.append((ch.a, ch.ta, ci, k, 0))
                items.append((ch.b, ch.tb, ci, k, 1))
        items.sort(key=lambda x: (x[0], float(x[1].mid())))
        # certify neighbours; repair local misorderings by bubbling
        i = 0
        bad = set()
        while i < len(items) - 1:
            x, y = items[i], items[i + 1]
            if x[0] == y[0]:
                d = y[1] - x[1]
                if not d > 0:
                    if d < 0:
                        items[i], items[i + 1] = y, x
                        i = max(i - 1, 0)
                        continue
                    bad.update((x[2], y[2]))
            i += 1
        if bad:
            raise _Undecided(bad)
        offs = np.concatenate([[0], np.cumsum(counts)])
        ends = np.zeros((int(offs[-1]), 2), dtype=np.int64)
        for r, (_, _, ci, k, e) in enumerate(items):
            ends[offs[ci] + k, e] = r
        self.lo = ends.min(axis=1)
        self.hi = ends.max(axis=1)
        self.owner = np.repeat(np.arange(len(self.curves)), counts)
        self.offs = offs

    def chords_of(self, i):
        return slice(self.offs[i], self.offs[i + 1])

    def row(self, i) -> np.ndarray:
        """Intersection numbers of curve i with every indexed curve."""
        s = self.chords_of(i)
        lo, hi = self.lo[s][:, None], self.hi[s][:, None]
        a = (lo < self.lo[None, :]) & (self.lo[None, :] < hi)
        b = (lo < self.hi[None, :]) & (self.hi[None, :] < hi)
        per_chord = (a ^ b).sum(axis=0)
        out = np.bincount(self.owner, weights=per_chord, minlength=len(self.curves))
        out = out.astype(np.int64)
        out[i] = 0
        return out

    def matrix(self) -> np.ndarray:
        if self._matrix is None:
            n = len(self.curves)
            M = np.zeros((n, n), dtype=np.int64)
            for i in range(n):
                M[i] = self.row(i)
            if not np.array_equal(M, M.T):
                raise AssertionError("intersection matrix is not symmetric")
            self._matrix = M
        return self._matrix

    def intersection(self, a: NormalCurve, b: NormalCurve) -> int:
        return int(self.matrix()[self.pos[a.crossings], self.pos[b.crossings]])


class _Undecided(Exception):
    def __init__(self, owners):
        self.owners = owners

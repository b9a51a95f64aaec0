"""Canonical representatives of simple closed curves and their pairings.

A curve is stored as the cyclic sequence of triangle visits (triangle,
entry side, exit side) made by its closed geodesic on the fan
triangulation, rotated/reversed to the lexicographically least form.
Geodesics are unique in their isotopy class and pairwise in minimal
position, so equal data <=> isotopic, and counting crossings of the
stored representatives gives geometric intersection numbers.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import geodesic as geo
from .hyperbolic import (DegenerateGeometry, NullHomotopic, PrecisionError,
                         MAX_PREC, working_prec)
from .surface import (SurfaceError, diagonal_slots, edge_table, make_closed_surface,
                      polygon_side_slot)
from .words import abelianize, inverse, reduce_cyclic, side_pairing


class CurveError(ValueError):
    pass


class IsotopicInputError(CurveError):
    """Raised where distinct isotopy classes are required."""


def surface_id(genus: int) -> str:
    return f"closed-g{genus}"


def genus_of(sid: str) -> int:
    if not sid.startswith("closed-g"):
        raise SurfaceError(f"not a closed model surface: {sid}")
    return int(sid[len("closed-g"):])


@lru_cache(maxsize=None)
def closed_surface(genus: int):
    return make_closed_surface(genus)


@lru_cache(maxsize=None)
def _slot_tables(genus: int):
    """Slot -> polygon side (or None), slot -> edge id, side map."""
    n = 4 * genus
    poly = {}
    for k in range(n):
        poly[polygon_side_slot(genus, k)] = k
    slot_edge, desc = edge_table(genus)
    return poly, slot_edge, len(desc), closed_surface(genus).side_map()


def chord_visits(genus: int, a: int, b: int):
    """Triangle visits of a straight chord from polygon side a to side b.

    Returns a list of (triangle, entry side, exit side) together with the
    diagonals crossed, in order.
    """
    n = 4 * genus
    t, s = polygon_side_slot(genus, a)
    if a < b:
        diags = [k for k in range(a + 1, b + 1) if 2 <= k <= n - 2]
    else:
        diags = [k for k in range(a, b, -1) if 2 <= k <= n - 2]
    visits = []
    cur, entry = t, s
    for k in diags:
        lo, hi = diagonal_slots(genus, k)
        if a < b:
            assert cur == lo[0]
            visits.append((cur, entry, lo[1]))
            cur, entry = hi
        else:
            assert cur == hi[0]
            visits.append((cur, entry, hi[1]))
            cur, entry = lo
    tb, sb = polygon_side_slot(genus, b)
    assert tb == cur
    visits.append((cur, entry, sb))
    return visits, diags


def _canonical(visits):
    m = len(visits)
    fwd = [tuple(v) for v in visits]
    bwd = [(t, o, i) for (t, i, o) in reversed(fwd)]
    best, rev = None, False
    for seq, r in ((fwd, False), (bwd, True)):
        for s in range(m):
            cand = tuple(seq[s:] + seq[:s])
            if best is None or cand < best:
                best, rev = cand, r
    return best, rev


@dataclass(frozen=True)
class NormalCurve:
    surface_id: str
    crossings: tuple

    @property
    def genus(self) -> int:
        return genus_of(self.surface_id)

    @property
    def weights(self) -> tuple:
        _, slot_edge, ne, _ = _slot_tables(self.genus)
        w = [0] * ne
        for t, i, o in self.crossings:
            w[slot_edge[(t, o)]] += 1
        return tuple(w)

    @property
    def total_weight(self) -> int:
        return len(self.crossings)

    @property
    def key(self) -> tuple:
        return self.crossings

    def word(self) -> tuple:
        """Exit letters read along the stored direction."""
        poly, _, _, _ = _slot_tables(self.genus)
        return tuple(poly[(t, o)] for t, i, o in self.crossings if (t, o) in poly)

    def trace(self) -> geo.Trace:
        return _trace_for(self)

    def to_json(self) -> dict:
        return {"surface": self.surface_id, "crossings": [list(c) for c in self.crossings]}

    @classmethod
    def from_json(cls, d) -> "NormalCurve":
        c = cls(d["surface"], tuple(tuple(x) for x in d["crossings"]))
        if canonicalize(c.surface_id, c.crossings) != c:
            raise CurveError("stored curve is not in canonical form")
        return c

    def __lt__(self, other):
        return (self.surface_id, len(self.crossings), self.crossings) < \
            (other.surface_id, len(other.crossings), other.crossings)

    def __repr__(self):
        return f"NormalCurve({self.surface_id}, w={self.total_weight})"


@dataclass(frozen=True)
class OrientedCurve:
    curve: NormalCurve
    direction: int = 1

    def reversed(self) -> "OrientedCurve":
        return OrientedCurve(self.curve, -self.direction)

    def word(self) -> tuple:
        w = self.curve.word()
        return w if self.direction > 0 else inverse(w, self.curve.genus)


# ----------------------------------------------------------------------
# traces are cached per canonical key

_TRACES: dict = {}


def _trace_for(c: NormalCurve, min_prec: int = 0) -> geo.Trace:
    tr = _TRACES.get((c.surface_id, c.crossings))
    if tr is not None and tr.prec >= min_prec:
        return tr
    tr = geo.trace_word(c.genus, c.word(), check_simple=False,
                        prec=max(min_prec, geo.initial_prec(c.genus, c.word())))
    # align the trace with the stored direction: its exit word must be a
    # rotation of the stored word
    _TRACES[(c.surface_id, c.crossings)] = tr
    return tr


def refine(c: NormalCurve) -> geo.Trace:
    """Retrace at twice the precision (used after an undecided comparison)."""
    tr = _trace_for(c)
    if tr.prec * 2 > MAX_PREC:
        raise DegenerateGeometry("precision limit reached")
    return _trace_for(c, tr.prec * 2)


def _with_refinement(fn, *curves):
    for _ in range(8):
        try:
            trs = [_trace_for(c) for c in curves]
            with working_prec(max(t.prec for t in trs)):
                return fn(*trs)
        except PrecisionError:
            for c in curves:
                refine(c)
    raise DegenerateGeometry("comparison undecided at maximal precision")


def _visits_of_trace(tr: geo.Trace):
    visits = []
    for ch in tr.chords:
        v, _ = chord_visits(tr.genus, ch.a, ch.b)
        visits.extend(v)
    return visits


def curve_from_word(genus: int, word) -> NormalCurve:
    """Canonical curve of the closed geodesic homotopic to ``word``.

    Raises NullHomotopic / NotPrimitive / NotSimple when the word does not
    describe an essential simple closed curve.
    """
    tr = geo.trace_word(genus, word, check_simple=True)
    best, rev = _canonical(_visits_of_trace(tr))
    c = NormalCurve(surface_id(genus), best)
    if (c.surface_id, c.crossings) not in _TRACES:
        _TRACES[(c.surface_id, c.crossings)] = tr
    return c


def canonicalize(sid: str, raw_path) -> NormalCurve:
    """Canonical form of a closed edge-crossing walk.

    ``raw_path`` is a cyclic list of (triangle, entry side, exit side).  The
    walk must be consistent with the gluing; trivial returns are allowed.
    """
    genus = genus_of(sid)
    poly, _, _, side_map = _slot_tables(genus)
    path = [tuple(v) for v in raw_path]
    if not path:
        raise NullHomotopic("empty walk")
    m = len(path)
    for k in range(m):
        t, i, o = path[k]
        t2, i2, o2 = path[(k + 1) % m]
        if side_map.get((t, o)) != (t2, i2):
            raise CurveError(f"walk leaves ({t},{o}) but enters ({t2},{i2})")
    word = tuple(poly[(t, o)] for t, i, o in path if (t, o) in poly)
    if not reduce_cyclic(word, genus):
        raise NullHomotopic("walk is null-homotopic")
    return curve_from_word(genus, word)


def _check_same(a: NormalCurve, b: NormalCurve):
    if a.surface_id != b.surface_id:
        raise SurfaceError("curves live on different surfaces")


def is_isotopic(a: NormalCurve, b: NormalCurve) -> bool:
    _check_same(a, b)
    return a.crossings == b.crossings


# ----------------------------------------------------------------------
# pairings

def _crossings(a: NormalCurve, b: NormalCurve):
    return _with_refinement(geo.crossings_between, a, b)


def geometric_intersection(a: NormalCurve, b: NormalCurve) -> int:
    _check_same(a, b)
    if a.crossings == b.crossings:
        return 0
    return len(_crossings(a, b))


def _trace_direction(c: NormalCurve) -> int:
    """+1 if the cached trace runs along the stored direction."""
    tr = _trace_for(c)
    w = c.word()
    tw = tr.word
    if len(w) != len(tw):
        raise AssertionError("trace and stored curve disagree")
    ww = w + w
    for s in range(len(w)):
        if ww[s:s + len(w)] == tw:
            return 1
    iw = inverse(w, c.genus)
    ii = iw + iw
    for s in range(len(w)):
        if ii[s:s + len(w)] == tw:
            return -1
    raise AssertionError("trace word is not a rotation of the stored word")


def algebraic_intersection(a: OrientedCurve, b: OrientedCurve) -> int:
    """Signed count; +1 where b crosses a from right to left."""
    _check_same(a.curve, b.curve)
    if a.curve.crossings == b.curve.crossings:
        return 0
    sa = a.direction * _trace_direction(a.curve)
    sb = b.direction * _trace_direction(b.curve)
    return sa * sb * sum(s for _, _, s, _ in _crossings(a.curve, b.curve))


# ----------------------------------------------------------------------
# homology

@dataclass(frozen=True)
class HomologyClass:
    coords: tuple
    basis_id: str

    @property
    def genus(self) -> int:
        return len(self.coords) // 2

    def vector(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)

    def pairing(self, other: "HomologyClass") -> int:
        return int(self.vector() @ symplectic_form(self.genus) @ other.vector())

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __neg__(self):
        return HomologyClass(tuple(-x for x in self.coords), self.basis_id)


def symplectic_form(genus: int) -> np.ndarray:
    J = np.zeros((2 * genus, 2 * genus), dtype=np.int64)
    J[:genus, genus:] = np.eye(genus, dtype=np.int64)
    J[genus:, :genus] = -np.eye(genus, dtype=np.int64)
    return J


# Basis: A_i is the curve of letter 4i, B_i the curve of letter 4i+1 taken
# with orientation B_SIGN so that alg(A_i, B_i) = +1 (checked in tests).
B_SIGN = 1


def basis_id(genus: int) -> str:
    return f"polygon-g{genus}-v1"


@lru_cache(maxsize=None)
def basis_curves(genus: int):
    """Oriented basis curves (A_1..A_g, B_1..B_g)."""
    out = []
    for i in range(genus):
        out.append(_oriented_from_word(genus, (4 * i,)))
    for i in range(genus):
        w = (4 * i + 1,) if B_SIGN > 0 else (4 * i + 3,)
        out.append(_oriented_from_word(genus, w))
    return tuple(out)


def _oriented_from_word(genus: int, word) -> OrientedCurve:
    c = curve_from_word(genus, word)
    w = reduce_cyclic(word, genus)
    ab = abelianize(w, genus)
    own = abelianize(c.word(), genus)
    if np.array_equal(ab, own):
        return OrientedCurve(c, 1)
    if np.array_equal(ab, -own):
        return OrientedCurve(c, -1)
    raise AssertionError("orientation of a basis curve is undetermined")


def homology_class(a: OrientedCurve) -> HomologyClass:
    """Coordinates from the abelianized word of the curve."""
    g = a.curve.genus
    ab = abelianize(a.word(), g)
    ab[g:] *= B_SIGN
    return HomologyClass(tuple(int(x) for x in ab), basis_id(g))


def homology_class_by_pairing(a: OrientedCurve) -> HomologyClass:
    """Independent route: algebraic intersections with the basis curves."""
    g = a.curve.genus
    bc = basis_curves(g)
    xa = [algebraic_intersection(a, bc[g + j]) for j in range(g)]
    xb = [-algebraic_intersection(a, bc[j]) for j in range(g)]
    return HomologyClass(tuple(xa + xb), basis_id(g))


# ----------------------------------------------------------------------
# Dehn twists

def dehn_twist(a: NormalCurve, t: NormalCurve, sign: int = 1) -> NormalCurve:
    """Image of ``a`` under the Dehn twist about ``t`` (sign +1 turns left)."""
    _check_same(a, t)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if a.crossings == t.crossings:
        return a
    word = _with_refinement(lambda ta, tt: _twisted_word(ta, tt, sign), a, t)
    if word is None:
        return a
    return curve_from_word(a.genus, word)


def twist_oriented(a: OrientedCurve, t: NormalCurve, sign: int = 1) -> tuple:
    """Oriented twist: (image OrientedCurve, surgery word read along a).

    The word is the image loop in the direction of ``a``, so its
    abelianization is the homology class of the oriented image.
    """
    c = a.curve
    if c.crossings == t.crossings:
        return a, a.word()
    word = _with_refinement(lambda ta, tt: _twisted_word(ta, tt, sign), c, t)
    if word is None:
        return a, a.word()
    if a.direction * _trace_direction(c) < 0:
        word = inverse(word, c.genus)
    img = curve_from_word(c.genus, word)
    g = c.genus
    ab, own = abelianize(word, g), abelianize(img.word(), g)
    d = 1 if np.array_equal(ab, own) else -1
    return OrientedCurve(img, d), word


def _twisted_word(ta: geo.Trace, tt: geo.Trace, sign: int):
    """Surgery on the word of ``a``: at each crossing with ``t`` splice in a
    full loop around ``t``, turning left for a positive twist."""
    cr = geo.crossings_between(ta, tt)
    if not cr:
        return None
    sig = side_pairing(ta.genus)
    ys = tt.word
    k = len(ys)
    per_chord: dict = {}
    for i, j, s, u in cr:
        per_chord.setdefault(i, []).append((u, j, s))
    out = []
    for i, x in enumerate(ta.word):
        hits = per_chord.get(i, [])
        if len(hits) > 1:
            hits = _sort_by_param(hits)
        for u, j, s in hits:
            if s * sign > 0:
                out.extend(ys[j:] + ys[:j])
            else:
                out.extend(sig[ys[(j - 1 - r) % k]] for r in range(k))
        out.append(x)
    return tuple(out)


def _sort_by_param(hits):
    from functools import cmp_to_key

    def cmp(h1, h2):
        d = h1[0] - h2[0]
        if d > 0:
            return 1
        if d < 0:
            return -1
        raise PrecisionError
    return sorted(hits, key=cmp_to_key(cmp))


def apply_twists(c: NormalCurve, letters, generators) -> NormalCurve:
    """Apply a twist word: letters (index, exponent) act right to left, so
    the word reads as the composition letter_1 o letter_2 o ..."""
    for idx, e in reversed(list(letters)):
        t = generators[idx]
        for _ in range(abs(e)):
            c = dehn_twist(c, t, 1 if e > 0 else -1)
    return c


# ----------------------------------------------------------------------
# joint realization

@dataclass
class MultiCurveRealization:
    """All curves drawn at once on the closed model.

    ``slots[(t, s)]`` lists the points on side s of triangle t from corner
    s towards corner s+1 as (curve index, point id).  ``arcs[t]`` holds
    ((side, index), (side, index), curve index, +1) in the curve's stored
    direction.  ``crossing_list`` holds (i, j, triangle) with i < j.
    """
    surface_id: str
    curves: tuple
    slots: dict
    arcs: dict
    crossing_list: tuple

    @property
    def n_curves(self) -> int:
        return len(self.curves)

    def points(self, t: int, s: int) -> list:
        return self.slots.get((t, s), [])

    def arcs_in(self, t: int) -> list:
        return self.arcs.get(t, [])

    def crossing_count(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return sum(1 for a, b, _ in self.crossing_list if (a, b) == (i, j))

    def to_json(self) -> dict:
        return {"surface": self.surface_id,
                "curves": [c.to_json() for c in self.curves],
                "arcs": {str(t): [[list(p), list(q), c] for p, q, c, _ in v]
                         for t, v in sorted(self.arcs.items())},
                "crossings": [list(x) for x in self.crossing_list]}


def _geodesic_points(tr: geo.Trace):
    """Edge crossing points of one geodesic.

    Returns (points, chord paths).  ``points`` maps point id ->
    (primary slot, param, offset sign); chord path i is the list of
    (slot entered, point id) pairs ... as consecutive point ids along the
    chord, with the triangle visits.
    """
    g = tr.genus
    sig = side_pairing(g)
    m = len(tr.chords)
    pts = {}
    paths = []
    for c, ch in enumerate(tr.chords):
        b = ch.b
        if b < sig[b]:
            pts[("s", c)] = (polygon_side_slot(g, b), ch.tb, 1)
        else:
            nxt = tr.chords[(c + 1) % m]
            pts[("s", c)] = (polygon_side_slot(g, sig[b]), nxt.ta, -1)
        visits, diags = chord_visits(g, ch.a, ch.b)
        seq = [("s", (c - 1) % m)]
        for k in diags:
            pid = ("d", c, k)
            s = geo.diagonal_param(tr, c, k)
            pts[pid] = ((k - 1, 0), s, -1 if ch.a < ch.b else 1)
            seq.append(pid)
        seq.append(("s", c))
        paths.append((visits, seq))
    return pts, paths


def _mate_slot(genus, slot):
    return _slot_tables(genus)[3][slot]


def joint_realization(curves) -> MultiCurveRealization:
    curves = tuple(curves)
    if not curves:
        raise CurveError("empty curve list")
    sid = curves[0].surface_id
    for c in curves:
        if c.surface_id != sid:
            raise SurfaceError("curves live on different surfaces")
    for _ in range(8):
        try:
            with working_prec(max(_trace_for(c).prec for c in curves)):
                return _realize(curves)
        except PrecisionError:
            for c in set(curves):
                refine(c)
    raise DegenerateGeometry("realization undecided at maximal precision")


def _realize(curves) -> MultiCurveRealization:
    from functools import cmp_to_key
    g = curves[0].genus
    sid = curves[0].surface_id
    first = {}
    copies = {}
    for i, c in enumerate(curves):
        first.setdefault(c.crossings, i)
        copies.setdefault(c.crossings, []).append(i)
    data = {}
    for key, i in first.items():
        tr = _trace_for(curves[i])
        data[key] = (tr, _trace_direction(curves[i])) + _geodesic_points(tr)
    by_slot: dict = {}
    for key, (tr, d, pts, paths) in data.items():
        for pid, (slot, param, off) in pts.items():
            by_slot.setdefault(slot, []).append((param, key, pid, off))

    def cmp(x, y):
        if x[1] == y[1] and x[2] == y[2]:
            return 0
        return 1 if geo.sign(x[0] - y[0]) > 0 else -1

    slots = {}
    index = {}
    for slot, items in by_slot.items():
        items.sort(key=cmp_to_key(cmp))
        seq = []
        for param, key, pid, off in items:
            cl = copies[key]
            # copies sit to the left of the curve; off says which way that is
            # along this slot for the traced direction
            left = off * data[key][1]
            for ci in (cl if left > 0 else reversed(cl)):
                seq.append((ci, pid))
        slots[slot] = seq
        mate = _mate_slot(g, slot)
        slots[mate] = list(reversed(seq))
        for k, (ci, pid) in enumerate(seq):
            index[(ci, pid, slot)] = k
            index[(ci, pid, mate)] = len(seq) - 1 - k
    arcs: dict = {}
    for ci, c in enumerate(curves):
        tr, d, pts, paths = data[c.crossings]
        for visits, seq in paths:
            for v, (t, si, so) in enumerate(visits):
                p = (si, index[(ci, seq[v], (t, si))])
                q = (so, index[(ci, seq[v + 1], (t, so))])
                arcs.setdefault(t, []).append((p, q, ci, 1) if d > 0 else (q, p, ci, 1))
    crossings = []
    for t, lst in arcs.items():
        keyed = [((p[0], p[1]), (q[0], q[1]), ci) for p, q, ci, _ in lst]
        for x in range(len(keyed)):
            p1, q1, c1 = keyed[x]
            lo, hi = min(p1, q1), max(p1, q1)
            for y in range(x + 1, len(keyed)):
                p2, q2, c2 = keyed[y]
                if (lo < p2 < hi) != (lo < q2 < hi):
                    if c1 == c2:
                        raise AssertionError("a curve crosses itself")
                    crossings.append((min(c1, c2), max(c1, c2), t))
    crossings.sort()
    return MultiCurveRealization(sid, curves, slots, arcs, tuple(crossings))

"""Closed geodesics: tracing a word's axis through the fundamental polygon."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from flint import arb, arb_mat, ctx

from .hyperbolic import (MAX_PREC, DegenerateGeometry, NotPrimitive, NotSimple,
                         NullHomotopic, PrecisionError, _normalize, apply, lorentz,
                         model, sign, working_prec)
from .words import reduce_cyclic

POS_TOL = arb(2) ** -60


@dataclass
class Chord:
    """One passage of a geodesic through the polygon.

    ``a``/``b`` are the entry/exit sides and ``ta``/``tb`` the fractions
    along them (from vertex ``k`` towards ``k+1``), as arb balls.
    """
    a: int
    ta: arb
    b: int
    tb: arb


@dataclass
class Trace:
    genus: int
    word: tuple          # exit sides, one per chord; product is the curve
    chords: list
    prec: int
    length: float        # translation length


def _float_length(genus: int, word) -> float:
    """Translation length estimated with scaled float64 products."""
    fr = model(genus).frame(64)
    gens = [np.array([[float(T[i, j].mid()) for j in range(3)] for i in range(3)])
            for T in fr.gens]
    M = np.eye(3)
    logs = 0.0
    for x in word:
        M = M @ gens[x]
        s = np.abs(M).max()
        if s > 1e100:
            M /= s
            logs += math.log(s)
    tr = abs(np.trace(M))
    if tr <= 0:
        return logs
    val = logs + math.log(tr)
    if val < 5:
        c = (math.exp(val) - 1) / 2
        return math.acosh(max(c, 1.0))
    return val


def initial_prec(genus: int, word) -> int:
    ell = _float_length(genus, word)
    return int(96 + 1.6 * ell / math.log(2)) // 32 * 32 + 32


def _cross3(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _axis_pole(M: arb_mat):
    """Pole of the axis of a hyperbolic isometry, oriented so the axis runs
    to the left-positive side in the direction of translation."""
    N = [[M[i, j] - (1 if i == j else 0) for j in range(3)] for i in range(3)]
    best = None
    for r1, r2 in ((0, 1), (0, 2), (1, 2)):
        c = _cross3(N[r1], N[r2])
        size = max(abs(c[0]).mid(), abs(c[1]).mid(), abs(c[2]).mid())
        if best is None or size > best[0]:
            best = (size, c)
    p = _normalize(best[1])
    if lorentz(p, p) <= 0:
        raise PrecisionError
    # a point on the axis and its image
    o = (arb(0), arb(0), arb(1))
    q = _project(o, p)
    mq = apply(M, q)
    qx, qy = q[0] / q[2], q[1] / q[2]
    dx, dy = mq[0] / mq[2] - qx, mq[1] / mq[2] - qy
    if sign(p[0] * (-dy) + p[1] * dx) < 0:
        p = (-p[0], -p[1], -p[2])
    return p


def _project(x, p):
    """Closest point to x on the geodesic with pole p."""
    c = lorentz(x, p) / lorentz(p, p)
    q = (x[0] - c * p[0], x[1] - c * p[1], x[2] - c * p[2])
    nn = -lorentz(q, q)
    if not nn > 0:
        raise PrecisionError
    s = nn.sqrt()
    if q[2] < 0:
        s = -s
    return (q[0] / s, q[1] / s, q[2] / s)


def _side_signs(p, verts):
    return [lorentz(p, v) for v in verts]


def _crosses_polygon(vals) -> bool:
    pos = neg = False
    for v in vals:
        if v > 0:
            pos = True
        elif v < 0:
            neg = True
        else:
            raise PrecisionError
    return pos and neg


def _star_words(genus: int):
    """Short elements whose tiles surround the fundamental polygon."""
    from .words import relator, inverse
    r = relator(genus)
    n = len(r)
    seen, out = set(), []
    for base in (r, inverse(r, genus)):
        for s in range(n):
            rot = base[s:] + base[:s]
            for L in range(1, n):
                w = rot[:L]
                if w not in seen:
                    seen.add(w)
                    out.append(w)
    out.sort(key=len)
    return out


def _trace_at(genus: int, word, prec: int, check_simple: bool) -> Trace:
    m = model(genus)
    fr = m.frame(prec)
    n = m.n
    old = ctx.prec
    ctx.prec = prec
    try:
        M = m.word_matrix(word, prec)
        tr = M[0, 0] + M[1, 1] + M[2, 2]
        if not tr > 3:
            # Dehn reduction already rejects trivial words; only a narrow
            # ball may confirm a trace of 3 here
            if (tr - 3).contains(0) and tr.rad() < 2 ** -20:
                raise NullHomotopic("word is trivial")
            raise PrecisionError
        length = float(((tr - 1) / 2).acosh().mid())
        p = _axis_pole(M)
        # Dirichlet descent towards the origin
        for _ in range(10 * len(word) + 50):
            q = _project((arb(0), arb(0), arb(1)), p)
            here = -q[2]
            vals = [lorentz(q, w) for w in fr.orbit_o]
            j = max(range(n), key=lambda k: vals[k].mid())
            if vals[j] > here:
                p = _normalize(apply(fr.gens_inv[j], p))
            else:
                break
        else:
            raise AssertionError("descent did not terminate")
        if not _crosses_polygon(_side_signs(p, fr.verts)):
            for w in _star_words(genus):
                pp = p
                for x in w:
                    pp = apply(fr.gens_inv[x], pp)
                if _crosses_polygon(_side_signs(pp, fr.verts)):
                    p = _normalize(pp)
                    break
            else:
                raise DegenerateGeometry("axis does not meet the polygon star")
        p0 = p
        chords: list[Chord] = []
        exits: list[int] = []
        U = arb_mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        limit = 40 * len(word) + 100
        while True:
            vals = _side_signs(p, fr.verts)
            sg = [sign(v) for v in vals]
            a = b = -1
            for k in range(n):
                k1 = (k + 1) % n
                if sg[k] > 0 and sg[k1] < 0:
                    a = k
                elif sg[k] < 0 and sg[k1] > 0:
                    b = k
            ta = vals[a] / (vals[a] - vals[(a + 1) % n])
            tb = vals[b] / (vals[b] - vals[(b + 1) % n])
            chords.append(Chord(a, ta, b, tb))
            exits.append(b)
            U = U * fr.gens[b]
            p = _normalize(apply(fr.gens_inv[b], p))
            c = _cross3(p, p0)
            if c[0].contains(0) and c[1].contains(0) and c[2].contains(0):
                if not (p[0] * p0[0] + p[1] * p0[1] + p[2] * p0[2]) > 0:
                    raise PrecisionError
                break
            if len(chords) > limit:
                raise PrecisionError
        tu = U[0, 0] + U[1, 1] + U[2, 2]
        if not (tu - tr).contains(0):
            if tu < tr and tu > 3:
                # a genuine root has length dividing the curve's length
                k = ((tr - 1) / 2).acosh() / ((tu - 1) / 2).acosh()
                kk = int(round(float(k.mid())))
                if kk >= 2 and (k - kk).contains(0):
                    raise NotPrimitive("curve is a proper power")
            raise PrecisionError
        # positions late in a long trace lose accuracy; insist on sharp ones
        for ch in chords:
            if ch.ta.rad() > POS_TOL or ch.tb.rad() > POS_TOL:
                raise PrecisionError
        trace = Trace(genus, tuple(exits), chords, prec, length)
        if check_simple and self_crossings(trace) > 0:
            raise NotSimple("geodesic has self-intersections")
        return trace
    finally:
        ctx.prec = old


def trace_word(genus: int, word, check_simple: bool = True, prec: int | None = None) -> Trace:
    """Trace the closed geodesic freely homotopic to ``word``.

    Raises NullHomotopic, NotPrimitive or NotSimple for words that do not
    represent an essential simple closed curve.
    """
    w = reduce_cyclic(word, genus)
    if not w:
        raise NullHomotopic("word is trivial")
    p = prec or initial_prec(genus, w)
    while p <= MAX_PREC:
        try:
            return _trace_at(genus, w, p, check_simple)
        except PrecisionError:
            p *= 2
    raise DegenerateGeometry("precision limit reached")


def _pos_lt(s1, t1, s2, t2) -> bool:
    if s1 != s2:
        return s1 < s2
    return sign(t2 - t1) > 0


def _between(lo, hi, x) -> bool:
    return _pos_lt(*lo, *x) and _pos_lt(*x, *hi)


def chords_cross(c: Chord, d: Chord) -> bool:
    p1, p2 = (c.a, c.ta), (c.b, c.tb)
    if _pos_lt(*p2, *p1):
        p1, p2 = p2, p1
    q1 = _between(p1, p2, (d.a, d.ta))
    q2 = _between(p1, p2, (d.b, d.tb))
    return q1 != q2


def self_crossings(tr: Trace) -> int:
    cs = tr.chords
    k = 0
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            if chords_cross(cs[i], cs[j]):
                k += 1
    return k


# ----------------------------------------------------------------------
# chord geometry in the Klein model

def chord_points(tr: Trace):
    """Klein endpoints (entry, exit) of every chord, as arb pairs."""
    cached = getattr(tr, "_pts", None)
    if cached is not None:
        return cached
    verts = model(tr.genus).frame(tr.prec).verts
    n = len(verts)

    def at(side, t):
        v, w = verts[side], verts[(side + 1) % n]
        return (v[0] + t * (w[0] - v[0]), v[1] + t * (w[1] - v[1]))

    with working_prec(tr.prec):
        pts = [(at(c.a, c.ta), at(c.b, c.tb)) for c in tr.chords]
    tr._pts = pts
    return pts


def _orient(p, q, x):
    return (q[0] - p[0]) * (x[1] - p[1]) - (q[1] - p[1]) * (x[0] - p[0])


def crossings_between(ta: Trace, tb: Trace):
    """All transverse crossings of two distinct geodesics inside the polygon.

    Returns tuples (i, j, sign, u) with i, j chord indices, ``sign`` = +1
    when b crosses a from right to left, and ``u`` the fraction along
    chord i of a where the crossing sits.
    """
    with working_prec(max(ta.prec, tb.prec)):
        return _crossings_between(ta, tb)


def _crossings_between(ta: Trace, tb: Trace):
    pa, pb = chord_points(ta), chord_points(tb)
    out = []
    for i, c in enumerate(ta.chords):
        for j, d in enumerate(tb.chords):
            if not chords_cross(c, d):
                continue
            (a0, a1), (b0, b1) = pa[i], pb[j]
            o0, o1 = _orient(b0, b1, a0), _orient(b0, b1, a1)
            u = o0 / (o0 - o1)
            da = (a1[0] - a0[0], a1[1] - a0[1])
            db = (b1[0] - b0[0], b1[1] - b0[1])
            s = sign(da[0] * db[1] - da[1] * db[0])
            out.append((i, j, s, u))
    return out


def diagonal_param(tr: Trace, i: int, k: int) -> arb:
    """Fraction from polygon vertex 0 to vertex k where chord i meets that diagonal."""
    verts = model(tr.genus).frame(tr.prec).verts
    x0, x1 = chord_points(tr)[i]
    v0, vk = verts[0], verts[k]
    with working_prec(tr.prec):
        o0, ok = _orient(x0, x1, v0), _orient(x0, x1, vk)
        return o0 / (o0 - ok)

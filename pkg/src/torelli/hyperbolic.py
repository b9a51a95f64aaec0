"""Hyperbolic model of the closed genus-g surface used to find canonical
representatives of curves.

The surface is the quotient of the hyperboloid by the group generated by
the side pairings of a 4g-gon.  Every essential closed curve has a unique
closed geodesic in its free homotopy class, and distinct geodesics meet
minimally.  Tracing that geodesic through the (slightly perturbed)
fundamental polygon gives a cutting sequence that is a canonical,
purely combinatorial label for the isotopy class.

All numerics use arb ball arithmetic (python-flint).  Every branch taken
on a comparison is certified; an ambiguous comparison raises
``PrecisionError`` and callers retry with more bits.

Conventions: Lorentz form <x,y> = x0*y0 + x1*y1 - x2*y2; points of the
hyperbolic plane have x2 > 0; Klein coordinates are (x0/x2, x1/x2).
A directed geodesic is stored by its pole ``p`` (spacelike), chosen so
that <p, X> > 0 exactly for points X to its left.
"""
from __future__ import annotations

from contextlib import contextmanager

from dataclasses import dataclass
from functools import lru_cache

from flint import arb, arb_mat, ctx

from .words import relator, side_pairing


class PrecisionError(ArithmeticError):
    """A certified comparison could not be decided at the working precision."""


class DegenerateGeometry(ValueError):
    """Geometry hit a non-generic configuration at every precision tried."""


class NotSimple(ValueError):
    pass


class NotPrimitive(ValueError):
    pass


class NullHomotopic(ValueError):
    pass


MAX_PREC = 1 << 14

# Perturbation of the polygon vertex: rotate by EPS_ROT then push along
# the x-axis by EPS_PUSH.  Any small generic values work; these are frozen
# because canonical forms depend on them.
EPS_ROT = "0.0137"
EPS_PUSH = "0.0391"
# generic interior point used to locate a tile from a point
WALK_START = ("0.0123", "0.0071")


@contextmanager
def working_prec(prec: int):
    """Raise flint's working precision to at least ``prec`` bits."""
    old = ctx.prec
    ctx.prec = max(old, prec)
    try:
        yield
    finally:
        ctx.prec = old


def sign(x: arb) -> int:
    if x > 0:
        return 1
    if x < 0:
        return -1
    raise PrecisionError


def lorentz(u, v):
    return u[0] * v[0] + u[1] * v[1] - u[2] * v[2]


def apply(M: arb_mat, v):
    return (M[0, 0] * v[0] + M[0, 1] * v[1] + M[0, 2] * v[2],
            M[1, 0] * v[0] + M[1, 1] * v[1] + M[1, 2] * v[2],
            M[2, 0] * v[0] + M[2, 1] * v[1] + M[2, 2] * v[2])


def _normalize(p):
    s = max(abs(p[0]).mid(), abs(p[1]).mid(), abs(p[2]).mid())
    if s == 0:
        raise PrecisionError
    return (p[0] / s, p[1] / s, p[2] / s)


def lorentz_inverse(M: arb_mat) -> arb_mat:
    # G M^T G with G = diag(1, 1, -1)
    g = (1, 1, -1)
    return arb_mat([[M[j, i] * g[i] * g[j] for j in range(3)] for i in range(3)])


def _rot(phi: arb) -> arb_mat:
    c, s = phi.cos(), phi.sin()
    return arb_mat([[c, -s, 0], [s, c, 0], [0, 0, 1]])


def _boost_x(d: arb) -> arb_mat:
    c, s = d.cosh(), d.sinh()
    return arb_mat([[c, 0, s], [0, 1, 0], [s, 0, c]])


def _half_turn(m) -> arb_mat:
    # H = -I - 2 m m^T G
    g = (1, 1, -1)
    return arb_mat([[(-1 if i == j else 0) - 2 * m[i] * m[j] * g[j]
                     for j in range(3)] for i in range(3)])


@dataclass
class Frame:
    """All numerical data of the model at one working precision."""
    prec: int
    gens: list          # T_j as arb_mat
    gens_inv: list
    verts: list         # perturbed polygon vertices, homogeneous (x, y, 1)
    orbit_o: list       # T_j applied to the origin (for Dirichlet descent)
    walk_start: tuple


class HyperbolicModel:
    """Fuchsian side-pairing group of the regular 4g-gon, perturbed polygon."""

    def __init__(self, genus: int):
        if genus < 2:
            raise ValueError("hyperbolic model needs genus >= 2")
        self.genus = genus
        self.n = 4 * genus
        self.sigma = side_pairing(genus)
        self.relator = relator(genus)
        self._frames: dict[int, Frame] = {}

    def frame(self, prec: int) -> Frame:
        fr = self._frames.get(prec)
        if fr is None:
            old = ctx.prec
            ctx.prec = prec + 32
            try:
                fr = self._build(prec)
            finally:
                ctx.prec = old
            self._frames[prec] = fr
        return fr

    def _build(self, prec: int) -> Frame:
        n, sig = self.n, self.sigma
        pi = arb.pi()
        theta = [2 * pi * k / n for k in range(n)]
        cot = (pi / n).cos() / (pi / n).sin()
        cosh_r = cot * cot
        sinh_r = (cosh_r * cosh_r - 1).sqrt()
        cosh_m = cot  # inradius of the regular polygon
        sinh_m = (cosh_m * cosh_m - 1).sqrt()
        gens = []
        for j in range(n):
            half = (theta[j] + (theta[(j + 1) % n] if j + 1 < n else theta[0] + 2 * pi)) / 2
            m = (sinh_m * half.cos(), sinh_m * half.sin(), cosh_m)
            gens.append(_half_turn(m) * _rot(theta[j] - theta[sig[j]]))
        gens_inv = [lorentz_inverse(T) for T in gens]
        reg = [(sinh_r * t.cos(), sinh_r * t.sin(), cosh_r) for t in theta]
        for j in range(n):
            a = apply(gens[j], reg[sig[j]])
            b = reg[(j + 1) % n]
            if not all((a[i] - b[i]).contains(0) for i in range(3)):
                raise AssertionError("side pairing does not match the polygon")
        E = _boost_x(arb(EPS_PUSH)) * _rot(arb(EPS_ROT))
        v = {0: apply(E, reg[0])}
        while len(v) < n:
            for j in range(n):
                if sig[j] in v and (j + 1) % n not in v:
                    v[(j + 1) % n] = apply(gens[j], v[sig[j]])
                if (sig[j] + 1) % n in v and j not in v:
                    v[j] = apply(gens[j], v[(sig[j] + 1) % n])
        for j in range(n):
            a = apply(gens[j], v[sig[j]])
            b = v[(j + 1) % n]
            c = apply(gens[j], v[(sig[j] + 1) % n])
            d = v[j]
            if not all((a[i] - b[i]).contains(0) and (c[i] - d[i]).contains(0)
                       for i in range(3)):
                raise AssertionError("perturbed polygon is inconsistent")
        verts = [(v[k][0] / v[k][2], v[k][1] / v[k][2], arb(1)) for k in range(n)]
        for k in range(n):
            a, b, c = verts[k], verts[(k + 1) % n], verts[(k + 2) % n]
            turn = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            if not turn > 0:
                raise AssertionError("perturbed polygon is not strictly convex")
        o = (arb(0), arb(0), arb(1))
        orbit_o = [apply(T, o) for T in gens]
        ws = (arb(WALK_START[0]), arb(WALK_START[1]), arb(1))
        return Frame(prec, gens, gens_inv, verts, orbit_o, ws)

    # ------------------------------------------------------------------
    def word_matrix(self, word, prec: int) -> arb_mat:
        fr = self.frame(prec)
        M = arb_mat([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        for x in word:
            M = M * fr.gens[x]
        return M

    def vertex_klein_float(self):
        fr = self.frame(64)
        return [(float(v[0].mid()), float(v[1].mid())) for v in fr.verts]


@lru_cache(maxsize=None)
def model(genus: int) -> HyperbolicModel:
    return HyperbolicModel(genus)

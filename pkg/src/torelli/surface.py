"""Triangulated compact orientable surfaces and cutting along multicurves.

Triangle ``t`` has sides 0, 1, 2; side ``s`` runs from corner ``s`` to
corner ``s+1``.  Every gluing identifies two sides with opposite
orientations, so side (t, s) glued to (t', s') identifies corner ``s`` of
``t`` with corner ``s'+1`` of ``t'`` and corner ``s+1`` with corner ``s'``.
With all orientation flags equal this makes the surface oriented.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Iterable

SCHEMA_VERSION = 1


class SurfaceError(ValueError):
    pass


class _UF:
    def __init__(self, n=0):
        self.p = list(range(n))

    def add(self):
        self.p.append(len(self.p))
        return len(self.p) - 1

    def find(self, x):
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)


@dataclass(frozen=True)
class TriangulatedSurface:
    triangle_count: int
    gluing: tuple            # sorted tuple of (t, s, t2, s2) with (t, s) < (t2, s2)
    genus: int
    boundary_count: int
    orientation: tuple       # +1 per triangle
    surface_id: str = ""
    parent: str | None = None

    # lookups are rebuilt on demand; the dataclass stays hashable
    def side_map(self) -> dict:
        m = {}
        for t, s, u, r in self.gluing:
            m[(t, s)] = (u, r)
            m[(u, r)] = (t, s)
        return m

    def boundary_sides(self) -> list:
        m = self.side_map()
        return [(t, s) for t in range(self.triangle_count) for s in range(3)
                if (t, s) not in m]

    # counts -----------------------------------------------------------
    def vertex_classes(self) -> dict:
        """Corner -> vertex id, by following gluings."""
        uf = _UF(3 * self.triangle_count)
        for t, s, u, r in self.gluing:
            uf.union(3 * t + s, 3 * u + (r + 1) % 3)
            uf.union(3 * t + (s + 1) % 3, 3 * u + r)
        roots = {}
        out = {}
        for t in range(self.triangle_count):
            for c in range(3):
                out[(t, c)] = roots.setdefault(uf.find(3 * t + c), len(roots))
        return out

    def counts(self) -> tuple[int, int, int]:
        V = len(set(self.vertex_classes().values()))
        E = len(self.gluing) + len(self.boundary_sides())
        return V, E, self.triangle_count

    @property
    def euler_characteristic(self) -> int:
        V, E, F = self.counts()
        return V - E + F

    @property
    def is_closed(self) -> bool:
        return self.boundary_count == 0

    def validate(self) -> None:
        seen = set()
        for t, s, u, r in self.gluing:
            for x in ((t, s), (u, r)):
                if x in seen:
                    raise SurfaceError(f"side {x} glued twice")
                if not (0 <= x[0] < self.triangle_count and 0 <= x[1] < 3):
                    raise SurfaceError(f"side {x} out of range")
                seen.add(x)
            if (t, s) == (u, r):
                raise SurfaceError("side glued to itself")
            if self.orientation[t] != self.orientation[u]:
                raise SurfaceError("incoherent orientation")
        chi = self.euler_characteristic
        if chi != 2 - 2 * self.genus - self.boundary_count:
            raise SurfaceError(f"Euler formula fails: chi={chi}")
        if len(boundary_cycles(self)) != self.boundary_count:
            raise SurfaceError("boundary loop count mismatch")

    # serialization ----------------------------------------------------
    def to_json(self) -> dict:
        return {"schema": SCHEMA_VERSION, "id": self.surface_id,
                "genus": self.genus, "boundary": self.boundary_count,
                "triangles": self.triangle_count,
                "gluing": [list(g) for g in self.gluing]}

    @classmethod
    def from_json(cls, d: dict) -> "TriangulatedSurface":
        if d.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise SurfaceError("unsupported surface schema")
        s = make_surface(d["triangles"], [tuple(g) for g in d["gluing"]],
                         surface_id=d.get("id", ""))
        if s.genus != d["genus"] or s.boundary_count != d["boundary"]:
            raise SurfaceError("surface header disagrees with gluing")
        return s


def boundary_cycles(surf: TriangulatedSurface) -> list[list]:
    """Boundary loops as lists of unglued sides, chained through vertices."""
    vc = surf.vertex_classes()
    bsides = surf.boundary_sides()
    start_at = {}
    for t, s in bsides:
        start_at.setdefault(vc[(t, s)], []).append((t, s))
    used, loops = set(), []
    for side in bsides:
        if side in used:
            continue
        loop, cur = [], side
        while cur not in used:
            used.add(cur)
            loop.append(cur)
            t, s = cur
            nxt = [x for x in start_at[vc[(t, (s + 1) % 3)]] if x not in used]
            if not nxt:
                break
            cur = nxt[0]
        loops.append(loop)
    return loops


def make_surface(triangle_count: int, gluing: Iterable, surface_id: str = "",
                 parent: str | None = None) -> TriangulatedSurface:
    norm = []
    for t, s, u, r in gluing:
        a, b = (t, s), (u, r)
        if b < a:
            a, b = b, a
        norm.append(a + b)
    norm = tuple(sorted(norm))
    tmp = TriangulatedSurface(triangle_count, norm, 0, 0, (1,) * triangle_count)
    chi = tmp.euler_characteristic
    b = len(boundary_cycles(tmp)) if tmp.boundary_sides() else 0
    twice_g = 2 - chi - b
    if twice_g % 2 or twice_g < 0:
        raise SurfaceError(f"odd genus parity (chi={chi}, b={b})")
    if not surface_id:
        h = hashlib.sha1(json.dumps(norm).encode()).hexdigest()[:12]
        surface_id = f"tri-{h}"
    surf = TriangulatedSurface(triangle_count, norm, twice_g // 2, b,
                               (1,) * triangle_count, surface_id, parent)
    surf.validate()
    return surf


# ----------------------------------------------------------------------
# the closed model: fan triangulation of the 4g-gon

def polygon_side_slot(genus: int, k: int) -> tuple[int, int]:
    """(triangle, side) carrying side k of the 4g-gon."""
    n = 4 * genus
    if k == 0:
        return (0, 0)
    if k == n - 1:
        return (n - 3, 2)
    return (k - 1, 1)


def diagonal_slots(genus: int, k: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Diagonal from polygon vertex 0 to vertex k (2 <= k <= n-2)."""
    return (k - 2, 2), (k - 1, 0)


def edge_table(genus: int):
    """Edge ids of the closed model.

    Edges 0..2g-1 are the glued polygon side pairs (the smaller side index
    first), edges 2g.. are the diagonals in order.  Returns a dict
    (triangle, side) -> edge id and the list of edge descriptions.
    """
    from .words import side_pairing
    n = 4 * genus
    sig = side_pairing(genus)
    slot_edge, desc = {}, []
    for k in range(n):
        if k < sig[k]:
            e = len(desc)
            desc.append(("side", k, sig[k]))
            slot_edge[polygon_side_slot(genus, k)] = e
            slot_edge[polygon_side_slot(genus, sig[k])] = e
    for k in range(2, n - 1):
        e = len(desc)
        desc.append(("diag", k))
        for sl in diagonal_slots(genus, k):
            slot_edge[sl] = e
    return slot_edge, desc


def make_closed_surface(genus: int) -> TriangulatedSurface:
    """One-vertex triangulation of the closed genus-g surface."""
    if not isinstance(genus, int) or genus < 1:
        raise SurfaceError("genus must be a positive integer")
    n = 4 * genus
    gl = []
    for k in range(2, n - 1):
        a, b = diagonal_slots(genus, k)
        gl.append(a + b)
    if genus == 1:
        sig = (2, 3, 0, 1)
    else:
        from .words import side_pairing
        sig = side_pairing(genus)
    for k in range(n):
        if k < sig[k]:
            gl.append(polygon_side_slot(genus, k) + polygon_side_slot(genus, sig[k]))
    s = make_surface(n - 2, gl, surface_id=f"closed-g{genus}")
    assert s.genus == genus and s.boundary_count == 0
    return s


# ----------------------------------------------------------------------
# cutting

@dataclass(frozen=True)
class Component:
    genus: int
    boundary_count: int
    incident_input_curves: frozenset
    surface: TriangulatedSurface
    boundary_sides: frozenset     # {(curve index, +1 | -1)}, +1 = left side
    euler_characteristic: int


@dataclass(frozen=True)
class CutResult:
    components: tuple
    total_chi: int

    def component_of_side(self, curve_index: int, side: int) -> int:
        for i, c in enumerate(self.components):
            if (curve_index, side) in c.boundary_sides:
                return i
        raise KeyError((curve_index, side))


def cut_along(surface: TriangulatedSurface, realization) -> CutResult:
    """Cut ``surface`` along the pairwise disjoint curves of ``realization``.

    ``realization`` provides, per (triangle, side), the ordered list of
    points (curve index, point id) from corner ``s`` towards corner
    ``s+1``, and per triangle the arcs as pairs of (side, position).
    """
    if realization.surface_id != surface.surface_id:
        raise SurfaceError("realization lives on a different surface")
    if realization.crossing_list:
        raise SurfaceError("cannot cut along crossing curves")
    side_map = surface.side_map()
    F = surface.triangle_count
    # polygon data: regions as cyclic lists of (node, kind) with edges
    # Node ids: ('c', t, corner) or ('p', t, side, pos)
    regions = []          # list of list of edges; edge = (kind, payload, u, v)
    for t in range(F):
        pts = [realization.points(t, s) for s in range(3)]
        partner = {}
        arc_curve = {}
        for (s1, i1), (s2, i2), cid, left_first in realization.arcs_in(t):
            partner[(s1, i1)] = (s2, i2)
            partner[(s2, i2)] = (s1, i1)
            arc_curve[(s1, i1)] = (cid, left_first)
            arc_curve[(s2, i2)] = (cid, -left_first)
        # boundary walk order: corner s, then points on side s
        order = []
        for s in range(3):
            order.append(("c", s))
            for i in range(len(pts[s])):
                order.append(("p", s, i))
        pos = {node: k for k, node in enumerate(order)}
        used_seg = set()
        L = len(order)
        for k in range(L):
            if k in used_seg:
                continue
            # segment k runs from order[k] to order[k+1] along the boundary
            edges = []
            cur = k
            while cur not in used_seg:
                used_seg.add(cur)
                a, b = order[cur], order[(cur + 1) % L]
                side = a[1]
                seg_index = 0 if a[0] == "c" else a[2] + 1
                edges.append(("seg", (t, side, seg_index), a, b))
                if b[0] == "c":
                    cur = pos[b]
                    continue
                q = partner[(b[1], b[2])]
                qnode = ("p",) + q
                cid, sgn = arc_curve[(b[1], b[2])]
                edges.append(("arc", (cid, sgn), b, qnode))
                cur = pos[qnode]
            regions.append((t, edges))
    # number the region corners and build the polygonal complex
    uf = _UF()
    corner_ids = []       # per region, list of uf ids for each edge's start
    seg_owner = {}
    for ri, (t, edges) in enumerate(regions):
        ids = [uf.add() for _ in edges]
        corner_ids.append(ids)
        for ei, (kind, payload, a, b) in enumerate(edges):
            if kind == "seg":
                seg_owner[payload] = (ri, ei)
    reg_uf = _UF(len(regions))
    for (t, s, si), (ri, ei) in seg_owner.items():
        other = side_map.get((t, s))
        if other is None:
            continue
        u, r = other
        nseg = len(realization.points(t, s)) + 1
        mate = (u, r, nseg - 1 - si)
        rj, ej = seg_owner[mate]
        reg_uf.union(ri, rj)
        # start of (ri, ei) meets end of (rj, ej) and vice versa
        ni = len(regions[ri][1])
        nj = len(regions[rj][1])
        uf.union(corner_ids[ri][ei], corner_ids[rj][(ej + 1) % nj])
        uf.union(corner_ids[ri][(ei + 1) % ni], corner_ids[rj][ej])
    # components
    comp_of = {}
    for ri in range(len(regions)):
        comp_of.setdefault(reg_uf.find(ri), []).append(ri)
    comps = []
    total_chi = 0
    for root, rlist in sorted(comp_of.items(), key=lambda kv: min(kv[1])):
        tris, glue = _triangulate_regions(regions, rlist, corner_ids, seg_owner,
                                          side_map, realization)
        verts = set()
        n_arcs = 0
        bsides = set()
        curves = set()
        for ri in rlist:
            for ei, (kind, payload, a, b) in enumerate(regions[ri][1]):
                verts.add(uf.find(corner_ids[ri][ei]))
                if kind == "arc":
                    n_arcs += 1
                    bsides.add(payload)
                    curves.add(payload[0])
        n_seg = n_free = 0
        for ri in rlist:
            for e in regions[ri][1]:
                if e[0] == "seg":
                    if side_map.get(e[1][:2]) is None:
                        n_free += 1
                    else:
                        n_seg += 1
        E = n_seg // 2 + n_free + n_arcs
        chi = len(verts) - E + len(rlist)
        surf = make_surface(tris, glue, parent=surface.surface_id)
        if surf.euler_characteristic != chi:
            raise AssertionError("refined triangulation changed chi")
        b = surf.boundary_count
        twice_g = 2 - chi - b
        if twice_g % 2:
            raise AssertionError("odd genus parity in cut component")
        comps.append(Component(twice_g // 2, b, frozenset(curves), surf,
                               frozenset(bsides), chi))
        total_chi += chi
    if total_chi != surface.euler_characteristic:
        raise AssertionError("cutting changed the Euler characteristic")
    nb = sum(c.boundary_count for c in comps)
    if nb != surface.boundary_count + 2 * realization.n_curves:
        raise AssertionError("each cut curve must add two boundary circles")
    return CutResult(tuple(comps), total_chi)


def _triangulate_regions(regions, rlist, corner_ids, seg_owner, side_map, realization):
    """Fan-triangulate each region polygon; glue segments and fan diagonals."""
    tri_of_edge = {}
    glue = []
    ntri = 0
    for ri in rlist:
        edges = regions[ri][1]
        k = len(edges)
        if k < 3:
            raise AssertionError("degenerate region")
        # triangle j = (0, j+1, j+2); edge e_{j+1} is side 1 of triangle j
        base = ntri
        ntri += k - 2
        for j in range(k - 2):
            if j > 0:
                glue.append((base + j - 1, 2, base + j, 0))
        tri_of_edge[(ri, 0)] = (base, 0)
        for e in range(1, k - 1):
            tri_of_edge[(ri, e)] = (base + e - 1, 1)
        tri_of_edge[(ri, k - 1)] = (base + k - 3, 2)
    done = set()
    for ri in rlist:
        for ei, (kind, payload, a, b) in enumerate(regions[ri][1]):
            if kind != "seg":
                continue
            tt, s, si = payload
            other = side_map.get((tt, s))
            if other is None:
                continue
            u, r = other
            nseg = len(realization.points(tt, s)) + 1
            rj, ej = seg_owner[(u, r, nseg - 1 - si)]
            key = frozenset({(ri, ei), (rj, ej)})
            if key in done:
                continue
            done.add(key)
            glue.append(tri_of_edge[(ri, ei)] + tri_of_edge[(rj, ej)])
    return ntri, glue

"""Finite truncations of the curve complex, the Torelli building and the
auxiliary graphs used in the connectivity arguments.

Only vertices and edges are stored; higher simplices are the flag closure.
Curve ids are indices into the universe's sorted curve tuple.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .classify import (Subsurface, check_marked_triple, cut_curves, is_separating,
                       separation_profile)
from .curves import OrientedCurve, geometric_intersection, homology_class
from .index import IntersectionIndex
from .surface import SurfaceError

GRAPH_SCHEMA = 1


class Graph:
    """Undirected simple graph with string vertex ids."""

    def __init__(self, vertices=(), edges=(), labels=None, name: str = "graph"):
        self.name = name
        self.vertices = list(vertices)
        self.adj = {v: set() for v in self.vertices}
        if len(self.adj) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        self.labels = dict(labels or {})
        for u, v in edges:
            self.add_edge(u, v)
        self._components = None

    def add_edge(self, u, v):
        if u == v:
            raise ValueError("self-loops are not allowed")
        if u not in self.adj or v not in self.adj:
            raise KeyError(f"edge ({u}, {v}) references an unknown vertex")
        self.adj[u].add(v)
        self.adj[v].add(u)
        self._components = None

    def has_edge(self, u, v) -> bool:
        return v in self.adj[u]

    def edges(self):
        pos = {v: i for i, v in enumerate(self.vertices)}
        out = []
        for u in self.vertices:
            for v in self.adj[u]:
                if pos[u] < pos[v]:
                    out.append((u, v))
        out.sort(key=lambda e: (pos[e[0]], pos[e[1]]))
        return out

    @property
    def n_edges(self) -> int:
        return sum(len(s) for s in self.adj.values()) // 2

    def __len__(self):
        return len(self.vertices)

    def components(self) -> list:
        if self._components is None:
            seen, comps = set(), []
            for s in self.vertices:
                if s in seen:
                    continue
                comp, queue = [], deque([s])
                seen.add(s)
                while queue:
                    u = queue.popleft()
                    comp.append(u)
                    for w in self.adj[u]:
                        if w not in seen:
                            seen.add(w)
                            queue.append(w)
                comps.append(comp)
            self._components = comps
        return self._components

    def component_label(self) -> dict:
        return {v: i for i, comp in enumerate(self.components()) for v in comp}

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def find_path(self, u, v):
        """Shortest vertex path from u to v, or None."""
        if u not in self.adj or v not in self.adj:
            raise KeyError("unknown vertex id")
        prev = {u: None}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            if x == v:
                path = []
                while x is not None:
                    path.append(x)
                    x = prev[x]
                return path[::-1]
            for w in sorted(self.adj[x]):
                if w not in prev:
                    prev[w] = x
                    queue.append(w)
        return None

    def distances_from(self, u) -> dict:
        dist = {u: 0}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for w in self.adj[x]:
                if w not in dist:
                    dist[w] = dist[x] + 1
                    queue.append(w)
        return dist

    def subgraph(self, keep) -> "Graph":
        keep = [v for v in self.vertices if v in set(keep)]
        ks = set(keep)
        return Graph(keep, [(a, b) for a, b in self.edges() if a in ks and b in ks],
                     {v: self.labels[v] for v in keep if v in self.labels}, self.name)

    def to_json(self) -> dict:
        return {"schema": GRAPH_SCHEMA, "name": self.name, "vertices": self.vertices,
                "labels": {v: self.labels[v] for v in self.vertices if v in self.labels},
                "edges": [list(e) for e in self.edges()]}

    @classmethod
    def from_json(cls, d: dict) -> "Graph":
        if d.get("schema") != GRAPH_SCHEMA:
            raise ValueError("unsupported graph schema")
        return cls(d["vertices"], [tuple(e) for e in d["edges"]], d.get("labels"), d.get("name", "graph"))

    def to_dot(self) -> str:
        lines = [f"graph {_dot_id(self.name)} {{"]
        for v in self.vertices:
            lab = self.labels.get(v, v)
            lines.append(f"  {_dot_id(v)} [label={_dot_id(lab)}];")
        for a, b in self.edges():
            lines.append(f"  {_dot_id(a)} -- {_dot_id(b)};")
        lines.append("}")
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        return (isinstance(other, Graph) and self.vertices == other.vertices
                and self.edges() == other.edges() and self.labels == other.labels)


def _dot_id(s) -> str:
    return json.dumps(str(s))


def components(g: Graph) -> list:
    return g.components()


def find_path(g: Graph, u, v):
    return g.find_path(u, v)


def curve_vid(i: int) -> str:
    return f"c{i}"


# ----------------------------------------------------------------------
# per-universe analysis cache

class UniverseData:
    """Intersection matrix, homology and separation data of a universe."""

    def __init__(self, universe):
        self.universe = universe
        self.curves = list(universe.curves)
        self.index = IntersectionIndex(self.curves)
        self.M = self.index.matrix()
        n = len(self.curves)
        g = universe.genus
        self.H = np.array([homology_class(OrientedCurve(c)).coords for c in self.curves],
                          dtype=np.int64).reshape(n, 2 * g)
        self.separating = np.array([is_separating(c) for c in self.curves], dtype=bool)
        self._profiles = {}

    @property
    def disjoint(self) -> np.ndarray:
        """Disjoint or equal; the reflexive relation used by the building."""
        return self.M == 0

    def profile(self, i: int):
        if i not in self._profiles:
            self._profiles[i] = separation_profile(self.curves[i])
        return self._profiles[i]

    def genus_one(self) -> list:
        return [i for i in range(len(self.curves)) if self.separating[i] and self.profile(i).is_genus_one]

    def same_class_pairs(self) -> list:
        """Disjoint non-separating pairs with [a] = +-[b] (homology route)."""
        groups = {}
        for i in np.flatnonzero(~self.separating):
            h = self.H[i]
            lead = h[np.flatnonzero(h)[0]]
            groups.setdefault(tuple(h if lead > 0 else -h), []).append(int(i))
        out = []
        for ids in groups.values():
            for a, i in enumerate(ids):
                for j in ids[a + 1:]:
                    if self.M[i, j] == 0:
                        out.append((i, j))
        return sorted(out)


def build_curve_complex(universe, data: UniverseData | None = None) -> Graph:
    data = data or UniverseData(universe)
    n = len(data.curves)
    iu, ju = np.nonzero(np.triu(data.M == 0, 1))
    vs = [curve_vid(i) for i in range(n)]
    return Graph(vs, [(vs[a], vs[b]) for a, b in zip(iu, ju)],
                 {v: v for v in vs}, "curve_complex")


# ----------------------------------------------------------------------
# Torelli building

@dataclass(frozen=True, order=True)
class TorelliVertex:
    tag: str              # "SC" or "BP"
    payload: tuple        # (i,) or (i, j) with i < j

    def __post_init__(self):
        if self.tag not in ("SC", "BP"):
            raise ValueError("tag must be SC or BP")
        if len(self.payload) != (1 if self.tag == "SC" else 2):
            raise ValueError("payload size does not match the tag")
        if self.tag == "BP" and not self.payload[0] < self.payload[1]:
            raise ValueError("BP payload must be a sorted pair of distinct ids")

    @property
    def vid(self) -> str:
        return f"{self.tag}:" + "-".join(str(x) for x in self.payload)

    @classmethod
    def parse(cls, vid: str) -> "TorelliVertex":
        tag, rest = vid.split(":")
        return cls(tag, tuple(int(x) for x in rest.split("-")))

    @property
    def curves(self) -> tuple:
        return self.payload

    def __str__(self):
        return self.vid


def SC(i: int) -> TorelliVertex:
    return TorelliVertex("SC", (int(i),))


def BP(i: int, j: int) -> TorelliVertex:
    i, j = sorted((int(i), int(j)))
    return TorelliVertex("BP", (i, j))


@dataclass
class BuildingTruncation:
    universe_id: str
    genus: int
    vertices: list
    adjacency: dict                      # vertex -> set of vertices
    marked_triangles: set                # frozensets of three BP vertices
    marking: dict
    curve_count: int = 0
    stats: dict = field(default_factory=dict)

    def __post_init__(self):
        self._vset = set(self.vertices)

    def __contains__(self, v) -> bool:
        return v in self._vset

    def adjacent(self, u: TorelliVertex, v: TorelliVertex) -> bool:
        return v in self.adjacency.get(u, ())

    def connected(self, u: TorelliVertex, v: TorelliVertex) -> bool:
        """Adjacent or equal."""
        return u == v or self.adjacent(u, v)

    @property
    def edges(self) -> set:
        return {frozenset((u, v)) for u in self.vertices for v in self.adjacency[u]}

    @property
    def sc_vertices(self) -> list:
        return [v for v in self.vertices if v.tag == "SC"]

    @property
    def bp_vertices(self) -> list:
        return [v for v in self.vertices if v.tag == "BP"]

    def triangles_containing(self, v: TorelliVertex) -> list:
        if not hasattr(self, "_tri_of"):
            self._tri_of = {}
            for t in sorted(self.marked_triangles, key=lambda t: sorted(t)):
                for x in t:
                    self._tri_of.setdefault(x, []).append(t)
        return self._tri_of.get(v, [])

    def graph(self) -> Graph:
        vs = [v.vid for v in self.vertices]
        edges = [(u.vid, v.vid) for u in self.vertices for v in self.adjacency[u] if u < v]
        return Graph(vs, edges, {v.vid: f"{v.tag} {'-'.join(map(str, v.payload))}"
                                  for v in self.vertices}, "torelli_building")

    def to_json(self) -> dict:
        return {"schema": GRAPH_SCHEMA, "universe": self.universe_id, "genus": self.genus,
                "curve_count": self.curve_count,
                "vertices": [{"id": v.vid, "tag": self.marking[v], "curves": list(v.payload)}
                             for v in self.vertices],
                "edges": sorted([sorted([u.vid, v.vid]) for u in self.vertices
                                 for v in self.adjacency[u] if u < v]),
                "marked_triangles": sorted(sorted(x.vid for x in t) for t in self.marked_triangles)}

    @classmethod
    def from_json(cls, d: dict) -> "BuildingTruncation":
        vs = [TorelliVertex.parse(r["id"]) for r in d["vertices"]]
        adj = {v: set() for v in vs}
        for a, b in d["edges"]:
            u, v = TorelliVertex.parse(a), TorelliVertex.parse(b)
            adj[u].add(v)
            adj[v].add(u)
        tris = {frozenset(TorelliVertex.parse(x) for x in t) for t in d["marked_triangles"]}
        return cls(d["universe"], d["genus"], vs, adj, tris, {v: v.tag for v in vs},
                   d.get("curve_count", 0))


def build_torelli_truncation(universe, data: UniverseData | None = None,
                             verify_triples: bool = True) -> BuildingTruncation:
    data = data or UniverseData(universe)
    g = universe.genus
    Z = data.disjoint
    sc = [SC(i) for i in np.flatnonzero(data.separating)]
    bp = []
    for i, j in data.same_class_pairs():
        # homology proposes, the cut decides
        if len(cut_curves([data.curves[i], data.curves[j]]).components) != 2:
            raise AssertionError(f"homologous disjoint pair ({i}, {j}) does not separate")
        bp.append(BP(i, j))
    vertices = sc + bp
    # adjacency: all underlying curves pairwise disjoint
    first = np.array([v.payload[0] for v in vertices], dtype=np.int64)
    second = np.array([v.payload[-1] for v in vertices], dtype=np.int64)
    A = (Z[np.ix_(first, first)] & Z[np.ix_(first, second)]
         & Z[np.ix_(second, first)] & Z[np.ix_(second, second)])
    np.fill_diagonal(A, False)
    adjacency = {v: set() for v in vertices}
    for a, b in zip(*np.nonzero(np.triu(A, 1))):
        adjacency[vertices[a]].add(vertices[b])
        adjacency[vertices[b]].add(vertices[a])
    # marked triangles: triples all of whose pairs are bounding pairs
    partners = {}
    for v in bp:
        i, j = v.payload
        partners.setdefault(i, set()).add(j)
        partners.setdefault(j, set()).add(i)
    triangles = set()
    for v in bp:
        i, j = v.payload
        for k in sorted(partners[i] & partners[j]):
            if k > j:
                if verify_triples:
                    chk = check_marked_triple(*(data.curves[x] for x in (i, j, k)), disjoint=True)
                    if not chk.marked:
                        raise AssertionError(f"triple {(i, j, k)} rejected: {chk.reason}")
                triangles.add(frozenset((BP(i, j), BP(i, k), BP(j, k))))
    if g <= 3 and triangles:
        raise AssertionError("marked triangle below genus 4")
    return BuildingTruncation(universe.digest(), g, vertices, adjacency, triangles,
                              {v: v.tag for v in vertices}, len(data.curves),
                              {"sc": len(sc), "bp": len(bp), "triangles": len(triangles)})


def link_sep(delta: TorelliVertex, tr: BuildingTruncation) -> Graph:
    if delta not in tr or delta.tag != "SC":
        raise KeyError(f"{delta} is not an SC vertex of the truncation")
    nb = sorted(v for v in tr.adjacency[delta] if v.tag == "SC")
    vs = [v.vid for v in nb]
    edges = [(a.vid, b.vid) for a, b in combinations(nb, 2) if not tr.adjacent(a, b)]
    return Graph(vs, edges, {v: v for v in vs}, f"link_sep_{delta.vid}")


# ----------------------------------------------------------------------
# auxiliary graphs

def _disjointness_graph(ids, M, name) -> Graph:
    ids = list(ids)
    vs = [curve_vid(i) for i in ids]
    edges = []
    if ids:
        sub = M[np.ix_(ids, ids)] == 0
        for a, b in zip(*np.nonzero(np.triu(sub, 1))):
            edges.append((vs[a], vs[b]))
    return Graph(vs, edges, {v: v for v in vs}, name)


def _region_members(data: UniverseData, R: Subsurface) -> list:
    """Universe curves that descend to essential non-peripheral curves of R."""
    rows = []
    for c in R.system:
        if c in data.universe:
            rows.append(data.M[data.universe.index_of(c)])
        else:
            rows.append(np.array([geometric_intersection(x, c) for x in data.curves]))
    out = []
    for i, c in enumerate(data.curves):
        meets = [int(r[i]) for r in rows]
        if not any(meets) and R.contains(c, intersections=meets):
            out.append(i)
    return out


def build_T1(universe, ambient=None, data: UniverseData | None = None) -> Graph:
    """Genus-1 circles (bounding a torus with one hole) with disjointness edges.

    ``ambient`` is the closed model (None or a closed TriangulatedSurface)
    or a Subsurface of it.
    """
    data = data or UniverseData(universe)
    if ambient is None or not isinstance(ambient, Subsurface):
        if ambient is not None and not ambient.is_closed():
            raise SurfaceError("bounded ambient surfaces must be given as a Subsurface")
        if universe.genus < 2:
            return Graph(name="T1")
        ids = data.genus_one()
    else:
        ids = [i for i in _region_members(data, ambient) if ambient.is_genus_one_in(data.curves[i])]
    return _disjointness_graph(ids, data.M, "T1")


def build_Tsep(universe, R: Subsurface, data: UniverseData | None = None) -> Graph:
    """Circles of R with the two boundary circles of R on different sides."""
    if R.boundary_count != 2:
        raise SurfaceError("T_sep needs a subsurface with exactly two boundary circles")
    data = data or UniverseData(universe)
    ids = [i for i in _region_members(data, R) if R.separates_boundary(data.curves[i])]
    return _disjointness_graph(ids, data.M, "Tsep")


def build_C0(universe, data: UniverseData | None = None, route: str = "both") -> Graph:
    """Non-separating curves; edges for disjoint jointly non-separating pairs.

    For disjoint non-isotopic non-separating curves the union separates iff
    [a] = +-[b]; ``route`` selects "homology", "cut" or "both" (asserted equal).
    """
    if route not in ("homology", "cut", "both"):
        raise ValueError("route must be homology, cut or both")
    data = data or UniverseData(universe)
    ids = [int(i) for i in np.flatnonzero(~data.separating)]
    vs = [curve_vid(i) for i in ids]
    edges = []
    for a in range(len(ids)):
        i = ids[a]
        for b in range(a + 1, len(ids)):
            j = ids[b]
            if data.M[i, j] != 0:
                continue
            hom = not (np.array_equal(data.H[i], data.H[j]) or np.array_equal(data.H[i], -data.H[j]))
            if route != "homology":
                cut = len(cut_curves([data.curves[i], data.curves[j]]).components) == 1
                if route == "both" and cut != hom:
                    raise AssertionError(f"joint separation mismatch on ({i}, {j})")
                hom = cut
            if hom:
                edges.append((vs[a], vs[b]))
    return Graph(vs, edges, {v: v for v in vs}, "C0")


def G_sep(R: Subsurface, universe, data: UniverseData | None = None) -> Graph:
    """Separating circles of a one-boundary R; edges join intersecting pairs."""
    if R.boundary_count != 1:
        raise SurfaceError("G_sep needs a subsurface with exactly one boundary circle")
    data = data or UniverseData(universe)
    ids = [i for i in _region_members(data, R) if R.is_separating_in(data.curves[i])]
    vs = [curve_vid(i) for i in ids]
    edges = []
    for a in range(len(ids)):
        for b in range(a + 1, len(ids)):
            if data.M[ids[a], ids[b]] > 0:
                edges.append((vs[a], vs[b]))
    return Graph(vs, edges, {v: v for v in vs}, "Gsep")

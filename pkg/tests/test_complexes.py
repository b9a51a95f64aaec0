import json

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from torelli.classify import Subsurface, complement_of, is_bounding_pair
from torelli.complexes import (BP, SC, BuildingTruncation, G_sep, Graph, TorelliVertex,
                               UniverseData, build_C0, build_curve_complex, build_T1,
                               build_torelli_truncation, build_Tsep, components, curve_vid,
                               find_path, link_sep)
from torelli.curves import curve_from_word
from torelli.fixtures import seed_curves, window_universe
from torelli.mcg import orbit_universe
from torelli.surface import SurfaceError
from torelli.words import relator


@st.composite
def graphs(draw):
    n = draw(st.integers(0, 12))
    vs = [f"v{i}" for i in range(n)]
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n)]
    es = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(vs, [(vs[a], vs[b]) for a, b in es])


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges())
    return h


@given(graphs())
def test_components_match_networkx(g):
    ours = sorted(sorted(c) for c in components(g))
    theirs = sorted(sorted(c) for c in nx.connected_components(to_nx(g)))
    assert ours == theirs
    assert g.is_connected() == (len(theirs) <= 1)


@given(graphs())
def test_paths_are_shortest(g):
    h = to_nx(g)
    for u in g.vertices[:3]:
        dist = g.distances_from(u)
        assert dist == dict(nx.single_source_shortest_path_length(h, u))
        for v in g.vertices:
            p = find_path(g, u, v)
            if v in dist:
                assert len(p) - 1 == dist[v] and p[0] == u and p[-1] == v
                assert all(g.has_edge(a, b) for a, b in zip(p, p[1:]))
            else:
                assert p is None


@given(graphs())
def test_graph_json_round_trip(g):
    assert Graph.from_json(json.loads(json.dumps(g.to_json()))) == g


def test_graph_rejects_loops_and_unknown_vertices():
    g = Graph(["a", "b"])
    with pytest.raises(ValueError):
        g.add_edge("a", "a")
    with pytest.raises(KeyError):
        g.add_edge("a", "z")
    with pytest.raises(ValueError):
        Graph(["a", "a"])


def test_empty_graph_dot():
    dot = Graph(name="empty").to_dot()
    assert dot.startswith('graph "empty" {') and "--" not in dot


def test_dot_preserves_labels():
    g = Graph(["SC:1", "BP:2-3"], [("SC:1", "BP:2-3")], {"SC:1": "SC 1", "BP:2-3": "BP 2-3"})
    dot = g.to_dot()
    assert '"SC:1" [label="SC 1"]' in dot and '"SC:1" -- "BP:2-3"' in dot


def test_torelli_vertex_ids():
    assert SC(3).vid == "SC:3" and BP(5, 2).vid == "BP:2-5"
    assert TorelliVertex.parse("BP:2-5") == BP(2, 5)
    with pytest.raises(ValueError):
        TorelliVertex("BP", (3, 3))
    with pytest.raises(ValueError):
        TorelliVertex("XX", (1,))


def test_curve_complex_edges_are_disjointness(u2, d2):
    g = build_curve_complex(u2, d2)
    assert len(g) == len(u2)
    for a, b in g.edges()[:200]:
        i, j = int(a[1:]), int(b[1:])
        assert d2.M[i, j] == 0


def test_t1_genus_two_has_no_edges(u2, d2):
    g = build_T1(u2, data=d2)
    assert len(g) > 0 and g.n_edges == 0
    assert all(d2.profile(int(v[1:])).is_genus_one for v in g.vertices)


def test_t1_genus_three_has_edges():
    u = orbit_universe(seed_curves("genus-one", 3), 1, 40)
    g = build_T1(u)
    assert len(g) == len(u) and g.n_edges > 0


def test_c0_routes_agree(u3, d3):
    a = build_C0(u3, d3, route="homology")
    b = build_C0(u3, d3, route="cut")
    assert a == b
    build_C0(u3, d3, route="both")
    with pytest.raises(ValueError):
        build_C0(u3, d3, route="other")


def test_c0_excludes_bounding_pairs(u3, d3):
    g = build_C0(u3, d3, route="homology")
    for i, j in d3.same_class_pairs():
        assert not g.has_edge(curve_vid(i), curve_vid(j))


def test_tsep_needs_two_boundaries():
    u = orbit_universe(seed_curves("genus-one", 3), 0, 40)
    with pytest.raises(SurfaceError):
        build_Tsep(u, Subsurface([curve_from_word(3, relator(3)[:4])], 0))


def test_tsep_genus_two_region_has_no_edges():
    b1 = curve_from_word(3, (1,))
    seeds = [curve_from_word(3, (1, 4, 7, 6, 5))]
    from torelli.fixtures import disjoint_generators
    u = orbit_universe(seeds, 3, 50, generators=disjoint_generators(3, [b1]))
    g = build_Tsep(u, complement_of(b1))
    assert len(g) >= 5 and g.n_edges == 0


def test_gsep_edges_are_intersections():
    g4 = 4
    d = curve_from_word(g4, relator(g4)[:8])
    u = orbit_universe([curve_from_word(g4, w) for w in [(0, 3, 2, 1), (4, 7, 6, 5), d.word()]],
                       1, 60)
    data = UniverseData(u)
    for k in range(2):
        R = Subsurface([d], k)
        G = G_sep(R, u, data)
        for a, b in G.edges():
            assert data.M[int(a[1:]), int(b[1:])] > 0


@pytest.fixture(scope="module")
def window4():
    u = window_universe(4)
    d = UniverseData(u)
    return u, d, build_torelli_truncation(u, d)


def test_truncation_vertices_and_markings(window4):
    u, d, tr = window4
    assert tr.stats["sc"] == int(d.separating.sum())
    for v in tr.bp_vertices:
        i, j = v.payload
        assert is_bounding_pair(d.curves[i], d.curves[j])
        assert tr.marking[v] == "BP"
    assert tr.stats["triangles"] >= 1


def test_truncation_adjacency_is_disjointness(window4):
    u, d, tr = window4
    for e in list(tr.edges)[:300]:
        a, b = tuple(e)
        ids = set(a.payload) | set(b.payload)
        assert all(d.M[i, j] == 0 for i in ids for j in ids)
    for t in tr.marked_triangles:
        for a in t:
            for b in t:
                assert a == b or tr.adjacent(a, b)


def test_truncation_json_round_trip(window4):
    u, d, tr = window4
    tr2 = BuildingTruncation.from_json(json.loads(json.dumps(tr.to_json())))
    assert tr2.edges == tr.edges and tr2.marked_triangles == tr.marked_triangles
    assert tr2.graph() == tr.graph()


def test_genus_three_truncation_has_no_triangles(d3, u3):
    tr = build_torelli_truncation(u3, d3)
    assert tr.stats["bp"] > 0 and tr.stats["triangles"] == 0


def test_link_sep_of_non_sc_vertex_rejected(window4):
    u, d, tr = window4
    with pytest.raises(KeyError):
        link_sep(tr.bp_vertices[0], tr)

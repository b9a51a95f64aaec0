import pytest
from hypothesis import given, settings, strategies as st

from torelli import encoding as enc
from torelli.complexes import BP, SC, UniverseData, build_torelli_truncation
from torelli.curves import CurveError
from torelli.experiments import fixture_truncation, one_move_pairs
from torelli.fixtures import seed_curves
from torelli.mcg import TwistWord, orbit_universe


@pytest.fixture(scope="module")
def rec4():
    return fixture_truncation("recipe", 4)


@pytest.fixture(scope="module")
def pairs4(rec4):
    u, d, tr = rec4
    return enc.all_admissible_pairs(tr)


def test_recipe_has_admissible_pairs(rec4, pairs4):
    assert rec4[2].stats["triangles"] > 0
    assert len(pairs4) > 0


def test_admissible_verdict_matches_triples(rec4, pairs4):
    tr = rec4[2]
    for p in pairs4[:40]:
        v = enc.is_admissible(p.gamma, p.delta, tr)
        assert v.witnessed and v.value == enc.WITNESSED
        assert len(v.details["witnesses"]) == len(enc.justifying_triples(p.gamma, p.delta, tr))


def test_decoded_curve_lies_in_gamma_and_is_nonseparating(rec4, pairs4):
    u, d, tr = rec4
    for p in pairs4:
        c = enc.decode(p)
        assert c in p.gamma.payload and not d.separating[c]
        assert enc.decode_all_witnesses(p.gamma, p.delta, tr) == c


def test_non_admissible_pair_not_found(rec4):
    u, d, tr = rec4
    gamma = tr.bp_vertices[0]
    near = [x for x in tr.adjacency[gamma] if x.tag == "SC"]
    if not near:
        pytest.skip("no adjacent separating vertex")
    v = enc.is_admissible(gamma, near[0], tr)
    assert v.value == enc.NOT_FOUND


def test_decode_errors(rec4, pairs4):
    p = pairs4[0]
    with pytest.raises(enc.DecodeError):
        enc.decode(enc.AdmissiblePair(p.gamma, p.delta))
    w = p.witness
    bad = enc.JustifyingTriple(w.gamma, w.gamma, w.beta)
    with pytest.raises(enc.DecodeError):
        enc.decode(enc.AdmissiblePair(p.gamma, p.delta, bad))


def test_tag_checks(rec4, pairs4):
    p = pairs4[0]
    with pytest.raises(ValueError):
        enc.justifying_triples(p.delta, p.gamma, rec4[2])
    with pytest.raises(KeyError):
        enc.justifying_triples(BP(10 ** 6, 10 ** 6 + 1), p.delta, rec4[2])


def test_separating_curves_have_no_encodings(rec4):
    u, d, tr = rec4
    i = int(d.separating.nonzero()[0][0])
    with pytest.raises(CurveError):
        enc.encodings_of(i, tr, d)


def test_encodings_decode_back(rec4):
    u, d, tr = rec4
    seen = 0
    for i in range(len(u)):
        if d.separating[i]:
            continue
        for p in enc.encodings_of(i, tr, d):
            assert enc.decode(p) == i
            seen += 1
    assert seen > 0


def test_moves_are_valid_and_preserve_decoding(rec4, pairs4):
    tr = rec4[2]
    before = dict(enc.MOVE_AUDIT)
    n = 0
    for p in pairs4[:30]:
        for m in enc.move_neighbors(p, tr):
            assert enc.validate_move(m, tr)
            assert enc.decode(m.before) == enc.decode(m.after)
            n += 1
    assert n > 0
    produced = enc.MOVE_AUDIT["produced"] - before["produced"]
    preserved = enc.MOVE_AUDIT["decode_preserved"] - before["decode_preserved"]
    assert produced == preserved >= n


def test_validate_move_rejects_unknown_kind(rec4, pairs4):
    tr = rec4[2]
    m = enc.move_neighbors(pairs4[0], tr)[0]
    assert not enc.validate_move(enc.MoveRecord("III", m.before, m.after, m.shared), tr)


def test_one_move_fixtures_connect_in_one_step(rec4):
    tr = rec4[2]
    fx = one_move_pairs(tr)
    assert {k for k, _, _ in fx} <= {"I", "II"} and fx
    for kind, p, q in fx[:40]:
        r = enc.moves_connected(p, q, tr, budget=50)
        assert r.found and len(r.path) <= 1


def test_moves_connected_trivial_and_budget(pairs4, rec4):
    tr = rec4[2]
    p = pairs4[0]
    r = enc.moves_connected(p, p, tr, budget=1)
    assert r.found and r.path == []
    with pytest.raises(ValueError):
        enc.moves_connected(p, p, tr, budget=0)


@settings(max_examples=15)
@given(data=st.data())
def test_move_paths_keep_decoding(rec4, pairs4, data):
    tr = rec4[2]
    p = data.draw(st.sampled_from(pairs4))
    q = data.draw(st.sampled_from(pairs4))
    r = enc.moves_connected(p, q, tr, budget=30)
    if r.found:
        assert all(enc.validate_move(m, tr) for m in r.path)
        if r.path:
            assert r.path[0].before.key == p.key and r.path[-1].after.key == q.key
    else:
        assert r.expansions <= 30


def test_edge_criterion_equal_and_separating(rec4):
    u, d, tr = rec4
    v = enc.building_edge_criterion(0, 0, tr, d)
    assert v.witnessed and v.details["case"] == "equal"
    seps = [int(i) for i in d.separating.nonzero()[0]]
    for a in seps[:4]:
        for b in seps[:4]:
            if a < b:
                vd = enc.building_edge_criterion(a, b, tr, d)
                assert vd.witnessed == (d.M[a, b] == 0)


def test_s0_never_witnessed_true(rec4):
    u, d, tr = rec4
    g1 = [i for i in range(len(u)) if d.separating[i] and d.profile(i).is_genus_one]
    ns = [i for i in range(len(u)) if not d.separating[i]][:6]
    assert g1
    for c in ns:
        v = enc.check_S0(c, SC(g1[0]), tr, d)
        assert v.value in (enc.HOLDS_ON_SAMPLE, enc.NOT_FOUND, enc.INSUFFICIENT)


def test_s1_requires_genus_one_delta():
    u = orbit_universe(seed_curves("separating", 4) + seed_curves("basis", 4)[:1], 0, 40)
    d = UniverseData(u)
    tr = build_torelli_truncation(u, d)
    big = [i for i in range(len(u)) if d.separating[i] and not d.profile(i).is_genus_one]
    ns = next(i for i in range(len(u)) if not d.separating[i])
    assert big
    with pytest.raises(CurveError):
        enc.check_S1(ns, SC(big[0]), tr, d)


def test_genus_one_recognition_verdicts(rec4):
    u, d, tr = rec4
    for v in tr.sc_vertices[:6]:
        r = enc.genus_one_recognition(v, tr)
        assert r.value in (enc.CONNECTED, enc.DISCONNECTED, enc.INSUFFICIENT)


def test_reconstruction_is_sound(rec4):
    u, d, tr = rec4
    rep = enc.reconstruction_report(tr, d, pairs=[(i, j) for i in range(20) for j in range(i + 1, 20)])
    assert rep["soundness"] == 1.0 and rep["unsound_pairs"] == []
    assert rep["pairs"] == 190


def test_identity_map_checks_clean(rec4):
    u, d, tr = rec4
    rep = enc.check_vertex_map({v: v for v in tr.vertices}, tr)
    assert rep["vertices"] == len(tr.vertices)
    assert not rep["edge_failures"] and not rep["non_edge_failures"]
    assert not rep["triangle_failures"] and not rep["marking_failures"]
    assert rep["triangles_checked"] == len(tr.marked_triangles)


def test_induced_map_of_empty_word_is_identity(rec4):
    u, d, tr = rec4
    rep = enc.induced_building_map(TwistWord((), 4), tr, d)
    assert not rep["edge_failures"] and not rep["triangle_failures"]

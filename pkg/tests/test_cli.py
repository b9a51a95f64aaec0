import json

import pytest

from torelli.cli import EXIT_BUDGET, EXIT_FAIL, EXIT_OK, main, read_config, CliError
from torelli.complexes import Graph, UniverseData
from torelli.fixtures import seed_curves
from torelli.mcg import CurveUniverse, orbit_universe


def build(tmp_path, name="u.json", *extra):
    out = tmp_path / name
    rc = main(["build-universe", "--out", str(out), *extra])
    return rc, out


def test_depth_zero_is_seed_set(tmp_path):
    rc, out = build(tmp_path, "u.json", "--genus", "2", "--seeds", "humphries", "--depth", "0")
    assert rc == EXIT_OK
    u = CurveUniverse.from_json(json.loads(out.read_text()))
    assert len(u) == 5 and u.genus == 2


def test_builds_are_byte_identical(tmp_path):
    args = ("--genus", "2", "--seeds", "mixed", "--depth", "2", "--weight-cap", "40")
    _, a = build(tmp_path, "a.json", *args)
    _, b = build(tmp_path, "b.json", *args, "--jobs", "2")
    assert a.read_bytes() == b.read_bytes()


def test_seed_order_does_not_matter():
    seeds = seed_curves("humphries", 2)
    a = orbit_universe(seeds, 2, 40)
    b = orbit_universe(list(reversed(seeds)), 2, 40)
    assert a.digest() == b.digest()


def test_explicit_words(tmp_path):
    rc, out = build(tmp_path, "w.json", "--genus", "2", "--depth", "0", "--words", "0", "1", "0,3,2,1")
    assert rc == EXIT_OK
    assert len(CurveUniverse.from_json(json.loads(out.read_text()))) == 3


def test_bad_word_is_hard_failure(tmp_path):
    rc, _ = build(tmp_path, "x.json", "--genus", "2", "--depth", "0", "--words", "0,2")
    assert rc == EXIT_FAIL


@pytest.fixture(scope="module")
def g2file(tmp_path_factory):
    p = tmp_path_factory.mktemp("u") / "g2.json"
    assert main(["build-universe", "--genus", "2", "--seeds", "mixed", "--depth", "3",
                 "--weight-cap", "48", "--out", str(p)]) == EXIT_OK
    return p


def test_homology_vs_cut_suite(tmp_path, g2file):
    out = tmp_path / "r.json"
    rc = main(["verify", "--suite", "homology-vs-cut", "--universe", str(g2file), "--out", str(out)])
    rep = json.loads(out.read_text())
    assert rc == EXIT_OK and rep["passed"]
    assert rep["universe_digest"]


def test_t1_genus_two_suite(tmp_path, g2file):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "t1-genus2-no-edges", "--universe", str(g2file),
                 "--out", str(out)]) == EXIT_OK


def test_t1_suite_rejects_other_genus(tmp_path):
    _, u = build(tmp_path, "g3.json", "--genus", "3", "--seeds", "humphries", "--depth", "0")
    assert main(["verify", "--suite", "t1-genus2-no-edges", "--universe", str(u),
                 "--out", str(tmp_path / "r.json")]) == EXIT_FAIL


def test_missing_universe_is_hard_failure(tmp_path):
    assert main(["verify", "--suite", "homology-vs-cut", "--universe",
                 str(tmp_path / "nope.json"), "--out", str(tmp_path / "r.json")]) == EXIT_FAIL


def test_malformed_universe_is_hard_failure(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["export", "--object", "T1", "--universe", str(bad),
                 "--out", str(tmp_path / "o.json")]) == EXIT_FAIL


def test_unknown_suite(tmp_path):
    assert main(["verify", "--suite", "nonsense", "--out", str(tmp_path / "r.json")]) == EXIT_FAIL


def test_budget_exhaustion_exit_code(tmp_path):
    rc, out = build(tmp_path, "b.json", "--genus", "3", "--seeds", "humphries", "--depth", "3",
                    "--budget", "10")
    assert rc == EXIT_BUDGET and not out.exists()


def test_t1_dot_export(tmp_path, g2file):
    out = tmp_path / "t1.dot"
    assert main(["export", "--object", "T1", "--universe", str(g2file), "--format", "dot",
                 "--out", str(out)]) == EXIT_OK
    text = out.read_text()
    u = CurveUniverse.from_json(json.loads(g2file.read_text()))
    d = UniverseData(u)
    n1 = sum(bool(d.separating[i]) and d.profile(i).is_genus_one for i in range(len(u)))
    assert text.count("[label=") == n1 and " -- " not in text


def test_json_graph_export_round_trip(tmp_path, g2file):
    out = tmp_path / "cc.json"
    assert main(["export", "--object", "curve-complex", "--universe", str(g2file),
                 "--out", str(out)]) == EXIT_OK
    g = Graph.from_json(json.loads(out.read_text()))
    assert len(g) == len(CurveUniverse.from_json(json.loads(g2file.read_text())))
    assert g.n_edges > 0


def test_empty_graph_dot_is_valid(tmp_path, g2file):
    out = tmp_path / "b.dot"
    assert main(["export", "--object", "building", "--universe", str(g2file), "--format", "dot",
                 "--out", str(out)]) == EXIT_OK
    text = out.read_text()
    assert text.startswith("graph ") and text.rstrip().endswith("}")


def test_non_graph_dot_rejected(tmp_path):
    assert main(["export", "--object", "surface", "--genus", "2", "--format", "dot",
                 "--out", str(tmp_path / "s.dot")]) == EXIT_FAIL


def test_surface_and_seed_exports(tmp_path):
    s = tmp_path / "s.json"
    assert main(["export", "--object", "surface", "--genus", "3", "--out", str(s)]) == EXIT_OK
    assert json.loads(s.read_text())["genus"] == 3
    k = tmp_path / "k.json"
    assert main(["export", "--object", "seeds", "--genus", "3", "--seeds", "chain",
                 "--out", str(k)]) == EXIT_OK
    assert len(json.loads(k.read_text())["curves"]) == 2


def test_unknown_object(tmp_path, g2file):
    assert main(["export", "--object", "widget", "--universe", str(g2file),
                 "--out", str(tmp_path / "o.json")]) == EXIT_FAIL


def test_bad_link_vertex(tmp_path, g2file):
    assert main(["export", "--object", "link:XX:1", "--universe", str(g2file),
                 "--out", str(tmp_path / "o.json")]) == EXIT_FAIL


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\ngenus = 2\nseeds = humphries\ndepth = 1\nweight-cap = 30\n")
    rc, out = build(tmp_path, "c.json", "--config", str(cfg), "--depth", "0")
    assert rc == EXIT_OK
    assert len(CurveUniverse.from_json(json.loads(out.read_text()))) == 5
    assert read_config(str(cfg))["weight_cap"] == "30"


def test_config_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    rc, _ = build(tmp_path, "c.json", "--config", str(bad))
    assert rc == EXIT_FAIL
    with pytest.raises(CliError):
        read_config(str(tmp_path / "missing.cfg"))
    assert build(tmp_path, "g.json", "--genus", "1")[0] == EXIT_FAIL


def test_list(capsys):
    assert main(["list"]) == EXIT_OK
    info = json.loads(capsys.readouterr().out)
    assert "mixed" in info["seed_sets"] and "acceptance" in info["suites"]

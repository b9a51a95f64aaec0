import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from torelli.curves import OrientedCurve, curve_from_word, geometric_intersection, homology_class
from torelli.fixtures import seed_curves
from torelli.mcg import (BudgetExhausted, CurveUniverse, TwistWord,
                         apply_word, generator_classes, humphries_generators, humphries_words,
                         image_universe, is_torelli, orbit_universe, symplectic_action,
                         transvection)
from torelli.curves import symplectic_form


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_humphries_intersection_pattern(g):
    """Chain c_1..c_2g with consecutive members meeting once; d meets c_4 only."""
    gens = humphries_generators(g)
    assert len(gens) == 2 * g + 1 == len(humphries_words(g))
    chain, d = gens[:-1], gens[-1]
    for i in range(len(chain)):
        for j in range(i + 1, len(chain)):
            assert geometric_intersection(chain[i], chain[j]) == (1 if j == i + 1 else 0)
    assert [geometric_intersection(d, c) for c in chain] == [1 if k == 3 else 0 for k in range(2 * g)]


def test_humphries_count_on_genus_five_is_eleven():
    assert len(humphries_generators(5)) == 11


@pytest.mark.parametrize("g", [2, 3])
def test_transvection_is_symplectic(g):
    J = symplectic_form(g)
    for v in generator_classes(g):
        for e in (1, -1):
            T = transvection(v, e, g)
            assert np.array_equal(T.T @ J @ T, J)
            assert np.array_equal(T @ transvection(v, -e, g), np.eye(2 * g, dtype=np.int64))


@given(st.lists(st.tuples(st.integers(0, 4), st.sampled_from([1, -1])), max_size=6))
def test_symplectic_action_is_symplectic(letters):
    M = symplectic_action(TwistWord(tuple(letters), 2), 2)
    assert M.is_symplectic()
    inv = symplectic_action(TwistWord(tuple(letters), 2).inverse(), 2)
    assert (M @ inv).is_identity()


@given(st.lists(st.tuples(st.integers(0, 4), st.sampled_from([1, -1])), max_size=4),
       st.sampled_from([(0,), (1,), (0, 1, 2, 7), (4,)]))
def test_action_on_homology_matches_curves(letters, w):
    """The matrix of a word predicts the class of the image curve up to sign."""
    word = TwistWord(tuple(letters), 2)
    c = curve_from_word(2, w)
    img = apply_word(word, c)
    want = symplectic_action(word, 2).apply(homology_class(OrientedCurve(c)).vector())
    got = homology_class(OrientedCurve(img)).vector()
    assert np.array_equal(got, want) or np.array_equal(got, -want)


def test_bounding_pair_map_is_torelli():
    # c_1 = b_1 and its parallel around handle 2 form a bounding pair at genus 3
    g = 3
    b1 = curve_from_word(g, (1,))
    par = curve_from_word(g, (1, 4, 7, 6, 5))
    assert geometric_intersection(b1, par) == 0
    cls = generator_classes(g) + (homology_class(OrientedCurve(par)).coords,)
    w = TwistWord(((0, 1), (2 * g + 1, -1)))
    assert symplectic_action(w, g, classes=cls).is_identity()
    assert not is_torelli(TwistWord(((0, 1),), g))


def test_twist_word_validation():
    with pytest.raises(ValueError):
        TwistWord(((0, 2),))
    with pytest.raises(ValueError):
        TwistWord(((9, 1),), genus=2)
    w = TwistWord(((0, 1), (1, -1)), 2)
    assert (w * w.inverse()).letters == ((0, 1), (1, -1), (1, 1), (0, -1))
    assert TwistWord.from_json(w.to_json(), 2) == w


def test_apply_word_order():
    """letter_1 o letter_2: the rightmost letter acts first."""
    g = 2
    gens = humphries_generators(g)
    c = curve_from_word(g, (0,))
    w = TwistWord(((0, 1), (1, 1)), g)
    from torelli.curves import dehn_twist
    assert apply_word(w, c) == dehn_twist(dehn_twist(c, gens[1]), gens[0])


def test_orbit_depth_zero_keeps_seeds():
    seeds = seed_curves("humphries", 2)
    u = orbit_universe(seeds, 0, 64)
    assert len(u) == 5 and set(u.curves) == set(seeds)


def test_orbit_independent_of_generator_order():
    seeds = seed_curves("humphries", 2)
    a = orbit_universe(seeds, 2, 40)
    b = orbit_universe(seeds, 2, 40, order=[4, 3, 2, 1, 0])
    assert a.curves == b.curves and a.digest() == b.digest()
    assert a.level == b.level


def test_orbit_weight_cap_and_levels():
    u = orbit_universe(seed_curves("mixed", 2), 2, 30)
    assert all(c.total_weight <= 30 or u.level[c.crossings] == 0 for c in u.curves)
    r = u.restrict(1)
    assert all(r.level[c.crossings] <= 1 for c in r.curves)
    assert set(r.curves) <= set(u.curves)


def test_orbit_provenance_replays():
    u = orbit_universe(seed_curves("humphries", 2), 2, 40)
    seeds = seed_curves("humphries", 2)
    for c in u.curves[::7]:
        si, w = u.provenance[c.crossings]
        assert apply_word(w, seeds[si]) == c
        assert len(w) == u.level[c.crossings]


def test_orbit_parallel_matches_serial():
    seeds = seed_curves("humphries", 2)
    assert orbit_universe(seeds, 2, 40, jobs=2).curves == orbit_universe(seeds, 2, 40).curves


def test_orbit_budget():
    with pytest.raises(BudgetExhausted):
        orbit_universe(seed_curves("mixed", 2), 3, 64, budget=20)


def test_universe_json_round_trip(u2):
    d = json.loads(json.dumps(u2.to_json()))
    v = CurveUniverse.from_json(d)
    assert v.curves == u2.curves and v.level == u2.level and v.digest() == u2.digest()
    d["curves"] = d["curves"][1:]
    with pytest.raises(Exception):
        CurveUniverse.from_json(d)


def test_image_universe_records_shortest_word():
    seeds = seed_curves("humphries", 2)
    u = image_universe(seeds, [((0, 1),), ((0, 1), (1, 1))])
    for c in u.curves:
        si, w = u.provenance[c.crossings]
        assert apply_word(w, seeds[si]) == c
    assert all(c in u for c in seeds)

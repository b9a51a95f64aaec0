import numpy as np
import pytest
from hypothesis import given, strategies as st

from torelli.curves import (B_SIGN, CurveError, IsotopicInputError, NormalCurve, OrientedCurve,
                            algebraic_intersection, basis_curves, canonicalize, curve_from_word,
                            dehn_twist, geometric_intersection, homology_class,
                            homology_class_by_pairing, is_isotopic, joint_realization,
                            twist_oriented)
from torelli.hyperbolic import NotPrimitive, NotSimple, NullHomotopic
from torelli.mcg import humphries_generators, transvection
from torelli.surface import SurfaceError
from torelli.words import abelianize, inverse

G2_WORDS = [(0,), (1,), (4,), (5,), (0, 3, 2, 1), (0, 1, 2, 7), (1, 4, 7, 6, 5)]


def curves_g2():
    return st.sampled_from([curve_from_word(2, w) for w in G2_WORDS[:4]] +
                           [curve_from_word(2, (0, 1, 2, 7))])


@pytest.mark.parametrize("w", [(0,), (0, 3, 2, 1), (0, 1, 2, 7)])
def test_canonical_form_ignores_rotation_and_inversion(w):
    c = curve_from_word(2, w)
    for k in range(len(w)):
        assert curve_from_word(2, w[k:] + w[:k]) == c
    assert curve_from_word(2, inverse(w, 2)) == c


def test_canonical_form_stable_under_walk_round_trip():
    c = curve_from_word(3, (0, 1, 2, 7))
    assert canonicalize(c.surface_id, c.crossings) == c
    assert NormalCurve.from_json(c.to_json()) == c


def test_non_canonical_json_rejected():
    c = curve_from_word(2, (0, 1, 2, 7))
    d = c.to_json()
    d["crossings"] = d["crossings"][1:] + d["crossings"][:1]
    if d["crossings"] != c.to_json()["crossings"]:
        with pytest.raises(CurveError):
            NormalCurve.from_json(d)


def test_bad_words():
    with pytest.raises(NullHomotopic):
        curve_from_word(2, ())
    with pytest.raises(NotPrimitive):
        curve_from_word(2, (0, 0))
    with pytest.raises(NotSimple):
        curve_from_word(2, (0, 0, 1, 1))


def test_known_intersections():
    a1, b1, a2, b2 = (curve_from_word(2, (x,)) for x in (0, 1, 4, 5))
    assert geometric_intersection(a1, b1) == 1
    assert geometric_intersection(a1, a2) == 0
    assert geometric_intersection(b1, b2) == 0
    assert geometric_intersection(a1, a1) == 0
    sep = curve_from_word(2, (0, 3, 2, 1))
    assert all(geometric_intersection(sep, x) == 0 for x in (a2, b2))


def test_curves_on_different_surfaces_rejected():
    with pytest.raises(SurfaceError):
        geometric_intersection(curve_from_word(2, (0,)), curve_from_word(3, (0,)))


def test_basis_is_symplectic():
    for g in (2, 3):
        bc = basis_curves(g)
        for i in range(g):
            for j in range(g):
                assert algebraic_intersection(bc[i], bc[g + j]) == (1 if i == j else 0)
                assert algebraic_intersection(bc[i], bc[j]) == 0
        assert B_SIGN in (1, -1)


@given(curves_g2(), curves_g2())
def test_intersection_symmetric_and_parity(a, b):
    i = geometric_intersection(a, b)
    assert i == geometric_intersection(b, a)
    alg = algebraic_intersection(OrientedCurve(a), OrientedCurve(b))
    assert abs(alg) <= i and (i - alg) % 2 == 0
    assert algebraic_intersection(OrientedCurve(b), OrientedCurve(a)) == -alg


@given(curves_g2(), curves_g2(), st.sampled_from([1, -1]))
def test_twist_intersection_law(a, t, e):
    """i(T_t(a), a) = i(a, t)^2 for simple curves."""
    k = geometric_intersection(a, t)
    assert geometric_intersection(dehn_twist(a, t, e), a) == k * k


@given(curves_g2(), curves_g2(), st.sampled_from([1, -1]))
def test_twist_inverse(a, t, e):
    assert dehn_twist(dehn_twist(a, t, e), t, -e) == a


@given(curves_g2(), curves_g2(), curves_g2())
def test_twist_preserves_intersection(a, b, t):
    assert geometric_intersection(dehn_twist(a, t), dehn_twist(b, t)) == geometric_intersection(a, b)


def test_twist_fixes_disjoint_curves():
    a1, a2 = curve_from_word(2, (0,)), curve_from_word(2, (4,))
    assert dehn_twist(a1, a2) == a1
    assert dehn_twist(a1, a1) == a1


@given(curves_g2(), curves_g2(), st.sampled_from([1, -1]))
def test_oriented_twist_follows_transvection(a, t, e):
    oa = OrientedCurve(a)
    img, word = twist_oriented(oa, t, e)
    v = homology_class(OrientedCurve(t)).vector()
    want = transvection(v, e, 2) @ homology_class(oa).vector()
    assert np.array_equal(homology_class(img).vector(), want)
    assert np.array_equal(abelianize(word, 2) * np.array([1, 1, B_SIGN, B_SIGN]), want)


@pytest.mark.parametrize("g", [2, 3])
def test_homology_routes_agree_on_generators(g):
    for c in humphries_generators(g):
        for d in (1, -1):
            o = OrientedCurve(c, d)
            assert homology_class(o) == homology_class_by_pairing(o)
            assert homology_class(o.reversed()) == -homology_class(o)


def test_joint_realization_matches_pairwise_counts():
    cs = [curve_from_word(2, w) for w in G2_WORDS]
    real = joint_realization(cs)
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            assert real.crossing_count(i, j) == geometric_intersection(cs[i], cs[j])


def test_isotopy_is_key_equality():
    a = curve_from_word(2, (0,))
    assert is_isotopic(a, curve_from_word(2, (2,)))
    assert not is_isotopic(a, curve_from_word(2, (1,)))
    assert issubclass(IsotopicInputError, CurveError)

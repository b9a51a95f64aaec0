import numpy as np
import pytest
from hypothesis import given, strategies as st

from torelli.words import (abelianize, cyclic_free_reduce, cyclic_rotations, free_reduce,
                           inverse, reduce_cyclic, reduce_word, relator, side_pairing)

GENERA = st.integers(2, 5)


def words(genus, max_size=12):
    return st.lists(st.integers(0, 4 * genus - 1), max_size=max_size).map(tuple)


@st.composite
def genus_and_word(draw, max_size=12):
    g = draw(GENERA)
    return g, draw(words(g, max_size))


def test_side_pairing_is_fixed_point_free_involution():
    for g in range(2, 6):
        sig = side_pairing(g)
        assert all(sig[sig[j]] == j and sig[j] != j for j in range(4 * g))


def test_relator_known_value():
    assert relator(4) == (0, 3, 2, 1, 4, 7, 6, 5, 8, 11, 10, 9, 12, 15, 14, 13)


def test_relator_uses_every_letter_once_and_abelianizes_to_zero():
    for g in range(2, 6):
        r = relator(g)
        assert sorted(r) == list(range(4 * g))
        assert not abelianize(r, g).any()


def test_relator_is_trivial():
    for g in range(2, 6):
        assert reduce_cyclic(relator(g), g) == ()
        assert reduce_word(relator(g), g) == ()


@given(genus_and_word())
def test_inverse_is_involution(gw):
    g, w = gw
    assert inverse(inverse(w, g), g) == w


@given(genus_and_word())
def test_word_times_inverse_is_trivial(gw):
    g, w = gw
    assert free_reduce(w + inverse(w, g), g) == ()
    assert not abelianize(w + inverse(w, g), g).any()


@given(genus_and_word())
def test_free_reduce_idempotent(gw):
    g, w = gw
    f = free_reduce(w, g)
    assert free_reduce(f, g) == f
    assert np.array_equal(abelianize(f, g), abelianize(w, g))


@given(genus_and_word(8), st.integers(0, 15))
def test_conjugated_relator_is_trivial(gw, shift):
    g, w = gw
    r = relator(g)
    s = shift % len(r)
    rr = r[s:] + r[:s]
    assert reduce_word(w + rr + inverse(w, g), g) == ()


@given(genus_and_word())
def test_cyclic_reduction_invariant_under_rotation(gw):
    g, w = gw
    if not w:
        return
    base = reduce_cyclic(w, g)
    for rot in cyclic_rotations(w):
        assert (len(reduce_cyclic(rot, g)) == 0) == (len(base) == 0)


@given(genus_and_word())
def test_cyclic_free_reduce_has_no_cancelling_ends(gw):
    g, w = gw
    c = cyclic_free_reduce(w, g)
    sig = side_pairing(g)
    if len(c) >= 2:
        assert c[-1] != sig[c[0]]


def test_abelianize_basis_letters():
    g = 3
    assert abelianize((0,), g).tolist() == [1, 0, 0, 0, 0, 0]
    assert abelianize((2,), g).tolist() == [-1, 0, 0, 0, 0, 0]
    assert abelianize((5,), g).tolist() == [0, 0, 0, 0, 1, 0]
    assert abelianize((7,), g).tolist() == [0, 0, 0, 0, -1, 0]


@pytest.mark.parametrize("g", [2, 3])
def test_nontrivial_single_letters(g):
    for x in range(4 * g):
        assert reduce_cyclic((x,), g) == (x,)

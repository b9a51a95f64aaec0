import pytest
from flint import arb, ctx

from torelli import geodesic as geo
from torelli.hyperbolic import (HyperbolicModel, NotSimple, NullHomotopic, PrecisionError,
                                lorentz, model, sign, working_prec)
from torelli.words import relator


def test_working_prec_raises_and_restores():
    old = ctx.prec
    with working_prec(old + 100):
        assert ctx.prec == old + 100
    assert ctx.prec == old
    with working_prec(8):
        assert ctx.prec == old


def test_sign_refuses_undecided_balls():
    assert sign(arb(1)) == 1 and sign(arb(-2)) == -1
    with pytest.raises(PrecisionError):
        sign(arb(0, 1))


def test_model_needs_hyperbolic_genus():
    with pytest.raises(ValueError):
        HyperbolicModel(1)


@pytest.mark.parametrize("g", [2, 3, 4])
def test_relator_matrix_is_identity(g):
    with working_prec(256):
        M = model(g).word_matrix(relator(g), 256)
        for i in range(3):
            for j in range(3):
                assert (M[i, j] - (1 if i == j else 0)).contains(0)


@pytest.mark.parametrize("g", [2, 3])
def test_generators_preserve_lorentz_form(g):
    fr = model(g).frame(128)
    with working_prec(128):
        for T in fr.gens:
            for i in range(3):
                col = (T[0, i], T[1, i], T[2, i])
                target = -1 if i == 2 else 1
                assert (lorentz(col, col) - target).contains(0)


def test_trace_of_basis_letter_is_one_chord():
    tr = geo.trace_word(2, (0,))
    assert len(tr.chords) == len(tr.word) >= 1
    assert tr.length > 0


def test_trace_rejects_trivial_and_nonsimple_words():
    with pytest.raises(NullHomotopic):
        geo.trace_word(2, (0, 2))
    with pytest.raises(NullHomotopic):
        geo.trace_word(2, relator(2))
    with pytest.raises(NotSimple):
        geo.trace_word(2, (0, 0, 1, 1))


def test_trace_positions_are_narrow():
    tr = geo.trace_word(3, (0, 1, 2, 7))
    for ch in tr.chords:
        assert ch.ta.rad() < geo.POS_TOL and ch.tb.rad() < geo.POS_TOL


def test_self_crossings_zero_for_simple():
    assert geo.self_crossings(geo.trace_word(3, (1, 4, 7, 6, 5))) == 0

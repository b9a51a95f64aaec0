import numpy as np
import pytest

from torelli.curves import curve_from_word, geometric_intersection
from torelli.index import IntersectionIndex


def test_index_matrix_matches_pairwise_counts(u2):
    cs = list(u2.curves[:40])
    M = IntersectionIndex(cs).matrix()
    assert M.shape == (40, 40)
    assert np.array_equal(M, M.T) and not M.diagonal().any()
    for i in range(0, 40, 3):
        for j in range(i + 1, 40, 2):
            assert M[i, j] == geometric_intersection(cs[i], cs[j])


def test_index_lookup_and_row():
    cs = [curve_from_word(2, w) for w in [(0,), (1,), (4,)]]
    idx = IntersectionIndex(cs)
    assert idx.intersection(cs[0], cs[1]) == 1
    assert idx.intersection(cs[0], cs[2]) == 0
    assert idx.row(0).tolist() == [0, 1, 0]


def test_index_rejects_duplicates():
    c = curve_from_word(2, (0,))
    with pytest.raises(ValueError):
        IntersectionIndex([c, curve_from_word(2, (2,))])

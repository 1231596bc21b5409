import itertools

import numpy as np
import pytest

from homtorus.cupforms import (
    TrilinearForm,
    basis_vector,
    cup_matrix,
    cup_rank,
    enum_z2z2,
    is_odd,
    lambda2_cup_matrix,
    pair_functional,
    torus_form,
    triple_eval,
    wedge,
    zero_form,
)

VECS = [np.array(v, dtype=np.uint8) for v in itertools.product((0, 1), repeat=3)]
FORMS = [torus_form(), zero_form()]


def det_mod2(a, b, c):
    return int(round(np.linalg.det(np.array([a, b, c], dtype=float)))) % 2


@pytest.mark.parametrize("form", FORMS)
def test_trilinear_and_alternating(form):
    scale = int(is_odd(form))
    for a, b, c in itertools.product(VECS, repeat=3):
        # every alternating form in dimension 3 is a multiple of the determinant
        assert triple_eval(form, a, b, c) == scale * det_mod2(a, b, c)
    for a, b in itertools.product(VECS, repeat=2):
        assert triple_eval(form, a, a, b) == 0


def test_tensor_symmetry_and_validation():
    t = torus_form().tensor()
    assert t[0, 1, 2] == t[2, 0, 1] == t[1, 0, 2] == 1
    assert t.sum() == 6
    with pytest.raises(ValueError):
        TrilinearForm(3, {(0, 0, 1): 1})
    assert TrilinearForm(3, {(0, 1, 2): 2}) == zero_form()


def test_pair_functional_and_cup_matrix():
    f = torus_form()
    for b, c in itertools.product(VECS, repeat=2):
        fn = pair_functional(f, b, c)
        for a in VECS:
            assert int(fn @ a % 2) == triple_eval(f, a, b, c)
    x = basis_vector(0)
    assert cup_matrix(f, x).shape == (3, 3)
    assert cup_rank(f, x) == 2


def test_cup_ranks():
    for x in VECS[1:]:
        assert cup_rank(torus_form(), x) == 2
        assert cup_rank(zero_form(), x) == 0


def test_lambda2_matrix():
    m = lambda2_cup_matrix(torus_form())
    assert np.array_equal(m, np.fliplr(np.eye(3, dtype=m.dtype)))
    assert not lambda2_cup_matrix(zero_form()).any()
    for b, c in itertools.product(VECS, repeat=2):
        lam = wedge(b, c)
        assert np.array_equal(m @ lam % 2, pair_functional(torus_form(), b, c))


def test_enum_z2z2():
    f = torus_form()
    for w in VECS:
        pairs = enum_z2z2(f, w)
        assert len(pairs) == (1 if w.any() else 0)
        for b, c in pairs:
            assert np.array_equal(pair_functional(f, b, c), w)
    for w in VECS[1:]:
        assert enum_z2z2(zero_form(), w) == []

import itertools

import numpy as np
import pytest

from homtorus.exactlin import float_rank
from homtorus.grouppres import (
    Character,
    Presentation,
    abelianize,
    character_basis,
    coboundary_matrix,
    commutator,
    format_word,
    fox_jacobian,
    free_presentation,
    free_reduce,
    mod2_characters,
    parse_word,
    random_commutator_presentation,
    reidemeister_schreier,
    torus_presentation,
    universal_z2_cover,
    word_eval,
    word_inverse,
)
from homtorus.projrep import enum_q8
from homtorus.su2core import ONE, Q8, Quat, adjoint_so3


def test_word_helpers():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert word_inverse((1, -2, 3)) == (-3, 2, -1)
    assert parse_word(format_word((1, -2, 3))) == (1, -2, 3)
    assert commutator((1,), (2,)) == (1, 2, -1, -2)


def test_presentation_validates():
    with pytest.raises(ValueError):
        Presentation(2, ((1, 3),))
    p = Presentation(2, ((1, 1, -1, 2, -2),))
    assert p.relators == ((1,),)


def test_matrices():
    p = Presentation(2, ((1, 1, 2), (2, -1, -2)))
    assert p.exponent_matrix().tolist() == [[2, 1], [-1, 0]]
    assert p.parity_matrix().tolist() == [[0, 1], [1, 0]]


def test_abelianization():
    ab = abelianize(torus_presentation())
    assert ab.free_rank == 3 and ab.torsion == ()
    ab = abelianize(Presentation(2, ((1, 1, 1, 1), (1, 2, 2, -1, 2))))
    assert ab.free_rank == 0 and ab.torsion == (12,)
    assert abelianize(free_presentation(3)).free_rank == 3


def test_characters_brute_force():
    rng = np.random.default_rng(5)
    for _ in range(30):
        g = int(rng.integers(1, 4))
        rels = tuple(tuple(int(s) * int(x) for s, x in zip(rng.choice([-1, 1], 4), rng.integers(1, g + 1, 4)))
                     for _ in range(int(rng.integers(0, 3))))
        p = Presentation(g, rels)
        brute = sorted(Character(v) for v in itertools.product((0, 1), repeat=g)
                       if all(Character(v)(r) == 0 for r in p.relators))
        assert mod2_characters(p) == brute
        assert 2 ** len(character_basis(p)) == len(brute)


def test_word_eval_missing_image():
    with pytest.raises(IndexError):
        word_eval((1, 3), [ONE, ONE])


def _check_cover(p, chars):
    cover = reidemeister_schreier(p, chars)
    k = len(chars)
    q = cover.presentation
    assert cover.index == 2 ** k == len(cover.transversal)
    # Euler characteristic of the presentation complex multiplies by the index
    assert (1 - q.num_generators + q.num_relators) == 2 ** k * (1 - p.num_generators + p.num_relators)
    for w in cover.inclusion:
        assert all(c(w) == 0 for c in chars)
    # a representation of the base restricts to one of the cover
    for _ in range(3):
        reps = enum_q8(p, (0,) * p.num_relators)
        for rep in reps[:5]:
            images = [word_eval(w, list(rep.images)) for w in cover.inclusion]
            for r in q.relators:
                assert word_eval(r, images) == ONE
    return cover


def test_reidemeister_schreier_torus():
    p = torus_presentation()
    for v in itertools.product((0, 1), repeat=3):
        if any(v):
            cover = _check_cover(p, [Character(v)])
            assert abelianize(cover.presentation).free_rank == 3
    cover = _check_cover(p, character_basis(p))
    assert cover.index == 8
    assert abelianize(cover.presentation).free_rank == 3


def test_reidemeister_schreier_random():
    rng = np.random.default_rng(9)
    for _ in range(20):
        p = random_commutator_presentation(rng)
        chars = character_basis(p)
        _check_cover(p, chars[: int(rng.integers(1, len(chars) + 1))])


def test_free_group_cover_is_free():
    cover = universal_z2_cover(free_presentation(2))
    assert cover.presentation.num_generators == 5 and cover.presentation.num_relators == 0


def test_reidemeister_schreier_rejects():
    p = torus_presentation()
    with pytest.raises(ValueError):
        reidemeister_schreier(p, [Character((1, 0, 0)), Character((1, 0, 0))])
    with pytest.raises(ValueError):
        reidemeister_schreier(Presentation(1, ((1,),)), [Character((1,))])


# --- Fox calculus against a numerical linearisation ------------------------------

def _expm(xi):
    t = np.linalg.norm(xi)
    if t == 0:
        return ONE
    v = np.sin(t) * xi / t
    return Quat(np.cos(t), *v)


def _relator_map(p, images, xi):
    pert = [_expm(xi[3 * i:3 * i + 3]) * q for i, q in enumerate(images)]
    out = []
    for r in p.relators:
        base = word_eval(r, list(images))
        out.extend((word_eval(r, pert) * base.inverse()).imag)
    return np.array(out, dtype=float)


def _numeric_z1_dim(p, images, h=1e-6):
    g = p.num_generators
    cols = []
    for k in range(3 * g):
        e = np.zeros(3 * g)
        e[k] = h
        cols.append((_relator_map(p, images, e) - _relator_map(p, images, -e)) / (2 * h))
    jac = np.array(cols).T if p.num_relators else np.zeros((0, 3 * g))
    return 3 * g - (float_rank(jac, 1e-6) if jac.size else 0)


def test_fox_kernel_matches_linearisation():
    rng = np.random.default_rng(2)
    cases = [(torus_presentation(), r.images) for w in [(1, 0, 0), (1, 1, 1), (0, 0, 0)]
             for r in enum_q8(torus_presentation(), w)[:4]]
    theta = rng.uniform(0, 2 * np.pi, 3)
    cases.append((torus_presentation(), [Quat(np.cos(t), np.sin(t), 0, 0) for t in theta]))
    for _ in range(10):
        p = random_commutator_presentation(rng)
        reps = enum_q8(p, (0,) * p.num_relators)
        cases.append((p, reps[int(rng.integers(len(reps)))].images))
    for p, images in cases:
        ad = [adjoint_so3(q) for q in images]
        fox = fox_jacobian(p, ad)
        z1 = 3 * p.num_generators - float_rank(np.array(fox, dtype=float))
        assert z1 == _numeric_z1_dim(p, images)


def test_fox_exact_path_and_identity_check():
    p = torus_presentation()
    ad = [adjoint_so3(q) for q in (Q8[2], Q8[4], ONE)]
    fox = fox_jacobian(p, ad)
    assert fox.dtype == object
    assert coboundary_matrix(ad).shape == (9, 3)
    bad = [adjoint_so3(Quat(np.cos(0.2), 0, np.sin(0.2), 0)), adjoint_so3(Q8[2]), np.eye(3)]
    with pytest.raises(ValueError):
        fox_jacobian(p, bad)
    with pytest.raises(ValueError):
        fox_jacobian(p, ad[:2])


def test_random_commutator_presentation_is_balanced():
    rng = np.random.default_rng(0)
    for _ in range(20):
        p = random_commutator_presentation(rng)
        assert not p.exponent_matrix().any()
        assert len(mod2_characters(p)) == 8

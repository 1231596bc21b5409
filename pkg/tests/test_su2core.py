import itertools

import numpy as np
import pytest

from homtorus.su2core import (
    I, J, K, ONE, Q8, Q8_INDEX, ImageTag, Quat,
    adjoint_so3, best_conjugator, canonical_q8, classify_image, conjugate,
    mul_table, q8_from_label, q8_rotation_permutations, q8_rotations, qmul,
    quat_from_rotation,
)


def as_matrix(q: Quat):
    a, b, c, d = (float(x) for x in q.as_array())
    return np.array([[a + 1j * b, c + 1j * d], [-c + 1j * d, a - 1j * b]])


def test_hamilton_relations():
    assert I * I == J * J == K * K == -ONE
    assert I * J * K == -ONE
    assert I * J == K and J * I == -K


def test_product_matches_matrix_model():
    rng = np.random.default_rng(0)
    for _ in range(20):
        p, q = (Quat.from_array(rng.standard_normal(4)) for _ in range(2))
        assert np.allclose(as_matrix(p * q), as_matrix(p) @ as_matrix(q))
        assert np.allclose(qmul(p.as_array(), q.as_array()), (p * q).as_array())


def test_mul_table_is_q8():
    t = mul_table()
    for a, b in itertools.product(range(8), repeat=2):
        assert Q8[t[a, b]] == Q8[a] * Q8[b]


def test_labels_roundtrip():
    for q in Q8:
        assert q8_from_label(str(q)) == q
        assert Q8[Q8_INDEX[q]] == q


def test_adjoint_is_rotation_and_homomorphism():
    rng = np.random.default_rng(1)
    for _ in range(20):
        p, q = (Quat.from_array(rng.standard_normal(4)).normalized() for _ in range(2))
        r = adjoint_so3(p).astype(float)
        assert np.allclose(r @ r.T, np.eye(3)) and np.isclose(np.linalg.det(r), 1)
        assert np.allclose(adjoint_so3(p * q).astype(float), r @ adjoint_so3(q).astype(float))
        v = Quat(0, *rng.standard_normal(3))
        assert np.allclose(conjugate(p, v).imag, r @ v.imag)
        back = quat_from_rotation(r)
        assert min(back.distance(p), back.distance(-p)) < 1e-12


def test_adjoint_exact_on_q8():
    for q in Q8:
        m = adjoint_so3(q)
        assert m.dtype == object
        assert set(m.ravel()) <= {-1, 0, 1}


def test_rotations_and_permutations():
    rots = q8_rotations()
    assert len(rots) == 24
    assert len({r.tobytes() for r in rots}) == 24
    perms = q8_rotation_permutations()
    assert perms.shape == (24, 8)
    for row in perms:
        assert sorted(row) == list(range(8))
        assert row[0] == 0 and row[1] == 1  # centre fixed


def test_classify_image():
    assert classify_image([ONE, -ONE]).tag is ImageTag.CENTRAL
    e = Quat(np.cos(0.3), np.sin(0.3), 0, 0)
    assert classify_image([e, I, -ONE]).tag is ImageTag.CIRCLE_REDUCIBLE
    assert classify_image([I, J]).tag is ImageTag.QUATERNION_Q
    other = Quat(np.cos(0.3), 0, np.sin(0.3), 0)
    assert classify_image([e, other]).tag is ImageTag.IRREDUCIBLE_OTHER


def test_quaternion_image_after_conjugation():
    u = Quat(0.3, -0.2, 0.7, 0.1).normalized()
    qs = [conjugate(u, q) for q in (I, J, -K)]
    cls = classify_image(qs)
    assert cls.tag is ImageTag.QUATERNION_Q
    labels, w = canonical_q8(qs)
    assert all(conjugate(w, q).distance(l) < 1e-9 for q, l in zip(qs, labels))
    with pytest.raises(ValueError):
        canonical_q8([Quat(np.cos(0.3), np.sin(0.3), 0, 0), Quat(np.cos(0.3), 0, np.sin(0.3), 0)])


def test_best_conjugator_recovers_rotation():
    rng = np.random.default_rng(4)
    src = [Quat.from_array(rng.standard_normal(4)).normalized() for _ in range(3)]
    u = Quat.from_array(rng.standard_normal(4)).normalized()
    dst = [conjugate(u, q) for q in src]
    w, resid = best_conjugator(src, dst)
    assert resid < 1e-10
    assert all(conjugate(w, a).distance(b) < 1e-10 for a, b in zip(src, dst))
    _, resid = best_conjugator(src, [-q for q in dst])
    assert resid > 1e-3

import itertools

import numpy as np
import pytest

from homtorus import cupforms
from homtorus.exactlin import f2_solve_affine
from homtorus.grouppres import (
    Character,
    Presentation,
    free_presentation,
    random_commutator_presentation,
    torus_presentation,
    word_eval,
)
from homtorus.manifest import load_fixture
from homtorus.projrep import (
    CocycleClass,
    ProjectiveRep,
    as_class,
    canonical_signs,
    cocycle_classes,
    conjugate_rep,
    defect,
    enum_q8,
    make_rep,
    projectively_equivalent,
    q8_canonical_code,
    q8_indices,
    relator_signs,
    search_su2,
    tau_eigensplit,
    twist,
    twisted_h1_dim,
    w2_of_pair,
    z2z2_pair,
)
from homtorus.su2core import I, J, K, ONE, Q8, Quat, adjoint_so3, conjugate, q8_rotation_permutations


def test_relator_signs():
    p = torus_presentation()
    assert relator_signs(p, (I, J, ONE)) == (-1, 1, 1)
    with pytest.raises(ValueError):
        relator_signs(p, (Quat(np.cos(0.3), np.sin(0.3), 0, 0), J, ONE))
    assert make_rep(p, (I, J, K)).sign_bits == (1, 1, 1)


def brute_classes(p):
    """Sign vectors modulo the changes obtained by flipping generator lifts."""
    s = p.num_relators
    e = p.parity_matrix()
    changes = {tuple(int(x) for x in np.array(v) @ e % 2) for v in itertools.product((0, 1), repeat=p.num_generators)}
    seen, classes = set(), []
    for v in itertools.product((0, 1), repeat=s):
        if v in seen:
            continue
        orbit = {tuple((a + b) % 2 for a, b in zip(v, c)) for c in changes}
        seen |= orbit
        classes.append(orbit)
    return classes


def test_cocycle_classes_against_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(40):
        g = int(rng.integers(1, 4))
        rels = tuple(tuple(int(x) * int(sg) for x, sg in zip(rng.integers(1, g + 1, 3), rng.choice([-1, 1], 3)))
                     for _ in range(int(rng.integers(0, 4))))
        p = Presentation(g, rels)
        dim, reps = cocycle_classes(p)
        classes = brute_classes(p)
        assert 2 ** dim == len(reps) == len(classes)
        for orbit in classes:
            canon = {canonical_signs(p, v) for v in orbit}
            assert len(canon) == 1 and canon.pop() in reps


def test_cocycle_class_equality():
    p = Presentation(2, ((1, 2), (1, 1, 2)))
    a = as_class(p, (1, 0))
    b = as_class(p, "01")
    assert a == b and hash(a) == hash(b)
    assert a.representative == (1, 0) and a.signs == (-1, 1)
    assert isinstance(a, CocycleClass) and as_class(p, a) is a
    with pytest.raises(ValueError):
        as_class(p, (1, 0, 0))


def oracle_q8(p, signs):
    """Brute force with all 24 normalising rotations applied via quaternion conjugation."""
    rots = [Quat(1, 0, 0, 0)]
    h = 1 / np.sqrt(2)
    gens = [Quat(h, h, 0, 0), Quat(0.5, 0.5, 0.5, 0.5)]
    frontier = list(rots)
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                m = a * g
                if all(min(m.distance(b), m.distance(-b)) > 1e-9 for b in rots):
                    rots.append(m)
                    new.append(m)
        frontier = new
    assert len(rots) == 24

    def key(images):
        return tuple(Q8.index(q) for q in images)

    def snap(q):
        return next(x for x in Q8 if x.distance(q) < 1e-9)

    classes = set()
    for images in itertools.product(Q8, repeat=p.num_generators):
        if all(word_eval(r, list(images)) == (ONE if s > 0 else -ONE) for r, s in zip(p.relators, signs)):
            classes.add(min(key([snap(conjugate(u, q)) for q in images]) for u in rots))
    return classes


def test_enum_q8_against_oracle():
    rng = np.random.default_rng(4)
    pres = [torus_presentation(), Presentation(2, ((1, 1, 2, 2),)), Presentation(2, ((1, 2, -1, 2),))]
    pres += [random_commutator_presentation(rng) for _ in range(4)]
    for p in pres:
        for w in cocycle_classes(p)[1]:
            reps = enum_q8(p, w)
            signs = as_class(p, w).signs
            assert all(r.signs == signs and relator_signs(p, r.images) == signs for r in reps)
            assert {q8_indices(r) for r in reps} == oracle_q8(p, signs)


def test_enum_uses_given_representative():
    p = Presentation(2, ((1, 1, 2, 2), (1, 2)))
    w = as_class(p, (0, 1))
    other = next(v for v in itertools.product((0, 1), repeat=2) if as_class(p, v) == w and v != (0, 1))
    a, b = enum_q8(p, (0, 1)), enum_q8(p, other)
    assert all(r.sign_bits == (0, 1) for r in a)
    assert all(r.sign_bits == other for r in b)
    assert len(a) == len(b)  # flipping lifts is a bijection


def test_canonical_code_is_conjugation_invariant():
    rng = np.random.default_rng(0)
    for _ in range(20):
        idx = tuple(int(x) for x in rng.integers(0, 8, 3))
        code = q8_canonical_code(idx)
        for perm in q8_rotation_permutations():
            assert q8_canonical_code(tuple(int(perm[i]) for i in idx)) == code


def test_twist_and_equivalence():
    p = torus_presentation()
    rep = enum_q8(p, (1, 1, 1))[0]
    chi = Character((1, 0, 0))
    u = Quat(0.2, 0.4, -0.1, 0.7).normalized()
    moved = conjugate_rep(twist(rep, chi), u)
    wit = projectively_equivalent(p, rep, moved)
    assert wit is not None
    back = conjugate_rep(twist(rep, wit.mu), wit.sigma)
    assert all(a.distance(b) < 1e-8 for a, b in zip(back.images, moved.images))
    assert projectively_equivalent(p, rep, enum_q8(p, (1, 0, 0))[0]) is None


def test_equivalence_across_lift_changes():
    p = Presentation(2, ((1, 1, 2, 2), (1, 2)))
    a = enum_q8(p, (0, 1))
    flipped = ProjectiveRep(tuple(-q if n == 0 else q for n, q in enumerate(a[0].images)),
                            relator_signs(p, tuple(-q if n == 0 else q for n, q in enumerate(a[0].images))))
    assert flipped.signs != a[0].signs
    assert projectively_equivalent(p, a[0], flipped) is not None


def test_whitney_formula_on_torus():
    m = load_fixture("t3")
    basis = np.array(m.w2_basis, dtype=np.uint8).T  # relator bits = basis @ dual coords
    for w in cocycle_classes(m.presentation)[1]:
        if not any(w):
            continue
        dual, _ = f2_solve_affine(basis, w)
        for rep in enum_q8(m.presentation, w):
            beta, gamma = z2z2_pair(rep)
            assert np.array_equal(w2_of_pair(beta.values, gamma.values, m.cupform), dual)
            # the pair factors the adjoint representation
            for q, b, c in zip(rep.images, beta.values, gamma.values):
                assert np.array_equal(np.diag(adjoint_so3(q)).astype(int)[:2], [(-1) ** b, (-1) ** c])
        pairs = cupforms.enum_z2z2(m.cupform, dual)
        assert len(pairs) == 1


def test_twisted_h1_and_eigensplit():
    p = torus_presentation()
    for w in [(1, 0, 0), (1, 1, 1)]:
        for rep in enum_q8(p, w):
            assert twisted_h1_dim(p, rep) == 0
    assert twisted_h1_dim(p, ProjectiveRep((ONE,) * 3, (1,) * 3)) == 9
    # circle-valued rep of T^3: H^1 = H^1(T^3) for the trivial line plus the 2-plane part
    e = Quat(np.cos(0.4), np.sin(0.4), 0, 0)
    f = Quat(np.cos(1.1), np.sin(1.1), 0, 0)
    assert twisted_h1_dim(p, ProjectiveRep((e, f, ONE), (1,) * 3)) == 3
    free = free_presentation(2)
    rep = ProjectiveRep((I, J), ())
    plus, minus = tau_eigensplit(free, rep, Character((1, 0)), J)
    assert (plus, minus) == (1, 2)
    assert plus + minus == twisted_h1_dim(free, rep) == 3
    with pytest.raises(ValueError):
        tau_eigensplit(free, rep, Character((1, 0)), I)
    with pytest.raises(ValueError):
        tau_eigensplit(free, rep, Character((1, 0)), ONE)


def test_eigensplit_matches_numeric_path():
    free = free_presentation(2)
    u = Quat(0.3, 0.5, -0.2, 0.6).normalized()
    rep = ProjectiveRep((conjugate(u, I), conjugate(u, J)), ())
    v = u * J * u.conj()
    assert tau_eigensplit(free, rep, Character((1, 0)), v, tol=1e-9) == (1, 2)


def test_search_finds_circle_and_quaternion_points():
    p = torus_presentation()
    found = search_su2(p, (1, 1, 1), num_seeds=20, rng_seed=3)
    assert len(found) == 1
    rep, d = found[0]
    assert d < 1e-12 and defect(p, rep.images, rep.signs) == pytest.approx(d)
    zero = search_su2(p, (0, 0, 0), num_seeds=10, rng_seed=1, cluster=False)
    assert len(zero) >= 8  # the zero class has a positive-dimensional space of solutions

"""Projective SU(2) representations of a finitely presented group.

A projective representation is stored by its generator images together with
the signs ``rho(r_j) = +-1`` of the relators.  Two sign vectors define the
same cohomology class when they differ by flipping the lifts of some
generators, i.e. by an element of the row space of the parity matrix.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import cupforms
from .exactlin import _pack, _rref, _unpack, f2_vector, float_rank, rational_rank
from .grouppres import (
    Character,
    Presentation,
    coboundary_matrix,
    fox_jacobian,
    mod2_characters,
    word_eval,
)
from .su2core import (
    ONE,
    Q8,
    DEFAULT_TOL,
    Quat,
    adjoint_so3,
    best_conjugator,
    conjugate,
    mul_table,
    q8_rotation_permutations,
    qconj,
    qmul,
)

MAX_Q8_GENERATORS = 12
_CHUNK = 1 << 18


@dataclass(frozen=True)
class ProjectiveRep:
    images: tuple
    signs: tuple

    @property
    def sign_bits(self) -> tuple:
        return tuple(1 if s < 0 else 0 for s in self.signs)

    def is_exact(self) -> bool:
        return all(q.is_exact() for q in self.images)

    def __str__(self) -> str:
        return "(" + ", ".join(str(q) for q in self.images) + ")"


def relator_signs(p: Presentation, images, tol: float = DEFAULT_TOL) -> tuple:
    out = []
    for j, r in enumerate(p.relators):
        v = word_eval(r, list(images))
        if v.distance(ONE) < tol:
            out.append(1)
        elif v.distance(-ONE) < tol:
            out.append(-1)
        else:
            raise ValueError(f"relator {j + 1} evaluates to {v}, not +-1: not a projective representation")
    return tuple(out)


def make_rep(p: Presentation, images, tol: float = DEFAULT_TOL) -> ProjectiveRep:
    images = tuple(images)
    return ProjectiveRep(images, relator_signs(p, images, tol))


# --- cocycle classes -------------------------------------------------------


def _lift_change_basis(p: Presentation):
    """Reduced basis of the sign changes produced by flipping generator lifts."""
    e = p.parity_matrix()
    return _rref([_pack(row) for row in e], p.num_relators)


def canonical_signs(p: Presentation, bits) -> tuple:
    """Canonical representative of the class of a sign-bit vector."""
    bits = f2_vector(bits)
    if bits.shape[0] != p.num_relators:
        raise ValueError(f"sign vector has length {bits.shape[0]}, expected {p.num_relators}")
    reduced, pivots = _lift_change_basis(p)
    x = _pack(bits)
    for row, col in zip(reduced, pivots):
        if x >> col & 1:
            x ^= row
    return tuple(int(t) for t in _unpack(x, p.num_relators))


@dataclass(frozen=True, eq=False)
class CocycleClass:
    """A class in the quotient of relator sign vectors by lift changes.

    ``representative`` is a specific sign-bit vector (1 means the relator maps
    to -1); enumeration uses exactly this cocycle.
    """

    presentation: Presentation
    representative: tuple

    def __post_init__(self):
        object.__setattr__(self, "representative", tuple(int(b) for b in f2_vector(self.representative)))
        canonical_signs(self.presentation, self.representative)

    @property
    def canonical(self) -> tuple:
        return canonical_signs(self.presentation, self.representative)

    def is_zero(self) -> bool:
        return not any(self.canonical)

    @property
    def signs(self) -> tuple:
        return tuple(-1 if b else 1 for b in self.representative)

    def __eq__(self, other):
        if not isinstance(other, CocycleClass):
            return NotImplemented
        return self.presentation == other.presentation and self.canonical == other.canonical

    def __hash__(self):
        return hash((self.presentation, self.canonical))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.representative)


def as_class(p: Presentation, w) -> CocycleClass:
    if isinstance(w, CocycleClass):
        return w
    if isinstance(w, str):
        w = [int(ch) for ch in w]
    return CocycleClass(p, tuple(w))


def cocycle_classes(p: Presentation) -> tuple[int, list[tuple]]:
    """Dimension of the sign-class quotient and one canonical representative per class."""
    _, pivots = _lift_change_basis(p)
    free = [c for c in range(p.num_relators) if c not in pivots]
    reps = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        v = [0] * p.num_relators
        for c, b in zip(free, bits):
            v[c] = b
        reps.append(tuple(v))
    return len(free), sorted(reps)


# --- exhaustive Q8 enumeration ------------------------------------------------

_TABLE = mul_table()
_INV = np.array([Q8.index(q.inverse()) for q in Q8], dtype=np.int64)
_ROT = q8_rotation_permutations()


def _eval_indices(word, assign: np.ndarray) -> np.ndarray:
    cur = np.zeros(assign.shape[0], dtype=np.int64)
    for x in word:
        idx = assign[:, abs(x) - 1]
        if x < 0:
            idx = _INV[idx]
        cur = _TABLE[cur, idx]
    return cur


def _encode(assign: np.ndarray) -> np.ndarray:
    g = assign.shape[-1]
    weights = 8 ** np.arange(g - 1, -1, -1, dtype=np.int64)
    return assign @ weights


def _decode(code: int, g: int) -> tuple:
    return tuple((code // 8 ** (g - 1 - n)) % 8 for n in range(g))


def q8_canonical_code(indices) -> int:
    """Smallest encoding over the 24 rotations normalising Q8 (a conjugacy invariant)."""
    a = np.asarray(indices, dtype=np.int64)[None, :]
    return int(_encode(_ROT[:, a].reshape(24, -1)).min())


def enum_q8(p: Presentation, w) -> list[ProjectiveRep]:
    """All Q8-valued projective representations with the cocycle of ``w``,
    one per SU(2)-conjugacy class, sorted by their canonical encoding."""
    w = as_class(p, w)
    g = p.num_generators
    if g > MAX_Q8_GENERATORS:
        raise ValueError(f"Q8 enumeration budget exceeded: {g} generators > {MAX_Q8_GENERATORS}")
    target = np.array(w.representative, dtype=np.int64)  # index 0 is 1, index 1 is -1
    codes = set()
    total = 8 ** g
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        assign = np.stack([(flat // 8 ** (g - 1 - n)) % 8 for n in range(g)], axis=1)
        keep = np.ones(assign.shape[0], dtype=bool)
        for j, r in enumerate(p.relators):
            keep &= _eval_indices(r, assign) == target[j]
        assign = assign[keep]
        if assign.shape[0] == 0:
            continue
        rotated = _ROT[:, assign]  # (24, n, g)
        codes.update(int(c) for c in _encode(rotated).min(axis=0))
    signs = w.signs
    return [ProjectiveRep(tuple(Q8[i] for i in _decode(c, g)), signs) for c in sorted(codes)]


def q8_indices(rep: ProjectiveRep) -> tuple:
    return tuple(Q8.index(q) for q in rep.images)


# --- numerical search ------------------------------------------------------


def _defect_grad_batch(p: Presentation, x: np.ndarray, signs) -> tuple[np.ndarray, np.ndarray]:
    """Defect and Riemannian gradient for a batch ``x`` of shape (n, g, 4)."""
    n = x.shape[0]
    grad = np.zeros_like(x)
    defect = np.zeros(n)
    for r, eps in zip(p.relators, signs):
        letters = [x[:, abs(t) - 1] if t > 0 else qconj(x[:, abs(t) - 1]) for t in r]
        m = len(letters)
        prefix = [np.tile([1.0, 0.0, 0.0, 0.0], (n, 1))]
        for y in letters:
            prefix.append(qmul(prefix[-1], y))
        suffix = [np.tile([1.0, 0.0, 0.0, 0.0], (n, 1))]
        for y in reversed(letters):
            suffix.append(qmul(y, suffix[-1]))
        suffix.reverse()  # suffix[k] = letters[k:] product
        resid = prefix[m] - np.array([eps, 0.0, 0.0, 0.0])
        defect += np.einsum("ni,ni->n", resid, resid)
        for k, t in enumerate(r):
            # d/dY <R, R> with R = A Y B - eps equals 2 conj(A) R conj(B)
            gk = 2.0 * qmul(qmul(qconj(prefix[k]), resid), qconj(suffix[k + 1]))
            if t < 0:
                gk = qconj(gk)
            grad[:, abs(t) - 1] += gk
    radial = np.einsum("ngi,ngi->ng", grad, x)
    grad -= radial[..., None] * x
    return defect, grad


def defect(p: Presentation, images, signs) -> float:
    x = np.array([[q.as_array() for q in images]])
    return float(_defect_grad_batch(p, x, signs)[0][0])


def defect_grad(p: Presentation, images, signs) -> np.ndarray:
    """Riemannian gradient of ``sum_j |r_j(images) - signs_j|^2`` on the product
    of unit spheres, shape (g, 4)."""
    x = np.array([[q.as_array() if isinstance(q, Quat) else np.asarray(q, float) for q in images]])
    return _defect_grad_batch(p, x, signs)[1][0]


def descend(p: Presentation, signs, starts: np.ndarray, tol: float = 1e-12,
            step: float = 0.1, max_iter: int = 10_000,
            stall: float = 1e-14) -> tuple[np.ndarray, np.ndarray]:
    """Projected gradient descent from each start; returns final points and defects.

    Each start keeps its own step, at most ``step``: halved when the Armijo
    test fails, doubled back after an accepted move.  A start stops once its
    defect is below ``tol`` or its squared gradient norm is below ``stall``.
    """
    x = np.array(starts, dtype=float)
    x /= np.linalg.norm(x, axis=-1, keepdims=True)
    d, gr = _defect_grad_batch(p, x, signs)
    h = np.full(x.shape[0], float(step))
    g2 = np.einsum("ngi,ngi->n", gr, gr)
    active = (d >= tol) & (g2 >= stall)
    for _ in range(max_iter):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        cand = x[idx] - h[idx, None, None] * gr[idx]
        cand /= np.linalg.norm(cand, axis=-1, keepdims=True)
        dc, gc = _defect_grad_batch(p, cand, signs)
        ok = dc <= d[idx] - 1e-4 * h[idx] * g2[idx]
        acc = idx[ok]
        x[acc], d[acc], gr[acc] = cand[ok], dc[ok], gc[ok]
        g2[acc] = np.einsum("ngi,ngi->n", gc[ok], gc[ok])
        h[acc] = np.minimum(2 * h[acc], step)
        h[idx[~ok]] *= 0.5
        active &= (d >= tol) & (g2 >= stall) & (h > 1e-300)
    return x, d


def _to_rep(p: Presentation, point: np.ndarray, signs) -> ProjectiveRep:
    return ProjectiveRep(tuple(Quat.from_array(q) for q in point), tuple(signs))


def search_su2(p: Presentation, w, num_seeds: int = 50, rng_seed: int = 0,
               tol: float = 1e-12, cluster: bool = True, cluster_tol: float | None = None,
               step: float = 0.1, max_iter: int = 10_000) -> list[tuple[ProjectiveRep, float]]:
    """Look for projective representations with the cocycle of ``w`` by gradient
    descent from random starts.

    Points whose defect drops below ``tol`` are kept.  With ``cluster`` they are
    merged up to conjugation and twisting by characters (distance
    ``cluster_tol``, default ``10 * sqrt(tol)``); the first point of each
    cluster in seed order represents it.
    """
    w = as_class(p, w)
    signs = w.signs
    rng = np.random.default_rng(rng_seed)
    starts = rng.standard_normal((num_seeds, p.num_generators, 4))
    points, defects = descend(p, signs, starts, tol=tol, step=step, max_iter=max_iter)
    found = [(_to_rep(p, x, signs), float(d)) for x, d in zip(points, defects) if d < tol]
    if not cluster:
        return found
    if cluster_tol is None:
        cluster_tol = 10 * math.sqrt(tol)
    chars = mod2_characters(p)
    out: list[tuple[ProjectiveRep, float]] = []
    for rep, d in found:
        if not any(projectively_equivalent(p, rep, other, cluster_tol, chars) for other, _ in out):
            out.append((rep, d))
    return out


# --- projective equivalence ---------------------------------------------------


@dataclass(frozen=True)
class EquivalenceWitness:
    mu: Character
    sigma: Quat


def twist(rep: ProjectiveRep, chi: Character) -> ProjectiveRep:
    images = tuple(-q if v else q for q, v in zip(rep.images, chi.values))
    return ProjectiveRep(images, rep.signs)


def projectively_equivalent(p: Presentation, r1: ProjectiveRep, r2: ProjectiveRep,
                            tol: float = DEFAULT_TOL, characters=None) -> EquivalenceWitness | None:
    """Find ``mu`` and ``sigma`` with ``r2(x) = mu(x) sigma r1(x) sigma^-1``.

    When the two sign vectors agree ``mu`` ranges over the characters (and any
    witness is a homomorphism); when they differ within one class, over all
    sign functions on the generators.
    """
    if as_class(p, r1.sign_bits) != as_class(p, r2.sign_bits):
        return None
    if r1.signs == r2.signs:
        mus = characters if characters is not None else mod2_characters(p)
    else:
        mus = [Character(v) for v in itertools.product((0, 1), repeat=p.num_generators)]
    for mu in mus:
        sigma, resid = best_conjugator(twist(r1, mu).images, r2.images)
        if resid < tol:
            if r1.signs == r2.signs:
                assert all(mu(r) == 0 for r in p.relators), "equivalence sign function is not a homomorphism"
            return EquivalenceWitness(mu, sigma)
    return None


def conjugate_rep(rep: ProjectiveRep, u: Quat) -> ProjectiveRep:
    return ProjectiveRep(tuple(conjugate(u, q) for q in rep.images), rep.signs)


# --- Z2+Z2 reduction and Whitney formula -------------------------------------


def w2_of_pair(beta, gamma, form: cupforms.TrilinearForm) -> np.ndarray:
    """H^2 class (Poincare-dual coordinates) of the SO(3) representation
    ``beta + gamma + det(beta + gamma)``: the cup product of the two classes."""
    return cupforms.pair_functional(form, beta, gamma)


def z2z2_pair(rep: ProjectiveRep) -> tuple[Character, Character]:
    """Characters ``(beta, gamma)`` through which the adjoint of a Q8-valued rep
    factors: ``ad rep(x) = diag((-1)^beta(x), (-1)^gamma(x), ...)``."""
    beta = tuple(int(q in (Q8[4], Q8[5], Q8[6], Q8[7])) for q in rep.images)
    gamma = tuple(int(q in (Q8[2], Q8[3], Q8[6], Q8[7])) for q in rep.images)
    return Character(beta), Character(gamma)


# --- twisted cohomology -------------------------------------------------------


def _rank(m, exact: bool) -> int:
    return rational_rank(m) if exact else float_rank(m, 1e-9)


def _adjoint_images(rep: ProjectiveRep):
    return [adjoint_so3(q) for q in rep.images]


def twisted_h1_dim(p: Presentation, rep: ProjectiveRep, check_tol: float = 1e-9) -> int:
    """dim H^1(G; ad rep) = dim Z^1 - dim B^1 via Fox calculus."""
    ad = _adjoint_images(rep)
    exact = rep.is_exact()
    g = p.num_generators
    z1 = 3 * g
    if p.num_relators:
        z1 -= _rank(fox_jacobian(p, ad, check_tol), exact)
    b1 = _rank(coboundary_matrix(ad), exact)
    return z1 - b1


def _block_diag(m, g: int, exact: bool):
    out = np.zeros((3 * g, 3 * g), dtype=object if exact else float)
    if exact:
        out[...] = 0
    for i in range(g):
        out[3 * i:3 * i + 3, 3 * i:3 * i + 3] = m
    return out


def tau_eigensplit(p: Presentation, rep: ProjectiveRep, chi: Character, u: Quat,
                   tol: float = DEFAULT_TOL) -> tuple[int, int]:
    """Dimensions of the +1 and -1 eigenspaces of ``xi -> u xi u^-1`` on
    H^1(G; ad rep), for ``u`` realising ``chi`` as a stabiliser of ``rep``."""
    if (u * u).distance(-ONE) > tol:
        raise ValueError("u must square to -1")
    for q, v in zip(rep.images, chi.values):
        lhs = -q if v else q
        if lhs.distance(conjugate(u, q)) > tol:
            raise ValueError(f"{chi} does not stabilise the representation with witness {u}")
    exact = rep.is_exact() and u.is_exact()
    g = p.num_generators
    ad = _adjoint_images(rep)
    adu = adjoint_so3(u)
    t = _block_diag(adu, g, exact)
    eye3 = np.eye(3, dtype=np.int64) if exact else np.eye(3)
    eye = np.eye(3 * g, dtype=np.int64) if exact else np.eye(3 * g)
    jac = fox_jacobian(p, ad) if p.num_relators else np.zeros((0, 3 * g), dtype=t.dtype)
    delta = coboundary_matrix(ad)
    out = []
    for s in (1, -1):
        z = 3 * g - _rank(np.vstack([jac, t - s * eye]) if jac.size else t - s * eye, exact)
        b = _rank(delta.dot(eye3 + s * adu), exact)
        out.append(z - b)
    return out[0], out[1]

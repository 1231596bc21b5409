"""Finitely presented groups.

A word is a tuple of nonzero ints: ``i`` stands for generator ``x_i`` (1-based)
and ``-i`` for its inverse.
"""

from __future__ import annotations

import operator
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactlin import f2_matrix, f2_rank_kernel, f2_span, int_matrix, smith_normal_form

Word = tuple


def free_reduce(word) -> Word:
    out: list[int] = []
    for x in word:
        x = int(x)
        if x == 0:
            raise ValueError("0 is not a generator index")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def word_inverse(word) -> Word:
    return tuple(-x for x in reversed(word))


def parse_word(text: str) -> Word:
    """Parse whitespace-separated signed generator indices, e.g. ``"1 2 -1 -2"``."""
    return tuple(int(t) for t in text.split())


def format_word(word) -> str:
    return " ".join(str(x) for x in word)


def commutator(a, b) -> Word:
    a, b = tuple(a), tuple(b)
    return free_reduce(a + b + word_inverse(a) + word_inverse(b))


@dataclass(frozen=True)
class Presentation:
    num_generators: int
    relators: tuple = field(default=())

    def __post_init__(self):
        if self.num_generators < 1:
            raise ValueError("a presentation needs at least one generator")
        rels = tuple(free_reduce(r) for r in self.relators)
        for j, r in enumerate(rels):
            bad = [x for x in r if abs(x) > self.num_generators]
            if bad:
                raise ValueError(f"relator {j + 1} uses generator {bad[0]} > {self.num_generators}")
        object.__setattr__(self, "relators", rels)

    @property
    def num_relators(self) -> int:
        return len(self.relators)

    def exponent_matrix(self) -> np.ndarray:
        """Integer matrix with rows indexed by relators and columns by generators."""
        m = np.zeros((self.num_relators, self.num_generators), dtype=object)
        m[...] = 0
        for j, r in enumerate(self.relators):
            for x in r:
                m[j, abs(x) - 1] += 1 if x > 0 else -1
        return m

    def parity_matrix(self) -> np.ndarray:
        """Mod-2 exponent matrix E with ``E[i, j]`` the parity of ``x_i`` in ``r_j``."""
        return f2_matrix(self.exponent_matrix().T.astype(np.int64), cols=self.num_relators)


def torus_presentation() -> Presentation:
    """<x, y, z | [x,y], [x,z], [y,z]>"""
    return Presentation(3, ((1, 2, -1, -2), (1, 3, -1, -3), (2, 3, -2, -3)))


def free_presentation(g: int = 3) -> Presentation:
    return Presentation(g, ())


def word_eval(word, images, identity=None, mul=operator.mul, inverse=None):
    """Evaluate ``word`` with generator ``i`` sent to ``images[i-1]``.

    ``identity`` defaults to the quaternion 1 and ``inverse`` to the
    ``.inverse()`` method of the images.
    """
    if identity is None:
        from .su2core import ONE

        identity = ONE
    if inverse is None:
        inverse = lambda g: g.inverse()  # noqa: E731
    out = identity
    for x in word:
        k = abs(x) - 1
        if k >= len(images):
            raise IndexError(f"generator {abs(x)} has no image (only {len(images)} given)")
        out = mul(out, images[k] if x > 0 else inverse(images[k]))
    return out


@dataclass(frozen=True)
class Abelianization:
    relation_matrix: np.ndarray
    free_rank: int
    torsion: tuple


def abelianize(p: Presentation) -> Abelianization:
    m = p.exponent_matrix()
    if m.shape[0] == 0:
        return Abelianization(m, p.num_generators, ())
    _, d, _ = smith_normal_form(m)
    diag = [int(d[i, i]) for i in range(min(d.shape)) if d[i, i] != 0]
    return Abelianization(m, p.num_generators - len(diag), tuple(x for x in diag if x > 1))


@dataclass(frozen=True, order=True)
class Character:
    """A homomorphism to Z2, stored as bits on the generators (1 means -1)."""

    values: tuple

    @property
    def signs(self) -> tuple:
        return tuple(-1 if v else 1 for v in self.values)

    def __call__(self, word) -> int:
        return sum(self.values[abs(x) - 1] for x in word) % 2

    def __add__(self, other: "Character") -> "Character":
        return Character(tuple((a + b) % 2 for a, b in zip(self.values, other.values)))

    def is_trivial(self) -> bool:
        return not any(self.values)

    def __str__(self) -> str:
        return "".join(str(v) for v in self.values)


def character_basis(p: Presentation) -> list[Character]:
    """A basis of Hom(G, Z2): the kernel of the transposed parity matrix."""
    e = p.parity_matrix()
    if p.num_relators == 0:
        vecs = [np.eye(p.num_generators, dtype=np.uint8)[i] for i in range(p.num_generators)]
    else:
        _, vecs = f2_rank_kernel(e.T)
    vecs = sorted((tuple(int(x) for x in v) for v in vecs), reverse=True)
    return [Character(v) for v in vecs]


def mod2_characters(p: Presentation) -> list[Character]:
    """All homomorphisms to Z2, lexicographically sorted (trivial first)."""
    basis = character_basis(p)
    span = f2_span([np.array(c.values) for c in basis], p.num_generators)
    return sorted(Character(tuple(int(x) for x in v)) for v in span) if span else []


@dataclass(frozen=True)
class Cover:
    presentation: Presentation
    inclusion: tuple  # words in the base group, one per cover generator
    transversal: tuple  # coset representatives (words)
    index: int


def _letter_order(g: int):
    for i in range(1, g + 1):
        yield i
        yield -i


def reidemeister_schreier(p: Presentation, quotient) -> Cover:
    """Presentation of the kernel of ``G -> (Z2)^k`` given by ``k`` characters.

    Coset representatives form the shortlex-least Schreier transversal;
    Schreier generators on the spanning tree are eliminated.
    """
    quotient = list(quotient)
    k = len(quotient)
    g = p.num_generators
    if k:
        vals = np.array([c.values for c in quotient], dtype=np.uint8)
        rank, _ = f2_rank_kernel(vals)
        if rank < k:
            raise ValueError("characters are not independent")
    for c in quotient:
        for r in p.relators:
            if c(r):
                raise ValueError(f"{c} is not a homomorphism (nonzero on a relator)")

    def image(x) -> tuple:
        return tuple(c.values[abs(x) - 1] for c in quotient)

    def act(coset, x):
        return tuple((a + b) % 2 for a, b in zip(coset, image(x)))

    start = (0,) * k
    reps = {start: ()}
    queue = deque([start])
    while queue:
        coset = queue.popleft()
        for x in _letter_order(g):
            nxt = act(coset, x)
            if nxt not in reps:
                reps[nxt] = reps[coset] + (x,)
                queue.append(nxt)
    cosets = sorted(reps, key=lambda c: (len(reps[c]), [abs(x) * 2 + (x < 0) for x in reps[c]]))

    # Schreier generator (coset, i) = rep(coset) x_i rep(coset x_i)^-1
    tree = set()
    for coset in cosets:
        word = reps[coset]
        if word:
            prev = act(coset, word[-1])  # word[-1] acts as an involution on cosets
            x = word[-1]
            tree.add((prev, x) if x > 0 else (coset, -x))
    numbering = {}
    inclusion = []
    for coset in cosets:
        for i in range(1, g + 1):
            if (coset, i) in tree:
                continue
            numbering[(coset, i)] = len(numbering) + 1
            inclusion.append(free_reduce(reps[coset] + (i,) + word_inverse(reps[act(coset, i)])))

    def rewrite(coset, word):
        out = []
        for x in word:
            if x > 0:
                n = numbering.get((coset, x))
                if n:
                    out.append(n)
                coset = act(coset, x)
            else:
                coset = act(coset, x)
                n = numbering.get((coset, -x))
                if n:
                    out.append(-n)
        return tuple(out)

    relators = [rewrite(coset, r) for coset in cosets for r in p.relators]
    cover = Presentation(len(numbering), tuple(relators))
    return Cover(cover, tuple(inclusion), tuple(reps[c] for c in cosets), len(cosets))


def universal_z2_cover(p: Presentation) -> Cover:
    """The cover corresponding to G -> H_1(G; Z2)."""
    return reidemeister_schreier(p, character_basis(p))


# --- Fox calculus ----------------------------------------------------------


def _is_integral(images) -> bool:
    for m in images:
        for x in np.asarray(m, dtype=object).ravel():
            if isinstance(x, (int, np.integer, Fraction)):
                continue
            if isinstance(x, float) and x.is_integer():
                continue
            return False
    return True


def _exact_inverse(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        k = next((i for i in range(col, n) if a[i][col] != 0), None)
        if k is None:
            raise ValueError("action matrix is singular")
        a[col], a[k] = a[k], a[col]
        piv = a[col][col]
        a[col] = [x / piv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        out[i, :] = a[i][n:]
    return out


def _as_exact(m) -> np.ndarray:
    m = np.asarray(m, dtype=object)
    out = np.empty(m.shape, dtype=object)
    for idx, x in np.ndenumerate(m):
        out[idx] = Fraction(int(x)) if isinstance(x, float) else Fraction(x)
    return out


def fox_jacobian(p: Presentation, images, check_tol: float = 1e-9) -> np.ndarray:
    """Fox derivatives of the relators evaluated under a linear action.

    Block ``(j, i)`` (rows ``j*d:(j+1)*d``, columns ``i*d:(i+1)*d``) is
    ``d r_j / d x_i``.  Integral actions are handled exactly (object array of
    Fractions); anything else in floating point.  The kernel of the result is
    the space of 1-cocycles.
    """
    images = list(images)
    if len(images) != p.num_generators:
        raise ValueError(f"expected {p.num_generators} action matrices, got {len(images)}")
    d = np.asarray(images[0]).shape[0] if images else 0
    exact = _is_integral(images)
    if exact:
        mats = [_as_exact(m) for m in images]
        invs = [_exact_inverse(m) for m in mats]
        eye = _as_exact(np.eye(d, dtype=np.int64))
        out = np.empty((p.num_relators * d, p.num_generators * d), dtype=object)
        out[...] = Fraction(0)
    else:
        mats = [np.asarray(m, dtype=float) for m in images]
        invs = [np.linalg.inv(m) for m in mats]
        eye = np.eye(d)
        out = np.zeros((p.num_relators * d, p.num_generators * d))
    for j, r in enumerate(p.relators):
        prefix = eye
        for x in r:
            i = abs(x) - 1
            if x > 0:
                out[j * d:(j + 1) * d, i * d:(i + 1) * d] += prefix
                prefix = prefix.dot(mats[i])
            else:
                prefix = prefix.dot(invs[i])
                out[j * d:(j + 1) * d, i * d:(i + 1) * d] -= prefix
        if exact:
            ok = all(prefix[a, b] == eye[a, b] for a in range(d) for b in range(d))
        else:
            ok = np.allclose(prefix, eye, atol=check_tol)
        if not ok:
            raise ValueError(f"relator {j + 1} is not sent to the identity by the action")
    return out


def coboundary_matrix(images) -> np.ndarray:
    """Stacked ``(A_i - I)``: the map from 0-cochains to 1-cochains."""
    images = list(images)
    d = np.asarray(images[0]).shape[0]
    if _is_integral(images):
        blocks = [_as_exact(m) - _as_exact(np.eye(d, dtype=np.int64)) for m in images]
        return np.vstack(blocks)
    return np.vstack([np.asarray(m, dtype=float) - np.eye(d) for m in images])


def random_word(rng, g: int, length: int) -> Word:
    """A freely reduced random word of at most ``length`` letters."""
    letters = [int(x) for x in rng.integers(1, g + 1, size=length)]
    signs = rng.choice([-1, 1], size=length)
    return free_reduce(tuple(int(s) * x for s, x in zip(signs, letters)))


def random_commutator_presentation(rng, g: int = 3, num_relators: int | None = None,
                                   max_len: int = 3) -> Presentation:
    """Presentation whose relators are products of one or two commutators of
    random words, so every relator has zero exponent sums."""
    if num_relators is None:
        num_relators = int(rng.integers(1, 4))
    rels = []
    while len(rels) < num_relators:
        parts = []
        for _ in range(int(rng.integers(1, 3))):
            a = random_word(rng, g, int(rng.integers(1, max_len + 1)))
            b = random_word(rng, g, int(rng.integers(1, max_len + 1)))
            parts.extend(commutator(a, b))
        r = free_reduce(parts)
        if r:
            rels.append(r)
    return Presentation(g, tuple(rels))


__all__ = [
    "Abelianization", "Character", "Cover", "Presentation", "Word", "abelianize",
    "character_basis", "commutator", "coboundary_matrix", "format_word",
    "fox_jacobian", "free_presentation", "free_reduce", "mod2_characters",
    "parse_word", "random_commutator_presentation", "reidemeister_schreier",
    "torus_presentation", "universal_z2_cover", "word_eval", "word_inverse",
]

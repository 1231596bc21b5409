"""The mod-2 triple cup product on H^1(Y; Z2) of a homology 3-torus.

H^2 is written in Poincare-dual coordinates throughout: a class is the
functional ``c -> form(., ., c)`` on H^1, stored as its values on the basis.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .exactlin import f2_rank, f2_vector

WEDGE_BASIS = ((0, 1), (0, 2), (1, 2))


@dataclass(frozen=True)
class TrilinearForm:
    """Alternating trilinear form over F2, given by its values on basis triples.

    ``values`` maps 0-based increasing triples ``(i, j, k)`` to 0 or 1; missing
    triples are 0.
    """

    dim: int = 3
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for key, v in self.values.items():
            key = tuple(int(t) for t in key)
            if len(key) != 3 or not (0 <= key[0] < key[1] < key[2] < self.dim):
                raise ValueError(f"bad basis triple {key} for dimension {self.dim}")
            if v % 2:
                clean[key] = 1
        object.__setattr__(self, "values", clean)

    def __hash__(self):
        return hash((self.dim, tuple(sorted(self.values))))

    def tensor(self) -> np.ndarray:
        t = np.zeros((self.dim,) * 3, dtype=np.int64)
        for (i, j, k), v in self.values.items():
            for perm in itertools.permutations((i, j, k)):
                t[perm] = v
        return t


def torus_form() -> TrilinearForm:
    return TrilinearForm(3, {(0, 1, 2): 1})


def zero_form(dim: int = 3) -> TrilinearForm:
    return TrilinearForm(dim, {})


def basis_vector(i: int, dim: int = 3) -> np.ndarray:
    e = np.zeros(dim, dtype=np.uint8)
    e[i] = 1
    return e


def triple_eval(f: TrilinearForm, a, b, c) -> int:
    a, b, c = (f2_vector(x).astype(np.int64) for x in (a, b, c))
    for x in (a, b, c):
        if x.shape[0] != f.dim:
            raise ValueError(f"vector of length {x.shape[0]} for a form of dimension {f.dim}")
    return int(np.einsum("ijk,i,j,k->", f.tensor(), a, b, c) % 2)


def is_odd(f: TrilinearForm) -> bool:
    return any(f.values.values())


def pair_functional(f: TrilinearForm, b, c) -> np.ndarray:
    """Coordinates of ``b cup c`` in H^2: the values ``form(b, c, e_k)``."""
    b, c = f2_vector(b).astype(np.int64), f2_vector(c).astype(np.int64)
    return (np.einsum("ijk,i,j->k", f.tensor(), b, c) % 2).astype(np.uint8)


def cup_matrix(f: TrilinearForm, x) -> np.ndarray:
    """Matrix of ``(b, c) -> form(x, b, c)``; also the matrix of ``cup x: H^1 -> H^2``."""
    x = f2_vector(x).astype(np.int64)
    return (np.einsum("ijk,i->jk", f.tensor(), x) % 2).astype(np.uint8)


def cup_rank(f: TrilinearForm, x) -> int:
    return f2_rank(cup_matrix(f, x))


def lambda2_cup_matrix(f: TrilinearForm) -> np.ndarray:
    """Matrix of ``beta ^ gamma -> beta cup gamma`` from the wedge basis
    ``(e1^e2, e1^e3, e2^e3)`` to Poincare-dual coordinates of H^2."""
    if f.dim != 3:
        raise ValueError("the wedge-square cup map is only implemented for dimension 3")
    cols = [pair_functional(f, basis_vector(i), basis_vector(j)) for i, j in WEDGE_BASIS]
    return np.array(cols, dtype=np.uint8).T


def wedge(beta, gamma) -> np.ndarray:
    """Coordinates of ``beta ^ gamma`` in the wedge basis."""
    b, c = f2_vector(beta), f2_vector(gamma)
    return np.array([(b[i] * c[j] + b[j] * c[i]) % 2 for i, j in WEDGE_BASIS], dtype=np.uint8)


def enum_z2z2(f: TrilinearForm, w) -> list[tuple[np.ndarray, np.ndarray]]:
    """Z2+Z2 representations with second Stiefel-Whitney class ``w``.

    One ``(beta, gamma)`` is returned for each nonzero wedge element mapped to
    ``w`` by the cup product; every wedge element in dimension 3 is
    decomposable.
    """
    w = f2_vector(w)
    m = lambda2_cup_matrix(f).astype(np.int64)
    vecs = [np.array(v, dtype=np.uint8) for v in itertools.product((0, 1), repeat=3)]
    out = []
    for lam in itertools.product((0, 1), repeat=3):
        lam = np.array(lam, dtype=np.int64)
        if not lam.any() or not np.array_equal(m @ lam % 2, w):
            continue
        beta, gamma = next(
            (b, c) for b, c in itertools.combinations(vecs, 2) if np.array_equal(wedge(b, c), lam)
        )
        out.append((beta, gamma))
    return out

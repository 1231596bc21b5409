"""The action of H^1(G; Z2) on conjugacy classes of projective representations."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .grouppres import Character, Presentation, mod2_characters, universal_z2_cover, word_eval
from .projrep import (
    ProjectiveRep,
    as_class,
    best_conjugator,
    enum_q8,
    q8_canonical_code,
    q8_indices,
    twist,
)
from .su2core import ImageTag, classify_image

NUMERIC_TOL = 1e-8


@dataclass(frozen=True)
class Orbit:
    members: tuple
    stabilizer: tuple  # characters

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class OrbitDecomposition:
    orbits: tuple
    group_order: int
    nonzero_class: bool = True
    sizes: tuple = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(o.size for o in self.orbits))

    def count(self, size: int) -> int:
        return sum(1 for s in self.sizes if s == size)


class MissingTwist(ValueError):
    pass


def _same_class(r1: ProjectiveRep, r2: ProjectiveRep, tol: float) -> bool:
    if r1.signs != r2.signs:
        return False
    if r1.is_exact() and r2.is_exact():
        return q8_canonical_code(q8_indices(r1)) == q8_canonical_code(q8_indices(r2))
    return best_conjugator(r1.images, r2.images)[1] < tol


def orbit_decompose(p: Presentation, reps, tol: float = NUMERIC_TOL,
                    nonzero_class: bool | None = None) -> OrbitDecomposition:
    """Split conjugacy-class representatives into orbits of the twisting action.

    Membership is decided exactly for Q8-valued reps and by numerically
    solving the conjugation problem otherwise.
    """
    reps = list(reps)
    chars = mod2_characters(p)
    exact_codes = {}
    for n, r in enumerate(reps):
        if r.is_exact():
            exact_codes[(r.signs, q8_canonical_code(q8_indices(r)))] = n

    def locate(rep: ProjectiveRep) -> int | None:
        if rep.is_exact():
            return exact_codes.get((rep.signs, q8_canonical_code(q8_indices(rep))))
        for n, other in enumerate(reps):
            if _same_class(rep, other, tol):
                return n
        return None

    seen = set()
    orbits = []
    for n, rep in enumerate(reps):
        if n in seen:
            continue
        members = []
        stab = []
        for chi in chars:
            m = locate(twist(rep, chi))
            if m is None:
                raise MissingTwist(f"twist of {rep} by {chi} is not among the given representations")
            if m == n:
                stab.append(chi)
            if m not in members:
                members.append(m)
        if len(members) * len(stab) != len(chars):
            raise AssertionError("orbit size times stabiliser order differs from |H^1|")
        seen.update(members)
        orbits.append(Orbit(tuple(reps[m] for m in sorted(members)), tuple(stab)))
    if nonzero_class is None:
        nonzero_class = bool(reps) and not as_class(p, reps[0].sign_bits).is_zero()
    return OrbitDecomposition(tuple(orbits), len(chars), nonzero_class)


def decompose_class(p: Presentation, w) -> OrbitDecomposition:
    w = as_class(p, w)
    return orbit_decompose(p, enum_q8(p, w), nonzero_class=not w.is_zero())


class OneOrbitError(AssertionError):
    """An orbit of size one for a nonzero class, which the theory rules out."""


def lambda3_mod2(decomp: OrbitDecomposition) -> int:
    """Parity of the number of two-element orbits.

    Orbits of four and eight elements contribute an even amount to the half
    count; orbits of one element cannot occur for a nonzero class.
    """
    if decomp.nonzero_class and decomp.count(1):
        raise OneOrbitError("orbit of size one for a nonzero cocycle class")
    return decomp.count(2) % 2


class CoverTag(enum.Enum):
    IRREDUCIBLE = "Irreducible"
    REDUCIBLE_NON_CENTRAL = "ReducibleNonCentral"
    CENTRAL = "Central"


def restrict_to_cover(p: Presentation, rep: ProjectiveRep, cover=None) -> list:
    cover = cover or universal_z2_cover(p)
    return [word_eval(w, list(rep.images)) for w in cover.inclusion]


def cover_reducibility(p: Presentation, rep: ProjectiveRep, cover=None,
                       tol: float = NUMERIC_TOL) -> CoverTag:
    """Classify the restriction of ``rep`` to the 2-universal abelian cover."""
    tag = classify_image(restrict_to_cover(p, rep, cover), tol).tag
    if tag is ImageTag.CENTRAL:
        return CoverTag.CENTRAL
    if tag is ImageTag.CIRCLE_REDUCIBLE:
        return CoverTag.REDUCIBLE_NON_CENTRAL
    return CoverTag.IRREDUCIBLE


def stabilizer_order(orbit: Orbit) -> int:
    return len(orbit.stabilizer)


__all__ = [
    "Character", "CoverTag", "MissingTwist", "OneOrbitError", "Orbit", "OrbitDecomposition",
    "cover_reducibility", "decompose_class", "lambda3_mod2", "orbit_decompose",
    "restrict_to_cover", "stabilizer_order", "twist",
]

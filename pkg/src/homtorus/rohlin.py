"""Surgery bookkeeping for algebraically split links of at most three components.

Subsets of link components are bitmasks: bit ``i`` set means component
``i + 1`` is in the subset.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import cupforms
from .exactlin import f2_solve_affine, f2_span
from .grouppres import Presentation
from .orbitact import decompose_class, lambda3_mod2
from .projrep import cocycle_classes


@dataclass(frozen=True)
class SurgeryDatum:
    linking_matrix: np.ndarray
    cup_data: cupforms.TrilinearForm | None = None
    rohlin_leaves: dict = field(default_factory=dict)
    casson_leaves: dict = field(default_factory=dict)
    epsilon: tuple | None = None

    @property
    def n(self) -> int:
        return int(np.asarray(self.linking_matrix).shape[0])

    def is_algebraically_split(self) -> bool:
        m = np.asarray(self.linking_matrix, dtype=np.int64)
        return not (m - np.diag(np.diag(m))).any()


def subset_mask(components) -> int:
    out = 0
    for c in components:
        out |= 1 << (c - 1)
    return out


def mask_bits(mask: int, n: int) -> str:
    return "".join("1" if mask >> i & 1 else "0" for i in range(n))


def spin_structures(d: SurgeryDatum) -> list[np.ndarray]:
    """Characteristic sublinks: solutions of ``L c = diag(L)`` mod 2."""
    m = np.asarray(d.linking_matrix, dtype=np.int64) % 2
    sol = f2_solve_affine(m, np.diag(m))
    if sol is None:
        raise ValueError("no characteristic sublink: the linking matrix is inconsistent")
    particular, kernel = sol
    sols = [((particular + k) % 2).astype(np.uint8) for k in f2_span(kernel, d.n)]
    return sorted(sols, key=tuple)


def _leaf(leaves: dict, mask: int, n: int):
    if mask not in leaves:
        raise KeyError(f"missing leaf for sublink {mask_bits(mask, n)}")
    return leaves[mask]


def _difference(f, k: int):
    """Surgery on component ``k`` minus no surgery: ``S -> f(S + k) + f(S)``."""
    return lambda mask: (f(mask | 1 << k) + f(mask)) % 2


@dataclass(frozen=True)
class RohlinLadder:
    rho1: dict  # component -> value
    rho2: dict  # (k, l) -> value
    rho3: int | None


def rho_ladder(d: SurgeryDatum) -> RohlinLadder:
    """First, second and third Rohlin differences of the leaf table, mod 2."""
    n = d.n
    if n > 3:
        raise ValueError("ledgers are limited to links of at most three components")
    base = lambda mask: _leaf(d.rohlin_leaves, mask, n) % 2  # noqa: E731
    rho1 = {k + 1: _difference(base, k)(0) for k in range(n)}
    rho2 = {
        (k + 1, l + 1): _difference(_difference(base, k), l)(0)
        for k, l in itertools.combinations(range(n), 2)
    }
    rho3 = None
    if n == 3:
        rho3 = _difference(_difference(_difference(base, 0), 1), 2)(0)
    return RohlinLadder(rho1, rho2, rho3)


def rho3_direct(d: SurgeryDatum) -> int:
    """The eight-term sum of Rohlin invariants over all sublinks of a 3-component link."""
    if d.n != 3:
        raise ValueError("needs a 3-component link")
    return sum(_leaf(d.rohlin_leaves, mask, 3) for mask in range(8)) % 2


def _epsilon(d: SurgeryDatum) -> tuple:
    return tuple(d.epsilon) if d.epsilon is not None else (1,) * d.n


def _sign(eps, mask: int) -> int:
    out = 1
    for i, e in enumerate(eps):
        if mask >> i & 1:
            out *= e
    return out


def casson_ledger(d: SurgeryDatum) -> Fraction:
    """Casson invariant of ``S^3 + e_1 k_1 + ... + e_n k_n`` from the leaves.

    ``casson_leaves[S]`` is the invariant of the 0-surgery on the sublink ``S``
    (first, second or third order according to ``|S|``).  The expansion is
    produced by peeling off one component at a time with the two surgery
    formulas.
    """
    n = d.n
    if n > 3:
        raise ValueError("ledgers are limited to links of at most three components")
    eps = _epsilon(d)

    def leaf(mask):
        return Fraction(_leaf(d.casson_leaves, mask, n))

    def expand(surgered: int, zeroed: int) -> Fraction:
        # invariant of S^3 + (e-surgery on `surgered`) + (0-surgery on `zeroed`)
        if not surgered:
            return leaf(zeroed) if zeroed else Fraction(0)
        k = surgered.bit_length() - 1
        rest = surgered & ~(1 << k)
        return expand(rest, zeroed) + eps[k] * expand(rest, zeroed | 1 << k)

    return expand((1 << n) - 1, 0)


def casson_closed_form(d: SurgeryDatum) -> Fraction:
    """``sum over nonempty S of eps_S * leaf(S)``."""
    eps = _epsilon(d)
    return sum(
        (_sign(eps, mask) * Fraction(_leaf(d.casson_leaves, mask, d.n)) for mask in range(1, 1 << d.n)),
        Fraction(0),
    )


@dataclass
class VerificationReport:
    lambda3_by_class: dict  # canonical sign bits -> value
    lambda3: int
    cup: int
    rho3: int
    w_independent: bool

    @property
    def values(self) -> tuple:
        return (self.lambda3, self.cup, self.rho3)

    @property
    def passed(self) -> bool:
        return self.w_independent and len(set(self.values)) == 1

    def summary(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return f"(lambda''' mod 2, cup, rho''') = ({self.lambda3}, {self.cup}, {self.rho3}) {status}"


def verify_casson_rohlin(p: Presentation, d: SurgeryDatum) -> VerificationReport:
    """Compare the two-orbit count, the triple cup product and the Rohlin ladder."""
    if d.cup_data is None:
        raise ValueError("surgery datum carries no cup form")
    if d.n != 3 or not d.is_algebraically_split():
        raise ValueError("verification needs an algebraically split 3-component link")
    _, classes = cocycle_classes(p)
    by_class = {}
    for bits in classes:
        if any(bits):
            by_class[bits] = lambda3_mod2(decompose_class(p, bits))
    values = set(by_class.values())
    # no presentable nonzero class: the moduli space is empty and the count is 0
    lam = by_class[min(by_class)] if by_class else 0
    cup = cupforms.triple_eval(d.cup_data, *np.eye(3, dtype=np.uint8))
    rho3 = rho_ladder(d).rho3
    return VerificationReport(by_class, lam, cup, rho3, len(values) <= 1)

"""Unit quaternions, the adjoint action on imaginary quaternions, and
classification of finite sets of SU(2) elements."""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class Quat:
    """Quaternion ``a + b i + c j + d k``.

    Integer coefficients stay integers under multiplication, which is how the
    quaternion group Q8 is handled exactly.
    """

    a: float = 1
    b: float = 0
    c: float = 0
    d: float = 0

    def __mul__(self, o: "Quat") -> "Quat":
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return Quat(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )

    def __neg__(self) -> "Quat":
        return Quat(-self.a, -self.b, -self.c, -self.d)

    def conj(self) -> "Quat":
        return Quat(self.a, -self.b, -self.c, -self.d)

    def norm2(self):
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def inverse(self) -> "Quat":
        n = self.norm2()
        if n == 1:
            return self.conj()
        return Quat(self.a / n, -self.b / n, -self.c / n, -self.d / n)

    def normalized(self) -> "Quat":
        n = math.sqrt(self.norm2())
        return Quat(self.a / n, self.b / n, self.c / n, self.d / n)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c, self.d], dtype=float)

    @property
    def imag(self) -> np.ndarray:
        return np.array([self.b, self.c, self.d], dtype=float)

    @classmethod
    def from_array(cls, x) -> "Quat":
        return cls(*(float(t) for t in x))

    def is_exact(self) -> bool:
        return all(isinstance(t, int) for t in (self.a, self.b, self.c, self.d))

    def distance(self, o: "Quat") -> float:
        return float(np.linalg.norm(self.as_array() - o.as_array()))

    def __str__(self) -> str:
        label = Q8_LABELS.get(self)
        if label is not None:
            return label
        return f"({self.a:.6g}{self.b:+.6g}i{self.c:+.6g}j{self.d:+.6g}k)"


ONE = Quat(1, 0, 0, 0)
I = Quat(0, 1, 0, 0)
J = Quat(0, 0, 1, 0)
K = Quat(0, 0, 0, 1)

# index order used for all exact Q8 bookkeeping
Q8 = (ONE, -ONE, I, -I, J, -J, K, -K)
Q8_LABELS = {q: s for q, s in zip(Q8, ("1", "-1", "i", "-i", "j", "-j", "k", "-k"))}
Q8_INDEX = {q: n for n, q in enumerate(Q8)}


def q8_from_label(label: str) -> Quat:
    for q, s in Q8_LABELS.items():
        if s == label.strip():
            return q
    raise ValueError(f"not a Q8 label: {label!r}")


def mul_table() -> np.ndarray:
    """8x8 table of Q8 products in ``Q8`` index order."""
    return np.array([[Q8_INDEX[p * q] for q in Q8] for p in Q8], dtype=np.int64)


def adjoint_so3(q: Quat) -> np.ndarray:
    """Matrix of ``v -> q v q^-1`` on the imaginary quaternions (basis i, j, k).

    Integer quaternions give an integer (object) matrix.
    """
    a, b, c, d = q.a, q.b, q.c, q.d
    rows = [
        [a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c)],
        [2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b)],
        [2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d],
    ]
    if q.is_exact():
        return np.array(rows, dtype=object)
    return np.array(rows, dtype=float)


def quat_from_rotation(r) -> Quat:
    """A unit quaternion whose adjoint is the rotation matrix ``r``."""
    r = np.asarray(r, dtype=float)
    tr = np.trace(r)
    # Shepperd's method: branch on the largest diagonal term for stability
    if tr > max(r[0, 0], r[1, 1], r[2, 2]):
        s = 2.0 * math.sqrt(1.0 + tr)
        q = (s / 4, (r[2, 1] - r[1, 2]) / s, (r[0, 2] - r[2, 0]) / s, (r[1, 0] - r[0, 1]) / s)
    elif r[0, 0] >= r[1, 1] and r[0, 0] >= r[2, 2]:
        s = 2.0 * math.sqrt(1.0 + r[0, 0] - r[1, 1] - r[2, 2])
        q = ((r[2, 1] - r[1, 2]) / s, s / 4, (r[0, 1] + r[1, 0]) / s, (r[0, 2] + r[2, 0]) / s)
    elif r[1, 1] >= r[2, 2]:
        s = 2.0 * math.sqrt(1.0 + r[1, 1] - r[0, 0] - r[2, 2])
        q = ((r[0, 2] - r[2, 0]) / s, (r[0, 1] + r[1, 0]) / s, s / 4, (r[1, 2] + r[2, 1]) / s)
    else:
        s = 2.0 * math.sqrt(1.0 + r[2, 2] - r[0, 0] - r[1, 1])
        q = ((r[1, 0] - r[0, 1]) / s, (r[0, 2] + r[2, 0]) / s, (r[1, 2] + r[2, 1]) / s, s / 4)
    out = Quat(*q).normalized()
    if out.a < 0 or (out.a == 0 and next(x for x in (out.b, out.c, out.d) if x) < 0):
        out = -out
    return out


def conjugate(u: Quat, q: Quat) -> Quat:
    return u * q * u.inverse()


class ImageTag(enum.Enum):
    CENTRAL = "Central"
    CIRCLE_REDUCIBLE = "CircleReducible"
    QUATERNION_Q = "QuaternionQ"
    IRREDUCIBLE_OTHER = "IrreducibleOther"


@dataclass(frozen=True)
class ImageClass:
    tag: ImageTag
    witness: Quat | None = None


def _is_central(q: Quat, tol: float) -> bool:
    return abs(abs(q.a) - 1.0) < tol and float(np.linalg.norm(q.imag)) < tol


def _axes(qs, tol):
    """Unit imaginary directions of the non-central elements."""
    out = []
    for q in qs:
        if _is_central(q, tol):
            continue
        v = q.imag
        out.append(v / np.linalg.norm(v))
    return out


def _frame_witness(e1, e2) -> Quat:
    """Unit quaternion rotating ``e1`` to i and (the orthogonalised) ``e2`` to j."""
    e2 = e2 - np.dot(e2, e1) * e1
    e2 = e2 / np.linalg.norm(e2)
    e3 = np.cross(e1, e2)
    return quat_from_rotation(np.vstack([e1, e2, e3]))


def _axis_witness(e1) -> Quat:
    trial = np.array([0.0, 1.0, 0.0]) if abs(e1[1]) < 0.9 else np.array([0.0, 0.0, 1.0])
    return _frame_witness(e1, trial)


def _near_q8(q: Quat, tol: float) -> Quat | None:
    for e in Q8:
        if q.distance(e) < tol:
            return e
    return None


def classify_image(qs, tol: float = DEFAULT_TOL) -> ImageClass:
    """Decide whether a finite set of unit quaternions is central, lies in a
    circle, is conjugate into Q8, or none of these."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    qs = list(qs)
    axes = _axes(qs, tol)
    if not axes:
        return ImageClass(ImageTag.CENTRAL, ONE)
    first = axes[0]
    if all(np.linalg.norm(np.cross(first, v)) < tol for v in axes[1:]):
        return ImageClass(ImageTag.CIRCLE_REDUCIBLE, _axis_witness(first))
    second = next(v for v in axes if np.linalg.norm(np.cross(first, v)) >= tol)
    if abs(np.dot(first, second)) < tol:
        u = _frame_witness(first, second)
        if all(_near_q8(conjugate(u, q), tol) is not None for q in qs):
            return ImageClass(ImageTag.QUATERNION_Q, u)
    return ImageClass(ImageTag.IRREDUCIBLE_OTHER)


def canonical_q8(qs, tol: float = DEFAULT_TOL) -> tuple[list[Quat], Quat]:
    """Snap a set conjugate into Q8 to exact Q8 elements.

    Returns ``(labels, witness)`` with ``witness * q * witness^-1`` within ``tol``
    of the corresponding label.
    """
    qs = list(qs)
    cls = classify_image(qs, tol)
    if cls.tag is ImageTag.IRREDUCIBLE_OTHER:
        raise ValueError("image is not conjugate into Q8")
    u = cls.witness
    labels = []
    for q in qs:
        e = _near_q8(conjugate(u, q), tol)
        if e is None:
            raise ValueError(f"{q} is not within {tol} of Q8 after conjugation")
        labels.append(e)
    return labels, u


# --- the 24 rotations normalising Q8 -------------------------------------


def q8_rotations() -> list[np.ndarray]:
    """The 24 signed permutation matrices of determinant 1."""
    out = []
    for perm in itertools.permutations(range(3)):
        for signs in itertools.product((1, -1), repeat=3):
            r = np.zeros((3, 3), dtype=np.int64)
            for row, col in enumerate(perm):
                r[row, col] = signs[row]
            if round(np.linalg.det(r)) == 1:
                out.append(r)
    return out


def q8_rotation_permutations() -> np.ndarray:
    """Each rotation as a permutation of the Q8 index set; shape (24, 8)."""
    perms = []
    for r in q8_rotations():
        row = []
        for q in Q8:
            im = r @ np.array([q.b, q.c, q.d], dtype=np.int64)
            row.append(Q8_INDEX[Quat(q.a, int(im[0]), int(im[1]), int(im[2]))])
        perms.append(row)
    return np.array(perms, dtype=np.int64)


# --- batched float quaternion helpers (arrays of shape (..., 4)) ---------


def qmul(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    a1, b1, c1, d1 = np.moveaxis(p, -1, 0)
    a2, b2, c2, d2 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        ],
        axis=-1,
    )


def qconj(q: np.ndarray) -> np.ndarray:
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def left_matrix(q: np.ndarray) -> np.ndarray:
    """4x4 matrix of ``x -> q x``."""
    a, b, c, d = q
    return np.array([[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]])


def right_matrix(q: np.ndarray) -> np.ndarray:
    """4x4 matrix of ``x -> x q``."""
    a, b, c, d = q
    return np.array([[a, -b, -c, -d], [b, a, d, -c], [c, -d, a, b], [d, c, -b, a]])


def best_conjugator(source, target) -> tuple[Quat, float]:
    """Unit ``u`` minimising ``sum |u s u^-1 - t|^2`` over paired elements.

    Returns ``u`` and the largest residual ``|u s u^-1 - t|``.  Because the
    quaternions form a division algebra, any nonzero solution of the linear
    system ``u s = t u`` is a valid conjugator.
    """
    source = [q.as_array() for q in source]
    target = [q.as_array() for q in target]
    if not source:
        return ONE, 0.0
    m = np.vstack([left_matrix(t) - right_matrix(s) for s, t in zip(source, target)])
    _, _, vt = np.linalg.svd(m)
    x = vt[-1]
    k = int(np.argmax(np.abs(x) > 1e-12))
    if x[k] < 0:
        x = -x
    u = Quat.from_array(x / np.linalg.norm(x))
    sq = [Quat.from_array(s) for s in source]
    resid = max(conjugate(u, s).distance(Quat.from_array(t)) for s, t in zip(sq, target))
    return u, resid

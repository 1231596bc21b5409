"""Exact linear algebra over F2 and the integers.

F2 rows are packed into Python ints (bit ``j`` is column ``j``) for elimination;
vectors cross the module boundary as ``uint8`` numpy arrays.  Integer matrices
are handled with arbitrary-precision Python ints held in object arrays.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def f2_vector(bits) -> np.ndarray:
    v = np.asarray(bits, dtype=np.int64).ravel()
    return (v % 2).astype(np.uint8)


def f2_matrix(entries, cols: int | None = None) -> np.ndarray:
    m = np.asarray(entries, dtype=np.int64)
    if m.size == 0:
        return np.zeros((m.shape[0] if m.ndim == 2 else 0, cols or 0), dtype=np.uint8)
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    return (m % 2).astype(np.uint8)


def _pack(row) -> int:
    out = 0
    for j, bit in enumerate(row):
        if bit:
            out |= 1 << j
    return out


def _unpack(x: int, n: int) -> np.ndarray:
    return np.array([(x >> j) & 1 for j in range(n)], dtype=np.uint8)


def _rref(rows: list[int], ncols: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form of packed rows; returns (pivot rows, pivot columns)."""
    rows = list(rows)
    pivots: list[int] = []
    reduced: list[int] = []
    for col in range(ncols):
        bit = 1 << col
        k = next((i for i, r in enumerate(rows) if r & bit), None)
        if k is None:
            continue
        pivot = rows.pop(k)
        rows = [r ^ pivot if r & bit else r for r in rows]
        reduced = [r ^ pivot if r & bit else r for r in reduced]
        reduced.append(pivot)
        pivots.append(col)
    return reduced, pivots


def f2_rank_kernel(m) -> tuple[int, list[np.ndarray]]:
    """Rank of ``m`` over F2 and a basis of its right kernel."""
    m = f2_matrix(m)
    ncols = m.shape[1]
    reduced, pivots = _rref([_pack(r) for r in m], ncols)
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        x = 1 << free
        for row, p in zip(reduced, pivots):
            if row >> free & 1:
                x |= 1 << p
        basis.append(_unpack(x, ncols))
    return len(pivots), basis


def f2_rank(m) -> int:
    m = f2_matrix(m)
    return len(_rref([_pack(r) for r in m], m.shape[1])[1])


def f2_solve_affine(m, b):
    """Solve ``m x = b`` over F2.

    Returns ``(particular, kernel_basis)`` or ``None`` if the system is
    inconsistent.  Free variables are set to zero in the particular solution.
    """
    m = f2_matrix(m)
    b = f2_vector(b)
    nrows, ncols = m.shape
    if b.shape[0] != nrows:
        raise ValueError(f"right-hand side has length {b.shape[0]}, expected {nrows}")
    # augmented column sits at bit position ncols
    aug = [_pack(r) | (int(bi) << ncols) for r, bi in zip(m, b)]
    reduced, pivots = _rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = 0
    for row, p in zip(reduced, pivots):
        if row >> ncols & 1:
            x |= 1 << p
    _, kernel = f2_rank_kernel(m)
    return _unpack(x, ncols), kernel


def f2_span(basis, n: int) -> list[np.ndarray]:
    """All 2^k elements of the span of ``basis`` (vectors of length ``n``)."""
    packed = [_pack(v) for v in basis]
    out = []
    for mask in range(1 << len(packed)):
        x = 0
        for k, v in enumerate(packed):
            if mask >> k & 1:
                x ^= v
        out.append(_unpack(x, n))
    return out


def int_matrix(entries, cols: int | None = None) -> np.ndarray:
    rows = [[int(x) for x in row] for row in entries]
    if not rows:
        return np.zeros((0, cols or 0), dtype=object)
    out = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != out.shape[1]:
            raise ValueError("ragged integer matrix")
        out[i, :] = row
    return out


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smith normal form ``u @ m @ v == d`` with ``u``, ``v`` unimodular.

    The diagonal of ``d`` is non-negative and each entry divides the next.
    """
    m = np.asarray(m, dtype=object)
    nrows, ncols = m.shape
    a = [[int(x) for x in row] for row in m]
    u = _identity(nrows)
    v = _identity(ncols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst -= q * row_src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):  # col_dst -= q * col_src
        for row in a:
            row[dst] -= q * row[src]
        for row in v:
            row[dst] -= q * row[src]

    for t in range(min(nrows, ncols)):
        while True:
            best = None
            for i in range(t, nrows):
                for j in range(t, ncols):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return int_matrix(u, nrows), int_matrix(a, ncols), int_matrix(v, ncols)
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = a[t][t]
            clean = True
            for i in range(t + 1, nrows):
                if a[i][t]:
                    add_row(i, t, a[i][t] // p)
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, ncols):
                if a[t][j]:
                    add_col(j, t, a[t][j] // p)
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, nrows) for j in range(t + 1, ncols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return int_matrix(u, nrows), int_matrix(a, ncols), int_matrix(v, ncols)


def invariant_factors(m) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form of ``m``."""
    _, d, _ = smith_normal_form(m)
    return [int(d[i, i]) for i in range(min(d.shape)) if d[i, i] != 0]


def rational_rank(m) -> int:
    """Exact rank over Q of a matrix with integer or Fraction entries."""
    rows = [[Fraction(x) for x in row] for row in np.asarray(m, dtype=object)]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        k = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if k is None:
            continue
        rows[rank], rows[k] = rows[k], rows[rank]
        piv = rows[rank][col]
        for i in range(rank + 1, len(rows)):
            if rows[i][col] != 0:
                f = rows[i][col] / piv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
        if rank == len(rows):
            break
    return rank


def float_rank(m, threshold: float = 1e-9) -> int:
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(s > threshold))

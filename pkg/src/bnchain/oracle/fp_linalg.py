"""Dense linear algebra over a prime field F_p on int64 arrays.

Intended for small matrices (a few dozen rows/columns) and primes below
2**31, so every intermediate product fits in int64.
"""

from __future__ import annotations

import numpy as np


def as_mod(m, p: int) -> np.ndarray:
    return np.asarray(m, dtype=np.int64) % p


def rref(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns (left to right)."""
    a = as_mod(m, p).copy()
    if a.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = a.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        nz = np.flatnonzero(a[row:, col])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        inv = pow(int(a[row, col]), p - 2, p)
        a[row] = (a[row] * inv) % p
        factors = a[:, col].copy()
        factors[row] = 0
        a = (a - np.outer(factors, a[row])) % p
        pivots.append(col)
        row += 1
    return a, pivots


def rank(m, p: int) -> int:
    m = np.asarray(m)
    if m.size == 0:
        return 0
    return len(rref(m, p)[1])


def nullspace(m, p: int, ncols: int | None = None) -> np.ndarray:
    """Basis (as rows) of {v : m v = 0 mod p}."""
    m = np.asarray(m, dtype=np.int64)
    if ncols is None:
        ncols = m.shape[1]
    if m.size == 0:
        return np.eye(ncols, dtype=np.int64)
    red, pivots = rref(m.reshape(-1, ncols), p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-red[r, f]) % p
    return basis


def leading_orders(rows, p: int) -> list[int]:
    """Distinct leading indices (orders) attained by nonzero vectors in the row span."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.size == 0:
        return []
    return rref(rows, p)[1]

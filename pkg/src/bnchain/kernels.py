"""Inner loops of the chain search.

Two interchangeable backends live here: numba-compiled loops and a
vectorized pure-numpy path. The numpy path is used when numba is missing or
when the environment variable ``BNCHAIN_PURE_NUMPY`` is set to a non-empty
value other than ``0``. Both backends must return identical arrays; the test
suite compares them directly.

Sequences are rows of an ``(N, r+1)`` int64 array in lexicographic order.
Criterion codes: 0 = necessary, 1 = sufficient.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

NECESSARY = 0
SUFFICIENT = 1

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def use_numba() -> bool:
    flag = os.environ.get("BNCHAIN_PURE_NUMPY", "")
    return HAVE_NUMBA and flag in ("", "0")


def backend_name() -> str:
    return "numba" if use_numba() else "numpy"


# ---------------------------------------------------------------------------
# numba backend


@njit(cache=True, nogil=True)
def _min_class_nb(seqs, i, j, d, t, crit):
    """Smallest class k for left seqs[i], right seqs[j]; -1 if none."""
    r1 = seqs.shape[1]
    r = r1 - 1
    for m in range(r1):
        if d - seqs[i, m] - seqs[j, r - m] < 0:
            return -1
    if crit == 0:
        res = -1
        for m in range(r1):
            if d - seqs[i, m] - seqs[j, r - m] == 0:
                cur = seqs[i, m] % t
                if res == -1:
                    res = cur
                elif res != cur:
                    return -1
        return 0 if res == -1 else res
    for k in range(t):
        ok = True
        for m in range(r1):
            nu = d - seqs[i, m] - seqs[j, r - m]
            a = seqs[i, m] % t
            if nu == 0:
                if a != k:
                    ok = False
                    break
            elif nu == 1:
                if a == k or (a + 1) % t == k:
                    ok = False
                    break
        if ok:
            return k
    return -1


@njit(cache=True, nogil=True)
def _bridge_left_mask_nb(seqs, right_mask, d, t, crit, lo, hi, out):
    n = seqs.shape[0]
    for i in range(lo, hi):
        found = False
        for j in range(n):
            if right_mask[j] and _min_class_nb(seqs, i, j, d, t, crit) >= 0:
                found = True
                break
        out[i] = found


@njit(cache=True, nogil=True)
def _bridge_row_nb(seqs, i, d, t, crit):
    n = seqs.shape[0]
    out = np.empty(n, dtype=np.int64)
    for j in range(n):
        out[j] = _min_class_nb(seqs, i, j, d, t, crit)
    return out


@njit(cache=True, nogil=True)
def _dominance_mask_nb(seqs, comp, next_mask, lo, hi, out):
    # out[i] <=> some L with next_mask[L] dominates the complement of seqs[i]
    n, r1 = seqs.shape
    for i in range(lo, hi):
        c = comp[i]
        found = False
        for j in range(n):
            if not next_mask[j]:
                continue
            ok = True
            for m in range(r1):
                if seqs[j, m] < seqs[c, m]:
                    ok = False
                    break
            if ok:
                found = True
                break
        out[i] = found


# ---------------------------------------------------------------------------
# numpy backend


def _class_table_np(left, right_rev, d, t, crit):
    """Min feasible class for every (left row, right row) pair; -1 if none.

    ``right_rev`` holds the right sequences reversed so nu = d - left - right_rev.
    """
    nu = d - left[:, None, :] - right_rev[None, :, :]
    valid = (nu >= 0).all(axis=2)
    res = np.broadcast_to((left % t)[:, None, :], nu.shape)
    tight = nu == 0
    out = np.full(valid.shape, -1, dtype=np.int64)
    if crit == NECESSARY:
        hi = np.where(tight, res, -1).max(axis=2)
        lo = np.where(tight, res, t).min(axis=2)
        agree = (hi == -1) | (hi == lo)
        ok = valid & agree
        out[ok] = np.where(hi[ok] == -1, 0, hi[ok])
        return out
    loose = nu == 1
    res_next = (res + 1) % t
    for k in range(t - 1, -1, -1):
        bad = (tight & (res != k)) | (loose & ((res == k) | (res_next == k)))
        ok = valid & ~bad.any(axis=2)
        out[ok] = k
    return out


def _chunks(n: int, size: int):
    for lo in range(0, n, size):
        yield lo, min(n, lo + size)


def _bridge_left_mask_np(seqs, right_mask, d, t, crit, lo, hi, out):
    right = seqs[right_mask]
    if right.shape[0] == 0:
        out[lo:hi] = False
        return
    right_rev = right[:, ::-1]
    step = max(1, 200_000 // max(1, right.shape[0] * seqs.shape[1]))
    for a, b in _chunks(hi - lo, step):
        table = _class_table_np(seqs[lo + a : lo + b], right_rev, d, t, crit)
        out[lo + a : lo + b] = (table >= 0).any(axis=1)


def _bridge_row_np(seqs, i, d, t, crit):
    return _class_table_np(seqs[i : i + 1], seqs[:, ::-1], d, t, crit)[0]


def _dominance_mask_np(seqs, comp, next_mask, lo, hi, out):
    targets = seqs[next_mask]
    if targets.shape[0] == 0:
        out[lo:hi] = False
        return
    step = max(1, 200_000 // max(1, targets.shape[0] * seqs.shape[1]))
    for a, b in _chunks(hi - lo, step):
        need = seqs[comp[lo + a : lo + b]]
        out[lo + a : lo + b] = (targets[None, :, :] >= need[:, None, :]).all(axis=2).any(axis=1)


# ---------------------------------------------------------------------------
# dispatch


def _run_split(kernel, n, jobs, *args):
    out = np.zeros(n, dtype=np.bool_)
    if jobs <= 1 or n < 2 * jobs:
        kernel(*args, 0, n, out)
        return out
    bounds = np.linspace(0, n, jobs + 1).astype(np.int64)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = [pool.submit(kernel, *args, int(lo), int(hi), out) for lo, hi in zip(bounds[:-1], bounds[1:])]
        for f in futures:
            f.result()
    return out


def bridge_left_mask(seqs, right_mask, d: int, t: int, crit: int, jobs: int = 1) -> np.ndarray:
    """Left sequences admitting some class and some right sequence in ``right_mask``."""
    kernel = _bridge_left_mask_nb if use_numba() else _bridge_left_mask_np
    return _run_split(kernel, seqs.shape[0], jobs, seqs, right_mask, d, t, crit)


def bridge_row(seqs, i: int, d: int, t: int, crit: int) -> np.ndarray:
    """Minimal feasible class for left seqs[i] against every right sequence (-1 = none)."""
    if use_numba():
        return _bridge_row_nb(seqs, i, d, t, crit)
    return _bridge_row_np(seqs, i, d, t, crit)


def dominance_mask(seqs, comp, next_mask, jobs: int = 1) -> np.ndarray:
    """Sequences whose complement is dominated pointwise by some sequence in ``next_mask``."""
    kernel = _dominance_mask_nb if use_numba() else _dominance_mask_np
    return _run_split(kernel, seqs.shape[0], jobs, seqs, comp, next_mask)


def sequence_table(r: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """All vanishing sequences for (r, d) in lexicographic order, plus complement indices."""
    from itertools import combinations

    rows = list(combinations(range(d + 1), r + 1))
    seqs = np.array(rows, dtype=np.int64).reshape(len(rows), r + 1)
    index = {row: i for i, row in enumerate(rows)}
    comp = np.array([index[tuple(d - a for a in reversed(row))] for row in rows], dtype=np.int64)
    return seqs, comp

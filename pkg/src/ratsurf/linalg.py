"""Row reduction, rank and kernels over a finite field.

Matrices are numpy int64 arrays of field encodings.
"""

from __future__ import annotations

import numpy as np

from .field import GF


def _row_axpy(F: GF, target, factor: int, source):
    """target - factor * source"""
    return F.vsub(target, F.vmul(np.full_like(source, factor), source))


def rref(M, F: GF, aug=None, col_order=None):
    """Reduced row echelon form.

    ``aug`` (optional) receives the same row operations.  ``col_order`` gives
    the order in which columns are tried as pivots (default: left to right).
    Returns ``(R, pivots, aug)`` with zero rows kept at the bottom.
    """
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    A = None if aug is None else np.array(aug, dtype=np.int64, copy=True)
    nrows, ncols = R.shape
    cols = range(ncols) if col_order is None else col_order
    pivots = []
    r = 0
    for c in cols:
        if r == nrows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
            if A is not None:
                A[[r, piv]] = A[[piv, r]]
        inv = F.inv(int(R[r, c]))
        if inv != 1:
            R[r] = F.vmul(R[r], inv)
            if A is not None:
                A[r] = F.vmul(A[r], inv)
        others = np.nonzero(R[:, c])[0]
        for o in others:
            if o == r:
                continue
            f = int(R[o, c])
            R[o] = _row_axpy(F, R[o], f, R[r])
            if A is not None:
                A[o] = _row_axpy(F, A[o], f, A[r])
        pivots.append(int(c))
        r += 1
    return R, pivots, A


def rank(M, F: GF) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return len(rref(M, F)[1])


def kernel(M, F: GF, ncols: int | None = None):
    """Basis (as rows) of {x : M x = 0}."""
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        n = ncols if ncols is not None else M.shape[1]
        return np.eye(n, dtype=np.int64)
    R, pivots, _ = rref(M, F)
    n = M.shape[1]
    free = [c for c in range(n) if c not in set(pivots)]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = F.neg(int(R[r, fc]))
    return basis


def in_row_space(v, M, F: GF) -> bool:
    M = np.asarray(M, dtype=np.int64)
    return rank(np.vstack([M, np.asarray(v, dtype=np.int64)[None, :]]), F) == rank(M, F)


def solve_left(M, v, F: GF):
    """Some x with x M = v, or None when v is not in the row space of M."""
    M = np.asarray(M, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    k = M.shape[0]
    # solve M^T x = v via rref of [M^T | v]
    aug = np.hstack([M.T, v[:, None]])
    R, pivots, _ = rref(aug, F)
    if k in pivots:
        return None
    x = np.zeros(k, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = R[r, k]
    return x


def matmul(A, B, F: GF):
    """Matrix product over F (small matrices)."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for i in range(A.shape[1]):
        out = F.vadd(out, F.vmul(A[:, i][:, None], B[i][None, :]))
    return out


def dedupe_rows(M, F: GF):
    """A row basis of the row space of M."""
    M = np.asarray(M, dtype=np.int64)
    if M.size == 0:
        return M
    R, pivots, _ = rref(M, F)
    return R[: len(pivots)]

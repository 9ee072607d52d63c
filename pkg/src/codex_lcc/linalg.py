"""Linear algebra over :class:`~codex_lcc.gf.GF`, batched along a leading axis.

Everything here is Gauss-Jordan elimination with table arithmetic.  The
batched form runs one elimination per leading index with independent pivot
choices, which is what the decoders need when many received words are
handled at once.
"""

from __future__ import annotations

import numpy as np

from .gf import GF


def batched_rref(F: GF, M, ncols: int | None = None):
    """Reduced row echelon form of each matrix in a stack.

    Parameters
    ----------
    M : array (B, r, c)
    ncols : only pivot on the first ``ncols`` columns (the rest are carried
        along, e.g. an augmented right-hand side).

    Returns
    -------
    R : (B, r, c) reduced matrices
    pivcol : (B, r) pivot column of each row, -1 for zero rows
    rank : (B,)
    """
    M = np.array(M, dtype=np.int64, copy=True)
    B, R, C = M.shape
    ncols = C if ncols is None else ncols
    rank = np.zeros(B, dtype=np.int64)
    pivcol = np.full((B, R), -1, dtype=np.int64)
    rows = np.arange(R)
    for col in range(ncols):
        cand = (M[:, :, col] != 0) & (rows[None, :] >= rank[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        full = bool(has.all())
        hb = np.arange(B) if full else np.nonzero(has)[0]
        pr = np.argmax(cand if full else cand[hb], axis=1)
        rr = rank[hb]
        sub = M if full else M[hb]
        h = np.arange(len(hb))
        prow = sub[h, pr].copy()
        sub[h, pr] = sub[h, rr]
        prow = F.mul(prow, F.inv(prow[:, col])[:, None])
        sub[h, rr] = prow
        f = sub[:, :, col].copy()
        f[h, rr] = 0
        if f.any():
            act = np.nonzero(f.any(axis=0))[0]  # rows needing elimination somewhere
            upd = F.sub(sub[:, act, col:], F.mul(f[:, act, None], prow[:, None, col:]))
            sub[:, act, col:] = upd
        if not full:
            M[hb] = sub
        pivcol[hb, rr] = col
        rank[hb] += 1
    return M, pivcol, rank


def rref(F: GF, M, ncols: int | None = None):
    R, piv, rank = batched_rref(F, np.asarray(M)[None], ncols)
    r = int(rank[0])
    return R[0], [int(c) for c in piv[0, :r]], r


def rank(F: GF, M) -> int:
    M = np.asarray(M)
    if M.size == 0:
        return 0
    return rref(F, M)[2]


def batched_rank(F: GF, M) -> np.ndarray:
    return batched_rref(F, M)[2]


def nullspace(F: GF, M) -> np.ndarray:
    """Basis of {x : M x = 0} as rows."""
    M = np.asarray(M, dtype=np.int64)
    r, c = M.shape
    R, piv, rk = rref(F, M)
    free = [j for j in range(c) if j not in piv]
    N = np.zeros((len(free), c), dtype=np.int64)
    for i, fcol in enumerate(free):
        N[i, fcol] = 1
        for row, pc in enumerate(piv):
            N[i, pc] = F.neg(int(R[row, fcol]))
    return N


def left_nullspace(F: GF, M) -> np.ndarray:
    """Basis of {y : y M = 0} as rows."""
    return nullspace(F, np.asarray(M).T)


def solve(F: GF, A, b):
    """One solution x of A x = b, or None if inconsistent.

    ``b`` may be a vector or a matrix of right-hand sides (columns).
    """
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    if vec:
        b = b[:, None]
    r, c = A.shape
    aug = np.concatenate([A, b], axis=1)
    R, piv, rk = rref(F, aug, ncols=c)
    if np.any(R[rk:, c:] != 0):
        return None
    x = np.zeros((c, b.shape[1]), dtype=np.int64)
    for row, pc in enumerate(piv):
        x[pc] = R[row, c:]
    return x[:, 0] if vec else x


def inverse(F: GF, A) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv, rk = rref(F, np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1), ncols=n)
    if rk < n:
        raise np.linalg.LinAlgError("singular matrix over " + repr(F))
    return R[:, n:]


def in_rowspace(F: GF, G, v) -> bool:
    G = np.asarray(G)
    return rank(F, np.vstack([G, np.asarray(v)[None]])) == rank(F, G)

"""Dense linear algebra over prime fields GF(p).

Everything here works on small integer numpy arrays with entries reduced mod p.
Matrices act on coefficient column vectors (coefficient 0 first).
"""

from __future__ import annotations

import numpy as np

from .errors import SingularLeftMultiplication


def _inv_mod_p(a: int, p: int) -> int:
    return pow(int(a), p - 2, p)


def rref(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``mat`` over GF(p); returns (rref, pivot columns)."""
    m = np.array(mat, dtype=np.int64) % p
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hit = np.nonzero(m[r:, c])[0]
        if hit.size == 0:
            continue
        i = r + int(hit[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = (m[r] * _inv_mod_p(m[r, c], p)) % p
        other = np.nonzero(m[:, c])[0]
        other = other[other != r]
        if other.size:
            m[other] = (m[other] - np.outer(m[other, c], m[r])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(mat: np.ndarray, p: int) -> int:
    return len(rref(mat, p)[1])


def kernel_basis(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows) of the right kernel {v : mat @ v = 0 mod p}."""
    m = np.atleast_2d(np.asarray(mat))
    cols = m.shape[1]
    red, pivots = rref(m, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-red[r, fc]) % p
    return basis


def solve(mat: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of mat @ x = rhs over GF(p), or None if inconsistent."""
    m = np.asarray(mat) % p
    b = np.asarray(rhs) % p
    aug = np.concatenate([m, b.reshape(-1, 1)], axis=1)
    red, pivots = rref(aug, p)
    if m.shape[1] in pivots:
        return None
    x = np.zeros(m.shape[1], dtype=np.int64)
    for r, c in enumerate(pivots):
        x[c] = red[r, -1]
    return x


def inverse(mat: np.ndarray, p: int) -> np.ndarray:
    """Matrix inverse over GF(p); raises SingularLeftMultiplication if singular."""
    m = np.asarray(mat) % p
    n = m.shape[0]
    aug = np.concatenate([m, np.eye(n, dtype=np.int64)], axis=1)
    red, pivots = rref(aug, p)
    if pivots[:n] != list(range(n)):
        raise SingularLeftMultiplication("matrix is singular mod %d" % p)
    return red[:, n:]


def row_space_contains(basis_rref: np.ndarray, pivots: list[int], vec: np.ndarray, p: int) -> bool:
    """Membership test against a precomputed RREF row space."""
    v = np.array(vec, dtype=np.int64) % p
    for r, c in enumerate(pivots):
        if v[c]:
            v = (v - v[c] * basis_rref[r]) % p
    return not v.any()


def batched_left_rank_deficient(mats: np.ndarray, p: int) -> np.ndarray:
    """Boolean mask over a stack of square matrices: True where rank < n over GF(p).

    ``mats`` has shape (batch, n, n); the batch is processed with vectorised
    Gaussian elimination (no per-matrix Python loop).
    """
    m = np.array(mats, dtype=np.int64) % p
    batch, n, _ = m.shape
    deficient = np.zeros(batch, dtype=bool)
    inv_table = np.array([0] + [_inv_mod_p(a, p) for a in range(1, p)], dtype=np.int64)
    for c in range(n):
        col = m[:, c:, c]
        has_piv = (col != 0).any(axis=1)
        deficient |= ~has_piv
        piv_off = np.argmax(col != 0, axis=1)
        # For already-deficient batches argmax lands on a zero row; the scaling
        # below then multiplies by inv(0)=0 and the batch stays inert.
        idx = np.arange(batch)
        piv_rows = m[idx, c + piv_off]
        m[idx, c + piv_off] = m[:, c]
        m[:, c] = piv_rows
        scale = inv_table[m[:, c, c]]
        m[:, c] = (m[:, c] * scale[:, None]) % p
        if c + 1 < n:
            factors = m[:, c + 1:, c]
            m[:, c + 1:] = (m[:, c + 1:] - factors[:, :, None] * m[:, c][:, None, :]) % p
    return deficient

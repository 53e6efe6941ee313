"""Dense linear algebra generic over the exact/float scalar backends.

Exact matrices are numpy object arrays of Fractions; float matrices are
ordinary float64 arrays.  Everything here is elementary Gaussian elimination:
the dimensions in this package never exceed a few hundred rows, and exactness
matters more than asymptotics.  Pivots are chosen by least bit length on the
exact backend (keeps intermediate fractions small) and by largest magnitude on
the float backend.  Output ordering is deterministic.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import DegenerateMetricError
from .scalars import DEFAULT_TOL, bit_size, is_zero

__all__ = [
    "zeros", "eye", "from_rows", "to_float", "is_float_array",
    "mat_equal", "mat_is_zero", "sparse_mm", "sparse_frob",
    "rref", "rank", "nullspace", "inv", "sylvester_signature",
]


def zeros(shape, exact: bool = True) -> np.ndarray:
    if not exact:
        return np.zeros(shape, dtype=float)
    M = np.empty(shape, dtype=object)
    M[...] = Fraction(0)
    return M


def eye(n: int, exact: bool = True) -> np.ndarray:
    M = zeros((n, n), exact)
    one = Fraction(1) if exact else 1.0
    for i in range(n):
        M[i, i] = one
    return M


def from_rows(rows, exact: bool = True) -> np.ndarray:
    if not exact:
        return np.array(rows, dtype=float)
    M = np.empty((len(rows), len(rows[0])), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            M[i, j] = Fraction(x)
    return M


def is_float_array(M: np.ndarray) -> bool:
    return M.dtype != object


def to_float(M: np.ndarray) -> np.ndarray:
    return M.astype(float)


def sparse_mm(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Exact matrix product that skips structural zeros.

    Structure tensors and their derived matrices are mostly zero; a dense
    object-dtype `@` multiplies every Fraction pair, which dominates the
    exact profiles.  Floats fall back to BLAS.
    """
    if is_float_array(A) or is_float_array(B):
        return A @ B
    n, m = A.shape
    p = B.shape[1]
    C = zeros((n, p), True)
    for i in range(n):
        Ai = A[i]
        Ci = C[i]
        for k in range(m):
            x = Ai[k]
            if x:
                row = B[k]
                for j in range(p):
                    y = row[j]
                    if y:
                        Ci[j] += x * y
    return C


def sparse_frob(A: np.ndarray, B: np.ndarray):
    """Entrywise contraction sum_ij A[i,j] B[i,j], skipping zeros."""
    if is_float_array(A) or is_float_array(B):
        return float(np.sum(A * B))
    total = Fraction(0)
    for x, y in zip(A.flat, B.flat):
        if x and y:
            total += x * y
    return total


def mat_is_zero(M: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    return all(is_zero(x, tol) for x in M.flat)


def mat_equal(A: np.ndarray, B: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    if A.shape != B.shape:
        return False
    return all(is_zero(a - b, tol) for a, b in zip(A.flat, B.flat))


def _pick_pivot(M, rows, col, tol):
    """Index of the best pivot row in `rows` for `col`, or None."""
    if is_float_array(M):
        best = max(rows, key=lambda r: abs(M[r, col]))
        return best if abs(M[best, col]) > tol else None
    candidates = [r for r in rows if M[r, col] != 0]
    if not candidates:
        return None
    return min(candidates, key=lambda r: (bit_size(M[r, col]), r))


def rref(M: np.ndarray, tol: float = DEFAULT_TOL):
    """Reduced row echelon form; returns (R, pivot_columns)."""
    R = M.copy()
    n_rows, n_cols = R.shape
    pivots = []
    row = 0
    for col in range(n_cols):
        if row >= n_rows:
            break
        piv = _pick_pivot(R, range(row, n_rows), col, tol)
        if piv is None:
            continue
        if piv != row:
            R[[row, piv], :] = R[[piv, row], :]
        R[row, :] = R[row, :] / R[row, col]
        for r in range(n_rows):
            if r != row and not is_zero(R[r, col], tol):
                R[r, :] = R[r, :] - R[r, col] * R[row, :]
        pivots.append(col)
        row += 1
    return R, pivots


def rank(M: np.ndarray, tol: float = DEFAULT_TOL) -> int:
    return len(rref(M, tol)[1])


def nullspace(M: np.ndarray, tol: float = DEFAULT_TOL):
    """Basis of the right null space, one vector per free column (ascending)."""
    R, pivots = rref(M, tol)
    n_cols = M.shape[1]
    exact = not is_float_array(M)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = zeros(n_cols, exact)
        v[f] = Fraction(1) if exact else 1.0
        for r, pc in enumerate(pivots):
            v[pc] = -R[r, f]
        basis.append(v)
    return basis


def inv(M: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    n = M.shape[0]
    exact = not is_float_array(M)
    aug = np.concatenate([M.copy(), eye(n, exact)], axis=1)
    R, pivots = rref(aug, tol)
    if pivots[:n] != list(range(n)):
        raise DegenerateMetricError("matrix is singular")
    return R[:, n:]


def sylvester_signature(g: np.ndarray, tol: float = DEFAULT_TOL):
    """Signature (p, q) of a nondegenerate symmetric matrix.

    Exact backend: symmetric elimination (LDL^T with symmetric pivoting); an
    isotropic diagonal is handled by a row+column addition, which is a
    congruence and therefore signature-preserving.  Float backend: eigenvalue
    signs.
    """
    n = g.shape[0]
    if is_float_array(g):
        w = np.linalg.eigvalsh(np.asarray(g, dtype=float))
        if np.min(np.abs(w)) <= tol:
            raise DegenerateMetricError("numerically degenerate symmetric matrix")
        p = int(np.sum(w > 0))
        return p, n - p
    G = g.copy()
    active = list(range(n))
    p = q = 0
    while active:
        diag = [i for i in active if G[i, i] != 0]
        if diag:
            i = min(diag, key=lambda k: (bit_size(G[k, k]), k))
        else:
            pair = [(i, j) for i in active for j in active if i < j and G[i, j] != 0]
            if not pair:
                raise DegenerateMetricError("symmetric matrix is degenerate")
            i, j = min(pair, key=lambda ij: (bit_size(G[ij[0], ij[1]]), ij))
            for k in active:
                G[i, k] = G[i, k] + G[j, k]
            for k in active:
                G[k, i] = G[k, i] + G[k, j]
        if G[i, i] > 0:
            p += 1
        else:
            q += 1
        active.remove(i)
        for r in active:
            if G[r, i] != 0:
                f = G[r, i] / G[i, i]
                for c in active:
                    G[r, c] = G[r, c] - f * G[i, c]
                G[r, i] = Fraction(0)
        for c in active:
            G[i, c] = Fraction(0)
    return p, q

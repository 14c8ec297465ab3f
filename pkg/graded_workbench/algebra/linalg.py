"""Dense linear algebra over F_p on numpy int64 arrays."""

import numpy as np

from graded_workbench.errors import SingularMatrixError


def mod_p(A, p: int) -> np.ndarray:
    return np.asarray(np.asarray(A, dtype=np.int64) % p, dtype=np.int64)


def rref_mod_p(A, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(p). Returns (R, pivot_cols)."""
    R = mod_p(A, p).copy()
    if R.ndim != 2:
        raise ValueError("rref needs a 2-d array")
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r] = (R[r] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        if col.any():
            R = (R - np.outer(col, R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank_mod_p(A, p: int) -> int:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    _, pivots = rref_mod_p(A, p)
    return len(pivots)


def row_basis_mod_p(A, p: int) -> np.ndarray:
    """Nonzero rows of the RREF: a canonical basis of the row space."""
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return np.zeros((0, A.shape[1] if A.ndim == 2 else 0), dtype=np.int64)
    R, pivots = rref_mod_p(A, p)
    return R[: len(pivots)]


def nullspace_mod_p(A, p: int) -> np.ndarray:
    """Right nullspace of A over GF(p); the columns form a basis."""
    A = mod_p(A, p)
    m, n = A.shape
    if m == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref_mod_p(A, p)
    free = [j for j in range(n) if j not in set(pivots)]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for row, pc in enumerate(pivots):
            basis[pc, k] = (-R[row, f]) % p
    return basis


def left_nullspace_mod_p(A, p: int) -> np.ndarray:
    """Rows y with y @ A == 0, returned as the rows of the result."""
    return nullspace_mod_p(np.asarray(A, dtype=np.int64).T, p).T


def matmul_mod_p(A, B, p: int) -> np.ndarray:
    # object dtype keeps row sums exact for large p
    prod = np.asarray(A, dtype=object) @ np.asarray(B, dtype=object)
    return np.asarray(prod % p, dtype=np.int64)


def inverse_mod_p(A, p: int) -> np.ndarray:
    """Gauss-Jordan inverse over GF(p)."""
    A = mod_p(A, p)
    n = A.shape[0]
    if A.shape != (n, n):
        raise SingularMatrixError("only square matrices have inverses")
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots = rref_mod_p(aug, p)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise SingularMatrixError("matrix is not invertible mod p")
    return R[:, n:]


def random_invertible_matrix(rng: np.random.Generator, n: int, p: int, attempts: int = 16) -> np.ndarray:
    for _ in range(attempts):
        M = rng.integers(0, p, size=(n, n), dtype=np.int64)
        if rank_mod_p(M, p) == n:
            return M
    raise SingularMatrixError(f"no invertible {n}x{n} matrix after {attempts} draws mod {p}")

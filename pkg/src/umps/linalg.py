"""Exact linear algebra.

Two families of routines:

* generic Gaussian elimination on lists of lists over any exact field
  (``Fraction``, ``QuadExt``, ``PrimeFieldElem``);
* vectorised elimination modulo a prime below 2**31 on int64 numpy arrays,
  used wherever matrices reach hundreds or thousands of rows.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .arith import MODULAR_PRIMES

# --------------------------------------------------------------------------
# generic exact elimination
# --------------------------------------------------------------------------


def rref(rows, ncols: int | None = None):
    """Reduced row echelon form. Returns (matrix, pivot_columns)."""
    A = [list(r) for r in rows]
    if not A:
        return [], []
    n = len(A[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c] if not isinstance(A[r][c], int) else Fraction(1, A[r][c])
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


def rank(rows) -> int:
    rows = [list(r) for r in rows]
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows, ncols: int):
    """Basis of {v : A v = 0} as a list of vectors."""
    R, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


def solve(A, b):
    """Solve A x = b exactly; raises ValueError if inconsistent (returns one solution)."""
    n = len(A[0])
    R, pivots = rref([list(row) + [bi] for row, bi in zip(A, b)], n + 1)
    if n in pivots:
        raise ValueError("inconsistent linear system")
    x = [Fraction(0)] * n
    for i, pc in enumerate(pivots):
        x[pc] = R[i][n]
    return x


def inverse(M):
    n = len(M)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    R, pivots = rref(aug, n)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("matrix is singular")
    return [row[n:] for row in R[:n]]


def is_invertible(M) -> bool:
    return rank(M) == len(M)


# --------------------------------------------------------------------------
# modular elimination with numpy
# --------------------------------------------------------------------------


def to_mod_array(rows, p: int) -> np.ndarray:
    """Reduce a matrix of ints / Fractions modulo p into an int64 array."""
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=np.int64)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            if isinstance(x, Fraction):
                out[i, j] = x.numerator * pow(x.denominator, -1, p) % p
            else:
                out[i, j] = int(x) % p
    return out


def rref_mod(A: np.ndarray, p: int, max_rank: int | None = None):
    """RREF of an int64 matrix modulo p < 2**31 (copy). Returns (R, pivots)."""
    if p >= 2**31:
        raise ValueError("numpy kernels need p < 2**31")
    A = np.array(A, dtype=np.int64) % p
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = A[r] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            A[rows] = (A[rows] - np.outer(col[rows], A[r])) % p
        pivots.append(c)
        r += 1
        if max_rank is not None and r >= max_rank:
            break
    return A, pivots


def rank_mod(A, p: int) -> int:
    A = np.asarray(A, dtype=np.int64)
    if A.size == 0:
        return 0
    # eliminate along the shorter side
    if A.shape[0] > A.shape[1]:
        A = A.T
    return len(rref_mod(A, p)[1])


def nullspace_mod(A: np.ndarray, p: int) -> np.ndarray:
    """Rows form a basis of the right kernel of A modulo p, in reduced form."""
    n = A.shape[1]
    R, pivots = rref_mod(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        K[k, f] = 1
        for i, pc in enumerate(pivots):
            K[k, pc] = (-R[i, f]) % p
    return K


def matmul_mod(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    """A @ B modulo p < 2**31 without int64 overflow (A is split into 16-bit halves)."""
    A = np.asarray(A, dtype=np.int64) % p
    B = np.asarray(B, dtype=np.int64) % p
    lo, hi = A & 0xFFFF, A >> 16
    # each partial product is < 2**47; chunk the inner dimension so sums stay < 2**63
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    step = 1 << 15
    for s in range(0, A.shape[1], step):
        Bs = B[s:s + step]
        part_lo = (lo[:, s:s + step] @ Bs) % p
        part_hi = (hi[:, s:s + step] @ Bs) % p
        out = (out + part_lo + part_hi * (1 << 16)) % p
    return out


def two_prime_rank(rows, primes=MODULAR_PRIMES) -> int:
    """Rank of an exact matrix, computed modulo two primes that must agree."""
    ranks = [rank_mod(to_mod_array(rows, q), q) for q in primes]
    if len(set(ranks)) != 1:
        raise ArithmeticError(f"modular ranks disagree: {ranks}")
    return ranks[0]

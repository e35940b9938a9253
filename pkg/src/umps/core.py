"""The uMPS map T_N and its structural operations.

Matrices are lists of rows over an arbitrary commutative scalar ring
(Fraction, QuadExt, PrimeFieldElem, complex, Laurent, MultiPoly).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .arith import random_rational
from .necklaces import CyclicTensor, _digits, canonicalize, enumerate_necklaces, necklace_index

Matrix = list  # list of rows


def zero_like(x):
    return x * 0


def one_like(x):
    return x * 0 + 1


def matmul(A: Matrix, B: Matrix) -> Matrix:
    n, m, k = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(k):
            acc = Ai[0] * B[0][j]
            for t in range(1, m):
                acc = acc + Ai[t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def trace(A: Matrix):
    acc = A[0][0]
    for i in range(1, len(A)):
        acc = acc + A[i][i]
    return acc


def identity(D: int, one=Fraction(1), zero=Fraction(0)) -> Matrix:
    return [[one if i == j else zero for j in range(D)] for i in range(D)]


def mat_scale(c, A: Matrix) -> Matrix:
    return [[c * x for x in row] for row in A]


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


@dataclass(frozen=True)
class MatrixTuple:
    """d square matrices M_0, ..., M_{d-1} of equal size D."""

    mats: tuple

    def __init__(self, mats: Sequence[Matrix]):
        mats = tuple(tuple(tuple(row) for row in M) for M in mats)
        if not mats:
            raise ValueError("need at least one matrix")
        D = len(mats[0])
        for M in mats:
            if len(M) != D or any(len(row) != D for row in M):
                raise ValueError("all matrices must be square of the same size")
        object.__setattr__(self, "mats", mats)

    @property
    def D(self) -> int:
        return len(self.mats[0])

    @property
    def d(self) -> int:
        return len(self.mats)

    def __getitem__(self, i: int) -> Matrix:
        return [list(row) for row in self.mats[i]]

    def map(self, fn) -> "MatrixTuple":
        return MatrixTuple([[[fn(x) for x in row] for row in M] for M in self.mats])

    def scalar_sample(self):
        return self.mats[0][0][0]


def random_tuple(D: int, d: int, rng: random.Random, bound: int = 100) -> MatrixTuple:
    """Tuple with rational entries of height <= bound."""
    return MatrixTuple(
        [[[random_rational(rng, bound) for _ in range(D)] for _ in range(D)] for _ in range(d)]
    )


def random_invertible(D: int, rng: random.Random, bound: int = 100) -> Matrix:
    while True:
        P = [[random_rational(rng, bound) for _ in range(D)] for _ in range(D)]
        if linalg.is_invertible(P):
            return P


def evaluate_umps(M: MatrixTuple, N: int) -> CyclicTensor:
    """T_N(M): the coordinate at necklace w is tr(M_{w_1} ... M_{w_N})."""
    if N < 1:
        raise ValueError("N must be >= 1")
    mats = [M[i] for i in range(M.d)]
    prefix: dict[tuple[int, ...], Matrix] = {}

    def product(word: tuple[int, ...]) -> Matrix:
        if len(word) == 1:
            return mats[word[0]]
        hit = prefix.get(word)
        if hit is None:
            hit = matmul(product(word[:-1]), mats[word[-1]])
            prefix[word] = hit
        return hit

    values = []
    for nk in enumerate_necklaces(N, M.d):
        w = nk.word
        # the last factor only contributes its diagonal to the trace
        if N == 1:
            values.append(trace(mats[w[0]]))
            continue
        P = product(w[:-1])
        last = mats[w[-1]]
        D = M.D
        acc = None
        for i in range(D):
            for t in range(D):
                term = P[i][t] * last[t][i]
                acc = term if acc is None else acc + term
        values.append(acc)
    return CyclicTensor(N, M.d, values)


def word_trace(M: MatrixTuple, word: Sequence[int]):
    P = M[word[0]]
    for s in word[1:]:
        P = matmul(P, M[s])
    return trace(P)


def join_tuples(tuples: Sequence[MatrixTuple]) -> MatrixTuple:
    """Block-diagonal direct sum; T_N of the join is the sum of the T_N."""
    if not tuples:
        raise ValueError("need at least one tuple")
    d = tuples[0].d
    if any(t.d != d for t in tuples):
        raise ValueError("all tuples must have the same physical dimension d")
    zero = zero_like(tuples[0].scalar_sample())
    Dtot = sum(t.D for t in tuples)
    mats = []
    for i in range(d):
        big = [[zero] * Dtot for _ in range(Dtot)]
        off = 0
        for t in tuples:
            block = t[i]
            for r in range(t.D):
                for c in range(t.D):
                    big[off + r][off + c] = block[r][c]
            off += t.D
        mats.append(big)
    return MatrixTuple(mats)


def act_gl(A: Matrix, M: MatrixTuple) -> MatrixTuple:
    """M'_i = sum_j A[i][j] M_j, so that T_N(M') = A . T_N(M)."""
    if len(A) != M.d or any(len(r) != M.d for r in A):
        raise ValueError("A must be d x d")
    if not linalg.is_invertible(A):
        raise ValueError("A must be invertible")
    mats = [M[j] for j in range(M.d)]
    out = []
    for i in range(M.d):
        acc = mat_scale(A[i][0], mats[0])
        for j in range(1, M.d):
            acc = mat_add(acc, mat_scale(A[i][j], mats[j]))
        out.append(acc)
    return MatrixTuple(out)


def act_cyclic_tensor(A: Matrix, T: CyclicTensor) -> CyclicTensor:
    """Diagonal action A (x) ... (x) A, read back in necklace coordinates."""
    d, N = T.d, T.N
    if len(A) != d:
        raise ValueError("A must be d x d")
    full = T.full_tensor()
    stride = 1
    # apply A along each tensor factor, last axis first
    for _axis in range(N):
        new = [None] * len(full)
        block = stride * d
        for base in range(0, len(full), block):
            for off in range(stride):
                src = [full[base + j * stride + off] for j in range(d)]
                for i in range(d):
                    acc = A[i][0] * src[0]
                    for j in range(1, d):
                        acc = acc + A[i][j] * src[j]
                    new[base + i * stride + off] = acc
        full = new
        stride *= d
    values = []
    for nk in enumerate_necklaces(N, d):
        flat = 0
        for s in nk.word:
            flat = flat * d + s
        values.append(full[flat])
    return CyclicTensor(N, d, values)


def conjugate(M: MatrixTuple, P: Matrix) -> MatrixTuple:
    """(P^-1 M_i P)_i; T_N is unchanged."""
    Pinv = linalg.inverse(P)
    return MatrixTuple([matmul(matmul(Pinv, M[i]), P) for i in range(M.d)])


def embed_physical(M: MatrixTuple, d_new: int) -> MatrixTuple:
    """Append zero matrices up to d_new; realises Cyc^N(K^d) inside Cyc^N(K^d_new)."""
    if d_new < M.d:
        raise ValueError("target physical dimension must be >= d")
    zero = zero_like(M.scalar_sample())
    mats = [M[i] for i in range(M.d)]
    mats += [[[zero] * M.D for _ in range(M.D)] for _ in range(d_new - M.d)]
    return MatrixTuple(mats)


def embed_tensor(T: CyclicTensor, d_new: int, zero=0) -> CyclicTensor:
    if d_new < T.d:
        raise ValueError("target physical dimension must be >= d")
    out = CyclicTensor.zero(T.N, d_new, zero)
    for nk, v in T.items():
        out[nk.word] = v
    return out


def project_tensor(T: CyclicTensor, d_new: int) -> CyclicTensor:
    """Keep the coordinates whose necklaces only use symbols < d_new."""
    if d_new > T.d:
        raise ValueError("projection must lower the physical dimension")
    idx = necklace_index(T.N, T.d)
    return CyclicTensor(
        T.N, d_new, [T.values[idx[nk.word]] for nk in enumerate_necklaces(T.N, d_new)]
    )


def scale_tuple(c, M: MatrixTuple) -> MatrixTuple:
    return M.map(lambda x: c * x)


# --------------------------------------------------------------------------
# matrix spaces and span growth
# --------------------------------------------------------------------------


def _flatten(A: Matrix) -> list:
    return [x for row in A for x in row]


class MatrixSpace:
    """Linear span of linearly independent D x D matrices."""

    def __init__(self, basis: Sequence[Matrix]):
        basis = [[list(r) for r in B] for B in basis]
        if not basis:
            raise ValueError("empty basis")
        self.D = len(basis[0])
        if linalg.rank([_flatten(B) for B in basis]) != len(basis):
            raise ValueError("basis matrices are linearly dependent")
        self.basis = basis

    @property
    def dim(self) -> int:
        return len(self.basis)


def _independent_subset(mats: list[Matrix]) -> list[Matrix]:
    if not mats:
        return []
    R, pivots = linalg.rref([_flatten(A) for A in mats])
    D = len(mats[0])
    return [[R[i][r * D:(r + 1) * D] for r in range(D)] for i in range(len(pivots))]


def span_growth(L: MatrixSpace, k: int) -> int:
    """dim L^k, the span of all k-fold products of elements of L."""
    if k < 1:
        raise ValueError("k must be >= 1")
    current = list(L.basis)
    for _ in range(k - 1):
        products = [matmul(A, B) for A in current for B in L.basis]
        current = _independent_subset(products)
        if not current:
            return 0
    return len(current)


def span_dims(L: MatrixSpace, kmax: int) -> list[int]:
    """[dim L^1, ..., dim L^kmax]."""
    dims = [L.dim]
    current = list(L.basis)
    for _ in range(kmax - 1):
        current = _independent_subset([matmul(A, B) for A in current for B in L.basis])
        dims.append(len(current))
    return dims


def generic_injectivity_estimate(D: int, d: int, trials: int = 5, seed: int = 0) -> int | None:
    """Smallest k <= D^2 with dim L^k = D^2 for every sampled span L of d random matrices.

    Returns None when some sample never fills the matrix algebra by k = D^2.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = random.Random(seed)
    worst = 0
    for _ in range(trials):
        M = random_tuple(D, d, rng)
        mats = [M[i] for i in range(d)]
        basis = _independent_subset(mats)
        L = MatrixSpace(basis)
        dims = span_dims(L, D * D)
        hit = next((k + 1 for k, v in enumerate(dims) if v == D * D), None)
        if hit is None:
            return None
        worst = max(worst, hit)
    return worst

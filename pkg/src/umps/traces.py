"""Trace parametrization for pairs of 2x2 matrices.

The invariant ring of a pair (M0, M1) under simultaneous conjugation is the
free polynomial ring on

    t1 = tr M0, t2 = tr M1, t3 = tr M0^2, t4 = tr M0 M1, t5 = tr M1^2,

so every trace word tr(M_{w_1} ... M_{w_k}) is a unique polynomial in t1..t5.
We find that polynomial by fitting: the unknown coefficients of all monomials
of the right bidegree are solved for from evaluations at random tuples over a
prime field, lifted to Q, and checked at fresh rational tuples.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .arith import DEFAULT_PRIME, MODULAR_PRIMES, rational_reconstruct
from .core import MatrixTuple, evaluate_umps, matmul, random_tuple, trace, word_trace
from .necklaces import CyclicTensor, Necklace, canonicalize, enumerate_necklaces
from .poly import QQ, MultiPoly, PolyRing, evaluate_poly

TRACE_RING = PolyRing(["t1", "t2", "t3", "t4", "t5"], QQ, "grevlex")

# bidegree (#zeros, #ones) carried by each generator
GENERATOR_DEGREES = ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2))

PRECOMPUTE_LENGTH = 8


class FitError(ArithmeticError):
    """The linear fit for a trace word did not produce a verified polynomial."""


@dataclass(frozen=True)
class TraceInvariants:
    t1: object
    t2: object
    t3: object
    t4: object
    t5: object

    def as_tuple(self) -> tuple:
        return (self.t1, self.t2, self.t3, self.t4, self.t5)


@dataclass(frozen=True)
class TraceWordPoly:
    word: Necklace
    poly: MultiPoly

    def bidegree(self) -> tuple[int, int]:
        return self.word.count(0), self.word.count(1)


def invariants_of(M: MatrixTuple) -> TraceInvariants:
    if M.D != 2 or M.d != 2:
        raise ValueError("invariants_of needs a pair of 2x2 matrices")
    M0, M1 = M[0], M[1]
    return TraceInvariants(
        trace(M0), trace(M1), trace(matmul(M0, M0)), trace(matmul(M0, M1)), trace(matmul(M1, M1))
    )


def graded_monomials(zeros: int, ones: int) -> list[tuple[int, ...]]:
    """Exponent vectors (i,j,k,l,m) with i + 2k + l = zeros and j + l + 2m = ones."""
    out = []
    for l in range(min(zeros, ones) + 1):
        for k in range((zeros - l) // 2 + 1):
            i = zeros - l - 2 * k
            for m in range((ones - l) // 2 + 1):
                j = ones - l - 2 * m
                out.append((i, j, k, l, m))
    return sorted(out, reverse=True)


# --------------------------------------------------------------------------
# fitting
# --------------------------------------------------------------------------


def _random_pair_mod(rng: random.Random, p: int):
    return [[[rng.randrange(p) for _ in range(2)] for _ in range(2)] for _ in range(2)]


def _mul2(A, B, p):
    return [
        [(A[0][0] * B[0][0] + A[0][1] * B[1][0]) % p, (A[0][0] * B[0][1] + A[0][1] * B[1][1]) % p],
        [(A[1][0] * B[0][0] + A[1][1] * B[1][0]) % p, (A[1][0] * B[0][1] + A[1][1] * B[1][1]) % p],
    ]


def _word_trace_mod(mats, word, p):
    P = mats[word[0]]
    for s in word[1:]:
        P = _mul2(P, mats[s], p)
    return (P[0][0] + P[1][1]) % p


def _invariants_mod(mats, p):
    M0, M1 = mats
    return [
        (M0[0][0] + M0[1][1]) % p,
        (M1[0][0] + M1[1][1]) % p,
        _word_trace_mod(mats, (0, 0), p),
        _word_trace_mod(mats, (0, 1), p),
        _word_trace_mod(mats, (1, 1), p),
    ]


def _solve_mod(A: list[list[int]], b: list[int], p: int) -> list[int] | None:
    """Unique solution of A x = b mod p (A tall); None if A lacks full column rank."""
    n = len(A[0])
    rows = [row[:] + [bi] for row, bi in zip(A, b)]
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] % p), None)
        if piv is None:
            return None
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [x * inv % p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
        r += 1
    if any(row[n] for row in rows[n:]):
        raise FitError("inconsistent fitting system")
    return [rows[i][n] for i in range(n)]


def _fit_mod(word: tuple[int, ...], monos, p: int, rng: random.Random) -> list[int]:
    for _ in range(5):
        A, b = [], []
        for _ in range(len(monos) + 4):
            mats = _random_pair_mod(rng, p)
            t = _invariants_mod(mats, p)
            A.append([math.prod(pow(t[i], e, p) for i, e in enumerate(m)) % p for m in monos])
            b.append(_word_trace_mod(mats, word, p))
        sol = _solve_mod(A, b, p)
        if sol is not None:
            return sol
    raise FitError(f"evaluation matrix for {word} stayed rank deficient")


def fit_trace_word(word: Sequence[int], seed: int = 0, primes: Sequence[int] = (DEFAULT_PRIME, MODULAR_PRIMES[0])) -> MultiPoly:
    """Fit tr(M_word) as a polynomial in t1..t5 and verify it over Q."""
    word = tuple(word)
    monos = graded_monomials(word.count(0), word.count(1))
    rng = random.Random(seed)
    for p in primes:
        sol = _fit_mod(word, monos, p, rng)
        bound = math.isqrt(p // 2 - 1)
        coeffs = [rational_reconstruct(c, bound, p) for c in sol]
        if any(c is None for c in coeffs):
            continue
        poly = MultiPoly(TRACE_RING, dict(zip(monos, coeffs)))
        if _verify_over_q(word, poly, rng):
            return poly
    raise FitError(f"could not fit a verified polynomial for word {word}")


def _verify_over_q(word, poly: MultiPoly, rng: random.Random, checks: int = 3) -> bool:
    for _ in range(checks):
        M = random_tuple(2, 2, rng)
        if evaluate_poly(poly, invariants_of(M).as_tuple()) != word_trace(M, word):
            return False
    return True


_CACHE: dict[tuple[int, ...], TraceWordPoly] = {}


def _precompute() -> None:
    for n in range(1, PRECOMPUTE_LENGTH + 1):
        for nk in enumerate_necklaces(n, 2):
            if nk.word not in _CACHE:
                _CACHE[nk.word] = TraceWordPoly(nk, fit_trace_word(nk.word))


def reduce_trace_word(word) -> TraceWordPoly:
    """The polynomial in t1..t5 equal to tr(M_{w_1} ... M_{w_k}) for all 2x2 pairs."""
    nk = canonicalize(word, 2)
    if not _CACHE:
        _precompute()
    hit = _CACHE.get(nk.word)
    if hit is None:
        hit = TraceWordPoly(nk, fit_trace_word(nk.word))
        _CACHE[nk.word] = hit
    return hit


def trace_parametrization(N: int) -> list[MultiPoly]:
    """phi_N: one polynomial in t1..t5 per necklace of length N, in necklace order."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return [reduce_trace_word(nk.word).poly for nk in enumerate_necklaces(N, 2)]


def phi(N: int, t: Sequence) -> CyclicTensor:
    """Evaluate phi_N at an invariant vector t (any exact scalars)."""
    return CyclicTensor(N, 2, [evaluate_poly(f, tuple(t)) for f in trace_parametrization(N)])


def verify_word_identity(w1: Sequence[int], w2: Sequence[int]) -> bool:
    """True iff tr(M_w1) = tr(M_w2) holds identically for 2x2 matrices."""
    w1 = tuple(int(s) for s in (w1 if not isinstance(w1, str) else w1))
    w2 = tuple(int(s) for s in (w2 if not isinstance(w2, str) else w2))
    if sorted(w1) != sorted(w2):
        return False
    return reduce_trace_word(w1).poly == reduce_trace_word(w2).poly


def commuting_triangle_holds(M: MatrixTuple, N: int) -> bool:
    """phi_N(invariants_of(M)) == T_N(M), exactly."""
    return phi(N, invariants_of(M).as_tuple()) == evaluate_umps(M, N)

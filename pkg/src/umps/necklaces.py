"""Necklaces (cyclic words) and the cyclic tensor space they index."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence


@total_ordering
@dataclass(frozen=True)
class Necklace:
    """A cyclic word over {0, ..., d-1}, stored as its least rotation."""

    word: tuple[int, ...]
    d: int

    @property
    def N(self) -> int:
        return len(self.word)

    def count(self, symbol: int) -> int:
        return self.word.count(symbol)

    def __lt__(self, other: "Necklace") -> bool:
        return self.word < other.word

    def __str__(self) -> str:
        return "".join(str(s) for s in self.word)

    def __len__(self) -> int:
        return len(self.word)

    def __iter__(self):
        return iter(self.word)


def least_rotation(word: Sequence[int]) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    s = list(word) * 2
    n = len(s)
    f = [-1] * n
    k = 0
    for j in range(1, n):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def canonicalize(word, d: int | None = None) -> Necklace:
    """Minimal rotation of ``word`` (a sequence or digit string) as a Necklace."""
    if isinstance(word, Necklace):
        return word
    if isinstance(word, str):
        word = [int(ch) for ch in word]
    w = tuple(int(s) for s in word)
    if not w:
        raise ValueError("empty word")
    if d is None:
        d = max(w) + 1
    if any(s < 0 or s >= d for s in w):
        raise ValueError(f"symbol out of range for alphabet size {d}: {w}")
    k = least_rotation(w)
    return Necklace(w[k:] + w[:k], d)


def rotations(word: Sequence[int]) -> set[tuple[int, ...]]:
    w = tuple(word)
    return {w[k:] + w[:k] for k in range(len(w))}


@lru_cache(maxsize=None)
def enumerate_necklaces(N: int, d: int) -> tuple[Necklace, ...]:
    """All necklaces of length N over [d] in lexicographic order (FKM algorithm)."""
    if N < 1 or d < 1:
        raise ValueError("need N >= 1 and d >= 1")
    out = []
    a = [0] * (N + 1)

    def gen(t: int, p: int) -> None:
        if t > N:
            if N % p == 0:
                out.append(Necklace(tuple(a[1:]), d))
            return
        a[t] = a[t - p]
        gen(t + 1, p)
        for j in range(a[t - p] + 1, d):
            a[t] = j
            gen(t + 1, t)

    gen(1, 1)
    return tuple(out)


@lru_cache(maxsize=None)
def necklace_index(N: int, d: int) -> dict[tuple[int, ...], int]:
    return {nk.word: i for i, nk in enumerate(enumerate_necklaces(N, d))}


def _divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def totient(n: int) -> int:
    result, m, q = n, n, 2
    while q * q <= m:
        if m % q == 0:
            while m % q == 0:
                m //= q
            result -= result // q
        q += 1
    if m > 1:
        result -= result // m
    return result


def cyc_dim(N: int, d: int) -> int:
    """dim Cyc^N(K^d) = (1/N) * sum over l | N of phi(l) * d^(N/l)."""
    if N < 1 or d < 1:
        raise ValueError("need N >= 1 and d >= 1")
    total = sum(totient(l) * d ** (N // l) for l in _divisors(N))
    return total // N


def count_binary_necklaces(N0: int, N1: int) -> int:
    """Binary necklaces with N0 zeros and N1 ones."""
    if N0 < 0 or N1 < 0 or N0 + N1 < 1:
        raise ValueError("need N0, N1 >= 0 and N0 + N1 >= 1")
    N = N0 + N1
    g = math.gcd(N0, N1)
    total = sum(totient(k) * math.comb(N // k, N0 // k) for k in _divisors(g))
    return total // N


# --------------------------------------------------------------------------
# cyclic tensors
# --------------------------------------------------------------------------


class CyclicTensor:
    """Coordinates of a tensor in Cyc^N(K^d) along the necklace basis e_w.

    ``values`` is dense, ordered like :func:`enumerate_necklaces`.
    """

    __slots__ = ("N", "d", "values")

    def __init__(self, N: int, d: int, values: Iterable):
        self.N, self.d = N, d
        self.values = list(values)
        if len(self.values) != cyc_dim(N, d):
            raise ValueError(f"expected {cyc_dim(N, d)} coordinates, got {len(self.values)}")

    @classmethod
    def zero(cls, N: int, d: int, zero=0) -> "CyclicTensor":
        return cls(N, d, [zero] * cyc_dim(N, d))

    @classmethod
    def basis_vector(cls, word, d: int = 2, one=1, zero=0) -> "CyclicTensor":
        nk = canonicalize(word, d)
        t = cls.zero(nk.N, d, zero)
        t[nk] = one
        return t

    @classmethod
    def from_dict(cls, N: int, d: int, coords: dict, zero=0) -> "CyclicTensor":
        t = cls.zero(N, d, zero)
        for w, v in coords.items():
            t[w] = v
        return t

    @property
    def basis(self) -> tuple[Necklace, ...]:
        return enumerate_necklaces(self.N, self.d)

    def _index(self, key) -> int:
        if isinstance(key, int):
            return key
        nk = canonicalize(key, self.d)
        if nk.N != self.N:
            raise KeyError(f"necklace length {nk.N} != {self.N}")
        return necklace_index(self.N, self.d)[nk.word]

    def __getitem__(self, key):
        return self.values[self._index(key)]

    def __setitem__(self, key, value):
        self.values[self._index(key)] = value

    def items(self):
        return zip(self.basis, self.values)

    def as_dict(self) -> dict[str, object]:
        return {str(nk): v for nk, v in self.items()}

    def _check(self, other: "CyclicTensor"):
        if (self.N, self.d) != (other.N, other.d):
            raise ValueError("tensor shapes differ")

    def __add__(self, other: "CyclicTensor") -> "CyclicTensor":
        self._check(other)
        return CyclicTensor(self.N, self.d, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: "CyclicTensor") -> "CyclicTensor":
        self._check(other)
        return CyclicTensor(self.N, self.d, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return CyclicTensor(self.N, self.d, [-a for a in self.values])

    def scale(self, c) -> "CyclicTensor":
        return CyclicTensor(self.N, self.d, [c * a for a in self.values])

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, CyclicTensor):
            return NotImplemented
        return (self.N, self.d) == (other.N, other.d) and all(
            a == b for a, b in zip(self.values, other.values)
        )

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def norm(self) -> float:
        """Euclidean norm of the coordinate vector."""
        return math.sqrt(sum(abs(complex(v)) ** 2 for v in self.values))

    def map(self, fn) -> "CyclicTensor":
        return CyclicTensor(self.N, self.d, [fn(v) for v in self.values])

    def full_tensor(self) -> list:
        """All d**N entries, indexed by the base-d integer of the word."""
        idx = necklace_index(self.N, self.d)
        out = []
        for flat in range(self.d**self.N):
            word = _digits(flat, self.d, self.N)
            out.append(self.values[idx[canonicalize(word, self.d).word]])
        return out

    def __repr__(self):
        body = ", ".join(f"{k}: {v}" for k, v in self.as_dict().items())
        return f"CyclicTensor(N={self.N}, d={self.d}, {{{body}}})"


def _digits(flat: int, d: int, N: int) -> tuple[int, ...]:
    out = [0] * N
    for k in range(N - 1, -1, -1):
        flat, out[k] = divmod(flat, d)
    return tuple(out)


def w_state(N: int) -> CyclicTensor:
    """W_N = e_{0...01} in Cyc^N(K^2)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return CyclicTensor.basis_vector((0,) * (N - 1) + (1,), 2, one=Fraction(1), zero=Fraction(0))

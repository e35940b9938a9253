"""Scalar rings shared by every other module.

Rationals are plain :class:`fractions.Fraction`; complex floats are the
builtin :class:`complex`.  This module adds the quadratic field Q(sqrt 2),
prime-field elements, univariate Laurent polynomials (for symbolic limit
parameters) and the modular helpers used to lift results back to Q.
"""

from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction
from numbers import Rational

__all__ = [
    "DEFAULT_PRIME",
    "MODULAR_PRIMES",
    "Laurent",
    "PrimeFieldElem",
    "QuadExt",
    "crt",
    "is_prime",
    "nth_root_of_minus_one",
    "prev_prime",
    "random_rational",
    "rational_reconstruct",
]

FLOAT_RTOL = 1e-9

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prev_prime(n: int) -> int:
    """Largest prime strictly below n."""
    k = n - 1
    while not is_prime(k):
        k -= 1
    return k


def prime_congruent_one(m: int, above: int = 2**30) -> int:
    """Smallest prime p > above with p = 1 (mod m), so F_p holds m-th roots of unity."""
    k = above // m + 1
    while not is_prime(k * m + 1):
        k += 1
    return k * m + 1


# Largest prime below 2**62: products fit in 128 bits.
DEFAULT_PRIME = 4611686018427387847
# Primes below 2**31 so that products of residues fit in int64 (numpy kernels).
MODULAR_PRIMES = (2147483647, 2147483629)


def random_rational(rng: random.Random, bound: int = 100) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


# --------------------------------------------------------------------------
# Q(sqrt 2)
# --------------------------------------------------------------------------


class QuadExt:
    """Element a + b*sqrt2 of Q(sqrt 2) with rational parts."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def _coerce(x):
        if isinstance(x, QuadExt):
            return x
        if isinstance(x, (int, Fraction)) or isinstance(x, Rational):
            return QuadExt(x, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __neg__(self):
        return QuadExt(-self.a, -self.b)

    def __pos__(self):
        return self

    def norm(self) -> Fraction:
        return self.a * self.a - 2 * self.b * self.b

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b)

    def inverse(self) -> "QuadExt":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadExt division by zero")
        return QuadExt(self.a / n, -self.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = QuadExt(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(2)

    def __complex__(self):
        return complex(float(self))

    def __abs__(self):
        return abs(float(self))

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.b == 1:
            tail = "sqrt2"
        elif self.b == -1:
            tail = "-sqrt2"
        else:
            tail = f"{self.b}*sqrt2"
        if self.a == 0:
            return tail
        sign = "" if tail.startswith("-") else "+"
        return f"{self.a}{sign}{tail}"

    @classmethod
    def parse(cls, text: str) -> "QuadExt":
        """Inverse of ``str``: accepts 'a', 'a+b*sqrt2', 'b*sqrt2', '-sqrt2', ..."""
        s = text.strip().replace(" ", "").replace("−", "-")
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        if "sqrt2" not in s:
            return cls(Fraction(s), 0)
        head = s[: s.index("sqrt2")]
        # split the rational part from the sqrt2 coefficient at the last sign
        cut = max(head.rfind("+", 1), head.rfind("-", 1))
        if cut > 0 and head[cut - 1] not in "/*":
            a_part, b_part = head[:cut], head[cut:]
        else:
            a_part, b_part = "0", head
        if a_part.startswith("+"):
            a_part = a_part[1:]
        b_part = b_part.rstrip("*")
        if b_part in ("", "+"):
            b = Fraction(1)
        elif b_part == "-":
            b = Fraction(-1)
        else:
            b = Fraction(b_part.lstrip("+"))
        return cls(Fraction(a_part), b)


SQRT2 = QuadExt(0, 1)


# --------------------------------------------------------------------------
# prime fields
# --------------------------------------------------------------------------


class PrimeFieldElem:
    """Residue modulo a prime p."""

    __slots__ = ("value", "p")

    def __init__(self, value, p: int = DEFAULT_PRIME):
        if isinstance(value, Fraction):
            value = value.numerator * pow(value.denominator, -1, p)
        self.value = int(value) % p
        self.p = p

    def _other(self, x):
        if isinstance(x, PrimeFieldElem):
            if x.p != self.p:
                raise ValueError("mixing different primes")
            return x.value
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElem(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElem(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElem(o - self.value, self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElem(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return PrimeFieldElem(-self.value, self.p)

    def inverse(self) -> "PrimeFieldElem":
        if self.value == 0:
            raise ZeroDivisionError("inverse of 0 mod p")
        return PrimeFieldElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * PrimeFieldElem(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return PrimeFieldElem(o, self.p) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PrimeFieldElem(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self.value == o

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"PrimeFieldElem({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


def rational_reconstruct(residue, bound: int, p: int | None = None) -> Fraction | None:
    """Return n/d with |n|, d <= bound and n = d * residue (mod p), or None.

    ``residue`` is a :class:`PrimeFieldElem` or an int together with ``p``.
    Requires 2 * bound**2 < p, which makes the answer unique when it exists.
    """
    if isinstance(residue, PrimeFieldElem):
        p, a = residue.p, residue.value
    else:
        if p is None:
            raise ValueError("modulus required for integer residue")
        a = residue % p
    if 2 * bound * bound >= p:
        raise ValueError("bound too large for modulus: need 2*bound^2 < p")
    r0, r1 = p, a
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if (r1 - s1 * a) % p != 0:
        return None
    return Fraction(r1, s1)


def crt(residues: list[int], moduli: list[int]) -> tuple[int, int]:
    """Combine residues modulo pairwise coprime moduli; returns (x, M)."""
    x, m = 0, 1
    for r, q in zip(residues, moduli):
        t = (r - x) * pow(m, -1, q) % q
        x += m * t
        m *= q
    return x % m, m


def nth_root_of_minus_one(N: int) -> complex:
    """exp(i*pi/N), a root of z**N + 1."""
    if N < 1:
        raise ValueError("N must be >= 1")
    return cmath.exp(1j * math.pi / N)


# --------------------------------------------------------------------------
# Laurent polynomials in one parameter
# --------------------------------------------------------------------------


class Laurent:
    """Finite sum of c_k * lam**k (k may be negative) with coefficients in any ring.

    Used as a scalar ring so that matrix tuples depending on a limit
    parameter can be evaluated exactly, cancellations included.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, object] | None = None):
        self.terms = {k: c for k, c in (terms or {}).items() if c != 0}

    @classmethod
    def monomial(cls, coeff, exponent: int = 0) -> "Laurent":
        return cls({exponent: coeff})

    @classmethod
    def lam(cls) -> "Laurent":
        return cls({1: 1})

    @staticmethod
    def _coerce(x):
        if isinstance(x, Laurent):
            return x
        return Laurent({0: x})

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out[k] + c if k in out else c
        return Laurent(out)

    __radd__ = __add__

    def __neg__(self):
        return Laurent({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        out: dict[int, object] = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in o.terms.items():
                k = k1 + k2
                out[k] = out[k] + c1 * c2 if k in out else c1 * c2
        return Laurent(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials are invertible")
            (k, c), = self.terms.items()
            return Laurent({k * e: (1 / c) ** (-e) if not isinstance(c, int) else Fraction(1, c) ** (-e)})
        result = Laurent({0: 1})
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __call__(self, value):
        return sum((c * value**k for k, c in self.terms.items()), 0)

    def chop(self, tol: float) -> "Laurent":
        """Drop float coefficients with modulus <= tol (rounding debris)."""
        return Laurent({k: c for k, c in self.terms.items() if abs(c) > tol})

    def valuation(self) -> int | None:
        return min(self.terms) if self.terms else None

    def __repr__(self):
        if not self.terms:
            return "Laurent(0)"
        parts = [f"({c})*lam^{k}" for k, c in sorted(self.terms.items())]
        return "Laurent(" + " + ".join(parts) + ")"

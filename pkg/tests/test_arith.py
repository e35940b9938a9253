import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from umps.arith import (
    DEFAULT_PRIME,
    MODULAR_PRIMES,
    SQRT2,
    Laurent,
    PrimeFieldElem,
    QuadExt,
    crt,
    is_prime,
    nth_root_of_minus_one,
    rational_reconstruct,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=50)


def test_primes_are_prime():
    assert is_prime(DEFAULT_PRIME)
    assert all(is_prime(p) and p > 2**30 for p in MODULAR_PRIMES)
    assert not is_prime(2**31 - 3)
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_sqrt2_squares_to_two():
    assert SQRT2 * SQRT2 == 2
    assert QuadExt(1, 1) * QuadExt(1, -1) == -1


@given(fractions, fractions, fractions, fractions)
def test_quadext_field_axioms(a, b, c, d):
    x, y = QuadExt(a, b), QuadExt(c, d)
    assert x + y == y + x
    assert x * y == y * x
    if y != 0:
        assert (x / y) * y == x


@given(fractions, fractions)
def test_quadext_roundtrip(a, b):
    x = QuadExt(a, b)
    assert QuadExt.parse(str(x)) == x


def test_quadext_format():
    assert str(SQRT2) == "sqrt2"
    assert str(-SQRT2) == "-sqrt2"
    assert str(QuadExt(1, 2)) == "1+2*sqrt2"
    assert str(QuadExt(Fraction(1, 2))) == "1/2"


def test_rational_reconstruct_identity():
    assert rational_reconstruct(PrimeFieldElem(1, DEFAULT_PRIME), 10) == 1


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rational_reconstruct_recovers(n, d):
    p = DEFAULT_PRIME
    bound = math.isqrt(p // 2 - 1)
    r = PrimeFieldElem(Fraction(n, d), p)
    assert rational_reconstruct(r, bound) == Fraction(n, d)


def test_rational_reconstruct_bound_check():
    with pytest.raises(ValueError):
        rational_reconstruct(3, 10**6, 101)


def test_rational_reconstruct_failure():
    # 1/3 mod 101 = 34; with bound 2 no fraction |n|, d <= 2 maps to 34
    assert rational_reconstruct(34, 2, 101) is None


def test_prime_field_arithmetic():
    p = 101
    x = PrimeFieldElem(5, p)
    assert (x * x.inverse()).value == 1
    assert (x - 7).value == 99
    with pytest.raises(ValueError):
        x + PrimeFieldElem(1, 103)


def test_crt():
    x, m = crt([2, 3], [5, 7])
    assert m == 35 and x % 5 == 2 and x % 7 == 3


def test_nth_root_of_minus_one():
    for N in range(1, 9):
        z = nth_root_of_minus_one(N)
        assert abs(z**N + 1) < 1e-12


def test_laurent_cancellation_is_exact():
    lam = Laurent.lam()
    f = (lam**-3 + 2) * (lam**3) - 1
    assert f == Laurent({3: 2})
    assert f.valuation() == 3
    assert f(Fraction(1, 2)) == Fraction(1, 4)


def test_laurent_chop():
    f = Laurent({-4: 1e-17j, 0: 2.0})
    assert f.chop(1e-12).terms == {0: 2.0}


@settings(max_examples=50)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=4), st.integers(-3, 3))
def test_laurent_evaluation_is_homomorphism(coeffs, shift):
    f = Laurent({k + shift: c for k, c in enumerate(coeffs)})
    g = Laurent({1: 3, -2: -1})
    lam = Fraction(2, 3)
    assert (f * g)(lam) == f(lam) * g(lam)
    assert (f + g)(lam) == f(lam) + g(lam)

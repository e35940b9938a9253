import math
import random
from fractions import Fraction

import pytest
import sympy

from umps.arith import SQRT2, QuadExt
from umps.core import evaluate_umps, random_tuple
from umps.data import load_golden
from umps.necklaces import CyclicTensor, w_state
from umps.poly import Ideal, evaluate_poly, groebner
from umps.membership import (
    builtin_family,
    certify_not_member_e012,
    certify_not_member_wstate,
    constant_family,
    decide_membership_224,
    limit_experiment,
    non_closedness_evidence,
    trivial_case_check,
)


def basis4(**coords):
    T = CyclicTensor.zero(4, 2, Fraction(0))
    for k, v in coords.items():
        T[k.lstrip("e")] = v
    return T


# -- limit families -----------------------------------------------------------


def test_e012_family_is_exact():
    fam = builtin_family("e012")
    T = evaluate_umps(fam.tuple_at(Fraction(1, 2)), 3)
    expected = CyclicTensor.zero(3, 3, Fraction(0))
    expected["000"] = Fraction(1, 64)
    expected["012"] = 1
    assert T == expected


def test_wstate_family_limit_coefficient():
    fam = builtin_family("wstate(5)")
    T = fam.value_at(1e-3)
    assert abs(T["00001"] - 2) < 1e-12
    assert fam.target == w_state(5).scale(2)


def wstate_residual_sympy(N):
    """Exact T_N(M_lam) - 2 W_N over Q(zeta)[lam, 1/lam], as a list of expressions."""
    lam = sympy.Symbol("lam", positive=True)
    zeta = sympy.exp(sympy.I * sympy.pi / N)
    M0 = sympy.diag(1, zeta) / lam
    M1 = sympy.diag(1, -zeta) * lam ** (N - 1)
    out = []
    for k in range(N + 1):
        word_trace = sympy.simplify((M0 ** (N - k) * M1**k).trace())
        target = 2 if k == 1 else 0
        out.append(sympy.simplify(word_trace - target))
    return lam, out


@pytest.mark.parametrize("N", [4, 5])
def test_wstate_residual_order_against_sympy(N):
    # both matrices are diagonal, so the trace only depends on the number of ones
    lam, residuals = wstate_residual_sympy(N)
    orders = [sympy.Poly(r, lam).monoms()[-1][0] if r != 0 else None for r in residuals]
    nonzero = [o for o in orders if o is not None]
    assert min(nonzero) == 2 * N
    fam = builtin_family(f"wstate({N})")
    expansion = fam.expansion()
    assert min(v.valuation() for v in expansion.values if v.terms) == 2 * N


def test_wstate_residual_value():
    fam = builtin_family("wstate(4)")
    for lam in (0.5, 0.1, 0.01):
        assert math.isclose(fam.residual(lam), 2 * lam**8, rel_tol=1e-9)


def test_wstate_residual_direct_float_evaluation():
    # at moderate lam plain complex arithmetic is accurate enough to compare
    fam = builtin_family("wstate(4)")
    T = evaluate_umps(fam.tuple_at(0.7), 4)
    direct = math.sqrt(sum(abs(complex(v) - complex(t)) ** 2 for v, t in zip(T.values, fam.target.values)))
    assert math.isclose(direct, fam.residual(0.7), rel_tol=1e-9)


def test_e012_slope():
    r = limit_experiment(builtin_family("e012"), [1e-1, 1e-2, 1e-3])
    assert abs(r.slope - 6) <= 0.01 and r.passed


@pytest.mark.parametrize("N", [3, 4, 5, 6])
def test_wstate_real_rate(N):
    fam = builtin_family(f"wstate_real({N})")
    assert fam.target == w_state(N).scale(2 * math.sin(math.pi / (2 * N)))
    r = limit_experiment(fam)
    assert r.passed and abs(r.slope - N) <= 0.1


def test_constant_family_is_exact():
    M = random_tuple(2, 2, random.Random(0))
    r = limit_experiment(constant_family(M, 4))
    assert r.status == "exact" and r.passed and all(x == 0 for x in r.residuals)


@pytest.mark.parametrize("grid", [[1e-1, 1e-2], [1e-3, 1e-2, 1e-1], [1e-1, -1e-2, 1e-3]])
def test_bad_grids(grid):
    with pytest.raises(ValueError):
        limit_experiment(builtin_family("e012"), grid)


def test_family_names():
    with pytest.raises(ValueError):
        builtin_family("wstate(2)")
    with pytest.raises(ValueError):
        builtin_family("ghz")
    with pytest.raises(ValueError):
        builtin_family("e012").tuple_at(0)


# -- certificates ---------------------------------------------------------------


@pytest.mark.parametrize("N", [4, 5, 6])
def test_wstate_certificate(N):
    cert = certify_not_member_wstate(N)
    assert cert.verdict
    assert all([str(g) for g in s.basis] == ["1"] for s in cert.systems)


def test_wstate_control_n3_is_feasible():
    cert = certify_not_member_wstate(3)
    assert not cert.verdict
    assert "is in" in cert.claim


def test_wstate_range():
    with pytest.raises(ValueError):
        certify_not_member_wstate(9)


def test_e012_certificate():
    cert = certify_not_member_e012()
    assert cert.verdict
    assert all(s.infeasible for s in cert.systems)
    # the stored equations reappear among the generated ones
    assert all(cert.extra["jordan_printed_found"])
    assert all(cert.extra["diagonal_printed_found"])
    assert cert.extra["printed_diagonal_infeasible"] is True


def test_printed_jordan_system_has_a_solution():
    ring, eqs = load_golden("e012_jordan_system")
    values = {"a2": 1, "b2": 0, "c2": 1, "d2": -1, "a3": 1, "b3": 0, "c3": 0, "d3": 0}
    point = tuple(Fraction(values[n]) for n in ring.names)
    assert all(evaluate_poly(f, point) == 0 for f in eqs)
    assert not certify_not_member_e012().extra["printed_jordan_infeasible"]


def test_printed_jordan_control_without_last_equation():
    ring, eqs = load_golden("e012_jordan_system")
    homogeneous = [f for f in eqs if not any(sum(m) == 0 for m in f.terms)]
    assert len(homogeneous) == len(eqs) - 1
    assert groebner(Ideal(homogeneous, ring)).generators != [ring.constant(1)]
    zero = tuple(Fraction(0) for _ in ring.names)
    assert all(evaluate_poly(f, zero) == 0 for f in homogeneous)


def test_non_closedness_conjunction():
    ev = non_closedness_evidence(4)
    assert ev["certificate"] and ev["limit"] and ev["not_closed"]


# -- membership in uMPS(2,2,4) --------------------------------------------------


def test_membership_examples():
    v = decide_membership_224(basis4(e0101=1))
    assert v.in_closure and v.in_set
    v = decide_membership_224(w_state(4))
    assert v.in_closure and not v.in_set
    for sign in (1, -1):
        v = decide_membership_224(basis4(e0011=1, e0101=sign * SQRT2))
        assert v.in_closure and not v.in_set


def test_membership_outside_closure():
    v = decide_membership_224(basis4(e0001=1, e0011=1, e1111=3))
    assert not v.in_closure and v.in_set is False


def test_membership_rank_one():
    # e0000 is a rank-one tensor; it lies on V(J)
    v = decide_membership_224(basis4(e0000=1))
    assert v.in_set


def test_membership_requires_shape():
    with pytest.raises(ValueError):
        decide_membership_224(w_state(5))


def test_membership_random_samples():
    rng = random.Random(5)
    for _ in range(100):
        T = evaluate_umps(random_tuple(2, 2, rng, bound=20), 4)
        v = decide_membership_224(T)
        assert v.in_closure and v.in_set


@pytest.mark.parametrize("c", [Fraction(3), Fraction(-2, 7)])
def test_membership_cone_property(c):
    points = [basis4(e0101=1), w_state(4), basis4(e0011=1, e0101=SQRT2), basis4(e0001=1, e1111=1)]
    for T in points:
        a, b = decide_membership_224(T), decide_membership_224(T.scale(QuadExt(c)))
        assert (a.in_closure, a.in_set) == (b.in_closure, b.in_set)


def test_verdict_invariant():
    rng = random.Random(9)
    for _ in range(20):
        vals = [Fraction(rng.randint(-2, 2)) for _ in range(6)]
        v = decide_membership_224(CyclicTensor(4, 2, vals))
        assert not v.in_set or v.in_closure


# -- trivial cases ----------------------------------------------------------------


def test_trivial_cases():
    assert trivial_case_check(5, 1, 7).reason == "full space"
    t = trivial_case_check(3, 4, 2)
    assert t.closed and "rank at most D^2" in t.reason
    assert trivial_case_check(1, 3, 5).reason == "Veronese variety"
    assert trivial_case_check(2, 2, 4).closed is None
    assert str(trivial_case_check(2, 2, 4)) == "nontrivial"

"""Acceptance criteria 1 to 11, one test per criterion.

Each test records a single PASS/FAIL line (shown in the terminal summary and
printed with -s) and then asserts the criterion at its stated tolerance and
time budget.
"""

import random
import time
from fractions import Fraction

import property_checks
from conftest import ACCEPTANCE_LINES

from umps.arith import SQRT2
from umps.core import evaluate_umps, random_tuple
from umps.data import load_golden
from umps.membership import (
    builtin_family,
    certify_not_member_e012,
    certify_not_member_wstate,
    decide_membership_224,
    limit_experiment,
)
from umps.necklaces import CyclicTensor, cyc_dim
from umps.traces import verify_word_identity
from umps.variety import (
    expected_dimension,
    fiber_count,
    implicitize_by_degree,
    jacobian_dimension,
    linear_span_dimension,
    surjectivity_check,
)


def record(k, ok, detail, elapsed):
    line = f"criterion {k:2d}: {'PASS' if ok else 'FAIL'} ({elapsed:.1f} s) {detail}"
    ACCEPTANCE_LINES[k] = line
    print(line)


def test_criterion_01_ambient_dimensions():
    t0 = time.perf_counter()
    dims = tuple(cyc_dim(N, 2) for N in range(1, 8))
    elapsed = time.perf_counter() - t0
    ok = dims == (2, 3, 4, 6, 8, 14, 20) and elapsed < 1
    record(1, ok, f"cyc_dim(N,2) for N=1..7 = {dims}", elapsed)
    assert ok


def test_criterion_02_expected_dimension():
    t0 = time.perf_counter()
    cases = [(D, 2, N) for D in (1, 2, 3) for N in range(3, 7)] + [(2, 3, 3)]
    bad = []
    for D, d, N in cases:
        r = jacobian_dimension(D, d, N)
        target = min((d - 1) * D * D + 1, cyc_dim(N, d))
        if r.jacobian_rank != target or r.expected != expected_dimension(D, d, N):
            bad.append((D, d, N, r.jacobian_rank, target))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 30
    record(2, ok, f"{len(cases)} cases, mismatches {bad}", elapsed)
    assert ok


def test_criterion_03_hypersurface():
    t0 = time.perf_counter()
    _, (f,) = load_golden("f224")
    r = implicitize_by_degree(2, 2, 4, 6, golden=f)
    elapsed = time.perf_counter() - t0
    counts = r.counts()
    ok = counts == {1: 0, 2: 0, 3: 0, 4: 0, 5: 0, 6: 1} and r.matches_golden is True and elapsed < 120
    record(3, ok, f"counts {counts}, sextic proportional to golden: {r.matches_golden}", elapsed)
    assert ok


def test_criterion_04_generator_counts():
    t0 = time.perf_counter()
    c5 = implicitize_by_degree(2, 2, 5, 6).counts()
    c6 = implicitize_by_degree(2, 2, 6, 3).counts()
    elapsed = time.perf_counter() - t0
    quadrics_5 = c5.get(2, 0)
    sextics_5 = c5.get(6, 0)
    ok6 = (c6[1], c6[2], c6[3]) == (1, 6, 17)
    ok = quadrics_5 == 3 and ok6 and elapsed < 1800
    record(
        4,
        ok,
        f"(2,2,5) counts {c5}: quadrics {quadrics_5} (target 3), sextics {sextics_5} (stretch 27); "
        f"(2,2,6) counts {c6} (target 1/6/17)",
        elapsed,
    )
    assert ok6
    assert quadrics_5 == 3, f"(2,2,5) has {quadrics_5} minimal quadrics; generators found {c5}"


def test_criterion_05_span_defect():
    t0 = time.perf_counter()
    span = linear_span_dimension(2, 2, 6)
    ident = verify_word_identity((1, 1, 0, 0, 1, 0), (1, 1, 0, 1, 0, 0))
    elapsed = time.perf_counter() - t0
    ok = span == 13 and ident and elapsed < 60
    record(5, ok, f"span dim {span}, trace identity holds: {ident}", elapsed)
    assert ok


def test_criterion_06_surjectivity():
    t0 = time.perf_counter()
    _, forms = load_golden("subspace_324")
    r = surjectivity_check(forms, 3, 2, 4)
    rank = jacobian_dimension(3, 2, 4).jacobian_rank
    elapsed = time.perf_counter() - t0
    ok = r.ideal_dim == 0 and rank == 6 and elapsed < 300
    record(6, ok, f"ideal dim {r.ideal_dim}, jacobian rank {rank}, verdict '{r.verdict}'", elapsed)
    assert ok


def test_criterion_07_identifiability():
    t0 = time.perf_counter()
    found = {}
    for N in (5, 6):
        for seed in (0, 1, 2):
            r = fiber_count(N, seed=seed)
            found[(N, seed)] = (r.ideal_dim, r.degree)
    elapsed = time.perf_counter() - t0
    ok = all(v == (0, N) for (N, _), v in found.items()) and elapsed < 1200
    record(7, ok, f"(dim, degree) by (N, seed): {found}", elapsed)
    assert ok


def test_criterion_08_certificates():
    t0 = time.perf_counter()
    e012 = certify_not_member_e012().verdict
    w = {N: certify_not_member_wstate(N).verdict for N in (4, 5, 6)}
    control = certify_not_member_wstate(3).verdict
    elapsed = time.perf_counter() - t0
    ok = e012 and all(w.values()) and control is False and elapsed < 600
    record(8, ok, f"e012 {e012}, W_N {w}, N=3 control feasible: {not control}", elapsed)
    assert ok


def test_criterion_09_limit_rates():
    t0 = time.perf_counter()
    e = limit_experiment(builtin_family("e012"))
    w = {N: limit_experiment(builtin_family(f"wstate({N})")) for N in (4, 5)}
    elapsed = time.perf_counter() - t0
    ok_e = abs(e.slope - 6) <= 0.1
    ok_w = all(abs(r.slope - N) <= 0.1 for N, r in w.items())
    ok = ok_e and ok_w and elapsed < 1
    slopes = {N: round(r.slope, 3) for N, r in w.items()}
    record(9, ok, f"e012 slope {e.slope:.3f} (target 6); wstate slopes {slopes} (target N)", elapsed)
    assert ok_e and elapsed < 1
    assert ok_w, f"wstate slopes {slopes}; the residual vanishes to order 2N"


def _point(**coords):
    T = CyclicTensor.zero(4, 2, Fraction(0))
    for word, v in coords.items():
        T[word[1:]] = v
    return T


def test_criterion_10_membership():
    t0 = time.perf_counter()
    removed = [_point(w0001=1), _point(w0011=1, w0101=SQRT2), _point(w0011=1, w0101=-SQRT2)]
    removed_ok = all(
        (v.in_closure, v.in_set) == (True, False) for v in map(decide_membership_224, removed)
    )
    w0101 = decide_membership_224(_point(w0101=1)).in_set is True
    rng = random.Random(2024)
    misses = 0
    for _ in range(1000):
        T = evaluate_umps(random_tuple(2, 2, rng, bound=7), 4)
        if decide_membership_224(T).in_set is not True:
            misses += 1
    elapsed = time.perf_counter() - t0
    ok = removed_ok and w0101 and misses == 0 and elapsed < 120
    record(10, ok, f"removed points ok {removed_ok}, e0101 in set {w0101}, sample misses {misses}/1000", elapsed)
    assert ok


def test_criterion_11_property_suites():
    t0 = time.perf_counter()
    checks = {
        "gl_equivariance": property_checks.gl_equivariance,
        "join_additivity": property_checks.join_additivity,
        "conjugation_invariance": property_checks.conjugation_invariance,
        "root_of_unity_invariance": property_checks.root_of_unity_invariance,
        "trace_triangle": property_checks.trace_triangle,
    }
    failures = {name: fn(500) for name, fn in checks.items()}
    elapsed = time.perf_counter() - t0
    ok = not any(failures.values()) and elapsed < 300
    record(11, ok, f"failures per 500 instances: {failures}", elapsed)
    assert ok

"""Dimension, linear span, implicitization, surjectivity and fiber analyses."""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .arith import MODULAR_PRIMES, crt, random_rational, rational_reconstruct
from .core import MatrixTuple, evaluate_umps, matmul, random_tuple
from .necklaces import CyclicTensor, count_binary_necklaces, cyc_dim, enumerate_necklaces
from .poly import (
    QQ,
    GroebnerBudgetExceeded,
    Ideal,
    MultiPoly,
    PolyRing,
    evaluate_poly,
    groebner,
    ideal_dimension,
    modular_image,
    quotient_degree,
)
from .traces import TRACE_RING, phi, trace_parametrization

# --------------------------------------------------------------------------
# Jacobian dimension
# --------------------------------------------------------------------------


def expected_dimension(D: int, d: int, N: int) -> int:
    return min((d - 1) * D * D + 1, cyc_dim(N, d))


@dataclass
class DimensionReport:
    D: int
    d: int
    N: int
    jacobian_rank: int
    expected: int
    ambient: int
    fills_ambient: bool
    points_sampled: int
    seed: int

    def as_dict(self) -> dict:
        return asdict(self)


def jacobian_matrix(M: MatrixTuple, N: int) -> list[list]:
    """Rows: necklaces of (N, d). Columns: entries (i, r, s) of M_i, row-major per matrix.

    d tr(A_1 ... A_N) / d (A_k)_{rs} = (A_{k+1} ... A_N A_1 ... A_{k-1})_{sr}.
    """
    D, d = M.D, M.d
    mats = [M[i] for i in range(d)]
    zero = M.scalar_sample() * 0
    rows = []
    for nk in enumerate_necklaces(N, d):
        w = nk.word
        row = [zero] * (d * D * D)
        for k in range(N):
            rest = w[k + 1:] + w[:k]
            if rest:
                P = mats[rest[0]]
                for s in rest[1:]:
                    P = matmul(P, mats[s])
            else:
                P = [[zero + (1 if r == c else 0) for c in range(D)] for r in range(D)]
            base = w[k] * D * D
            for r in range(D):
                for c in range(D):
                    row[base + r * D + c] = row[base + r * D + c] + P[c][r]
        rows.append(row)
    return rows


def jacobian_dimension(D: int, d: int, N: int, trials: int = 2, seed: int = 0) -> DimensionReport:
    """Maximum exact rank of the Jacobian of T_N over random rational points."""
    if min(D, d, N, trials) < 1:
        raise ValueError("parameters must be >= 1")
    rng = random.Random(seed)
    best = 0
    for _ in range(trials):
        M = random_tuple(D, d, rng)
        best = max(best, linalg.rank(jacobian_matrix(M, N)))
    amb = cyc_dim(N, d)
    return DimensionReport(D, d, N, best, expected_dimension(D, d, N), amb, best == amb, trials, seed)


# --------------------------------------------------------------------------
# linear span
# --------------------------------------------------------------------------


def linear_span_dimension(D: int, d: int, N: int, samples: int | None = None, seed: int = 0) -> int:
    """Rank of a sample of points of uMPS(D, d, N), exact via two primes."""
    amb = cyc_dim(N, d)
    samples = amb + 8 if samples is None else samples
    if samples < amb:
        raise ValueError("need at least cyc_dim(N, d) samples")
    rng = random.Random(seed)
    rows = [evaluate_umps(random_tuple(D, d, rng), N).values for _ in range(samples)]
    return linalg.two_prime_rank(rows)


def strict_subspace_predictor(D: int, N0: int, N1: int) -> bool:
    """Sufficient condition for the closure to lie in a strict linear subspace."""
    if N0 + N1 < 1:
        raise ValueError("need N0 + N1 >= 1")
    lhs = count_binary_necklaces(N0, N1)
    rhs = math.comb(N0 + D - 1, D - 1) * math.comb(N1 + D * D - D, D * D - D)
    return lhs > rhs


# --------------------------------------------------------------------------
# implicitization by degree
# --------------------------------------------------------------------------


@dataclass
class DegreeCount:
    degree: int
    monomials: int
    vanishing_dim: int
    new_generators: int
    samples: int


@dataclass
class GeneratorCountReport:
    D: int
    d: int
    N: int
    degree_bound: int
    seed: int
    primes: list[int]
    per_degree: list[DegreeCount] = field(default_factory=list)
    lifted: dict[int, list[str]] = field(default_factory=dict)
    matches_golden: bool | None = None

    def counts(self) -> dict[int, int]:
        return {c.degree: c.new_generators for c in self.per_degree}

    def as_dict(self) -> dict:
        out = asdict(self)
        out["lifted"] = {str(k): v for k, v in self.lifted.items()}
        return out


def degree_monomials(n: int, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree k in n variables, in decreasing lex order."""
    out = []

    def rec(i, left, acc):
        if i == n - 1:
            out.append(tuple(acc + [left]))
            return
        for e in range(left, -1, -1):
            rec(i + 1, left - e, acc + [e])

    if n == 0:
        return [()] if k == 0 else []
    rec(0, k, [])
    return out


def _phi_mod_points(polys: list[MultiPoly], count: int, p: int, rng: random.Random) -> np.ndarray:
    """count x len(polys) array of phi_N(t) mod p at random t."""
    modpolys = []
    for f in polys:
        modpolys.append([(m, c.numerator * pow(c.denominator, -1, p) % p) for m, c in f.terms.items()])
    out = np.empty((count, len(polys)), dtype=np.int64)
    for s in range(count):
        t = [rng.randrange(p) for _ in range(5)]
        pw = [[pow(ti, e, p) for e in range(16)] for ti in t]
        for j, terms in enumerate(modpolys):
            acc = 0
            for m, c in terms:
                v = c
                for i, e in enumerate(m):
                    if e:
                        v = v * pw[i][e] % p
                acc += v
            out[s, j] = acc % p
    return out


def _monomial_matrix(X: np.ndarray, monos, p: int) -> np.ndarray:
    """Evaluate each monomial at each row of X, modulo p."""
    s, n = X.shape
    kmax = max((max(m) for m in monos), default=0)
    powers = [np.ones((s, n), dtype=np.int64)]
    for _ in range(kmax):
        powers.append(powers[-1] * X % p)
    E = np.empty((s, len(monos)), dtype=np.int64)
    for j, m in enumerate(monos):
        col = np.ones(s, dtype=np.int64)
        for i, e in enumerate(m):
            if e:
                col = col * powers[e][:, i] % p
        E[:, j] = col
    return E


def _shift_rows(V: np.ndarray, lower, index_k: dict, n: int) -> np.ndarray:
    """Rows x_i * g for every basis vector g of degree k-1 and every variable i."""
    rows = np.zeros((V.shape[0] * n, len(index_k)), dtype=np.int64)
    r = 0
    for g in V:
        nz = np.flatnonzero(g)
        for i in range(n):
            for j in nz:
                m = list(lower[j])
                m[i] += 1
                rows[r, index_k[tuple(m)]] = g[j]
            r += 1
    return rows


def _vanishing_forms(polys, k: int, p: int, rng: random.Random, cap: int = 4):
    """Kernel of the degree-k evaluation map on the image of phi, with rank stabilisation.

    The kernel is computed from all but the last 32 samples; the rank has
    stabilised exactly when that kernel also vanishes on the last 32.
    """
    n = len(polys)
    monos = degree_monomials(n, k)
    extra = 32
    count = len(monos) + extra
    X = _phi_mod_points(polys, count, p, rng)
    for _ in range(cap):
        E = _monomial_matrix(X, monos, p)
        K = linalg.nullspace_mod(E[: count - extra], p)
        if not K.shape[0] or not linalg.matmul_mod(E[count - extra:], K.T, p).any():
            return monos, K, count
        X = np.vstack([X, _phi_mod_points(polys, extra, p, rng)])
        count += extra
    raise ArithmeticError(f"evaluation rank did not stabilise in degree {k}")


def _count_for_prime(polys, degree_bound: int, p: int, seed: int):
    rng = random.Random(seed)
    n = len(polys)
    results = []
    prev_monos, prev_V = None, None
    kernels = {}
    for k in range(1, degree_bound + 1):
        monos, V, samples = _vanishing_forms(polys, k, p, rng)
        index_k = {m: i for i, m in enumerate(monos)}
        if prev_V is not None and prev_V.shape[0]:
            S = _shift_rows(prev_V, prev_monos, index_k, n)
            lower_rank = linalg.rank_mod(S, p)
        else:
            S = np.zeros((0, len(monos)), dtype=np.int64)
            lower_rank = 0
        results.append(DegreeCount(k, len(monos), V.shape[0], V.shape[0] - lower_rank, samples))
        kernels[k] = (monos, V, S)
        prev_monos, prev_V = monos, V
    return results, kernels


def _new_generators_mod(monos, V, S, p) -> tuple[list[int], np.ndarray]:
    """Canonical representatives of V modulo span(S): pivot columns and reduced rows."""
    n = len(monos)
    if S.shape[0]:
        RS, piv_s = linalg.rref_mod(S, p)
        RS = RS[: len(piv_s)]
    else:
        RS, piv_s = np.zeros((0, n), dtype=np.int64), []
    # reduce V's rows against RS, then row-reduce what is left
    W = V.copy() % p
    for i, c in enumerate(piv_s):
        coef = W[:, c].copy()
        W = (W - np.outer(coef, RS[i])) % p
    RW, piv_w = linalg.rref_mod(W, p)
    RW = RW[: len(piv_w)]
    # clear the columns of the lower-degree pivots from the new rows
    return piv_w, RW


def _lift_vectors(images, primes, monos, ring) -> list[MultiPoly] | None:
    M = math.prod(primes)
    bound = math.isqrt(M // 2 - 1)
    polys = []
    for r in range(images[0].shape[0]):
        terms = {}
        for j in range(len(monos)):
            residues = [int(img[r, j]) for img in images]
            if not any(residues):
                continue
            x, _ = crt(residues, list(primes))
            q = rational_reconstruct(x, bound, M)
            if q is None:
                return None
            terms[monos[j]] = q
        polys.append(MultiPoly(ring, terms))
    return polys


def necklace_ring(N: int, d: int = 2) -> PolyRing:
    return PolyRing([f"x{nk}" for nk in enumerate_necklaces(N, d)], QQ, "grevlex")


def implicitize_by_degree(
    D: int,
    d: int,
    N: int,
    degree_bound: int,
    seed: int = 0,
    primes: Sequence[int] = MODULAR_PRIMES,
    lift_max: int = 3,
    golden: MultiPoly | None = None,
) -> GeneratorCountReport:
    """Per-degree counts of minimal generators of the ideal of the closure of uMPS(2,2,N)."""
    if (D, d) != (2, 2):
        raise ValueError("implicitization uses the trace parametrization and needs D = d = 2")
    if degree_bound < 1:
        raise ValueError("degree_bound must be >= 1")
    polys = trace_parametrization(N)
    per_prime = [_count_for_prime(polys, degree_bound, p, seed) for p in primes]
    signatures = [[(c.vanishing_dim, c.new_generators) for c in res] for res, _ in per_prime]
    if any(s != signatures[0] for s in signatures):
        raise ArithmeticError(f"counts differ between primes: {signatures}")
    report = GeneratorCountReport(D, d, N, degree_bound, seed, list(primes), per_prime[0][0])
    ring = necklace_ring(N)
    for c in report.per_degree:
        if not (1 <= c.new_generators <= lift_max):
            continue
        images, pivots = [], None
        for (res, kernels), p in zip(per_prime, primes):
            monos, V, S = kernels[c.degree]
            piv, rows = _new_generators_mod(monos, V, S, p)
            if pivots is not None and piv != pivots:
                raise ArithmeticError("generator pivots differ between primes")
            pivots = piv
            images.append(rows)
        lifted = _lift_vectors(images, primes, kernels[c.degree][0], ring)
        if lifted is None:
            report.lifted[c.degree] = []
            continue
        lifted = [verify_generator(g, N, seed) and g for g in lifted]
        report.lifted[c.degree] = [str(g) if g else "<failed verification>" for g in lifted]
        if golden is not None and c.degree == golden.total_degree() and len(lifted) == 1 and lifted[0]:
            report.matches_golden = proportional(lifted[0], golden)
    return report


def proportional(f: MultiPoly, g: MultiPoly) -> bool:
    """f = c * g for a nonzero scalar c."""
    if f.is_zero() or g.is_zero() or set(f.terms) != set(g.terms):
        return False
    m = next(iter(f.terms))
    c = f.terms[m] / g.terms[m]
    return all(f.terms[k] == c * g.terms[k] for k in f.terms)


def verify_generator(g: MultiPoly, N: int, seed: int = 0, points: int = 20) -> bool:
    """g vanishes exactly at phi_N(t) for random rational t."""
    rng = random.Random(seed + 7919)
    for _ in range(points):
        t = [random_rational(rng) for _ in range(5)]
        if evaluate_poly(g, tuple(phi(N, t).values)) != 0:
            return False
    return True


# --------------------------------------------------------------------------
# surjectivity via a linear subspace of parameters
# --------------------------------------------------------------------------


@dataclass
class SurjectivityReport:
    D: int
    d: int
    N: int
    parameters: int
    image_dim: int
    ideal_dim: int | None
    precondition_ok: bool
    fills_ambient: bool
    verdict: str

    def as_dict(self) -> dict:
        return asdict(self)


def subspace_tuple(forms: Sequence[MultiPoly], D: int, d: int) -> MatrixTuple:
    """Arrange d*D*D linear forms (row-major, matrix after matrix) into a MatrixTuple."""
    if len(forms) != d * D * D:
        raise ValueError(f"expected {d * D * D} linear forms, got {len(forms)}")
    if any(f.total_degree() > 1 or (f.terms and not f.is_homogeneous()) for f in forms):
        raise ValueError("subspace entries must be linear forms")
    return MatrixTuple(
        [[list(forms[i * D * D + r * D:i * D * D + (r + 1) * D]) for r in range(D)] for i in range(d)]
    )


def surjectivity_check(
    forms: Sequence[MultiPoly],
    D: int,
    d: int,
    N: int,
    primes: Sequence[int] = MODULAR_PRIMES,
    seed: int = 0,
) -> SurjectivityReport:
    """Restrict T_N to a linear space of matrix tuples and compute the dimension of the
    common zero set of all necklace coordinates.

    Dimension 0 means the projectivised subspace avoids the base locus; if the
    uMPS variety fills the ambient space, the map is then onto.
    The dimension is decided over GF(p) for each prime. The coordinates have
    integer coefficients and define a cone, so an empty projective zero set
    modulo p implies the same over Q.
    """
    ring = forms[0].ring
    m = ring.n
    dim_report = jacobian_dimension(D, d, N, seed=seed)
    image_dim = dim_report.jacobian_rank
    if m - 1 < image_dim - 1:
        return SurjectivityReport(D, d, N, m, image_dim, None, False, dim_report.fills_ambient,
                                  "precondition violated: subspace too small for the image")
    T = evaluate_umps(subspace_tuple(forms, D, d), N)
    I = Ideal(T.values, ring)
    if I.is_zero():
        dim = m
    else:
        dims = {ideal_dimension(I, method="charts", primes=[p]) for p in primes}
        if len(dims) != 1:
            raise ArithmeticError(f"dimension differs between primes: {dims}")
        dim = dims.pop()
    if dim == 0 and dim_report.fills_ambient:
        verdict = "image closed and fills"
    elif dim == 0:
        verdict = "image closed"
    else:
        verdict = "no conclusion"
    return SurjectivityReport(D, d, N, m, image_dim, dim, True, dim_report.fills_ambient, verdict)


# --------------------------------------------------------------------------
# fibers of the trace parametrization
# --------------------------------------------------------------------------


@dataclass
class FiberReport:
    N: int
    target: CyclicTensor
    t_star: list
    ideal_dim: int
    degree: int | None
    matches_N: bool
    seed: int
    method: str

    def as_dict(self) -> dict:
        from .io import tensor_to_json

        return {
            "N": self.N,
            "target": tensor_to_json(self.target),
            "t_star": [str(x) for x in self.t_star],
            "ideal_dim": self.ideal_dim,
            "degree": self.degree,
            "matches_N": self.matches_N,
            "seed": self.seed,
            "method": self.method,
        }


def _phi_jacobian_rank(N: int, t: Sequence) -> int:
    polys = trace_parametrization(N)
    rows = []
    for f in polys:
        row = []
        for i in range(5):
            dterms = {}
            for m, c in f.terms.items():
                if m[i]:
                    mm = m[:i] + (m[i] - 1,) + m[i + 1:]
                    dterms[mm] = c * m[i]
            row.append(evaluate_poly(MultiPoly(TRACE_RING, dterms), tuple(t)))
        rows.append(row)
    return linalg.rank(rows)


def fiber_ideal(N: int, target: CyclicTensor) -> Ideal:
    polys = trace_parametrization(N)
    return Ideal([f - v for f, v in zip(polys, target.values)], TRACE_RING)


def fiber_count(
    N: int,
    seed: int = 0,
    target: CyclicTensor | None = None,
    budget: int | None = None,
    primes: Sequence[int] = MODULAR_PRIMES,
) -> FiberReport:
    """Count the points of phi_N^{-1}(phi_N(t*)) for a random rational t*."""
    if N < 5:
        raise ValueError("fiber counting needs N >= 5")
    rng = random.Random(seed)
    t_star: list = []
    if target is None:
        while True:
            t_star = [Fraction(rng.randint(-20, 20)) for _ in range(5)]
            target = phi(N, t_star)
            if not target.is_zero() and _phi_jacobian_rank(N, t_star) == 5:
                break
    elif target.is_zero():
        raise ValueError("degenerate target: the zero tensor is not a generic image point")
    I = fiber_ideal(N, target)
    method = "QQ"
    try:
        groebner(I, budget=budget)
        dim = ideal_dimension(I)
        deg = quotient_degree(I) if dim == 0 else None
    except GroebnerBudgetExceeded:
        method = "modular"
        dim = ideal_dimension(I, primes=primes)
        deg = quotient_degree(I, primes=primes) if dim == 0 else None
    return FiberReport(N, target, t_star, dim, deg, dim == 0 and deg == N, seed, method)

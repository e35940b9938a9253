"""Closedness experiments: limit families, infeasibility certificates and the
constructible description of uMPS(2,2,4)."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .arith import SQRT2, Laurent, QuadExt
from .core import MatrixTuple, evaluate_umps
from .data import load_golden
from .necklaces import CyclicTensor, cyc_dim, w_state
from .poly import QQ, Ideal, MultiPoly, PolyRing, evaluate_poly, groebner, vanishes_at

DEFAULT_GRID = tuple(10.0 ** (-k / 2) for k in range(2, 7))  # 1e-1 ... 1e-3
CHOP_TOL = 1e-12

# --------------------------------------------------------------------------
# limit families
# --------------------------------------------------------------------------


@dataclass
class LimitFamily:
    """A one-parameter family lam -> M_lam with T_N(M_lam) -> target as lam -> 0.

    ``builder`` receives the parameter as a scalar; called with a
    :class:`Laurent` it yields the expansion in lam, which keeps large
    cancelling terms exact.
    """

    label: str
    N: int
    builder: Callable[[object], MatrixTuple]
    target: CyclicTensor
    claimed_rate: int | None
    notes: str = ""

    def tuple_at(self, lam) -> MatrixTuple:
        if lam == 0:
            raise ValueError("the family is defined for lam != 0 only")
        return self.builder(lam)

    def expansion(self) -> CyclicTensor:
        """T_N(M_lam) - target with Laurent coordinates.

        The target is subtracted before evaluation and float coefficients of
        modulus <= 1e-12 are dropped, so rounding in large cancelling terms
        never reaches the residual.
        """
        T = evaluate_umps(self.builder(Laurent.lam()), self.N)
        diff = [Laurent._coerce(v) - t for v, t in zip(T.values, self.target.values)]
        return CyclicTensor(self.N, T.d, [v.chop(CHOP_TOL) if _has_float(v) else v for v in diff])

    def value_at(self, lam) -> CyclicTensor:
        """T_N(M_lam) computed from the chopped Laurent expansion."""
        T = evaluate_umps(self.builder(Laurent.lam()), self.N)
        vals = [v.chop(CHOP_TOL) if _has_float(v) else Laurent._coerce(v) for v in T.values]
        return CyclicTensor(self.N, T.d, [_real_if_close(v(lam)) for v in vals])

    def residual(self, lam: float, expansion: CyclicTensor | None = None) -> float:
        """Euclidean norm of T_N(M_lam) - target on necklace coordinates."""
        E = self.expansion() if expansion is None else expansion
        return math.sqrt(sum(abs(complex(v(lam))) ** 2 for v in E.values))


def _real_if_close(z):
    if isinstance(z, complex) and abs(z.imag) <= CHOP_TOL:
        return z.real
    return z


def _has_float(v) -> bool:
    return isinstance(v, Laurent) and any(isinstance(c, (float, complex)) for c in v.terms.values())


def _scaled(c, base):
    return [[c * x for x in row] for row in base]


def _e012_family() -> LimitFamily:
    def build(lam):
        l2 = lam * lam
        inv = lam ** -1
        return MatrixTuple(
            [
                _scaled(l2, [[1, 0], [0, 0]]),
                _scaled(inv, [[0, 1], [0, 0]]),
                _scaled(inv, [[0, 0], [1, 0]]),
            ]
        )

    target = CyclicTensor.basis_vector((0, 1, 2), 3, one=Fraction(1), zero=Fraction(0))
    return LimitFamily("e012", 3, build, target, 6, "T_3 = lam^6 e000 + e012 exactly")


def _wstate_family(N: int) -> LimitFamily:
    zeta = cmath.exp(1j * math.pi / N)

    def build(lam):
        a = lam ** -1
        b = lam ** (N - 1)
        return MatrixTuple([_scaled(a, [[1, 0], [0, zeta]]), _scaled(b, [[1, 0], [0, -zeta]])])

    target = w_state(N).scale(2)
    # a word with k ones has trace lam^(N(k-1)) (1 - (-1)^k): the first
    # correction comes from k = 3, of order lam^(2N)
    return LimitFamily(f"wstate({N})", N, build, target, 2 * N, "residual is exactly O(lam^(2N))")


def _wstate_real_family(N: int) -> LimitFamily:
    # zeta = exp(i pi / (2N)) makes tr(M0^N) vanish; zeta + 1/zeta = 2 cos(pi / (2N))
    c = 2 * math.cos(math.pi / (2 * N))

    def build(lam):
        a = lam ** -1
        b = lam ** (N - 1)
        return MatrixTuple([_scaled(a, [[c, 1.0], [-1.0, 0.0]]), _scaled(b, [[1.0, 0.0], [0.0, 1.0]])])

    target = w_state(N).scale(2 * math.sin(math.pi / (2 * N)))
    return LimitFamily(f"wstate_real({N})", N, build, target, N, "target 2 sin(pi/(2N)) W_N")


def constant_family(M: MatrixTuple, N: int) -> LimitFamily:
    """A family that does not depend on lam; its residual is identically 0."""
    return LimitFamily("constant", N, lambda lam: M, evaluate_umps(M, N), None, "constant")


def builtin_family(name: str) -> LimitFamily:
    """'e012', 'wstate(N)' or 'wstate_real(N)' (N >= 3)."""
    name = name.strip()
    if name == "e012":
        return _e012_family()
    for prefix, maker in (("wstate_real(", _wstate_real_family), ("wstate(", _wstate_family)):
        if name.startswith(prefix) and name.endswith(")"):
            N = int(name[len(prefix):-1])
            if N < 3:
                raise ValueError("W-state families need N >= 3")
            return maker(N)
    raise ValueError(f"unknown family {name!r}")


@dataclass
class LimitResult:
    label: str
    grid: list[float]
    residuals: list[float]
    slope: float | None
    claimed_rate: int | None
    status: str  # "fit" or "exact" (residual identically zero)
    passed: bool

    def as_dict(self) -> dict:
        return {
            "family": self.label,
            "grid": self.grid,
            "residuals": self.residuals,
            "slope": self.slope,
            "claimed_rate": self.claimed_rate,
            "status": self.status,
            "verdict": "PASS" if self.passed else "FAIL",
        }


def fit_slope(grid: Sequence[float], residuals: Sequence[float]) -> float:
    """Least-squares slope of log(residual) against log(lam)."""
    x = np.log(np.asarray(grid, dtype=float))
    y = np.log(np.asarray(residuals, dtype=float))
    return float(np.polyfit(x, y, 1)[0])


def limit_experiment(family: LimitFamily, grid: Sequence[float] = DEFAULT_GRID, tol: float = 0.1) -> LimitResult:
    grid = [float(g) for g in grid]
    if len(grid) < 3 or any(g <= 0 for g in grid) or any(a <= b for a, b in zip(grid, grid[1:])):
        raise ValueError("grid needs at least 3 strictly decreasing positive values")
    T = family.expansion()
    res = [family.residual(lam, T) for lam in grid]
    if all(r == 0 for r in res):
        return LimitResult(family.label, grid, res, None, family.claimed_rate, "exact", True)
    slope = fit_slope(grid, res)
    ok = family.claimed_rate is not None and abs(slope - family.claimed_rate) <= tol
    return LimitResult(family.label, grid, res, slope, family.claimed_rate, "fit", ok)


# --------------------------------------------------------------------------
# infeasibility certificates
# --------------------------------------------------------------------------


@dataclass
class SystemResult:
    label: str
    ideal: Ideal
    basis: list[MultiPoly]

    @property
    def infeasible(self) -> bool:
        return len(self.basis) == 1 and self.basis[0].is_constant()

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "ring": self.ideal.ring.header(),
            "equations": [str(g) for g in self.ideal.generators],
            "groebner_basis": [str(g) for g in self.basis],
            "infeasible": self.infeasible,
        }


@dataclass
class Certificate:
    claim: str
    systems: list[SystemResult]
    verdict: bool
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "claim": self.claim,
            "systems": [s.as_dict() for s in self.systems],
            "groebner_basis": [[str(g) for g in s.basis] for s in self.systems],
            "verdict": self.verdict,
            **self.extra,
        }


def umps_system(mats_of: Callable[[PolyRing], list], names: Sequence[str], N: int, target: CyclicTensor) -> Ideal:
    """Equations T_N(M) = target with the matrix entries given as polynomials."""
    ring = PolyRing(names, QQ, "grevlex")
    M = MatrixTuple(mats_of(ring))
    T = evaluate_umps(M, N)
    return Ideal([v - t for v, t in zip(T.values, target.values)], ring)


def _solve(label: str, I: Ideal, budget: int | None) -> SystemResult:
    return SystemResult(label, I, groebner(I, budget=budget).generators)


def wstate_systems(N: int) -> list[tuple[str, Ideal]]:
    """The two Jordan-form cases for T_N(M0, M1) = W_N with M0 upper triangular."""
    target = w_state(N)

    def jordan(ring):
        a, A, B, C, Dv = ring.gens()
        one, zero = ring.constant(1), ring.zero()
        return [[[a, one], [zero, a]], [[A, B], [C, Dv]]]

    def diagonal(ring):
        a, d, A, B, C, Dv = ring.gens()
        zero = ring.zero()
        return [[[a, zero], [zero, d]], [[A, B], [C, Dv]]]

    return [
        ("M0 = [[a,1],[0,a]]", umps_system(jordan, ["a", "A", "B", "C", "D"], N, target)),
        ("M0 = diag(a,d)", umps_system(diagonal, ["a", "d", "A", "B", "C", "D"], N, target)),
    ]


def certify_not_member_wstate(N: int, budget: int | None = None) -> Certificate:
    """True iff both Jordan cases of T_N(M0, M1) = W_N are infeasible (2x2 matrices)."""
    if not 3 <= N <= 8:
        raise ValueError("certificates are computed for 3 <= N <= 8")
    systems = [_solve(label, I, budget) for label, I in wstate_systems(N)]
    verdict = all(s.infeasible for s in systems)
    claim = f"W_{N} is not in uMPS(2,2,{N})" if verdict else f"W_{N} is in uMPS(2,2,{N})"
    return Certificate(claim, systems, verdict, {"N": N})


E012_VARS_JORDAN = ["a", "a2", "b2", "c2", "d2", "a3", "b3", "c3", "d3"]
E012_VARS_DIAGONAL = ["a1", "d1", "a2", "b2", "c2", "d2", "a3", "b3", "c3", "d3"]


def e012_systems() -> list[tuple[str, Ideal]]:
    target = CyclicTensor.basis_vector((0, 1, 2), 3, one=Fraction(1), zero=Fraction(0))

    def jordan(ring):
        a, a2, b2, c2, d2, a3, b3, c3, d3 = ring.gens()
        one, zero = ring.constant(1), ring.zero()
        return [[[a, one], [zero, a]], [[a2, b2], [c2, d2]], [[a3, b3], [c3, d3]]]

    def diagonal(ring):
        a1, d1, a2, b2, c2, d2, a3, b3, c3, d3 = ring.gens()
        zero = ring.zero()
        return [[[a1, zero], [zero, d1]], [[a2, b2], [c2, d2]], [[a3, b3], [c3, d3]]]

    return [
        ("M0 = [[a,1],[0,a]]", umps_system(jordan, E012_VARS_JORDAN, 3, target)),
        ("M0 = diag(a1,d1)", umps_system(diagonal, E012_VARS_DIAGONAL, 3, target)),
    ]


def _matches_some(eq: MultiPoly, candidates: Sequence[MultiPoly]) -> bool:
    return any(not eq.is_zero() and (eq.monic() == c.monic()) for c in candidates if not c.is_zero())


def printed_systems_check(generated: list[tuple[str, Ideal]]) -> dict:
    """Locate the stored printed equations inside the generated systems.

    The printed Jordan system has a = 0 already substituted (forced by
    tr(M0^3) = 2a^3 = 0), so the generated equations are specialised first.
    """
    (_, jordan), (_, diagonal) = generated
    ring_j, printed_j = load_golden("e012_jordan_system")
    ring_d, printed_d = load_golden("e012_diagonal_system")
    spec_ring = PolyRing(E012_VARS_JORDAN[1:], QQ, "grevlex")
    jordan_at_zero = [g.restrict({0: 0}, spec_ring) for g in jordan.generators]
    jordan_at_zero = [MultiPoly(ring_j, {_reorder(m, spec_ring, ring_j): c for m, c in g.terms.items()}) for g in jordan_at_zero]
    diag = [MultiPoly(ring_d, {_reorder(m, diagonal.ring, ring_d): c for m, c in g.terms.items()}) for g in diagonal.generators]
    found_j = [_matches_some(e, jordan_at_zero) for e in printed_j]
    found_d = [_matches_some(e, diag) for e in printed_d]
    return {
        "jordan_printed_found": found_j,
        "diagonal_printed_found": found_d,
        "printed_jordan_infeasible": _solve("printed jordan", Ideal(printed_j, ring_j), None).infeasible,
        "printed_diagonal_infeasible": _solve("printed diagonal", Ideal(printed_d, ring_d), None).infeasible,
    }


def _reorder(m, src: PolyRing, dst: PolyRing):
    out = [0] * dst.n
    for name, e in zip(src.names, m):
        out[dst.index(name)] = e
    return tuple(out)


def certify_not_member_e012(budget: int | None = None, check_printed: bool = True) -> Certificate:
    """True iff both Jordan cases of T_3(M0, M1, M2) = e012 are infeasible."""
    generated = e012_systems()
    systems = [_solve(label, I, budget) for label, I in generated]
    verdict = all(s.infeasible for s in systems)
    extra = printed_systems_check(generated) if check_printed else {}
    claim = "e012 is not in uMPS(2,3,3)" if verdict else "e012 is in uMPS(2,3,3)"
    return Certificate(claim, systems, verdict, extra)


def non_closedness_evidence(N: int, grid: Sequence[float] = DEFAULT_GRID) -> dict:
    """W_N outside uMPS(2,2,N) and W_N a limit of uMPS(2,2,N) points, as one conjunction."""
    cert = certify_not_member_wstate(N)
    lim = limit_experiment(builtin_family(f"wstate({N})"), grid)
    return {
        "N": N,
        "certificate": cert.verdict,
        "limit": lim.passed,
        "slope": lim.slope,
        "not_closed": cert.verdict and lim.passed,
    }


# --------------------------------------------------------------------------
# constructible membership for uMPS(2,2,4)
# --------------------------------------------------------------------------


@dataclass
class MembershipVerdict:
    point: CyclicTensor
    in_closure: bool
    in_set: bool | None
    certificate: list[str]

    def as_dict(self) -> dict:
        from .io import tensor_to_json

        return {
            "point": tensor_to_json(self.point),
            "in_closure": self.in_closure,
            "in_set": self.in_set,
            "certificate": self.certificate,
        }


_MEMBERSHIP_DATA: dict = {}


def _membership_data():
    if not _MEMBERSHIP_DATA:
        _, (f,) = load_golden("f224")
        for name in ("I1", "I2", "I3", "J"):
            ring, gens = load_golden(name)
            _MEMBERSHIP_DATA[name] = Ideal(gens, ring)
        _MEMBERSHIP_DATA["f224"] = f
    return _MEMBERSHIP_DATA


def _as_quad(x) -> QuadExt:
    return x if isinstance(x, QuadExt) else QuadExt(Fraction(x))


def decide_membership_224(point: CyclicTensor) -> MembershipVerdict:
    """Membership in uMPS(2,2,4) = (V(f) minus (V(I1) u V(I2) u V(I3))) u V(J)."""
    if (point.N, point.d) != (4, 2):
        raise ValueError("membership test is for Cyc^4(K^2)")
    data = _membership_data()
    pt = tuple(_as_quad(v) for v in point.values)
    notes = []
    in_closure = evaluate_poly(data["f224"], pt) == 0
    notes.append(f"f224 {'vanishes' if in_closure else 'does not vanish'}")
    if not in_closure:
        return MembershipVerdict(point, False, False, notes)
    hits = [name for name in ("I1", "I2", "I3") if vanishes_at(data[name], pt)]
    on_j = vanishes_at(data["J"], pt)
    for name in hits:
        notes.append(f"point lies on V({name})")
    if on_j:
        notes.append("point lies on V(J) (rank-one tensors)")
    in_set = (not hits) or on_j
    return MembershipVerdict(point, True, in_set, notes)


# --------------------------------------------------------------------------
# trivial cases
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class TrivialCase:
    closed: bool | None
    reason: str

    def __str__(self):
        return f"closed (trivial): {self.reason}" if self.closed else "nontrivial"


def trivial_case_check(D: int, d: int, N: int) -> TrivialCase:
    if min(D, d, N) < 1:
        raise ValueError("D, d, N must be >= 1")
    if d == 1 or N == 1:
        return TrivialCase(True, "full space")
    if D == 1:
        return TrivialCase(True, "Veronese variety")
    if N == 2:
        return TrivialCase(True, "symmetric matrices of rank at most D^2")
    return TrivialCase(None, "nontrivial")

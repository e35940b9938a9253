"""Command line front end: ``umps <subcommand> ...`` (also ``python3 -m umps``).

Every subcommand writes one JSON report (or CSV for ``table``) to stdout or
``--out``, prints a one-line summary to stderr and exits 0 iff the verdict is
PASS. Exit code 2 signals bad input.
"""

from __future__ import annotations

import argparse
import csv
import io as _stdio
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .arith import MODULAR_PRIMES, is_prime
from .core import evaluate_umps
from .data import load_golden
from .io import FormatError, dumps, format_scalar, parse_scalar, read_tensor, read_tuple, tensor_to_json
from .membership import (
    DEFAULT_GRID,
    builtin_family,
    certify_not_member_e012,
    certify_not_member_wstate,
    decide_membership_224,
    limit_experiment,
    trivial_case_check,
)
from .necklaces import CyclicTensor, cyc_dim
from .poly import GroebnerBudgetExceeded
from .traces import verify_word_identity
from .variety import (
    fiber_count,
    implicitize_by_degree,
    jacobian_dimension,
    linear_span_dimension,
    surjectivity_check,
)

# Reference closedness letters for uMPS(D, 2, N), D = 1..4, N = 1..7.
# "" marks cells left empty in the published table.
PUBLISHED_TABLE = {
    1: "FCCCCCC",
    2: "FFFNNNN",
    3: "FFFF",
    4: "FFFF",
}
PUBLISHED_ROW_LABELS = {1: 2, 2: 5, 3: 10, 4: 27}
PUBLISHED_COLUMN_LABELS = {1: 2, 2: 3, 3: 4, 4: 6, 5: 8, 6: 14, 7: 20}
CERTIFIED_N = range(4, 9)


class Report:
    def __init__(self, command: str, args: argparse.Namespace, primes=None):
        self.command = command
        self.args = args
        self.data = {
            "command": command,
            "version": __version__,
            "seed": args.seed,
            "primes": list(primes) if primes is not None else None,
        }

    def finish(self, result, passed: bool, summary: str) -> dict:
        self.data["result"] = result
        self.data["summary"] = summary
        self.data["verdict"] = "PASS" if passed else "FAIL"
        return self.data


# --------------------------------------------------------------------------
# helpers
# --------------------------------------------------------------------------


def _primes(args) -> tuple[int, ...]:
    if not args.prime:
        return MODULAR_PRIMES
    for p in args.prime:
        if not is_prime(p) or not 2**30 < p < 2**31:
            raise FormatError(f"--prime {p}: need a prime between 2^30 and 2^31")
    if len(set(args.prime)) < len(args.prime):
        raise FormatError("--prime values must be distinct")
    return tuple(args.prime)


def _parse_grid(text: str | None):
    if text is None:
        return DEFAULT_GRID
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise FormatError(f"bad --grid {text!r}: expected comma separated numbers") from None


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _bool(b) -> str:
    return "true" if b else "false"


# --------------------------------------------------------------------------
# subcommands
# --------------------------------------------------------------------------


def cmd_eval(args) -> dict:
    rep = Report("eval", args)
    if args.family:
        fam = builtin_family(args.family)
        lam = parse_scalar(args.lam) if args.lam is not None else Fraction(1)
        if lam == 0:
            raise FormatError("the family is defined for lam != 0 only")
        T = fam.value_at(lam)
        summary = f"T_{fam.N} of the {fam.label} family at lam = {format_scalar(lam)}: {len(T.values)} coordinates"
        return rep.finish(tensor_to_json(T), True, summary)
    if args.tuple_file is None or args.N is None:
        raise FormatError("eval needs a tuple file and N (or --family)")
    M = read_tuple(_read_text(args.tuple_file))
    N = args.N
    out = tensor_to_json(evaluate_umps(M, N))
    summary = f"T_{N} of a ({M.D},{M.d}) tuple from {args.tuple_file}: {cyc_dim(N, M.d)} coordinates"
    return rep.finish(out, True, summary)


def cmd_dimension(args) -> dict:
    rep = Report("dimension", args)
    r = jacobian_dimension(args.D, args.d, args.N, trials=args.trials, seed=args.seed)
    passed = r.jacobian_rank == r.expected
    summary = f"jacobian rank {r.jacobian_rank}, expected {r.expected}, ambient {r.ambient}, fills: {_bool(r.fills_ambient)}"
    return rep.finish(r.as_dict(), passed, summary)


def _closedness(D: int, N: int, fills: bool, cache: dict) -> tuple[str, str]:
    """Computed letter and the evidence behind it."""
    if fills:
        return "F", "jacobian rank equals ambient dimension"
    triv = trivial_case_check(D, 2, N)
    if triv.closed:
        return "C", f"trivial case: {triv.reason}"
    if D == 2 and N in CERTIFIED_N:
        if N not in cache:
            cert = certify_not_member_wstate(N)
            lim = limit_experiment(builtin_family(f"wstate({N})"))
            cache[N] = cert.verdict and lim.passed
        if cache[N]:
            return "N", "W-state certificate and limit family"
    return "", "no certificate"


def cmd_table(args) -> dict:
    if not (1 <= args.dmax <= 4 and 1 <= args.nmax <= 7):
        raise FormatError("table supports Dmax <= 4 and Nmax <= 7")
    rep = Report("table", args)
    cells = []
    cache: dict = {}
    mismatches = 0
    for D in range(1, args.dmax + 1):
        for N in range(1, args.nmax + 1):
            r = jacobian_dimension(D, 2, N, seed=args.seed)
            letter, why = _closedness(D, N, r.fills_ambient, cache)
            row = PUBLISHED_TABLE.get(D, "")
            published = row[N - 1] if N <= len(row) else ""
            agree = None if not (published and letter) else published == letter
            if agree is False:
                mismatches += 1
            cells.append(
                {
                    "D": D,
                    "N": N,
                    "ambient": r.ambient,
                    "published_ambient": PUBLISHED_COLUMN_LABELS.get(N),
                    "expected": r.expected,
                    "expected_formula": (2 - 1) * D * D + 1,
                    "published_row_label": PUBLISHED_ROW_LABELS.get(D),
                    "row_label_flag": PUBLISHED_ROW_LABELS.get(D) not in (None, D * D + 1),
                    "jacobian_rank": r.jacobian_rank,
                    "fills": r.fills_ambient,
                    "computed": letter,
                    "evidence": why,
                    "published": published,
                    "agrees": agree,
                }
            )
    flagged = sorted({c["D"] for c in cells if c["row_label_flag"]})
    summary = f"{len(cells)} cells, {mismatches} disagreements with the published letters"
    if flagged:
        summary += "; row label differs from (d-1)D^2+1 for D = " + ", ".join(map(str, flagged))
    return rep.finish({"cells": cells}, mismatches == 0, summary)


def _table_csv(report: dict) -> str:
    buf = _stdio.StringIO()
    cells = report["result"]["cells"]
    w = csv.DictWriter(buf, fieldnames=list(cells[0]), lineterminator="\n")
    w.writeheader()
    for c in cells:
        w.writerow({k: ("" if v is None else v) for k, v in c.items()})
    return buf.getvalue()


def _parse_expect(text: str | None) -> dict[int, int] | None:
    if text is None:
        return None
    try:
        return {int(k): int(v) for k, v in (part.split(":") for part in text.split(","))}
    except ValueError:
        raise FormatError(f"bad --expect {text!r}: expected degree:count pairs like 1:1,2:6") from None


def cmd_implicitize(args) -> dict:
    primes = _primes(args)
    rep = Report("implicitize", args, primes)
    golden = load_golden("f224")[1][0] if (args.D, args.d, args.N) == (2, 2, 4) else None
    r = implicitize_by_degree(args.D, args.d, args.N, args.bound, seed=args.seed, primes=primes, golden=golden)
    counts = {k: v for k, v in r.counts().items() if v}
    expect = _parse_expect(args.expect)
    passed = True
    if expect is not None:
        passed = all(r.counts().get(k, 0) == v for k, v in expect.items())
    if r.matches_golden is not None:
        passed = passed and r.matches_golden
    total = sum(counts.values())
    parts = ", ".join(f"{v} in degree {k}" for k, v in counts.items()) or "none"
    summary = f"{total} generator{'s' if total != 1 else ''} up to degree {args.bound}: {parts}"
    if r.matches_golden is not None:
        summary += f", matches golden f224: {_bool(r.matches_golden)}"
    return rep.finish(r.as_dict(), passed, summary)


def cmd_span(args) -> dict:
    rep = Report("span", args, MODULAR_PRIMES)
    dim = linear_span_dimension(args.D, args.d, args.N, seed=args.seed)
    amb = cyc_dim(args.N, args.d)
    summary = f"linear span dimension {dim} of {amb}"
    return rep.finish({"D": args.D, "d": args.d, "N": args.N, "span_dim": dim, "ambient": amb}, True, summary)


def cmd_identity(args) -> dict:
    rep = Report("identity", args)
    w1, w2 = (tuple(int(c) for c in w) for w in (args.w1, args.w2))
    if any(s not in (0, 1) for s in w1 + w2):
        raise FormatError("words must be binary strings")
    ok = verify_word_identity(w1, w2)
    summary = f"tr(M_{args.w1}) = tr(M_{args.w2}) for all 2x2 pairs: {_bool(ok)}"
    return rep.finish({"w1": args.w1, "w2": args.w2, "identity": ok}, ok, summary)


def cmd_fiber(args) -> dict:
    primes = _primes(args)
    rep = Report("fiber", args, primes)
    r = fiber_count(args.N, seed=args.seed, budget=args.budget, primes=primes)
    deg = "none" if r.degree is None else r.degree
    summary = f"dim {r.ideal_dim}, degree {deg}, matches N: {_bool(r.matches_N)}"
    return rep.finish(r.as_dict(), r.matches_N, summary)


def cmd_surjectivity(args) -> dict:
    primes = _primes(args)
    rep = Report("surjectivity", args, primes)
    if args.example == "324":
        _, forms = load_golden("subspace_324")
        D, d, N = 3, 2, 4
    else:
        if args.subspace is None or None in (args.D, args.d, args.N):
            raise FormatError("surjectivity needs --example 324 or --subspace FILE --D --d --N")
        from .poly import load_polys

        _, forms = load_polys(_read_text(args.subspace))
        D, d, N = args.D, args.d, args.N
    r = surjectivity_check(forms, D, d, N, primes=primes, seed=args.seed)
    dim = "n/a" if r.ideal_dim is None else r.ideal_dim
    summary = f"ideal dim {dim}; "
    if r.verdict == "image closed and fills":
        summary += f"uMPS({D},{d},{N}) fills"
    else:
        summary += r.verdict
    return rep.finish(r.as_dict(), r.ideal_dim == 0, summary)


def _point_from_args(args) -> CyclicTensor:
    if args.point:
        return read_tensor(_read_text(args.point))
    if args.coords:
        from .io import parse_scalar

        T = CyclicTensor.zero(4, 2, 0)
        for part in args.coords.split(","):
            key, _, val = part.partition("=")
            if not val:
                raise FormatError(f"bad coordinate {part!r}: expected word=value")
            T[tuple(int(c) for c in key.strip())] = parse_scalar(val)
        return T
    raise FormatError("membership needs --point FILE or --coords")


EXPECT_MEMBERSHIP = {
    "member": lambda v: v.in_set,
    "boundary": lambda v: v.in_closure and not v.in_set,
    "outside": lambda v: not v.in_closure,
}


def cmd_membership(args) -> dict:
    rep = Report("membership", args)
    v = decide_membership_224(_point_from_args(args))
    passed = EXPECT_MEMBERSHIP[args.expect](v) if args.expect else True
    summary = f"in closure: {_bool(v.in_closure)}, in uMPS(2,2,4): {_bool(v.in_set)}"
    return rep.finish(v.as_dict(), passed, summary)


def cmd_limits(args) -> dict:
    rep = Report("limits", args)
    r = limit_experiment(builtin_family(args.family), _parse_grid(args.grid))
    if r.status == "exact":
        summary = f"{r.label}: residual identically zero"
    else:
        summary = f"{r.label}: slope {r.slope:.4f}, claimed {r.claimed_rate}"
    return rep.finish(r.as_dict(), r.passed, summary)


def cmd_certify(args) -> dict:
    rep = Report("certify", args)
    if args.target == "e012":
        cert = certify_not_member_e012(budget=args.budget)
    elif args.target == "wstate":
        if args.N is None:
            raise FormatError("certify wstate needs N")
        cert = certify_not_member_wstate(args.N, budget=args.budget)
    else:
        raise FormatError(f"unknown certificate target {args.target!r}")
    summary = f"{cert.claim} (certificate {'found' if cert.verdict else 'not found'})"
    return rep.finish(cert.as_dict(), cert.verdict, summary)


def cmd_trivial(args) -> dict:
    rep = Report("trivial", args)
    t = trivial_case_check(args.D, args.d, args.N)
    return rep.finish({"closed": t.closed, "reason": t.reason}, True, str(t))


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--prime", type=int, action="append", help="modular prime; repeat for several")
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--budget", type=int, help="cap on Groebner reduction steps")
    common.add_argument("--timing", action="store_true", help="add wall time to the report")

    parser = argparse.ArgumentParser(prog="umps", description="Uniform matrix product state workbench.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    p = add("eval", cmd_eval, "evaluate T_N on a matrix tuple file or a built-in family")
    p.add_argument("tuple_file", nargs="?")
    p.add_argument("N", nargs="?", type=int)
    p.add_argument("--family", help="e012, wstate(N) or wstate_real(N)")
    p.add_argument("--lam", help="family parameter (default 1)")

    p = add("dimension", cmd_dimension, "Jacobian rank of T_N")
    for name in ("D", "d", "N"):
        p.add_argument(name, type=int)
    p.add_argument("--trials", type=int, default=2)

    p = add("table", cmd_table, "closedness / filling table for uMPS(D,2,N)")
    p.add_argument("--dmax", type=int, default=3)
    p.add_argument("--nmax", type=int, default=7)

    p = add("implicitize", cmd_implicitize, "minimal generator counts per degree")
    for name in ("D", "d", "N"):
        p.add_argument(name, type=int)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--expect", help="expected counts, e.g. 1:1,2:6,3:17")

    p = add("span", cmd_span, "dimension of the linear span of uMPS(D,d,N)")
    for name in ("D", "d", "N"):
        p.add_argument(name, type=int)

    p = add("identity", cmd_identity, "check a trace word identity for 2x2 matrices")
    p.add_argument("w1")
    p.add_argument("w2")

    p = add("fiber", cmd_fiber, "size of a generic fiber of the trace parametrization")
    p.add_argument("N", type=int)

    p = add("surjectivity", cmd_surjectivity, "dimension of T_N restricted to a parameter subspace")
    p.add_argument("--example", choices=["324"])
    p.add_argument("--subspace", help="file of d*D*D linear forms in the multipoly text format")
    p.add_argument("--D", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--N", type=int)

    p = add("membership", cmd_membership, "decide membership in uMPS(2,2,4)")
    p.add_argument("--point", help="tensor JSON file")
    p.add_argument("--coords", help="inline coordinates, e.g. 0011=1,0101=sqrt2")
    p.add_argument("--expect", choices=sorted(EXPECT_MEMBERSHIP))

    p = add("limits", cmd_limits, "fit the convergence rate of a limit family")
    p.add_argument("family")
    p.add_argument("--grid", help="comma separated decreasing lambda values")

    p = add("certify", cmd_certify, "infeasibility certificate (e012 or wstate N)")
    p.add_argument("target", choices=["e012", "wstate"])
    p.add_argument("N", nargs="?", type=int)

    p = add("trivial", cmd_trivial, "classify the trivially closed cases")
    for name in ("D", "d", "N"):
        p.add_argument(name, type=int)
    return parser


def render(report: dict, fmt: str) -> str:
    if fmt == "text":
        return f"{report['summary']}\n{report['verdict']}\n"
    if fmt == "csv":
        if report["command"] != "table":
            raise FormatError("csv output is only available for table")
        return _table_csv(report)
    return dumps(report)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report = args.func(args)
        if args.timing:
            report["wall_time_s"] = round(time.perf_counter() - start, 3)
        text = render(report, args.format)
    except (ValueError, OSError, GroebnerBudgetExceeded) as exc:
        print(f"umps {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    elapsed = time.perf_counter() - start
    print(f"{report['summary']} [{report['verdict']}] ({elapsed:.2f} s)", file=sys.stderr)
    return 0 if report["verdict"] == "PASS" else 1


if __name__ == "__main__":
    sys.exit(main())

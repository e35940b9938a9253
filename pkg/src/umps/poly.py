"""Multivariate polynomials, Groebner bases and ideal queries.

Polynomials are sparse dicts ``{exponent tuple: coefficient}`` tied to a
:class:`PolyRing` (variable names, coefficient domain, monomial order).
Groebner bases use Buchberger's algorithm with the normal selection strategy
and the Gebauer-Moeller installation of both Buchberger criteria.
Over prime fields the engine runs on plain ints.
"""

from __future__ import annotations

import heapq
import itertools
import math
import re
from fractions import Fraction
from operator import le
from typing import Iterable, Sequence

from .arith import MODULAR_PRIMES, PrimeFieldElem, QuadExt, crt, rational_reconstruct

Monomial = tuple[int, ...]


class GroebnerBudgetExceeded(RuntimeError):
    """Raised when a Groebner computation exceeds its reduction-step budget."""


# --------------------------------------------------------------------------
# monomial orders
# --------------------------------------------------------------------------


class MonomialOrder:
    """grevlex, lex, or a two-block elimination order ``elim(k)``.

    ``key(m)`` is increasing in the order.
    """

    def __init__(self, kind: str = "grevlex", split: int | None = None):
        if kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if kind == "elim" and (split is None or split < 1):
            raise ValueError("elimination order needs a split point >= 1")
        self.kind, self.split = kind, split
        if kind == "grevlex":
            self.key = _grevlex_key
        elif kind == "lex":
            self.key = tuple
        else:
            k = split
            self.key = lambda m: _grevlex_key(m[:k]) + _grevlex_key(m[k:])

    @classmethod
    def parse(cls, text: str) -> "MonomialOrder":
        text = text.strip()
        m = re.fullmatch(r"elim\((\d+)\)", text)
        if m:
            return cls("elim", int(m.group(1)))
        return cls(text)

    def __str__(self):
        return f"elim({self.split})" if self.kind == "elim" else self.kind

    def __eq__(self, other):
        return isinstance(other, MonomialOrder) and (self.kind, self.split) == (other.kind, other.split)

    def __hash__(self):
        return hash((self.kind, self.split))


def _grevlex_key(m: Monomial) -> tuple:
    return (sum(m),) + tuple(-e for e in reversed(m))


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


# --------------------------------------------------------------------------
# coefficient domains
# --------------------------------------------------------------------------


class _Rationals:
    name = "QQ"
    modulus = None

    def convert(self, x):
        if isinstance(x, QuadExt):
            if x.b != 0:
                raise ValueError(f"{x} is not rational")
            return x.a
        return Fraction(x)

    def parse(self, s: str):
        return Fraction(s.strip().strip("()"))

    def format(self, c) -> str:
        return str(c)

    def is_negative(self, c) -> bool:
        return c < 0


class _QuadRationals(_Rationals):
    name = "QQ(sqrt2)"

    def convert(self, x):
        return x if isinstance(x, QuadExt) else QuadExt(x)

    def parse(self, s: str):
        return QuadExt.parse(s)

    def format(self, c) -> str:
        return f"({c})" if c.a != 0 and c.b != 0 else str(c)

    def is_negative(self, c) -> bool:
        return c.a < 0 or (c.a == 0 and c.b < 0)


class _PrimeField:
    def __init__(self, p: int):
        self.modulus = p
        self.name = f"GF({p})"

    def convert(self, x):
        return x if isinstance(x, PrimeFieldElem) and x.p == self.modulus else PrimeFieldElem(x, self.modulus)

    def parse(self, s: str):
        return PrimeFieldElem(Fraction(s.strip().strip("()")), self.modulus)

    def format(self, c) -> str:
        return str(c.value)

    def is_negative(self, c) -> bool:
        return False

    def __eq__(self, other):
        return isinstance(other, _PrimeField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(self.modulus)


QQ = _Rationals()
QQ_SQRT2 = _QuadRationals()


def GF(p: int) -> _PrimeField:
    return _PrimeField(p)


def parse_domain(text: str):
    text = text.strip()
    if text == "QQ":
        return QQ
    if text == "QQ(sqrt2)":
        return QQ_SQRT2
    m = re.fullmatch(r"GF\((\d+)\)", text)
    if m:
        return GF(int(m.group(1)))
    raise ValueError(f"unknown coefficient domain {text!r}")


# --------------------------------------------------------------------------
# rings and polynomials
# --------------------------------------------------------------------------


class PolyRing:
    def __init__(self, names: Iterable[str], domain=QQ, order: MonomialOrder | str = GREVLEX):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")
        self.n = len(self.names)
        self.domain = domain
        self.order = MonomialOrder.parse(order) if isinstance(order, str) else order
        self._index = {v: i for i, v in enumerate(self.names)}

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.domain.name == other.domain.name
            and self.order == other.order
        )

    def __hash__(self):
        return hash((self.names, self.domain.name, self.order))

    def __repr__(self):
        return f"PolyRing({self.header()!r})"

    def header(self) -> str:
        return f"ring: {' '.join(self.names)} over {self.domain.name} order {self.order}"

    @classmethod
    def from_header(cls, line: str) -> "PolyRing":
        m = re.fullmatch(r"\s*ring:\s*(.*?)\s+over\s+(\S+)\s+order\s+(\S+)\s*", line)
        if not m:
            raise ValueError(f"bad ring header: {line!r}")
        return cls(m.group(1).split(), parse_domain(m.group(2)), MonomialOrder.parse(m.group(3)))

    def with_order(self, order) -> "PolyRing":
        return PolyRing(self.names, self.domain, order)

    def with_domain(self, domain) -> "PolyRing":
        return PolyRing(self.names, domain, self.order)

    def index(self, name: str) -> int:
        return self._index[name]

    def gens(self) -> list["MultiPoly"]:
        one = self.domain.convert(1)
        return [MultiPoly(self, {tuple(int(i == j) for j in range(self.n)): one}) for i in range(self.n)]

    def var(self, name: str) -> "MultiPoly":
        return self.gens()[self._index[name]]

    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {})

    def constant(self, c) -> "MultiPoly":
        return MultiPoly(self, {(0,) * self.n: self.domain.convert(c)})

    def parse(self, text: str) -> "MultiPoly":
        return parse_poly(self, text)


class MultiPoly:
    """Sparse polynomial; coefficients live in ``ring.domain``."""

    __slots__ = ("ring", "terms", "_sorted")

    def __init__(self, ring: PolyRing, terms: dict | None = None, _clean: bool = False):
        self.ring = ring
        if _clean:
            self.terms = terms
        else:
            conv = ring.domain.convert
            self.terms = {}
            for m, c in (terms or {}).items():
                c = conv(c)
                if c != 0:
                    self.terms[tuple(m)] = c
        self._sorted = None

    # -- construction helpers ------------------------------------------
    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        return self.ring.constant(other)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for m, c in o.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v == 0:
                    del out[m]
                else:
                    out[m] = v
        return MultiPoly(self.ring, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {m: -c for m, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = self.ring.domain.convert(other)
            if c == 0:
                return self.ring.zero()
            return MultiPoly(self.ring, {m: v * c for m, v in self.terms.items()}, _clean=True)
        o = self._lift(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly(self.ring, {m: c for m, c in out.items() if c != 0}, _clean=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self.ring.domain.convert(other)
        inv = 1 / c
        return self * inv

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.ring == other.ring and self.terms == other.terms
        try:
            return self == self.ring.constant(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- structure --------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Monomial, object]]:
        """Terms in decreasing monomial order."""
        if self._sorted is None:
            key = self.ring.order.key
            self._sorted = sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)
        return self._sorted

    def is_zero(self) -> bool:
        return not self.terms

    def lm(self) -> Monomial:
        return self.sorted_terms()[0][0]

    def lc(self):
        return self.sorted_terms()[0][1]

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def monic(self) -> "MultiPoly":
        return self / self.lc() if self.terms else self

    def degree_in(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=-1)

    def __call__(self, *point):
        return evaluate_poly(self, point)

    def map_coefficients(self, fn, ring: PolyRing) -> "MultiPoly":
        return MultiPoly(ring, {m: fn(c) for m, c in self.terms.items()})

    def restrict(self, fixed: dict[int, object], ring: PolyRing) -> "MultiPoly":
        """Substitute scalars for the variables in ``fixed``; the rest map to ``ring`` in order."""
        keep = [i for i in range(self.ring.n) if i not in fixed]
        if len(keep) != ring.n:
            raise ValueError("target ring has the wrong number of variables")
        out = {}
        for m, c in self.terms.items():
            v = c
            for i, val in fixed.items():
                if m[i]:
                    v = v * val ** m[i]
            if v == 0:
                continue
            mm = tuple(m[i] for i in keep)
            out[mm] = out[mm] + v if mm in out else v
        return MultiPoly(ring, out)

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"MultiPoly({format_poly(self)!r})"


def evaluate_poly(f: MultiPoly, point: Sequence):
    """Exact evaluation at a point whose coordinates follow the ring's variables."""
    if len(point) != f.ring.n:
        raise ValueError(f"point has {len(point)} coordinates, ring has {f.ring.n} variables")
    powers: dict[tuple[int, int], object] = {}
    total = None
    for m, c in f.terms.items():
        v = c
        for i, e in enumerate(m):
            if e:
                key = (i, e)
                pw = powers.get(key)
                if pw is None:
                    pw = point[i] ** e
                    powers[key] = pw
                v = v * pw
        total = v if total is None else total + v
    return 0 if total is None else total


# --------------------------------------------------------------------------
# text format
# --------------------------------------------------------------------------


def _format_monomial(names, m) -> str:
    return "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, m) if e)


def format_poly(f: MultiPoly) -> str:
    dom = f.ring.domain
    if not f.terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(f.sorted_terms()):
        neg = dom.is_negative(c)
        mag = -c if neg else c
        mono = _format_monomial(f.ring.names, m)
        cs = dom.format(mag)
        if mono:
            body = mono if cs == "1" else f"{cs}*{mono}"
        else:
            body = cs
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def _split_top(text: str, seps: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in seps:
            parts.append("".join(cur))
            cur = [ch]
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_poly(ring: PolyRing, text: str) -> MultiPoly:
    """Parse the text format produced by :func:`format_poly`."""
    s = text.replace("−", "-").replace(" ", "")
    if not s:
        raise ValueError("empty polynomial")
    # split into signed terms at top-level +/- not following an operator
    terms, depth, start = [], 0, 0
    for i, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and ch in "+-" and i > 0 and s[i - 1] not in "*/^(":
            terms.append(s[start:i])
            start = i
    terms.append(s[start:])
    dom = ring.domain
    out: dict = {}
    for t in terms:
        sign = 1
        while t and t[0] in "+-":
            if t[0] == "-":
                sign = -sign
            t = t[1:]
        if not t:
            raise ValueError(f"dangling sign in {text!r}")
        coeff = dom.convert(sign)
        mono = [0] * ring.n
        for factor in (p.lstrip("*") for p in _split_top(t, "*")):
            if not factor:
                continue
            name, _, exp = factor.partition("^")
            if name in ring._index:
                mono[ring._index[name]] += int(exp) if exp else 1
            else:
                if exp:
                    raise ValueError(f"exponent on coefficient {factor!r}")
                coeff = coeff * dom.parse(factor)
        m = tuple(mono)
        out[m] = out[m] + coeff if m in out else coeff
    return MultiPoly(ring, out)


def dump_polys(ring: PolyRing, polys: Sequence[MultiPoly], comments: Sequence[str] = ()) -> str:
    lines = [ring.header()]
    lines += [f"# {c}" for c in comments]
    lines += [format_poly(p) for p in polys]
    return "\n".join(lines) + "\n"


def load_polys(text: str) -> tuple[PolyRing, list[MultiPoly]]:
    """Read a header line followed by one polynomial per line ('#' starts a comment)."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ValueError("empty polynomial file")
    ring = PolyRing.from_header(lines[0])
    return ring, [parse_poly(ring, ln) for ln in lines[1:]]


# --------------------------------------------------------------------------
# Groebner engine
# --------------------------------------------------------------------------


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(map(le, a, b))


class _Packing:
    """Monomials packed into one int whose integer order is the monomial order.

    Each variable gets a bit field holding e_i (lex) or BIAS - e_i (graded
    blocks, so that a smaller last exponent ranks higher); graded blocks add a
    degree field above their variables. The packing is affine in the exponent
    vector, so products are ``a + b - one`` and quotients ``a - b + one``.
    A spare guard bit per variable field makes divisibility a single
    subtraction.
    """

    WIDTH = 12  # bits per variable field, including the guard bit
    BIAS = (1 << (WIDTH - 1)) - 1  # largest exponent representable
    DEG_WIDTH = 20

    def __init__(self, n: int, order: MonomialOrder):
        self.n = n
        W = self.WIDTH
        if order.kind == "lex":
            blocks, graded = [list(range(n))], False
        elif order.kind == "grevlex":
            blocks, graded = [list(range(n))], True
        else:
            k = order.split
            blocks, graded = [list(range(k)), list(range(k, n))], True
        self.graded = graded
        self.shift = [0] * n
        self.deg_shift: list[tuple[int, list[int]]] = []
        pos = 0
        value_mask = guard = 0
        if graded:
            # least significant block first; within a block the first variable is lowest
            for block in reversed(blocks):
                for i in block:
                    self.shift[i] = pos
                    value_mask |= ((1 << (W - 1)) - 1) << pos
                    guard |= 1 << (pos + W - 1)
                    pos += W
                self.deg_shift.append((pos, block))
                pos += self.DEG_WIDTH
        else:
            for i in reversed(range(n)):
                self.shift[i] = pos
                value_mask |= ((1 << (W - 1)) - 1) << pos
                guard |= 1 << (pos + W - 1)
                pos += W
        self.value_mask, self.guard = value_mask, guard
        self.one = self.pack((0,) * n)

    def pack(self, m: Monomial) -> int:
        W, B = self.WIDTH, self.BIAS
        if any(e > B for e in m):
            raise OverflowError(f"exponent above {B}")
        key = 0
        for i, e in enumerate(m):
            key |= (B - e if self.graded else e) << self.shift[i]
        for s, block in self.deg_shift:
            key |= sum(m[i] for i in block) << s
        return key

    def unpack(self, key: int) -> Monomial:
        mask = (1 << (self.WIDTH - 1)) - 1
        if self.graded:
            return tuple(self.BIAS - ((key >> s) & mask) for s in self.shift)
        return tuple((key >> s) & mask for s in self.shift)

    def divides(self, a: int, b: int) -> bool:
        vm, g = self.value_mask, self.guard
        if self.graded:
            return (((a & vm) | g) - (b & vm)) & g == g
        return (((b & vm) | g) - (a & vm)) & g == g

    def lcm(self, a: int, b: int) -> int:
        return self.pack(tuple(map(max, self.unpack(a), self.unpack(b))))


class _Engine:
    """One Buchberger run on packed monomials.

    Polynomials are dicts {packed monomial: coefficient}; coefficients are
    field objects, or ints modulo ``p`` when ``p`` is set. Basis entries are
    monic and stored as (lm, tail) with the tail sorted decreasingly.
    """

    def __init__(self, n: int, order: MonomialOrder, p: int | None, budget: int | None, full: bool = True):
        self.n, self.p, self.budget, self.full = n, p, budget, full
        self.pk = _Packing(n, order)
        self.steps = 0

    # -- conversion ---------------------------------------------------------
    def pack_poly(self, f: dict) -> dict:
        pack = self.pk.pack
        return {pack(m): c for m, c in f.items()}

    def unpack_entry(self, entry) -> tuple[Monomial, list]:
        lm, tail = entry
        up = self.pk.unpack
        return up(lm), [(up(m), c) for m, c in tail]

    # -- arithmetic -----------------------------------------------------------
    def monic(self, f: dict) -> tuple[int, list]:
        lm = max(f)
        lc = f[lm]
        if self.p:
            p = self.p
            inv = pow(lc, -1, p)
            items = [(m, c * inv % p) for m, c in f.items() if m != lm]
        elif lc == 1:
            items = [(m, c) for m, c in f.items() if m != lm]
        else:
            inv = Fraction(1, lc) if isinstance(lc, int) else 1 / lc
            items = [(m, c * inv) for m, c in f.items() if m != lm]
        items.sort(reverse=True)
        return lm, items

    def normal_form(self, f: dict, basis: list, full: bool | None = None) -> dict:
        """Reduce ``f`` (consumed) modulo monic basis entries (lm, tail)."""
        full = self.full if full is None else full
        p = self.p
        vm, g = self.pk.value_mask, self.pk.guard
        graded = self.pk.graded
        # precomputed divisor tests: lead fields with guard bits set
        if graded:
            probes = [((lm & vm) | g, lm, tail) for lm, tail in basis]
        else:
            probes = [(lm & vm, lm, tail) for lm, tail in basis]
        heap = [-m for m in f]
        heapq.heapify(heap)
        rem = {}
        budget = self.budget
        while heap:
            m = -heapq.heappop(heap)
            c = f.pop(m, 0)
            if not c:
                continue
            mv = m & vm
            hit = None
            if graded:
                for probe, lm, tail in probes:
                    if (probe - mv) & g == g:
                        hit = (lm, tail)
                        break
            else:
                mg = mv | g
                for probe, lm, tail in probes:
                    if (mg - probe) & g == g:
                        hit = (lm, tail)
                        break
            if hit is None:
                rem[m] = c
                if not full:
                    for mm, cc in f.items():
                        if cc:
                            rem[mm] = cc
                    return rem
                continue
            self.steps += 1
            if budget is not None and self.steps > budget:
                raise GroebnerBudgetExceeded(f"exceeded {budget} reduction steps")
            lm, tail = hit
            q = m - lm
            get = f.get
            if p:
                for gm, gc in tail:
                    nm = gm + q
                    v = get(nm)
                    if v is None:
                        f[nm] = (-c * gc) % p
                        heapq.heappush(heap, -nm)
                    else:
                        f[nm] = (v - c * gc) % p
            else:
                for gm, gc in tail:
                    nm = gm + q
                    v = get(nm)
                    if v is None:
                        f[nm] = -c * gc
                        heapq.heappush(heap, -nm)
                    else:
                        f[nm] = v - c * gc
        return rem

    def spoly(self, g1, g2) -> dict:
        (l1, t1), (l2, t2) = g1, g2
        L = self.pk.lcm(l1, l2)
        q1, q2 = L - l1, L - l2
        out = {m + q1: c for m, c in t1}
        p = self.p
        for m, c in t2:
            nm = m + q2
            v = out.get(nm)
            if p:
                out[nm] = ((v or 0) - c) % p
            else:
                out[nm] = -c if v is None else v - c
        return {m: c for m, c in out.items() if c}

    # -- Buchberger -----------------------------------------------------------
    def run(self, polys: list[dict]) -> list[tuple[Monomial, list]]:
        """Reduced Groebner basis of dict polynomials with tuple monomials."""
        pk = self.pk
        divides, lcm, one = pk.divides, pk.lcm, pk.one
        entries: list[tuple[int, list]] = []
        G: list[int] = []
        pairs: dict[tuple[int, int], int] = {}
        queue: list = []
        unit = [((0,) * self.n, [])]

        def coprime(a, b):
            return lcm(a, b) == a + b - one

        def install(h) -> None:
            nonlocal G
            idx = len(entries)
            entries.append(h)
            lh = h[0]
            C = [(gi, lcm(entries[gi][0], lh)) for gi in G]
            D = []
            while C:
                g1, L1 = C.pop(0)
                if coprime(entries[g1][0], lh) or (
                    not any(divides(L2, L1) for _, L2 in C) and not any(divides(L2, L1) for _, L2 in D)
                ):
                    D.append((g1, L1))
            E = [(gi, L) for gi, L in D if not coprime(entries[gi][0], lh)]
            for (i, j), L in list(pairs.items()):
                if divides(lh, L) and lcm(entries[i][0], lh) != L and lcm(entries[j][0], lh) != L:
                    del pairs[(i, j)]
            for gi, L in E:
                pairs[(gi, idx)] = L
                heapq.heappush(queue, (L, gi, idx))
            G = [gi for gi in G if not divides(lh, entries[gi][0])] + [idx]

        def active():
            return [entries[i] for i in G]

        packed = [self.pack_poly(f) for f in polys if f]
        for f in sorted(packed, key=max):
            h = self.normal_form(f, active())
            if not h:
                continue
            h = self.monic(h)
            if h[0] == one:
                return unit
            install(h)

        while queue:
            _, i, j = heapq.heappop(queue)
            if pairs.pop((i, j), None) is None:
                continue
            h = self.normal_form(self.spoly(entries[i], entries[j]), active())
            if not h:
                continue
            h = self.monic(h)
            if h[0] == one:
                return unit
            install(h)

        # interreduce the (already minimal) basis
        basis = active()
        reduced = []
        for k, (lm, tail) in enumerate(basis):
            others = basis[:k] + basis[k + 1:]
            f = dict(tail)
            f[lm] = 1
            reduced.append(self.monic(self.normal_form(f, others, full=True)))
        reduced.sort(reverse=True)
        return [self.unpack_entry(e) for e in reduced]


def _to_raw(f: MultiPoly, p: int | None) -> dict:
    if p is None:
        return dict(f.terms)
    out = {}
    for m, c in f.terms.items():
        if isinstance(c, PrimeFieldElem):
            v = c.value
        else:
            c = Fraction(c)
            if c.denominator % p == 0:
                raise ZeroDivisionError(f"denominator divisible by {p}")
            v = c.numerator * pow(c.denominator, -1, p) % p
        if v:
            out[m] = v
    return out


# --------------------------------------------------------------------------
# ideals
# --------------------------------------------------------------------------


class Ideal:
    """Ideal generated by polynomials of a common ring; zero generators are dropped."""

    def __init__(self, generators: Iterable[MultiPoly], ring: PolyRing | None = None):
        gens = list(generators)
        if ring is None:
            if not gens:
                raise ValueError("ring required for an ideal without generators")
            ring = gens[0].ring
        for g in gens:
            if g.ring != ring:
                raise ValueError("generators from different rings")
        self.ring = ring
        self.generators = [g for g in gens if g.terms]
        self._gb: dict[MonomialOrder, list[MultiPoly]] = {}

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"

    @property
    def basis(self) -> list[MultiPoly] | None:
        """Cached reduced Groebner basis for the ring's own order, if computed."""
        return self._gb.get(self.ring.order)

    def is_zero(self) -> bool:
        return not self.generators

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def is_unit(self) -> bool:
        gb = groebner(self).basis
        return len(gb) == 1 and gb[0].is_constant()


def groebner(I: Ideal, order: MonomialOrder | str | None = None, budget: int | None = None) -> Ideal:
    """Reduced Groebner basis; returns an Ideal whose generators are the basis (cached)."""
    if order is None:
        order = I.ring.order
    elif isinstance(order, str):
        order = MonomialOrder.parse(order)
    ring = I.ring if order == I.ring.order else I.ring.with_order(order)
    cached = I._gb.get(order)
    if cached is None:
        p = I.ring.domain.modulus
        engine = _Engine(ring.n, order, p, budget)
        raw = engine.run([_to_raw(g, p) for g in I.generators])
        conv = ring.domain.convert
        cached = []
        for lm, tail in raw:
            terms = {lm: conv(1)}
            for m, c in tail:
                terms[m] = conv(c)
            cached.append(MultiPoly(ring, terms))
        I._gb[order] = cached
    out = Ideal([g.map_coefficients(lambda c: c, ring) if g.ring != ring else g for g in cached], ring)
    out._gb[order] = out.generators
    return out


def reduce(f: MultiPoly, I: Ideal) -> MultiPoly:
    """Normal form of f modulo the cached Groebner basis of I."""
    gb = I._gb.get(f.ring.order)
    if gb is None:
        raise ValueError("ideal has no cached Groebner basis for this order; call groebner first")
    p = f.ring.domain.modulus
    engine = _Engine(f.ring.n, f.ring.order, p, None)
    basis = [engine.monic(engine.pack_poly(_to_raw(g, p))) for g in gb]
    raw = engine.normal_form(engine.pack_poly(_to_raw(f, p)), basis, full=True)
    return MultiPoly(f.ring, {engine.pk.unpack(m): c for m, c in raw.items()})


def leading_monomials(I: Ideal) -> list[Monomial]:
    return [g.lm() for g in groebner(I).generators]


def _dimension_from_leads(leads: list[Monomial], n: int) -> int:
    if any(sum(m) == 0 for m in leads):
        return -1
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in leads]
    for size in range(n, -1, -1):
        for S in itertools.combinations(range(n), size):
            s = frozenset(S)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def ideal_dimension(I: Ideal, method: str = "groebner", primes: Sequence[int] | None = None) -> int:
    """Krull dimension of the affine variety V(I); -1 for the unit ideal.

    ``method="charts"`` (homogeneous ideals only) decides the affine cone
    dimension from the projective pieces {x_1 = ... = x_{i-1} = 0, x_i = 1}.
    With ``primes`` the Groebner computations run modulo each prime and the
    answers must agree.
    """
    if method == "charts":
        if not I.is_homogeneous():
            raise ValueError("chart method needs a homogeneous ideal")
        return _cone_dimension(I, primes)
    if primes:
        dims = {_dimension_from_leads(leading_monomials(modular_image(I, q)), I.ring.n) for q in primes}
        if len(dims) != 1:
            raise ArithmeticError(f"modular dimensions disagree: {dims}")
        return dims.pop()
    if I.is_zero():
        return I.ring.n
    return _dimension_from_leads(leading_monomials(I), I.ring.n)


def _cone_dimension(I: Ideal, primes) -> int:
    n = I.ring.n
    if I.is_zero():
        return n
    best = -1
    for i in range(n):
        fixed = {j: 0 for j in range(i)}
        fixed[i] = 1
        names = I.ring.names[i + 1:]
        if not names:
            sub_ring = PolyRing(["_"], I.ring.domain, I.ring.order)
            gens = [g.restrict(fixed, PolyRing([], I.ring.domain, I.ring.order)) for g in I.generators]
            if any(g.terms for g in gens):
                continue
            best = max(best, 0)
            continue
        sub_ring = PolyRing(names, I.ring.domain, I.ring.order)
        J = Ideal([g.restrict(fixed, sub_ring) for g in I.generators], sub_ring)
        best = max(best, ideal_dimension(J, primes=primes))
    return 0 if best < 0 else best + 1


def quotient_degree(I: Ideal, primes: Sequence[int] | None = None) -> int:
    """Number of standard monomials (solutions with multiplicity) of a zero-dimensional ideal."""
    if primes:
        degs = {quotient_degree(modular_image(I, q)) for q in primes}
        if len(degs) != 1:
            raise ArithmeticError(f"modular degrees disagree: {degs}")
        return degs.pop()
    leads = leading_monomials(I)
    n = I.ring.n
    if _dimension_from_leads(leads, n) != 0:
        raise ValueError("ideal is not zero-dimensional")
    seen = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        m = frontier.pop()
        for i in range(n):
            mm = m[:i] + (m[i] + 1,) + m[i + 1:]
            if mm not in seen and not any(_divides(l, mm) for l in leads):
                seen.add(mm)
                frontier.append(mm)
    return len(seen)


def vanishes_at(I: Ideal, point: Sequence) -> bool:
    return all(evaluate_poly(g, point) == 0 for g in I.generators)


def is_groebner(polys: Sequence[MultiPoly]) -> bool:
    """Buchberger criterion: every S-polynomial reduces to zero."""
    if not polys:
        return True
    ring = polys[0].ring
    p = ring.domain.modulus
    engine = _Engine(ring.n, ring.order, p, None)
    basis = [engine.monic(engine.pack_poly(_to_raw(g, p))) for g in polys]
    for a, b in itertools.combinations(basis, 2):
        if engine.normal_form(engine.spoly(a, b), basis):
            return False
    return True


# --------------------------------------------------------------------------
# modular images and lifting
# --------------------------------------------------------------------------


def modular_image(I: Ideal, p: int) -> Ideal:
    """I with rational coefficients reduced modulo p."""
    ring = I.ring.with_domain(GF(p))
    return Ideal([MultiPoly(ring, _to_raw(g, p)) for g in I.generators], ring)


def groebner_modular(
    I: Ideal, order=None, primes: Sequence[int] = MODULAR_PRIMES, max_primes: int = 12
) -> Ideal:
    """Groebner basis over Q via modular images, CRT and rational reconstruction.

    The lifted basis is accepted only if it passes the Buchberger criterion
    over Q and every generator of I reduces to zero modulo it.
    """
    from .arith import prev_prime

    ring = I.ring if order is None else I.ring.with_order(order)
    J = Ideal(I.generators and [g.map_coefficients(lambda c: c, ring) for g in I.generators], ring)
    used: list[int] = []
    images: list[list[MultiPoly]] = []
    candidates = list(primes)
    q = min(primes)
    while len(used) < max_primes:
        if not candidates:
            q = prev_prime(q)
            candidates.append(q)
        p = candidates.pop(0)
        try:
            gb = groebner(modular_image(J, p)).generators
        except ZeroDivisionError:
            continue
        if images and [g.lm() for g in gb] != [g.lm() for g in images[0]]:
            # unlucky prime: keep the images with the larger leading-term set
            continue
        used.append(p)
        images.append(gb)
        lifted = _lift(images, used, ring)
        if lifted is not None and is_groebner(lifted):
            check = Ideal(lifted, ring)
            check._gb[ring.order] = lifted
            if all(not reduce(g, check).terms for g in J.generators):
                J._gb[ring.order] = lifted
                return check
    raise ArithmeticError("modular Groebner lifting did not stabilise")


def _lift(images, moduli, ring) -> list[MultiPoly] | None:
    M = math.prod(moduli)
    bound = math.isqrt(M // 2) - 1
    if bound < 1:
        return None
    out = []
    for k in range(len(images[0])):
        terms = {}
        monos = set().union(*(img[k].terms for img in images))
        for m in monos:
            residues = [img[k].terms[m].value if m in img[k].terms else 0 for img in images]
            x, _ = crt(residues, moduli)
            r = rational_reconstruct(x, bound, M)
            if r is None:
                return None
            terms[m] = r
        out.append(MultiPoly(ring, terms))
    return out

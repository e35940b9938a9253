"""Text and JSON formats: scalars, cyclic tensors and matrix tuple files.

Scalar strings:
    rationals  "3", "-7/2"
    QQ(sqrt2)  "1+2*sqrt2", "sqrt2", "-1/2*sqrt2"
    complex    "0.5+1.25j", "2.0" (anything containing '.', 'e' or 'j')
"""

from __future__ import annotations

import json
from fractions import Fraction

from .arith import QuadExt
from .core import MatrixTuple
from .necklaces import CyclicTensor, canonicalize


class FormatError(ValueError):
    """Malformed input; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


def parse_scalar(text):
    if isinstance(text, bool):
        raise FormatError(f"not a scalar: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        return text
    s = str(text).strip().replace(" ", "")
    if not s:
        raise FormatError("empty scalar")
    try:
        if "sqrt2" in s:
            return QuadExt.parse(s)
        if "j" in s:
            return complex(s)
        if any(ch in s for ch in ".eE") and "/" not in s:
            return float(s)
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad scalar {text!r}: {exc}") from None


def format_scalar(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, QuadExt):
        return str(x)
    if isinstance(x, complex):
        if x.imag == 0:
            return repr(x.real)
        return repr(x).strip("()")
    if isinstance(x, float):
        return repr(x)
    return str(x)


def tensor_to_json(T: CyclicTensor) -> dict:
    return {"N": T.N, "d": T.d, "coords": {k: format_scalar(v) for k, v in T.as_dict().items()}}


def tensor_from_json(obj: dict) -> CyclicTensor:
    try:
        N, d, coords = int(obj["N"]), int(obj["d"]), obj["coords"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"tensor JSON needs N, d and coords ({exc})") from None
    T = CyclicTensor.zero(N, d, Fraction(0))
    for key, val in coords.items():
        word = tuple(int(ch) for ch in key)
        if len(word) != N or any(s >= d for s in word):
            raise FormatError(f"coordinate {key!r} is not a word of length {N} over {d} letters")
        nk = canonicalize(word, d)
        if nk.word != word:
            raise FormatError(f"coordinate {key!r} is not canonical (use {nk})")
        T[nk] = parse_scalar(val)
    return T


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, exc.lineno, exc.colno) from None


def read_tensor(text: str) -> CyclicTensor:
    return tensor_from_json(_loads(text))


def tuple_from_json(obj) -> MatrixTuple:
    """``{"matrices": [M_0, M_1, ...]}`` with each M_i a list of rows of scalar strings."""
    if isinstance(obj, dict):
        mats = obj.get("matrices")
    else:
        mats = obj
    if not isinstance(mats, list) or not mats:
        raise FormatError("expected a non-empty list of matrices under 'matrices'")
    try:
        parsed = [[[parse_scalar(x) for x in row] for row in M] for M in mats]
        return MatrixTuple(parsed)
    except TypeError:
        raise FormatError("matrices must be lists of rows") from None


def read_tuple(text: str) -> MatrixTuple:
    return tuple_from_json(_loads(text))


def tuple_to_json(M: MatrixTuple) -> dict:
    return {"matrices": [[[format_scalar(x) for x in row] for row in M[i]] for i in range(M.d)]}


def dumps(obj) -> str:
    """Deterministic JSON (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


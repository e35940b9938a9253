"""Bundled polynomial data (hypersurfaces, orbit ideals, example systems)."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .poly import MultiPoly, PolyRing, load_polys

GOLDEN_NAMES = (
    "f224",
    "I1",
    "I2",
    "I3",
    "J",
    "subspace_324",
    "e012_jordan_system",
    "e012_diagonal_system",
)


@lru_cache(maxsize=None)
def golden_text(name: str) -> str:
    if name not in GOLDEN_NAMES:
        raise KeyError(f"no bundled data named {name!r}")
    return resources.files("umps").joinpath("data", f"{name}.txt").read_text()


def load_golden(name: str) -> tuple[PolyRing, list[MultiPoly]]:
    """Parse a bundled file; a fresh copy on every call."""
    return load_polys(golden_text(name))

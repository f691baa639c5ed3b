"""Exhaustive enumeration of full genus-preserving weldings on a rational grid.

A full genus-preserving welding of one border circle glues its arcs in a
non-crossing pattern. When every vertex preimage lies on a grid of ``D``
equal steps, the welding is a non-crossing perfect matching of the ``D`` grid
segments, each segment glued to its mate with reversed orientation. The weld
tree's end-vertices are exactly the fold points between two mated neighbours,
so the welding is regular iff all such points are border zeros and the
surface has no interior poles.

This module is deliberately independent of :mod:`weldlab.welding`: it only
shares the canonical key normal form so its results can be compared with
instruction keys.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import ValidationError
from .kernels import BACKEND, enumerate_regular_matchings
from .surface import SurfaceSignature, format_length, require_valid
from .welding import normalize_pieces, pieces_key

MAX_SEGMENTS = 32


@dataclass(frozen=True)
class EnumerationTranscript:
    component: str
    segments: int
    grid_step: Fraction
    backend: str
    candidates: int
    regular: int
    keys: tuple[str, ...]
    matchings: tuple[tuple[int, ...], ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "component": self.component,
            "segments": self.segments,
            "grid_step": format_length(self.grid_step),
            "backend": self.backend,
            "candidates": self.candidates,
            "regular": self.regular,
            "distinct_keys": len(self.keys),
            "keys": list(self.keys),
        }


def matching_key(sig: SurfaceSignature, cid: str, mate, step: Fraction) -> str:
    raw = [(cid, i * step, step, cid, (i + j + 1) * step) for i, j in enumerate(mate)]
    return pieces_key(normalize_pieces(sig, raw))


def enumerate_regular_weldings(sig: SurfaceSignature, cid: str, grid_denominator: int = 24,
                               kernel=None) -> EnumerationTranscript:
    """Enumerate every grid welding of component ``cid`` and keep the regular ones.

    The grid splits the component into ``grid_denominator`` equal steps; all
    existing border points must sit on it.
    """
    require_valid(sig)
    comp = sig.component(cid)
    d = int(grid_denominator)
    if d <= 0:
        raise ValidationError("grid denominator must be positive")
    if d > MAX_SEGMENTS:
        raise ValidationError(f"grid of {d} segments exceeds the enumeration limit {MAX_SEGMENTS}")
    step = comp.length / d
    leaf_ok = [False] * d
    for pos, pt in zip(comp.positions(), comp.points):
        k = pos / step
        if k.denominator != 1:
            raise ValidationError(
                f"point {pt.label!r} at {format_length(pos)} is off the grid of step "
                f"{format_length(step)}"
            )
        leaf_ok[int(k)] = pt.order >= 2
    if sig.has_interior_poles():
        leaf_ok = [False] * d
    run = kernel or enumerate_regular_matchings
    total, kept = run(d, leaf_ok)
    if sig.has_interior_poles():
        kept = []
    keys = sorted({matching_key(sig, cid, mate, step) for mate in kept})
    backend = BACKEND if kernel is None else getattr(kernel, "__module__", "custom")
    return EnumerationTranscript(cid, d, step, backend, total, len(kept), tuple(keys),
                                 tuple(kept))

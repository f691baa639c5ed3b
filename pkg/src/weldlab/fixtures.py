"""Named signatures and instructions used by the tests, scenarios and docs."""

from __future__ import annotations

from fractions import Fraction as Q

from .surface import ArcRange, InteriorPoint, SurfaceSignature, make_component
from .welding import WeldingInstruction


def _one_component(genus, interior, entries, cid="C") -> SurfaceSignature:
    return SurfaceSignature(
        genus, tuple(InteriorPoint(label, k) for label, k in interior),
        (make_component(cid, entries),),
    )


def joukowski() -> SurfaceSignature:
    """Disk with a fourth-order pole inside and two border zeros splitting it evenly."""
    return _one_component(0, [("inf", -4)], [("Zp", 2, 4), ("Zm", 2, 4)])


def joukowski_instruction() -> WeldingInstruction:
    return WeldingInstruction(((ArcRange("C", 0, 1), ArcRange("C", 1, 0)),))


def octant_disk() -> SurfaceSignature:
    """Disk with a double pole and eight equal border arcs, no border zeros."""
    return _one_component(0, [("o", -2)], [(f"P{k}", 0, Q(1, 8)) for k in range(8)])


def octant_torus_instruction() -> WeldingInstruction:
    # arc a_k runs from P_{k-1} to P_k; glue a1~a6, a2~a5, a3~a8, a4~a7
    def arc(k):
        return ArcRange("C", k - 1, k % 8)

    return WeldingInstruction(tuple((arc(i), arc(j)) for i, j in ((1, 6), (2, 5), (3, 8), (4, 7))))


def slit_torus(slit=Q(1, 2)) -> SurfaceSignature:
    return _one_component(1, [], [("p", 2, slit), ("q", 2, slit)])


def y_three() -> SurfaceSignature:
    """Three zeros with gaps 2/5, 7/20, 1/4; no gap reaches half the circle."""
    return _one_component(2, [("z", 3)], [("a", 2, Q(2, 5)), ("b", 2, Q(7, 20)), ("c", 2, Q(1, 4))])


def exceptional_split() -> SurfaceSignature:
    """Four trajectories (3/10, 3/10, 1/5, 1/5): exceptional, with an equal split."""
    return _one_component(2, [("z", 2)], [
        ("a", 2, Q(3, 10)), ("b", 2, Q(3, 10)), ("c", 2, Q(1, 5)), ("d", 2, Q(1, 5)),
    ])


def exceptional_fold() -> SurfaceSignature:
    """Four trajectories (3/10, 1/4, 1/5, 1/4): exceptional, no equal split."""
    return _one_component(2, [("z", 2)], [
        ("a", 2, Q(3, 10)), ("b", 2, Q(1, 4)), ("c", 2, Q(1, 5)), ("d", 2, Q(1, 4)),
    ])


def unique_i_four() -> SurfaceSignature:
    """Four zeros but one trajectory of exactly half the length."""
    return _one_component(2, [("z", 2)], [
        ("a", 2, Q(1, 2)), ("b", 2, Q(1, 5)), ("c", 2, Q(1, 5)), ("d", 2, Q(1, 10)),
    ])


def long_trajectory() -> SurfaceSignature:
    """Two zeros with a trajectory of 2/3 > 1/2: the length condition fails."""
    return _one_component(1, [], [("p", 2, Q(2, 3)), ("q", 2, Q(1, 3))])


def single_zero() -> SurfaceSignature:
    return _one_component(1, [("z", 1)], [("p", 2, 1)])


def zero_free() -> SurfaceSignature:
    """Annulus-type component with no border zero (one closed trajectory)."""
    return _one_component(1, [("z", 1), ("w", 1)], [("m", 0, 1)])


SIGNATURES = {
    "joukowski": joukowski,
    "octant_disk": octant_disk,
    "slit_torus": slit_torus,
    "y_three": y_three,
    "exceptional_split": exceptional_split,
    "exceptional_fold": exceptional_fold,
    "unique_i_four": unique_i_four,
    "long_trajectory": long_trajectory,
    "single_zero": single_zero,
    "zero_free": zero_free,
}

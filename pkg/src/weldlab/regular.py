"""Border length condition, regular full weldings and their uniqueness classes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, NamedTuple

from .errors import BLCViolated, NotExceptional, NotIShaped, ValidationError
from .surface import (
    BorderComponent,
    SurfaceSignature,
    Trajectory,
    as_length,
    require_valid,
    trajectories,
)
from .welding import (
    WeldingInstruction,
    WeldOutcome,
    instruction_from_spans,
    spans_of,
    weld,
)

NOT_IN_AL = "NotInAL"
UNIQUE_I = "UniqueIShaped"
UNIQUE_Y = "UniqueYShaped"
EXCEPTIONAL = "ExceptionalContinuum"


class BLCResult(NamedTuple):
    ok: bool
    offending: Trajectory | None


@dataclass(frozen=True)
class ComponentClassification:
    component: str
    tag: str
    zeros: tuple[str, ...]
    trajectory_lengths: tuple[Fraction, ...]
    length: Fraction


def _components(sig: SurfaceSignature, comps: Iterable[str] | None) -> list[BorderComponent]:
    if comps is None:
        return list(sig.border)
    return [sig.component(cid) for cid in comps]


def component_blc(comp: BorderComponent) -> BLCResult:
    trajs, closed = trajectories(comp)
    if closed:
        return BLCResult(False, trajs[0])
    half = comp.length / 2
    worst = max(trajs, key=lambda t: t.length)
    return BLCResult(worst.length <= half, None if worst.length <= half else worst)


def check_blc(sig: SurfaceSignature, comps: Iterable[str] | None = None) -> dict[str, BLCResult]:
    """Per-component border length condition: every trajectory at most half the component."""
    require_valid(sig)
    return {c.id: component_blc(c) for c in _components(sig, comps)}


def classify_component(sig: SurfaceSignature, cid: str) -> ComponentClassification:
    require_valid(sig)
    comp = sig.component(cid)
    trajs, closed = trajectories(comp)
    zeros = tuple(comp.points[i].label for i in comp.zeros())
    lengths = tuple(t.length for t in trajs)
    half = comp.length / 2
    if closed or max(lengths) > half:
        tag = NOT_IN_AL
    elif half in lengths:
        tag = UNIQUE_I
    elif len(trajs) == 3:
        tag = UNIQUE_Y
    else:
        tag = EXCEPTIONAL
    return ComponentClassification(cid, tag, zeros, lengths, comp.length)


# -- constructions on one component, in position coordinates -------------------

def _zero_positions(comp: BorderComponent) -> list[tuple[Fraction, str]]:
    pos = comp.positions()
    return [(pos[i], comp.points[i].label) for i in comp.zeros()]


def _forward(a: Fraction, b: Fraction, total: Fraction) -> Fraction:
    return (b - a) % total


def _equal_split(zeros, total):
    half = total / 2
    found = []
    for (pa, la), (pb, lb) in combinations(zeros, 2):
        if _forward(pa, pb, total) == half:
            found.append((min(la, lb), max(la, lb), pa, pb))
    if not found:
        return None
    _, _, pa, pb = min(found)
    return pa, pb


def _y_points(zeros, total):
    """Pick three zeros cutting the component into arcs shorter than half."""
    best = None
    for (pa, la), (pb, lb) in combinations(zeros, 2):
        d = _forward(pa, pb, total)
        short, start, end = (d, pa, pb) if d < total - d else (total - d, pb, pa)
        rank = (-short, min(la, lb), max(la, lb))
        if best is None or rank < best[0]:
            best = (rank, start, end)
    _, start, end = best
    span = _forward(start, end, total)
    # zeros off the closed shorter arc, in index (orientation) order
    off = [p for p, _ in zeros if _forward(start, p, total) > span]
    third = off[0]
    return sorted((start, end, third))


def _i_spans(cid, total, p, q):
    half = total / 2
    return [((cid, p, half), (cid, q, half))]


def _y_spans(cid, total, points):
    u = sorted(points)
    spans = []
    for j in range(3):
        a, b = u[(j + 1) % 3], u[(j + 2) % 3]
        opposite = _forward(a, b, total)
        ell = total / 2 - opposite
        spans.append(((cid, (u[j] - ell) % total, ell), (cid, u[j], ell)))
    return spans


def regular_spans(comp: BorderComponent) -> list:
    """Position spans of the regular full welding of one component (I or Y)."""
    result = component_blc(comp)
    if not result.ok:
        raise BLCViolated(comp.id, result.offending)
    total = comp.length
    zeros = _zero_positions(comp)
    split = _equal_split(zeros, total)
    if split is not None:
        return _i_spans(comp.id, total, *split)
    return _y_spans(comp.id, total, _y_points(zeros, total))


def construct_regular(sig: SurfaceSignature, comps: Iterable[str] | None = None
                      ) -> tuple[WeldingInstruction, WeldOutcome]:
    """Full regular self-welding over the named components (all by default)."""
    require_valid(sig)
    spans = []
    for comp in _components(sig, comps):
        spans.extend(regular_spans(comp))
    ins = instruction_from_spans(sig, spans)
    return ins, weld(sig, ins)


def is_in_AU(sig: SurfaceSignature) -> bool:
    require_valid(sig)
    for cid, res in check_blc(sig).items():
        if not res.ok:
            raise BLCViolated(cid, res.offending)
    if any(p.order > 0 for p in sig.interior):
        return True
    for comp in sig.border:
        cls = classify_component(sig, comp.id)
        if cls.tag in (UNIQUE_I, UNIQUE_Y) and len(cls.zeros) > 2:
            return True
    return False


# -- exceptional families -----------------------------------------------------

def _lift(cid, total, folds, plan):
    """Pull spans on the folded component back to the original one.

    ``folds`` are ``(center, s)`` collapses of ``[center - s, center + s]``;
    ``plan`` holds spans ``((u, length), (w, length))`` in coordinates of the
    shorter component obtained after the collapses, with origin at the end of
    the first fold.
    """
    folds = sorted(folds)
    kept = []  # (S start, length) in C' order
    for k, (c, s) in enumerate(folds):
        nc, ns = folds[(k + 1) % len(folds)]
        start = c + s
        stop = nc - ns if k + 1 < len(folds) else nc - ns + total
        kept.append((start, stop - start))
    cum = [Fraction(0)]
    for _, ln in kept:
        cum.append(cum[-1] + ln)
    reduced = cum[-1]

    def to_s(v):
        v %= reduced
        for k, (start, ln) in enumerate(kept):
            if cum[k] <= v < cum[k + 1]:
                return (start + v - cum[k]) % total
        raise AssertionError("coordinate outside the folded component")  # pragma: no cover

    out = [((cid, (c - s) % total, s), (cid, c % total, s)) for c, s in folds]
    for (u, ell), (w, _) in plan:
        cuts = {Fraction(0), ell}
        for b in cum:
            t = (b - u) % reduced
            if 0 < t < ell:
                cuts.add(t)
            t = ell - (b - w) % reduced
            if 0 < t < ell:
                cuts.add(t)
        cuts = sorted(cuts)
        for t0, t1 in zip(cuts, cuts[1:]):
            out.append(((cid, to_s(u + t0), t1 - t0), (cid, to_s(w + ell - t1), t1 - t0)))
    return out, _to_c_prime(kept, cum, total)


def _to_c_prime(kept, cum, total):
    def f(x):
        for k, (start, ln) in enumerate(kept):
            off = (x - start) % total
            if off <= ln:
                return cum[k] + off
        raise ValueError("position lies inside a collapsed fold")
    return f


class _FamilySetup(NamedTuple):
    case: str
    bound: Fraction
    fold_centers: tuple
    anchors: tuple


def _family_setup(comp: BorderComponent) -> _FamilySetup:
    total = comp.length
    zeros = _zero_positions(comp)
    zpos = sorted(p for p, _ in zeros)

    def gap_bound(p):
        k = zpos.index(p)
        prev_gap = _forward(zpos[k - 1], p, total)
        next_gap = _forward(p, zpos[(k + 1) % len(zpos)], total)
        return min(prev_gap, next_gap)

    split = _equal_split(zeros, total)
    if split is not None:
        p1, p2 = split
        inner = [p for p in zpos if 0 < _forward(p1, p, total) < total / 2]
        outer = [p for p in zpos if _forward(p1, p, total) > total / 2]
        # first zero inside each half, walking from its starting point
        q1 = min(inner, key=lambda p: _forward(p1, p, total))
        q2 = min(outer, key=lambda p: _forward(p2, p, total))
        bound = min(gap_bound(q1), gap_bound(q2))
        return _FamilySetup("split", bound, (q1, q2), (p1, p2))
    y = _y_points(zeros, total)
    p4 = next(p for p in zpos if p not in y)
    bound = gap_bound(p4)
    for j in range(3):
        a, b = y[j], y[(j + 1) % 3]
        arc = _forward(a, b, total)
        if not 0 < _forward(a, p4, total) < arc:
            bound = min(bound, total / 2 - arc)
    return _FamilySetup("fold", bound, (p4,), tuple(y))


def exceptional_slide_bound(sig: SurfaceSignature, cid: str) -> Fraction:
    """Upper bound (exclusive) for the slide parameter of the exceptional family."""
    cls = classify_component(sig, cid)
    if cls.tag != EXCEPTIONAL:
        raise NotExceptional(f"component {cid!r} is {cls.tag}, not exceptional")
    return _family_setup(sig.component(cid)).bound


def sample_exceptional_family(sig: SurfaceSignature, cid: str, s) -> WeldingInstruction:
    """One member of the continuum of regular full weldings of an exceptional component.

    Short folds of length ``s`` are welded at zeros first; the shortened
    component is then closed up by an I- or Y-shaped welding. The weld tree has
    at least four end-vertices, so it is inequivalent to the I/Y welding.
    """
    s = as_length(s)
    bound = exceptional_slide_bound(sig, cid)
    if not 0 < s < bound:
        raise ValidationError(f"slide parameter {s} outside (0, {bound})")
    comp = sig.component(cid)
    total = comp.length
    setup = _family_setup(comp)
    folds = [(c, s) for c in setup.fold_centers]
    reduced = total - 2 * s * len(folds)
    # C' coordinates of the anchors, computed through a dry lift
    _, to_c = _lift(cid, total, folds, [])
    anchors = [to_c(p) for p in setup.anchors]
    if setup.case == "split":
        plan = [((u, ell), (w, ell)) for (_, u, ell), (_, w, _) in
                _i_spans(cid, reduced, anchors[0], anchors[1])]
    else:
        plan = [((u, ell), (w, ell)) for (_, u, ell), (_, w, _) in
                _y_spans(cid, reduced, anchors)]
    spans, _ = _lift(cid, total, folds, plan)
    ins = instruction_from_spans(sig, spans)
    outcome = weld(sig, ins)
    if not (outcome.regular and outcome.full and outcome.genus_preserving
            and len(outcome.graph.end_vertices()) >= 4):
        raise ValidationError(f"slide parameter {s} does not give a regular full welding")
    return ins


# -- linear filling at signature level ------------------------------------------

def reopen_slit(outcome: WeldOutcome, t) -> SurfaceSignature:
    """Reopen the slit of an I-shaped single-pair closure to length (1 - t) L."""
    t = as_length(t)
    if not 0 <= t <= 1:
        raise ValidationError("t must lie in [0, 1]")
    pairs = outcome.instruction.pairs
    if len(pairs) != 1 or outcome.graph.shape() != "I" or not outcome.full:
        raise NotIShaped("reopen_slit needs the outcome of a single I-shaped full pair")
    (a, b), = spans_of(outcome.instruction, outcome.input)
    if t == 1:
        return outcome.result
    if t == 0:
        return outcome.input
    cid, sa, length = a
    _, sb, _ = b
    keep = length * t
    # a(x) is glued to b(length - x); keep the welded part at the far end of a
    spans = [((cid, sa + length - keep, keep), (cid, sb, keep))]
    return weld(outcome.input, instruction_from_spans(outcome.input, spans)).result


__all__ = [
    "EXCEPTIONAL",
    "NOT_IN_AL",
    "UNIQUE_I",
    "UNIQUE_Y",
    "BLCResult",
    "ComponentClassification",
    "check_blc",
    "classify_component",
    "construct_regular",
    "exceptional_slide_bound",
    "is_in_AU",
    "regular_spans",
    "reopen_slit",
    "sample_exceptional_family",
]


"""Combinatorial signatures of bordered flat surfaces.

A signature records the genus, the orders of interior critical points and,
for every border component, the cyclic sequence of marked border points with
the lengths of the arcs between them. Lengths are :class:`fractions.Fraction`
throughout so equal-length tests are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

from .errors import SignatureError

Length = Fraction


def as_length(value) -> Fraction:
    """Coerce ``value`` to an exact rational length.

    Accepts Fractions, ints and ``"num/den"`` strings. Floats are refused
    because they would silently break exact equality.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise SignatureError(f"not a length: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise SignatureError(f"bad rational string {value!r}") from exc
    raise SignatureError(f"lengths must be exact rationals, got {type(value).__name__}")


def format_length(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class BoundaryPoint:
    label: str
    order: int = 0


@dataclass(frozen=True)
class InteriorPoint:
    label: str
    order: int


@dataclass(frozen=True)
class BorderComponent:
    """A border circle; ``arcs[i]`` is the length of the arc following ``points[i]``."""

    id: str
    points: tuple[BoundaryPoint, ...]
    arcs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "arcs", tuple(as_length(a) for a in self.arcs))

    def __len__(self):
        return len(self.points)

    @property
    def length(self) -> Fraction:
        return sum(self.arcs, Fraction(0))

    def position(self, index: int) -> Fraction:
        """Arc-length position of point ``index`` measured from point 0."""
        return sum(self.arcs[:index], Fraction(0))

    def positions(self) -> list[Fraction]:
        out, acc = [], Fraction(0)
        for a in self.arcs:
            out.append(acc)
            acc += a
        return out

    def index_at(self, position: Fraction) -> int | None:
        position = Fraction(position) % self.length
        for i, p in enumerate(self.positions()):
            if p == position:
                return i
        return None

    def zeros(self) -> list[int]:
        return [i for i, p in enumerate(self.points) if p.order != 0]


@dataclass(frozen=True)
class SurfaceSignature:
    genus: int
    interior: tuple[InteriorPoint, ...] = ()
    border: tuple[BorderComponent, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "interior", tuple(self.interior))
        object.__setattr__(self, "border", tuple(self.border))

    @property
    def closed(self) -> bool:
        return not self.border

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus - len(self.border)

    def component(self, cid: str) -> BorderComponent:
        for comp in self.border:
            if comp.id == cid:
                return comp
        raise SignatureError(f"unknown border component {cid!r}")

    def component_index(self, cid: str) -> int:
        for i, comp in enumerate(self.border):
            if comp.id == cid:
                return i
        raise SignatureError(f"unknown border component {cid!r}")

    def interior_orders(self) -> list[int]:
        return [p.order for p in self.interior]

    def has_interior_poles(self) -> bool:
        return any(p.order < 0 for p in self.interior)

    def order_sum(self) -> int:
        """2*(interior orders) + (border orders); equals 8g + 4b - 8 when valid."""
        return 2 * sum(self.interior_orders()) + sum(
            p.order for c in self.border for p in c.points
        )

    def with_component(self, comp: BorderComponent) -> "SurfaceSignature":
        border = tuple(comp if c.id == comp.id else c for c in self.border)
        return replace(self, border=border)


@dataclass(frozen=True)
class ArcRange:
    """Boundary arc on one component, from point ``start`` to point ``end``
    following the boundary orientation (wrapping past the last point)."""

    component: str
    start: int
    end: int

    def indices(self, comp: BorderComponent) -> list[int]:
        """Indices of the arcs traversed, in order."""
        n = len(comp)
        out, i = [], self.start
        while True:
            out.append(i)
            i = (i + 1) % n
            if i == self.end:
                return out

    def length(self, sig: SurfaceSignature) -> Fraction:
        comp = sig.component(self.component)
        return sum((comp.arcs[i] for i in self.indices(comp)), Fraction(0))

    def start_position(self, sig: SurfaceSignature) -> Fraction:
        return sig.component(self.component).position(self.start)


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def validate_signature(sig: SurfaceSignature) -> ValidationReport:
    report = ValidationReport()
    v = report.violations
    if not isinstance(sig.genus, int) or isinstance(sig.genus, bool) or sig.genus < 0:
        v.append(f"genus must be a nonnegative integer, got {sig.genus!r}")
    labels: set[str] = set()

    def see(label):
        if label in labels:
            v.append(f"duplicate point label {label!r}")
        labels.add(label)

    for p in sig.interior:
        see(p.label)
        if not isinstance(p.order, int) or isinstance(p.order, bool):
            v.append(f"interior order of {p.label!r} is not an integer")
        elif p.order == 0:
            v.append(f"interior point {p.label!r} has order 0 (only critical points are stored)")
    ids = set()
    for comp in sig.border:
        if comp.id in ids:
            v.append(f"duplicate component id {comp.id!r}")
        ids.add(comp.id)
        if not comp.points:
            v.append(f"component {comp.id!r} has no points")
            continue
        if len(comp.arcs) != len(comp.points):
            v.append(f"component {comp.id!r}: {len(comp.points)} points but {len(comp.arcs)} arcs")
        for p in comp.points:
            see(p.label)
            if p.order < 0:
                v.append(f"border pole at {p.label!r} (order {p.order}) is not allowed")
            elif p.order % 2:
                v.append(f"border order at {p.label!r} is odd ({p.order})")
        for i, a in enumerate(comp.arcs):
            if a <= 0:
                v.append(f"component {comp.id!r}: arc {i} has nonpositive length {a}")
    if isinstance(sig.genus, int):
        lhs = sig.order_sum()
        rhs = 8 * sig.genus + 4 * len(sig.border) - 8
        if lhs != rhs:
            v.append(
                f"Gauss-Bonnet: 2*sum(interior) + sum(border) = {lhs} != 8g + 4b - 8 = {rhs}"
            )
    return report


def require_valid(sig: SurfaceSignature) -> SurfaceSignature:
    report = validate_signature(sig)
    if not report.ok:
        raise SignatureError("; ".join(report.violations))
    return sig


def subdivision_label(cid: str, position: Fraction) -> str:
    return f"{cid}@{format_length(position)}"


def subdivide(sig: SurfaceSignature, cid: str, index: int, offset,
              label: str | None = None) -> SurfaceSignature:
    """Insert an order-0 marker ``offset`` past point ``index`` of component ``cid``."""
    comp = sig.component(cid)
    offset = as_length(offset)
    if not 0 <= index < len(comp):
        raise SignatureError(f"point index {index} out of range on {cid!r}")
    arc = comp.arcs[index]
    if not 0 < offset < arc:
        raise SignatureError(f"offset {offset} not strictly inside arc of length {arc}")
    if label is None:
        label = subdivision_label(cid, comp.position(index) + offset)
        existing = {p.label for p in sig.interior} | {
            p.label for c in sig.border for p in c.points
        }
        base, k = label, 1
        while label in existing:
            label = f"{base}#{k}"
            k += 1
    points = comp.points[: index + 1] + (BoundaryPoint(label, 0),) + comp.points[index + 1:]
    arcs = comp.arcs[:index] + (offset, arc - offset) + comp.arcs[index + 1:]
    return sig.with_component(BorderComponent(comp.id, points, arcs))


def subdivide_at(sig: SurfaceSignature, cid: str, position) -> tuple[SurfaceSignature, int]:
    """Make sure a point sits at ``position`` (mod length); return new signature and its index."""
    comp = sig.component(cid)
    position = as_length(position) % comp.length
    acc = Fraction(0)
    for i, a in enumerate(comp.arcs):
        if acc == position:
            return sig, i
        if acc < position < acc + a:
            return subdivide(sig, cid, i, position - acc), i + 1
        acc += a
    raise AssertionError("position not located")  # pragma: no cover


def subdivide_many(sig: SurfaceSignature, cid: str, positions: Iterable) -> SurfaceSignature:
    for pos in sorted({as_length(p) % sig.component(cid).length for p in positions}):
        sig, _ = subdivide_at(sig, cid, pos)
    return sig


class Trajectory(NamedTuple):
    length: Fraction
    start_order: int
    end_order: int
    start: int  # point index
    end: int


def trajectories(comp: BorderComponent) -> tuple[list[Trajectory], bool]:
    """Maximal arcs between consecutive nonzero-order points.

    Returns ``(trajectories, closed)``; when no nonzero-order point exists the
    component is one closed trajectory and ``closed`` is True.
    """
    zeros = comp.zeros()
    if not zeros:
        return [Trajectory(comp.length, 0, 0, 0, 0)], True
    n = len(comp)
    out = []
    for k, i in enumerate(zeros):
        j = zeros[(k + 1) % len(zeros)]
        length, m = Fraction(0), i
        while True:
            length += comp.arcs[m]
            m = (m + 1) % n
            if m == j:
                break
        out.append(Trajectory(length, comp.points[i].order, comp.points[j].order, i, j))
    return out, False


def make_component(cid: str, entries: Sequence[tuple]) -> BorderComponent:
    """Build a component from ``[(label, order, arc_length), ...]``."""
    points = tuple(BoundaryPoint(label, order) for label, order, _ in entries)
    arcs = tuple(as_length(a) for _, _, a in entries)
    return BorderComponent(cid, points, arcs)


def canonical_component_form(comp: BorderComponent) -> tuple:
    """Label-free cyclic normal form of (order, arc) data, minimal rotation."""
    seq = [(p.order, a) for p, a in zip(comp.points, comp.arcs)]
    return min(tuple(seq[i:] + seq[:i]) for i in range(len(seq)))

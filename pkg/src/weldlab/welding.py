"""Self-welding engine.

Pairs of boundary arc ranges of equal length are identified with reversed
boundary orientation (the orientable choice for a surface lying to the left
of its border). The engine works on the common refinement of all ranges, so
each elementary edge is glued to exactly one partner edge; boundary points are
grouped into vertices by union-find and the remaining border is re-stitched by
walking around the glued corners.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InstructionError
from .surface import (
    ArcRange,
    BorderComponent,
    BoundaryPoint,
    InteriorPoint,
    SurfaceSignature,
    format_length,
    require_valid,
    subdivide_many,
    validate_signature,
)

INTERIOR = "interior"
BORDER = "border"


def vertex_order(orders: Iterable[int], location: str = INTERIOR) -> int:
    """Order of the co-welder at a vertex formed by gluing border points.

    Each border point of order k carries a boundary angle (k + 2)*pi/2 in the
    flat metric; an interior vertex of order m has total angle (m + 2)*pi and a
    border vertex (m + 2)*pi/2.
    """
    orders = list(orders)
    if not orders:
        raise ValueError("a vertex needs at least one preimage")
    for k in orders:
        if k < 0 or k % 2:
            raise ValueError(f"border orders must be even and nonnegative, got {k}")
    angle = sum(k + 2 for k in orders)
    if location == INTERIOR:
        return angle // 2 - 2
    if location == BORDER:
        return angle - 2
    raise ValueError(f"unknown location {location!r}")


@dataclass(frozen=True)
class WeldingInstruction:
    pairs: tuple[tuple[ArcRange, ArcRange], ...] = ()
    # Refined signature the point indices refer to, when the instruction was
    # built by a constructor that had to subdivide.
    base: SurfaceSignature | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))

    def signature_for(self, sig: SurfaceSignature) -> SurfaceSignature:
        if self.base is None:
            return sig
        if not is_refinement(self.base, sig):
            raise InstructionError("instruction base is not a refinement of the signature")
        return self.base


def is_refinement(fine: SurfaceSignature, coarse: SurfaceSignature) -> bool:
    """True if ``fine`` is ``coarse`` with extra order-0 markers inserted."""
    if fine.genus != coarse.genus or fine.interior != coarse.interior:
        return False
    if [c.id for c in fine.border] != [c.id for c in coarse.border]:
        return False
    for f, c in zip(fine.border, coarse.border):
        if f.length != c.length:
            return False
        fpos = dict(zip(f.positions(), f.points))
        cpos = set()
        for pos, pt in zip(c.positions(), c.points):
            if fpos.get(pos) != pt:
                return False
            cpos.add(pos)
        if any(pt.order != 0 for pos, pt in fpos.items() if pos not in cpos):
            return False
    return True


@dataclass(frozen=True)
class GraphVertex:
    id: int
    labels: tuple[str, ...]
    order: int
    location: str

    @property
    def label(self) -> str:
        return "=".join(self.labels)


@dataclass(frozen=True)
class GraphEdge:
    id: int
    length: Fraction
    u: int
    v: int
    pair: int


@dataclass(frozen=True)
class WeldGraph:
    vertices: tuple[GraphVertex, ...] = ()
    edges: tuple[GraphEdge, ...] = ()

    def vertex(self, vid: int) -> GraphVertex:
        return self.vertices[vid]

    def degree(self, vid: int) -> int:
        return sum((e.u == vid) + (e.v == vid) for e in self.edges)

    def preimage_count(self, vid: int) -> int:
        return len(self.vertices[vid].labels)

    def end_vertices(self) -> list[int]:
        return [v.id for v in self.vertices if self.degree(v.id) == 1]

    def components(self) -> list[list[int]]:
        parent = {v.id: v.id for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            parent[find(e.u)] = find(e.v)
        groups = defaultdict(list)
        for v in self.vertices:
            groups[find(v.id)].append(v.id)
        return sorted(groups.values())

    def component_edges(self, comp: Sequence[int]) -> list[GraphEdge]:
        members = set(comp)
        return [e for e in self.edges if e.u in members]

    def is_tree(self, comp: Sequence[int]) -> bool:
        return len(self.component_edges(comp)) == len(comp) - 1

    def is_forest(self) -> bool:
        return all(self.is_tree(c) for c in self.components())

    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    def component_shape(self, comp: Sequence[int]) -> str:
        if not self.is_tree(comp):
            return "cyclic"
        degrees = [self.degree(v) for v in comp]
        leaves = degrees.count(1)
        if leaves == 2:
            return "I"
        if leaves == 3 and degrees.count(3) == 1 and all(d in (1, 2, 3) for d in degrees):
            return "Y"
        return f"tree{leaves}"

    def shape(self) -> str:
        comps = self.components()
        if not comps:
            return "empty"
        return "+".join(self.component_shape(c) for c in comps)


@dataclass(frozen=True)
class WeldOutcome:
    input: SurfaceSignature
    source: SurfaceSignature
    instruction: WeldingInstruction
    result: SurfaceSignature
    graph: WeldGraph
    closed: bool
    full: bool
    genus_preserving: bool
    regular: bool
    touched: tuple[str, ...]
    # refined source label -> label of the point of R it lands on
    aliases: dict = field(default_factory=dict, compare=False)

    def vertex_of(self, label: str) -> GraphVertex | None:
        target = self.aliases.get(label)
        for v in self.graph.vertices:
            if v.label == target:
                return v
        return None

    @property
    def graph_orders_nonnegative(self) -> bool:
        return all(v.order >= 0 for v in self.graph.vertices)


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _span(sig: SurfaceSignature, rng: ArcRange) -> tuple[str, Fraction, Fraction]:
    comp = sig.component(rng.component)
    n = len(comp)
    if not (0 <= rng.start < n and 0 <= rng.end < n):
        raise InstructionError(f"range {rng} refers to a missing point")
    if rng.start == rng.end:
        raise InstructionError(f"range {rng} is empty (start == end)")
    return rng.component, comp.position(rng.start), rng.length(sig)


def _check_spans(sig: SurfaceSignature, spans) -> None:
    occupied = defaultdict(list)
    for a, b in spans:
        if a[2] != b[2]:
            raise InstructionError(
                f"paired ranges differ in length: {format_length(a[2])} vs {format_length(b[2])}"
            )
        for cid, start, length in (a, b):
            occupied[cid].append((start, length))
    for cid, items in occupied.items():
        total = sig.component(cid).length
        cover = []
        for start, length in items:
            end = start + length
            if end <= total:
                cover.append((start, end))
            else:
                cover.append((start, total))
                cover.append((Fraction(0), end - total))
        cover.sort()
        for (s1, e1), (s2, e2) in zip(cover, cover[1:]):
            if s2 < e1:
                raise InstructionError(f"ranges overlap on component {cid!r}")


def _inner_offsets(sig, span):
    cid, start, length = span
    comp = sig.component(cid)
    total = comp.length
    out = []
    for pos in comp.positions():
        off = (pos - start) % total
        if 0 < off < length:
            out.append(off)
    return out


class _Glue:
    """Elementary-edge gluing data on a refined signature."""

    def __init__(self, sig: SurfaceSignature, spans):
        self.sig = sig
        self.uf = _UnionFind()
        self.partner = {}
        self.pair_of = {}
        self.glued = []  # (e, f, pair index) with e from the first range
        for k, (a, b) in enumerate(spans):
            ea, eb = self._edges(a), self._edges(b)
            if len(ea) != len(eb):
                raise AssertionError("refinement mismatch")  # pragma: no cover
            for e, f in zip(ea, reversed(eb)):
                if self.length(e) != self.length(f):
                    raise AssertionError("refinement mismatch")  # pragma: no cover
                self.partner[e], self.partner[f] = f, e
                self.pair_of[e] = self.pair_of[f] = k
                self.glued.append((e, f, k))
                self.uf.union(self.start(e), self.end(f))
                self.uf.union(self.end(e), self.start(f))

    def _edges(self, span):
        cid, start, length = span
        comp = self.sig.component(cid)
        i = comp.index_at(start)
        out, acc = [], Fraction(0)
        while acc < length:
            out.append((cid, i))
            acc += comp.arcs[i]
            i = (i + 1) % len(comp)
        return out

    def length(self, e):
        return self.sig.component(e[0]).arcs[e[1]]

    def start(self, e):
        return e

    def end(self, e):
        cid, i = e
        return (cid, (i + 1) % len(self.sig.component(cid)))

    def loop_midpoints(self):
        cuts = defaultdict(set)
        for e, f, _ in self.glued:
            if self.uf.find(self.start(e)) == self.uf.find(self.end(e)):
                for g in (e, f):
                    comp = self.sig.component(g[0])
                    cuts[g[0]].add(comp.position(g[1]) + comp.arcs[g[1]] / 2)
        return cuts


def weld(sig: SurfaceSignature, ins: WeldingInstruction) -> WeldOutcome:
    """Weld ``sig`` along the pairs of ``ins`` and classify the result."""
    base = ins.signature_for(sig)
    require_valid(base)
    spans = [(_span(base, a), _span(base, b)) for a, b in ins.pairs]
    _check_spans(base, spans)

    cuts = defaultdict(set)
    for a, b in spans:
        for y in _inner_offsets(base, b):
            cuts[a[0]].add(a[1] + a[2] - y)
        for x in _inner_offsets(base, a):
            cuts[b[0]].add(b[1] + b[2] - x)
    refined = base
    for cid, positions in sorted(cuts.items()):
        refined = subdivide_many(refined, cid, positions)
    glue = _Glue(refined, spans)
    loops = glue.loop_midpoints()
    if loops:
        for cid, positions in sorted(loops.items()):
            refined = subdivide_many(refined, cid, positions)
        glue = _Glue(refined, spans)
    return _assemble(sig, ins, refined, glue)


def _assemble(sig, ins, refined: SurfaceSignature, glue: _Glue) -> WeldOutcome:
    uf = glue.uf
    comp_index = {c.id: k for k, c in enumerate(refined.border)}
    points = [(c.id, i) for c in refined.border for i in range(len(c))]

    def key(p):
        return comp_index[p[0]], p[1]

    def point(p):
        return refined.component(p[0]).points[p[1]]

    def in_edge(p):
        n = len(refined.component(p[0]))
        return (p[0], (p[1] - 1) % n)

    classes = defaultdict(list)
    for p in points:
        classes[uf.find(p)].append(p)
    ordered = sorted(classes.values(), key=lambda ms: min(key(m) for m in ms))

    cls_label, cls_order, cls_loc, cls_of = {}, {}, {}, {}
    graph_vertices = []
    for members in ordered:
        members.sort(key=key)
        root = uf.find(members[0])
        labels = tuple(sorted(point(m).label for m in members))
        border = any(m not in glue.partner or in_edge(m) not in glue.partner for m in members)
        loc = BORDER if border else INTERIOR
        order = vertex_order([point(m).order for m in members], loc)
        cls_label[root] = "=".join(labels)
        cls_order[root] = order
        cls_loc[root] = loc
        for m in members:
            cls_of[m] = root
        touched = any(m in glue.partner or in_edge(m) in glue.partner for m in members)
        if touched:
            graph_vertices.append(GraphVertex(len(graph_vertices), labels, order, loc))
    vid = {v.label: v.id for v in graph_vertices}

    edges = []
    for e, f, k in glue.glued:
        u = vid[cls_label[uf.find(glue.start(e))]]
        v = vid[cls_label[uf.find(glue.end(e))]]
        edges.append(GraphEdge(len(edges), glue.length(e), u, v, k))
    graph = WeldGraph(tuple(graph_vertices), tuple(edges))

    # re-stitch the unwelded border
    unwelded = [(c.id, i) for c in refined.border for i in range(len(c))
                if (c.id, i) not in glue.partner]

    def next_edge(e):
        p = glue.end(e)
        nxt = p
        for _ in range(len(points) + 1):
            if nxt not in glue.partner:
                return nxt
            nxt = glue.end(glue.partner[nxt])
        raise AssertionError("border walk did not terminate")  # pragma: no cover

    seen, cycles = set(), []
    for e in unwelded:
        if e in seen:
            continue
        cyc, cur = [], e
        while cur not in seen:
            seen.add(cur)
            cyc.append(cur)
            cur = next_edge(cur)
        cycles.append(cyc)

    # a cycle keeps the id of its first edge's component; later cycles from the
    # same component get the first free "<id>.<k>"
    ids = [None] * len(cycles)
    taken = set()
    for k, cyc in enumerate(cycles):
        if cyc[0][0] not in taken:
            ids[k] = cyc[0][0]
            taken.add(ids[k])
    reserved = taken | {c.id for c in refined.border}
    for k, cyc in enumerate(cycles):
        if ids[k] is None:
            j = 1
            while f"{cyc[0][0]}.{j}" in reserved:
                j += 1
            ids[k] = f"{cyc[0][0]}.{j}"
            reserved.add(ids[k])
    new_border = []
    for new_id, cyc in zip(ids, cycles):
        pts = tuple(BoundaryPoint(cls_label[cls_of[e]], cls_order[cls_of[e]]) for e in cyc)
        arcs = tuple(glue.length(e) for e in cyc)
        new_border.append(BorderComponent(new_id, pts, arcs))

    interior = list(refined.interior)
    for members in ordered:
        root = cls_of[members[0]]
        if cls_loc[root] == INTERIOR and cls_order[root] != 0:
            interior.append(InteriorPoint(cls_label[root], cls_order[root]))

    chi = refined.euler_characteristic - (len(points) - len(ordered)) + len(glue.glued)
    twice_genus = 2 - len(new_border) - chi
    if twice_genus < 0 or twice_genus % 2:
        raise AssertionError(f"inconsistent Euler characteristic {chi}")  # pragma: no cover
    result = SurfaceSignature(twice_genus // 2, tuple(interior), tuple(new_border))
    report = validate_signature(result)
    if not report.ok:
        raise AssertionError(f"welded signature invalid: {report.violations}")  # pragma: no cover

    touched = tuple(c.id for c in refined.border
                    if any((c.id, i) in glue.partner for i in range(len(c))))
    nonempty = bool(glue.glued)
    genus_preserving = nonempty and result.genus == refined.genus
    full = nonempty and all(
        cls_loc[cls_of[(cid, i)]] == INTERIOR
        for cid in touched for i in range(len(refined.component(cid)))
    )
    regular = (not sig.has_interior_poles()) and all(v.order >= 0 for v in graph_vertices)
    aliases = {point(p).label: cls_label[cls_of[p]] for p in points}
    return WeldOutcome(
        input=sig,
        source=refined,
        instruction=ins,
        result=result,
        graph=graph,
        closed=nonempty and result.closed,
        full=full,
        genus_preserving=genus_preserving,
        regular=regular,
        touched=touched,
        aliases=aliases,
    )


def instruction_from_spans(sig: SurfaceSignature, spans) -> WeldingInstruction:
    """Build an instruction from position-based pairs.

    ``spans`` is a sequence of ``((cid, start, length), (cid, start, length))``;
    positions are measured from point 0 of each component and may wrap. The
    signature is subdivided wherever an endpoint does not already sit on a
    point, and the refined signature is attached as the instruction base.
    """
    base = sig
    needed = defaultdict(set)
    for a, b in spans:
        for cid, start, length in (a, b):
            total = sig.component(cid).length
            needed[cid].add(Fraction(start) % total)
            needed[cid].add((Fraction(start) + length) % total)
    for cid, positions in sorted(needed.items()):
        base = subdivide_many(base, cid, positions)
    pairs = []
    for a, b in spans:
        ranges = []
        for cid, start, length in (a, b):
            comp = base.component(cid)
            i = comp.index_at(Fraction(start))
            j = comp.index_at(Fraction(start) + length)
            ranges.append(ArcRange(cid, i, j))
        pairs.append(tuple(ranges))
    return WeldingInstruction(tuple(pairs), base=base if base != sig else None)


def involution_pieces(sig: SurfaceSignature, spans) -> list[tuple]:
    """Normal form of the boundary identification ``x -> c - x``.

    Returns maximal pieces ``(cid, start, end, target_cid, c)`` with ``c``
    reduced modulo the target length; pieces never cross position 0.
    """
    raw = []
    for a, b in spans:
        for (ca, sa, la), (cb, sb, _) in ((a, b), (b, a)):
            raw.append((ca, Fraction(sa), Fraction(la), cb, Fraction(sa) + sb + la))
    return normalize_pieces(sig, raw)


def normalize_pieces(sig: SurfaceSignature, raw) -> list[tuple]:
    lengths = {c.id: c.length for c in sig.border}
    split = []
    for cid, start, length, target, c in raw:
        total = lengths[cid]
        start = start % total
        end = start + length
        if end <= total:
            split.append([cid, start, end, target, c % lengths[target]])
        else:
            split.append([cid, start, total, target, c % lengths[target]])
            split.append([cid, Fraction(0), end - total, target, (c - total) % lengths[target]])
    order = {c.id: k for k, c in enumerate(sig.border)}
    split.sort(key=lambda p: (order[p[0]], p[1]))
    merged = []
    for piece in split:
        if merged:
            last = merged[-1]
            if last[0] == piece[0] and last[2] == piece[1] and last[3:] == piece[3:]:
                last[2] = piece[2]
                continue
        merged.append(piece)
    return [tuple(p) for p in merged]


def pieces_key(pieces) -> str:
    return ";".join(
        f"{cid}[{format_length(s)},{format_length(e)}]->{t}:{format_length(c)}"
        for cid, s, e, t, c in pieces
    )


def instruction_canonical_key(ins: WeldingInstruction, sig: SurfaceSignature) -> str:
    """Key of the identification pattern; independent of pair order, pair
    orientation and of how ranges are cut at order-0 markers."""
    base = ins.signature_for(sig)
    spans = [(_span(base, a), _span(base, b)) for a, b in ins.pairs]
    return pieces_key(involution_pieces(base, spans))


def spans_of(ins: WeldingInstruction, sig: SurfaceSignature):
    base = ins.signature_for(sig)
    return [(_span(base, a), _span(base, b)) for a, b in ins.pairs]


def check_instruction(sig: SurfaceSignature, ins: WeldingInstruction) -> None:
    base = ins.signature_for(sig)
    spans = [(_span(base, a), _span(base, b)) for a, b in ins.pairs]
    _check_spans(base, spans)


__all__ = [
    "BORDER",
    "INTERIOR",
    "GraphEdge",
    "GraphVertex",
    "WeldGraph",
    "WeldOutcome",
    "WeldingInstruction",
    "check_instruction",
    "instruction_canonical_key",
    "instruction_from_spans",
    "involution_pieces",
    "is_refinement",
    "normalize_pieces",
    "pieces_key",
    "vertex_order",
    "weld",
]


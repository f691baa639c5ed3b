"""Random signatures and instructions, plus graph utilities for the tests."""

from __future__ import annotations

import random
from fractions import Fraction

import networkx as nx

from weldlab.surface import (
    BorderComponent,
    BoundaryPoint,
    InteriorPoint,
    SurfaceSignature,
    canonical_component_form,
)
from weldlab.welding import instruction_from_spans, weld


def random_signature(rng: random.Random, step=Fraction(1, 12), max_components=2,
                     max_cells=10, zero_prob=0.4, poles=True) -> SurfaceSignature:
    """Valid signature whose border points all sit on multiples of ``step``."""
    border = []
    for c in range(rng.randint(1, max_components)):
        cells = rng.randint(2, max_cells)
        cuts = sorted(rng.sample(range(1, cells), rng.randint(0, min(4, cells - 1))))
        marks = [0] + cuts
        arcs = [Fraction(b - a) * step for a, b in zip(marks, marks[1:] + [cells])]
        pts = [BoundaryPoint(f"c{c}p{k}", rng.choice([2, 4]) if rng.random() < zero_prob else 0)
               for k in range(len(marks))]
        border.append(BorderComponent(f"c{c}", tuple(pts), tuple(arcs)))
    border_sum = sum(p.order for comp in border for p in comp.points)
    genus = rng.randint(0, 2)
    need2 = 8 * genus + 4 * len(border) - 8 - border_sum
    if not poles:
        while need2 < 0:
            genus += 1
            need2 += 8
    half = need2 // 2
    interior = []
    if half != 0:
        # split into one or two nonzero parts
        if abs(half) >= 2 and rng.random() < 0.5:
            a = rng.randint(1, abs(half) - 1) * (1 if half > 0 else -1)
            parts = [a, half - a]
        else:
            parts = [half]
        interior = [InteriorPoint(f"z{k}", o) for k, o in enumerate(parts)]
    return SurfaceSignature(genus, tuple(interior), tuple(border))


def random_spans(rng: random.Random, sig: SurfaceSignature, step=Fraction(1, 12), max_pairs=4):
    """Disjoint pairs of equal-length grid runs, possibly on different components."""
    free = {c.id: [True] * int(c.length / step) for c in sig.border}

    def runs_of(k):
        out = []
        for cid, cells in free.items():
            n = len(cells)
            for s in range(n):
                if k < n and all(cells[(s + j) % n] for j in range(k)):
                    out.append((cid, s))
        return out

    spans = []
    for _ in range(rng.randint(1, max_pairs)):
        k = rng.randint(1, 3)
        first = runs_of(k)
        if not first:
            break
        cid_a, sa = rng.choice(first)
        n = len(free[cid_a])
        for j in range(k):
            free[cid_a][(sa + j) % n] = False
        second = runs_of(k)
        if not second:
            for j in range(k):
                free[cid_a][(sa + j) % n] = True
            break
        cid_b, sb = rng.choice(second)
        m = len(free[cid_b])
        for j in range(k):
            free[cid_b][(sb + j) % m] = False
        spans.append(((cid_a, sa * step, k * step), (cid_b, sb * step, k * step)))
    return spans


def random_welding(rng, **kw):
    sig = random_signature(rng, **kw)
    spans = random_spans(rng, sig)
    return sig, spans, instruction_from_spans(sig, spans)


def to_nx(graph) -> nx.MultiGraph:
    g = nx.MultiGraph()
    for v in graph.vertices:
        g.add_node(v.label, order=v.order)
    for e in graph.edges:
        g.add_edge(graph.vertices[e.u].label, graph.vertices[e.v].label, length=e.length)
    return g


def smooth(g: nx.MultiGraph) -> nx.MultiGraph:
    """Merge edges across vertices of order 0 and degree 2 (pure subdivision markers)."""
    g = g.copy()
    changed = True
    while changed:
        changed = False
        for n in list(g.nodes):
            if g.nodes[n]["order"] != 0 or g.degree(n) != 2:
                continue
            nbrs = [(u, v, d) for u, v, d in g.edges(n, data=True)]
            if any(u == v for u, v, _ in nbrs):
                continue
            (_, a, d1), (_, b, d2) = nbrs
            g.remove_node(n)
            g.add_edge(a, b, length=d1["length"] + d2["length"])
            changed = True
            break
    return g


def graphs_isomorphic(g1: nx.MultiGraph, g2: nx.MultiGraph) -> bool:
    def edge_match(e1, e2):
        return sorted(d["length"] for d in e1.values()) == sorted(d["length"] for d in e2.values())

    return nx.is_isomorphic(g1, g2, node_match=lambda a, b: a["order"] == b["order"],
                            edge_match=edge_match)


def signature_shape(sig: SurfaceSignature):
    """Label-free data of a signature with order-0 markers removed."""
    comps = []
    for c in sig.border:
        pts, arcs = [], []
        acc = Fraction(0)
        start = next((i for i, p in enumerate(c.points) if p.order != 0), None)
        if start is None:
            comps.append(("closed", c.length))
            continue
        n = len(c)
        for j in range(n):
            i = (start + j) % n
            if c.points[i].order != 0 and j:
                arcs.append(acc)
                acc = Fraction(0)
            if c.points[i].order != 0:
                pts.append(c.points[i])
            acc += c.arcs[i]
        arcs.append(acc)
        comps.append(canonical_component_form(BorderComponent(c.id, tuple(pts), tuple(arcs))))
    return sig.genus, sorted(sig.interior_orders()), sorted(comps, key=repr)


def weld_sequentially(sig: SurfaceSignature, base: SurfaceSignature, spans):
    """Weld one pair at a time; returns (final outcome, composed graph) or None if a
    pair's endpoint cannot be located unambiguously on the intermediate border."""
    current = base
    labels = {p.label: p.label for c in base.border for p in c.points}
    pos_label = {}
    for c in base.border:
        for pos, p in zip(c.positions(), c.points):
            pos_label[(c.id, pos)] = p.label
    g = nx.MultiGraph()
    retired = 0
    outcome = None
    for a, b in spans:
        new_spans = []
        for cid, start, length in (a, b):
            lab = labels[pos_label[(cid, start % base.component(cid).length)]]
            hits = [(c, pos) for c in current.border
                    for pos, p in zip(c.positions(), c.points) if p.label == lab]
            if len(hits) != 1:
                return None
            comp, pos = hits[0]
            new_spans.append((comp.id, pos, length))
        # split at the midpoint so no range wraps a whole intermediate circle
        (ca, pa, ln), (cb, pb, _) = new_spans
        h = ln / 2
        halves = [((ca, pa, h), (cb, pb + h, h)), ((ca, pa + h, h), (cb, pb, h))]
        outcome = weld(current, instruction_from_spans(current, halves))
        merged = {}
        for v in outcome.graph.vertices:
            for lab in v.labels:
                merged[lab] = v.label
        on_border = {p.label for c in outcome.result.border for p in c.points}
        mapping = {}
        for n in list(g.nodes):
            if n in merged:
                mapping[n] = merged[n]
            elif not isinstance(n, tuple) and n not in on_border:
                retired += 1
                mapping[n] = ("done", retired, n)
        g = nx.relabel_nodes(g, mapping, copy=True)
        for v in outcome.graph.vertices:
            if v.label in g:
                g.nodes[v.label]["order"] = v.order
            else:
                g.add_node(v.label, order=v.order)
        for e in outcome.graph.edges:
            g.add_edge(outcome.graph.vertices[e.u].label, outcome.graph.vertices[e.v].label,
                       length=e.length)
        labels = {k: outcome.aliases.get(v, v) for k, v in labels.items()}
        current = outcome.result
    return outcome, g


def random_closing_spans(rng: random.Random, sig: SurfaceSignature, step=Fraction(1, 12)):
    """Glue every grid cell of every component to another one (random perfect matching)."""
    cells = [(c.id, k) for c in sig.border for k in range(int(c.length / step))]
    if len(cells) % 2:
        return None
    rng.shuffle(cells)
    return [((a, i * step, step), (b, j * step, step))
            for (a, i), (b, j) in zip(cells[::2], cells[1::2])]


def random_closed_welding(rng, **kw):
    while True:
        sig = random_signature(rng, **kw)
        spans = random_closing_spans(rng, sig)
        if spans:
            return sig, spans, instruction_from_spans(sig, spans)

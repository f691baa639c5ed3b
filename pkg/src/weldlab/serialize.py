"""JSON encoding of signatures, instructions, outcomes and genus-one objects.

Rationals travel as ``"num/den"`` strings. Output is deterministic: keys are
sorted and every float is written with 17 significant digits, which is
enough for an exact binary64 round trip.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Any

from .errors import ValidationError
from .genus_one import GeodesicRay, HyperbolicDisk, TauPoint
from .regular import ComponentClassification
from .surface import (
    ArcRange,
    BorderComponent,
    BoundaryPoint,
    InteriorPoint,
    SurfaceSignature,
    as_length,
    format_length,
)
from .welding import WeldGraph, WeldingInstruction, WeldOutcome


def _need(obj, key, kind, where):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected an object")
    if key not in obj:
        raise ValidationError(f"{where}: missing key {key!r}")
    value = obj[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ValidationError(f"{where}.{key}: expected an integer")
    if kind is not int and not isinstance(value, kind):
        raise ValidationError(f"{where}.{key}: expected {kind.__name__}")
    return value


def _rational(value, where) -> Fraction:
    if not isinstance(value, str):
        raise ValidationError(f"{where}: rationals must be 'num/den' strings, got {value!r}")
    return as_length(value)


# -- signatures ---------------------------------------------------------------

def signature_to_json(sig: SurfaceSignature) -> dict:
    return {
        "genus": sig.genus,
        "interior": [{"label": p.label, "order": p.order} for p in sig.interior],
        "border": [
            {
                "id": c.id,
                "points": [{"label": p.label, "order": p.order} for p in c.points],
                "arcs": [format_length(a) for a in c.arcs],
            }
            for c in sig.border
        ],
    }


def signature_from_json(obj: Any) -> SurfaceSignature:
    genus = _need(obj, "genus", int, "signature")
    interior = []
    for i, p in enumerate(obj.get("interior", [])):
        w = f"signature.interior[{i}]"
        interior.append(InteriorPoint(_need(p, "label", str, w), _need(p, "order", int, w)))
    border = []
    for i, c in enumerate(obj.get("border", [])):
        w = f"signature.border[{i}]"
        pts = [
            BoundaryPoint(_need(p, "label", str, f"{w}.points[{j}]"),
                          _need(p, "order", int, f"{w}.points[{j}]"))
            for j, p in enumerate(_need(c, "points", list, w))
        ]
        arcs = [_rational(a, f"{w}.arcs[{j}]") for j, a in enumerate(_need(c, "arcs", list, w))]
        border.append(BorderComponent(_need(c, "id", str, w), tuple(pts), tuple(arcs)))
    return SurfaceSignature(genus, tuple(interior), tuple(border))


# -- instructions ---------------------------------------------------------------

def _range_to_json(r: ArcRange) -> dict:
    return {"component": r.component, "from": r.start, "to": r.end}


def _range_from_json(obj, where) -> ArcRange:
    return ArcRange(_need(obj, "component", str, where), _need(obj, "from", int, where),
                    _need(obj, "to", int, where))


def instruction_to_json(ins: WeldingInstruction) -> dict:
    out = {"pairs": [{"a": _range_to_json(a), "b": _range_to_json(b)} for a, b in ins.pairs]}
    if ins.base is not None:
        out["base"] = signature_to_json(ins.base)
    return out


def instruction_from_json(obj: Any) -> WeldingInstruction:
    pairs = []
    for i, p in enumerate(_need(obj, "pairs", list, "instruction")):
        w = f"instruction.pairs[{i}]"
        pairs.append((_range_from_json(_need(p, "a", dict, w), w + ".a"),
                      _range_from_json(_need(p, "b", dict, w), w + ".b")))
    base = signature_from_json(obj["base"]) if obj.get("base") is not None else None
    return WeldingInstruction(tuple(pairs), base)


# -- outcomes and classifications ---------------------------------------------

def graph_to_json(graph: WeldGraph) -> dict:
    return {
        "vertices": [
            {"id": v.id, "labels": list(v.labels), "order": v.order, "location": v.location,
             "degree": graph.degree(v.id)}
            for v in graph.vertices
        ],
        "edges": [
            {"id": e.id, "length": format_length(e.length), "u": e.u, "v": e.v, "pair": e.pair}
            for e in graph.edges
        ],
        "shape": graph.shape(),
    }


def outcome_to_json(out: WeldOutcome) -> dict:
    return {
        "result": signature_to_json(out.result),
        "genus": out.result.genus,
        "graph": graph_to_json(out.graph),
        "flags": {
            "closed": out.closed,
            "full": out.full,
            "genus_preserving": out.genus_preserving,
            "regular": out.regular,
            "graph_orders_nonnegative": out.graph_orders_nonnegative,
        },
        "touched": list(out.touched),
        "interior_order_sum": sum(out.result.interior_orders()),
        "gauss_bonnet_sum": out.result.order_sum(),
    }


def classification_to_json(c: ComponentClassification) -> dict:
    return {
        "component": c.component,
        "tag": c.tag,
        "zeros": list(c.zeros),
        "trajectory_lengths": [format_length(x) for x in c.trajectory_lengths],
        "length": format_length(c.length),
    }


# -- genus one ------------------------------------------------------------------

def _point(obj, where) -> TauPoint:
    if not (isinstance(obj, list) and len(obj) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)):
        raise ValidationError(f"{where}: expected [x, y]")
    return TauPoint(obj[0], obj[1])


def point_to_json(p: TauPoint) -> list:
    return [p.x, p.y]


def disk_to_json(d: HyperbolicDisk) -> dict:
    return {"center": point_to_json(d.center), "radius": d.radius}


def disk_from_json(obj: Any) -> HyperbolicDisk:
    center = _point(_need(obj, "center", list, "disk"), "disk.center")
    radius = _need(obj, "radius", (int, float), "disk")
    return HyperbolicDisk(center, radius)


def ray_to_json(r: GeodesicRay) -> dict:
    return {"origin": point_to_json(r.origin), "xi": "inf" if math.isinf(r.xi) else r.xi}


def ray_from_json(obj: Any) -> GeodesicRay:
    origin = _point(_need(obj, "origin", list, "ray"), "ray.origin")
    xi = obj.get("xi")
    if xi == "inf":
        xi = math.inf
    elif isinstance(xi, bool) or not isinstance(xi, (int, float)):
        raise ValidationError("ray.xi: expected a number or 'inf'")
    return GeodesicRay(origin, xi)


def constraints_to_json(cons) -> list:
    return [{"t": float(t), "m": float(m)} for t, m in cons]


def constraints_from_json(obj: Any) -> list[tuple[float, float]]:
    if not isinstance(obj, list):
        raise ValidationError("constraints: expected a list")
    return [(float(_need(c, "t", (int, float), f"constraints[{i}]")),
             float(_need(c, "m", (int, float), f"constraints[{i}]")))
            for i, c in enumerate(obj)]


# -- deterministic text ---------------------------------------------------------

_TOKEN = "\u0000f{}\u0000"
# json.dumps escapes NUL, so placeholders appear as "\u0000f<k>\u0000"
_TOKEN_RE = re.compile(r'"\\u0000f(\d+)\\u0000"')


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValidationError(f"non-finite float {x!r} cannot be written as JSON")
    text = f"{x:.17g}"
    if not any(ch in text for ch in ".en"):
        text += ".0"
    return text


def dumps(obj: Any) -> str:
    """Sorted-key, indented JSON with 17-significant-digit floats."""
    floats: list[float] = []

    def swap(o):
        if isinstance(o, float):
            floats.append(o)
            return _TOKEN.format(len(floats) - 1)
        if isinstance(o, dict):
            return {k: swap(v) for k, v in o.items()}
        if isinstance(o, (list, tuple)):
            return [swap(v) for v in o]
        if isinstance(o, Fraction):
            return format_length(o)
        return o

    text = json.dumps(swap(obj), sort_keys=True, indent=2, ensure_ascii=False)
    return _TOKEN_RE.sub(lambda m: format_float(floats[int(m.group(1))]), text) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON: {exc}") from exc

"""Deterministic SVG figures for weld graphs and upper half-plane scenes.

Upper half-plane scenes use one uniform scale for both axes so hyperbolic
disks and horocycles stay round; the visible height is clipped at
``ceiling``. Every coordinate is printed with four decimals, so equal
reports give byte-identical files.
"""

from __future__ import annotations

import math
from html import escape

from .errors import ValidationError
from .genus_one import GeodesicRay, TauPoint, euclidean_circle, geodesic_point

WIDTH, HEIGHT, MARGIN = 800, 500, 40
DEFAULT_CEILING = 10.0
RAY_SAMPLES = 64

H_KINDS = ("genus1-disk", "genus1-ray", "slit-torus")
WELD_KINDS = ("weld", "regular", "sample")


def _f(v: float) -> str:
    return f"{v:.4f}"


def _doc(body: list[str], title: str) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">'
    )
    return "\n".join([head, f"<title>{escape(title)}</title>",
                      f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
                      *body, "</svg>"]) + "\n"


class _Frame:
    """Affine map ℍ → viewport: x ↦ x0 + k·x, y ↦ base − k·y."""

    def __init__(self, xmin, xmax, ymax):
        span = max(xmax - xmin, 1e-9)
        self.k = min((WIDTH - 2 * MARGIN) / span, (HEIGHT - 2 * MARGIN) / ymax)
        self.x0 = WIDTH / 2 - self.k * (xmin + xmax) / 2
        self.base = HEIGHT - MARGIN
        self.xmin = (MARGIN - self.x0) / self.k
        self.xmax = (WIDTH - MARGIN - self.x0) / self.k

    def X(self, x):
        return self.x0 + self.k * x

    def Y(self, y):
        return self.base - self.k * y


def _num(v):
    return math.inf if v == "inf" else float(v)


def _collect_h(report: dict):
    disks, horos, rays, points = [], [], [], []
    for key in ("disk", "enlarged_disk", "finite_disk"):
        if isinstance(report.get(key), dict):
            disks.append((key, report[key]))
    for h in report.get("horocycles", []):
        horos.append(h)
    if isinstance(report.get("ray"), dict):
        rays.append((report["ray"], float(report.get("ray_length", 1.5))))
    for p in report.get("points", []):
        points.append(p["point"] if isinstance(p, dict) else p)
    return disks, horos, rays, points


def render_h_scene(report: dict, ceiling: float = DEFAULT_CEILING) -> str:
    disks, horos, rays, points = _collect_h(report)
    xs, ys = [-1.0, 1.0], [1.0]
    for _, d in disks:
        cx, cy, R = euclidean_circle(d["center"], d["radius"])
        xs += [cx - R, cx + R]
        ys.append(cy + R)
    for h in horos:
        tan = _num(h["tangency"])
        if math.isinf(tan):
            ys.append(float(h["height"]))
        else:
            xs += [tan - h["radius"], tan + h["radius"]]
            ys.append(2 * h["radius"])
    ray_paths = []
    for r, length in rays:
        ray = GeodesicRay(TauPoint.of(r["origin"]), _num(r["xi"]))
        pts = [geodesic_point(ray, length * k / RAY_SAMPLES) for k in range(RAY_SAMPLES + 1)]
        ray_paths.append(pts)
        xs += [p.x for p in pts]
        ys += [p.y for p in pts]
    for p in points:
        xs.append(p[0])
        ys.append(p[1])
    ymax = min(max(ys) * 1.1, ceiling)
    pad = 0.05 * (max(xs) - min(xs))
    fr = _Frame(min(xs) - pad, max(xs) + pad, ymax)

    body = [
        '<g id="axes" stroke="black" stroke-width="1">',
        f'<line x1="{MARGIN}" y1="{_f(fr.base)}" x2="{WIDTH - MARGIN}" y2="{_f(fr.base)}"/>',
        f'<line x1="{_f(fr.X(0))}" y1="{_f(fr.base)}" x2="{_f(fr.X(0))}" y2="{MARGIN}" '
        'stroke-dasharray="2,3"/>',
        "</g>",
        f'<clipPath id="clip"><rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
        f'height="{HEIGHT - 2 * MARGIN}"/></clipPath>',
        '<g clip-path="url(#clip)">',
    ]
    for h in horos:
        tan = _num(h["tangency"])
        if math.isinf(tan):
            y = _f(fr.Y(float(h["height"])))
            body.append(f'<line class="horocycle" data-t="{_f(h["t"])}" x1="{MARGIN}" y1="{y}" '
                        f'x2="{WIDTH - MARGIN}" y2="{y}" stroke="steelblue" fill="none"/>')
        else:
            body.append(
                f'<circle class="horocycle" data-t="{_f(h["t"])}" cx="{_f(fr.X(tan))}" '
                f'cy="{_f(fr.Y(h["height"]))}" r="{_f(fr.k * h["radius"])}" '
                'stroke="steelblue" fill="none"/>'
            )
            body.append(f'<circle class="tangency" cx="{_f(fr.X(tan))}" cy="{_f(fr.base)}" '
                        'r="3" fill="steelblue"/>')
    for key, d in disks:
        cx, cy, R = euclidean_circle(d["center"], d["radius"])
        body.append(f'<circle class="disk" id="{key}" cx="{_f(fr.X(cx))}" cy="{_f(fr.Y(cy))}" '
                    f'r="{_f(max(fr.k * R, 1.5))}" stroke="crimson" fill="crimson" '
                    'fill-opacity="0.15"/>')
    for pts in ray_paths:
        path = " ".join(f"{_f(fr.X(p.x))},{_f(fr.Y(p.y))}" for p in pts)
        body.append(f'<polyline class="ray" points="{path}" stroke="darkgreen" fill="none" '
                    'stroke-width="2"/>')
    for p in points:
        body.append(f'<circle class="point" cx="{_f(fr.X(p[0]))}" cy="{_f(fr.Y(p[1]))}" r="3" '
                    'fill="black"/>')
    body.append("</g>")
    return _doc(body, report.get("kind", "scene"))


def render_weld_graph(graph: dict | None, title: str = "weld graph") -> str:
    body = [
        '<g id="axes" stroke="lightgray" stroke-width="1">',
        f'<line x1="{MARGIN}" y1="{HEIGHT // 2}" x2="{WIDTH - MARGIN}" y2="{HEIGHT // 2}"/>',
        f'<line x1="{WIDTH // 2}" y1="{MARGIN}" x2="{WIDTH // 2}" y2="{HEIGHT - MARGIN}"/>',
        "</g>",
    ]
    vertices = (graph or {}).get("vertices", [])
    edges = (graph or {}).get("edges", [])
    n = len(vertices)
    radius = min(WIDTH, HEIGHT) / 2 - 2 * MARGIN
    pos = {}
    for k, v in enumerate(vertices):
        a = 2 * math.pi * k / max(n, 1) - math.pi / 2
        pos[v["id"]] = (WIDTH / 2 + radius * math.cos(a), HEIGHT / 2 + radius * math.sin(a))
    seen: dict[tuple, int] = {}
    body.append('<g id="edges" stroke="black" fill="none" stroke-width="2">')
    labels = []
    for e in edges:
        key = tuple(sorted((e["u"], e["v"])))
        m = seen.get(key, 0)
        seen[key] = m + 1
        (x1, y1), (x2, y2) = pos[e["u"]], pos[e["v"]]
        mx, my = (x1 + x2) / 2, (y1 + y2) / 2
        if e["u"] == e["v"]:
            cx, cy = x1 + 40 * (m + 1), y1 - 40 * (m + 1)
            body.append(f'<path class="edge" d="M {_f(x1)} {_f(y1)} Q {_f(cx)} {_f(cy)} '
                        f'{_f(x1)} {_f(y1)}"/>')
            lx, ly = cx, cy
        else:
            dx, dy = x2 - x1, y2 - y1
            norm = math.hypot(dx, dy) or 1.0
            # parallel edges bend alternately to either side
            bend = 0 if m == 0 else (1 if m % 2 else -1) * 30 * ((m + 1) // 2)
            cx, cy = mx - dy / norm * bend, my + dx / norm * bend
            body.append(f'<path class="edge" d="M {_f(x1)} {_f(y1)} Q {_f(cx)} {_f(cy)} '
                        f'{_f(x2)} {_f(y2)}"/>')
            lx, ly = (mx + cx) / 2, (my + cy) / 2
        labels.append(f'<text x="{_f(lx)}" y="{_f(ly)}" font-size="12">{escape(e["length"])}</text>')
    body.append("</g>")
    body.extend(labels)
    for v in vertices:
        x, y = pos[v["id"]]
        colour = "crimson" if v["order"] < 0 else "black"
        body.append(f'<circle class="vertex" cx="{_f(x)}" cy="{_f(y)}" r="5" fill="{colour}"/>')
        text = f'{"=".join(v["labels"])} ({v["order"]})'
        body.append(f'<text x="{_f(x + 8)}" y="{_f(y - 8)}" font-size="12">{escape(text)}</text>')
    return _doc(body, title)


def render_svg(report: dict, ceiling: float = DEFAULT_CEILING) -> str:
    kind = report.get("kind")
    if kind in H_KINDS:
        return render_h_scene(report, ceiling)
    if kind in WELD_KINDS:
        outcome = report.get("outcome")
        if outcome is None and report.get("samples"):
            outcome = report["samples"][0]["outcome"]
        outcome = outcome or {}
        return render_weld_graph(outcome.get("graph"), kind)
    raise ValidationError(f"no figure for report kind {kind!r}")

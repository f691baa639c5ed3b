"""Genus-one Teichmüller geometry on the upper half-plane.

Points τ ∈ ℍ mark tori ℂ/(ℤ + τℤ). Distances use the metric |dz|/(2 Im z),
half the curvature −1 hyperbolic metric. A measured foliation in the linear
family is fixed by a direction parameter t ∈ (−1, 1] and a scale r > 0.
Everything here is binary64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import ConvergenceError, InconsistentConstraints, ValidationError

INF = math.inf

NEWTON_DAMPING = 0.5
NEWTON_MAX_ITER = 200
NEWTON_TOL = 1e-10
MEMBERSHIP_TOL = 1e-9
BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class TauPoint:
    x: float
    y: float

    def __post_init__(self):
        x, y = float(self.x), float(self.y)
        if not (math.isfinite(x) and math.isfinite(y)) or y <= 0:
            raise ValidationError(f"τ must lie in the upper half-plane, got ({x}, {y})")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def of(cls, z) -> "TauPoint":
        if isinstance(z, TauPoint):
            return z
        if isinstance(z, complex):
            return cls(z.real, z.imag)
        x, y = z
        return cls(x, y)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class FoliationParam:
    t: float
    r: float = 1.0

    def __post_init__(self):
        t, r = float(self.t), float(self.r)
        if not -1.0 < t <= 1.0:
            raise ValidationError(f"foliation parameter t must lie in (-1, 1], got {t}")
        if not r > 0:
            raise ValidationError(f"foliation scale must be positive, got {r}")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "r", r)

    @property
    def angle(self) -> float:
        return self.t * math.pi / 2

    @property
    def c(self) -> float:
        return math.cos(self.angle)

    @property
    def s(self) -> float:
        return math.sin(self.angle)


@dataclass(frozen=True)
class HyperbolicDisk:
    center: TauPoint
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", TauPoint.of(self.center))
        rho = float(self.radius)
        if not (math.isfinite(rho) and rho >= 0):
            raise ValidationError(f"disk radius must be a finite number >= 0, got {rho}")
        object.__setattr__(self, "radius", rho)

    def euclidean(self) -> tuple[float, float, float]:
        """(cx, cy, R) of the Euclidean circle bounding the disk."""
        return euclidean_circle(self.center, self.radius)


def _foliation(F) -> FoliationParam:
    return F if isinstance(F, FoliationParam) else FoliationParam(F)


def euclidean_circle(center, rho: float) -> tuple[float, float, float]:
    c = TauPoint.of(center)
    return c.x, c.y * math.cosh(2 * rho), c.y * math.sinh(2 * rho)


def teich_distance(a, b) -> float:
    a, b = TauPoint.of(a), TauPoint.of(b)
    dx, dy = a.x - b.x, a.y - b.y
    # arccosh(1 + u) written via log1p for accuracy near u = 0
    u = (dx * dx + dy * dy) / (2 * a.y * b.y)
    return 0.5 * math.log1p(u + math.sqrt(u * (u + 2)))


def foliation_value(F, p: int, q: int) -> float:
    """Height of the class p + q·τ_0 (square torus) under F."""
    F = _foliation(F)
    if p == 0 and q == 0:
        raise ValidationError("the zero class has no height")
    w = complex(math.cos(F.angle), -math.sin(F.angle)) * complex(p, q)
    return F.r * abs(w.imag)


def ext_foliation(F, tau) -> float:
    F, tau = _foliation(F), TauPoint.of(tau)
    if F.t == 0:
        return F.r * F.r / tau.y
    c, s = F.c, F.s
    return F.r * F.r * ((c + s * tau.x) ** 2 + (s * tau.y) ** 2) / tau.y


def horocycle_center(t) -> float:
    t = _foliation(t).t
    if t == 0:
        return INF
    if t == 1:
        return 0.0
    return -1.0 / math.tan(t * math.pi / 2)


@dataclass(frozen=True)
class Horocycle:
    """Level set {ext_foliation(F, ·) = level}.

    ``tangency`` is the boundary point; for ``tangency = inf`` the set is the
    horizontal line ``Im τ = height`` and ``radius`` is ``inf``.
    """

    t: float
    level: float
    tangency: float
    height: float  # y of the Euclidean centre, or of the line
    radius: float

    def contains(self, tau, tol: float = 1e-9) -> bool:
        tau = TauPoint.of(tau)
        if math.isinf(self.tangency):
            return abs(tau.y - self.height) <= tol * max(1.0, self.height)
        d = math.hypot(tau.x - self.tangency, tau.y - self.height)
        return abs(d - self.radius) <= tol * max(1.0, self.radius)

    def point(self, angle: float) -> TauPoint:
        """Point at polar angle ``angle`` ∈ (−π/2, 3π/2) around the Euclidean centre
        (the tangency is at −π/2); for lines, ``angle`` is the x-coordinate."""
        if math.isinf(self.tangency):
            return TauPoint(angle, self.height)
        return TauPoint(self.tangency + self.radius * math.cos(angle),
                        self.height + self.radius * math.sin(angle))


def horocycle(F, level: float) -> Horocycle:
    F = _foliation(F)
    if not level > 0:
        raise ValidationError("extremal-length level must be positive")
    r2 = F.r * F.r
    if F.t == 0:
        return Horocycle(F.t, level, INF, r2 / level, INF)
    rad = level / (2 * r2 * F.s * F.s) if F.s * F.s > 0 else INF
    if math.isinf(rad):
        # s² underflows: the circle is a horizontal line to machine precision
        return Horocycle(F.t, level, INF, r2 * F.c * F.c / level, INF)
    return Horocycle(F.t, level, horocycle_center(F), rad, rad)


@dataclass(frozen=True)
class GeodesicRay:
    """Unit-speed d_T geodesic ray from ``origin`` moving away from the ideal point ``xi``."""

    origin: TauPoint
    xi: float

    def __post_init__(self):
        object.__setattr__(self, "origin", TauPoint.of(self.origin))
        xi = float(self.xi)
        if math.isnan(xi) or xi == -INF:
            raise ValidationError(f"bad ideal endpoint {self.xi!r}")
        object.__setattr__(self, "xi", xi)

    def __call__(self, s: float) -> TauPoint:
        return geodesic_point(self, s)

    def support(self) -> tuple[str, float, float]:
        """Euclidean support of the full geodesic: ("line", x, 0) or ("circle", a, R)."""
        o = self.origin
        if math.isinf(self.xi) or o.x == self.xi:
            return ("line", o.x, 0.0)
        a = (o.x * o.x + o.y * o.y - self.xi * self.xi) / (2 * (o.x - self.xi))
        return ("circle", a, abs(self.xi - a))

    def forward_endpoint(self) -> float:
        kind, a, R = self.support()
        if kind == "line":
            return INF if not math.isinf(self.xi) else self.origin.x
        return 2 * a - self.xi


def geodesic_point(ray: GeodesicRay, s: float) -> TauPoint:
    if s < 0:
        raise ValidationError("ray parameter must be nonnegative")
    o = ray.origin
    if s == 0:
        return o
    # Work in the frame z -> (z - x0)/y0 where the origin is i and the ideal point
    # is zeta; with q = 1/(1 + e^{2s}) the point is i(zeta q + i(1-q))/(zeta(1-q) + iq).
    # Dividing through by zeta keeps every term bounded when |zeta| is huge.
    e = math.exp(-2 * s)
    q, p = e / (1 + e), 1 / (1 + e)
    zeta = (ray.xi - o.x) / o.y if not math.isinf(ray.xi) else INF
    if abs(zeta) >= 1:
        k = 0.0 if math.isinf(zeta) else 1 / zeta
        w = 1j * complex(q, k * p) / complex(p, k * q)
    else:
        w = 1j * complex(zeta * q, p) / complex(zeta * p, q)
    return TauPoint(o.x + o.y * w.real, o.y * w.imag)


def geodesic_through(a, b) -> GeodesicRay:
    """Ray from ``b`` continuing the oriented geodesic a → b."""
    a, b = TauPoint.of(a), TauPoint.of(b)
    if a == b:
        raise ValidationError("a geodesic needs two distinct points")
    if a.x == b.x:
        return GeodesicRay(b, INF if b.y < a.y else a.x)
    center = (b.x ** 2 + b.y ** 2 - a.x ** 2 - a.y ** 2) / (2 * (b.x - a.x))
    R = math.hypot(a.x - center, a.y)
    xi = center - R if a.x < b.x else center + R
    return GeodesicRay(b, xi)


def max_ext_on_disk(F, disk: HyperbolicDisk) -> float:
    return math.exp(2 * disk.radius) * ext_foliation(F, disk.center)


def mk_disk(disk: HyperbolicDisk, K: float) -> HyperbolicDisk:
    if not K >= 1:
        raise ValidationError(f"dilatation K must be >= 1, got {K}")
    return HyperbolicDisk(disk.center, disk.radius + 0.5 * math.log(K))


def distance_to_disk(tau, disk: HyperbolicDisk) -> float:
    return max(teich_distance(tau, disk.center) - disk.radius, 0.0)


def project_to_disk(tau, disk: HyperbolicDisk) -> TauPoint:
    """Nearest point of the closed disk to ``tau``."""
    tau = TauPoint.of(tau)
    d = teich_distance(tau, disk.center)
    if d <= disk.radius:
        return tau
    back = geodesic_through(tau, disk.center)
    return geodesic_point(GeodesicRay(disk.center, back.forward_endpoint()), disk.radius)


def ioffe_ray_from_boundary(disk: HyperbolicDisk, tau, away_from: float | None = None
                            ) -> GeodesicRay:
    """Outward radial ray from a boundary point of ``disk``.

    A singleton disk has no radial direction; pass the ideal point
    ``away_from`` to pick one.
    """
    tau = TauPoint.of(tau)
    gap = teich_distance(tau, disk.center) - disk.radius
    if abs(gap) >= BOUNDARY_TOL:
        raise ValidationError(f"point is not on the disk boundary (off by {gap:.3g})")
    if disk.radius == 0 or tau == disk.center:
        if away_from is None:
            raise ValidationError("a singleton disk needs an explicit ray direction")
        return GeodesicRay(tau, away_from)
    return geodesic_through(disk.center, tau)


def ioffe_ray_through(disk: HyperbolicDisk, tau) -> tuple[GeodesicRay, float]:
    """The outward ray through an exterior point and the parameter where it passes."""
    tau = TauPoint.of(tau)
    d = teich_distance(tau, disk.center)
    if d <= disk.radius:
        raise ValidationError("point is not exterior to the disk")
    foot = project_to_disk(tau, disk)
    if disk.radius == 0:
        return GeodesicRay(foot, geodesic_through(tau, foot).forward_endpoint()), d
    return geodesic_through(disk.center, foot), d - disk.radius


def _log_residuals(v, ts, logm):
    x, eta, rho = v
    if abs(eta) > 300 or abs(x) > 1e100:
        return None
    y = math.exp(eta)
    res = np.empty(len(ts))
    jac = np.empty((len(ts), 3))
    for i, t in enumerate(ts):
        F = FoliationParam(t)
        c, s = F.c, F.s
        q = (c + s * x) ** 2 + (s * y) ** 2
        if not 0 < q < INF:
            return None
        res[i] = 2 * rho + math.log(q) - eta - logm[i]
        jac[i] = (2 * s * (c + s * x) / q, 2 * (s * y) ** 2 / q - 1, 2.0)
    return res, jac


def _damped_newton(v, ts, logm, shift, tol, budget):
    """Drive ``residual(v) - shift`` to zero; returns (v, residual, jacobian, iterations)."""
    res, jac = _log_residuals(v, ts, logm)
    res = res - shift
    norm = float(np.linalg.norm(res))
    used = 0
    while used < budget and np.max(np.abs(res)) >= tol:
        used += 1
        step = np.linalg.lstsq(jac, -res, rcond=None)[0]
        lam = 1.0
        while lam > 1e-12:
            out = _log_residuals(v + lam * step, ts, logm)
            if out is not None:
                r_try = out[0] - shift
                n_try = float(np.linalg.norm(r_try))
                if n_try < norm:
                    v, res, jac, norm = v + lam * step, r_try, out[1], n_try
                    break
            lam *= NEWTON_DAMPING
        else:
            break
    return v, res, jac, used


def _linear_guess(ts, ms):
    """Exact solve of the constraints after substituting P = y·e^{-2ρ}, W = x² + y².

    Each constraint becomes ``m P - 2cs x - s² W = c²``, linear in (P, x, W).
    Returns None when the solution has no real disk behind it.
    """
    rows, rhs = [], []
    for t, m in zip(ts, ms):
        F = FoliationParam(t)
        rows.append((m, -2 * F.c * F.s, -F.s * F.s))
        rhs.append(F.c * F.c)
    P, x, W = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)[0]
    y2 = W - x * x
    if not (P > 0 and y2 > 0):
        return None
    y = math.sqrt(y2)
    return np.array([x, math.log(y), -0.5 * math.log(P / y)])


def disk_from_horocycles(constraints: Iterable[tuple[float, float]]) -> HyperbolicDisk:
    """Recover the disk whose maximal extremal lengths are ``m`` at the given ``t``.

    Solves ``2ρ + log ext(t_i, x + iy) = log m_i`` by damped Newton in
    ``(x, log y, ρ)`` from ``(0, 0, 0)``; each step is halved until the
    residual norm decreases. With more than three constraints the steps are
    least-squares (Gauss-Newton) steps. If the plain iteration stalls, the
    iteration restarts from the exact solution of the linearised system and,
    failing that, follows the homotopy ``F(v) = (1 - λ) F(v0)``.
    """
    pairs = [(FoliationParam(t).t, float(m)) for t, m in constraints]
    if len(pairs) < 3:
        raise ValidationError("at least three horocycle constraints are needed")
    ts = [t for t, _ in pairs]
    if len(set(ts)) != len(ts):
        raise ValidationError("horocycle constraints need distinct t values")
    if any(not (m > 0 and math.isfinite(m)) for _, m in pairs):
        raise ValidationError("constraint levels must be positive")
    logm = np.log([m for _, m in pairs])
    v0 = np.array([0.0, 0.0, 0.0])
    zero = np.zeros(len(ts))
    v, res, jac, used = _damped_newton(v0, ts, logm, zero, NEWTON_TOL, NEWTON_MAX_ITER)
    if np.max(np.abs(res)) >= NEWTON_TOL:
        start = _linear_guess(ts, [m for _, m in pairs])
        if start is not None:
            v1, r1, j1, _ = _damped_newton(start, ts, logm, zero, NEWTON_TOL, NEWTON_MAX_ITER)
            if np.linalg.norm(r1) < np.linalg.norm(res):
                v, res, jac = v1, r1, j1
    if np.max(np.abs(res)) >= NEWTON_TOL:
        res0 = _log_residuals(v0, ts, logm)[0]
        v, budget = v0, NEWTON_MAX_ITER * 5
        for lam in np.linspace(0.0, 1.0, 41)[1:]:
            v, res, jac, k = _damped_newton(v, ts, logm, (1 - lam) * res0, 1e-6, budget)
            budget -= k
        v, res, jac, k = _damped_newton(v, ts, logm, zero, NEWTON_TOL, NEWTON_MAX_ITER)
    if np.max(np.abs(res)) < NEWTON_TOL:
        # a few extra steps past the tolerance cost nothing and tighten the centre
        v, res, jac, _ = _damped_newton(v, ts, logm, zero, 1e-15, 3)
    worst = float(np.max(np.abs(res)))
    if worst >= NEWTON_TOL:
        if len(ts) > 3 and float(np.linalg.norm(jac.T @ res)) < 1e-6 * max(1.0, worst):
            raise InconsistentConstraints(f"least-squares optimum leaves residual {worst:.3g}")
        raise ConvergenceError(f"damped Newton did not converge (residual {worst:.3g})")
    x, eta, rho = (float(a) for a in v)
    if rho < -1e-9:
        raise InconsistentConstraints(f"constraints force a negative radius {rho:.3g}")
    return HyperbolicDisk(TauPoint(x, math.exp(eta)), max(rho, 0.0))


def constraints_for(disk: HyperbolicDisk, ts: Sequence[float]) -> list[tuple[float, float]]:
    return [(t, max_ext_on_disk(t, disk)) for t in ts]


@dataclass(frozen=True)
class Membership:
    inside: bool
    witness_t: float | None
    max_ratio: float

    def __bool__(self):
        return self.inside


def _ratio(t, tau, disk):
    return ext_foliation(t, tau) / max_ext_on_disk(t, disk)


def membership(tau, disk: HyperbolicDisk, grid: int = 400) -> Membership:
    """Test ``ext(t, τ) ≤ max over the disk`` for all t.

    Scans a half-open grid on (−1, 1], then polishes the best grid cell by
    bounded scalar maximisation. A witness t is returned on failure.
    """
    tau = TauPoint.of(tau)
    ts = [-1 + 2 * (k + 1) / grid for k in range(grid)]
    vals = [_ratio(t, tau, disk) for t in ts]
    k = int(np.argmax(vals))
    best_t, best = ts[k], vals[k]
    lo, hi = ts[k] - 2 / grid, min(ts[k] + 2 / grid, 1.0)
    if lo <= -1:
        # the window wraps across t = ±1; search each piece separately
        pieces = [(-1 + 1e-15, hi), (lo + 2, 1.0)]
    else:
        pieces = [(lo, hi)]
    for a, b in pieces:
        if b <= a:
            continue
        opt = minimize_scalar(lambda t: -_ratio(t, tau, disk), bounds=(a, b),
                              method="bounded", options={"xatol": 1e-12})
        if -opt.fun > best:
            best_t, best = float(opt.x), float(-opt.fun)
    inside = best <= 1 + MEMBERSHIP_TOL
    return Membership(inside, None if inside else best_t, best)


@dataclass(frozen=True)
class SlitTorusFacts:
    tau0: TauPoint
    slit: Fraction
    classification: str
    closure_genus: int
    closure_regular: bool
    closure_zero_free: bool
    m0: float
    tangent_height: float
    finite_disk: HyperbolicDisk
    reopened_closed: bool


def slit_torus_signature(slit):
    from .surface import SurfaceSignature, as_length, make_component

    s0 = as_length(slit)
    if not 0 < s0 < 1:
        raise ValidationError(f"slit length must lie strictly between 0 and 1, got {s0}")
    return SurfaceSignature(1, (), (make_component("C", [("p", 2, s0), ("q", 2, s0)]),))


def slit_torus_scenario(tau0, slit) -> tuple[object, SlitTorusFacts]:
    """The slit torus, its regular closure and the genus-one data attached to them."""
    from .regular import classify_component, construct_regular, reopen_slit

    tau0 = TauPoint.of(tau0)
    sig = slit_torus_signature(slit)
    tag = classify_component(sig, "C").tag
    _, outcome = construct_regular(sig)
    closed = reopen_slit(outcome, 1)
    zero_free = all(o == 0 for o in closed.interior_orders()) and all(
        v.order == 0 for v in outcome.graph.vertices
    )
    m0 = ext_foliation(0, tau0)
    facts = SlitTorusFacts(
        tau0=tau0,
        slit=sig.border[0].arcs[0],
        classification=tag,
        closure_genus=outcome.result.genus,
        closure_regular=outcome.regular,
        closure_zero_free=zero_free,
        m0=m0,
        tangent_height=horocycle(0, m0).height,
        finite_disk=HyperbolicDisk(tau0, 0.0),
        reopened_closed=closed.closed,
    )
    return sig, facts

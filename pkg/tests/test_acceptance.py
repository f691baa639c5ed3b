"""Acceptance criteria. Each test prints one PASS/FAIL line (visible with -v or -s)."""

import math
import random
from fractions import Fraction as Q
from math import lcm

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from helpers import random_closed_welding, random_signature, random_welding
from weldlab import fixtures as fx
from weldlab.errors import BLCViolated
from weldlab.genus_one import (
    GeodesicRay,
    HyperbolicDisk,
    TauPoint,
    constraints_for,
    disk_from_horocycles,
    distance_to_disk,
    ext_foliation,
    horocycle,
    ioffe_ray_from_boundary,
    ioffe_ray_through,
    membership,
    mk_disk,
    project_to_disk,
    slit_torus_scenario,
    teich_distance,
)
from weldlab.oracle import enumerate_regular_weldings
from weldlab.regular import (
    EXCEPTIONAL,
    NOT_IN_AL,
    UNIQUE_I,
    UNIQUE_Y,
    check_blc,
    classify_component,
    construct_regular,
    reopen_slit,
    sample_exceptional_family,
)
from weldlab.surface import validate_signature
from weldlab.welding import instruction_canonical_key, weld


@pytest.fixture
def verdict(capsys):
    lines = []

    def record(number, title, checks):
        failed = [name for name, ok in checks.items() if not ok]
        status = "FAIL" if failed else "PASS"
        detail = f" (failed: {', '.join(failed)})" if failed else ""
        lines.append(f"[{status}] criterion {number}: {title}{detail}")
        with capsys.disabled():
            print("\n" + lines[-1])
        assert not failed, lines[-1]

    return record


def test_criterion_1_joukowski(verdict):
    out = weld(fx.joukowski(), fx.joukowski_instruction())
    verdict(1, "Joukowski welding closes to genus 0 with order sum -4", {
        "closed": out.closed,
        "genus 0": out.result.genus == 0,
        "vertex orders 0": all(v.order == 0 for v in out.graph.vertices),
        "order sum": sum(out.result.interior_orders()) == -4 == 4 * 0 - 4,
    })


def test_criterion_2_octant_torus(verdict):
    out = weld(fx.octant_disk(), fx.octant_torus_instruction())
    verdict(2, "octant pairing gives a torus with vertex orders {2,0,0}", {
        "genus 1": out.closed and out.result.genus == 1,
        "orders": sorted(v.order for v in out.graph.vertices) == [0, 0, 2],
        "order sum 0": sum(out.result.interior_orders()) == 0,
        "not a tree": not out.graph.is_forest(),
    })


def test_criterion_3_gauss_bonnet(verdict):
    rng = random.Random(2024)
    degree_ok = closed_ok = True
    total = closed = 0
    for _ in range(1000):
        sig, _, ins = random_welding(rng)
        out = weld(sig, ins)
        total += 1
        degree_ok &= all(out.graph.degree(v.id) <= v.order + 2 for v in out.graph.vertices)
        if out.closed:
            closed += 1
            closed_ok &= sum(out.result.interior_orders()) == 4 * out.result.genus - 4
    for _ in range(300):
        sig, _, ins = random_closed_welding(rng)
        out = weld(sig, ins)
        total += 1
        closed += out.closed
        closed_ok &= out.closed and sum(out.result.interior_orders()) == 4 * out.result.genus - 4
        degree_ok &= all(out.graph.degree(v.id) <= v.order + 2 for v in out.graph.vertices)
    verdict(3, f"Gauss-Bonnet and degree bound on {total} weldings ({closed} closed)", {
        "at least 1000": total >= 1000,
        "closed sums": closed_ok,
        "degree bound": degree_ok,
    })


def _construct_ok(sig):
    try:
        construct_regular(sig)
        return True
    except BLCViolated:
        return False


def test_criterion_4_blc_iff_regular(verdict):
    fixtures_ok = all(
        _construct_ok(f()) == all(r.ok for r in check_blc(f()).values())
        for f in fx.SIGNATURES.values())
    rng = random.Random(4)
    fuzz_ok, fuzzed = True, 0
    for _ in range(150):
        sig = random_signature(rng, zero_prob=0.6, poles=False)
        fuzzed += 1
        fuzz_ok &= _construct_ok(sig) == all(r.ok for r in check_blc(sig).values())
    # exhaustive only-if: a failing component has no regular grid welding at all
    only_if_ok, certified = True, 0
    candidates = [fx.long_trajectory(), fx.single_zero(), fx.zero_free()]
    for _ in range(200):
        candidates.append(random_signature(rng, max_components=1, max_cells=12,
                                           zero_prob=0.5, poles=False))
    for sig in candidates:
        comp = sig.border[0]
        if check_blc(sig)[comp.id].ok:
            continue
        step = min(Q(1, 12), *comp.arcs)
        d = int(comp.length / step)
        if d % 2:
            d *= 2
        if d > 24 or any((a * d / comp.length).denominator != 1 for a in comp.arcs):
            continue
        certified += 1
        only_if_ok &= enumerate_regular_weldings(sig, comp.id, d).regular == 0
    verdict(4, f"balance condition iff regular welding ({fuzzed} fuzzed, "
               f"{certified} grids certified)", {
        "fixtures": fixtures_ok,
        "fuzzed": fuzz_ok and fuzzed >= 100,
        "enumeration only-if": only_if_ok and certified >= 20,
    })


def _definition_tag(comp):
    """Tag straight from the zero positions on the circle."""
    pos, acc = [], Q(0)
    for p, a in zip(comp.points, comp.arcs):
        if p.order > 0:
            pos.append(acc)
        acc += a
    total, half = comp.length, comp.length / 2
    if not pos:
        return NOT_IN_AL
    gaps = [(pos[(k + 1) % len(pos)] - pos[k]) % total or total for k in range(len(pos))]
    if max(gaps) > half:
        return NOT_IN_AL
    if half in gaps:
        return UNIQUE_I
    return UNIQUE_Y if len(gaps) == 3 else EXCEPTIONAL


def test_criterion_5_exceptionality(verdict):
    classify_ok = all(classify_component(f(), c.id).tag == _definition_tag(c)
                      for f in fx.SIGNATURES.values() for c in f().border)
    sampler_ok, unique_ok, enumerated = True, True, 0
    for f in fx.SIGNATURES.values():
        sig = f()
        for comp in sig.border:
            tag = classify_component(sig, comp.id).tag
            if tag == EXCEPTIONAL:
                keys = {instruction_canonical_key(sample_exceptional_family(sig, comp.id, s), sig)
                        for s in (Q(1, 40), Q(1, 20))}
                outs = [weld(sig, sample_exceptional_family(sig, comp.id, s))
                        for s in (Q(1, 40), Q(1, 20))]
                sampler_ok &= len(keys) >= 2 and all(o.regular and o.full for o in outs)
            elif tag in (UNIQUE_I, UNIQUE_Y) and not sig.has_interior_poles():
                # every even grid up to 24 that carries the border points
                base = lcm(*((a / comp.length).denominator for a in comp.arcs))
                grids = [d for d in range(base, 25, base) if d % 2 == 0]
                unique_ok &= bool(grids)
                for d in grids:
                    tr = enumerate_regular_weldings(sig, comp.id, d)
                    unique_ok &= len(tr.keys) == 1
                enumerated += len(grids)
    verdict(5, "exceptional classification, sampler and uniqueness", {
        "classifier": classify_ok,
        "sampler": sampler_ok,
        "unique enumeration": unique_ok and enumerated >= 3,
    })


def test_criterion_6_genus_one_anchors(verdict):
    rng = random.Random(6)
    exact = all(ext_foliation(0, (x, y)) == 1 / y
                for x, y in ((rng.uniform(-5, 5), rng.uniform(0.01, 10)) for _ in range(200)))
    grid = [-0.99 + 0.02 * k for k in range(100)]
    tangency_err = growth_err = 0.0
    for t in grid:
        h = horocycle(t, 1.7)
        centre = -1 / math.tan(t * math.pi / 2)
        tangency_err = max(tangency_err, abs(h.tangency - centre) / max(1, abs(centre)),
                           abs(h.height - h.radius) / h.radius)
        for ang in (-1.2, 0.0, 1.5, 3.0):
            tangency_err = max(tangency_err, abs(ext_foliation(t, h.point(ang)) / 1.7 - 1))
        origin = TauPoint(rng.uniform(-2, 2), rng.uniform(0.2, 4))
        ray = GeodesicRay(origin, centre)
        for s in (0.25, 1.0, 2.0):
            ratio = ext_foliation(t, ray(s)) / ext_foliation(t, origin)
            growth_err = max(growth_err, abs(ratio / math.exp(2 * s) - 1))
    line = horocycle(0, 2.0)
    verdict(6, f"genus-one anchors (tangency err {tangency_err:.1e}, "
               f"growth err {growth_err:.1e})", {
        "ext at t=0": exact,
        "tangency": tangency_err < 1e-9 and math.isinf(line.tangency) and line.height == 0.5,
        "e^2s growth": growth_err < 1e-9,
        "d(i,2i)": abs(teich_distance(1j, 2j) - 0.5 * math.log(2)) < 1e-12,
    })


DISKS = [HyperbolicDisk((0, 2), 0.5 * math.log(2)), HyperbolicDisk((1.5, 0.4), 0.8),
         HyperbolicDisk((-2, 3), 0.05)]


def _boundary(disk, theta):
    cx, cy, R = disk.euclidean()
    return TauPoint(cx + R * math.cos(theta), cy + R * math.sin(theta))


def _brute_projection(tau, disk, n=720):
    cx, cy, R = disk.euclidean()
    th = np.linspace(0, 2 * math.pi, n, endpoint=False)
    x, y = cx + R * np.cos(th), cy + R * np.sin(th)
    u = ((x - tau.x) ** 2 + (y - tau.y) ** 2) / (2 * y * tau.y)
    k = int(np.argmin(u))

    def f(a):
        p = _boundary(disk, a)
        return teich_distance(p, tau)

    opt = minimize_scalar(f, bounds=(th[k] - 2 * math.pi / n, th[k] + 2 * math.pi / n),
                          method="bounded", options={"xatol": 1e-13})
    return _boundary(disk, opt.x), opt.fun


def test_criterion_7_ioffe_geometry(verdict):
    dist_err = ball_err = 0.0
    ball_ok = True
    for disk in DISKS:
        for theta in np.linspace(0.1, 2 * math.pi, 7):
            start = _boundary(disk, theta)
            ray = ioffe_ray_from_boundary(disk, start)
            for sigma in (0.0, 0.2, 0.7, 1.5):
                enlarged = mk_disk(disk, math.exp(2 * sigma))
                for t in (0.0, 0.1, 0.5, 1.0, 2.0):
                    d = distance_to_disk(ray(t), enlarged)
                    dist_err = max(dist_err, abs(d - max(t - sigma, 0.0)))
                for rho in (0.3, 1.0):
                    centre, touch = ray(rho + sigma), ray(sigma)
                    foot = project_to_disk(centre, enlarged)
                    ball_err = max(ball_err, abs(distance_to_disk(centre, enlarged) - rho),
                                   teich_distance(foot, touch))
                    # points of the sphere away from the touching point miss the enlarged disk
                    for phi in np.linspace(0, 2 * math.pi, 24, endpoint=False):
                        q = GeodesicRay(centre, math.tan(phi / 2))(rho)
                        if teich_distance(q, touch) > 1e-2:
                            ball_ok &= distance_to_disk(q, enlarged) > 0
    rng = np.random.default_rng(7)
    unique_ok, tested = True, 0
    while tested < 1000:
        disk = DISKS[tested % 3]
        cx, cy, R = disk.euclidean()
        tau = TauPoint(cx + rng.uniform(-3, 3) * R, max(1e-2, cy + rng.uniform(-3, 3) * R))
        if teich_distance(tau, disk.center) <= disk.radius + 1e-3:
            continue
        tested += 1
        foot = project_to_disk(tau, disk)
        brute, dmin = _brute_projection(tau, disk)
        ray, s = ioffe_ray_through(disk, tau)
        unique_ok &= (abs(teich_distance(tau, foot) - dmin) < 1e-8
                      and teich_distance(foot, brute) < 1e-6
                      and teich_distance(ray(s), tau) < 1e-8
                      and teich_distance(ray(0), foot) < 1e-8)
    verdict(7, f"Ioffe rays (distance err {dist_err:.1e}, ball err {ball_err:.1e}, "
               f"{tested} exterior points)", {
        "distance law": dist_err < 1e-6,
        "ball tangency": ball_err < 1e-6 and ball_ok,
        "unique ray": unique_ok,
    })


def test_criterion_8_envelope_solver(verdict):
    rng = np.random.default_rng(8)
    worst = 0.0
    for _ in range(100):
        disk = HyperbolicDisk((rng.uniform(-3, 3), math.exp(rng.uniform(-1.5, 1.5))),
                              rng.uniform(0, 2))
        ts = rng.choice(np.linspace(-0.95, 1.0, 40), size=int(rng.integers(3, 7)), replace=False)
        out = disk_from_horocycles(constraints_for(disk, ts))
        worst = max(worst, abs(out.center.x - disk.center.x),
                    abs(out.center.y / disk.center.y - 1), abs(out.radius - disk.radius))
    fixture = disk_from_horocycles([(0, 1), (1, 4), (0.5, 2.5)])
    verdict(8, f"envelope solver round trip (worst {worst:.1e})", {
        "round trip": worst < 1e-8,
        "fixture": (abs(fixture.center.x) < 1e-9 and abs(fixture.center.y - 2) < 1e-9
                    and abs(fixture.radius - 0.5 * math.log(2)) < 1e-9),
    })


def test_criterion_9_slit_torus(verdict):
    tau0 = TauPoint(0.3, 1.4)
    sig, facts = slit_torus_scenario(tau0, "1/2")
    _, outcome = construct_regular(sig)
    closed = reopen_slit(outcome, 1)
    line = horocycle(0, facts.m0)
    rng = random.Random(9)
    bound_ok = True
    for _ in range(300):
        tau = TauPoint(rng.uniform(-3, 3), rng.uniform(0.05, 4))
        below = ext_foliation(0, tau) > facts.m0
        bound_ok &= below == (tau.y < tau0.y)
        if tau.y < tau0.y * (1 - 1e-9):
            bound_ok &= not membership(tau, facts.finite_disk)
    verdict(9, "slit torus end to end", {
        "valid": validate_signature(sig).ok,
        "UniqueIShaped": facts.classification == UNIQUE_I,
        "closure": (facts.closure_genus == 1 and facts.closure_regular
                    and facts.closure_zero_free),
        "finite case": closed.closed and closed.genus == 1 and facts.finite_disk.radius == 0,
        "tangent line": abs(line.height - tau0.y) < 1e-12 and abs(facts.m0 - 1 / tau0.y) < 1e-15,
        "Im bound": bound_ok,
    })

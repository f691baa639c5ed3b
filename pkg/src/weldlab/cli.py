"""Command-line front end.

    weldlab <command> <scenario.json> [-o out.json] [--svg fig.svg] [--seed N]
            [--grid-denominator D]

Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 mathematical
precondition failure (for example the border length condition).
"""

from __future__ import annotations

import argparse
import math
import sys
from fractions import Fraction

import numpy as np

from . import genus_one as g1
from . import serialize as ser
from .errors import MathError, ValidationError
from .oracle import enumerate_regular_weldings
from .regular import (
    check_blc,
    classify_component,
    construct_regular,
    exceptional_slide_bound,
    is_in_AU,
    reopen_slit,
    sample_exceptional_family,
)
from .surface import format_length, require_valid, validate_signature
from .svg import render_svg
from .welding import instruction_canonical_key, weld

COMMANDS = ("weld", "regular", "classify", "sample", "enumerate",
            "genus1-disk", "genus1-ray", "slit-torus")


def _signature(sc):
    sig = ser.signature_from_json(sc.get("signature"))
    require_valid(sig)
    return sig


def _components(sc, sig):
    comps = sc.get("components")
    if comps is None:
        return [c.id for c in sig.border]
    if not isinstance(comps, list) or not all(isinstance(c, str) for c in comps):
        raise ValidationError("components: expected a list of component ids")
    for cid in comps:
        sig.component(cid)
    return comps


def run_weld(sc, opts):
    sig = _signature(sc)
    ins = ser.instruction_from_json(sc.get("instruction"))
    out = weld(sig, ins)
    return {
        "signature": ser.signature_to_json(sig),
        "instruction": ser.instruction_to_json(ins),
        "outcome": ser.outcome_to_json(out),
        "canonical_key": instruction_canonical_key(ins, sig),
    }


def _blc_json(res):
    off = res.offending
    return {
        "ok": res.ok,
        "offending": None if off is None else {
            "length": format_length(off.length), "start": off.start, "end": off.end,
        },
    }


def run_regular(sc, opts):
    sig = _signature(sc)
    comps = _components(sc, sig)
    blc = check_blc(sig, comps)
    report = {"blc": {cid: _blc_json(r) for cid, r in sorted(blc.items())}}
    ins, out = construct_regular(sig, comps)
    report.update({
        "instruction": ser.instruction_to_json(ins),
        "outcome": ser.outcome_to_json(out),
        "canonical_key": instruction_canonical_key(ins, sig),
    })
    return report


def run_classify(sc, opts):
    sig = _signature(sc)
    comps = _components(sc, sig)
    classes = [ser.classification_to_json(classify_component(sig, cid)) for cid in comps]
    report = {"classifications": classes}
    if len(classes) == 1:
        report["tag"] = classes[0]["tag"]
    report["in_AU"] = is_in_AU(sig) if all(r.ok for r in check_blc(sig).values()) else None
    return report


def run_sample(sc, opts):
    sig = _signature(sc)
    cid = sc.get("component", sig.border[0].id if sig.border else None)
    if not isinstance(cid, str):
        raise ValidationError("sample: missing component id")
    values = sc.get("s", [])
    if not isinstance(values, list) or not values:
        raise ValidationError("sample: 's' must be a nonempty list of 'num/den' strings")
    samples = []
    for v in values:
        s = ser._rational(v, "sample.s")
        ins = sample_exceptional_family(sig, cid, s)
        samples.append({
            "s": format_length(s),
            "instruction": ser.instruction_to_json(ins),
            "outcome": ser.outcome_to_json(weld(sig, ins)),
            "canonical_key": instruction_canonical_key(ins, sig),
        })
    return {
        "component": cid,
        "bound": format_length(exceptional_slide_bound(sig, cid)),
        "samples": samples,
        "distinct_keys": len({x["canonical_key"] for x in samples}),
    }


def run_enumerate(sc, opts):
    sig = _signature(sc)
    cid = sc.get("component", sig.border[0].id if sig.border else None)
    if not isinstance(cid, str):
        raise ValidationError("enumerate: missing component id")
    d = opts.grid_denominator if opts.grid_denominator is not None else sc.get("grid_denominator", 24)
    transcript = enumerate_regular_weldings(sig, cid, d)
    report = transcript.to_dict()
    report["classification"] = classify_component(sig, cid).tag
    report["blc"] = _blc_json(check_blc(sig, [cid])[cid])
    return report


def _horocycle_json(h: g1.Horocycle):
    return {
        "t": h.t, "level": h.level,
        "tangency": "inf" if math.isinf(h.tangency) else h.tangency,
        "height": h.height,
        "radius": "inf" if math.isinf(h.radius) else h.radius,
    }


def _probe(tau, disk):
    m = g1.membership(tau, disk)
    return {
        "point": ser.point_to_json(tau),
        "inside": m.inside,
        "witness_t": m.witness_t,
        "distance": g1.teich_distance(tau, disk.center),
    }


def run_genus1_disk(sc, opts):
    cons = ser.constraints_from_json(sc.get("constraints"))
    disk = g1.disk_from_horocycles(cons)
    residual = max(abs(g1.max_ext_on_disk(t, disk) / m - 1) for t, m in cons)
    probes = [ser._point(p, "probes") for p in sc.get("probes", [])]
    n_random = sc.get("random_probes", 0)
    if n_random:
        rng = np.random.default_rng(opts.seed)
        for _ in range(int(n_random)):
            probes.append(g1.TauPoint(disk.center.x + rng.uniform(-3, 3) * disk.center.y,
                                      disk.center.y * math.exp(rng.uniform(-2, 2))))
    cx, cy, R = disk.euclidean()
    return {
        "constraints": ser.constraints_to_json(cons),
        "disk": ser.disk_to_json(disk),
        "euclidean": {"center": [cx, cy], "radius": R},
        "max_relative_residual": residual,
        "horocycles": [_horocycle_json(g1.horocycle(t, m)) for t, m in cons],
        "points": [_probe(p, disk) for p in probes],
        "seed": opts.seed,
    }


def run_genus1_ray(sc, opts):
    disk = ser.disk_from_json(sc.get("disk"))
    if "boundary_point" in sc:
        tau = ser._point(sc["boundary_point"], "boundary_point")
        away = sc.get("away_from")
        away = math.inf if away == "inf" else away
        ray = g1.ioffe_ray_from_boundary(disk, tau, away)
        passes = None
    elif "through" in sc:
        tau = ser._point(sc["through"], "through")
        ray, passes = g1.ioffe_ray_through(disk, tau)
    else:
        raise ValidationError("genus1-ray: give 'boundary_point' or 'through'")
    samples = sc.get("samples", [0.0, 0.5, 1.0])
    sigmas = sc.get("sigmas", [0.0])
    table = []
    for sigma in sigmas:
        big = g1.mk_disk(disk, math.exp(2 * sigma))
        for s in samples:
            p = g1.geodesic_point(ray, s)
            table.append({"s": float(s), "sigma": float(sigma), "point": ser.point_to_json(p),
                          "distance": g1.distance_to_disk(p, big),
                          "expected": max(s - sigma, 0.0)})
    return {
        "disk": ser.disk_to_json(disk),
        "ray": ser.ray_to_json(ray),
        "ray_length": float(max(samples)) if samples else 1.0,
        "passes_at": passes,
        "distances": table,
        "points": [ser.point_to_json(tau)],
    }


def run_slit_torus(sc, opts):
    tau0 = ser._point(sc.get("tau0", [0.0, 1.0]), "tau0")
    slit = ser._rational(sc.get("slit", "1/2"), "slit")
    sig, facts = g1.slit_torus_scenario(tau0, slit)
    _, closure = construct_regular(sig)
    reopened = {format_length(Fraction(t)): ser.signature_to_json(reopen_slit(closure, t))
                for t in (Fraction(0), Fraction(1, 2), Fraction(1))}
    return {
        "signature": ser.signature_to_json(sig),
        "valid": validate_signature(sig).ok,
        "classification": facts.classification,
        "outcome": ser.outcome_to_json(closure),
        "reopened": reopened,
        "facts": {
            "closure_genus": facts.closure_genus,
            "closure_regular": facts.closure_regular,
            "closure_zero_free": facts.closure_zero_free,
            "m0": facts.m0,
            "tangent_height": facts.tangent_height,
            "reopened_closed": facts.reopened_closed,
        },
        "finite_disk": ser.disk_to_json(facts.finite_disk),
        "horocycles": [_horocycle_json(g1.horocycle(0, facts.m0))],
        "points": [ser.point_to_json(tau0)],
    }


RUNNERS = {
    "weld": run_weld,
    "regular": run_regular,
    "classify": run_classify,
    "sample": run_sample,
    "enumerate": run_enumerate,
    "genus1-disk": run_genus1_disk,
    "genus1-ray": run_genus1_ray,
    "slit-torus": run_slit_torus,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weldlab", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("scenario", help="scenario JSON file")
    p.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
    p.add_argument("--svg", help="also write an SVG figure")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized probes")
    p.add_argument("--grid-denominator", type=int, default=None,
                   help="grid size for the exhaustive enumeration")
    return p


def run(command: str, scenario: dict, opts) -> dict:
    kind = scenario.get("kind") if isinstance(scenario, dict) else None
    if not isinstance(scenario, dict):
        raise ValidationError("scenario must be a JSON object")
    if kind is not None and kind != command and command != "enumerate":
        raise ValidationError(f"scenario kind {kind!r} does not match command {command!r}")
    report = RUNNERS[command](scenario, opts)
    report["kind"] = command
    return report


def main(argv=None) -> int:
    opts = build_parser().parse_args(argv)
    try:
        with open(opts.scenario, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"weldlab: cannot read {opts.scenario}: {exc}", file=sys.stderr)
        return 1
    try:
        report = run(opts.command, ser.loads(text), opts)
        out = ser.dumps(report)
        figure = render_svg(report) if opts.svg else None
    except ValidationError as exc:
        print(f"weldlab: invalid input: {exc}", file=sys.stderr)
        return 2
    except MathError as exc:
        print(f"weldlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    try:
        if opts.output:
            with open(opts.output, "w", encoding="utf-8") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
        if figure is not None:
            with open(opts.svg, "w", encoding="utf-8") as fh:
                fh.write(figure)
    except OSError as exc:
        print(f"weldlab: cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

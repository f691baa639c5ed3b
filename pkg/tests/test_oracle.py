import random
from fractions import Fraction as Q
from math import comb

import pytest

from helpers import random_signature
from weldlab import fixtures as fx
from weldlab import _matchings_py
from weldlab.errors import BLCViolated, ValidationError
from weldlab.kernels import BACKEND
from weldlab.oracle import enumerate_regular_weldings
from weldlab.regular import check_blc, construct_regular, sample_exceptional_family
from weldlab.welding import instruction_canonical_key

try:
    from weldlab import _matchings as _compiled
except ImportError:  # pragma: no cover
    _compiled = None


def catalan(m):
    return comb(2 * m, m) // (m + 1)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 10, 12, 14])
def test_python_kernel_counts_catalan(n):
    total, kept = _matchings_py.enumerate_regular_matchings(n, [True] * n)
    assert total == catalan(n // 2) == len(kept)


def test_odd_segment_count_has_no_matchings():
    assert _matchings_py.enumerate_regular_matchings(5, [True] * 5) == (0, [])


def test_kernel_rejects_wrong_mask_length():
    with pytest.raises(ValueError):
        _matchings_py.enumerate_regular_matchings(4, [True] * 3)


def test_kept_matchings_are_non_crossing_and_fold_only_at_allowed_points():
    rng = random.Random(31)
    for _ in range(30):
        n = rng.choice([6, 8, 10, 12])
        ok = [rng.random() < 0.5 for _ in range(n)]
        _, kept = _matchings_py.enumerate_regular_matchings(n, ok)
        for mate in kept:
            assert all(mate[mate[i]] == i != mate[i] for i in range(n))
            for i in range(n):
                for k in range(n):
                    a, b = sorted((i, mate[i]))
                    c, d = sorted((k, mate[k]))
                    assert not (a < c < b < d)
            for p in range(n):
                if mate[p] == (p - 1) % n:  # segments p-1 and p fold at point p
                    assert ok[p]


@pytest.mark.skipif(_compiled is None, reason="extension not built")
def test_compiled_kernel_matches_python():
    rng = random.Random(32)
    for n in [0, 2, 4, 8, 12, 16]:
        for _ in range(5):
            ok = [rng.random() < 0.4 for _ in range(n)]
            assert (_compiled.enumerate_regular_matchings(n, ok)
                    == _matchings_py.enumerate_regular_matchings(n, ok))


def test_slit_torus_has_exactly_the_constructed_welding():
    sig = fx.slit_torus()
    tr = enumerate_regular_weldings(sig, "C", 24)
    assert tr.candidates == catalan(12) == 208012
    assert tr.regular == 1
    assert tr.keys == (instruction_canonical_key(construct_regular(sig)[0], sig),)
    assert tr.backend == BACKEND


def test_y_three_has_one_welding():
    sig = fx.y_three()
    tr = enumerate_regular_weldings(sig, "C", 20)
    assert tr.keys == (instruction_canonical_key(construct_regular(sig)[0], sig),)


def test_unique_i_four():
    sig = fx.unique_i_four()
    tr = enumerate_regular_weldings(sig, "C", 20)
    assert tr.keys == (instruction_canonical_key(construct_regular(sig)[0], sig),)


def test_exceptional_has_several_and_contains_sample():
    sig = fx.exceptional_split()
    tr = enumerate_regular_weldings(sig, "C", 20)
    assert len(tr.keys) > 1
    sample = sample_exceptional_family(sig, "C", Q(1, 20))
    assert instruction_canonical_key(sample, sig) in tr.keys
    assert instruction_canonical_key(construct_regular(sig)[0], sig) in tr.keys


def test_long_trajectory_has_none():
    tr = enumerate_regular_weldings(fx.long_trajectory(), "C", 24)
    assert tr.regular == 0 and tr.keys == ()


def test_interior_pole_has_none():
    assert enumerate_regular_weldings(fx.joukowski(), "C", 8).regular == 0


def test_python_backend_injection_agrees():
    sig = fx.exceptional_fold()
    a = enumerate_regular_weldings(sig, "C", 20)
    b = enumerate_regular_weldings(sig, "C", 20, kernel=_matchings_py.enumerate_regular_matchings)
    assert a.keys == b.keys and a.candidates == b.candidates
    assert b.backend == "weldlab._matchings_py"


@pytest.mark.parametrize("d", [0, 7, 34])
def test_grid_errors(d):
    with pytest.raises(ValidationError):
        enumerate_regular_weldings(fx.y_three(), "C", d)


def test_regular_welding_on_grid_requires_blc():
    # every regular grid welding found forces the balance condition, and whenever
    # the construction lies on the grid the oracle finds it
    rng = random.Random(33)
    nonempty = empty = found = 0
    for _ in range(120):
        sig = random_signature(rng, max_components=1, max_cells=12, zero_prob=0.6,
                               poles=False)
        comp = sig.border[0]
        d = int(comp.length * 12)
        if d > 12:
            continue
        d *= 2
        tr = enumerate_regular_weldings(sig, comp.id, d)
        ok = check_blc(sig)[comp.id].ok
        if tr.regular:
            nonempty += 1
            assert ok
        else:
            empty += 1
        if ok:
            try:
                ins, _ = construct_regular(sig)
            except BLCViolated:  # pragma: no cover
                pytest.fail("balance holds but construction failed")
            key = instruction_canonical_key(ins, sig)
            base = ins.signature_for(sig)
            step = comp.length / d
            if all((x / step).denominator == 1 for p in ins.pairs for r in p
                   for x in (r.start_position(base), r.length(base))):
                assert key in tr.keys
                found += 1
    assert nonempty > 5 and empty > 5 and found > 5


def test_fallback_is_selected_without_extension(monkeypatch):
    import importlib
    import sys

    import weldlab.kernels as kernels

    monkeypatch.setitem(sys.modules, "weldlab._matchings", None)
    try:
        importlib.reload(kernels)
        assert kernels.BACKEND == "python"
        assert kernels.enumerate_regular_matchings is _matchings_py.enumerate_regular_matchings
    finally:
        monkeypatch.undo()
        importlib.reload(kernels)

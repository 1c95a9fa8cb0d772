"""Acceptance criteria 1-8, one reported line per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the verdict lines are
written to the terminal even when output capture is on.
"""

import time

import numpy as np
import pytest

from coxdec.catalog import all_entries
from coxdec.diagram import remove_node
from coxdec.firsttype import enumerate_decompositions, glue
from coxdec.geometry import Kind, classify_simplex, gram_of, realize, reflection_matrix
from coxdec.reproduce import (
    check_certificate,
    check_six_pairs,
    check_table3,
    check_table4,
    check_table5,
    check_tilings,
    check_volumes,
)


@pytest.fixture
def report(capsys):
    def emit(number, checks, seconds, bound=None):
        hard = [c for c in checks if not c.soft]
        ok = all(c.passed for c in hard) and (bound is None or seconds < bound)
        soft = hard == []
        tag = "PASS" if ok and all(c.passed for c in checks) else ("DIFF" if soft else "FAIL")
        timing = f"{seconds:.2f} s" + (f" (bound {bound} s)" if bound is not None else "")
        with capsys.disabled():
            print(f"\ncriterion {number}: {tag} [{timing}]")
            for c in checks:
                if not c.passed:
                    print(f"    {c.line()}")
        return ok

    return emit


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def test_criterion_1_volume_ratios(report):
    checks, dt = timed(check_volumes)
    assert report(1, checks, dt, bound=1.0)
    assert len(checks) == 4


def test_criterion_2_six_pairs(report):
    checks, dt = timed(check_six_pairs)
    assert report(2, checks, dt, bound=1.0)


def test_criterion_3_table5_certificates(report):
    checks, dt = timed(check_table5)
    assert report(3, checks, dt, bound=1.0)


def test_criterion_4_tilings(report):
    checks, dt = timed(check_tilings)
    ok = report(4, checks, dt, bound=60.0)
    assert ok, "; ".join(c.line() for c in checks if not c.passed)


def test_criterion_5_normal_certificate(report):
    checks, dt = timed(check_certificate)
    assert report(5, checks, dt, bound=10.0)


def test_criterion_6_table3(report):
    checks, dt = timed(check_table3)
    assert report(6, checks, dt)
    assert len(checks) == 29


def congruent_facet_pairs(universe):
    """All ``(a, i, b, j)`` whose facets have equal Gram signatures."""
    by_sig = {}
    for g in universe:
        for i in range(g.diagram.size):
            by_sig.setdefault(g.facet_data(i)[3], []).append((g, i))
    return [(a, i, b, j) for group in by_sig.values() for a, i in group for b, j in group]


def _property_checks(seed: int = 7):
    from coxdec.reproduce import Check

    out = []
    bad = []
    for e in all_entries():
        if classify_simplex(e.diagram).kind is not Kind.HYPERBOLIC:
            bad.append(e.notation)
        for v in range(e.diagram.size):
            if classify_simplex(remove_node(e.diagram, v)).kind not in (Kind.ELLIPTIC, Kind.PARABOLIC):
                bad.append(f"{e.notation} - {v}")
    out.append(Check("signature trichotomy", not bad, f"violations {bad}" if bad else "all entries and links"))

    rng = np.random.default_rng(seed)
    enum = enumerate_decompositions("H1^5")
    universe = enum.simplices
    pairs = congruent_facet_pairs(universe)
    errors, produced = 0, 0
    for k in rng.integers(len(pairs), size=1000):
        a, i, b, j = pairs[k]
        for g in glue(enum.fundamental, a, i, b, j):
            produced += 1
            angles_ok = all(0 < float(x) < 1 for _, _, x in g.diagram.edges())
            errors += not (angles_ok and g.N == a.N + b.N == len(g.tiles))
    out.append(Check("gluing soundness", errors == 0 and produced > 0,
                     f"1000 attempts, {produced} gluings, {errors} violations"))

    worst = 0.0
    for e in all_entries():
        r = realize(gram_of(e.diagram))
        j = np.diag([1.0] * (r.size - 1) + [-1.0])
        for k in range(r.size):
            m = reflection_matrix(r.normals[:, k])
            worst = max(worst, float(np.max(np.abs(m.T @ j @ m - j))))
    out.append(Check("reflection form preservation", worst <= 1e-7, f"max deviation {worst:.1e}"))

    one = enumerate_decompositions("H2^4", workers=1)
    four = enumerate_decompositions("H2^4", workers=4)
    same = [(g.key, g.N) for g in one.simplices] == [(g.key, g.N) for g in four.simplices]
    out.append(Check("enumeration determinism", same, f"{len(one.simplices)} shapes with 1 and 4 workers"))
    return out


def test_criterion_7_properties(report):
    checks, dt = timed(_property_checks)
    assert report(7, checks, dt)


def test_criterion_8_table4_soft(report):
    checks, dt = timed(check_table4)
    report(8, checks, dt)
    assert all(c.soft for c in checks)

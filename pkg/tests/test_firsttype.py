import numpy as np
import pytest

from coxdec.catalog import entry
from coxdec.diagram import canonical_key
from coxdec.firsttype import (
    Fundamental,
    as_decomposition,
    classify_type,
    enumerate_decompositions,
    glue,
    is_simple,
    mark_simple,
    superpose,
)
from coxdec.geometry import gram_of, mink_gram
from coxdec.verifier import verify


@pytest.fixture(scope="module")
def h15():
    return enumerate_decompositions("H1^5")


def test_root_is_fundamental(h15):
    root = h15.simplices[0]
    assert root.N == 1 and root.key == canonical_key(entry("H1^5").diagram)


def test_h15_targets(h15):
    targets = {(g.name, g.N) for g in h15.coxeter_targets()}
    assert {("H2^5", 3), ("H3^5", 5), ("H5^5", 10)} <= targets
    assert h15.complete


def test_simplicity(h15):
    targets = h15.coxeter_targets()
    mark_simple(h15, targets)
    simple = {(g.name, g.N) for g in targets if g.simple}
    assert simple == {("H2^5", 3), ("H3^5", 5), ("H5^5", 10)}


def test_two_tile_gluing_is_simple():
    enum = enumerate_decompositions("H2^5", max_s=1)
    g = next(x for x in enum.simplices if x.name == "H4^5")
    assert g.N == 2 and is_simple(g, enum)


def test_generated_realizations_are_consistent(h15):
    for g in h15.simplices:
        np.testing.assert_allclose(mink_gram(g.normals), np.asarray(gram_of(g.diagram)), atol=1e-6)
        assert len(g.tiles) == g.N


def test_gluing_soundness_on_random_attempts(h15, rng):
    fund = h15.fundamental
    by_sig = {}
    for g in h15.simplices:
        for i in range(g.diagram.size):
            by_sig.setdefault(g.facet_data(i)[3], []).append((g, i))
    pairs = [(a, i, b, j) for group in by_sig.values() for a, i in group for b, j in group]
    produced = 0
    for k in rng.integers(len(pairs), size=1000):
        a, i, b, j = pairs[k]
        for g in glue(fund, a, i, b, j):
            produced += 1
            assert g.N == a.N + b.N == len(g.tiles)
            assert all(0 < float(x) < 1 for _, _, x in g.diagram.edges())
            assert all(0 < float(g.diagram.angle(p, q)) < 1
                       for p in range(g.diagram.size) for q in range(p + 1, g.diagram.size))
    assert produced > 0


def test_determinism_across_worker_counts():
    one = enumerate_decompositions("H2^4", workers=1)
    four = enumerate_decompositions("H2^4", workers=4)
    assert [g.key for g in one.simplices] == [g.key for g in four.simplices]
    assert [g.N for g in one.simplices] == [g.N for g in four.simplices]


def test_limits_flag_incomplete():
    enum = enumerate_decompositions("H1^5", max_N=4)
    assert not enum.complete
    assert max(g.N for g in enum.simplices) <= 4


def test_chamber_word_rejects_non_chamber():
    fund = Fundamental(entry("H1^5"))
    assert fund.chamber_word(np.eye(6)) is not None
    shift = np.eye(6)
    c, s = np.cosh(0.1), np.sinh(0.1)
    shift[0, 0] = shift[5, 5] = c
    shift[0, 5] = shift[5, 0] = s
    assert fund.chamber_word(shift) is None


def test_type_classification():
    enum = enumerate_decompositions("H1^4")
    g = next(x for x in enum.simplices if x.name == "H3^4")
    first = as_decomposition(g, enum.fundamental)
    assert classify_type(first) == "first"
    second = verify("H3^4", "H9^4")
    assert classify_type(second) == "second"
    assert classify_type(superpose(second, first)) == "first"


def test_third_type_by_superposition():
    enum = enumerate_decompositions("H11^5", max_s=1)
    g = next(x for x in enum.simplices if x.N == 2)
    outer = as_decomposition(g, enum.fundamental)
    d = superpose(outer, verify("H4^5", "H11^5"))
    assert d.N == 40
    assert classify_type(d) == "third"

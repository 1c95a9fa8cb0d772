import pytest

from coxdec.catalog import DIMENSIONS, entry, six_pairs, table5_pairs
from coxdec.secondtype import (
    counting_filter,
    elliptic_decomposition,
    evaluate_pair,
    ideal_budget_filter,
    links_compatible,
    parabolic_compatible,
    realizable_pairs,
    run_pipeline,
    subdiagram_filter,
    volume_filter,
)
from coxdec.types import affine_diagram, standard_diagram


def pair(f, p):
    return entry(f), entry(p)


def test_volume_filter():
    assert volume_filter(*pair("H3^4", "H9^4")) == 10
    assert volume_filter(*pair("H1^9", "H3^9")) == 527
    assert volume_filter(*pair("H9^4", "H3^4")) is None
    assert volume_filter(*pair("H6^4", "H7^4")) is None  # N = 1


def test_elliptic_decomposition():
    assert elliptic_decomposition(["A1", "A1", "A1"], ["H3"]) == [("H3", ("A1", "A1", "A1"))]
    assert elliptic_decomposition(["A2", "A2"], ["F4"]) is not None
    assert elliptic_decomposition(["A4"], ["B4"]) is None
    assert elliptic_decomposition(["A1", "B3"], ["A1", "B3"]) is not None


def test_parabolic_compatibility():
    a3 = affine_diagram("A", 3)
    assert parabolic_compatible(a3, a3)
    assert not parabolic_compatible(affine_diagram("C", 4), affine_diagram("F", 4))


def test_links_compatible_elliptic():
    assert links_compatible(standard_diagram("A", 4), standard_diagram("H", 4))
    assert not links_compatible(standard_diagram("B", 4), standard_diagram("A", 4))


def test_subdiagram_filter_keeps_realizable():
    for F, P, _ in table5_pairs():
        rep = subdiagram_filter(*pair(F, P))
        assert rep.passed, rep.detail


def test_counting_rules():
    F, P = pair("H1^(4)", "H4^(4)")
    N = volume_filter(F, P)
    sub = subdiagram_filter(F, P)
    assert sub.passed
    rep = counting_filter(F, P, N, sub)
    assert not rep.passed and rep.rule == "finite-vertex-count"
    assert "148" in rep.detail and "130" in rep.detail


def test_six_pairs_exact():
    got = {c.key for n in DIMENSIONS for c in run_pipeline(n, "counting")}
    assert got == set(six_pairs())


def test_budget_certificates():
    b = ideal_budget_filter(*pair("H5^5", "H12^5"), 16)
    assert not b.feasible
    assert any("F4~: budget 16" in line for line in b.certificate)
    b = ideal_budget_filter(*pair("H7^5", "H11^5"), 6)
    assert not b.feasible
    assert any("20 tile vertices > 18" in line for line in b.certificate)


def test_budget_witness_for_realizable():
    b = ideal_budget_filter(*pair("H3^4", "H9^4"), 10)
    assert b.feasible
    assert sorted(c for _, c in b.witness.values()) == [1, 1, 8]


def test_realizable_pairs():
    got = {c.key for n in DIMENSIONS for c in realizable_pairs(n)}
    assert got == set(table5_pairs())


def test_reports_serialize():
    d = evaluate_pair(*pair("H7^5", "H11^5")).to_dict()
    assert d["N"] == 6 and d["budget"]["feasible"] is False
    assert set(d["reports"]) == {"volume", "subdiagram", "counting"}


@pytest.mark.parametrize("stage", ["volume", "subdiagram"])
def test_stages_are_monotone(stage):
    early = {c.key for c in run_pipeline(5, stage)}
    late = {c.key for c in run_pipeline(5, "counting")}
    assert late <= early

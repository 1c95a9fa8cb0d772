import pytest

from coxdec.catalog import (
    DIMENSIONS,
    EUCLIDEAN_FACTS,
    SphericalRule,
    all_entries,
    d_family_targets,
    entry,
    hyperbolic_simplices,
    lookup,
    six_pairs,
    spherical_rules,
    table3_rows,
    table4_counts,
    table5_pairs,
    tiling_facts,
    volume,
)
from coxdec.types import rank_of


def test_entry_counts_per_dimension():
    counts = {n: len(hyperbolic_simplices(n)) for n in DIMENSIONS}
    assert counts == {4: 14, 5: 12, 6: 3, 7: 4, 8: 4, 9: 3}
    assert [e.notation for e in all_entries() if e.compact] == [f"H{i}^(4)" for i in range(1, 6)]


def test_lookup_round_trip():
    for e in all_entries():
        assert lookup(e.diagram) == e.notation
        assert entry(e.notation) is e
        assert volume(e.notation) == e.volume > 0


def test_dimension_matches_diagram():
    for e in all_entries():
        assert e.diagram.dim == e.dim


def test_unknown_notation():
    with pytest.raises(KeyError):
        entry("H99^4")


def test_equal_volumes_are_distinct_shapes():
    assert entry("H6^4").volume == entry("H7^4").volume
    assert entry("H6^4").diagram != entry("H7^4").diagram


def test_spherical_rules_preserve_rank():
    for rule in spherical_rules():
        for t in rule.targets:
            assert sum(rank_of(c) for c in t) == rank_of(rule.fundamental)


def test_rule_rank_check():
    with pytest.raises(ValueError):
        SphericalRule("F4", (("A2",),))


def test_d_family():
    assert ("A3", "A3") in d_family_targets(6)
    assert ("A1", "A1", "A1", "A1") in d_family_targets(4)
    assert all(t != ("D5",) for t in d_family_targets(5))


def test_golden_tables_are_consistent():
    rows = table3_rows()
    assert len(rows) == 28
    for r in rows:
        ratio = entry(r.P).volume / entry(r.F).volume
        assert ratio == pytest.approx(r.N, rel=1e-4)
    assert set(table5_pairs()) <= set(six_pairs())
    assert [t[:3] for t in [(f.F, f.P, f.N) for f in tiling_facts()]] == table5_pairs()
    assert all(entry(F).compact for F in table4_counts())
    assert EUCLIDEAN_FACTS[("A3~", "A3~")] == 8

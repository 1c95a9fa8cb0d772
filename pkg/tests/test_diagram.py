import pytest
from hypothesis import given
from hypothesis import strategies as st

from coxdec.catalog import all_entries, entry
from coxdec.diagram import (
    AngleFraction,
    DecoratedSimplex,
    DiagramError,
    automorphisms,
    canonical_form,
    canonical_key,
    isomorphic,
    parse_diagram,
    remove_node,
    serialize_diagram,
)

ENTRIES = all_entries()


def test_angle_labels():
    assert AngleFraction.coxeter(3).label() == "3"
    assert AngleFraction(2, 3).label() == "3/2"
    assert AngleFraction(1, 2).is_coxeter
    assert not AngleFraction(2, 5).is_coxeter


def test_parse_round_trip():
    text = "dim=3\nname=demo\n0-1:3\n1-2:5/2\n2-3:4\n"
    s = parse_diagram(text)
    assert s.dim == 3 and s.name == "demo"
    assert s.angle(1, 2) == AngleFraction(2, 5)
    assert parse_diagram(serialize_diagram(s)) == s


def test_unlisted_pairs_are_right_angles():
    s = parse_diagram("dim=2\n0-1:3\n")
    assert s.angle(0, 2) == AngleFraction(1, 2)
    assert s.edges() == [(0, 1, AngleFraction(1, 3))]


def test_comments_and_blank_lines():
    s = parse_diagram("# header\n\ndim=2\n0-1:4  # edge\n")
    assert s.angle(0, 1) == AngleFraction(1, 4)


@pytest.mark.parametrize(
    "text, line",
    [
        ("dim=3\n0-1:3\n1-2:x\n", 3),
        ("dim=3\n0-5:3\n", 2),
        ("dim=3\n0-1:3\n1-0:4\n", 3),
        ("dim=3\n0-1:3/3\n", 2),
        ("0-1:3\n", 1),
        ("dim=3\ndim=4\n", 2),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(DiagramError) as err:
        parse_diagram(text)
    assert err.value.line == line
    assert f"line {line}" in str(err.value)


def test_missing_header():
    with pytest.raises(DiagramError):
        parse_diagram("# nothing\n")


def test_asymmetric_matrix_rejected():
    half, third = AngleFraction(1, 2), AngleFraction(1, 3)
    with pytest.raises(DiagramError):
        DecoratedSimplex(((None, half), (third, None)))


@given(st.sampled_from(ENTRIES), st.randoms(use_true_random=False))
def test_canonical_key_invariant_under_relabeling(e, rnd):
    perm = list(range(e.diagram.size))
    rnd.shuffle(perm)
    relabeled = e.diagram.permuted(perm)
    assert canonical_key(relabeled) == canonical_key(e.diagram)
    c, p = canonical_form(relabeled)
    assert c == relabeled.permuted(p)


def test_catalog_shapes_pairwise_distinct():
    keys = {canonical_key(e.diagram) for e in ENTRIES}
    assert len(keys) == len(ENTRIES)


def test_automorphisms_preserve_angles():
    s = entry("H9^4").diagram
    autos = automorphisms(s)
    assert tuple(range(s.size)) in autos
    for p in autos:
        assert s.permuted(p) == s


def test_remove_node_and_isomorphism():
    s = entry("H1^6").diagram
    link = remove_node(s, 0)
    assert link.size == s.size - 1
    assert isomorphic(link, link.permuted(list(reversed(range(link.size)))))

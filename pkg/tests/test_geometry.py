import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from coxdec import geometry
from coxdec.catalog import all_entries, entry
from coxdec.diagram import AngleFraction, DecoratedSimplex, remove_node
from coxdec.geometry import (
    GeometryError,
    Kind,
    classify,
    classify_simplex,
    facet_gram,
    gram_of,
    mink,
    mink_gram,
    realize,
    reflection_matrix,
    snap,
    vertex_links,
)
from coxdec.types import affine_diagram, standard_diagram

ENTRIES = all_entries()
J = {n: np.diag([1.0] * (n - 1) + [-1.0]) for n in range(3, 12)}


def test_right_angled_simplex_is_elliptic():
    s = DecoratedSimplex.from_edges(4, {})
    assert classify_simplex(s).kind is Kind.ELLIPTIC


def test_affine_diagram_is_parabolic():
    k = classify_simplex(affine_diagram("A", 3))
    assert k.kind is Kind.PARABOLIC and k.corank == 1 and k.connected


def test_standard_diagram_is_elliptic():
    assert classify_simplex(standard_diagram("E", 8)).kind is Kind.ELLIPTIC


def test_indefinite_signature():
    a, b, c = AngleFraction(6, 7), AngleFraction(8, 9), AngleFraction(10, 11)
    edges = {(0, 1): a, (1, 2): b, (2, 3): c, (3, 4): a, (0, 4): b, (0, 2): AngleFraction(4, 5)}
    k = classify_simplex(DecoratedSimplex.from_edges(4, edges))
    assert k.kind is Kind.INVALID and k.signature[:2] == (3, 2)


@pytest.mark.parametrize("e", ENTRIES, ids=str)
def test_signature_trichotomy_on_catalog(e):
    k = classify_simplex(e.diagram)
    assert k.kind is Kind.HYPERBOLIC
    assert k.signature == (e.dim, 1, 0)
    assert k.compact == e.compact
    for v in range(e.diagram.size):
        link = classify_simplex(remove_node(e.diagram, v))
        assert link.kind in (Kind.ELLIPTIC, Kind.PARABOLIC)
        assert (link.kind is Kind.PARABOLIC) == (v in k.ideal)


@pytest.mark.parametrize("e", ENTRIES, ids=str)
def test_realization_reproduces_gram(e):
    g = np.asarray(gram_of(e.diagram))
    r = realize(gram_of(e.diagram))
    np.testing.assert_allclose(mink_gram(r.normals), g, atol=1e-9)
    pairing = r.normals.T @ J[e.diagram.size] @ r.vertices
    off = pairing - np.diag(np.diag(pairing))
    np.testing.assert_allclose(off, 0.0, atol=1e-9)
    assert np.all(np.diag(pairing) < 0)
    for c in range(r.size):
        w = r.vertices[:, c]
        if c in r.ideal:
            assert abs(mink(w, w)) < 1e-8 and w[-1] == pytest.approx(1.0)
        else:
            assert mink(w, w) == pytest.approx(-1.0) and w[-1] > 0


def test_realize_rejects_elliptic():
    with pytest.raises(GeometryError):
        realize(gram_of(standard_diagram("A", 4)))


def test_vertex_links_mark_ideal_vertices():
    links = vertex_links(entry("H3^4").diagram)
    ideal = [v for v, k, _ in links if k.kind is Kind.PARABOLIC]
    assert ideal == list(classify_simplex(entry("H3^4").diagram).ideal)
    assert len(ideal) == 1


def test_facet_gram_is_minor_complement():
    s = entry("H9^4").diagram
    g = np.asarray(gram_of(s))
    f = np.asarray(facet_gram(gram_of(s), 0))
    assert f.shape == (4, 4)
    assert np.all(np.diag(f) == pytest.approx(1.0))
    assert not np.allclose(f, g[1:, 1:])


def test_snap_values():
    x = np.array([0.5 + 1e-8, np.cos(np.pi / 5) - 3e-7, 0.123])
    np.testing.assert_allclose(snap(x), [0.5, np.cos(np.pi / 5), 0.123])


def test_tolerance_override(monkeypatch):
    g = np.diag([1.0, 1.0, 1e-8])
    assert classify(g).kind is Kind.ELLIPTIC
    monkeypatch.setattr(geometry, "TOL_EIG", 1e-6)
    assert classify(g).kind is Kind.PARABOLIC


@given(arrays(np.float64, 5, elements=st.floats(-3, 3)))
def test_reflection_preserves_form(x):
    x = x.copy()
    if np.linalg.norm(x[:-1]) < 1e-3:
        x[0] += 1.0
    # spacelike: enlarge the space part above the time part
    x[:-1] *= (abs(x[-1]) + 1.0) / np.linalg.norm(x[:-1])
    u = x / np.sqrt(mink(x, x))
    r = reflection_matrix(u)
    np.testing.assert_allclose(r.T @ J[5] @ r, J[5], atol=1e-7)
    np.testing.assert_allclose(r @ r, np.eye(5), atol=1e-7)
    np.testing.assert_allclose(r @ u, -u, atol=1e-7)


@given(st.sampled_from(ENTRIES), st.integers(0, 9), st.integers(0, 9))
def test_realized_reflections_preserve_form(e, a, b):
    r = realize(gram_of(e.diagram))
    n = r.size
    ra = reflection_matrix(r.normals[:, a % n])
    rb = reflection_matrix(r.normals[:, b % n])
    m = ra @ rb
    np.testing.assert_allclose(m.T @ J[n] @ m, J[n], atol=1e-7)

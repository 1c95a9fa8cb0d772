import json

import numpy as np
import pytest

from coxdec.catalog import entry
from coxdec.firsttype import Fundamental, as_decomposition, classify_type, enumerate_decompositions
from coxdec.geometry import gram_of, realize
from coxdec.verifier import (
    V9_COEFFICIENTS,
    Tile,
    VerificationError,
    alternate_numbering_refutation,
    check_normal_combination,
    enumerate_tiles,
    fundamental_angles,
    place_seed,
    realization_json,
    verify,
)


@pytest.fixture(scope="module")
def h9():
    return verify("H3^4", "H9^4")


def test_identity_placement():
    d = verify("H3^4", "H3^4")
    assert d.N == 1
    assert set(d.tiling.incidences.values()) == {1}


def test_seed_inside_target():
    F, P = entry("H4^5"), entry("H11^5")
    seeds = place_seed(F, P)
    assert seeds
    Pr = realize(gram_of(P.diagram))
    for _, _, tile in seeds[:10]:
        w = tile.klein_vertices()
        d = Pr.normals.T @ np.diag([1.0] * 5 + [-1.0]) @ w
        assert np.all(d <= 1e-6)


def test_h9_tiling(h9):
    res = h9.tiling
    assert res.complete and res.N == 10 == len(h9.tiles)
    assert sorted(res.ideal_incidences.values()) == [1, 1, 8]
    assert all(res.fundamental.values()) and len(res.fundamental) == 10
    assert classify_type(h9) == "second"


@pytest.mark.parametrize("F, P", [("H3^4", "H9^4"), ("H4^5", "H11^5"), ("H1^8", "H4^8")])
def test_ideal_incidence_sum(F, P):
    d = verify(F, P)
    n_ideal = len(realize(gram_of(entry(F).diagram)).ideal)
    assert sum(d.tiling.ideal_incidences.values()) == d.N * n_ideal


def test_tile_count_matches_volume():
    d = verify("H4^5", "H11^5")
    assert d.N == round(entry("H11^5").volume / entry("H4^5").volume)


def test_orbit_is_order_independent():
    F, P = entry("H3^4"), entry("H9^4")
    Fr, Pr = realize(gram_of(F.diagram)), realize(gram_of(P.diagram))
    res = verify(F, P).tiling
    for tile in (res.tiles[-1], res.tiles[len(res.tiles) // 2]):
        again = enumerate_tiles(tile, Fr, Pr)
        assert {t.key for t in again.tiles} == {t.key for t in res.tiles}


def test_refutation_by_escaping_tile():
    with pytest.raises(VerificationError, match="leaves P"):
        verify("H6^4", "H7^4")


def test_no_congruent_link():
    with pytest.raises(VerificationError):
        verify("H7^5", "H11^5")


def test_first_type_tiling_has_non_fundamental_ridge():
    d = verify("H5^5", "H12^5")
    assert d.N == 16
    assert not all(d.tiling.fundamental.values())
    assert classify_type(d) == "first"


def test_two_tile_gluing_is_not_fundamental():
    enum = enumerate_decompositions("H2^5", max_s=1)
    g = next(x for x in enum.simplices if x.N == 2)
    d = as_decomposition(g, enum.fundamental)
    flags = fundamental_angles(d.compute_mirrors(), d.p_real)
    assert not all(flags.values())


def test_limit_marks_incomplete():
    F, P = entry("H1^9"), entry("H3^9")
    Fr, Pr = realize(gram_of(F.diagram)), realize(gram_of(P.diagram))
    seed = Tile.from_isometry(verify(F, P).tiles[0], Fr)
    res = enumerate_tiles(seed, Fr, Pr, limit=50)
    assert not res.complete and res.N <= 50


def test_normal_combination_certificate():
    cert = check_normal_combination()
    assert cert.passed
    assert cert.norm == pytest.approx(1.0, abs=1e-9)
    assert cert.word


def test_perturbed_combination_fails():
    bad = list(V9_COEFFICIENTS)
    bad[4] = 2
    cert = check_normal_combination(coefficients=bad)
    assert not cert.passed and not cert.gram_matches


def test_alternate_numbering_refuted():
    ref = alternate_numbering_refutation()
    assert ref.refuted and not ref.integral
    assert ref.coefficients[0] > 0
    assert len(ref.candidates) == 2


def test_realization_json():
    data = json.loads(realization_json(entry("H3^4")))
    assert len(data["normals"]) == 5
    assert len(data["ideal"]) == 1

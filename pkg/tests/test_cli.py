import json

import pytest

from coxdec import geometry
from coxdec.catalog import entry
from coxdec.cli import emit_dot, main
from coxdec.diagram import AngleFraction, DecoratedSimplex, parse_diagram, serialize_diagram


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def diagram_file(tmp_path):
    def write(text, name="d.txt"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return write


def test_classify_catalog_simplex(capsys, diagram_file):
    path = diagram_file(serialize_diagram(entry("H3^4").diagram))
    code, out, _ = run(capsys, "classify", path)
    assert code == 0
    assert out.strip() == "Hyperbolic, 1 ideal vertex (A3~), catalog: H3^4"


def test_classify_right_angles(capsys, diagram_file):
    code, out, _ = run(capsys, "classify", diagram_file("dim=4\n"))
    assert code == 0 and out.strip() == "Elliptic"


def test_classify_indefinite(capsys, diagram_file):
    text = "dim=4\n0-1:7/6\n1-2:9/8\n2-3:11/10\n3-4:7/6\n0-4:9/8\n0-2:5/4\n"
    code, out, _ = run(capsys, "classify", diagram_file(text))
    assert out.strip() == "invalid: signature (3, 2)"


def test_classify_parse_error(capsys, diagram_file):
    code, _, err = run(capsys, "classify", diagram_file("dim=4\n0-1:3\n1-2:q\n"))
    assert code == 2 and "line 3" in err


def test_classify_json(capsys, diagram_file):
    path = diagram_file(serialize_diagram(entry("H9^4").diagram))
    code, out, _ = run(capsys, "classify", path, "--format", "json")
    data = json.loads(out)
    assert data["kind"] == "hyperbolic" and data["catalog"] == "H9^4"
    assert len(data["ideal"]) == 3 and not data["compact"]
    assert {data["links"][str(v)]["type"] for v in data["ideal"]} == {"A3~"}


def test_dot_output(capsys):
    code, out, _ = run(capsys, "dot", "H1^6")
    assert code == 0
    assert out.count(";") == 7 + 6
    assert emit_dot(DecoratedSimplex.from_edges(3, {})).count("--") == 0
    decorated = DecoratedSimplex.from_edges(2, {(0, 1): AngleFraction(2, 3)})
    assert 'label="3/2"' in emit_dot(decorated)


def test_unknown_notation(capsys):
    code, _, err = run(capsys, "dot", "H0^4")
    assert code == 2 and "unknown" in err


def test_catalog_json_round_trips(capsys):
    code, out, _ = run(capsys, "catalog", "--dim", "5", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data) == 12
    for item in data:
        assert parse_diagram(item["diagram"]) == entry(item["notation"]).diagram


def test_second_type(capsys):
    code, out, _ = run(capsys, "second-type", "--dim", "5", "--format", "json")
    data = json.loads(out)
    assert {(d["F"], d["P"], d["N"]) for d in data} == {
        ("H4^5", "H11^5", 20), ("H5^5", "H12^5", 16), ("H7^5", "H11^5", 6)
    }
    feasible = {(d["F"], d["P"]) for d in data if d["budget"]["feasible"]}
    assert feasible == {("H4^5", "H11^5")}


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "--fundamental", "H1^8", "--target", "H4^8", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["N"] == 272 and data["all_fundamental"]
    assert data["certificates"]["normal_combination"]["passed"]
    assert data["certificates"]["alternate_numbering"]["refuted"]


def test_verify_failure_exit(capsys):
    code, _, err = run(capsys, "verify", "--fundamental", "H6^4", "--target", "H7^4")
    assert code == 1 and "leaves P" in err


def test_dump_realization(capsys):
    code, out, _ = run(capsys, "verify", "--fundamental", "H3^4", "--target", "H9^4",
                       "--dump-realization", "target")
    assert code == 0 and len(json.loads(out)["normals"]) == 5


def test_enumerate_inconclusive(capsys):
    code, out, _ = run(capsys, "enumerate", "--fundamental", "H1^5", "--max-n", "3")
    assert code == 3 and "limits hit" in out


def test_enumerate_json(capsys):
    code, out, _ = run(capsys, "enumerate", "--fundamental", "H2^5", "--coxeter-only", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["complete"]
    assert ("H4^5", 2, True) in {(s["catalog"], s["N"], s["simple"]) for s in data["simplices"]}


def test_reproduce_scope(capsys):
    code, out, _ = run(capsys, "reproduce", "six-pairs")
    assert code == 0 and "[PASS] six pairs" in out


def test_tolerance_flags(capsys, monkeypatch):
    monkeypatch.setattr(geometry, "TOL_EIG", geometry.TOL_EIG)
    monkeypatch.setattr(geometry, "TOL_REAL", geometry.TOL_REAL)
    code, _, _ = run(capsys, "--tol-eig", "1e-8", "--tol-real", "1e-6", "catalog", "--dim", "9")
    assert code == 0 and geometry.TOL_EIG == 1e-8 and geometry.TOL_REAL == 1e-6
    with pytest.raises(SystemExit):
        main(["--tol-eig", "-1", "catalog"])

import pathlib

import pytest

import defring

DATA = pathlib.Path(__file__).resolve().parents[2] / "data"


def test_cohomology_z3():
    rep = defring.cohomology(DATA / "z3_p3.json")
    assert rep["schema_version"] == defring.schema_version
    assert rep["result"]["h"] == [1, 1, 1]


def test_present_matches_pseudo_for_r1():
    a = defring.present(DATA / "z3_p3.json", truncate=4, abelian=True)
    b = defring.pseudo(input=DATA / "z3_p3.json", truncate=4)
    assert a["result"]["hilbert"] == [1, 1, 1, 0, 0]
    assert b["result"]["relations"]["hilbert"] == a["result"]["hilbert"]


def test_quadric():
    rep = defring.pseudo(quiver=DATA / "quadric.json")
    res = rep["result"]
    assert res["krull"]["total"] == 3
    assert res["h2_count"] == 1
    assert res["relations"]["hilbert"] == [1, 4, 9, 16, 25]


def test_oracle_and_check():
    assert defring.oracle(DATA / "z3_p3.json", ring="eps:3")["result"]["agree"]
    assert defring.check(DATA / "z2_p2.json")["ok"]
    assert not defring.check(DATA / "z3xz3_p3_corrupt.json")["ok"]


def test_errors():
    with pytest.raises(defring.Refusal):
        defring.present(DATA / "z2_dup_p3.json")
    with pytest.raises(ValueError, match="triple"):
        defring.cohomology(DATA / "bad_table.json")
    with pytest.raises(ValueError):
        defring.run("nope", input=DATA / "z3_p3.json")


def test_fixtures_match_schemas():
    import json

    jsonschema = pytest.importorskip("jsonschema")
    schemas = DATA.parent / "schema"
    inp = json.loads((schemas / "input.schema.json").read_text())
    quiv = json.loads((schemas / "quiver.schema.json").read_text())
    for f in sorted(DATA.glob("*.json")):
        doc = json.loads(f.read_text())
        jsonschema.validate(doc, quiv if "h1" in doc else inp)
    ring = json.loads((schemas / "test_ring.schema.json").read_text())
    for f in sorted((DATA / "rings").glob("*.json")):
        jsonschema.validate(json.loads(f.read_text()), ring)


def test_ring_file():
    rep = defring.oracle(DATA / "z3_p3.json", ring="file:" + str(DATA / "rings" / "eps2_p3.json"))
    assert rep["result"]["oracle"]["deformation_classes"] == 9
    assert rep["result"]["agree"]

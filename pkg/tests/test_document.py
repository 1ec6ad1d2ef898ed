from __future__ import annotations

import json

import pytest

from vsalgebroid.algebroid import tables_equal
from vsalgebroid.document import (
    BadRational, IndexOutOfRange, ParseError, SchemaError, UnknownReference, load_document, parse_document,
)
from vsalgebroid.examples import FIXTURE_DIR, dumps_compact, fixture_documents, fixture_path
from vsalgebroid.exact import ONE
from vsalgebroid.kahler import build_section4_algebroid

from conftest import INPUTS, algebroid


def _doc(**bindings):
    return {
        "schemaVersion": 1,
        "algebras": {"A": {"parities": [0], "products": [[0, 0, 0, "1/1"]], "unit": [[0, "1"]]},
                     "g": {"parities": [0], "products": []}},
        "bindings": {"kind": "section4", "A": "A", "g": "g", **bindings},
    }


def test_free_boson_fixture():
    doc = load_document(fixture_path("free_boson"))
    inp = doc.section4_input()
    assert inp.A.dim == 1 and inp.g.dim == 1 and inp.g.parities == (0,)
    assert inp.A.basis_mul(0, 0) == {0: ONE}


def test_shipped_fixtures_are_current():
    for name, doc in fixture_documents().items():
        assert (FIXTURE_DIR / f"{name}.json").read_text() == dumps_compact(doc) + "\n", name


@pytest.mark.parametrize("name", sorted(INPUTS))
def test_section4_fixtures_round_trip(name):
    inp = load_document(fixture_path(name)).section4_input()
    assert tables_equal(build_section4_algebroid(inp), algebroid(name))


def test_bad_rational_has_a_pointer():
    raw = _doc()
    raw["algebras"]["A"]["products"][0][3] = "1/0"
    with pytest.raises(BadRational) as info:
        parse_document(json.dumps(raw))
    assert info.value.pointer == "/algebras/A/products/0/3"


def test_index_out_of_range_has_a_pointer():
    raw = _doc()
    raw["algebras"]["A"]["products"].append([0, 3, 0, "1"])
    with pytest.raises(IndexOutOfRange) as info:
        parse_document(json.dumps(raw))
    assert info.value.pointer == "/algebras/A/products/1/1"


def test_schema_errors_are_located():
    raw = _doc()
    raw["schemaVersion"] = 2
    raw["algebras"]["A"]["products"][0] = [0, 0, "1"]
    with pytest.raises(SchemaError) as info:
        parse_document(json.dumps(raw))
    pointers = [p for p, _ in info.value.errors]
    assert "/schemaVersion" in pointers and "/algebras/A/products/0" in pointers


def test_unknown_map_reference():
    with pytest.raises(UnknownReference) as info:
        parse_document(json.dumps(_doc(d="nope"))).section4_input()
    assert info.value.pointer == "/bindings/d"


def test_invalid_json():
    with pytest.raises(ParseError):
        parse_document("{not json")


def test_algebroid_and_tconf_bindings():
    V, data = load_document(fixture_path("euler_x2_d1_algebroid")).algebroid()
    assert tables_equal(V, algebroid("euler_x2_d1"))
    assert data.l1(0) == {0: ONE}
    C, star = load_document(fixture_path("euler_x2_tconf")).tconf()
    assert star == algebroid("euler_x2").star and C.dB == algebroid("euler_x2").dB

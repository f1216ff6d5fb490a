"""Theory files: parsing, validation errors with locations, round trips."""

import copy
import json
from pathlib import Path

import pytest

from opcheck.constructions import PlusTheory
from opcheck.errors import TheoryFileError
from opcheck.instances import (
    CpsuTheory,
    MatrixTheory,
    PFunTheory,
    SubStochTheory,
)
from opcheck.table import TableTheory
from opcheck.theoryfile import (
    load_theory,
    parse_doc,
    save_theory,
    serialize_theory,
)

FIXTURES = Path(__file__).parent / "fixtures"

EXPECTED_TYPES = {
    "pfun.theory": PFunTheory,
    "substoch.theory": SubStochTheory,
    "mat_int.theory": MatrixTheory,
    "mat_bool.theory": MatrixTheory,
    "cpsu.theory": CpsuTheory,
    "stateless.theory": TableTheory,
}


def stateless_doc():
    return json.loads((FIXTURES / "stateless.theory").read_text())


@pytest.mark.parametrize("name", sorted(EXPECTED_TYPES))
def test_fixtures_load_with_expected_type(name):
    theory = load_theory(FIXTURES / name)
    assert isinstance(theory, EXPECTED_TYPES[name])


@pytest.mark.parametrize("name", sorted(EXPECTED_TYPES))
def test_serialization_is_idempotent(name):
    theory = load_theory(FIXTURES / name)
    doc = serialize_theory(theory)
    again = serialize_theory(parse_doc(doc))
    assert json.dumps(doc, sort_keys=True) == json.dumps(again, sort_keys=True)


def test_save_and_reload(tmp_path):
    path = tmp_path / "out.theory"
    save_theory(SubStochTheory(grid=3), path)
    text = path.read_text()
    assert text.endswith("\n")
    theory = load_theory(path)
    assert isinstance(theory, SubStochTheory)
    assert theory.grid == 3


def test_plus_document_roundtrip():
    doc = {"format": "optheory/1", "kind": "plus", "bound": 2,
           "base": serialize_theory(SubStochTheory(grid=2))}
    theory = parse_doc(doc)
    assert isinstance(theory, PlusTheory)
    assert theory.completion_bound == 2
    out = serialize_theory(theory)
    assert out["bound"] == 2
    assert out["objects"] == ["<>", "<1>", "<2>", "<1, 1>"]
    assert out["base"]["name"] == "substoch"


def test_inline_semiring_parses():
    doc = {"format": "optheory/1", "kind": "builtin", "name": "mat",
           "parameters": {"grid": 1, "semiring": {
               "name": "or-and", "elements": [0, 1],
               "add": [[0, 1], [1, 1]], "mul": [[0, 0], [0, 1]],
               "zero": 0, "one": 1}}}
    theory = parse_doc(doc)
    assert theory.semiring.name == "or-and"
    again = serialize_theory(parse_doc(serialize_theory(theory)))
    assert again == serialize_theory(theory)


def location_of(excinfo):
    return excinfo.value.location


def test_missing_file_is_an_input_error(tmp_path):
    with pytest.raises(TheoryFileError):
        load_theory(tmp_path / "nope.theory")


def test_invalid_json_is_an_input_error(tmp_path):
    path = tmp_path / "bad.theory"
    path.write_text("{not json")
    with pytest.raises(TheoryFileError, match="invalid JSON"):
        load_theory(path)


def test_format_tag_is_checked():
    with pytest.raises(TheoryFileError) as exc:
        parse_doc({"kind": "builtin", "name": "pfun"})
    assert location_of(exc) == "format"
    with pytest.raises(TheoryFileError, match="unsupported format"):
        parse_doc({"format": "optheory/99", "kind": "builtin", "name": "pfun"})


def test_unknown_kind_and_builtin():
    with pytest.raises(TheoryFileError) as exc:
        parse_doc({"format": "optheory/1", "kind": "mystery"})
    assert location_of(exc) == "kind"
    with pytest.raises(TheoryFileError) as exc:
        parse_doc({"format": "optheory/1", "kind": "builtin", "name": "qft"})
    assert location_of(exc) == "name"


def test_unknown_semiring_name():
    with pytest.raises(TheoryFileError) as exc:
        parse_doc({"format": "optheory/1", "kind": "builtin", "name": "mat",
                   "parameters": {"semiring": "quaternions"}})
    assert location_of(exc) == "parameters.semiring"


def test_bad_rational_entry_reports_its_path():
    doc = stateless_doc()
    doc["events"][0]["payload"] = [["one half"]]
    with pytest.raises(TheoryFileError) as exc:
        parse_doc(doc)
    assert location_of(exc) == "events[0].payload[0]"


def test_undeclared_object_in_event():
    doc = stateless_doc()
    doc["events"][0]["dom"] = "Y"
    with pytest.raises(TheoryFileError) as exc:
        parse_doc(doc)
    assert location_of(exc) == "events[0]"


def test_unit_must_be_declared():
    doc = stateless_doc()
    doc["unit"] = "J"
    with pytest.raises(TheoryFileError) as exc:
        parse_doc(doc)
    assert location_of(exc) == "unit"


def test_object_sizes_must_be_positive():
    doc = stateless_doc()
    doc["objects"]["X"] = 0
    with pytest.raises(TheoryFileError) as exc:
        parse_doc(doc)
    assert location_of(exc) == "objects"


def test_table_must_be_closed_under_composition():
    doc = stateless_doc()
    doc["events"].append({"name": "half_XX", "dom": "X", "cod": "X",
                          "payload": [["1/2"]]})
    with pytest.raises(TheoryFileError):
        parse_doc(doc)


def test_table_needs_identity_events():
    doc = stateless_doc()
    doc["events"] = [e for e in doc["events"] if e["name"] != "id_X"]
    doc["discards"]["X"] = "zero_XI"
    with pytest.raises(TheoryFileError):
        parse_doc(doc)

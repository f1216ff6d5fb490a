"""Reading and writing theory description files (format tag "optheory/1").

A theory file is a JSON document.  The ``kind`` field selects between:

- ``builtin``: one of the shipped instances (``pfun``, ``substoch``,
  ``mat``, ``cpsu``) with its parameters.  The ``mat`` instance takes a
  semiring, either the name of a builtin carrier or an inline finite
  semiring given by element lists and operation tables.
- ``table``: an explicit finite theory (see :mod:`opcheck.table`), with
  named objects and sizes, named events carrying semiring matrices, an
  optional test list and coarse-graining table, and a discard designation
  per object.  Rational entries are written as strings like ``"1/2"``.
- ``plus``: the direct-sum completion of another theory document, as
  produced by the ``complete`` command, remembering the object bound it
  was generated under.

``parse_doc`` and ``serialize_theory`` are inverse up to semantic
equivalence: reparsing a serialized document yields the same theory.
"""

from __future__ import annotations

import json

from . import kernel
from .constructions import PlusTheory, plus_completion
from .errors import TheoryFileError
from .instances import CpsuTheory, MatrixTheory, PFunTheory, SubStochTheory
from .table import TableTheory

FORMAT = "optheory/1"

BUILTIN_NAMES = ("pfun", "substoch", "mat", "cpsu")


def _require(doc, key, location):
    if not isinstance(doc, dict) or key not in doc:
        raise TheoryFileError(f"missing required key {key!r}", location)
    return doc[key]


def _parse_semiring(spec, location):
    if isinstance(spec, str):
        if spec not in kernel.BUILTIN_SEMIRINGS:
            raise TheoryFileError(f"unknown semiring {spec!r}", location)
        return kernel.BUILTIN_SEMIRINGS[spec]
    if isinstance(spec, dict):
        name = _require(spec, "name", location)
        elements = _require(spec, "elements", location)
        try:
            return kernel.FiniteSemiring.from_tables(
                name, tuple(elements),
                _require(spec, "add", location),
                _require(spec, "mul", location),
                _require(spec, "zero", location),
                _require(spec, "one", location))
        except (ValueError, KeyError, TypeError) as exc:
            raise TheoryFileError(f"invalid semiring table: {exc}",
                                  location) from exc
    raise TheoryFileError("semiring must be a name or an inline table", location)


def _parse_entry(semiring, value, location):
    for candidate in (value, str(value)):
        try:
            return semiring.parse_element(candidate)
        except (ValueError, TypeError):
            continue
    raise TheoryFileError(
        f"cannot read {value!r} as an element of {semiring.name}", location)


def _parse_builtin(doc):
    name = _require(doc, "name", "builtin")
    params = doc.get("parameters", {})
    if not isinstance(params, dict):
        raise TheoryFileError("parameters must be an object", "parameters")
    if name == "pfun":
        return PFunTheory()
    if name == "substoch":
        return SubStochTheory(grid=int(params.get("grid", 4)))
    if name == "cpsu":
        return CpsuTheory(tol=float(params.get("tol", kernel.DEFAULT_TOL)))
    if name == "mat":
        semiring = _parse_semiring(_require(params, "semiring", "parameters"),
                                   "parameters.semiring")
        return MatrixTheory(semiring, grid=int(params.get("grid", 2)))
    raise TheoryFileError(
        f"unknown builtin {name!r}; expected one of {', '.join(BUILTIN_NAMES)}",
        "name")


def _parse_table(doc):
    semiring = _parse_semiring(doc.get("semiring", "rationals01"), "semiring")
    objects = _require(doc, "objects", "objects")
    if not isinstance(objects, dict) or not objects:
        raise TheoryFileError("objects must be a non-empty object of sizes",
                              "objects")
    sizes = {}
    for nm, size in objects.items():
        if not isinstance(size, int) or size < 1:
            raise TheoryFileError(f"object {nm!r} needs a positive size",
                                  "objects")
        sizes[nm] = size
    unit_name = _require(doc, "unit", "unit")
    if unit_name not in sizes:
        raise TheoryFileError(f"unit {unit_name!r} is not a declared object",
                              "unit")
    homs = {(x, y): [] for x in sizes for y in sizes}
    events = _require(doc, "events", "events")
    for idx, ev in enumerate(events):
        loc = f"events[{idx}]"
        nm = _require(ev, "name", loc)
        dom = _require(ev, "dom", loc)
        cod = _require(ev, "cod", loc)
        if dom not in sizes or cod not in sizes:
            raise TheoryFileError(
                f"event {nm!r} references undeclared object", loc)
        payload = _require(ev, "payload", loc)
        rows = []
        for i, row in enumerate(payload):
            rows.append(tuple(_parse_entry(semiring, v, f"{loc}.payload[{i}]")
                              for v in row))
        homs[(dom, cod)].append((nm, tuple(rows)))
    discards = _require(doc, "discards", "discards")
    tests = doc.get("tests", {})
    cg = [tuple(entry) for entry in doc.get("coarse_grain", [])]
    return TableTheory(doc.get("name", "table"), semiring, sizes, unit_name,
                       homs, discards, tests=tests, coarse_grain_table=cg)


def parse_doc(doc):
    if not isinstance(doc, dict):
        raise TheoryFileError("theory file must be a JSON object", "top level")
    fmt = _require(doc, "format", "format")
    if fmt != FORMAT:
        raise TheoryFileError(f"unsupported format {fmt!r}; expected {FORMAT!r}",
                              "format")
    kind = _require(doc, "kind", "kind")
    if kind == "builtin":
        theory = _parse_builtin(doc)
    elif kind == "table":
        theory = _parse_table(doc)
    elif kind == "plus":
        base = parse_doc(_require(doc, "base", "base"))
        theory = plus_completion(base)
        theory.completion_bound = doc.get("bound")
    else:
        raise TheoryFileError(
            f"unknown kind {kind!r}; expected builtin, table or plus", "kind")
    theory.source_doc = doc
    return theory


def load_theory(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise TheoryFileError(str(exc), path) from exc
    except json.JSONDecodeError as exc:
        raise TheoryFileError(f"invalid JSON: {exc}", path) from exc
    return parse_doc(doc)


def _serialize_semiring(semiring):
    if semiring.name in kernel.BUILTIN_SEMIRINGS:
        return semiring.name
    return {"name": semiring.name,
            "elements": list(semiring.elements),
            "add": [[semiring.add(a, b) for b in semiring.elements]
                    for a in semiring.elements],
            "mul": [[semiring.mul(a, b) for b in semiring.elements]
                    for a in semiring.elements],
            "zero": semiring.zero, "one": semiring.one}


def serialize_theory(theory, bound=None):
    if isinstance(theory, PlusTheory):
        doc = {"format": FORMAT, "kind": "plus",
               "base": serialize_theory(theory.base)}
        use_bound = bound if bound is not None else \
            getattr(theory, "completion_bound", None)
        if use_bound is not None:
            doc["bound"] = use_bound
            doc["objects"] = [theory.object_str(o)
                              for o in theory.probe_objects(use_bound)]
        return doc
    if isinstance(theory, TableTheory):
        s = theory.semiring
        events = []
        for (x, y), entries in sorted(theory.homs.items()):
            for nm, payload in entries:
                events.append({
                    "name": nm, "dom": x, "cod": y,
                    "payload": [[s.element_str(v) for v in row]
                                for row in payload]})
        doc = {"format": FORMAT, "kind": "table", "name": theory.name,
               "semiring": _serialize_semiring(s),
               "objects": dict(theory.sizes), "unit": theory.unit_name,
               "events": events, "discards": dict(theory.discards)}
        if theory.tests:
            doc["tests"] = {k: list(v) for k, v in theory.tests.items()}
        if theory.coarse_grain_table:
            doc["coarse_grain"] = [list(t) for t in theory.coarse_grain_table]
        return doc
    if isinstance(theory, SubStochTheory):
        return {"format": FORMAT, "kind": "builtin", "name": "substoch",
                "parameters": {"grid": theory.grid}}
    if isinstance(theory, CpsuTheory):
        return {"format": FORMAT, "kind": "builtin", "name": "cpsu",
                "parameters": {"tol": theory.tol}}
    if isinstance(theory, MatrixTheory):
        return {"format": FORMAT, "kind": "builtin", "name": "mat",
                "parameters": {"semiring": _serialize_semiring(theory.semiring),
                               "grid": theory.grid}}
    if isinstance(theory, PFunTheory):
        return {"format": FORMAT, "kind": "builtin", "name": "pfun"}
    if hasattr(theory, "source_doc"):
        return theory.source_doc
    raise TheoryFileError(
        f"theory {getattr(theory, 'name', theory)!r} is not serializable",
        "serialize")


def save_theory(theory, path, bound=None):
    doc = serialize_theory(theory, bound=bound)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return doc

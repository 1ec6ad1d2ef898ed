"""JSON input documents: structure constants as exact "p/q" strings.

Layout (``schemaVersion`` 1)::

    {"schemaVersion": 1, "name": "...",
     "algebras": {NAME: {"parities": [0, ...], "labels": [...],
                         "unit": [[i, "p/q"], ...], "products": [[i, j, k, "p/q"], ...]}},
     "maps": {NAME: {"entries": [[i, j, "p/q"], ...]}},
     "bindings": {"kind": "section4" | "algebroid" | "tconf", ...}}

A product quadruple ``(i, j, k, c)`` means ``e_i e_j`` has coefficient c on
``e_k``; a map triple ``(i, j, c)`` means ``e_i`` maps to c ``e_j``.
Bindings:

* ``section4``: ``A``, ``g`` (algebra names), ``pi`` ({g-index: map name},
  each a derivation of A), optional ``d`` (map g -> A).
* ``algebroid``: ``A``, ``gamma`` ({parities, labels}) and the tables
  ``star`` (a, v, w, c), ``bracket`` (u, v, w, c), ``pairing`` (u, v, a, c),
  ``anchor`` (v, i, j, c): pi(v) e_i has c on e_j, ``partial`` (a, v, c),
  optional ``L1`` (v, a, c).
* ``tconf``: ``A``, ``b`` ({parities, labels}); ``partial`` (a, k, c),
  ``prod0``/``prod1`` (i, j, k, c) on combined indices (A first, then B);
  optional ``star`` (a, b, b', c) on B-indices.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

import jsonschema

from . import exact
from .algebra import StructureAlgebra
from .algebroid import VertexSuperalgebroid
from .exact import Q, format_rational, rational
from .tconf import TruncatedConformal

SCHEMA_VERSION = 1

_RAT = {"type": "string"}
_IDX = {"type": "integer", "minimum": 0}


def _tuple(n_idx: int) -> dict:
    return {"type": "array", "prefixItems": [_IDX] * n_idx + [_RAT], "minItems": n_idx + 1,
            "maxItems": n_idx + 1}


def _list(n_idx: int) -> dict:
    return {"type": "array", "items": _tuple(n_idx)}


_SPACE = {
    "type": "object",
    "required": ["parities"],
    "properties": {
        "parities": {"type": "array", "items": {"enum": [0, 1]}},
        "labels": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schemaVersion", "bindings"],
    "properties": {
        "schemaVersion": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "algebras": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["parities", "products"],
                "properties": {
                    "parities": {"type": "array", "items": {"enum": [0, 1]}},
                    "labels": {"type": "array", "items": {"type": "string"}},
                    "unit": _list(1),
                    "products": _list(3),
                },
                "additionalProperties": False,
            },
        },
        "maps": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["entries"],
                "properties": {"entries": _list(2)},
                "additionalProperties": False,
            },
        },
        "bindings": {
            "oneOf": [
                {
                    "type": "object",
                    "required": ["kind", "A", "g"],
                    "properties": {
                        "kind": {"const": "section4"},
                        "A": {"type": "string"},
                        "g": {"type": "string"},
                        "pi": {"type": "object", "additionalProperties": {"type": "string"}},
                        "d": {"type": "string"},
                    },
                    "additionalProperties": False,
                },
                {
                    "type": "object",
                    "required": ["kind", "A", "gamma"],
                    "properties": {
                        "kind": {"const": "algebroid"},
                        "A": {"type": "string"},
                        "gamma": _SPACE,
                        "star": _list(3),
                        "bracket": _list(3),
                        "pairing": _list(3),
                        "anchor": _list(3),
                        "partial": _list(2),
                        "L1": _list(2),
                    },
                    "additionalProperties": False,
                },
                {
                    "type": "object",
                    "required": ["kind", "A", "b"],
                    "properties": {
                        "kind": {"const": "tconf"},
                        "A": {"type": "string"},
                        "b": _SPACE,
                        "partial": _list(2),
                        "prod0": _list(3),
                        "prod1": _list(3),
                        "star": _list(3),
                    },
                    "additionalProperties": False,
                },
            ]
        },
    },
    "additionalProperties": False,
}


class DocumentError(ValueError):
    """Input error located by a JSON pointer."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.detail = message


class ParseError(DocumentError):
    pass


class SchemaError(DocumentError):
    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        ptr, msg = errors[0]
        super().__init__(msg + (f" (and {len(errors) - 1} more)" if len(errors) > 1 else ""), ptr)


class IndexOutOfRange(DocumentError):
    pass


class BadRational(DocumentError, exact.BadRational):
    pass


class UnknownReference(DocumentError):
    pass


def _ptr(*parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def _rat(s: str, pointer: str) -> Q:
    try:
        return rational(s)
    except exact.BadRational as ex:
        raise BadRational(str(ex), pointer) from None


def _check_idx(i: int, bound: int, pointer: str, what: str):
    if not 0 <= i < bound:
        raise IndexOutOfRange(f"{what} index {i} out of range [0, {bound})", pointer)


def _table(rows: list, bounds: tuple, base: tuple, names: tuple) -> dict:
    """Quadruples/triples to ``{key: {target: Q}}``; the key is a tuple for
    two leading indices and an int for one."""
    out: dict = {}
    for r, row in enumerate(rows):
        ptr = _ptr(*base, r)
        *idx, c = row
        for pos, (i, b, nm) in enumerate(zip(idx, bounds, names)):
            _check_idx(i, b, _ptr(*base, r, pos), nm)
        val = _rat(c, _ptr(*base, r, len(idx)))
        key = tuple(idx[:-1]) if len(idx) > 2 else idx[0]
        tgt = out.setdefault(key, {})
        if idx[-1] in tgt:
            raise DocumentError(f"duplicate entry for {tuple(idx)}", ptr)
        if val:
            tgt[idx[-1]] = val
    return {k: v for k, v in out.items() if v}


class InputDocument:
    """A validated input document."""

    def __init__(self, raw: Mapping, source: str = "<memory>"):
        self.raw = raw
        self.source = source
        validator = jsonschema.Draft202012Validator(SCHEMA)
        errors = sorted(validator.iter_errors(raw), key=lambda e: (list(e.absolute_path), e.message))
        if errors:
            raise SchemaError([(_ptr(*e.absolute_path), e.message) for e in errors])
        self.name = raw.get("name", Path(source).stem)
        self.algebras = {k: self._algebra(k, v) for k, v in raw.get("algebras", {}).items()}
        self.bindings = raw["bindings"]
        self.kind = self.bindings["kind"]

    def _algebra(self, name: str, spec: Mapping) -> StructureAlgebra:
        dim = len(spec["parities"])
        labels = spec.get("labels")
        if labels is not None and len(labels) != dim:
            raise SchemaError([(_ptr("algebras", name, "labels"), f"{len(labels)} labels for dimension {dim}")])
        prod = _table(spec["products"], (dim, dim, dim), ("algebras", name, "products"), ("left", "right", "target"))
        unit = None
        if "unit" in spec:
            unit = {}
            for r, (i, c) in enumerate(spec["unit"]):
                _check_idx(i, dim, _ptr("algebras", name, "unit", r, 0), "unit")
                unit[i] = _rat(c, _ptr("algebras", name, "unit", r, 1))
        return StructureAlgebra(spec["parities"], prod, unit=unit, name=name, labels=labels)

    def algebra(self, ref: str, pointer: str) -> StructureAlgebra:
        if ref not in self.algebras:
            raise UnknownReference(f"no algebra named {ref!r}", pointer)
        return self.algebras[ref]

    def map_entries(self, ref: str, pointer: str) -> list:
        maps = self.raw.get("maps", {})
        if ref not in maps:
            raise UnknownReference(f"no map named {ref!r}", pointer)
        return maps[ref]["entries"]

    def map(self, ref: str, src: int, tgt: int, pointer: str) -> dict:
        self.map_entries(ref, pointer)
        return _table(self.raw["maps"][ref]["entries"], (src, tgt), ("maps", ref, "entries"), ("source", "target"))

    # --- constructions -----------------------------------------------------

    def section4_input(self):
        from .kahler import SectionFourInput

        b = self.bindings
        if self.kind != "section4":
            raise DocumentError(f"bindings are {self.kind!r}, not 'section4'", "/bindings/kind")
        A = self.algebra(b["A"], "/bindings/A")
        g = self.algebra(b["g"], "/bindings/g")
        pi = {}
        for k, ref in b.get("pi", {}).items():
            ptr = _ptr("bindings", "pi", k)
            try:
                gi = int(k)
            except ValueError:
                raise SchemaError([(ptr, f"g-index key {k!r} is not an integer")]) from None
            _check_idx(gi, g.dim, ptr, "g")
            pi[gi] = self.map(ref, A.dim, A.dim, ptr)
        d = self.map(b["d"], g.dim, A.dim, "/bindings/d") if "d" in b else {}
        return SectionFourInput(A, g, pi, d, name=self.name)

    def algebroid(self):
        """(VertexSuperalgebroid, BModuleData or None) for an algebroid
        binding."""
        from .virplus import BModuleData

        b = self.bindings
        if self.kind != "algebroid":
            raise DocumentError(f"bindings are {self.kind!r}, not 'algebroid'", "/bindings/kind")
        A = self.algebra(b["A"], "/bindings/A")
        gam = b["gamma"]
        dB, dA = len(gam["parities"]), A.dim
        base = ("bindings",)
        star = _table(b.get("star", []), (dA, dB, dB), base + ("star",), ("A", "Gamma", "Gamma"))
        bracket = _table(b.get("bracket", []), (dB, dB, dB), base + ("bracket",), ("Gamma",) * 3)
        pairing = _table(b.get("pairing", []), (dB, dB, dA), base + ("pairing",), ("Gamma", "Gamma", "A"))
        anchor: dict = {}
        for (v, i), img in _table(b.get("anchor", []), (dB, dA, dA), base + ("anchor",), ("Gamma", "A", "A")).items():
            anchor.setdefault(v, {})[i] = img
        partial = _table(b.get("partial", []), (dA, dB), base + ("partial",), ("A", "Gamma"))
        V = VertexSuperalgebroid(A, gam["parities"], star, bracket, anchor, pairing, partial,
                                 gamma_labels=gam.get("labels"))
        data = None
        if "L1" in b:
            data = BModuleData(dB, _table(b["L1"], (dB, dA), base + ("L1",), ("Gamma", "A")))
        return V, data

    def tconf(self):
        """(TruncatedConformal, star or None) for a tconf binding."""
        b = self.bindings
        if self.kind != "tconf":
            raise DocumentError(f"bindings are {self.kind!r}, not 'tconf'", "/bindings/kind")
        A = self.algebra(b["A"], "/bindings/A")
        dA, dB = A.dim, len(b["b"]["parities"])
        n = dA + dB
        base = ("bindings",)
        partial = _table(b.get("partial", []), (dA, n), base + ("partial",), ("A", "combined"))
        for a, img in partial.items():
            for k in img:
                if k < dA:
                    raise IndexOutOfRange(f"partial({a}) must land in B, got index {k}", _ptr(*base, "partial"))
        prod0 = _table(b.get("prod0", []), (n, n, n), base + ("prod0",), ("combined",) * 3)
        prod1 = _table(b.get("prod1", []), (n, n, n), base + ("prod1",), ("combined",) * 3)
        C = TruncatedConformal(A, b["b"]["parities"], partial, prod0, prod1, b_labels=b["b"].get("labels"))
        star = None
        if "star" in b:
            star = _table(b["star"], (dA, dB, dB), base + ("star",), ("A", "B", "B"))
        return C, star


def load_document(path: str | Path) -> InputDocument:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as ex:
        raise ParseError(f"cannot read {path}: {ex.strerror}") from None
    return parse_document(text, str(path))


def parse_document(text: str, source: str = "<memory>") -> InputDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as ex:
        raise ParseError(f"invalid JSON at line {ex.lineno} column {ex.colno}: {ex.msg}") from None
    if not isinstance(raw, dict):
        raise SchemaError([("", "top level must be an object")])
    return InputDocument(raw, source)


# ---------------------------------------------------------------------------
# writers (used to produce the shipped fixtures)


def _rows(table: Mapping) -> list:
    out = []
    for key in sorted(table):
        head = list(key) if isinstance(key, tuple) else [key]
        for k in sorted(table[key]):
            out.append(head + [k, format_rational(table[key][k])])
    return out


def dump_algebra(A: StructureAlgebra) -> dict:
    d: dict[str, Any] = {"parities": list(A.parities), "labels": list(A.labels), "products": _rows(A.product)}
    if A.unit is not None:
        d["unit"] = [[k, format_rational(c)] for k, c in sorted(A.unit.items())]
    return d


def section4_document(inp, name: str, description: str = "") -> dict:
    maps = {}
    pi = {}
    for gi, m in sorted(inp.pi.items()):
        maps[f"pi_{gi}"] = {"entries": _rows(m)}
        pi[str(gi)] = f"pi_{gi}"
    bindings: dict[str, Any] = {"kind": "section4", "A": "A", "g": "g", "pi": pi}
    if inp.d:
        maps["d"] = {"entries": _rows(inp.d)}
        bindings["d"] = "d"
    doc: dict[str, Any] = {"schemaVersion": SCHEMA_VERSION, "name": name}
    if description:
        doc["description"] = description
    doc.update({"algebras": {"A": dump_algebra(inp.A), "g": dump_algebra(inp.g)}, "maps": maps,
                "bindings": bindings})
    return doc


def algebroid_document(V: VertexSuperalgebroid, name: str, L1: Mapping | None = None, description: str = "") -> dict:
    anchor = {(v, i): img for v, m in V.pi.items() for i, img in m.items()}
    bindings: dict[str, Any] = {
        "kind": "algebroid", "A": "A",
        "gamma": {"parities": list(V.parities), "labels": list(V.labels)},
        "star": _rows(V.star), "bracket": _rows(V.bracket), "pairing": _rows(V.pairing),
        "anchor": _rows(anchor), "partial": _rows(V.partial),
    }
    if L1 is not None:
        bindings["L1"] = _rows(L1)
    doc: dict[str, Any] = {"schemaVersion": SCHEMA_VERSION, "name": name}
    if description:
        doc["description"] = description
    doc.update({"algebras": {"A": dump_algebra(V.A)}, "bindings": bindings})
    return doc


def tconf_document(C: TruncatedConformal, name: str, star: Mapping | None = None, description: str = "") -> dict:
    bindings: dict[str, Any] = {
        "kind": "tconf", "A": "A", "b": {"parities": list(C.b_parities), "labels": list(C.b_labels)},
        "partial": _rows(C.partial), "prod0": _rows(C.prod0), "prod1": _rows(C.prod1),
    }
    if star is not None:
        bindings["star"] = _rows(star)
    doc: dict[str, Any] = {"schemaVersion": SCHEMA_VERSION, "name": name}
    if description:
        doc["description"] = description
    doc.update({"algebras": {"A": dump_algebra(C.A)}, "bindings": bindings})
    return doc

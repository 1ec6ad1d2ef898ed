"""Shipped example inputs, built in Python; the JSON files under
``fixtures/`` are generated from these by :func:`write_fixtures`.

Valid geometric inputs (each with d = 0 and one nonzero d where a valid
nonzero d exists):

* ``free_boson`` / ``free_fermion``: A = C, g one-dimensional even/odd,
  trivial action.  The odd case admits only d = 0 (d must be even).
* ``euler_x2``: A = C[x]/(x^2), g = C x d/dx; nonzero d(g) = 1.
* ``euler_x3``: A = C[x]/(x^3), g = C x d/dx; nonzero d(g) = x.
* ``ef_x3``: A = C[x]/(x^3), g = span{e = x d/dx, f = x^2 d/dx} with
  [e, f] = f; nonzero d(e) = 1, d(f) = 0.

Corrupted inputs: ``ef_x3_broken_d`` (d(e) = 0, d(f) = 1 violates the
cocycle law), ``euler_x2_broken_pairing`` (tensor/differential pairing
zeroed), ``euler_x2_bad_L1`` (L(1) nonzero on dx) and ``ddx_x2`` (d/dx on
C[x]/(x^2), which is not a derivation there).
"""
from __future__ import annotations

import json
import re
from pathlib import Path

from .algebra import StructureAlgebra
from .exact import ONE, Q

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def complex_numbers() -> StructureAlgebra:
    return StructureAlgebra([0], {(0, 0): {0: ONE}}, unit={0: ONE}, name="A", labels=["1"])


def lie(dim: int, bracket: dict, parities=None, labels=None) -> StructureAlgebra:
    return StructureAlgebra(parities or [0] * dim, bracket, name="g", labels=labels or [f"g{i}" for i in range(dim)])


def section4_inputs() -> dict:
    """name -> SectionFourInput for every valid geometric fixture."""
    from .kahler import SectionFourInput

    C1 = complex_numbers()
    A2 = StructureAlgebra.truncated_polynomial(2)
    A3 = StructureAlgebra.truncated_polynomial(3)
    euler2 = {0: {1: {1: ONE}}}
    euler3 = {0: {1: {1: ONE}, 2: {2: Q(2)}}}
    ef = {0: {1: {1: ONE}, 2: {2: Q(2)}}, 1: {1: {2: ONE}}}
    g_ef = lie(2, {(0, 1): {1: ONE}, (1, 0): {1: -ONE}}, labels=["e", "f"])
    g1 = lie(1, {}, labels=["g"])
    return {
        "free_boson": SectionFourInput(C1, g1, {}, {}, name="free_boson"),
        "free_boson_d1": SectionFourInput(C1, g1, {}, {0: {0: ONE}}, name="free_boson_d1"),
        "free_fermion": SectionFourInput(C1, lie(1, {}, [1], labels=["g"]), {}, {}, name="free_fermion"),
        "euler_x2": SectionFourInput(A2, g1, euler2, {}, name="euler_x2"),
        "euler_x2_d1": SectionFourInput(A2, g1, euler2, {0: {0: ONE}}, name="euler_x2_d1"),
        "euler_x3": SectionFourInput(A3, g1, euler3, {}, name="euler_x3"),
        "euler_x3_dx": SectionFourInput(A3, g1, euler3, {0: {1: ONE}}, name="euler_x3_dx"),
        "ef_x3": SectionFourInput(A3, g_ef, ef, {}, name="ef_x3"),
        "ef_x3_d": SectionFourInput(A3, g_ef, ef, {0: {0: ONE}}, name="ef_x3_d"),
    }


def broken_d_input():
    from .kahler import SectionFourInput

    base = section4_inputs()["ef_x3"]
    return SectionFourInput(base.A, base.g, base.pi, {1: {0: ONE}}, name="ef_x3_broken_d")


def ddx_input():
    """d/dx on C[x]/(x^2): rejected, d/dx(x * x) = 2x but x^2 = 0."""
    from .kahler import SectionFourInput

    return SectionFourInput(StructureAlgebra.truncated_polynomial(2), lie(1, {}, labels=["d/dx"]),
                            {0: {1: {0: ONE}}}, {}, name="ddx_x2")


def broken_pairing_algebroid():
    """euler_x2_d1 with the tensor/differential pairing set to zero."""
    from .algebroid import VertexSuperalgebroid
    from .kahler import build_section4_algebroid, build_section4_L1

    inp = section4_inputs()["euler_x2_d1"]
    V = build_section4_algebroid(inp)
    dT = V.dT
    pairing = {k: v for k, v in V.pairing.items() if (k[0] < dT) == (k[1] < dT)}
    W = VertexSuperalgebroid(V.A, V.parities, V.star, V.bracket, V.pi, pairing, V.partial, gamma_labels=V.labels)
    return W, build_section4_L1(inp, V)


def bad_L1_algebroid():
    """euler_x2_d1 with L(1)(dx) = 1, so L(1) dA != 0."""
    from .kahler import build_section4_algebroid, build_section4_L1
    from .virplus import BModuleData

    inp = section4_inputs()["euler_x2_d1"]
    V = build_section4_algebroid(inp)
    data = build_section4_L1(inp, V)
    return V, BModuleData(V.dB, {**data.L1, V.dT: {0: ONE}})


def fixture_documents() -> dict:
    """file stem -> JSON document."""
    from .algebroid import to_truncated_conformal
    from .document import algebroid_document, section4_document, tconf_document
    from .kahler import build_section4_algebroid, build_section4_L1

    docs = {}
    for name, inp in section4_inputs().items():
        docs[name] = section4_document(inp, name)
    docs["ef_x3_broken_d"] = section4_document(broken_d_input(), "ef_x3_broken_d",
                                               "corrupted: d(e) = 0, d(f) = 1 breaks d([e,f]) = e.d(f) - f.d(e)")
    docs["ddx_x2"] = section4_document(ddx_input(), "ddx_x2", "invalid: d/dx is not a derivation of C[x]/(x^2)")
    W, data = broken_pairing_algebroid()
    docs["euler_x2_broken_pairing"] = algebroid_document(W, "euler_x2_broken_pairing", data.L1,
                                                         "corrupted: <a (x) g, a' db> set to 0")
    V, data = bad_L1_algebroid()
    docs["euler_x2_bad_L1"] = algebroid_document(V, "euler_x2_bad_L1", data.L1, "corrupted: L(1)(dx) = 1")
    V = build_section4_algebroid(section4_inputs()["euler_x2_d1"])
    docs["euler_x2_d1_algebroid"] = algebroid_document(V, "euler_x2_d1_algebroid",
                                                       build_section4_L1(V.input, V).L1)
    for name in ("free_boson", "euler_x2"):
        V = build_section4_algebroid(section4_inputs()[name])
        docs[f"{name}_tconf"] = tconf_document(to_truncated_conformal(V), f"{name}_tconf", V.star)
    return docs


def dumps_compact(doc) -> str:
    """Indented JSON with each innermost list on one line."""
    text = json.dumps(doc, indent=1)
    return re.sub(r"\[\s*([^\[\]{}]*?)\s*\]", lambda m: "[" + re.sub(r"\s*\n\s*", " ", m.group(1)) + "]", text)


def write_fixtures(directory: Path = FIXTURE_DIR) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name, doc in fixture_documents().items():
        p = directory / f"{name}.json"
        p.write_text(dumps_compact(doc) + "\n")
        out.append(p)
    return out


def fixture_path(name: str) -> Path:
    return FIXTURE_DIR / f"{name}.json"


if __name__ == "__main__":
    for p in write_fixtures():
        print(p)

"""The eleven acceptance criteria.  Each test records one pass/fail line
(printed in the terminal summary) and asserts exactness and the time budget."""
from __future__ import annotations

import time

import pytest

from vsalgebroid.algebroid import AxiomViolation, check_algebroid_axioms, correspondence_report, to_truncated_conformal
from vsalgebroid.examples import bad_L1_algebroid, broken_d_input, broken_pairing_algebroid
from vsalgebroid.kahler import build_section4_algebroid, build_section4_L1
from vsalgebroid.loop import LoopQuotient, check_loop_jacobi
from vsalgebroid.tconf import check_tconf
from vsalgebroid.verma import VermaModule, build_vb, check_confluence, check_lemma_e, verify_borcherds
from vsalgebroid.virplus import (
    check_dhat_equivariance, check_Lm_mode_bracket, check_LmE_stability, check_semiconformal_conditions,
    check_vir_relations_on_loop, invariant_form_dimension,
)

from conftest import ACCEPTANCE, NAMES, algebroid, b_module, vb
from oracles import distinct_partitions, partitions


def corrupted() -> dict:
    inp = broken_d_input()
    V = build_section4_algebroid(inp)
    return {
        "ef_x3_broken_d": (V, build_section4_L1(inp, V)),
        "euler_x2_broken_pairing": broken_pairing_algebroid(),
        "euler_x2_bad_L1": bad_L1_algebroid(),
    }


def record(k: int, title: str, ok: bool, elapsed: float, budget: float, detail: str = "") -> None:
    status = "PASS" if ok and elapsed < budget else "FAIL"
    line = f"[{status}] criterion {k}: {title} ({elapsed:.2f} s, budget {budget:g} s)"
    ACCEPTANCE[k] = line + (f"  {detail}" if detail else "")
    print(ACCEPTANCE[k])


class Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def _failures(reports: dict) -> list[str]:
    return [f"{name}: {rep.first_failure().label}" for name, rep in reports.items() if not rep.passed]


def test_criterion_01_virasoro_relations_on_loop():
    algebroids = {n: (algebroid(n), b_module(n)) for n in NAMES} | corrupted()
    reports, excluded, slowest = {}, [], 0.0
    for name, (V, data) in algebroids.items():
        try:
            C = to_truncated_conformal(V)
        except AxiomViolation:
            # not a 1-truncated conformal algebra, so there is no loop Lie algebra
            excluded.append(name)
            continue
        with Timer() as t:
            reports[name] = check_vir_relations_on_loop(C, data, m_range=range(-1, 5), window=(-6, 6))
        slowest = max(slowest, t.elapsed)
    bad = _failures(reports)
    detail = "; ".join(bad + [f"{n}: not a conformal algebra, excluded" for n in excluded])
    record(1, f"[L(m), L(n)] = (m-n) L(m+n) on the loop algebra, {len(reports)} fixtures, slowest fixture",
           not bad, slowest, 5, detail)
    assert not bad and slowest < 5
    assert excluded == ["euler_x2_broken_pairing"]


def test_criterion_02_dhat_equivariance():
    with Timer() as t:
        reports = {n: check_dhat_equivariance(to_truncated_conformal(algebroid(n)), b_module(n),
                                              m_range=range(-1, 5), window=(-6, 6)) for n in NAMES}
    bad = _failures(reports)
    record(2, f"L(m) dhat(a t^n) = -n dhat(a t^(m+n)), {len(reports)} fixtures", not bad, t.elapsed, 1,
           "; ".join(bad))
    assert not bad and t.elapsed < 1


def test_criterion_03_axiom_suites():
    bad, slowest = [], 0.0
    for name in NAMES:
        with Timer() as t:
            V = algebroid(name)
            C = to_truncated_conformal(V)
            reports = {"algebroid": check_algebroid_axioms(V), "correspondence": correspondence_report(C, V.star),
                       "tconf": check_tconf(C)}
        slowest = max(slowest, t.elapsed)
        bad += [f"{name} {k}: {r.first_failure().label}" for k, r in reports.items() if not r.passed]
    record(3, f"algebra, Leibniz, algebroid, correspondence and tconf axioms, {len(NAMES)} fixtures, slowest fixture",
           not bad, slowest, 30, "; ".join(bad))
    assert not bad and slowest < 30


def test_criterion_04_loop_jacobi():
    with Timer() as t:
        reports = {n: check_loop_jacobi(LoopQuotient(to_truncated_conformal(algebroid(n)), (-4, 4))) for n in NAMES}
    bad = _failures(reports) + [f"{n}: sampled" for n, r in reports.items() if not r.info["exhaustive"]]
    record(4, f"exhaustive super Jacobi and skew-symmetry on window [-4, 4], {len(NAMES)} fixtures",
           not bad, t.elapsed, 60, "; ".join(bad))
    assert not bad and t.elapsed < 60


def test_criterion_05_graded_dimensions():
    with Timer() as t:
        boson = build_vb(algebroid("free_boson"), 6).dims()
        fermion = build_vb(algebroid("free_fermion"), 6).dims()
        low = {n: vb(n).dims()[:2] for n in NAMES}
    bad = []
    if boson != [partitions(n) for n in range(7)] or boson != [1, 1, 2, 3, 5, 7, 11]:
        bad.append(f"free_boson {boson}")
    if fermion != [distinct_partitions(n) for n in range(7)] or fermion != [1, 1, 1, 2, 2, 3, 4]:
        bad.append(f"free_fermion {fermion}")
    bad += [f"{n} {d}" for n, d in low.items() if d != [algebroid(n).dA, algebroid(n).dB]]
    record(5, f"deg 0 = dim A, deg 1 = dim B on {len(NAMES)} fixtures; boson {boson[:6]}, fermion {fermion}",
           not bad, t.elapsed, 60, "; ".join(bad))
    assert not bad and t.elapsed < 60


EXPECTED_FAILURE = {
    "ef_x3_broken_d": "semi-conformal (ii)",
    "euler_x2_broken_pairing": "algebroid:",
    "euler_x2_bad_L1": "semi-conformal (i)",
}


def test_criterion_06_semiconformal_decision():
    with Timer() as t:
        valid = {n: check_semiconformal_conditions(algebroid(n), b_module(n)) for n in NAMES}
        broken = {n: check_semiconformal_conditions(V, data) for n, (V, data) in corrupted().items()}
    bad = _failures(valid)
    for name, rep in broken.items():
        f = rep.first_failure()
        if f is None or f.witness is None or not f.label.startswith(EXPECTED_FAILURE[name]):
            bad.append(f"{name}: {f.label if f else 'passed'}")
    record(6, f"{len(valid)} valid fixtures pass, {len(broken)} corrupted fixtures fail with a witness",
           not bad, t.elapsed, 5, "; ".join(bad))
    assert not bad and t.elapsed < 5


def test_criterion_07_mode_bracket_on_vb():
    for n in NAMES:
        vb(n)  # construction is timed by criterion 5
    with Timer() as t:
        reports = {n: check_Lm_mode_bracket(vb(n), b_module(n), m_range=range(-1, 4), max_degree=4) for n in NAMES}
    bad = _failures(reports)
    record(7, f"[L(m), u(n)] formula, L(-1) = D, L(0) = degree up to degree 4, {len(NAMES)} fixtures",
           not bad, t.elapsed, 120, "; ".join(bad))
    assert not bad and t.elapsed < 120


def test_criterion_08_ideal_stability():
    with Timer() as t:
        reports = {}
        for n in NAMES:
            M = VermaModule(algebroid(n), 2)
            reports[f"{n} generators"] = check_lemma_e(M)
            reports[f"{n} L(m)E"] = check_LmE_stability(M, b_module(n), m_range=range(0, 4))
    bad = _failures(reports)
    record(8, f"v(n)E, D E0, B(-1)E0 and L(m)E memberships, {len(NAMES)} fixtures", not bad, t.elapsed, 10,
           "; ".join(bad))
    assert not bad and t.elapsed < 10


def test_criterion_09_borcherds():
    for n in NAMES:
        vb(n)
    with Timer() as t:
        reports = {n: verify_borcherds(vb(n), mode_range=range(-2, 3), max_degree=3) for n in NAMES}
    bad = _failures(reports)
    record(9, f"commutator formula for m, n in [-2, 2] on degree <= 3, {len(NAMES)} fixtures", not bad, t.elapsed,
           120, "; ".join(bad))
    assert not bad and t.elapsed < 120


def test_criterion_10_invariant_form_dimension():
    expected = {"free_boson": 1, "free_fermion": 1, "euler_x2_d1": 0}
    with Timer() as t:
        got = {n: invariant_form_dimension(algebroid(n), b_module(n)) for n in expected}
    record(10, f"dim A / L(1)B = {got}", got == expected, t.elapsed, 1)
    assert got == expected and t.elapsed < 1


def test_criterion_11_confluence():
    for n in NAMES:
        vb(n)
    with Timer() as t:
        reports = {n: check_confluence(vb(n).M, max_degree=4) for n in NAMES}
    bad = _failures(reports)
    record(11, f"left-first = right-first on length-3 negative products of degree <= 4, {len(NAMES)} fixtures",
           not bad, t.elapsed, 60, "; ".join(bad))
    assert not bad and t.elapsed < 60

from __future__ import annotations

import pytest

from vsalgebroid.algebroid import to_truncated_conformal
from vsalgebroid.examples import bad_L1_algebroid, broken_d_input, broken_pairing_algebroid
from vsalgebroid.exact import ONE, Q
from vsalgebroid.kahler import build_section4_algebroid, build_section4_L1
from vsalgebroid.loop import LoopElement, LoopQuotient
from vsalgebroid.verma import VermaModule, vacuum
from vsalgebroid.virplus import (
    BModuleData, PreconditionFailed, check_dhat_equivariance, check_Lm_mode_bracket, check_LmE_stability,
    check_semiconformal_conditions, check_vir_derivations, check_vir_relations_on_loop, invariant_form_dimension,
    l_operator, vir_act_loop,
)

from conftest import NAMES, algebroid, b_module, vb


def test_L_minus_one_on_loop():
    C = to_truncated_conformal(algebroid("euler_x2_d1"))
    data = b_module("euler_x2_d1")
    for u in range(C.dim):
        assert vir_act_loop(-1, LoopElement.mode(C, u, 3), data, C).terms == {(u, 2): Q(-3)}


def test_A_modes_scale():
    C = to_truncated_conformal(algebroid("euler_x2_d1"))
    data = b_module("euler_x2_d1")
    for p in range(-1, 4):
        for q in range(-3, 4):
            got = vir_act_loop(p, LoopElement.mode(C, 1, q), data, C).terms
            assert got == ({(1, p + q): Q(-(p + q + 1))} if p + q + 1 else {})


def test_L0_on_B_modes():
    C = to_truncated_conformal(algebroid("euler_x3_dx"))
    data = b_module("euler_x3_dx")
    for n in range(-3, 4):
        assert vir_act_loop(0, LoopElement.mode(C, C.dA, n), data, C).terms == ({(C.dA, n): Q(-n)} if n else {})


def test_L1_term_enters_with_binomial():
    C = to_truncated_conformal(algebroid("euler_x2_d1"))
    data = b_module("euler_x2_d1")
    # L(1)*(b(0)) = -2 b(1) + 2 b(1) + (L(1)b)(0) for b = 1 (x) g, L(1)b = 1
    assert vir_act_loop(1, LoopElement.mode(C, C.dA, 0), data, C).terms == {(0, 0): ONE}


def test_L_below_minus_one_is_refused():
    C = to_truncated_conformal(algebroid("free_boson"))
    with pytest.raises(ValueError):
        vir_act_loop(-2, {}, b_module("free_boson"), C)


@pytest.mark.parametrize("name", NAMES)
def test_loop_checks(name):
    C = to_truncated_conformal(algebroid(name))
    data = b_module(name)
    assert check_vir_relations_on_loop(C, data).passed
    assert check_dhat_equivariance(C, data).passed
    assert check_vir_derivations(LoopQuotient(C, (-3, 3)), data).passed


def test_dhat_precondition():
    V, data = bad_L1_algebroid()
    with pytest.raises(PreconditionFailed) as info:
        check_dhat_equivariance(to_truncated_conformal(V), data)
    assert info.value.report.first_failure().witness.indices == {"a": 1}


@pytest.mark.parametrize("name", NAMES)
def test_semiconformal_on_valid_inputs(name):
    assert check_semiconformal_conditions(algebroid(name), b_module(name)).passed


def test_zero_L1_is_semiconformal_only_over_C():
    V = algebroid("free_boson")
    assert check_semiconformal_conditions(V, BModuleData(V.dB, {})).passed
    # with a nontrivial action, a_0 b != 0 and condition (iii) needs L(1) != 0
    V = algebroid("ef_x3")
    rep = check_semiconformal_conditions(V, BModuleData(V.dB, {}))
    assert rep.first_failure().label.startswith("semi-conformal (iii)")


def test_broken_d_fails_condition_ii():
    inp = broken_d_input()
    V = build_section4_algebroid(inp)
    rep = check_semiconformal_conditions(V, build_section4_L1(inp, V))
    assert rep.first_failure().label.startswith("semi-conformal (ii)")


def test_broken_pairing_fails_in_the_algebroid_part():
    W, data = broken_pairing_algebroid()
    rep = check_semiconformal_conditions(W, data)
    assert not rep.passed and rep.first_failure().label.startswith("algebroid:")


def test_bad_L1_fails_condition_i():
    V, data = bad_L1_algebroid()
    rep = check_semiconformal_conditions(V, data)
    assert rep.first_failure().label.startswith("semi-conformal (i)")


def test_invariant_form_dimensions():
    assert invariant_form_dimension(algebroid("free_boson"), b_module("free_boson")) == 1
    assert invariant_form_dimension(algebroid("free_fermion"), b_module("free_fermion")) == 1
    assert invariant_form_dimension(algebroid("free_boson_d1"), b_module("free_boson_d1")) == 0
    assert invariant_form_dimension(algebroid("euler_x2_d1"), b_module("euler_x2_d1")) == 0
    # d = 0: L(1)(a (x) g) = x a spans C x
    assert invariant_form_dimension(algebroid("euler_x2"), b_module("euler_x2")) == 1


@pytest.mark.parametrize("name", NAMES)
def test_LmE_stability(name):
    M = VermaModule(algebroid(name), 2)
    assert check_LmE_stability(M, b_module(name)).passed


def test_L0_and_L1_on_embedded_states():
    name = "euler_x2_d1"
    M = VermaModule(algebroid(name), 2)
    data = b_module(name)
    b = M.dA  # 1 (x) g
    s = M.state(b)
    assert l_operator(M, data, 0, s) == s
    assert l_operator(M, data, 1, s) == M.vector_state(data.l1(0))
    for m in range(-1, 4):
        assert l_operator(M, data, m, vacuum()) == {}


@pytest.mark.parametrize("name", ["free_boson", "euler_x2_d1", "euler_x3_dx"])
def test_mode_bracket_on_vb(name):
    rep = check_Lm_mode_bracket(vb(name), b_module(name))
    assert rep.passed, rep.render()

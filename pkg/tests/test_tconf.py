from __future__ import annotations

import pytest

from vsalgebroid.algebroid import to_truncated_conformal
from vsalgebroid.examples import complex_numbers
from vsalgebroid.exact import ONE
from vsalgebroid.tconf import (
    InputError, TruncatedConformal, check_derivation_axiom, check_superassociativity_axiom,
    check_supercommutativity_axiom, check_tconf, direct_sum, replay,
)

from conftest import algebroid


def _zero():
    return TruncatedConformal(complex_numbers(), [0], {}, {}, {})


def _perturbed(C, prod0=None, prod1=None):
    return TruncatedConformal(C.A, C.b_parities, C.partial, prod0 or C.prod0, prod1 or C.prod1, C.b_labels)


def test_zero_products_pass():
    C = _zero()
    assert check_derivation_axiom(C).passed
    assert check_supercommutativity_axiom(C).passed
    assert check_superassociativity_axiom(C).passed


@pytest.mark.parametrize("name", ["euler_x2", "euler_x3", "ef_x3"])
def test_geometric_instances_pass(name):
    assert check_tconf(to_truncated_conformal(algebroid(name))).passed


def test_prod0_mutation_fails_with_replayable_witness():
    C = to_truncated_conformal(algebroid("euler_x2"))
    p0 = dict(C.prod0)
    # u_0 a for the first B element and a = x, which is nonzero here
    key = next(k for k in sorted(p0) if k[0] >= C.dA and k[1] < C.dA)
    p0[key] = {**p0[key], 0: p0[key].get(0, 0) + ONE}
    bad = _perturbed(C, prod0=p0)
    rep = check_tconf(bad)
    assert not rep.passed
    failure = rep.first_failure()
    lhs, rhs = replay(bad, failure.label, failure.witness.indices)
    assert lhs != rhs


def test_antisymmetric_prod1_fails_supercommutativity():
    C = to_truncated_conformal(algebroid("free_boson"))
    b = C.dA
    p1 = {(b, b): {0: ONE}}
    C2 = TruncatedConformal(C.A, [0, 0], {}, {}, {(1, 2): {0: ONE}, (2, 1): {0: -ONE}})
    assert not check_supercommutativity_axiom(C2)["super commutativity: u_1 v = eps v_1 u"].passed
    assert check_supercommutativity_axiom(_perturbed(C, prod1=p1)).passed


def test_odd_partial_is_rejected():
    with pytest.raises(InputError):
        TruncatedConformal(complex_numbers(), [1], {0: {1: ONE}}, {}, {})


def test_direct_sum_of_passing_instances_passes():
    C = to_truncated_conformal(algebroid("euler_x2"))
    D = to_truncated_conformal(algebroid("free_fermion"))
    assert check_tconf(direct_sum(C, D)).passed

from __future__ import annotations

import pytest

from vsalgebroid.algebroid import (
    ALGEBROID_AXIOMS, PAIRING_EXACT, AxiomViolation, PrerequisiteFailed, VertexSuperalgebroid,
    check_algebroid_axioms, from_truncated_conformal, replay, tables_equal, to_truncated_conformal,
)
from vsalgebroid.examples import broken_pairing_algebroid, complex_numbers
from vsalgebroid.exact import ONE

from conftest import NAMES, algebroid


def _trivial():
    return VertexSuperalgebroid(complex_numbers(), [], {}, {}, {}, {}, {})


def test_trivial_algebroid_passes_and_has_zero_conformal_products():
    V = _trivial()
    assert check_algebroid_axioms(V).passed
    C = to_truncated_conformal(V)
    assert C.prod0 == {} and C.prod1 == {}
    assert tables_equal(from_truncated_conformal(C, V.star), V)


@pytest.mark.parametrize("name", NAMES)
def test_geometric_algebroids_pass_every_axiom(name):
    rep = check_algebroid_axioms(algebroid(name))
    assert rep.passed, rep.render()
    assert set(ALGEBROID_AXIOMS) <= set(rep.labels())


@pytest.mark.parametrize("name", NAMES)
def test_round_trip_through_conformal_algebra(name):
    V = algebroid(name)
    assert tables_equal(from_truncated_conformal(to_truncated_conformal(V), V.star), V)


def test_zeroed_pairing_fails_pairing_with_exact():
    W, _ = broken_pairing_algebroid()
    rep = check_algebroid_axioms(W)
    res = rep[PAIRING_EXACT]
    assert not res.passed
    lhs, rhs = replay(W, PAIRING_EXACT, res.witness.indices)
    assert lhs == {} and rhs != {}


def test_broken_star_is_named_by_the_correspondence():
    V = algebroid("euler_x3")
    star = dict(V.star)
    key = sorted(star)[-1]
    star[key] = {**star[key], 0: star[key].get(0, 0) + ONE}
    C = to_truncated_conformal(V)
    with pytest.raises(AxiomViolation) as info:
        from_truncated_conformal(C, star)
    assert "module defect via 0-products" in str(info.value)


def test_noncommutative_A_is_a_prerequisite_failure():
    from vsalgebroid.algebra import StructureAlgebra

    A = StructureAlgebra([0, 0], {(0, 0): {0: ONE}, (0, 1): {1: ONE}}, unit={0: ONE})
    V = VertexSuperalgebroid(A, [], {}, {}, {}, {}, {})
    with pytest.raises(PrerequisiteFailed):
        check_algebroid_axioms(V)
    assert not check_algebroid_axioms(V, raise_on_prerequisite=False).passed

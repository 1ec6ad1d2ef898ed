from __future__ import annotations

import pytest

from vsalgebroid.algebroid import to_truncated_conformal
from vsalgebroid.examples import complex_numbers
from vsalgebroid.exact import ONE
from vsalgebroid.loop import (
    LoopElement, LoopQuotient, WindowExceeded, bracket_modes, check_degree_additivity, check_loop_jacobi, dhat,
    loop_bracket, reduce_mod_dhat,
)
from vsalgebroid.tconf import TruncatedConformal

from conftest import algebroid


def conformal(name):
    return to_truncated_conformal(algebroid(name))


def test_A_modes_commute():
    C = conformal("euler_x3")
    for a in range(C.dA):
        for a2 in range(C.dA):
            assert bracket_modes(C, (a, 2), (a2, -1)) == {}


def test_power_zero_has_no_first_product_term():
    C = conformal("euler_x2")
    b, b2 = C.dA, C.dA + 1
    got = loop_bracket(C, LoopElement.mode(C, b, 0), LoopElement.mode(C, b2, 3))
    assert got.terms == {(k, 3): c for k, c in C.prod0.get((b, b2), {}).items()}


def test_dhat_images_reduce_to_zero():
    C = conformal("ef_x3")
    Q_ = LoopQuotient(C)
    for a in range(C.dA):
        for n in range(-4, 5):
            assert reduce_mod_dhat(dhat(C, a, n), Q_).terms == {}


def test_B_modes_away_from_power_zero_are_canonical():
    C = conformal("ef_x3")
    Q_ = LoopQuotient(C)
    for b in C.b_indices():
        for n in range(-4, 5):
            if n:
                assert Q_.is_canonical((b, n))
    # (da)(0) = dhat(a(0)) vanishes
    dx = C.partial[1]
    assert Q_.reduce({(k, 0): c for k, c in dx.items()}) == {}


def test_A_modes_rewrite_through_differentials():
    C = conformal("euler_x2")
    Q_ = LoopQuotient(C)
    # x(1) = -1/2 (dx)(2)
    r = Q_.reduce_mode((1, 1))
    assert all(k[0] >= C.dA and k[1] == 2 for k in r)
    assert Q_.is_canonical((1, -1))


def test_window_is_enforced():
    Q_ = LoopQuotient(conformal("free_boson"), window=(-1, 1))
    with pytest.raises(WindowExceeded):
        Q_.reduce_mode((1, 50))


def test_grading():
    assert check_degree_additivity(LoopQuotient(conformal("ef_x3"))).passed


def test_zero_products_jacobi():
    C = TruncatedConformal(complex_numbers(), [0, 1], {}, {}, {})
    assert check_loop_jacobi(LoopQuotient(C)).passed


def test_jacobi_on_euler_x3_is_exhaustive():
    rep = check_loop_jacobi(LoopQuotient(conformal("euler_x3")))
    assert rep.passed and rep.info["exhaustive"]


def test_broken_associativity_breaks_jacobi():
    # u_0 v = v for a single even b makes [b(m), b(n)] = b(m+n), which is not
    # skew; the failure shows up as a witness triple or pair
    C = TruncatedConformal(complex_numbers(), [0, 0], {}, {(1, 2): {2: ONE}}, {})
    rep = check_loop_jacobi(LoopQuotient(C, window=(-2, 2)))
    assert not rep.passed
    assert rep.first_failure().witness is not None


def test_sampled_mode_is_seeded():
    Q_ = LoopQuotient(conformal("euler_x2"), window=(-2, 2))
    r1 = check_loop_jacobi(Q_, seed=3, exhaustive_limit=0, samples=200)
    r2 = check_loop_jacobi(Q_, seed=3, exhaustive_limit=0, samples=200)
    assert r1.passed and r1.to_dict() == r2.to_dict() and not r1.info["exhaustive"]

from __future__ import annotations

from vsalgebroid.algebra import (
    DerivationMatrix, StructureAlgebra, check_commutative_algebra, check_derivation, check_lie_superalgebra,
    check_super_commutative,
)
from vsalgebroid.exact import ONE, Q


def test_truncated_polynomial_is_commutative():
    A = StructureAlgebra.truncated_polynomial(3)
    assert check_super_commutative(A).passed
    assert check_commutative_algebra(A).passed


def test_noncommutative_table_fails_at_first_pair():
    A = StructureAlgebra([0, 0], {(0, 1): {1: ONE}})
    rep = check_super_commutative(A)
    assert not rep.passed
    assert rep.first_failure().witness.indices == {"i": 0, "j": 1}


def test_grassmann_is_super_commutative():
    A = StructureAlgebra.grassmann()
    assert check_commutative_algebra(A).passed


def test_lie_examples():
    assert check_lie_superalgebra(StructureAlgebra([0], {})).passed
    # [y, y] for odd y must land in the even part; here it lands on y itself
    odd = StructureAlgebra([1], {(0, 0): {0: ONE}})
    rep = check_lie_superalgebra(odd)
    assert not rep.passed and not rep["parity"].passed
    g = StructureAlgebra([0, 0], {(0, 1): {1: ONE}, (1, 0): {1: -ONE}})
    assert check_lie_superalgebra(g).passed


def test_jacobi_failure_is_detected():
    # [x,y] = x, [x,z] = y: [x,[y,z]] = 0 but [[x,y],z] + [y,[x,z]] = y
    br = {(0, 1): {0: ONE}, (1, 0): {0: -ONE}, (0, 2): {1: ONE}, (2, 0): {1: -ONE}}
    rep = check_lie_superalgebra(StructureAlgebra([0, 0, 0], br))
    assert not rep["super Jacobi identity"].passed


def test_derivations_of_truncated_polynomials():
    A = StructureAlgebra.truncated_polynomial(3)
    euler = DerivationMatrix({1: {1: ONE}, 2: {2: Q(2)}})
    assert check_derivation(A, euler).passed
    ddx = DerivationMatrix({1: {0: ONE}, 2: {1: Q(2)}})
    assert not check_derivation(A, ddx).passed

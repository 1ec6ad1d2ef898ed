from __future__ import annotations

from fractions import Fraction

import pytest

from vsalgebroid.exact import (
    ONE, BadRational, Echelon, IndexedSpace, MixedParity, Q, SpaceMismatch, SuperVector, epsilon,
    format_rational, lc_add, lc_scale, lc_sub, quotient_dimension, rational, span,
)


def test_rational_accepts_exact_forms():
    assert rational("3/6") == Q(1, 2)
    assert rational(" -4 ") == Q(-4)
    assert rational(Fraction(2, 3)) == Q(2, 3)
    assert rational(7) == Q(7)


@pytest.mark.parametrize("bad", ["1/0", "1.5", "x", "", "1/-2"])
def test_rational_rejects_malformed_strings(bad):
    with pytest.raises(BadRational):
        rational(bad)


def test_rational_rejects_floats_and_bools():
    with pytest.raises(BadRational):
        rational(0.5)
    with pytest.raises(BadRational):
        rational(True)


def test_format_rational():
    assert format_rational(Q(4, 2)) == "2"
    assert format_rational(Q(-1, 3)) == "-1/3"


def test_epsilon_signs():
    S = IndexedSpace("S", [0, 1])
    ev, od = S.basis_vector(0), S.basis_vector(1)
    assert epsilon(ev, ev) == 1
    assert epsilon(od, od) == -1
    assert epsilon(ev, od) == 1
    assert epsilon(0, 1) == 1 and epsilon(1, 1) == -1


def test_epsilon_rejects_inhomogeneous():
    S = IndexedSpace("S", [0, 1])
    mixed = S.basis_vector(0) + S.basis_vector(1)
    with pytest.raises(MixedParity):
        epsilon(mixed, S.basis_vector(0))


def test_linear_combinations_drop_zeros():
    x = {0: ONE, 1: Q(2)}
    lc_add(x, {1: Q(-2)})
    assert x == {0: ONE}
    assert lc_scale(x, 0) == {}
    assert lc_sub(x, x) == {}


def test_span_examples():
    S = IndexedSpace("S", [0, 0])
    v = lambda *c: SuperVector.from_list(S, c)  # noqa: E731
    assert span([v(1, 0), v(0, 1), v(1, 1)]).dim == 2
    assert span([], space=S).dim == 0
    sub = span([v(2, 4), v(1, 2)])
    assert sub.dim == 1 and sub.pivot_columns == [0]


def test_span_space_mismatch():
    S, T = IndexedSpace("S", [0]), IndexedSpace("T", [0])
    with pytest.raises(SpaceMismatch):
        span([S.basis_vector(0), T.basis_vector(0)])


def test_quotient_dimension_examples():
    S5 = IndexedSpace("S5", [0] * 5)
    assert quotient_dimension(5, span([S5.basis_vector(0), S5.basis_vector(1)])) == 3
    S3 = IndexedSpace("S3", [0] * 3)
    assert quotient_dimension(3, span([S3.basis_vector(i) for i in range(3)])) == 0
    S4 = IndexedSpace("S4", [0] * 4)
    sub = span([SuperVector.from_list(S4, [1, 1, 0, 0]), SuperVector.from_list(S4, [0, 0, 1, -1])])
    assert quotient_dimension(4, sub) == 2


def test_echelon_reduce_and_membership():
    ech = Echelon()
    assert ech.add({0: ONE, 1: ONE})
    assert not ech.add({0: Q(2), 1: Q(2)})
    assert ech.contains({0: Q(-3), 1: Q(-3)})
    assert ech.reduce({0: ONE}) == {1: -ONE}
    assert ech.rank == 1

"""Randomized property tests (hypothesis)."""
from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from vsalgebroid.algebra import StructureAlgebra
from vsalgebroid.algebroid import check_algebroid_axioms, to_truncated_conformal
from vsalgebroid.examples import lie
from vsalgebroid.exact import Echelon, Q, epsilon, format_rational, lc_add, lc_scale, lc_sub, rational
from vsalgebroid.kahler import SectionFourInput, build_kahler, build_section4_algebroid, build_section4_L1
from vsalgebroid.loop import LoopQuotient
from vsalgebroid.verma import VermaModule, vacuum
from vsalgebroid.virplus import check_semiconformal_conditions, vir_act_loop

from conftest import NAMES, algebroid, b_module
from oracles import dense_rank, kahler_dim_truncated_polynomial

SLOW = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=4).map(lambda f: Q(f.numerator, f.denominator))


@given(st.fractions(max_denominator=10 ** 6))
def test_rational_round_trip(f):
    q = rational(f"{f.numerator}/{f.denominator}")
    assert Fraction(int(q.numerator), int(q.denominator)) == f
    assert rational(format_rational(q)) == q


@given(st.lists(st.dictionaries(st.integers(0, 5), small_q.filter(bool), max_size=4), max_size=7))
def test_echelon_rank_matches_sympy(rows):
    ech = Echelon()
    ech.extend(rows)
    assert ech.rank == dense_rank(rows, list(range(6)))
    for r in rows:
        assert ech.contains(r)


@pytest.mark.parametrize("n", range(1, 6))
def test_kahler_dimension_of_truncated_polynomials(n):
    assert build_kahler(StructureAlgebra.truncated_polynomial(n)).dim == kahler_dim_truncated_polynomial(n)


@st.composite
def loop_combination(draw, Q_, parity):
    modes = [k for k in Q_.basis() if Q_.parity(k) == parity]
    if not modes:
        return {}
    keys = draw(st.lists(st.sampled_from(modes), min_size=1, max_size=3, unique=True))
    return Q_.reduce({k: draw(small_q) for k in keys})


_QUOTIENTS = {n: LoopQuotient(to_truncated_conformal(algebroid(n)), (-2, 2)) for n in ("ef_x3", "free_fermion")}


@SLOW
@given(st.data())
def test_loop_bracket_on_random_combinations(data):
    name = data.draw(st.sampled_from(sorted(_QUOTIENTS)))
    Q_ = _QUOTIENTS[name]
    odd = 1 in Q_.C.parities
    p = [data.draw(st.sampled_from([0, 1] if odd else [0])) for _ in range(3)]
    x, y, z = (data.draw(loop_combination(Q_, pi)) for pi in p)
    s = -1 if p[0] and p[1] else 1
    assert Q_.bracket_vectors(x, y) == lc_scale(Q_.bracket_vectors(y, x), -s)
    lhs = Q_.bracket_vectors(x, Q_.bracket_vectors(y, z))
    rhs = Q_.bracket_vectors(Q_.bracket_vectors(x, y), z)
    lc_add(rhs, Q_.bracket_vectors(y, Q_.bracket_vectors(x, z)), s)
    assert lhs == rhs


@SLOW
@given(st.sampled_from(NAMES), st.integers(-1, 4), st.integers(-1, 4), st.data())
def test_virasoro_relations_on_random_loop_elements(name, m, n, data):
    C = to_truncated_conformal(algebroid(name))
    d = b_module(name)
    keys = data.draw(st.lists(st.tuples(st.integers(0, C.dim - 1), st.integers(-6, 6)), min_size=1, max_size=4))
    x = {k: data.draw(small_q) for k in keys}
    x = {k: c for k, c in x.items() if c}
    lhs = lc_sub(vir_act_loop(m, vir_act_loop(n, x, d, C), d, C).terms,
                 vir_act_loop(n, vir_act_loop(m, x, d, C), d, C).terms)
    if m + n >= -1:
        assert lhs == lc_scale(vir_act_loop(m + n, x, d, C).terms, m - n)


@st.composite
def euler_type_input(draw):
    """C[x]/(x^n) with g = C x^k d/dx and a random d(g) in A."""
    n = draw(st.integers(2, 4))
    k = draw(st.integers(1, n - 1))
    A = StructureAlgebra.truncated_polynomial(n)
    pi = {0: {j: {j + k - 1: Q(j)} for j in range(1, n) if j + k - 1 < n}}
    dg = {j: c for j in range(n) if (c := draw(small_q))}
    return SectionFourInput(A, lie(1, {}, labels=["g"]), pi, {0: dg} if dg else {}, name=f"x{n}_k{k}")


@SLOW
@given(euler_type_input())
def test_random_section4_inputs_are_semiconformal(inp):
    V = build_section4_algebroid(inp)
    assert check_algebroid_axioms(V).passed
    rep = check_semiconformal_conditions(V, build_section4_L1(inp, V))
    assert rep.passed, rep.render()


_MODULES = {n: VermaModule(algebroid(n), 4) for n in ("euler_x2", "free_fermion", "ef_x3")}


@SLOW
@given(st.sampled_from(sorted(_MODULES)), st.data())
def test_normal_ordering_matches_action_on_vacuum(name, data):
    M = _MODULES[name]
    modes = M.negative_modes(4)
    word = data.draw(st.lists(st.sampled_from(modes), min_size=1, max_size=4)
                     .filter(lambda w: sum(M.degree(x) for x in w) <= 4))
    expected = M.apply_word(word, vacuum())
    assert M.normal_order(word, "left") == expected
    assert M.normal_order(word, "right") == expected


@given(st.integers(0, 1), st.integers(0, 1))
def test_sign_is_symmetric(p, q):
    assert epsilon(p, q) == epsilon(q, p) == (-1 if p and q else 1)

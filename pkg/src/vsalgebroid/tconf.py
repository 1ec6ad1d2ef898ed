"""1-truncated conformal superalgebras C = C0 + C1 and their axiom checks.

Basis convention: C is indexed ``0..dA-1`` for C0 (the space A) followed by
``dA..dA+dB-1`` for C1 (the space B).  ``prod0`` is the 0-th product on all
of C, ``prod1`` the 1st product, which may only be nonzero on C1 x C1.
"""
from __future__ import annotations

from itertools import product as cartesian
from typing import Callable, Iterator, Mapping, Sequence

from .algebra import StructureAlgebra, bilinear, clean_map, clean_table, linear, parity_tally
from .exact import ONE, lc_add, lc_scale, sign
from .report import AxiomTally, CheckReport


class InputError(ValueError):
    pass


class TruncatedConformal:
    """``A`` supplies C0 (its product is carried along for the algebroid
    correspondence but never used by the conformal axioms)."""

    def __init__(self, A: StructureAlgebra, b_parities: Sequence[int], partial: Mapping,
                 prod0: Mapping, prod1: Mapping, b_labels: Sequence[str] | None = None):
        self.A = A
        self.dA = A.dim
        self.b_parities = tuple(int(p) for p in b_parities)
        self.dB = len(self.b_parities)
        self.b_labels = tuple(b_labels) if b_labels else tuple(f"b{i}" for i in range(self.dB))
        self.parities = tuple(A.parities) + self.b_parities
        self.labels = tuple(A.labels) + self.b_labels
        # partial: A-index -> {combined B index: Q}
        self.partial = clean_map(partial)
        self.prod0 = clean_table(prod0)
        self.prod1 = clean_table(prod1)
        self._validate()

    @property
    def dim(self) -> int:
        return self.dA + self.dB

    def is_a(self, i: int) -> bool:
        return i < self.dA

    def a_indices(self) -> range:
        return range(self.dA)

    def b_indices(self) -> range:
        return range(self.dA, self.dA + self.dB)

    def _validate(self):
        dA, n = self.dA, self.dim
        for a, img in self.partial.items():
            if not 0 <= a < dA:
                raise InputError(f"partial defined on non-A index {a}")
            for k in img:
                if not dA <= k < n:
                    raise InputError(f"partial({a}) has a component outside B: {k}")
                if self.parities[k] != self.parities[a]:
                    raise InputError(f"partial is not even: partial({a}) hits {k} of other parity")
        for (i, j), v in self.prod0.items():
            if not (0 <= i < n and 0 <= j < n) or any(not 0 <= k < n for k in v):
                raise InputError(f"prod0 index out of range at {(i, j)}")
            if i < dA and j < dA:
                raise InputError(f"a_0 a' must vanish, got nonzero at {(i, j)}")
            target_is_a = i < dA or j < dA
            for k in v:
                if (k < dA) != target_is_a:
                    raise InputError(f"prod0{(i, j)} lands in the wrong weight space")
        for (i, j), v in self.prod1.items():
            if i < dA or j < dA:
                raise InputError(f"the 1-product is only defined on C1 x C1, got nonzero at {(i, j)}")
            if any(not 0 <= k < dA for k in v):
                raise InputError(f"prod1{(i, j)} must land in C0")

    # products on dict vectors --------------------------------------------------

    def p0(self, x: Mapping, y: Mapping) -> dict:
        return bilinear(self.prod0, x, y)

    def p1(self, x: Mapping, y: Mapping) -> dict:
        return bilinear(self.prod1, x, y)

    def prod(self, i: int, x: Mapping, y: Mapping) -> dict:
        return self.p0(x, y) if i == 0 else self.p1(x, y)

    def d(self, x: Mapping) -> dict:
        """The map partial, extended by zero on C1."""
        return linear(self.partial, {k: c for k, c in x.items() if k < self.dA})

    def eps(self, i: int, j: int) -> int:
        return sign(self.parities[i], self.parities[j])

    def parity_report(self) -> CheckReport:
        rep = CheckReport("parity bookkeeping")
        p = self.parities
        rep.add(parity_tally("0-product parity", p, p, p, self.prod0))
        rep.add(parity_tally("1-product parity", p, p, p, self.prod1))
        return rep

    def __repr__(self):
        return f"TruncatedConformal(dim C0={self.dA}, dim C1={self.dB})"


def e(i: int) -> dict:
    return {i: ONE}


# ---------------------------------------------------------------------------
# axiom instances: each label maps to (index iterator, evaluator -> (lhs, rhs))


def _d_a_0(C: TruncatedConformal, a: int, x: int):
    return C.p0(C.d(e(a)), e(x)), {}


def _d_a_1(C: TruncatedConformal, a: int, x: int):
    return C.p1(C.d(e(a)), e(x)), lc_scale(C.p0(e(a), e(x)), -ONE)


def _d_u0a(C: TruncatedConformal, u: int, a: int):
    return C.d(C.p0(e(u), e(a))), C.p0(e(u), C.d(e(a)))


def _comm_ua(C: TruncatedConformal, u: int, a: int):
    return C.p0(e(u), e(a)), lc_scale(C.p0(e(a), e(u)), -C.eps(u, a))


def _comm_u0v(C: TruncatedConformal, u: int, v: int):
    rhs = lc_scale(C.p0(e(v), e(u)), -ONE)
    lc_add(rhs, C.d(C.p1(e(v), e(u))))
    return C.p0(e(u), e(v)), lc_scale(rhs, C.eps(u, v))


def _comm_u1v(C: TruncatedConformal, u: int, v: int):
    return C.p1(e(u), e(v)), lc_scale(C.p1(e(v), e(u)), C.eps(u, v))


def _assoc(i: int):
    def f(C: TruncatedConformal, alpha: int, beta: int, gamma: int):
        lhs = C.p0(e(alpha), C.prod(i, e(beta), e(gamma)))
        rhs = lc_scale(C.prod(i, e(beta), C.p0(e(alpha), e(gamma))), C.eps(alpha, beta))
        lc_add(rhs, C.prod(i, C.p0(e(alpha), e(beta)), e(gamma)))
        return lhs, rhs
    return f


def _grid(*ranges: Callable[[TruncatedConformal], range], names: Sequence[str]):
    def it(C: TruncatedConformal) -> Iterator[dict]:
        for combo in cartesian(*(r(C) for r in ranges)):
            yield dict(zip(names, combo))
    return it


_A = lambda C: C.a_indices()  # noqa: E731
_B = lambda C: C.b_indices()  # noqa: E731
_ALL = lambda C: range(C.dim)  # noqa: E731

DERIVATION_AXIOMS = {
    "derivation: (da)_0 = 0": (_grid(_A, _ALL, names=("a", "x")), _d_a_0),
    "derivation: (da)_1 = -a_0": (_grid(_A, _ALL, names=("a", "x")), _d_a_1),
    "derivation: d(u_0 a) = u_0 da": (_grid(_B, _A, names=("u", "a")), _d_u0a),
}

SUPERCOMMUTATIVITY_AXIOMS = {
    "super commutativity: u_0 a = -eps a_0 u": (_grid(_B, _A, names=("u", "a")), _comm_ua),
    "super commutativity: u_0 v = eps(-v_0 u + d(v_1 u))": (_grid(_B, _B, names=("u", "v")), _comm_u0v),
    "super commutativity: u_1 v = eps v_1 u": (_grid(_B, _B, names=("u", "v")), _comm_u1v),
}

SUPERASSOCIATIVITY_AXIOMS = {
    f"super associativity (i={i})": (_grid(_ALL, _ALL, _ALL, names=("alpha", "beta", "gamma")), _assoc(i))
    for i in (0, 1)
}

ALL_AXIOMS = {**DERIVATION_AXIOMS, **SUPERCOMMUTATIVITY_AXIOMS, **SUPERASSOCIATIVITY_AXIOMS}


def _run(C: TruncatedConformal, name: str, axioms: Mapping) -> CheckReport:
    rep = CheckReport(name)
    for label, (it, fn) in axioms.items():
        t = AxiomTally(label)
        for idx in it(C):
            lhs, rhs = fn(C, **idx)
            t.check(lhs, rhs, **idx)
        rep.add(t)
    return rep


def check_derivation_axiom(C: TruncatedConformal) -> CheckReport:
    return _run(C, "1-truncated conformal: derivation", DERIVATION_AXIOMS)


def check_supercommutativity_axiom(C: TruncatedConformal) -> CheckReport:
    return _run(C, "1-truncated conformal: super commutativity", SUPERCOMMUTATIVITY_AXIOMS)


def check_superassociativity_axiom(C: TruncatedConformal) -> CheckReport:
    return _run(C, "1-truncated conformal: super associativity", SUPERASSOCIATIVITY_AXIOMS)


def check_tconf(C: TruncatedConformal) -> CheckReport:
    rep = CheckReport("1-truncated conformal superalgebra")
    rep.merge(C.parity_report())
    rep.merge(check_derivation_axiom(C))
    rep.merge(check_supercommutativity_axiom(C))
    rep.merge(check_superassociativity_axiom(C))
    return rep


def replay(C: TruncatedConformal, label: str, indices: Mapping) -> tuple[dict, dict]:
    """Re-evaluate both sides of axiom ``label`` at a witness."""
    _, fn = ALL_AXIOMS[label]
    return fn(C, **indices)


def direct_sum(C: TruncatedConformal, D: TruncatedConformal) -> TruncatedConformal:
    """C + D with no cross products; C0 = A_C + A_D, C1 = B_C + B_D."""
    dA1, dA2, dB1 = C.dA, D.dA, C.dB
    dA = dA1 + dA2

    def remap_c(k):  # index in C -> index in sum
        return k if k < dA1 else k + dA2

    def remap_d(k):
        return k + dA1 if k < dA2 else k + dA1 + dB1

    prodA = {}
    for (i, j), v in C.A.product.items():
        prodA[(i, j)] = dict(v)
    for (i, j), v in D.A.product.items():
        prodA[(i + dA1, j + dA1)] = {k + dA1: c for k, c in v.items()}
    unit = None
    if C.A.unit is not None and D.A.unit is not None:
        unit = dict(C.A.unit)
        unit.update({k + dA1: c for k, c in D.A.unit.items()})
    A = StructureAlgebra(tuple(C.A.parities) + tuple(D.A.parities), prodA, unit=unit, name="A",
                         labels=[f"{l}" for l in C.A.labels] + [f"{l}'" for l in D.A.labels])
    partial, prod0, prod1 = {}, {}, {}
    for src, rm in ((C, remap_c), (D, remap_d)):
        for a, img in src.partial.items():
            partial[rm(a)] = {rm(k): c for k, c in img.items()}
        for (i, j), v in src.prod0.items():
            prod0[(rm(i), rm(j))] = {rm(k): c for k, c in v.items()}
        for (i, j), v in src.prod1.items():
            prod1[(rm(i), rm(j))] = {rm(k): c for k, c in v.items()}
    return TruncatedConformal(A, C.b_parities + D.b_parities, partial, prod0, prod1,
                              b_labels=list(C.b_labels) + [f"{l}'" for l in D.b_labels])

"""Finite-dimensional (super)algebras given by structure constants, plus the
law checks (associativity, super-commutativity, Lie / Leibniz, derivations).

Tables are sparse: a bilinear table maps ``(i, j)`` to the product ``e_i e_j``
as a dict ``{k: Q}``; a linear map sends a basis index to its image.
"""
from __future__ import annotations

from itertools import product as cartesian
from typing import Iterable, Mapping, Sequence

from .exact import ONE, ZERO, IndexedSpace, SuperVector, lc_add, lc_clean, lc_scale, rational, sign
from .report import AxiomTally, CheckReport

Table = dict  # (i, j) -> {k: Q}
LinearMap = dict  # i -> {k: Q}


def clean_table(table: Mapping) -> Table:
    out = {}
    for key, vec in table.items():
        v = lc_clean(vec)
        if v:
            out[tuple(key)] = v
    return out


def clean_map(m: Mapping) -> LinearMap:
    out = {}
    for key, vec in m.items():
        v = lc_clean(vec)
        if v:
            out[key] = v
    return out


def bilinear(table: Mapping, x: Mapping, y: Mapping) -> dict:
    out: dict = {}
    if not x or not y:
        return out
    for i, xi in x.items():
        for j, yj in y.items():
            prod = table.get((i, j))
            if prod:
                lc_add(out, prod, xi * yj)
    return out


def linear(m: Mapping, x: Mapping) -> dict:
    out: dict = {}
    for i, xi in x.items():
        img = m.get(i)
        if img:
            lc_add(out, img, xi)
    return out


def compose(f: Mapping, g: Mapping, dim: int) -> LinearMap:
    """Matrix of ``f o g`` on basis indices ``0..dim-1``."""
    out = {}
    for i in range(dim):
        v = linear(f, g.get(i, {}))
        if v:
            out[i] = v
    return out


def basis(i) -> dict:
    return {i: ONE}


def vec_parity(parities: Sequence[int], x: Mapping) -> int | None:
    ps = {parities[i] for i in x}
    if not ps:
        return None
    if len(ps) > 1:
        return -1
    return ps.pop()


class StructureAlgebra:
    """A superalgebra on ``dim`` basis vectors with product table ``c[i][j]``.

    No law is assumed; use the ``check_*`` functions.
    """

    def __init__(self, parities: Iterable[int], product: Mapping, unit: Mapping | None = None,
                 name: str = "A", labels: Iterable[str] | None = None):
        self.space = IndexedSpace(name, parities, labels)
        self.product = clean_table(product)
        for (i, j), v in self.product.items():
            for k in (i, j, *v):
                if not 0 <= k < self.dim:
                    raise IndexError(f"structure constant index {k} out of range for dim {self.dim}")
        self.unit = lc_clean(unit) if unit is not None else None

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def parities(self) -> tuple[int, ...]:
        return self.space.parities

    @property
    def name(self) -> str:
        return self.space.name

    @property
    def labels(self) -> tuple[str, ...]:
        return self.space.labels

    def mul(self, x: Mapping, y: Mapping) -> dict:
        return bilinear(self.product, x, y)

    def basis_mul(self, i: int, j: int) -> dict:
        return dict(self.product.get((i, j), {}))

    def vector(self, x: Mapping) -> SuperVector:
        return SuperVector(self.space, x)

    def is_purely_even(self) -> bool:
        return not any(self.parities)

    def __repr__(self):
        return f"StructureAlgebra({self.name!r}, dim={self.dim})"

    # convenient constructors -------------------------------------------------

    @classmethod
    def truncated_polynomial(cls, n: int, name: str = "A", var: str = "x") -> "StructureAlgebra":
        """C[x]/(x^n) with basis 1, x, ..., x^(n-1)."""
        prod = {}
        for i in range(n):
            for j in range(n):
                if i + j < n:
                    prod[(i, j)] = {i + j: ONE}
        labels = ["1"] + [var if k == 1 else f"{var}^{k}" for k in range(1, n)]
        return cls([0] * n, prod, unit={0: ONE}, name=name, labels=labels)

    @classmethod
    def grassmann(cls, name: str = "A") -> "StructureAlgebra":
        """Lambda[theta] with theta odd, theta^2 = 0."""
        prod = {(0, 0): {0: ONE}, (0, 1): {1: ONE}, (1, 0): {1: ONE}}
        return cls([0, 1], prod, unit={0: ONE}, name=name, labels=["1", "theta"])


# ---------------------------------------------------------------------------
# law checks


def parity_tally(label: str, parities_in1: Sequence[int], parities_in2: Sequence[int],
                 parities_out: Sequence[int], table: Mapping) -> AxiomTally:
    """Parity additivity of a bilinear table: |e_i e_j| = |e_i| + |e_j|."""
    t = AxiomTally(label)
    for i in range(len(parities_in1)):
        for j in range(len(parities_in2)):
            v = table.get((i, j), {})
            want = (parities_in1[i] + parities_in2[j]) % 2
            bad = {k: c for k, c in v.items() if parities_out[k] != want}
            t.check(bad, {}, i=i, j=j)
    return t


def check_super_commutative(A: StructureAlgebra) -> CheckReport:
    """e_i e_j = eps(e_i, e_j) e_j e_i for all basis pairs."""
    rep = CheckReport(f"super-commutativity of {A.name}")
    t = AxiomTally("super-commutativity")
    p = A.parities
    for i, j in cartesian(range(A.dim), repeat=2):
        lhs = A.basis_mul(i, j)
        rhs = lc_scale(A.basis_mul(j, i), sign(p[i], p[j]))
        t.check(lhs, rhs, i=i, j=j)
    rep.add(t)
    return rep


def check_associative(A: StructureAlgebra) -> CheckReport:
    rep = CheckReport(f"associativity of {A.name}")
    t = AxiomTally("associativity")
    for i, j, k in cartesian(range(A.dim), repeat=3):
        lhs = A.mul(A.basis_mul(i, j), basis(k))
        rhs = A.mul(basis(i), A.basis_mul(j, k))
        t.check(lhs, rhs, i=i, j=j, k=k)
    rep.add(t)
    return rep


def check_unit(A: StructureAlgebra) -> CheckReport:
    rep = CheckReport(f"unit of {A.name}")
    t = AxiomTally("unit")
    if A.unit is None:
        t.fail({}, {}, missing="unit")
    else:
        even = AxiomTally("unit is even")
        even.check({k: c for k, c in A.unit.items() if A.parities[k]}, {})
        rep.add(even)
        for i in range(A.dim):
            t.check(A.mul(A.unit, basis(i)), basis(i), i=i, side="left")
            t.check(A.mul(basis(i), A.unit), basis(i), i=i, side="right")
    rep.add(t)
    return rep


def check_commutative_algebra(A: StructureAlgebra) -> CheckReport:
    """Unital, associative, super-commutative, parity-additive."""
    rep = CheckReport(f"super-commutative associative unital algebra {A.name}")
    rep.add(parity_tally("parity", A.parities, A.parities, A.parities, A.product))
    rep.merge(check_associative(A))
    rep.merge(check_super_commutative(A))
    rep.merge(check_unit(A))
    return rep


def check_leibniz_superalgebra(parities: Sequence[int], bracket: Mapping, name: str = "bracket") -> CheckReport:
    """Parity additivity and the graded Leibniz identity
    [u,[v,w]] = [[u,v],w] + eps(u,v)[v,[u,w]]."""
    rep = CheckReport(f"Leibniz superalgebra {name}")
    rep.add(parity_tally("parity", parities, parities, parities, bracket))
    t = AxiomTally("graded Leibniz identity")
    n = len(parities)
    for u, v, w in cartesian(range(n), repeat=3):
        lhs = bilinear(bracket, basis(u), bracket.get((v, w), {}))
        rhs = bilinear(bracket, bracket.get((u, v), {}), basis(w))
        lc_add(rhs, bilinear(bracket, basis(v), bracket.get((u, w), {})), sign(parities[u], parities[v]))
        t.check(lhs, rhs, u=u, v=v, w=w)
    rep.add(t)
    return rep


def check_lie_superalgebra(g: StructureAlgebra) -> CheckReport:
    """Skew-supersymmetry and super Jacobi on all basis pairs / triples."""
    rep = CheckReport(f"Lie superalgebra {g.name}")
    p = g.parities
    rep.add(parity_tally("parity", p, p, p, g.product))
    skew = AxiomTally("skew-supersymmetry")
    for i, j in cartesian(range(g.dim), repeat=2):
        skew.check(g.basis_mul(i, j), lc_scale(g.basis_mul(j, i), -sign(p[i], p[j])), i=i, j=j)
    rep.add(skew)
    jac = AxiomTally("super Jacobi identity")
    for i, j, k in cartesian(range(g.dim), repeat=3):
        lhs = g.mul(basis(i), g.basis_mul(j, k))
        rhs = g.mul(g.basis_mul(i, j), basis(k))
        lc_add(rhs, g.mul(basis(j), g.basis_mul(i, k)), sign(p[i], p[j]))
        jac.check(lhs, rhs, i=i, j=j, k=k)
    rep.add(jac)
    return rep


class DerivationMatrix:
    """A linear endomorphism of ``A`` with a declared parity degree."""

    def __init__(self, matrix: Mapping, degree: int = 0):
        self.matrix = clean_map(matrix)
        self.degree = int(degree)

    def __call__(self, x: Mapping) -> dict:
        return linear(self.matrix, x)


def derivation_tally(A: StructureAlgebra, D: Mapping, degree: int, label: str = "derivation rule", **tag) -> AxiomTally:
    """D(ab) = D(a)b + (-1)^{s|a|} a D(b) on all basis pairs, plus parity of D."""
    t = AxiomTally(label)
    p = A.parities
    for i in range(A.dim):
        img = D.get(i, {})
        bad = {k: c for k, c in img.items() if p[k] != (p[i] + degree) % 2}
        t.check(bad, {}, a=i, parity=True, **tag)
    for i, j in cartesian(range(A.dim), repeat=2):
        lhs = linear(D, A.basis_mul(i, j))
        rhs = A.mul(D.get(i, {}), basis(j))
        lc_add(rhs, A.mul(basis(i), D.get(j, {})), sign(degree, p[i]))
        t.check(lhs, rhs, a=i, b=j, **tag)
    return t


def check_derivation(A: StructureAlgebra, D: DerivationMatrix) -> CheckReport:
    rep = CheckReport("derivation")
    rep.add(derivation_tally(A, D.matrix, D.degree))
    return rep


def super_commutator(f: Mapping, g: Mapping, pf: int, pg: int, dim: int) -> LinearMap:
    """[f, g] = fg - eps(f,g) gf as a matrix on ``dim`` basis vectors."""
    out = compose(f, g, dim)
    other = compose(g, f, dim)
    for i, v in other.items():
        row = out.setdefault(i, {})
        lc_add(row, v, -sign(pf, pg))
        if not row:
            del out[i]
    return out


def map_equal(f: Mapping, g: Mapping) -> bool:
    keys = set(f) | set(g)
    return all(dict(f.get(k, {})) == dict(g.get(k, {})) for k in keys)


def zero_table() -> Table:
    return {}


def scalar_table(table: Mapping, c) -> Table:
    c = rational(c)
    return {k: lc_scale(v, c) for k, v in table.items()} if c else {}


def table_add(t1: Mapping, t2: Mapping, c=ONE) -> Table:
    out = {k: dict(v) for k, v in t1.items()}
    for k, v in t2.items():
        row = out.setdefault(k, {})
        lc_add(row, v, c)
        if not row:
            del out[k]
    return out


__all__ = [
    "StructureAlgebra", "DerivationMatrix", "bilinear", "linear", "compose", "basis",
    "check_super_commutative", "check_associative", "check_unit", "check_commutative_algebra",
    "check_lie_superalgebra", "check_leibniz_superalgebra", "check_derivation", "derivation_tally",
    "super_commutator", "parity_tally", "clean_table", "clean_map", "map_equal", "vec_parity",
    "ZERO", "ONE",
]

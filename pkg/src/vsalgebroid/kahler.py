"""The geometric example B = (A (x) g) + A dA built from a commutative algebra
A, a Lie superalgebra g acting on A by derivations, and a 1-cocycle d: g -> A.

Conventions: A is purely even; Gamma is indexed with the tensor block first,
``t(a, g) = a * dim g + g``, then the Kahler differentials ``dT + k``.

The tensor-tensor part of the pairing and the Omega-valued part of the
tensor-tensor bracket are not fixed by the closed formulas alone: the pairing
is forced by ``<a*u, v> = a<u,v> - pi(u)pi(v)a`` up to its values on
``1 (x) g``, and the bracket then needs an exact correction so that its
symmetric part equals ``d<u,v>``.  Both are obtained by solving the (affine)
axiom system exactly; see :func:`build_section4_algebroid`.
"""
from __future__ import annotations

from itertools import product as cartesian
from typing import Mapping

from .algebra import (
    StructureAlgebra, bilinear, check_commutative_algebra, check_lie_superalgebra, clean_map, derivation_tally,
    linear, map_equal, super_commutator,
)
from .algebroid import (
    ALGEBROID_AXIOMS, VertexSuperalgebroid, check_algebroid_axioms, e,
)
from .exact import ONE, ZERO, Echelon, lc_add, lc_scale, sign
from .report import AxiomTally, CheckFailed, CheckReport


class InvariantViolation(CheckFailed):
    pass


class UnsolvableCorrection(CheckFailed):
    pass


class SectionFourInput:
    """(A, g, pi, d).  ``pi[g]`` is the matrix of the derivation of A given by
    the basis element g; ``d[g]`` an A-vector."""

    def __init__(self, A: StructureAlgebra, g: StructureAlgebra, pi: Mapping, d: Mapping | None = None,
                 name: str = "section4"):
        self.A, self.g = A, g
        self.pi = {k: clean_map(m) for k, m in pi.items() if clean_map(m)}
        self.d = clean_map(d or {})
        self.name = name
        for k in list(self.pi) + list(self.d):
            if not 0 <= k < g.dim:
                raise InvariantViolation(f"action/derivation given for g-index {k} outside dim g = {g.dim}")

    def act(self, gi: int, a: Mapping) -> dict:
        return linear(self.pi.get(gi, {}), a)

    def structure_report(self) -> CheckReport:
        """Everything the construction needs; the cocycle d is reported
        separately by :meth:`cocycle_report`."""
        A, g = self.A, self.g
        rep = CheckReport("geometric input")
        rep.merge(check_commutative_algebra(A), prefix="A")
        even = AxiomTally("A is purely even")
        even.check({i: ONE for i, p in enumerate(A.parities) if p}, {})
        rep.add(even)
        rep.merge(check_lie_superalgebra(g), prefix="g")
        odd = AxiomTally("odd part of g acts as zero")
        for gi in range(g.dim):
            if g.parities[gi]:
                for x, img in self.pi.get(gi, {}).items():
                    odd.fail(img, {}, g=gi, a=x)
                odd.result.checked += 1
        rep.add(odd)
        der = AxiomTally("g acts by derivations")
        for gi in range(g.dim):
            t = derivation_tally(A, self.pi.get(gi, {}), g.parities[gi], g=gi)
            der.result.checked += t.result.checked
            if not t.result.passed:
                w = t.result.witness
                der.fail(w.lhs, w.rhs, **w.indices)
        rep.add(der)
        hom = AxiomTally("action is a Lie homomorphism")
        p = g.parities
        for gi, gj in cartesian(range(g.dim), repeat=2):
            lhs: dict = {}
            for k, c in g.basis_mul(gi, gj).items():
                for x, img in self.pi.get(k, {}).items():
                    row = lhs.setdefault(x, {})
                    lc_add(row, img, c)
                    if not row:
                        del lhs[x]
            rhs = super_commutator(self.pi.get(gi, {}), self.pi.get(gj, {}), p[gi], p[gj], A.dim)
            hom.result.checked += 1
            if not map_equal(lhs, rhs):
                x = next(i for i in range(A.dim) if lhs.get(i, {}) != rhs.get(i, {}))
                hom.fail(lhs.get(x, {}), rhs.get(x, {}), g=gi, h=gj, a=x)
        rep.add(hom)
        return rep

    def cocycle_report(self) -> CheckReport:
        """d even and d([x,y]) = x.d(y) - eps(x,y) y.d(x)."""
        rep = CheckReport("derivation d: g -> A")
        g = self.g
        par = AxiomTally("d is even")
        for gi in range(g.dim):
            par.check({k: c for k, c in self.d.get(gi, {}).items() if self.A.parities[k] != g.parities[gi]}, {},
                      g=gi)
        rep.add(par)
        t = AxiomTally("d([x,y]) = x.d(y) - eps y.d(x)")
        for x, y in cartesian(range(g.dim), repeat=2):
            lhs = linear(self.d, g.basis_mul(x, y))
            rhs = self.act(x, self.d.get(y, {}))
            lc_add(rhs, self.act(y, self.d.get(x, {})), -sign(g.parities[x], g.parities[y]))
            t.check(lhs, rhs, x=x, y=y)
        rep.add(t)
        return rep

    def validate(self):
        rep = self.structure_report()
        if not rep.passed:
            raise InvariantViolation(f"invalid geometric input: {rep.first_failure().label}", rep)
        return rep


# ---------------------------------------------------------------------------
# Kahler differentials


def _kahler_order(key):
    i, j = key
    return (-j, -i)


class KahlerModule:
    """Omega = A dA as the free module on ``e_i d(e_j)`` modulo
    ``c d(ab) - ca d(b) - cb d(a)``.  Quotient representatives are the
    non-pivot pairs; pivots prefer a large differentiated index."""

    def __init__(self, A: StructureAlgebra):
        self.A = A
        n = A.dim
        ech = Echelon(_kahler_order)
        for c, a, b in cartesian(range(n), repeat=3):
            rel: dict = {}
            # c d(ab) - (ca) d(b) - (cb) d(a)
            for m, coef in A.basis_mul(a, b).items():
                lc_add(rel, {(c, m): coef})
            for k, coef in A.basis_mul(c, a).items():
                lc_add(rel, {(k, b): coef}, -ONE)
            for k, coef in A.basis_mul(c, b).items():
                lc_add(rel, {(k, a): coef}, -ONE)
            ech.add(rel)
        # products with arbitrary c make the relation space an A-submodule;
        # the unit alone would miss e.g. x d(x^2) = 2 x^2 dx in C[x]/(x^3)
        self.relations = ech
        self.basis = sorted((p for p in cartesian(range(n), repeat=2) if p not in ech.rows),
                            key=lambda p: (p[1], p[0]))
        self.index = {p: k for k, p in enumerate(self.basis)}
        self.labels = tuple(self._label(p) for p in self.basis)

    def _label(self, p) -> str:
        i, j = p
        la, lb = self.A.labels[i], self.A.labels[j]
        return f"d({lb})" if la == "1" else f"{la} d({lb})"

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def ambient_dim(self) -> int:
        return self.A.dim ** 2

    def reduce(self, v: Mapping) -> dict:
        """Ambient vector ``{(i, j): Q}`` -> Omega coordinates."""
        r = self.relations.reduce(v)
        return {self.index[p]: c for p, c in r.items()}

    def symbol(self, a: Mapping, b: Mapping) -> dict:
        """Omega coordinates of a d(b)."""
        amb: dict = {}
        for i, ci in a.items():
            for j, cj in b.items():
                lc_add(amb, {(i, j): ci * cj})
        return self.reduce(amb)

    def d(self, b: Mapping) -> dict:
        if self.A.unit is None:
            raise InvariantViolation("A has no unit")
        return self.symbol(self.A.unit, b)

    def act(self, a: Mapping, w: Mapping) -> dict:
        """a * (sum of representatives)"""
        amb: dict = {}
        for k, c in w.items():
            i, j = self.basis[k]
            for m, cm in self.A.mul(a, e(i)).items():
                lc_add(amb, {(m, j): c * cm})
        return self.reduce(amb)

    def pair(self, tau: Mapping, w: Mapping) -> dict:
        """<tau, a d b> = a tau(b) for a derivation matrix ``tau``."""
        out: dict = {}
        for k, c in w.items():
            i, j = self.basis[k]
            lc_add(out, self.A.mul(e(i), linear(tau, e(j))), c)
        return out

    def relation_rows(self) -> list[dict]:
        return self.relations.sorted_rows()


def build_kahler(A: StructureAlgebra) -> KahlerModule:
    return KahlerModule(A)


# ---------------------------------------------------------------------------
# the algebroid


class SectionFourAlgebroid(VertexSuperalgebroid):
    """A :class:`VertexSuperalgebroid` remembering how it was built."""

    input: SectionFourInput
    kahler: KahlerModule
    correction_info: dict

    def t(self, a: int, gi: int) -> int:
        return a * self.input.g.dim + gi

    def w(self, k: int) -> int:
        return self.dT + k

    @property
    def dT(self) -> int:
        return self.A.dim * self.input.g.dim

    def tensor_part(self, v: Mapping) -> dict:
        return {k: c for k, c in v.items() if k < self.dT}


def _raw_tables(inp: SectionFourInput, K: KahlerModule):
    A, g = inp.A, inp.g
    dA, dg = A.dim, g.dim
    dT = dA * dg
    t = lambda a, gi: a * dg + gi  # noqa: E731
    w = lambda k: dT + k  # noqa: E731

    def tens(avec: Mapping, gi: int) -> dict:
        return {t(a, gi): c for a, c in avec.items()}

    def om(wvec: Mapping) -> dict:
        return {w(k): c for k, c in wvec.items()}

    parities = [g.parities[gi] for a in range(dA) for gi in range(dg)] + [0] * K.dim
    labels = [f"{A.labels[a]}⊗{g.labels[gi]}" for a in range(dA) for gi in range(dg)] + list(K.labels)

    star, bracket, pairing, pi = {}, {}, {}, {}
    for c in range(dA):
        for a, gi in cartesian(range(dA), range(dg)):
            v = tens(A.basis_mul(c, a), gi)
            lc_add(v, om(K.symbol(inp.act(gi, e(c)), e(a))))
            lc_add(v, om(K.symbol(inp.act(gi, e(a)), e(c))))
            star[(c, t(a, gi))] = v
        for k in range(K.dim):
            star[(c, w(k))] = om(K.act(e(c), e(k)))

    for a, gi in cartesian(range(dA), range(dg)):
        # pi(a (x) g) = a pi(g)
        pi[t(a, gi)] = {x: A.mul(e(a), img) for x, img in inp.pi.get(gi, {}).items()}

    for (a, gi), (a2, gj) in cartesian(cartesian(range(dA), range(dg)), repeat=2):
        v: dict = {}
        aa2 = A.basis_mul(a, a2)
        for k, c in g.basis_mul(gi, gj).items():
            lc_add(v, tens(aa2, k), c)
        lc_add(v, tens(A.mul(e(a), inp.act(gi, e(a2))), gj))
        lc_add(v, tens(A.mul(e(a2), inp.act(gj, e(a))), gi), -sign(g.parities[gi], g.parities[gj]))
        bracket[(t(a, gi), t(a2, gj))] = v

    for a2, gj in cartesian(range(dA), range(dg)):
        for k in range(K.dim):
            i, b = K.basis[k]  # the representative i d(b)
            # [a2 (x) g', i db] = a2 (g' i) db + i d(a2 (g' b))
            v = om(K.symbol(A.mul(e(a2), inp.act(gj, e(i))), e(b)))
            lc_add(v, om(K.symbol(e(i), A.mul(e(a2), inp.act(gj, e(b))))))
            bracket[(t(a2, gj), w(k))] = v
            # [i db, a2 (x) g'] = -a2 (g' i) db + a2 (g' b) d(i)
            v = om(K.symbol(A.mul(e(a2), inp.act(gj, e(i))), e(b)))
            v = lc_scale(v, -ONE)
            lc_add(v, om(K.symbol(A.mul(e(a2), inp.act(gj, e(b))), e(i))))
            bracket[(w(k), t(a2, gj))] = v
            # <a2 (x) g', i db> = a2 i g'(b), symmetric
            pv = A.mul(e(a2), K.pair(inp.pi.get(gj, {}), e(k)))
            pairing[(t(a2, gj), w(k))] = pv
            pairing[(w(k), t(a2, gj))] = dict(pv)

    partial = {a: om(K.d(e(a))) for a in range(dA)}
    return parities, labels, star, bracket, pairing, pi, partial


def tensor_pairing(inp: SectionFourInput) -> dict:
    """<b (x) g, c (x) g'> = -b g'(gc) - c g(g'b) - (gc)(g'b), the values
    forced by ``<a*u, v> = a<u,v> - pi(u)pi(v)a`` once <1 (x) g, 1 (x) g'> = 0.
    Odd elements of g act as zero, so no sign enters."""
    A, g = inp.A, inp.g
    dg = g.dim
    out = {}
    for (b, gi), (c, gj) in cartesian(cartesian(range(A.dim), range(g.dim)), repeat=2):
        gc = inp.act(gi, e(c))
        gb = inp.act(gj, e(b))
        v = lc_scale(A.mul(e(b), inp.act(gj, gc)), -ONE)
        lc_add(v, A.mul(e(c), inp.act(gi, gb)), -ONE)
        lc_add(v, A.mul(gc, gb), -ONE)
        if v:
            out[(b * dg + gi, c * dg + gj)] = v
    return out


def _residuals(V: VertexSuperalgebroid) -> dict:
    """Flattened lhs - rhs of every identity the correction has to satisfy:
    the nine compatibility identities, graded Leibniz, pairing symmetry."""
    out = {}
    for label, (spec, names, fn) in ALGEBROID_AXIOMS.items():
        ranges = [range(V.dA) if c == "a" else range(V.dB) for c in spec]
        for combo in cartesian(*ranges):
            lhs, rhs = fn(V, **dict(zip(names, combo)))
            diff = dict(lhs)
            lc_add(diff, rhs, -ONE)
            for k, c in diff.items():
                out[(label, combo, k)] = c
    p = V.parities
    for u, v, x in cartesian(range(V.dB), repeat=3):
        diff = V.br(e(u), V.br(e(v), e(x)))
        lc_add(diff, V.br(V.br(e(u), e(v)), e(x)), -ONE)
        lc_add(diff, V.br(e(v), V.br(e(u), e(x))), -sign(p[u], p[v]))
        for k, c in diff.items():
            out[("leibniz", (u, v, x), k)] = c
    for u, v in cartesian(range(V.dB), repeat=2):
        diff = V.pair(e(u), e(v))
        lc_add(diff, V.pair(e(v), e(u)), -sign(p[u], p[v]))
        for k, c in diff.items():
            out[("symmetry", (u, v), k)] = c
    return out


def _solve_corrections(inp: SectionFourInput, K: KahlerModule, raw, fix_pairing: bool = True):
    """Find the Omega part of the tensor-tensor bracket, and with
    ``fix_pairing=False`` the tensor-tensor pairing too.  Residuals are affine
    in these unknowns (Omega brackets with Omega vanish and the unknowns only
    enter tensor-tensor entries), so one evaluation per unknown determines
    the system exactly.  The particular solution sets free unknowns to 0."""
    parities, labels, star, bracket, pairing, pi, partial = raw
    A, g = inp.A, inp.g
    dT = A.dim * g.dim
    if fix_pairing:
        pairing = {**pairing, **tensor_pairing(inp)}
    unknowns = []
    for u, v in cartesian(range(dT), repeat=2):
        if (parities[u] + parities[v]) % 2 == 0:
            if not fix_pairing:
                for x in range(A.dim):
                    unknowns.append(("pairing", u, v, x))
            for k in range(K.dim):
                unknowns.append(("bracket", u, v, dT + k))

    def build(assign: Mapping) -> VertexSuperalgebroid:
        br = {key: dict(val) for key, val in bracket.items()}
        pr = {key: dict(val) for key, val in pairing.items()}
        for (kind, u, v, x), c in assign.items():
            tab = br if kind == "bracket" else pr
            lc_add(tab.setdefault((u, v), {}), {x: c})
        return VertexSuperalgebroid(A, parities, star, br, pi, pr, partial, gamma_labels=labels)

    base = _residuals(build({}))
    columns = []
    for unk in unknowns:
        r = _residuals(build({unk: ONE}))
        col = dict(r)
        lc_add(col, base, -ONE)
        columns.append(col)
    # rows: residual keys; solve sum_k x_k col_k = -base
    rows: dict = {}
    for k, col in enumerate(columns):
        for key, c in col.items():
            rows.setdefault(key, {})[k] = c
    rhs_key = len(unknowns)
    for key, c in base.items():
        rows.setdefault(key, {})[rhs_key] = -c
    ech = Echelon(lambda k: k)
    for key in sorted(rows, key=repr):
        ech.add(rows[key])
    if rhs_key in ech.rows:
        raise UnsolvableCorrection("no tensor-tensor pairing/bracket makes the geometric data an algebroid",
                                   check_algebroid_axioms(build({}), raise_on_prerequisite=False))
    solution = {}
    for piv, row in ech.rows.items():
        c = row.get(rhs_key, ZERO)
        if c:
            solution[unknowns[piv]] = c
    info = {"unknowns": len(unknowns), "rank": ech.rank, "freedom": len(unknowns) - ech.rank,
            "nonzero": len(solution), "tensor_pairing": "closed formula" if fix_pairing else "solved"}
    return build(solution), info


def build_section4_algebroid(inp: SectionFourInput, solve: bool = True) -> SectionFourAlgebroid:
    """Gamma = (A (x) g) + Omega with the star action, brackets, pairing,
    anchor and d of the geometric construction.  With ``solve`` (default)
    the tensor-tensor pairing and the exact part of the tensor-tensor bracket
    are solved for; without it they are left zero (the raw closed formulas)."""
    inp.validate()
    K = build_kahler(inp.A)
    raw = _raw_tables(inp, K)
    if solve:
        try:
            V, info = _solve_corrections(inp, K, raw)
        except UnsolvableCorrection:
            V, info = _solve_corrections(inp, K, raw, fix_pairing=False)
    else:
        parities, labels, star, bracket, pairing, pi, partial = raw
        V = VertexSuperalgebroid(inp.A, parities, star, bracket, pi, pairing, partial, gamma_labels=labels)
        info = {}
    out = SectionFourAlgebroid(V.A, V.parities, V.star, V.bracket, V.pi, V.pairing, V.partial,
                               gamma_labels=V.labels)
    out.input, out.kahler, out.correction_info = inp, K, info
    return out


def build_section4_L1(inp: SectionFourInput, V: SectionFourAlgebroid | None = None):
    """L(1)(a (x) g) = g(a) + a d(g), L(1) = 0 on Omega."""
    from .virplus import BModuleData

    A, g = inp.A, inp.g
    L1 = {}
    for a, gi in cartesian(range(A.dim), range(g.dim)):
        v = inp.act(gi, e(a))
        lc_add(v, A.mul(e(a), inp.d.get(gi, {})))
        if v:
            L1[a * g.dim + gi] = v
    dB = A.dim * g.dim + build_kahler(A).dim if V is None else V.dB
    return BModuleData(dB, L1)

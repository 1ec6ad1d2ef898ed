"""Vertex A-superalgebroids: tables, axiom checks, and the correspondence
with 1-truncated conformal superalgebras on C = A + B.

Indices: A is indexed by its own basis, Gamma (= B) by ``0..dB-1``.  In the
conformal picture B is shifted to ``dA..dA+dB-1``.
"""
from __future__ import annotations

from itertools import product as cartesian
from typing import Mapping, Sequence

from .algebra import (
    StructureAlgebra, bilinear, check_commutative_algebra, check_leibniz_superalgebra, clean_map,
    clean_table, compose, derivation_tally, linear, map_equal, parity_tally, super_commutator,
)
from .exact import ONE, lc_add, lc_scale, sign
from .report import AxiomTally, CheckFailed, CheckReport
from .tconf import TruncatedConformal, check_tconf


class PrerequisiteFailed(CheckFailed):
    pass


class AxiomViolation(CheckFailed):
    pass


def e(i: int) -> dict:
    return {i: ONE}


class VertexSuperalgebroid:
    """(A, Gamma, *, [,], pi, <,>, partial) given extensionally.

    ``star[(a, v)]``, ``bracket[(u, v)]`` are Gamma-vectors, ``pairing[(u, v)]``
    an A-vector, ``pi[v]`` the matrix (``{i: A-vector}``) of the derivation
    pi(v) of A, ``partial[a]`` a Gamma-vector.
    """

    def __init__(self, A: StructureAlgebra, gamma_parities: Sequence[int], star: Mapping, bracket: Mapping,
                 pi: Mapping, pairing: Mapping, partial: Mapping, gamma_labels: Sequence[str] | None = None):
        self.A = A
        self.parities = tuple(int(p) for p in gamma_parities)
        self.dB = len(self.parities)
        self.labels = tuple(gamma_labels) if gamma_labels else tuple(f"v{i}" for i in range(self.dB))
        self.star = clean_table(star)
        self.bracket = clean_table(bracket)
        self.pairing = clean_table(pairing)
        self.pi = {v: clean_map(m) for v, m in pi.items() if clean_map(m)}
        self.partial = clean_map(partial)
        self._validate_indices()

    @property
    def dA(self) -> int:
        return self.A.dim

    def _validate_indices(self):
        dA, dB = self.dA, self.dB
        for (a, v), w in self.star.items():
            if not (0 <= a < dA and 0 <= v < dB) or any(not 0 <= k < dB for k in w):
                raise IndexError(f"star index out of range at {(a, v)}")
        for name, tab, tgt in (("bracket", self.bracket, dB), ("pairing", self.pairing, dA)):
            for (u, v), w in tab.items():
                if not (0 <= u < dB and 0 <= v < dB) or any(not 0 <= k < tgt for k in w):
                    raise IndexError(f"{name} index out of range at {(u, v)}")
        for v, m in self.pi.items():
            if not 0 <= v < dB:
                raise IndexError(f"pi defined on out-of-range index {v}")
            for i, img in m.items():
                if not 0 <= i < dA or any(not 0 <= k < dA for k in img):
                    raise IndexError(f"pi({v}) index out of range")
        for a, img in self.partial.items():
            if not 0 <= a < dA or any(not 0 <= k < dB for k in img):
                raise IndexError(f"partial index out of range at {a}")

    # operations on dict vectors -----------------------------------------------

    def act(self, a: Mapping, v: Mapping) -> dict:
        """a * v"""
        return bilinear(self.star, a, v)

    def br(self, u: Mapping, v: Mapping) -> dict:
        return bilinear(self.bracket, u, v)

    def pair(self, u: Mapping, v: Mapping) -> dict:
        return bilinear(self.pairing, u, v)

    def anchor(self, v: Mapping, a: Mapping) -> dict:
        """pi(v)(a)"""
        out: dict = {}
        for k, c in v.items():
            m = self.pi.get(k)
            if m:
                lc_add(out, linear(m, a), c)
        return out

    def anchor_matrix(self, v: Mapping) -> dict:
        out: dict = {}
        for k, c in v.items():
            for i, img in self.pi.get(k, {}).items():
                row = out.setdefault(i, {})
                lc_add(row, img, c)
                if not row:
                    del out[i]
        return out

    def d(self, a: Mapping) -> dict:
        return linear(self.partial, a)

    def mul(self, a: Mapping, b: Mapping) -> dict:
        return self.A.mul(a, b)

    def ea(self, a: int, b: int) -> int:
        return sign(self.A.parities[a], self.A.parities[b])

    def eav(self, a: int, v: int) -> int:
        return sign(self.A.parities[a], self.parities[v])

    def ev(self, u: int, v: int) -> int:
        return sign(self.parities[u], self.parities[v])

    def tables(self) -> dict:
        return {"star": self.star, "bracket": self.bracket, "pairing": self.pairing,
                "pi": self.pi, "partial": self.partial}

    def __repr__(self):
        return f"VertexSuperalgebroid(dim A={self.dA}, dim Gamma={self.dB})"


# ---------------------------------------------------------------------------
# the nine compatibility identities


def _module_defect(V: VertexSuperalgebroid, a: int, a2: int, v: int):
    lhs = V.act(e(a), V.act(e(a2), e(v)))
    lc_add(lhs, V.act(V.mul(e(a), e(a2)), e(v)), -ONE)
    rhs = lc_scale(V.act(V.anchor(e(v), e(a)), V.d(e(a2))), V.ea(a, a2))
    lc_add(rhs, V.act(V.anchor(e(v), e(a2)), V.d(e(a))))
    return lhs, rhs


def _bracket_action(V: VertexSuperalgebroid, u: int, a: int, v: int):
    lhs = V.br(e(u), V.act(e(a), e(v)))
    rhs = V.act(V.anchor(e(u), e(a)), e(v))
    lc_add(rhs, V.act(e(a), V.br(e(u), e(v))), V.eav(a, u))
    return lhs, rhs


def _bracket_symmetric(V: VertexSuperalgebroid, u: int, v: int):
    lhs = V.br(e(u), e(v))
    lc_add(lhs, V.br(e(v), e(u)), V.ev(u, v))
    return lhs, V.d(V.pair(e(u), e(v)))


def _anchor_linear(V: VertexSuperalgebroid, a: int, v: int, x: int):
    return V.anchor(V.act(e(a), e(v)), e(x)), V.mul(e(a), V.anchor(e(v), e(x)))


def _pairing_action(V: VertexSuperalgebroid, a: int, u: int, v: int):
    lhs = V.pair(V.act(e(a), e(u)), e(v))
    rhs = V.mul(e(a), V.pair(e(u), e(v)))
    lc_add(rhs, V.anchor(e(u), V.anchor(e(v), e(a))), -V.eav(a, u) * V.eav(a, v))
    return lhs, rhs


def _pairing_invariance(V: VertexSuperalgebroid, v: int, v1: int, v2: int):
    lhs = V.anchor(e(v), V.pair(e(v1), e(v2)))
    rhs = V.pair(V.br(e(v), e(v1)), e(v2))
    lc_add(rhs, V.pair(e(v1), V.br(e(v), e(v2))), V.ev(v, v1))
    return lhs, rhs


def _d_leibniz(V: VertexSuperalgebroid, a: int, a2: int):
    lhs = V.d(V.mul(e(a), e(a2)))
    rhs = V.act(e(a), V.d(e(a2)))
    lc_add(rhs, V.act(e(a2), V.d(e(a))), V.ea(a, a2))
    return lhs, rhs


def _bracket_exact(V: VertexSuperalgebroid, v: int, a: int):
    return V.br(e(v), V.d(e(a))), V.d(V.anchor(e(v), e(a)))


def _pairing_exact(V: VertexSuperalgebroid, v: int, a: int):
    return V.pair(e(v), V.d(e(a))), V.anchor(e(v), e(a))


def _grid(V: VertexSuperalgebroid, spec: str):
    ranges = [range(V.dA) if c == "a" else range(V.dB) for c in spec]
    return cartesian(*ranges)


ALGEBROID_AXIOMS = {
    "module defect: a*(a'*v) - (aa')*v": ("aav", ("a", "a2", "v"), _module_defect),
    "bracket vs action: [u, a*v]": ("vav", ("u", "a", "v"), _bracket_action),
    "symmetric part: [u,v] + eps[v,u] = d<u,v>": ("vv", ("u", "v"), _bracket_symmetric),
    "anchor is A-linear: pi(a*v) = a pi(v)": ("ava", ("a", "v", "x"), _anchor_linear),
    "pairing vs action: <a*u, v>": ("avv", ("a", "u", "v"), _pairing_action),
    "pairing invariance: pi(v)<v1,v2>": ("vvv", ("v", "v1", "v2"), _pairing_invariance),
    "d is a derivation: d(aa')": ("aa", ("a", "a2"), _d_leibniz),
    "bracket with exact: [v, da] = d(pi(v)a)": ("va", ("v", "a"), _bracket_exact),
    "pairing with exact: <v, da> = pi(v)a": ("va", ("v", "a"), _pairing_exact),
}

PAIRING_EXACT = "pairing with exact: <v, da> = pi(v)a"


def structure_report(V: VertexSuperalgebroid) -> CheckReport:
    """Items (0)-(4) of the definition: unit action, anchor into Der(A) as a
    Leibniz homomorphism, symmetric pairing, pi o partial = 0, plus parity
    bookkeeping of every table."""
    rep = CheckReport("algebroid structure maps")
    A, p, pa = V.A, V.parities, V.A.parities
    rep.add(parity_tally("star parity", pa, p, p, V.star))
    rep.add(parity_tally("pairing parity", p, p, pa, V.pairing))
    dpar = AxiomTally("partial parity")
    for a in range(V.dA):
        dpar.check({k: c for k, c in V.d(e(a)).items() if p[k] != pa[a]}, {}, a=a)
    rep.add(dpar)

    unit = AxiomTally("unit action: 1*v = v")
    if A.unit is None:
        unit.fail({}, {}, missing="unit")
    else:
        for v in range(V.dB):
            unit.check(V.act(A.unit, e(v)), e(v), v=v)
    rep.add(unit)

    der = AxiomTally("anchor lands in derivations")
    for v in range(V.dB):
        t = derivation_tally(A, V.pi.get(v, {}), p[v], v=v)
        der.result.checked += t.result.checked
        if not t.result.passed:
            w = t.result.witness
            der.fail(w.lhs, w.rhs, **w.indices)
    rep.add(der)

    hom = AxiomTally("anchor is a Leibniz homomorphism")
    for u, v in cartesian(range(V.dB), repeat=2):
        lhs = V.anchor_matrix(V.br(e(u), e(v)))
        rhs = super_commutator(V.pi.get(u, {}), V.pi.get(v, {}), p[u], p[v], V.dA)
        hom.result.checked += 1
        if not map_equal(lhs, rhs):
            x = next(i for i in range(V.dA) if dict(lhs.get(i, {})) != dict(rhs.get(i, {})))
            hom.fail(lhs.get(x, {}), rhs.get(x, {}), u=u, v=v, x=x)
    rep.add(hom)

    sym = AxiomTally("pairing super-symmetry")
    for u, v in cartesian(range(V.dB), repeat=2):
        sym.check(V.pair(e(u), e(v)), lc_scale(V.pair(e(v), e(u)), V.ev(u, v)), u=u, v=v)
    rep.add(sym)

    pid = AxiomTally("anchor kills exact elements: pi o d = 0")
    for a in range(V.dA):
        m = V.anchor_matrix(V.d(e(a)))
        for x in range(V.dA):
            pid.check(m.get(x, {}), {}, a=a, x=x)
    rep.add(pid)
    return rep


def prerequisite_report(V: VertexSuperalgebroid) -> CheckReport:
    rep = CheckReport("prerequisites")
    rep.merge(check_commutative_algebra(V.A), prefix=V.A.name)
    rep.merge(check_leibniz_superalgebra(V.parities, V.bracket, "Gamma"), prefix="Gamma")
    return rep


def axioms_report(V: VertexSuperalgebroid, labels=None) -> CheckReport:
    rep = CheckReport("vertex superalgebroid identities")
    for label, (spec, names, fn) in ALGEBROID_AXIOMS.items():
        if labels is not None and label not in labels:
            continue
        t = AxiomTally(label)
        for combo in _grid(V, spec):
            idx = dict(zip(names, combo))
            lhs, rhs = fn(V, **idx)
            t.check(lhs, rhs, **idx)
        rep.add(t)
    return rep


def check_algebroid_axioms(V: VertexSuperalgebroid, raise_on_prerequisite: bool = True) -> CheckReport:
    """Prerequisites, structure maps, then the nine identities in order.

    Raises :class:`PrerequisiteFailed` (carrying the report) if A is not a
    unital super-commutative associative algebra or the bracket is not a
    Leibniz superalgebra; otherwise always evaluates every identity.
    """
    rep = CheckReport("vertex superalgebroid")
    pre = prerequisite_report(V)
    rep.merge(pre)
    if not pre.passed and raise_on_prerequisite:
        raise PrerequisiteFailed(f"prerequisite failed: {pre.first_failure().label}", rep)
    rep.merge(structure_report(V))
    rep.merge(axioms_report(V))
    return rep


def replay(V: VertexSuperalgebroid, label: str, indices: Mapping) -> tuple[dict, dict]:
    _, names, fn = ALGEBROID_AXIOMS[label]
    return fn(V, **{k: indices[k] for k in names})


# ---------------------------------------------------------------------------
# correspondence with 1-truncated conformal superalgebras


def conformal_tables(V: VertexSuperalgebroid) -> tuple[dict, dict, dict]:
    dA = V.dA
    prod0, prod1 = {}, {}
    for (u, v), w in V.bracket.items():
        prod0[(u + dA, v + dA)] = {k + dA: c for k, c in w.items()}
    for (u, v), w in V.pairing.items():
        prod1[(u + dA, v + dA)] = dict(w)
    for u in range(V.dB):
        for a in range(dA):
            img = V.anchor(e(u), e(a))
            if img:
                prod0[(u + dA, a)] = img
                prod0[(a, u + dA)] = lc_scale(img, -V.eav(a, u))
    partial = {a: {k + dA: c for k, c in img.items()} for a, img in V.partial.items()}
    return partial, prod0, prod1


class _Star:
    """Helper evaluating the A-module action on combined C indices."""

    def __init__(self, C: TruncatedConformal, star: Mapping):
        self.C, self.star = C, clean_table(star)

    def act(self, a: Mapping, u: Mapping) -> dict:
        dA = self.C.dA
        ub = {k - dA: c for k, c in u.items() if k >= dA}
        return {k + dA: c for k, c in bilinear(self.star, a, ub).items()}


def _corr_grid(C: TruncatedConformal, spec: str):
    return cartesian(*[C.a_indices() if c == "a" else C.b_indices() for c in spec])


def _c24(C, S, a, a2, u):
    lhs = S.act(e(a), S.act(e(a2), e(u)))
    lc_add(lhs, S.act(C.A.mul(e(a), e(a2)), e(u)), -ONE)
    rhs = lc_scale(S.act(C.p0(e(u), e(a)), C.d(e(a2))), C.eps(a, a2))
    lc_add(rhs, S.act(C.p0(e(u), e(a2)), C.d(e(a))))
    return lhs, rhs


def _c25(C, S, u, a, v):
    lhs = C.p0(e(u), S.act(e(a), e(v)))
    lc_add(lhs, S.act(e(a), C.p0(e(u), e(v))), -C.eps(u, a))
    return lhs, S.act(C.p0(e(u), e(a)), e(v))


def _c26(C, S, u, a, a2):
    lhs = C.p0(e(u), C.A.mul(e(a), e(a2)))
    rhs = lc_scale(C.A.mul(e(a), C.p0(e(u), e(a2))), C.eps(u, a))
    lc_add(rhs, C.A.mul(C.p0(e(u), e(a)), e(a2)))
    return lhs, rhs


def _c27(C, S, a2, a, v):
    return C.p0(e(a2), S.act(e(a), e(v))), lc_scale(C.A.mul(e(a), C.p0(e(a2), e(v))), C.eps(a, a2))


def _c28(C, S, a, u, v):
    lhs = C.p1(S.act(e(a), e(u)), e(v))
    rhs = C.A.mul(e(a), C.p1(e(u), e(v)))
    lc_add(rhs, C.p0(e(u), C.p0(e(v), e(a))), -C.eps(a, u) * C.eps(a, v))
    return lhs, rhs


def _c29(C, S, a, a2):
    lhs = C.d(C.A.mul(e(a), e(a2)))
    rhs = S.act(e(a), C.d(e(a2)))
    lc_add(rhs, S.act(e(a2), C.d(e(a))), C.eps(a, a2))
    return lhs, rhs


CORRESPONDENCE_AXIOMS = {
    "module defect via 0-products: a(a'u) - (aa')u": ("aab", ("a", "a2", "u"), _c24),
    "u_0(av) - eps a(u_0 v) = (u_0 a)v": ("bab", ("u", "a", "v"), _c25),
    "u_0 is a derivation of A: u_0(aa')": ("baa", ("u", "a", "a2"), _c26),
    "a'_0(av) = eps a(a'_0 v)": ("aab", ("a2", "a", "v"), _c27),
    "(au)_1 v = a(u_1 v) - eps eps u_0 v_0 a": ("abb", ("a", "u", "v"), _c28),
    "d(aa') = a da' + eps a' da": ("aa", ("a", "a2"), _c29),
}


def correspondence_report(C: TruncatedConformal, star: Mapping) -> CheckReport:
    rep = CheckReport("algebroid / conformal correspondence")
    S = _Star(C, star)
    for label, (spec, names, fn) in CORRESPONDENCE_AXIOMS.items():
        t = AxiomTally(label)
        for combo in _corr_grid(C, spec):
            idx = dict(zip(names, combo))
            lhs, rhs = fn(C, S, **idx)
            t.check(lhs, rhs, **idx)
        rep.add(t)
    return rep


def to_truncated_conformal(V: VertexSuperalgebroid, check: bool = True) -> TruncatedConformal:
    """C = A + B with u_0 v = [u,v], u_1 v = <u,v>, u_0 a = pi(u)(a) and
    a_i a' = 0.  With ``check`` the result must pass every conformal axiom and
    the six correspondence identities, else :class:`AxiomViolation`."""
    partial, prod0, prod1 = conformal_tables(V)
    C = TruncatedConformal(V.A, V.parities, partial, prod0, prod1, b_labels=V.labels)
    if check:
        rep = check_tconf(C)
        rep.merge(correspondence_report(C, V.star))
        if not rep.passed:
            raise AxiomViolation(f"conformal axiom failed: {rep.first_failure().label}", rep)
    return C


def from_truncated_conformal(C: TruncatedConformal, star: Mapping, check: bool = True) -> VertexSuperalgebroid:
    """Inverse of :func:`to_truncated_conformal` given the A-module action."""
    if check:
        rep = correspondence_report(C, star)
        if not rep.passed:
            bad = [r.label for r in rep.results if not r.passed]
            raise AxiomViolation("correspondence identities failed: " + "; ".join(bad), rep)
    dA = C.dA
    bracket, pairing, pi = {}, {}, {}
    for (i, j), w in C.prod0.items():
        if i >= dA and j >= dA:
            bracket[(i - dA, j - dA)] = {k - dA: c for k, c in w.items()}
        elif i >= dA and j < dA:
            pi.setdefault(i - dA, {})[j] = dict(w)
    for (i, j), w in C.prod1.items():
        pairing[(i - dA, j - dA)] = dict(w)
    partial = {a: {k - dA: c for k, c in img.items()} for a, img in C.partial.items()}
    return VertexSuperalgebroid(C.A, C.b_parities, star, bracket, pi, pairing, partial, gamma_labels=C.b_labels)


def tables_equal(V: VertexSuperalgebroid, W: VertexSuperalgebroid) -> bool:
    return (V.star == W.star and V.bracket == W.bracket and V.pairing == W.pairing
            and V.pi == W.pi and V.partial == W.partial and V.parities == W.parities)

"""Vir+ actions on the loop algebra, on V_L and on V_B, and the
semi-conformal criterion.

All Vir+ data is forced by ``L(1): B -> A``: L(0) is 0 on A and 1 on B,
L(-1) is D, and L(m), m >= 2, is generated by brackets.  On modes

    [L(m), u(n)] = -(m+n+1) u(m+n) + (m+1) (L(0)u)(m+n) + C(m+1, 2) (L(1)u)(m+n-1).
"""
from __future__ import annotations

from itertools import product as cartesian
from typing import Iterable, Mapping, Sequence

from .algebra import clean_map, linear
from .algebroid import VertexSuperalgebroid, check_algebroid_axioms, to_truncated_conformal
from .exact import ONE, Echelon, Q, lc_add, lc_scale
from .loop import LoopElement, LoopQuotient, _terms, bracket_modes, dhat, loop_bracket
from .report import AxiomTally, CheckFailed, CheckReport
from .tconf import TruncatedConformal
from .verma import GradedQuotient, Generators, TruncationExceeded, VermaModule, _span, vacuum


class PreconditionFailed(CheckFailed):
    pass


class BModuleData:
    """Weight b-module data on A + B: L(0) is 0 on A and 1 on B; only
    ``L1: B -> A`` is free (B index -> A-vector)."""

    def __init__(self, dB: int, L1: Mapping):
        self.dB = dB
        self.L1 = clean_map(L1)
        for b in self.L1:
            if not 0 <= b < dB:
                raise ValueError(f"L(1) given on B-index {b} outside dim B = {dB}")

    def key(self) -> tuple:
        return tuple(sorted((b, tuple(sorted(v.items()))) for b, v in self.L1.items()))

    def l1(self, b: int) -> dict:
        return self.L1.get(b, {})

    def on_combined(self, dA: int, idx: int) -> tuple[Q, dict]:
        """(L(0) eigenvalue, L(1) image as combined-index vector) of a basis
        element of A + B."""
        if idx < dA:
            return Q(0), {}
        return ONE, dict(self.l1(idx - dA))

    def parity_report(self, C: TruncatedConformal) -> CheckReport:
        rep = CheckReport("L(1) data")
        t = AxiomTally("L(1) is even")
        for b in range(self.dB):
            pb = C.parities[C.dA + b]
            t.check({k: c for k, c in self.l1(b).items() if C.parities[k] != pb}, {}, b=b)
        rep.add(t)
        return rep


def _binom2(m: int) -> Q:
    return Q((m + 1) * m, 2)


def vir_rule(C: TruncatedConformal, data: BModuleData, m: int, key) -> dict:
    """[L(m), u(n)] as a dict of (index, power) modes, unreduced."""
    idx, n = key
    out: dict = {}
    l0, l1 = data.on_combined(C.dA, idx)
    c = Q(-(m + n + 1)) + (m + 1) * l0
    if c:
        out[(idx, m + n)] = c
    c2 = _binom2(m)
    if c2 and l1:
        for k, v in l1.items():
            lc_add(out, {(k, m + n - 1): c2 * v})
    return out


def vir_act_loop(m: int, x, data: BModuleData, C: TruncatedConformal) -> LoopElement:
    """L(m)*x on L(A + B), extended linearly."""
    if m < -1:
        raise ValueError("L(m) is defined for m >= -1")
    out: dict = {}
    for key, c in _terms(x).items():
        r = vir_rule(C, data, m, key)
        if r:
            lc_add(out, r, c)
    return LoopElement(C, out)


def _vir(C, data, m, x: Mapping) -> dict:
    return vir_act_loop(m, x, data, C).terms


def check_vir_relations_on_loop(C: TruncatedConformal, data: BModuleData, m_range: Sequence[int] = range(-1, 5),
                                window: tuple[int, int] = (-6, 6)) -> CheckReport:
    """[L(m), L(n)] x = (m-n) L(m+n) x on every u (x) t^k in the window."""
    rep = CheckReport("Vir+ relations on the loop algebra")
    t = AxiomTally("[L(m), L(n)] = (m-n) L(m+n)")
    basis = [(i, k) for k in range(window[0], window[1] + 1) for i in range(C.dim)]
    for m, n in cartesian(m_range, repeat=2):
        if m < -1 or n < -1 or m + n < -1:
            continue
        for key in basis:
            x = {key: ONE}
            lhs = _vir(C, data, m, _vir(C, data, n, x))
            lc_add(lhs, _vir(C, data, n, _vir(C, data, m, x)), -ONE)
            rhs = lc_scale(_vir(C, data, m + n, x), Q(m - n))
            t.check(lhs, rhs, m=m, n=n, x=key)
    rep.add(t)
    return rep


def l1_on_exact_report(C: TruncatedConformal, data: BModuleData) -> AxiomTally:
    t = AxiomTally("L(1) dA = 0")
    for a in range(C.dA):
        img: dict = {}
        for k, c in C.partial.get(a, {}).items():
            lc_add(img, data.l1(k - C.dA), c)
        t.check(img, {}, a=a)
    return t


def check_dhat_equivariance(C: TruncatedConformal, data: BModuleData, m_range: Sequence[int] = range(-1, 5),
                            window: tuple[int, int] = (-6, 6)) -> CheckReport:
    """L(m)*dhat(a (x) t^n) = -n dhat(a (x) t^(m+n)).  Raises
    PreconditionFailed when L(1) dA != 0."""
    pre = l1_on_exact_report(C, data)
    if not pre.result.passed:
        rep = CheckReport("dhat equivariance")
        rep.add(pre)
        raise PreconditionFailed(f"L(1) does not vanish on dA: {pre.result.witness.indices}", rep)
    rep = CheckReport("dhat equivariance")
    rep.add(pre)
    t = AxiomTally("L(m) dhat(a(n)) = -n dhat(a(m+n))")
    for m, a, n in cartesian(m_range, range(C.dA), range(window[0], window[1] + 1)):
        if m < -1:
            continue
        lhs = _vir(C, data, m, dhat(C, a, n))
        t.check(lhs, lc_scale(dhat(C, a, m + n), Q(-n)), m=m, a=a, n=n)
    rep.add(t)
    return rep


def check_vir_derivations(Q_: LoopQuotient, data: BModuleData, m_range: Sequence[int] = range(-1, 5)) -> CheckReport:
    """L(s)*[x, y] = [L(s)*x, y] + [x, L(s)*y] modulo dhat L(A), for basis
    pairs of the window."""
    C = Q_.C
    rep = CheckReport("Vir+ acts by derivations")
    t = AxiomTally("L(s)[x,y] = [L(s)x, y] + [x, L(s)y] mod dhat")
    basis = Q_.basis()
    for s in m_range:
        images = {k: _vir(C, data, s, {k: ONE}) for k in basis}
        for x, y in cartesian(basis, repeat=2):
            lhs = Q_.reduce(_vir(C, data, s, bracket_modes(C, x, y)))
            rhs = loop_bracket(C, images[x], {y: ONE}).terms
            lc_add(rhs, loop_bracket(C, {x: ONE}, images[y]).terms)
            t.check(lhs, Q_.reduce(rhs), s=s, x=x, y=y)
    rep.add(t)
    return rep


# ---------------------------------------------------------------------------
# semi-conformal decision


def semiconformal_report(C: TruncatedConformal, data: BModuleData) -> CheckReport:
    """(i) L(1)dA = 0, (ii) L(1)(u_0 v) = (L(1)u)_0 v + u_0 (L(1)v) on B,
    (iii) L(1)(a*b) = a L(1)b - a_0 b.  Needs the star action, so ``C``
    should come with ``star`` (see :func:`check_semiconformal_conditions`)."""
    dA = C.dA
    rep = CheckReport("semi-conformal conditions")
    rep.merge(data.parity_report(C))
    i = l1_on_exact_report(C, data)
    i.result.label = "semi-conformal (i): L(1) dA = 0"
    rep.add(i)

    def L1(vec: Mapping) -> dict:
        out: dict = {}
        for k, c in vec.items():
            if k >= dA:
                lc_add(out, data.l1(k - dA), c)
        return out

    def p0(x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for k1, c1 in x.items():
            for k2, c2 in y.items():
                lc_add(out, C.prod0.get((k1, k2), {}), c1 * c2)
        return out

    t = AxiomTally("semi-conformal (ii): L(1)(u_0 v) = (L(1)u)_0 v + u_0 L(1)v")
    for u, v in cartesian(range(dA, C.dim), repeat=2):
        lhs = L1(C.prod0.get((u, v), {}))
        rhs = p0(L1({u: ONE}), {v: ONE})
        lc_add(rhs, p0({u: ONE}, L1({v: ONE})))
        t.check(lhs, rhs, u=u - dA, v=v - dA)
    rep.add(t)

    star = getattr(C, "star", None) or {}
    t = AxiomTally("semi-conformal (iii): L(1)(a*b) = a L(1)b - a_0 b")
    for a, b in cartesian(range(dA), range(C.dB)):
        lhs = L1({dA + k: c for k, c in star.get((a, b), {}).items()})
        rhs = C.A.mul({a: ONE}, data.l1(b)) if data.l1(b) else {}
        lc_add(rhs, C.prod0.get((a, dA + b), {}), -ONE)
        t.check(lhs, rhs, a=a, b=b)
    rep.add(t)
    return rep


def check_semiconformal_conditions(V: VertexSuperalgebroid, data: BModuleData) -> CheckReport:
    """Decision procedure: the algebroid axioms (prerequisite) and the three
    conditions.  A pass means V_B carries the semi-conformal structure."""
    rep = CheckReport("semi-conformal")
    alg = check_algebroid_axioms(V, raise_on_prerequisite=False)
    rep.merge(alg, prefix="algebroid")
    if data.dB != V.dB:
        raise ValueError(f"L(1) data has dim B = {data.dB}, algebroid has {V.dB}")
    C = to_truncated_conformal(V, check=False)
    C.star = V.star
    rep.merge(semiconformal_report(C, data))
    return rep


def invariant_form_dimension(V: VertexSuperalgebroid, data: BModuleData) -> int:
    """dim A - dim L(1)B: the dimension of the space of invariant bilinear
    forms (only degree-1 data is needed)."""
    ech = Echelon()
    for b in range(data.dB):
        ech.add(data.l1(b))
    return V.dA - ech.rank


# ---------------------------------------------------------------------------
# L(m) on V_L and V_B


def l_operator(M: VermaModule, data: BModuleData, m: int, vec: Mapping) -> dict:
    """L(m) on V_L: the even operator with L(m) 1 = 0 and the mode bracket
    above (reduced modulo dhat)."""
    C, Q_ = M.C, M.Q

    def rule(x):
        return Q_.reduce(vir_rule(C, data, m, x))

    return M.derivation(("L", m, data.key()), rule, vec)


def check_LmE_stability(M: VermaModule, data: BModuleData, m_range: Sequence[int] = range(0, 4)) -> CheckReport:
    """L(m)E in span(E) for m >= 0, with the explicit values
    L(m)(e - 1) = 0 and L(0) x = x on the degree-1 generators."""
    gens = Generators(M)
    span_e = _span(v for _, v in gens.all)
    rep = CheckReport("L(m)E stability")
    t = AxiomTally("L(m)E in span(E), m >= 0")
    for m in m_range:
        for lab, v in gens.all:
            t.check(span_e.reduce(l_operator(M, data, m, v)), {}, m=m, generator=lab)
    rep.add(t)
    t = AxiomTally("L(m)(e - 1) = 0")
    lab, v = gens.E0[0]
    for m in m_range:
        t.check(l_operator(M, data, m, v), {}, m=m)
    rep.add(t)
    t = AxiomTally("L(0) is the degree on E")
    for lab, v in gens.E1:
        t.check(l_operator(M, data, 0, v), v, generator=lab)
    for lab, v in gens.E0:
        t.check(l_operator(M, data, 0, v), {}, generator=lab)
    rep.add(t)
    return rep


class _VirOnQuotient:
    """L(m) on the representatives of a GradedQuotient; None when the
    result would leave the built range."""

    def __init__(self, G: GradedQuotient, data: BModuleData):
        self.G, self.data = G, data

    def __call__(self, m: int, vec: Mapping):
        if not vec:
            return {}
        G = self.G
        target = G.M.vec_degree(vec) - m
        if target < 0:
            return {}
        if target > G.max_degree:
            return None
        try:
            return G.reduce(l_operator(G.M, self.data, m, vec))
        except TruncationExceeded:
            return None


def check_Lm_mode_bracket(G: GradedQuotient, data: BModuleData, m_range: Sequence[int] = range(-1, 4),
                          max_degree: int | None = None) -> CheckReport:
    """On V_B representatives of degree <= max_degree:
    [L(m), u(n)] w matches the mode formula for all basis u and every n with
    target inside the truncation; L(-1) = D; L(0) = degree; L(m) 1 = 0;
    L(m)(A + B) = 0 for m >= 2; L(m) maps the ideal into itself;
    [L(m), L(n)] = (m-n) L(m+n).  Out-of-range instances are skipped."""
    M = G.M
    C = M.C
    md = G.max_degree if max_degree is None else min(max_degree, G.max_degree)
    L = _VirOnQuotient(G, data)
    rep = CheckReport("L(m) on V_B")
    ws = [w for deg in range(md + 1) for w in G.basis_vectors(deg)]

    t = AxiomTally("L(m) I_B in I_B")
    for deg in range(md + 1):
        for row in G.ideal[deg].sorted_rows():
            for m in m_range:
                if deg - m < 0 or deg - m > G.max_degree:
                    continue
                try:
                    r = G.reduce(l_operator(M, data, m, row))
                except TruncationExceeded:
                    t.skip()
                    continue
                t.check(r, {}, m=m, degree=deg)
    rep.add(t)

    t = AxiomTally("[L(m), u(n)] mode formula")
    for m, u in cartesian(m_range, range(C.dim)):
        for w in ws:
            dw = M.vec_degree(w)
            for target in range(md + 1):
                s = target - dw + m  # degree of u(n)
                n = -s - 1 if u < C.dA else -s
                uw = G.act((u, n), w)
                lw = L(m, w)
                if uw is None or lw is None:
                    t.skip()
                    continue
                lhs = L(m, uw)
                other = G.act((u, n), lw) if lw else {}
                if lhs is None or other is None:
                    t.skip()
                    continue
                lc_add(lhs, other, -ONE)
                rhs: dict = {}
                ok = True
                for key, c in M.Q.reduce(vir_rule(C, data, m, (u, n))).items():
                    r = G.act(key, w)
                    if r is None:
                        ok = False
                        break
                    lc_add(rhs, r, c)
                if not ok:
                    t.skip()
                    continue
                t.check(lhs, rhs, m=m, u=u, n=n, w=M.mono_label(next(iter(w))))
    rep.add(t)

    t = AxiomTally("L(-1) = D")
    z = AxiomTally("L(0) = degree")
    for w in ws:
        a, b = L(-1, w), G.d(w)
        if a is None or b is None:
            t.skip()
        else:
            t.check(a, b, w=M.mono_label(next(iter(w))))
        z.check(L(0, w), lc_scale(w, Q(M.vec_degree(w))), w=M.mono_label(next(iter(w))))
    rep.add(t)
    rep.add(z)

    t = AxiomTally("L(m) 1 = 0")
    for m in m_range:
        t.check(l_operator(M, data, m, vacuum()), {}, m=m)
    rep.add(t)

    t = AxiomTally("L(m)(A + B) = 0, m >= 2")
    for u in range(C.dim):
        s = M.state(u)
        for m in range(2, max(max(m_range), 2) + 2):
            t.check(l_operator(M, data, m, s), {}, m=m, u=u)
    rep.add(t)

    t = AxiomTally("[L(m), L(n)] = (m-n) L(m+n) on V_B")
    for m, n in cartesian(m_range, repeat=2):
        if m + n < -1:
            continue
        for w in ws:
            x, y = L(n, w), L(m, w)
            r = L(m + n, w)
            if x is None or y is None or r is None:
                t.skip()
                continue
            a, b = L(m, x), L(n, y)
            if a is None or b is None:
                t.skip()
                continue
            lc_add(a, b, -ONE)
            t.check(a, lc_scale(r, Q(m - n)), m=m, n=n, w=M.mono_label(next(iter(w))))
    rep.add(t)
    return rep

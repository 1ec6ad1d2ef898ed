"""The generalized Verma module V_L = U(L^{<0}) 1 on super-PBW monomials, the
ideal I_B generated by E, and the graded quotient V_B = V_L / I_B.

A mode is a canonical loop basis element ``(index, power)`` (see
:class:`LoopQuotient`); a PBW monomial is a tuple of negative-power modes
sorted by ``(power, index)``: most negative power first, A before B,
ascending index.  Odd modes occur at most once.  Vectors are dicts
``{monomial: Q}``; ``()`` is the vacuum.

Degree-0 modes a(-1) make each graded piece infinite, so V_L is truncated
at a number of A-factors per monomial (the *cap*).  Products of negative
modes never raise that number, so the ideal is built exactly inside the
truncation; a nonnegative mode can add one A-factor (through the pairing
term of the bracket), so checks skip images that leave the cap.
"""
from __future__ import annotations

import time
from itertools import product as cartesian
from math import comb
from typing import Iterable, Mapping, Sequence

from .algebroid import VertexSuperalgebroid, to_truncated_conformal
from .exact import ONE, ZERO, Echelon, Q, lc_add, lc_format, lc_scale
from .loop import LoopQuotient, mode_label
from .report import AxiomTally, CheckFailed, CheckReport

HALF = Q(1, 2)
VACUUM: tuple = ()


class ClosureNotStabilized(CheckFailed):
    pass


class TruncationExceeded(ValueError):
    """A vector left the capped monomial space or the built degree range."""


def _mkey(mode):
    return (mode[1], mode[0])


class VermaModule:
    """Mode actions on V_L for the conformal data of ``V``."""

    def __init__(self, V: VertexSuperalgebroid, max_degree: int = 4, window: tuple[int, int] | None = None):
        self.V = V
        self.C = to_truncated_conformal(V, check=False)
        self.dA = self.C.dA
        # modes up to power -(max_degree+1) and brackets of those with the
        # probing modes used by the checks
        reach = max(max_degree + 4, 8)
        window = window or (-reach, reach)
        self.Q = LoopQuotient(self.C, window, limit=(3 * window[0] - 3, 3 * window[1] + 3))
        self.max_degree = max_degree
        self._apply: dict = {}
        self._deriv: dict = {}
        self._nord: dict = {"left": {}, "right": {}}

    # --- modes -----------------------------------------------------------------

    def parity(self, mode) -> int:
        return self.C.parities[mode[0]]

    def degree(self, mode) -> int:
        idx, n = mode
        return -n - 1 if idx < self.dA else -n

    def is_a(self, mode) -> bool:
        return mode[0] < self.dA

    def label(self, mode) -> str:
        return mode_label(self.C, mode)

    def mono_label(self, mono: tuple) -> str:
        return " ".join(self.label(m) for m in mono) + " |0>" if mono else "|0>"

    def negative_modes(self, max_degree: int | None = None) -> list:
        md = self.max_degree if max_degree is None else max_degree
        return self.Q.negative_basis(md)

    def a_modes(self) -> list:
        return [(a, -1) for a in range(self.dA)]

    def mono_degree(self, mono: tuple) -> int:
        return sum(self.degree(m) for m in mono)

    def a_count(self, mono: tuple) -> int:
        return sum(1 for m in mono if m[0] < self.dA)

    def vec_degree(self, vec: Mapping) -> int | None:
        degs = {self.mono_degree(m) for m in vec}
        if len(degs) > 1:
            raise ValueError("vector is not homogeneous")
        return degs.pop() if degs else None

    def sign(self, x, y) -> int:
        return -1 if self.C.parities[x[0]] and self.C.parities[y[0]] else 1

    # --- action ------------------------------------------------------------------

    def apply_mode(self, mode, mono: tuple) -> dict:
        """u(n) applied to the PBW monomial ``mono``; ``mode`` may be any
        (index, power) pair, it is reduced mod dhat first."""
        red = self.Q.reduce_mode(mode)
        if red == {mode: ONE}:
            return self._apply_canonical(mode, mono)
        out: dict = {}
        for k, c in red.items():
            lc_add(out, self._apply_canonical(k, mono), c)
        return out

    def _apply_canonical(self, x, mono: tuple) -> dict:
        key = (x, mono)
        cached = self._apply.get(key)
        if cached is not None:
            return cached
        out: dict = {}
        if x[1] >= 0:
            # nonnegative modes kill the vacuum and commute rightwards
            if mono:
                m1, rest = mono[0], mono[1:]
                for y, c in self.Q.bracket(x, m1).items():
                    lc_add(out, self.apply_mode(y, rest), c)
                inner = self._apply_canonical(x, rest)
                if inner:
                    lc_add(out, self.apply(m1, inner), self.sign(x, m1))
        else:
            if not mono or _mkey(x) < _mkey(mono[0]) or (x == mono[0] and not self.parity(x)):
                out = {(x,) + mono: ONE}
            else:
                m1, rest = mono[0], mono[1:]
                if x == m1:  # odd: x x = 1/2 [x, x]
                    for y, c in self.Q.bracket(x, x).items():
                        lc_add(out, self.apply_mode(y, rest), c * HALF)
                else:
                    inner = self._apply_canonical(x, rest)
                    lc_add(out, self.apply(m1, inner), self.sign(x, m1))
                    for y, c in self.Q.bracket(x, m1).items():
                        lc_add(out, self.apply_mode(y, rest), c)
        self._apply[key] = out
        return out

    def apply(self, mode, vec: Mapping) -> dict:
        out: dict = {}
        for mono, c in vec.items():
            r = self.apply_mode(mode, mono)
            if r:
                lc_add(out, r, c)
        return out

    def apply_index(self, u: int, n: int, vec: Mapping) -> dict:
        return self.apply((u, n), vec)

    def apply_word(self, word: Sequence, vec: Mapping) -> dict:
        """x1 x2 ... xk vec (rightmost mode acts first)."""
        out = dict(vec)
        for m in reversed(word):
            out = self.apply(m, out)
        return out

    def state(self, u: int) -> dict:
        """u(-1)1, the image of u in degree 0 or 1."""
        return self.apply_mode((u, -1), VACUUM)

    def vector_state(self, coords: Mapping, offset: int = 0) -> dict:
        out: dict = {}
        for k, c in coords.items():
            lc_add(out, self.state(k + offset), c)
        return out

    # --- even derivations commuting with modes by a loop-level rule --------------

    def derivation(self, name: str, rule, vec: Mapping) -> dict:
        """Apply the even operator X with X 1 = 0 and [X, x] = rule(x) (a dict
        of modes) for every mode x."""
        cache = self._deriv.setdefault(name, {})
        out: dict = {}
        for mono, c in vec.items():
            r = self._derive(cache, rule, mono)
            if r:
                lc_add(out, r, c)
        return out

    def _derive(self, cache: dict, rule, mono: tuple) -> dict:
        if not mono:
            return {}
        r = cache.get(mono)
        if r is not None:
            return r
        x, rest = mono[0], mono[1:]
        out: dict = {}
        for y, c in rule(x).items():
            lc_add(out, self.apply_mode(y, rest), c)
        inner = self._derive(cache, rule, rest)
        if inner:
            lc_add(out, self.apply(x, inner))
        cache[mono] = out
        return out

    def d_rule(self, mode) -> dict:
        idx, n = mode
        return self.Q.reduce({(idx, n - 1): Q(-n)}) if n else {}

    def d_operator(self, vec: Mapping) -> dict:
        """D 1 = 0, [D, u(n)] = -n u(n-1)."""
        return self.derivation("D", self.d_rule, vec)

    # --- normal ordering of words ------------------------------------------------

    def normal_order(self, word: Sequence, strategy: str = "left") -> dict:
        """PBW expansion of the product of negative modes ``word`` by
        adjacent rewriting xy -> eps yx + [x,y] (x x -> 1/2 [x,x] for odd x),
        always rewriting the leftmost or the rightmost disorder."""
        memo = self._nord[strategy]
        word = tuple(word)
        r = memo.get(word)
        if r is not None:
            return r
        bad = [i for i in range(len(word) - 1)
               if _mkey(word[i]) > _mkey(word[i + 1]) or (word[i] == word[i + 1] and self.parity(word[i]))]
        if not bad:
            r = {word: ONE}
        else:
            i = bad[0] if strategy == "left" else bad[-1]
            x, y = word[i], word[i + 1]
            pre, post = word[:i], word[i + 2:]
            r = {}
            if x == y:
                for z, c in self.Q.bracket(x, x).items():
                    lc_add(r, self.normal_order(pre + (z,) + post, strategy), c * HALF)
            else:
                lc_add(r, self.normal_order(pre + (y, x) + post, strategy), self.sign(x, y))
                for z, c in self.Q.bracket(x, y).items():
                    lc_add(r, self.normal_order(pre + (z,) + post, strategy), c)
        memo[word] = r
        return r

    # --- enumeration -------------------------------------------------------------

    def monomials(self, degree: int, cap: int) -> list[tuple]:
        """PBW monomials of the given degree with at most ``cap`` A-factors."""
        modes = [m for m in self.negative_modes(max(degree, 0)) if self.degree(m) <= degree]
        modes.sort(key=_mkey)
        out = []

        def rec(start: int, deg_left: int, a_left: int, acc: list):
            if deg_left == 0:
                out.append(tuple(acc))
            for j in range(start, len(modes)):
                m = modes[j]
                dm = self.degree(m)
                if dm > deg_left:
                    continue
                isa = m[0] < self.dA
                if isa and a_left == 0:
                    continue
                if acc and acc[-1] == m and self.parity(m):
                    continue
                acc.append(m)
                rec(j, deg_left - dm, a_left - isa, acc)
                acc.pop()

        rec(0, degree, cap, [])
        # degree-0 modes can be appended after the budget is spent
        return sorted(set(out), key=lambda mono: tuple(_mkey(m) for m in mono))


def vacuum() -> dict:
    return {VACUUM: ONE}


# ---------------------------------------------------------------------------
# the generators E


class Generators:
    """E0 (degree 0) and E1 (degree 1) spanning sets, labelled."""

    def __init__(self, M: VermaModule):
        V, dA = M.V, M.dA
        A = V.A
        self.E0: list[tuple[str, dict]] = []
        self.E1: list[tuple[str, dict]] = []
        if A.unit is None:
            raise ValueError("A has no unit")
        e_state = M.vector_state(A.unit)
        v = dict(e_state)
        lc_add(v, vacuum(), -ONE)
        self.E0.append(("e - 1", v))
        for a, a2 in cartesian(range(dA), repeat=2):
            v = M.apply((a, -1), M.state(a2))
            lc_add(v, M.vector_state(A.basis_mul(a, a2)), -ONE)
            if v:
                self.E0.append((f"{A.labels[a]}(-1){A.labels[a2]} - {A.labels[a]}{A.labels[a2]}", v))
        for a, b in cartesian(range(dA), range(V.dB)):
            v = M.apply((a, -1), M.state(dA + b))
            lc_add(v, M.vector_state(V.star.get((a, b), {}), offset=dA), -ONE)
            if v:
                self.E1.append((f"{A.labels[a]}(-1)[{V.labels[b]}] - {A.labels[a]}*[{V.labels[b]}]", v))

    @property
    def all(self) -> list[tuple[str, dict]]:
        return self.E0 + self.E1


def generators_E(M: VermaModule) -> list[dict]:
    return [v for _, v in Generators(M).all]


def _span(vectors: Iterable[Mapping]) -> Echelon:
    ech = Echelon(lambda mono: (len(mono), tuple(_mkey(m) for m in mono)))
    for v in vectors:
        ech.add(v)
    return ech


# ---------------------------------------------------------------------------
# ideal and quotient


class GradedQuotient:
    """V_B truncated at ``max_degree`` and at ``cap`` A-factors.

    Per degree n: ``columns[n]`` (PBW monomials of V_L), ``ideal[n]`` (a
    row-reduced spanning set of (I_B)_(n), pivots on the most A-heavy
    monomial), and ``basis[n]`` (the non-pivot monomials: representatives of
    V_B).  ``reduce`` maps a V_L vector to its canonical representative.
    """

    def __init__(self, M: VermaModule, max_degree: int, cap: int, max_rounds: int = 50):
        self.M, self.max_degree, self.cap = M, max_degree, cap
        self.columns: list[list[tuple]] = []
        self.rank_of: list[dict] = []
        self.ideal: list[Echelon] = []
        self.basis: list[list[tuple]] = []
        self.timing: dict = {}
        gens = Generators(M)
        self.generators = gens
        seeds: dict[int, list[dict]] = {}
        for deg0, fam in ((0, gens.E0), (1, gens.E1)):
            for _, v in fam:
                w = v
                for k in range(max_degree - deg0 + 1):
                    seeds.setdefault(deg0 + k, []).append(w)
                    w = M.d_operator(w)
        a_modes = M.a_modes()
        for n in range(max_degree + 1):
            t0 = time.perf_counter()
            cols = M.monomials(n, cap)
            rank = {mono: (-M.a_count(mono), i) for i, mono in enumerate(cols)}
            self.columns.append(cols)
            self.rank_of.append(rank)

            def order(mono, rank=rank):
                try:
                    return rank[mono]
                except KeyError:
                    raise TruncationExceeded(f"monomial {M.mono_label(mono)} outside the truncation") from None

            ech = Echelon(order)
            for v in seeds.get(n, []):
                ech.add(v)
            for d in range(1, n + 1):
                lower = self.ideal[n - d]
                modes = [m for m in M.negative_modes(d) if M.degree(m) == d]
                for row in lower.sorted_rows():
                    for x in modes:
                        w = M.apply(x, row)
                        if w:
                            ech.add(w)
            # close under the degree-0 modes a(-1) on rows that stay inside the cap
            done: dict = {}
            for rnd in range(max_rounds):
                grew = False
                for piv in list(ech.rows):
                    if M.a_count(piv) >= cap:
                        continue
                    row = ech.rows.get(piv)
                    if row is None or done.get(piv) == row:
                        continue
                    done[piv] = dict(row)
                    for x in a_modes:
                        w = M.apply(x, row)
                        if w and ech.add(w):
                            grew = True
                if not grew:
                    break
            else:
                raise ClosureNotStabilized(f"degree {n}: a(-1)-closure did not stabilize in {max_rounds} rounds")
            self.ideal.append(ech)
            self.basis.append([m for m in cols if m not in ech.rows])
            self.timing[n] = time.perf_counter() - t0

    def dims(self) -> list[int]:
        return [len(b) for b in self.basis]

    def table(self) -> list[dict]:
        return [{"degree": n, "verma": len(self.columns[n]), "ideal": self.ideal[n].rank,
                 "quotient": len(self.basis[n])} for n in range(self.max_degree + 1)]

    def reduce(self, vec: Mapping) -> dict:
        """Canonical representative (supported on ``basis``) of a homogeneous
        V_L vector of degree <= max_degree."""
        if not vec:
            return {}
        n = self.M.vec_degree(vec)
        if n > self.max_degree:
            raise TruncationExceeded(f"degree {n} beyond the built range {self.max_degree}")
        rank = self.rank_of[n]
        for mono in vec:
            if mono not in rank:
                raise TruncationExceeded(f"monomial {self.M.mono_label(mono)} outside the truncation")
        return self.ideal[n].reduce(vec)

    def in_range(self, degree: int) -> bool:
        return degree <= self.max_degree

    def act(self, mode, vec: Mapping) -> dict | None:
        """u(n) on a representative, reduced; None if the target degree is
        not built."""
        if not vec:
            return {}
        target = self.M.vec_degree(vec) + self.M.degree(mode)
        if target < 0:
            return {}
        if target > self.max_degree:
            return None
        return self.reduce(self.M.apply(mode, vec))

    def d(self, vec: Mapping) -> dict | None:
        if not vec:
            return {}
        if self.M.vec_degree(vec) + 1 > self.max_degree:
            return None
        return self.reduce(self.M.d_operator(vec))

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)

    def basis_vectors(self, degree: int) -> list[dict]:
        return [{m: ONE} for m in self.basis[degree]]

    def only_b_representatives(self) -> bool:
        """Representatives of degree >= 1 are products of B-modes only."""
        return all(self.M.a_count(m) == 0 for n in range(1, self.max_degree + 1) for m in self.basis[n])


def build_ideal_truncation(M: VermaModule, max_degree: int, cap: int | None = None) -> GradedQuotient:
    return GradedQuotient(M, max_degree, cap if cap is not None else max(M.dA, 2))


def build_vb(V: VertexSuperalgebroid, max_degree: int = 4, cap: int | None = None,
             check_cap: bool = True, check_degree: int | None = None) -> GradedQuotient:
    """Build V_B up to ``max_degree``.  With ``check_cap`` the construction is
    repeated with cap + 1 up to ``check_degree`` (default: max_degree) and
    any change of a quotient dimension raises ClosureNotStabilized."""
    M = VermaModule(V, max_degree)
    cap = cap if cap is not None else max(M.dA, 2)
    t0 = time.perf_counter()
    G = GradedQuotient(M, max_degree, cap)
    G.timing["build"] = time.perf_counter() - t0
    G.cap_check = None
    if check_cap:
        cd = max_degree if check_degree is None else min(check_degree, max_degree)
        t0 = time.perf_counter()
        H = GradedQuotient(M, cd, cap + 1)
        G.timing["cap_check"] = time.perf_counter() - t0
        G.cap_check = {"cap": cap + 1, "degree": cd, "dims": H.dims()}
        if H.dims() != G.dims()[: cd + 1]:
            rep = CheckReport("truncation")
            t = AxiomTally("quotient dimensions stable under cap + 1")
            t.fail({n: Q(x) for n, x in enumerate(G.dims())}, {n: Q(x) for n, x in enumerate(H.dims())})
            rep.add(t)
            raise ClosureNotStabilized(f"cap {cap} -> {cap + 1} changes quotient dims {G.dims()} -> {H.dims()}", rep)
    return G


# ---------------------------------------------------------------------------
# checks


def check_ideal_closure(G: GradedQuotient, max_degree: int | None = None) -> CheckReport:
    """Every mode u(n) and D map (I_B)_(m) into I_B wherever the image stays
    inside the truncation (two-sidedness of the computed ideal)."""
    M = G.M
    md = G.max_degree if max_degree is None else max_degree
    rep = CheckReport("ideal closure")
    t = AxiomTally("u(n) I_B in I_B")
    dt = AxiomTally("D I_B in I_B")
    skipped = 0
    for m in range(md + 1):
        rows = G.ideal[m].sorted_rows()
        for u in range(M.C.dim):
            for target in range(0, md + 1):
                # deg u(n) = target - m
                shift = target - m
                n = -shift - 1 if u < M.dA else -shift
                for row in rows:
                    try:
                        r = G.reduce(M.apply((u, n), row))
                    except TruncationExceeded:
                        skipped += 1
                        continue
                    t.check(r, {}, u=u, n=n, degree=m, row=M.mono_label(min(row, key=G.rank_of[m].get)))
        if m + 1 <= md:
            for row in rows:
                dt.check(G.reduce(M.d_operator(row)), {}, degree=m)
    t.skip(skipped)
    rep.add(t)
    rep.add(dt)
    return rep


def check_lemma_e(M: VermaModule) -> CheckReport:
    """v(n)E in span E (n >= 0), D E0 in span E1, B(-1)E0 in A(-1)E1 + E1."""
    gens = Generators(M)
    rep = CheckReport("generator stability")
    span_e = _span(v for _, v in gens.all)
    span_e1 = _span(v for _, v in gens.E1)
    t = AxiomTally("v(n)E in span(E), n >= 0")
    for (lab, e), u in cartesian(gens.all, range(M.C.dim)):
        for n in range(0, 3):
            w = M.apply((u, n), e)
            t.check(span_e.reduce(w), {}, u=u, n=n, generator=lab)
    rep.add(t)
    t = AxiomTally("D E0 in span(E1)")
    for lab, e in gens.E0:
        t.check(span_e1.reduce(M.d_operator(e)), {}, generator=lab)
    rep.add(t)
    target = _span([*(M.apply((a, -1), e) for a in range(M.dA) for _, e in gens.E1), *(e for _, e in gens.E1)])
    t = AxiomTally("B(-1)E0 in A(-1)E1 + E1")
    for (lab, e), b in cartesian(gens.E0, range(M.dA, M.C.dim)):
        t.check(target.reduce(M.apply((b, -1), e)), {}, b=b, generator=lab)
    rep.add(t)
    return rep


def check_confluence(M: VermaModule, max_degree: int = 4) -> CheckReport:
    """Leftmost-first and rightmost-first rewriting of every length-3 product
    of negative modes of total degree <= max_degree agree, and agree with
    the module action on the vacuum."""
    modes = M.negative_modes(max_degree)
    rep = CheckReport("normal ordering")
    t = AxiomTally("left-first = right-first (length 3)")
    t2 = AxiomTally("word expansion = action on vacuum")
    for x, y, z in cartesian(modes, repeat=3):
        if M.degree(x) + M.degree(y) + M.degree(z) > max_degree:
            continue
        left = M.normal_order((x, y, z), "left")
        right = M.normal_order((x, y, z), "right")
        t.check(left, right, word=[M.label(x), M.label(y), M.label(z)])
        t2.check(left, M.apply_word((x, y, z), vacuum()), word=[M.label(x), M.label(y), M.label(z)])
    rep.add(t)
    rep.add(t2)
    return rep


def check_grading(G: GradedQuotient) -> CheckReport:
    """deg u(n)w = deg w + deg u(n) and parity additivity on every basis
    vector, for modes with target inside the truncation."""
    M = G.M
    rep = CheckReport("grading")
    t = AxiomTally("deg u(n)w = deg w + deg u(n)")
    p = AxiomTally("parity of u(n)w")
    for n in range(G.max_degree + 1):
        for w in G.basis[n]:
            pw = sum(M.parity(m) for m in w) % 2
            for u in range(M.C.dim):
                for target in range(G.max_degree + 1):
                    s = target - n
                    k = -s - 1 if u < M.dA else -s
                    r = M.apply((u, k), {w: ONE})
                    t.check({m: c for m, c in r.items() if M.mono_degree(m) != target}, {}, u=u, n=k, w=M.mono_label(w))
                    want = (pw + M.C.parities[u]) % 2
                    p.check({m: c for m, c in r.items() if sum(M.parity(x) for x in m) % 2 != want}, {},
                            u=u, n=k, w=M.mono_label(w))
    rep.add(t)
    rep.add(p)
    return rep


def _binom(m: int, i: int) -> Q:
    """Generalized binomial coefficient C(m, i) for integer m, i >= 0."""
    num = ONE
    for j in range(i):
        num *= (m - j)
    den = 1
    for j in range(1, i + 1):
        den *= j
    return num / den


def check_d_bracket(G: GradedQuotient) -> CheckReport:
    """[D, u(n)] = -n u(n-1) on every representative, inside the truncation."""
    M = G.M
    rep = CheckReport("D bracket")
    t = AxiomTally("[D, u(n)] = -n u(n-1)")
    for deg in range(G.max_degree + 1):
        for w in G.basis_vectors(deg):
            for u in range(M.C.dim):
                for target in range(G.max_degree):
                    s = target - deg
                    n = -s - 1 if u < M.dA else -s
                    x = G.act((u, n), w)
                    dw = G.d(w)
                    if x is None or dw is None:
                        t.skip()
                        continue
                    lhs = G.d(x)
                    if lhs is None:
                        t.skip()
                        continue
                    other = G.act((u, n), dw)
                    if other is None:
                        t.skip()
                        continue
                    lc_add(lhs, other, -ONE)
                    rhs = G.act((u, n - 1), w)
                    if rhs is None:
                        t.skip()
                        continue
                    t.check(lhs, lc_scale(rhs, Q(-n)), u=u, n=n, w=M.mono_label(next(iter(w))))
    rep.add(t)
    return rep


def _tconf_products(M: VermaModule, u: int, v: int) -> list[dict]:
    """[u_0 v, u_1 v] as C-vectors."""
    C = M.C
    return [C.prod0.get((u, v), {}), C.prod1.get((u, v), {})]


def _mode_of(M: VermaModule, vec: Mapping, n: int, w: Mapping, G: GradedQuotient):
    """(sum c_k e_k)(n) w in V_B; None when out of range."""
    out: dict = {}
    for k, c in vec.items():
        r = G.act((k, n), w)
        if r is None:
            return None
        lc_add(out, r, c)
    return out


def verify_borcherds(G: GradedQuotient, pairs: Iterable[tuple[int, int]] | None = None,
                     mode_range: Sequence[int] = range(-2, 3), max_degree: int | None = None) -> CheckReport:
    """Commutator formula [u_m, v_n] w = sum_i C(m,i) (u_i v)_{m+n-i} w with
    i in {0, 1}, iterate formula for m in {0, 1}, and skew-symmetry
    u_n v = eps sum_i (-1)^{n+1+i}/i! D^i (v_{n+i} u), on representatives of
    degree <= max_degree.  Instances whose intermediate vectors leave the
    built range are counted as skipped."""
    M = G.M
    md = G.max_degree if max_degree is None else min(max_degree, G.max_degree)
    dim = M.C.dim
    pairs = list(pairs) if pairs is not None else list(cartesian(range(dim), repeat=2))
    rep = CheckReport("Borcherds identities")
    comm = AxiomTally("commutator formula")
    it = AxiomTally("iterate formula (m = 0, 1)")
    skew = AxiomTally("skew-symmetry on generators")
    par = M.C.parities
    ws = [(deg, w) for deg in range(md + 1) for w in G.basis_vectors(deg)]

    for (u, v), m, n in cartesian(pairs, mode_range, mode_range):
        eps = -1 if par[u] and par[v] else 1
        prods = _tconf_products(M, u, v)
        for deg, w in ws:
            vw = G.act((v, n), w)
            uw = G.act((u, m), w)
            if vw is None or uw is None:
                comm.skip()
                continue
            a = G.act((u, m), vw)
            b = G.act((v, n), uw)
            if a is None or b is None:
                comm.skip()
                continue
            lhs = dict(a)
            lc_add(lhs, b, -eps)
            rhs: dict = {}
            ok = True
            for i, pv in enumerate(prods):
                if not pv:
                    continue
                r = _mode_of(M, pv, m + n - i, w, G)
                if r is None:
                    ok = False
                    break
                lc_add(rhs, r, _binom(m, i))
            if not ok:
                comm.skip()
                continue
            comm.check(lhs, rhs, u=u, v=v, m=m, n=n, w=M.mono_label(next(iter(w))))

    for (u, v), mm, n in cartesian(pairs, (0, 1), mode_range):
        eps = -1 if par[u] and par[v] else 1
        pv = _tconf_products(M, u, v)[mm]
        for deg, w in ws:
            lhs = _mode_of(M, pv, n, w, G)
            if lhs is None:
                it.skip()
                continue
            rhs: dict = {}
            ok = True
            # i runs while u_{m-i} v_{n+i} w or v_{m+n-i} u_i w can be nonzero
            for i in range(0, md + 3 + abs(n) + 2):
                c = _binom(mm, i) * (-1) ** i
                if not c:
                    continue
                x = G.act((v, n + i), w)
                y = G.act((u, i), w)
                if x is None or y is None:
                    ok = False
                    break
                t1 = G.act((u, mm - i), x) if x else {}
                t2 = G.act((v, mm + n - i), y) if y else {}
                if t1 is None or t2 is None:
                    ok = False
                    break
                lc_add(rhs, t1, c)
                lc_add(rhs, t2, -c * eps * (-1) ** mm)
            if not ok:
                it.skip()
                continue
            it.check(lhs, rhs, u=u, v=v, m=mm, n=n, w=M.mono_label(next(iter(w))))

    # skew symmetry on the generators themselves: u_n v with v = v(-1)1
    for (u, v), n in cartesian(pairs, mode_range):
        eps = -1 if par[u] and par[v] else 1
        su, sv = G.reduce(M.state(u)), G.reduce(M.state(v))
        lhs = G.act((u, n), sv) if sv else {}
        if lhs is None:
            skew.skip()
            continue
        rhs: dict = {}
        ok = True
        fact = 1
        for i in range(0, md + 3):
            if i:
                fact *= i
            x = G.act((v, n + i), su) if su else {}
            if x is None:
                ok = False
                break
            for _ in range(i):
                x = G.d(x) if x else {}
                if x is None:
                    break
            if x is None:
                ok = False
                break
            lc_add(rhs, x, Q(1 if (n + 1 + i) % 2 == 0 else -1, fact) * eps)
        if not ok:
            skew.skip()
            continue
        skew.check(lhs, rhs, u=u, v=v, n=n)

    rep.add(comm)
    rep.add(it)
    rep.add(skew)
    return rep

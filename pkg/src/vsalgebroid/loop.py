"""The loop Lie superalgebra L(A+B) = (A+B) (x) C[t, 1/t] and its quotient by
the image of dhat = d (x) 1 + 1 (x) d/dt.

Elements are dicts ``{(index, power): Q}`` over the combined basis of a
:class:`TruncatedConformal` (A first, then B).  ``u(n)`` stands for
``u (x) t^n``.  Degrees: ``deg a(n) = -n-1`` and ``deg b(n) = -n``.
"""
from __future__ import annotations

import random
from itertools import product as cartesian
from typing import Iterable, Mapping

from .exact import ONE, ZERO, Echelon, Q, lc_add, lc_format, lc_scale
from .report import AxiomTally, CheckReport
from .tconf import TruncatedConformal

Mode = tuple  # (index, power)


class WindowExceeded(ValueError):
    pass


def mode_degree(C: TruncatedConformal, idx: int, n: int) -> int:
    return -n - 1 if idx < C.dA else -n


def mode_label(C: TruncatedConformal, key: Mode) -> str:
    idx, n = key
    return f"{C.labels[idx]}({n})"


class LoopElement:
    """Finite sum of u (x) t^n; a thin wrapper around the term dict."""

    __slots__ = ("C", "terms")

    def __init__(self, C: TruncatedConformal, terms: Mapping | None = None):
        self.C = C
        self.terms = {k: c for k, c in (terms or {}).items() if c}

    @classmethod
    def mode(cls, C: TruncatedConformal, idx: int, n: int, coeff=ONE) -> "LoopElement":
        return cls(C, {(idx, n): Q(coeff)})

    def degree(self) -> int | None:
        degs = {mode_degree(self.C, i, n) for i, n in self.terms}
        if len(degs) > 1:
            raise ValueError("element is not homogeneous in degree")
        return degs.pop() if degs else None

    def parity(self) -> int | None:
        ps = {self.C.parities[i] for i, _ in self.terms}
        if len(ps) > 1:
            raise ValueError("element is not homogeneous in parity")
        return ps.pop() if ps else None

    def __add__(self, other: "LoopElement") -> "LoopElement":
        out = dict(self.terms)
        lc_add(out, other.terms)
        return LoopElement(self.C, out)

    def __sub__(self, other: "LoopElement") -> "LoopElement":
        out = dict(self.terms)
        lc_add(out, other.terms, -ONE)
        return LoopElement(self.C, out)

    def __rmul__(self, c) -> "LoopElement":
        return LoopElement(self.C, lc_scale(self.terms, Q(c)))

    def __eq__(self, other) -> bool:
        return isinstance(other, LoopElement) and self.terms == other.terms

    def __repr__(self):
        return f"LoopElement({lc_format(self.terms, lambda k: mode_label(self.C, k))})"


def _terms(x) -> Mapping:
    return x.terms if isinstance(x, LoopElement) else x


def bracket_modes(C: TruncatedConformal, k1: Mode, k2: Mode) -> dict:
    """[u(m), v(n)] = (u_0 v)(m+n) + m (u_1 v)(m+n-1) in L(A+B)."""
    (u, m), (v, n) = k1, k2
    out: dict = {}
    for w, c in C.prod0.get((u, v), {}).items():
        out[(w, m + n)] = c
    if m:
        for w, c in C.prod1.get((u, v), {}).items():
            lc_add(out, {(w, m + n - 1): c * m})
    return out


def loop_bracket(C: TruncatedConformal, x, y) -> LoopElement:
    """Bilinear extension of the mode bracket (no reduction)."""
    out: dict = {}
    for k1, c1 in _terms(x).items():
        for k2, c2 in _terms(y).items():
            b = bracket_modes(C, k1, k2)
            if b:
                lc_add(out, b, c1 * c2)
    return LoopElement(C, out)


def dhat(C: TruncatedConformal, a: int, n: int) -> dict:
    """dhat(a (x) t^n) = (da) (x) t^n + n a (x) t^(n-1)."""
    out = {(k, n): c for k, c in C.partial.get(a, {}).items()}
    if n:
        out[(a, n - 1)] = Q(n)
    return out


class LoopQuotient:
    """The quotient by dhat L(A), one row-reduced relation space per degree.

    ``window`` is the range of powers used for sampling basis elements;
    reduction is available on the wider range ``limit`` (by default large
    enough for brackets of three window elements) and raises
    :class:`WindowExceeded` beyond it.  Column order puts A before B, so a
    mode a(m), m != -1, is always rewritten through (da)(m+1), and B-modes
    of power 0 are reduced modulo the span of dA.
    """

    def __init__(self, C: TruncatedConformal, window: tuple[int, int] = (-4, 4), limit: tuple[int, int] | None = None):
        lo, hi = window
        if lo > hi:
            raise ValueError(f"empty window {window}")
        self.C = C
        self.window = (lo, hi)
        self.limit = limit or (3 * lo - 3, 3 * hi + 3)
        self._per_degree: dict[int, Echelon] = {}
        self._reduce_cache: dict = {}
        self._bracket_cache: dict = {}

    def _order(self, key: Mode):
        idx, _ = key
        return (0 if idx < self.C.dA else 1, idx)

    def degree_relations(self, deg: int) -> Echelon:
        """Row-reduced span of dhat(a (x) t^n) with degree ``deg`` (n = -deg)."""
        ech = self._per_degree.get(deg)
        if ech is None:
            ech = Echelon(self._order)
            for a in range(self.C.dA):
                ech.add(dhat(self.C, a, -deg))
            self._per_degree[deg] = ech
        return ech

    def _check_power(self, n: int):
        lo, hi = self.limit
        if not lo <= n <= hi:
            raise WindowExceeded(f"power {n} outside the reduction range [{lo}, {hi}]")

    def reduce_mode(self, key: Mode) -> dict:
        r = self._reduce_cache.get(key)
        if r is None:
            idx, n = key
            self._check_power(n)
            r = self.degree_relations(mode_degree(self.C, idx, n)).reduce({key: ONE})
            self._reduce_cache[key] = r
        return r

    def reduce(self, x) -> dict:
        out: dict = {}
        for key, c in _terms(x).items():
            lc_add(out, self.reduce_mode(key), c)
        return out

    def is_canonical(self, key: Mode) -> bool:
        r = self.reduce_mode(key)
        return r == {key: ONE}

    def bracket(self, k1: Mode, k2: Mode) -> dict:
        """Reduced bracket of two canonical modes (memoized)."""
        key = (k1, k2)
        r = self._bracket_cache.get(key)
        if r is None:
            r = self.reduce(bracket_modes(self.C, k1, k2))
            self._bracket_cache[key] = r
        return r

    def bracket_vectors(self, x: Mapping, y: Mapping) -> dict:
        out: dict = {}
        for k1, c1 in x.items():
            for k2, c2 in y.items():
                b = self.bracket(k1, k2)
                if b:
                    lc_add(out, b, c1 * c2)
        return out

    def basis(self, powers: Iterable[int] | None = None) -> list[Mode]:
        """Canonical basis modes with power in ``powers`` (default: window)."""
        if powers is None:
            powers = range(self.window[0], self.window[1] + 1)
        out = []
        for n in powers:
            for idx in range(self.C.dim):
                if self.is_canonical((idx, n)):
                    out.append((idx, n))
        return out

    def degree(self, key: Mode) -> int:
        return mode_degree(self.C, *key)

    def parity(self, key: Mode) -> int:
        return self.C.parities[key[0]]

    def negative_basis(self, max_degree: int) -> list[Mode]:
        """Canonical modes of the subalgebra of negative powers with degree
        at most ``max_degree``: a(-1) and b(n), n <= -1."""
        out = []
        for n in range(-1, -max_degree - 2, -1):
            for idx in range(self.C.dim):
                key = (idx, n)
                if self.degree(key) <= max_degree and self.is_canonical(key):
                    out.append(key)
        return sorted(out, key=lambda k: (k[1], k[0]))


def reduce_mod_dhat(x, Q_: LoopQuotient) -> LoopElement:
    return LoopElement(Q_.C, Q_.reduce(x))


def check_degree_additivity(Q_: LoopQuotient) -> CheckReport:
    rep = CheckReport("loop algebra grading")
    t = AxiomTally("deg [x,y] = deg x + deg y")
    basis = Q_.basis()
    for k1, k2 in cartesian(basis, repeat=2):
        want = Q_.degree(k1) + Q_.degree(k2)
        bad = {k: c for k, c in bracket_modes(Q_.C, k1, k2).items() if Q_.degree(k) != want}
        t.check(bad, {}, x=k1, y=k2)
    rep.add(t)
    # (da)(n) and a(n-1) both sit in degree -n = deg a(n) + 1
    d = AxiomTally("dhat is homogeneous: both summands of dhat(a(n)) have degree -n")
    lo, hi = Q_.window
    for a, n in cartesian(range(Q_.C.dA), range(lo, hi + 1)):
        want = -n
        d.check({k: c for k, c in dhat(Q_.C, a, n).items() if Q_.degree(k) != want}, {}, a=a, n=n)
    rep.add(d)
    return rep


def check_loop_jacobi(Q_: LoopQuotient, seed: int = 0, exhaustive_limit: int = 10 ** 6,
                      samples: int = 20000) -> CheckReport:
    """Skew-supersymmetry on all basis pairs and super Jacobi on basis
    triples of the window, modulo dhat L(A).  Exhaustive when
    ``(dim C * window size)^3 <= exhaustive_limit``, else ``samples`` seeded
    uniform triples."""
    C = Q_.C
    basis = Q_.basis()
    p = {k: Q_.parity(k) for k in basis}
    rep = CheckReport("loop Lie superalgebra")
    size = C.dim * (Q_.window[1] - Q_.window[0] + 1)
    exhaustive = size ** 3 <= exhaustive_limit
    rep.info.update({"basis": len(basis), "exhaustive": exhaustive, "window": list(Q_.window)})

    skew = AxiomTally("skew-supersymmetry mod dhat")
    for k1, k2 in cartesian(basis, repeat=2):
        s = -1 if p[k1] and p[k2] else 1
        skew.check(Q_.bracket(k1, k2), lc_scale(Q_.bracket(k2, k1), -s), x=k1, y=k2)
    rep.add(skew)

    if exhaustive:
        triples: Iterable = cartesian(basis, repeat=3)
    else:
        rng = random.Random(seed)
        triples = [(rng.choice(basis), rng.choice(basis), rng.choice(basis)) for _ in range(samples)]
        rep.info["samples"] = samples
        rep.info["seed"] = seed
    jac = AxiomTally("super Jacobi mod dhat", note="" if exhaustive else f"sampled, seed {seed}")
    unit = {}
    for x, y, z in triples:
        ux = unit.setdefault(x, {x: ONE})
        uz = unit.setdefault(z, {z: ONE})
        lhs = Q_.bracket_vectors(ux, Q_.bracket(y, z))
        rhs = Q_.bracket_vectors(Q_.bracket(x, y), uz)
        s = -1 if p[x] and p[y] else 1
        lc_add(rhs, Q_.bracket_vectors({y: ONE}, Q_.bracket(x, z)), s)
        jac.check(lhs, rhs, x=x, y=y, z=z)
    rep.add(jac)
    return rep

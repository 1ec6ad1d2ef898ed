"""Exact rational scalars, parity bookkeeping, sparse super vectors and
row-reduction based subspaces.

Everything downstream (algebra tables, loop algebra, PBW vectors) is built on
plain ``dict`` linear combinations ``{key: Q}`` with no stored zeros; the
helpers here keep that invariant.  :class:`SuperVector` and :class:`Subspace`
are the typed, immutable front-ends used at API boundaries.
"""
from __future__ import annotations

import enum
import re
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Mapping

try:  # gmpy2's mpq is an order of magnitude faster than Fraction
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

ZERO = Q(0)
ONE = Q(1)

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


class BadRational(ValueError):
    pass


class MixedParity(ValueError):
    pass


class SpaceMismatch(ValueError):
    pass


def rational(x: Any) -> Q:
    """Coerce ``x`` to an exact rational.

    Accepts ints, Fractions, mpq and strings ``"p/q"`` / ``"p"``.  Floats are
    refused: a binary float is never what a structure constant means.
    """
    if isinstance(x, bool):
        raise BadRational(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Q(x)
    if isinstance(x, str):
        m = _RATIONAL_RE.match(x)
        if not m:
            raise BadRational(f"malformed rational {x!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise BadRational(f"zero denominator in {x!r}")
        return Q(num, den)
    if isinstance(x, Fraction):
        return Q(x.numerator, x.denominator)
    if type(x) is type(ONE):
        return x
    if isinstance(x, float):
        raise BadRational(f"floats are not accepted as exact rationals: {x!r}")
    try:
        num, den = x.numerator, x.denominator
    except AttributeError:
        raise BadRational(f"not a rational: {x!r}") from None
    return Q(int(num), int(den))


def format_rational(q: Q) -> str:
    q = rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class Parity(enum.IntEnum):
    EVEN = 0
    ODD = 1

    def __add__(self, other):  # Z/2 addition
        return Parity((int(self) + int(other)) % 2)

    __radd__ = __add__


def sign(p: int, q: int) -> int:
    """Koszul sign (-1)^(p*q) for parities p, q in {0, 1}."""
    return -1 if (p and q) else 1


# ---------------------------------------------------------------------------
# dict-based linear combinations


def lc_add(target: dict, other: Mapping, coeff=ONE) -> dict:
    """In place ``target += coeff * other``; drops cancelled entries."""
    if not coeff:
        return target
    for k, v in other.items():
        nv = target.get(k, ZERO) + coeff * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)
    return target


def lc_add_term(target: dict, key, coeff) -> dict:
    if not coeff:
        return target
    nv = target.get(key, ZERO) + coeff
    if nv:
        target[key] = nv
    else:
        target.pop(key, None)
    return target


def lc_scale(x: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: c * v for k, v in x.items()}


def lc_sub(x: Mapping, y: Mapping) -> dict:
    out = dict(x)
    return lc_add(out, y, -ONE)


def lc_clean(x: Mapping) -> dict:
    return {k: rational(v) for k, v in x.items() if v}


def lc_format(x: Mapping, label: Callable[[Any], str] | None = None) -> dict:
    """JSON-friendly rendering ``{label(key): "p/q"}`` in sorted key order."""
    label = label or str
    return {label(k): format_rational(v) for k, v in sorted(x.items(), key=lambda kv: _sort_key(kv[0]))}


def _sort_key(k):
    return (0, k) if isinstance(k, int) else (1, repr(k))


# ---------------------------------------------------------------------------
# typed vectors


class IndexedSpace:
    """A finite-dimensional super vector space with a fixed ordered basis."""

    __slots__ = ("name", "parities", "labels")

    def __init__(self, name: str, parities: Iterable[int], labels: Iterable[str] | None = None):
        self.name = name
        self.parities = tuple(int(p) for p in parities)
        if any(p not in (0, 1) for p in self.parities):
            raise ValueError(f"parities must be 0/1, got {self.parities}")
        self.labels = tuple(labels) if labels is not None else tuple(f"{name}{i}" for i in range(len(self.parities)))
        if len(self.labels) != len(self.parities):
            raise ValueError("labels and parities differ in length")

    @property
    def dim(self) -> int:
        return len(self.parities)

    def __eq__(self, other):
        return isinstance(other, IndexedSpace) and (self.name, self.parities) == (other.name, other.parities)

    def __hash__(self):
        return hash((self.name, self.parities))

    def __repr__(self):
        return f"IndexedSpace({self.name!r}, dim={self.dim})"

    def basis_vector(self, i: int) -> "SuperVector":
        return SuperVector(self, {i: ONE})

    def zero(self) -> "SuperVector":
        return SuperVector(self, {})


class SuperVector:
    """Sparse exact linear combination of the basis of an :class:`IndexedSpace`."""

    __slots__ = ("space", "_entries")

    def __init__(self, space: IndexedSpace, entries: Mapping[int, Any] | None = None):
        self.space = space
        clean = {}
        for k, v in (entries or {}).items():
            if not 0 <= k < space.dim:
                raise IndexError(f"index {k} out of range for {space!r}")
            v = rational(v)
            if v:
                clean[k] = v
        self._entries = clean

    @classmethod
    def from_list(cls, space: IndexedSpace, coords: Iterable[Any]) -> "SuperVector":
        return cls(space, {i: c for i, c in enumerate(coords)})

    @property
    def entries(self) -> dict:
        return dict(self._entries)

    def __getitem__(self, i: int) -> Q:
        return self._entries.get(i, ZERO)

    def items(self):
        return sorted(self._entries.items())

    def is_zero(self) -> bool:
        return not self._entries

    def parity(self) -> int | None:
        """Parity of a homogeneous vector; ``None`` for the zero vector."""
        ps = {self.space.parities[i] for i in self._entries}
        if not ps:
            return None
        if len(ps) > 1:
            raise MixedParity(f"vector {self!r} is not parity-homogeneous")
        return ps.pop()

    def _check(self, other: "SuperVector"):
        if not isinstance(other, SuperVector):
            return NotImplemented
        if other.space != self.space:
            raise SpaceMismatch(f"{self.space!r} vs {other.space!r}")

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return SuperVector(self.space, lc_add(dict(self._entries), other._entries))

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return SuperVector(self.space, lc_add(dict(self._entries), other._entries, -ONE))

    def __neg__(self):
        return SuperVector(self.space, lc_scale(self._entries, -ONE))

    def __mul__(self, c):
        return SuperVector(self.space, lc_scale(self._entries, rational(c)))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, SuperVector):
            return NotImplemented
        return self.space == other.space and self._entries == other._entries

    def __hash__(self):
        return hash((self.space, frozenset(self._entries.items())))

    def __repr__(self):
        if not self._entries:
            return "0"
        terms = [f"{format_rational(c)}*{self.space.labels[i]}" for i, c in self.items()]
        return " + ".join(terms)


def epsilon(u, v) -> Q:
    """The sign (-1)^{|u||v|} of two homogeneous elements.

    ``u`` and ``v`` may be :class:`SuperVector` or plain parities.  A zero
    vector counts as homogeneous of either parity (and the sign is then
    irrelevant), so it contributes +1.
    """
    pu = u.parity() if isinstance(u, SuperVector) else int(u)
    pv = v.parity() if isinstance(v, SuperVector) else int(v)
    if pu is None or pv is None:
        return ONE
    return -ONE if (pu and pv) else ONE


# ---------------------------------------------------------------------------
# row reduction


class Echelon:
    """Incremental sparse reduced row-echelon form over Q.

    Columns are arbitrary hashable keys; ``order`` maps a key to a sortable
    rank and the pivot of a row is its lowest-ranked column.  Rows are kept
    fully reduced against each other, so membership and projection onto the
    non-pivot complement are a single pass.
    """

    def __init__(self, order: Callable[[Hashable], Any] | None = None):
        self.order = order or (lambda k: k)
        self.rows: dict[Hashable, dict] = {}  # pivot -> row (pivot coeff 1)
        self._col_rows: dict[Hashable, set] = {}  # column -> pivots of rows using it

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Mapping) -> dict:
        """Canonical representative of ``v`` modulo the span (no pivot columns)."""
        out = dict(v)
        rows = self.rows
        for p in [k for k in out if k in rows]:
            c = out.get(p)
            if c:
                lc_add(out, rows[p], -c)
        return out

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def add(self, v: Mapping) -> bool:
        """Insert ``v``; return True if the rank grew."""
        r = self.reduce(v)
        if not r:
            return False
        order = self.order
        p = min(r, key=order)
        inv = ONE / r[p]
        r = {k: c * inv for k, c in r.items()}
        # eliminate p from existing rows
        users = self._col_rows.pop(p, None)
        if users:
            for q in users:
                row = self.rows[q]
                c = row.get(p)
                if not c:
                    continue
                before = set(row)
                lc_add(row, r, -c)
                after = set(row)
                for k in before - after:
                    s = self._col_rows.get(k)
                    if s is not None:
                        s.discard(q)
                for k in after - before:
                    self._col_rows.setdefault(k, set()).add(q)
        self.rows[p] = r
        for k in r:
            if k != p:
                self._col_rows.setdefault(k, set()).add(p)
        return True

    def extend(self, vectors: Iterable[Mapping]) -> int:
        n = 0
        for v in vectors:
            n += self.add(v)
        return n

    def pivots(self) -> list:
        return sorted(self.rows, key=self.order)

    def sorted_rows(self) -> list[dict]:
        return [self.rows[p] for p in self.pivots()]

    def copy(self) -> "Echelon":
        e = Echelon(self.order)
        e.rows = {p: dict(r) for p, r in self.rows.items()}
        e._col_rows = {k: set(s) for k, s in self._col_rows.items()}
        return e


class Subspace:
    """An exactly represented subspace of an :class:`IndexedSpace`."""

    def __init__(self, space: IndexedSpace, echelon: Echelon):
        self.space = space
        self._ech = echelon

    @property
    def dim(self) -> int:
        return self._ech.rank

    @property
    def pivot_columns(self) -> list[int]:
        return self._ech.pivots()

    @property
    def rref_rows(self) -> list[SuperVector]:
        return [SuperVector(self.space, r) for r in self._ech.sorted_rows()]

    def contains(self, w: SuperVector) -> bool:
        if w.space != self.space:
            raise SpaceMismatch(f"{w.space!r} vs {self.space!r}")
        return self._ech.contains(w._entries)

    __contains__ = contains

    def reduce(self, w: SuperVector) -> SuperVector:
        """Representative of ``w`` supported on non-pivot coordinates."""
        if w.space != self.space:
            raise SpaceMismatch(f"{w.space!r} vs {self.space!r}")
        return SuperVector(self.space, self._ech.reduce(w._entries))

    def complement_indices(self) -> list[int]:
        piv = set(self._ech.rows)
        return [i for i in range(self.space.dim) if i not in piv]

    def section(self, w: SuperVector) -> dict[int, Q]:
        """Coordinates of the class of ``w`` in the quotient basis given by
        :meth:`complement_indices`."""
        return self.reduce(w).entries

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.space!r})"


def span(vectors: Iterable[SuperVector], space: IndexedSpace | None = None) -> Subspace:
    """Reduced row-echelon basis of the span; lowest index wins as pivot."""
    vectors = list(vectors)
    if space is None:
        if not vectors:
            raise ValueError("span of no vectors needs an explicit space")
        space = vectors[0].space
    ech = Echelon()
    for v in vectors:
        if v.space != space:
            raise SpaceMismatch(f"{v.space!r} vs {space!r}")
        ech.add(v._entries)
    return Subspace(space, ech)


def quotient_dimension(ambient_dim: int, sub: Subspace) -> int:
    if sub.space.dim != ambient_dim:
        raise SpaceMismatch(f"subspace lives in dimension {sub.space.dim}, not {ambient_dim}")
    return ambient_dim - sub.dim

"""Object model of the bounded derived category of coherent sheaves on P1.

Coherent sheaves on the projective line split into line bundles O(n) and
indecomposable torsion sheaves T(x, d) of length d at a point x; because
the category has homological dimension 1, every derived object is a
finite direct sum of shifted indecomposables.  `DerivedObject` is that
normal form: a multiset of shifted indecomposables with multiplicities.

The Hom rule table is classical:

    Ext^0(O(a), O(b))    = max(b - a + 1, 0)
    Ext^1(O(a), O(b))    = max(a - b - 1, 0)
    Ext^0(O(a), T(x,d))  = d        Ext^1(O(a), T(x,d))  = 0
    Ext^0(T(x,d), O(a))  = 0        Ext^1(T(x,d), O(a))  = d
    Ext^i(T(x,d), T(y,e)) = min(d, e) if x == y (i = 0, 1), else 0

and in every other degree zero.  The table is pinned as data together
with an Euler-form cross-check so the model is self-checking.

Note T(x, 1) is the skyscraper at x; T(x, d) with d > 1 is its unique
indecomposable length-d thickening (of degree d).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, Union

from .slopes import K0Class

_LABEL_RE = re.compile(r"[A-Za-z0-9]+\Z")


@dataclass(frozen=True)
class Point:
    """A point of P1: an opaque label plus its position in the point order.

    Points compare by (order_index, label), so leaving order_index at 0
    gives the default lexicographic order on labels.  All points of one
    session should be produced by the same `PointOrder`.
    """

    label: str
    order_index: int = 0

    def __post_init__(self):
        if not _LABEL_RE.match(self.label):
            raise ValueError(f"point label must be letters/digits, got {self.label!r}")

    def key(self):
        return (self.order_index, self.label)

    def __lt__(self, other: "Point"):
        return self.key() < other.key()

    def __repr__(self):
        return self.label


class PointOrder:
    """A session's point universe: labels with a fixed total order."""

    def __init__(self, labels: Sequence[str]):
        if len(set(labels)) != len(labels):
            raise ValueError("point labels must be unique")
        self._points = {lbl: Point(lbl, i) for i, lbl in enumerate(labels)}
        self._labels = tuple(labels)

    @property
    def labels(self) -> tuple[str, ...]:
        return self._labels

    def point(self, label: str) -> Point:
        try:
            return self._points[label]
        except KeyError:
            raise KeyError(f"undeclared point label {label!r}") from None

    def points(self) -> tuple[Point, ...]:
        return tuple(self._points[lbl] for lbl in self._labels)

    def __contains__(self, label: str) -> bool:
        return label in self._points

    @staticmethod
    def lexicographic(labels: Sequence[str]) -> "PointOrder":
        return PointOrder(sorted(set(labels)))


# --- indecomposables --------------------------------------------------------

@dataclass(frozen=True)
class Line:
    """The line bundle O(n)."""

    n: int


@dataclass(frozen=True)
class Torsion:
    """The indecomposable torsion sheaf of length d >= 1 at a point."""

    x: Point
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"torsion length must be >= 1, got {self.d}")


Indec = Union[Line, Torsion]


@dataclass(frozen=True)
class ShiftedIndec:
    """An indecomposable placed in homological degree -shift (i.e. base[shift])."""

    base: Indec
    shift: int = 0

    def shifted(self, n: int) -> "ShiftedIndec":
        return ShiftedIndec(self.base, self.shift + n)

    def key(self):
        # canonical sort: shift, then lines before torsion, then degree
        # resp. (point order, length)
        if isinstance(self.base, Line):
            return (self.shift, 0, (self.base.n,))
        return (self.shift, 1, (*self.base.x.key(), self.base.d))

    def k0(self) -> K0Class:
        sign = -1 if self.shift % 2 else 1
        if isinstance(self.base, Line):
            return K0Class((sign, sign * self.base.n))
        return K0Class((0, sign * self.base.d))

    def render(self) -> str:
        if isinstance(self.base, Line):
            s = f"O({self.base.n})"
        else:
            s = f"T({self.base.x.label},{self.base.d})"
        if self.shift != 0:
            s += f"[{self.shift}]"
        return s

    def __repr__(self):
        return self.render()


# --- normal forms -----------------------------------------------------------

@dataclass(frozen=True)
class DerivedObject:
    """Normal form of a derived object: shifted indecomposables with multiplicities.

    The term list is canonically sorted and free of zero multiplicities;
    the zero object is the empty sum.
    """

    terms: tuple[tuple[ShiftedIndec, int], ...] = ()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def multiplicity(self, t: ShiftedIndec) -> int:
        for s, m in self.terms:
            if s == t:
                return m
        return 0

    def summands(self) -> Iterator[tuple[ShiftedIndec, int]]:
        return iter(self.terms)

    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.terms)

    def __add__(self, other: "DerivedObject") -> "DerivedObject":
        return normalize(list(self.terms) + list(other.terms))

    def __rmul__(self, m: int) -> "DerivedObject":
        if m < 0:
            raise ValueError("multiplicities must be >= 0")
        if m == 0:
            return ZERO
        return DerivedObject(tuple((t, m * k) for t, k in self.terms))

    def shift(self, n: int) -> "DerivedObject":
        return DerivedObject(tuple(sorted(((t.shifted(n), m) for t, m in self.terms),
                                          key=lambda tm: tm[0].key())))

    def k0(self) -> K0Class:
        total = K0Class((0, 0))
        for t, m in self.terms:
            total = total + m * t.k0()
        return total

    def render(self) -> str:
        if self.is_zero:
            return "0"
        parts = []
        for t, m in self.terms:
            parts.append(t.render() if m == 1 else f"{m}*{t.render()}")
        return " + ".join(parts)

    def __repr__(self):
        return self.render()


ZERO = DerivedObject()


def normalize(pairs: Iterable[tuple[ShiftedIndec, int]]) -> DerivedObject:
    """Merge, sort and drop zeros; the normal form of a formal sum."""
    acc: dict[ShiftedIndec, int] = {}
    for t, m in pairs:
        if m < 0:
            raise ValueError("multiplicities must be >= 0")
        if m:
            acc[t] = acc.get(t, 0) + m
    items = sorted(acc.items(), key=lambda tm: tm[0].key())
    return DerivedObject(tuple(items))


def direct_sum(*objects: DerivedObject) -> DerivedObject:
    total = ZERO
    for x in objects:
        total = total + x
    return total


def shift(x: DerivedObject, n: int) -> DerivedObject:
    return x.shift(n)


def k0_class(x: DerivedObject) -> K0Class:
    return x.k0()


def line(n: int, shift: int = 0, mult: int = 1) -> DerivedObject:
    """Convenience constructor: mult * O(n)[shift]."""
    return normalize([(ShiftedIndec(Line(n), shift), mult)])


def torsion(x: Point | str, d: int = 1, shift: int = 0, mult: int = 1) -> DerivedObject:
    """Convenience constructor: mult * T(x, d)[shift]."""
    pt = x if isinstance(x, Point) else Point(x)
    return normalize([(ShiftedIndec(Torsion(pt, d), shift), mult)])


# --- Hom dimensions ---------------------------------------------------------

def ext_dim(a: Indec, b: Indec, i: int) -> int:
    """dim Ext^i between two sheaves, from the rule table."""
    if i not in (0, 1):
        return 0
    if isinstance(a, Line) and isinstance(b, Line):
        if i == 0:
            return max(b.n - a.n + 1, 0)
        return max(a.n - b.n - 1, 0)
    if isinstance(a, Line) and isinstance(b, Torsion):
        return b.d if i == 0 else 0
    if isinstance(a, Torsion) and isinstance(b, Line):
        return a.d if i == 1 else 0
    # torsion vs torsion
    if a.x == b.x:
        return min(a.d, b.d)
    return 0


def hom_dim(a: ShiftedIndec, b: ShiftedIndec, q: int) -> int:
    """dim Hom^q(a, b) = dim Ext^(q + shift(b) - shift(a)) of the bases."""
    return ext_dim(a.base, b.base, q + b.shift - a.shift)


@dataclass(frozen=True)
class HomProfile:
    """The graded Hom dimensions between two objects, by degree."""

    entries: tuple[tuple[int, int], ...] = ()  # sorted (degree, dim), dim > 0

    @staticmethod
    def from_dict(d: dict[int, int]) -> "HomProfile":
        return HomProfile(tuple(sorted((q, n) for q, n in d.items() if n)))

    def __getitem__(self, q: int) -> int:
        for degree, n in self.entries:
            if degree == q:
                return n
        return 0

    def items(self):
        return self.entries

    @property
    def is_zero(self) -> bool:
        return not self.entries

    def vanishes_at_and_below(self, q0: int = 0) -> bool:
        return all(q > q0 for q, _ in self.entries)

    def euler(self) -> int:
        return sum(n if q % 2 == 0 else -n for q, n in self.entries)

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def __repr__(self):
        return "{" + ", ".join(f"{q}: {n}" for q, n in self.entries) + "}"


def hom_profile(x: DerivedObject, y: DerivedObject) -> HomProfile:
    """Bilinear extension of `hom_dim` over direct sums."""
    acc: dict[int, int] = {}
    for t, m in x.summands():
        for s, k in y.summands():
            # Ext lives in degrees 0 and 1, so Hom^q is supported at
            # q = shift gap and shift gap + 1.
            gap = t.shift - s.shift
            for q in (gap, gap + 1):
                n = hom_dim(t, s, q)
                if n:
                    acc[q] = acc.get(q, 0) + m * k * n
    return HomProfile.from_dict(acc)


def euler_form(a: K0Class, b: K0Class) -> int:
    """The Riemann-Roch pairing on P1: rk*rk' + rk*deg' - deg*rk'."""
    return a.rank * b.rank + a.rank * b.degree - a.degree * b.rank

"""Reduced model of the derived category of coherent sheaves on an elliptic curve.

Semistable building blocks are stable classes (r, d, x): coprime rank
and degree plus a point of the curve (the moduli of stable bundles of
each slope is a copy of the curve; skyscrapers are the slope-infinity
classes).  Derived objects are finite formal sums of shifted classes,
the normal form being justified by homological dimension one.

Hom dimensions between stable classes are determined by their slopes:

    E = F                 : 1 in both degrees (simple, trivial canonical bundle)
    mu(E) < mu(F)         : hom = r_E d_F - d_E r_F, ext1 = 0
    mu(E) > mu(F)         : hom = 0, ext1 = d_E r_F - r_E d_F
    mu(E) = mu(F), E != F : 0 in both degrees

Indecomposable semistables of non-coprime type (iterated
self-extensions of a stable class) are represented by multiples of the
class: correct at the level of K-theory and slopes, which is all the
filtration and tilting machinery uses; the indecomposability defect is
a documented limitation.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import QOutOfRangeError
from .p1 import HomProfile, Point
from .slopes import ExtendedRational, K0Class, Ordering, PLUS_INFINITY
from .stability import (EllipticSlope, HNFiltration, StabilityFamily, TermRewrite, Window)


@dataclass(frozen=True)
class StableClass:
    """A stable sheaf class: rank r >= 0, degree d with gcd(r, d) = 1, point x.

    Rank 0 forces degree 1 (the skyscraper at x); positive rank allows
    any coprime degree.
    """

    r: int
    d: int
    x: Point

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("rank must be nonnegative")
        if self.r == 0 and self.d != 1:
            raise ValueError("rank-zero classes are skyscrapers: degree must be 1")
        if math.gcd(self.r, self.d) != 1:
            raise ValueError(f"rank and degree must be coprime, got ({self.r}, {self.d})")

    @property
    def is_skyscraper(self) -> bool:
        return self.r == 0

    def mu(self) -> ExtendedRational:
        if self.r == 0:
            return PLUS_INFINITY
        return ExtendedRational.finite(Fraction(self.d, self.r))

    def key(self):
        mu_key = (1, Fraction(0)) if self.r == 0 else (0, Fraction(self.d, self.r))
        return (*mu_key, *self.x.key())

    def render(self) -> str:
        return f"S({self.r},{self.d},{self.x.label})"

    def __repr__(self):
        return self.render()


def mu_class(c: StableClass) -> ExtendedRational:
    """Slope d/r of a stable class, +infinity for skyscrapers."""
    return c.mu()


def hom_dim_stable(e: StableClass, f: StableClass, ext_degree: int) -> int:
    """dim Ext^i(e, f) between stable classes, from the slope rule table."""
    if ext_degree not in (0, 1):
        return 0
    if e == f:
        return 1
    chi = e.r * f.d - e.d * f.r
    mu_e, mu_f = e.mu(), f.mu()
    if mu_e < mu_f:
        return chi if ext_degree == 0 else 0
    if mu_f < mu_e:
        return 0 if ext_degree == 0 else -chi
    return 0


@dataclass(frozen=True)
class ShiftedClass:
    """A stable class placed at a shift."""

    cls: StableClass
    shift: int = 0

    def shifted(self, n: int) -> "ShiftedClass":
        return ShiftedClass(self.cls, self.shift + n)

    def key(self):
        return (self.shift, *self.cls.key())

    def k0(self) -> K0Class:
        sign = -1 if self.shift % 2 else 1
        return K0Class((sign * self.cls.r, sign * self.cls.d))

    def render(self) -> str:
        s = self.cls.render()
        if self.shift != 0:
            s += f"[{self.shift}]"
        return s

    def __repr__(self):
        return self.render()


@dataclass(frozen=True)
class EllipticObject:
    """Normal-form finite sum of shifted stable classes with multiplicities."""

    terms: tuple[tuple[ShiftedClass, int], ...] = ()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def summands(self) -> Iterator[tuple[ShiftedClass, int]]:
        return iter(self.terms)

    def __add__(self, other: "EllipticObject") -> "EllipticObject":
        return normalize_elliptic(list(self.terms) + list(other.terms))

    def __rmul__(self, m: int) -> "EllipticObject":
        if m < 0:
            raise ValueError("multiplicities must be >= 0")
        if m == 0:
            return ELLIPTIC_ZERO
        return EllipticObject(tuple((t, m * k) for t, k in self.terms))

    def shift(self, n: int) -> "EllipticObject":
        return EllipticObject(tuple(sorted(((t.shifted(n), m) for t, m in self.terms),
                                           key=lambda tm: tm[0].key())))

    def k0(self) -> K0Class:
        total = K0Class((0, 0))
        for t, m in self.terms:
            total = total + m * t.k0()
        return total

    def render(self) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(t.render() if m == 1 else f"{m}*{t.render()}"
                          for t, m in self.terms)

    def __repr__(self):
        return self.render()


ELLIPTIC_ZERO = EllipticObject()


def normalize_elliptic(pairs: Iterable[tuple[ShiftedClass, int]]) -> EllipticObject:
    acc: dict[ShiftedClass, int] = {}
    for t, m in pairs:
        if m < 0:
            raise ValueError("multiplicities must be >= 0")
        if m:
            acc[t] = acc.get(t, 0) + m
    return EllipticObject(tuple(sorted(acc.items(), key=lambda tm: tm[0].key())))


def stable(r: int, d: int, x: Point | str, shift: int = 0, mult: int = 1) -> EllipticObject:
    """Convenience constructor: mult * S(r,d,x)[shift]."""
    pt = x if isinstance(x, Point) else Point(x)
    return normalize_elliptic([(ShiftedClass(StableClass(r, d, pt), shift), mult)])


def hom_profile_elliptic(x: EllipticObject, y: EllipticObject) -> HomProfile:
    acc: dict[int, int] = {}
    for t, m in x.summands():
        for s, k in y.summands():
            gap = t.shift - s.shift
            for q in (gap, gap + 1):
                n = hom_dim_stable(t.cls, s.cls, q + s.shift - t.shift)
                if n:
                    acc[q] = acc.get(q, 0) + m * k * n
    return HomProfile.from_dict(acc)


# --- the standard family ------------------------------------------------------

_CLASS_RE = re.compile(r"S\((-?\d+),(-?\d+),([A-Za-z0-9]+)\)\Z")


@dataclass(frozen=True)
class EllipticStandard(StabilityFamily):
    """The finest grading of the elliptic model: (shift, slope, class).

    Slopes order lexicographically by (shift, mu) and by the point
    order within one (shift, mu) stratum; each stable class spans its
    own semistable subcategory.
    """

    point_labels: tuple[str, ...] = ()

    kind = "elliptic"
    zero = ELLIPTIC_ZERO

    def __post_init__(self):
        object.__setattr__(self, "point_labels", tuple(self.point_labels))

    def accepts(self, x) -> bool:
        return isinstance(x, EllipticObject)

    def hom_profile(self, x, y) -> HomProfile:
        return hom_profile_elliptic(x, y)

    def k0(self, x) -> K0Class:
        return x.k0()

    def single_term_object(self, term: ShiftedClass, mult: int) -> EllipticObject:
        return normalize_elliptic([(term, mult)])

    def compare(self, a: EllipticSlope, b: EllipticSlope) -> Ordering:
        if not isinstance(a, EllipticSlope) or not isinstance(b, EllipticSlope):
            raise TypeError("cross-family slope comparison")
        return Ordering.of((a.i, *a.cls.key()), (b.i, *b.cls.key()))

    def tau(self, s: EllipticSlope) -> EllipticSlope:
        return EllipticSlope(s.i + 1, s.mu, s.cls)

    def tau_inv(self, s: EllipticSlope) -> EllipticSlope:
        return EllipticSlope(s.i - 1, s.mu, s.cls)

    def slope_of_term(self, term: ShiftedClass) -> EllipticSlope:
        return EllipticSlope(term.shift, term.cls.mu(), term.cls)

    def term_filtration(self, term: ShiftedClass, mult: int) -> TermRewrite:
        obj = normalize_elliptic([(term, mult)])
        return TermRewrite(((self.slope_of_term(term), obj),), ELLIPTIC_ZERO)

    def descriptor(self) -> dict:
        return {"family": "elliptic", "point_order": list(self.point_labels)}

    def slope_json(self, s: EllipticSlope) -> dict:
        mu = "inf" if s.mu.is_infinite else str(s.mu.value)
        return {"shift": s.i, "mu": mu, "class": s.cls.render()}

    def slope_from_json(self, data: dict) -> EllipticSlope:
        match = _CLASS_RE.match(data["class"])
        if not match:
            raise ValueError(f"bad stable class {data['class']!r}")
        r, d, label = int(match.group(1)), int(match.group(2)), match.group(3)
        idx = self.point_labels.index(label) if label in self.point_labels else 0
        cls = StableClass(r, d, Point(label, idx))
        return EllipticSlope(int(data["shift"]), cls.mu(), cls)

    def render_slope(self, s: EllipticSlope) -> str:
        return f"({s.i}, {s.mu}, {s.cls.render()})"

    def window_classes(self, window: Window, max_rank: int = 3) -> list[StableClass]:
        classes = []
        for pt in window.points:
            classes.append(StableClass(0, 1, pt))
            for r in range(1, max_rank + 1):
                for d in window.degrees():
                    if math.gcd(r, d) == 1:
                        classes.append(StableClass(r, d, pt))
        return classes

    def window_generators(self, window: Window) -> list[EllipticObject]:
        return [normalize_elliptic([(ShiftedClass(cls, i), 1)])
                for i in window.shifts()
                for cls in self.window_classes(window, max_rank=2)]

    def random_object(self, rng: random.Random, window: Window) -> EllipticObject:
        classes = self.window_classes(window, max_rank=3)
        count = rng.randint(1, window.max_summands)
        pairs = []
        for _ in range(count):
            cls = rng.choice(classes)
            sh = rng.randint(-window.max_shift, window.max_shift)
            pairs.append((ShiftedClass(cls, sh), rng.randint(1, 3)))
        return normalize_elliptic(pairs)


def hn_elliptic(x: EllipticObject, point_labels: Sequence[str] = ()) -> HNFiltration:
    """HN filtration under the standard elliptic family: group and sort."""
    return EllipticStandard(tuple(point_labels)).hn(x)


# --- tilting torsion pairs ------------------------------------------------------

def _check_q(q: ExtendedRational) -> None:
    if q.is_infinite:
        return
    if not (0 <= q.value < 1):
        raise QOutOfRangeError(f"tilting slope must lie in [0, 1) or be inf, got {q!r}")


def _in_second_part(cls: StableClass, q: ExtendedRational, P: frozenset[str]) -> bool:
    """Whether a class falls in the quotient part: mu < q, or mu = q with x in P."""
    mu = cls.mu()
    if mu < q:
        return True
    return mu == q and cls.x.label in P


def a_qp_split(x: EllipticObject, q: ExtendedRational | Fraction | str,
               P: Iterable[str] = ()) -> tuple[EllipticObject, EllipticObject]:
    """Split a shift-0 object along the tilting pair at slope q and point set P.

    The second part collects the summands of slope < q (or slope q with
    point in P); the first part is the rest.  Vanishing of degree-0 maps
    from the first part to the second is re-checked on the output.
    """
    q = _as_extended(q)
    _check_q(q)
    pset = frozenset(P)
    if any(t.shift != 0 for t, _ in x.summands()):
        raise ValueError("the tilting split applies to shift-0 objects")
    first, second = ELLIPTIC_ZERO, ELLIPTIC_ZERO
    for t, m in x.summands():
        piece = normalize_elliptic([(t, m)])
        if _in_second_part(t.cls, q, pset):
            second = second + piece
        else:
            first = first + piece
    profile = hom_profile_elliptic(first, second)
    if profile[0] != 0:
        raise AssertionError(f"torsion pair violated: Hom^0 = {profile[0]}")
    return first, second


def _as_extended(q) -> ExtendedRational:
    if isinstance(q, ExtendedRational):
        return q
    if isinstance(q, str):
        if q == "inf":
            return PLUS_INFINITY
        return ExtendedRational.finite(Fraction(q))
    return ExtendedRational.finite(Fraction(q))


def elliptic_heart_contains(x: EllipticObject, q, P: Iterable[str] = ()) -> bool:
    """Membership in the tilted heart: first part at shift 0, second at shift 1."""
    q = _as_extended(q)
    _check_q(q)
    pset = frozenset(P)
    for t, _ in x.summands():
        if t.shift == 0:
            if _in_second_part(t.cls, q, pset):
                return False
        elif t.shift == 1:
            if not _in_second_part(t.cls, q, pset):
                return False
        else:
            return False
    return True

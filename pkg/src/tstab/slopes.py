"""Generic slope machinery over a free abelian K0 model.

A positive system is a list of additive integer-valued functions
(x_0, ..., x_{r-1}) on K0 such that x_0 >= 0, each leading-zero prefix
forces the next value to be >= 0, and a class that vanishes in all but
the last position must be strictly positive there.  Such a system
assigns to every nonzero class an exact, totally ordered slope vector,
and the induced preorder on objects has the seesaw property.

All ordering here is exact: slope components carry rational arguments
and the comparator reverses their order (the underlying arccotangent
reparametrisation is strictly decreasing), so no floating point ever
participates in a comparison.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import ArityMismatchError, NotPositiveError, ZeroClassError


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    @staticmethod
    def of(a, b) -> "Ordering":
        """Ordering of two values that support <."""
        if a < b:
            return Ordering.LESS
        if b < a:
            return Ordering.GREATER
        return Ordering.EQUAL


@dataclass(frozen=True)
class K0Class:
    """A class in the free abelian K0 model: a fixed-length integer vector.

    For curve categories the arity is 2 and the components are
    (rank, degree).
    """

    components: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(int(c) for c in self.components))

    @property
    def arity(self) -> int:
        return len(self.components)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.components)

    @property
    def rank(self) -> int:
        return self.components[0]

    @property
    def degree(self) -> int:
        return self.components[1]

    def __add__(self, other: "K0Class") -> "K0Class":
        if self.arity != other.arity:
            raise ArityMismatchError(f"arity {self.arity} vs {other.arity}")
        return K0Class(tuple(a + b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "K0Class":
        return K0Class(tuple(-c for c in self.components))

    def __sub__(self, other: "K0Class") -> "K0Class":
        return self + (-other)

    def __rmul__(self, m: int) -> "K0Class":
        return K0Class(tuple(m * c for c in self.components))

    def __repr__(self):
        return f"K0{self.components}"


def k0(*components: int) -> K0Class:
    return K0Class(tuple(components))


@dataclass(frozen=True)
class PositiveSystem:
    """A labelled system of additive functions with the positivity property.

    Positivity is not proven symbolically; `check_positive` verifies it on
    any supplied sample of classes.  `is_base` additionally demands that
    the zero vector only represents the zero object.
    """

    labels: tuple[str, ...]
    is_base: bool = False

    @property
    def arity(self) -> int:
        return len(self.labels)


#: The rank/degree system of a smooth curve, used throughout the package.
RANK_DEGREE = PositiveSystem(labels=("rk", "deg"), is_base=True)


@dataclass(frozen=True)
class PositivityViolation:
    cls: K0Class
    reason: str

    def __str__(self):
        return f"{self.cls}: {self.reason}"


def _nonzero_cascade_violation(cls: K0Class) -> str | None:
    """Reason string if a nonzero vector fails the cascading conditions."""
    comps = cls.components
    r = len(comps)
    for i, c in enumerate(comps):
        if c != 0:
            if c < 0:
                which = "> 0" if i == r - 1 else ">= 0"
                return f"x_{i} = {c} must be {which} once x_0..x_{i-1} vanish" if i else f"x_0 = {c} must be >= 0"
            return None
    return None


def check_positive(system: PositiveSystem, samples: Iterable[K0Class]) -> list[PositivityViolation]:
    """Check the cascading positivity conditions on every sample.

    Returns an empty list iff all samples pass.  The cascade applies to
    nonzero vectors; the zero vector is flagged only when the system is
    declared a base (zero vector must then mean the zero object).
    """
    violations = []
    for cls in samples:
        if cls.arity != system.arity:
            raise ArityMismatchError(f"sample {cls} has arity {cls.arity}, system has {system.arity}")
        if cls.is_zero:
            if system.is_base:
                violations.append(PositivityViolation(cls, "zero vector in a positive base must be the zero object"))
            continue
        reason = _nonzero_cascade_violation(cls)
        if reason is not None:
            violations.append(PositivityViolation(cls, reason))
    return violations


# --- slope values -----------------------------------------------------------

@dataclass(frozen=True)
class One:
    """The maximal slope component (the filler above every Nu value)."""

    def __repr__(self):
        return "One"


@dataclass(frozen=True)
class Nu:
    """Slope component nu(q); ordering reverses the rational argument.

    Semantically nu(q) = arccot(q)/pi, which is strictly decreasing in q,
    so Nu(q1) < Nu(q2) iff q1 > q2, and Nu(q) < One for every q.
    """

    q: Fraction

    def __repr__(self):
        return f"Nu({self.q})"

    def approx(self) -> float:
        """Float rendering for display only; never used in comparisons."""
        return math.atan2(1.0, float(self.q)) / math.pi


SlopeComponent = Union[One, Nu]


def _component_key(c: SlopeComponent):
    # One sorts above every Nu; among Nu values the order of q is reversed.
    if isinstance(c, One):
        return (1, Fraction(0))
    return (0, -c.q)


@dataclass(frozen=True)
class SlopeValue:
    """An exact slope vector of length r-1, ordered lexicographically."""

    components: tuple[SlopeComponent, ...]

    def key(self):
        return tuple(_component_key(c) for c in self.components)

    def __len__(self):
        return len(self.components)

    def __lt__(self, other: "SlopeValue"):
        if len(self) != len(other):
            raise ArityMismatchError("cannot compare slope vectors of different lengths")
        return self.key() < other.key()

    def __le__(self, other: "SlopeValue"):
        return self == other or self < other

    def __repr__(self):
        return "Slope(" + ", ".join(repr(c) for c in self.components) + ")"


def compare_slopes(a: SlopeValue, b: SlopeValue) -> Ordering:
    """Lexicographic comparison of two slope vectors of equal length."""
    if len(a) != len(b):
        raise ArityMismatchError("cannot compare slope vectors of different lengths")
    return Ordering.of(a.key(), b.key())


def gamma_slope(system: PositiveSystem, cls: K0Class) -> SlopeValue:
    """The exact slope of a nonzero positive class.

    The result has s leading One components, where s is the index of the
    first nonzero function value, followed by Nu(-x_{s+j}/x_s) for the
    remaining positions.
    """
    if cls.arity != system.arity:
        raise ArityMismatchError(f"class arity {cls.arity} vs system arity {system.arity}")
    if cls.is_zero:
        raise ZeroClassError("the zero class has no slope")
    reason = _nonzero_cascade_violation(cls)
    if reason is not None:
        raise NotPositiveError(reason)
    comps = cls.components
    s = next(i for i, c in enumerate(comps) if c != 0)
    parts: list[SlopeComponent] = [One()] * s
    for j in range(s + 1, len(comps)):
        parts.append(Nu(Fraction(-comps[j], comps[s])))
    return SlopeValue(tuple(parts))


# --- extended rationals -----------------------------------------------------

@dataclass(frozen=True)
class ExtendedRational:
    """A rational number or +infinity, with +infinity maximal."""

    value: Fraction | None = None  # None encodes +infinity

    @staticmethod
    def finite(q) -> "ExtendedRational":
        return ExtendedRational(Fraction(q))

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def key(self):
        return (1, Fraction(0)) if self.value is None else (0, self.value)

    def __lt__(self, other: "ExtendedRational"):
        return self.key() < other.key()

    def __le__(self, other: "ExtendedRational"):
        return self.key() <= other.key()

    def __gt__(self, other: "ExtendedRational"):
        return other < self

    def __ge__(self, other: "ExtendedRational"):
        return other <= self

    def __repr__(self):
        return "+inf" if self.value is None else str(self.value)


PLUS_INFINITY = ExtendedRational(None)


def mu_bar(cls: K0Class) -> ExtendedRational:
    """deg/rk for positive rank, +infinity for torsion classes.

    Order-equivalent to `gamma_slope` on the rank/degree system; the
    equivalence is a tested invariant rather than an assumption.
    """
    if cls.arity != 2:
        raise ArityMismatchError("mu_bar is defined for (rank, degree) classes")
    if cls.is_zero:
        raise ZeroClassError("the zero class has no slope")
    rk, deg = cls.components
    if rk == 0:
        return PLUS_INFINITY
    return ExtendedRational.finite(Fraction(deg, rk))


# --- seesaw -----------------------------------------------------------------

@dataclass(frozen=True)
class SeesawResult:
    """Outcome of a seesaw check on a subobject/quotient pair.

    `alternative` is one of "increasing", "decreasing", "equal" or
    "mixed"; the first three are the legal alternatives, "mixed" means
    the three pairwise comparisons are inconsistent.
    """

    a: K0Class
    b: K0Class
    c: K0Class
    ab: Ordering
    ac: Ordering
    bc: Ordering
    alternative: str

    @property
    def ok(self) -> bool:
        return self.alternative != "mixed"


def seesaw_check(system: PositiveSystem, a: K0Class, c: K0Class) -> SeesawResult:
    """Check the seesaw alternatives for the extension class b = a + c.

    For slopes built from additive functions exactly one of the three
    alternatives holds: gamma(a) < gamma(b) < gamma(c) ("increasing"),
    all reversed ("decreasing"), or all equal ("equal").
    """
    b = a + c
    ga, gb, gc = (gamma_slope(system, x) for x in (a, b, c))
    ab, ac, bc = compare_slopes(ga, gb), compare_slopes(ga, gc), compare_slopes(gb, gc)
    if ab == ac == bc == Ordering.LESS:
        alternative = "increasing"
    elif ab == ac == bc == Ordering.GREATER:
        alternative = "decreasing"
    elif ab == ac == bc == Ordering.EQUAL:
        alternative = "equal"
    else:
        alternative = "mixed"
    return SeesawResult(a, b, c, ab, ac, bc, alternative)

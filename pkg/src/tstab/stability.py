"""Stability data and the Harder-Narasimhan filtration engine.

A stability family fixes a linearly ordered slope set with a shift
automorphism tau, one semistable subcategory per slope, and an
algorithm producing the HN filtration of any nonzero object.  The
filtration is stored as its quotient list plus the intermediate term
objects; in the split object models of this package those data
determine the underlying tower of triangles up to unique isomorphism,
so no morphisms are represented.

`verify_hn` re-checks a filtration against the defining conditions
(ascending slopes, semistable quotients, Hom-vanishing between
quotients in degrees <= 0, K0 additivity, correct endpoints); a
filtration passing all of them is accepted as THE HN filtration of its
object.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cmp_to_key
from typing import Iterable, Sequence

from .errors import InvalidShuffleError, UnsupportedFamilyError
from .p1 import Point
from .slopes import ExtendedRational, K0Class, Ordering


# --- slope identifiers ------------------------------------------------------

@dataclass(frozen=True)
class CoarseSlope:
    """Slope in the coarse family: the shift level alone."""

    i: int

    def __repr__(self):
        return f"({self.i})"


@dataclass(frozen=True)
class IntLevel:
    """Degree level of a line bundle inside one shift stratum."""

    n: int


@dataclass(frozen=True)
class PointLevel:
    """Point level of a torsion stratum inside one shift stratum."""

    point: Point


@dataclass(frozen=True)
class StandardSlope:
    """Slope (shift, level) with level a line degree or a point."""

    i: int
    level: IntLevel | PointLevel

    def key(self):
        if isinstance(self.level, IntLevel):
            return (self.i, 0, (self.level.n, ""))
        return (self.i, 1, self.level.point.key())

    def __repr__(self):
        if isinstance(self.level, IntLevel):
            return f"({self.i}, {self.level.n})"
        return f"({self.i}, {self.level.point.label})"


@dataclass(frozen=True)
class ExceptionalSlope:
    """Slope (shift, column): column 0 carries O(k), column 1 carries O(k+1)."""

    i: int
    col: int

    def __post_init__(self):
        if self.col not in (0, 1):
            raise ValueError("column must be 0 or 1")

    def __repr__(self):
        return f"({self.i}, col {self.col})"


@dataclass(frozen=True)
class EllipticSlope:
    """Slope (shift, mu, stable class) on the elliptic model."""

    i: int
    mu: ExtendedRational
    cls: object  # a StableClass; kept opaque to avoid an import cycle

    def __repr__(self):
        return f"({self.i}, {self.mu}, {self.cls})"


# --- reports ----------------------------------------------------------------

@dataclass(frozen=True)
class CheckItem:
    name: str
    ok: bool
    detail: str = ""

    def __str__(self):
        mark = "PASS" if self.ok else "FAIL"
        return f"{mark} {self.name}" + (f": {self.detail}" if self.detail and not self.ok else "")


@dataclass(frozen=True)
class Report:
    checks: tuple[CheckItem, ...] = ()

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list[CheckItem]:
        return [c for c in self.checks if not c.ok]

    def summary(self) -> str:
        return "\n".join(str(c) for c in self.checks)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
        }


# --- window for finite checks -----------------------------------------------

@dataclass(frozen=True)
class Window:
    """Finite bounds for axiom checks: shifts, degrees, lengths, points."""

    max_degree: int = 8
    max_shift: int = 2
    max_length: int = 3
    max_summands: int = 6
    points: tuple[Point, ...] = (Point("x"), Point("y"), Point("z"))
    samples: int = 50
    seed: int = 0

    def shifts(self) -> range:
        return range(-self.max_shift, self.max_shift + 1)

    def degrees(self) -> range:
        return range(-self.max_degree, self.max_degree + 1)

    def lengths(self) -> range:
        return range(1, self.max_length + 1)


# --- filtrations ------------------------------------------------------------

@dataclass(frozen=True)
class TermRewrite:
    """HN data of a single shifted indecomposable: quotients plus mid-term.

    `quotients` is ascending in slope; `mid` is the second filtration
    term (the part above the lowest quotient), zero when the term is
    already semistable.  The mid-term is genuine triangle data: it need
    not be the direct sum of the higher quotients.
    """

    quotients: tuple[tuple[object, object], ...]
    mid: object

    def term_tower(self, whole, zero) -> tuple:
        """The filtration terms of the summand itself: whole, [mid,] zero."""
        if len(self.quotients) <= 1:
            return (whole, zero)
        return (whole, self.mid, zero)


@dataclass(frozen=True)
class HNFiltration:
    """Quotient list plus term objects of a t-filtration.

    terms[0] is the filtered object, terms[-1] is zero, and
    k0(terms[i]) = k0(terms[i+1]) + k0(quotients[i]) throughout.  The
    empty filtration represents the zero object.
    """

    family: "StabilityFamily" = field(compare=False)
    quotients: tuple[tuple[object, object], ...] = ()
    terms: tuple[object, ...] = ()

    def __post_init__(self):
        if len(self.terms) != len(self.quotients) + 1:
            raise ValueError("terms must be one longer than quotients")

    @property
    def object(self):
        return self.terms[0]

    @property
    def slopes(self) -> tuple:
        return tuple(s for s, _ in self.quotients)

    @property
    def quotient_objects(self) -> tuple:
        return tuple(o for _, o in self.quotients)

    def is_semistable(self) -> bool:
        return len(self.quotients) == 1

    @staticmethod
    def empty(family: "StabilityFamily") -> "HNFiltration":
        return HNFiltration(family, (), (family.zero,))

    @staticmethod
    def from_quotients(family: "StabilityFamily",
                       quotients: Sequence[tuple[object, object]]) -> "HNFiltration":
        """Filtration with terms taken as partial sums of the quotients.

        Only correct when the filtered object really is the direct sum
        of the quotients (as in the standard and elliptic families, or
        in synthetic test data); non-split towers must carry their true
        mid-terms instead.
        """
        terms = [family.zero]
        for _, obj in reversed(list(quotients)):
            terms.append(terms[-1] + obj)
        terms.reverse()
        return HNFiltration(family, tuple(quotients), tuple(terms))

    def shifted(self, n: int) -> "HNFiltration":
        """Apply the shift [n]: slopes move by tau^n, objects by [n]."""
        fam = self.family
        quotients = []
        for s, o in self.quotients:
            for _ in range(abs(n)):
                s = fam.tau(s) if n > 0 else fam.tau_inv(s)
            quotients.append((s, o.shift(n)))
        return HNFiltration(fam, tuple(quotients), tuple(t.shift(n) for t in self.terms))

    def to_json(self) -> dict:
        fam = self.family
        return {
            "object": self.object.render(),
            "family": fam.descriptor(),
            "quotients": [{"slope": fam.slope_json(s), "object": o.render()}
                          for s, o in self.quotients],
            "terms": [t.render() for t in self.terms],
        }


# --- the family interface ----------------------------------------------------

class StabilityFamily:
    """Interface shared by the concrete stability families.

    Subclasses fix the slope order (`compare`, `tau`), the object model
    (`accepts`, `hom_profile`, `k0`, `zero`) and the per-indecomposable
    HN data (`slope_of_term`, `term_filtration`); the generic engine
    assembles full filtrations from those.
    """

    kind = "abstract"
    zero: object = None

    # -- slope order --

    def compare(self, a, b) -> Ordering:
        raise NotImplementedError

    def tau(self, s):
        raise NotImplementedError

    def tau_inv(self, s):
        raise NotImplementedError

    def slope_cmp_key(self):
        return cmp_to_key(lambda a, b: self.compare(a, b).value)

    def sort_slopes(self, slopes: Iterable) -> list:
        return sorted(slopes, key=self.slope_cmp_key())

    # -- object model --

    def accepts(self, x) -> bool:
        raise NotImplementedError

    def hom_profile(self, x, y):
        raise NotImplementedError

    def k0(self, x) -> K0Class:
        return x.k0()

    def render_slope(self, s) -> str:
        return repr(s)

    def slope_json(self, s) -> dict:
        raise NotImplementedError

    def slope_from_json(self, data: dict):
        raise NotImplementedError

    def descriptor(self) -> dict:
        raise NotImplementedError

    # -- per-term HN data --

    def slope_of_term(self, term):
        """Slope of a semistable generator term, or None if not a generator."""
        raise NotImplementedError

    def slope_of(self, term):
        return self.slope_of_term(term)

    def term_filtration(self, term, mult: int) -> TermRewrite:
        raise NotImplementedError

    # -- assembled operations --

    def _require(self, x):
        if not self.accepts(x):
            raise UnsupportedFamilyError(
                f"object {x!r} is outside the {self.kind} family's object model")

    def single_term_object(self, term, mult: int):
        """The object with a single summand `term` of multiplicity `mult`."""
        raise NotImplementedError

    def hn(self, x) -> HNFiltration:
        """The HN filtration: rewrite each summand, merge towers by slope."""
        self._require(x)
        if x.is_zero:
            return HNFiltration.empty(self)
        sources = []
        for term, mult in x.summands():
            rewrite = self.term_filtration(term, mult)
            whole = self.single_term_object(term, mult)
            sources.append((rewrite.quotients, rewrite.term_tower(whole, self.zero)))
        return merge_towers(self, sources)

    def semistable_slope(self, x):
        """The slope of x if all its summands are generators of one slope.

        This is a direct structural membership test, independent of
        `hn`, used to verify quotients of candidate filtrations.
        """
        self._require(x)
        if x.is_zero:
            return None
        slope = None
        for term, _ in x.summands():
            s = self.slope_of_term(term)
            if s is None:
                return None
            if slope is None:
                slope = s
            elif s != slope:
                return None
        return slope

    # -- finite windows --

    def window_generators(self, window: Window) -> list:
        """Single-generator objects spanning the window's slopes."""
        raise NotImplementedError

    def random_object(self, rng: random.Random, window: Window):
        raise NotImplementedError


def merge_towers(family: StabilityFamily,
                 sources: Sequence[tuple[Sequence[tuple[object, object]], Sequence[object]]]
                 ) -> HNFiltration:
    """Merge filtration towers by ascending slope, coalescing equal slopes.

    Each source is (quotients, terms) with strictly ascending slopes and
    len(terms) == len(quotients) + 1.  The merged term after each step
    is the direct sum of every source's current term, which realises
    the filtration of the direct sum of the source objects.
    """
    pointers = [0] * len(sources)

    def current_term():
        total = family.zero
        for (_, terms), p in zip(sources, pointers):
            total = total + terms[p]
        return total

    quotients: list[tuple[object, object]] = []
    merged_terms = [current_term()]
    while True:
        active = [(idx, sources[idx][0][pointers[idx]][0])
                  for idx in range(len(sources))
                  if pointers[idx] < len(sources[idx][0])]
        if not active:
            break
        best = active[0][1]
        for _, slope in active[1:]:
            if family.compare(slope, best) == Ordering.LESS:
                best = slope
        obj = family.zero
        for idx, slope in active:
            if family.compare(slope, best) == Ordering.EQUAL:
                obj = obj + sources[idx][0][pointers[idx]][1]
                pointers[idx] += 1
        quotients.append((best, obj))
        merged_terms.append(current_term())
    return HNFiltration(family, tuple(quotients), tuple(merged_terms))


# --- module-level operations --------------------------------------------------

def hn(x, family: StabilityFamily) -> HNFiltration:
    """HN filtration of x under the family (empty for the zero object)."""
    return family.hn(x)


def is_semistable(x, family: StabilityFamily):
    """The slope if the HN filtration of x has exactly one quotient, else None."""
    filt = family.hn(x)
    if len(filt.quotients) == 1:
        return filt.quotients[0][0]
    return None


def verify_hn(x, filt: HNFiltration, family: StabilityFamily) -> Report:
    """Re-check a filtration against the HN characterisation.

    (a) slopes strictly ascending; (b) every quotient nonzero and
    semistable of its recorded slope; (c) Hom^{<=0} between quotients
    vanishes from higher to lower position; (d) K0 additivity of the
    terms; (e) terms start at x and end at zero.  Passing all five
    identifies the filtration as the unique HN filtration of x.
    """
    checks = []

    ok, detail = True, ""
    for j in range(len(filt.quotients) - 1):
        if family.compare(filt.quotients[j][0], filt.quotients[j + 1][0]) != Ordering.LESS:
            ok, detail = False, (f"slope {family.render_slope(filt.quotients[j][0])} !< "
                                 f"{family.render_slope(filt.quotients[j + 1][0])} at position {j}")
            break
    checks.append(CheckItem("ascending_slopes", ok, detail))

    ok, detail = True, ""
    for idx, (slope, obj) in enumerate(filt.quotients):
        actual = family.semistable_slope(obj)
        if actual is None or actual != slope:
            ok = False
            detail = (f"quotient {idx} ({obj.render()}) is not semistable of slope "
                      f"{family.render_slope(slope)}")
            break
    checks.append(CheckItem("semistable_quotients", ok, detail))

    ok, detail = True, ""
    for j in range(len(filt.quotients)):
        for i in range(j):
            profile = family.hom_profile(filt.quotients[j][1], filt.quotients[i][1])
            if not profile.vanishes_at_and_below(0):
                ok = False
                detail = (f"Hom^(<=0)(Q_{j}, Q_{i}) != 0: profile {profile!r}")
                break
        if not ok:
            break
    checks.append(CheckItem("hom_vanishing", ok, detail))

    ok, detail = True, ""
    for i, (slope, obj) in enumerate(filt.quotients):
        lhs = family.k0(filt.terms[i])
        rhs = family.k0(filt.terms[i + 1]) + family.k0(obj)
        if lhs != rhs:
            ok, detail = False, f"k0(terms[{i}]) = {lhs} != {rhs}"
            break
    checks.append(CheckItem("k0_additivity", ok, detail))

    ok, detail = True, ""
    if filt.terms[0] != x:
        ok, detail = False, f"terms[0] = {filt.terms[0].render()} != {x.render()}"
    elif not filt.terms[-1].is_zero:
        ok, detail = False, f"terms[-1] = {filt.terms[-1].render()} != 0"
    checks.append(CheckItem("endpoints", ok, detail))

    return Report(tuple(checks))


def glue(outer: Sequence[tuple[object, Sequence[tuple[object, object]]]]) -> list[tuple[object, object]]:
    """Flatten a nested filtration: concatenate inner quotient lists in order."""
    flat: list[tuple[object, object]] = []
    for _, inner in outer:
        if not inner:
            raise ValueError("inner quotient lists must be nonempty")
        flat.extend(inner)
    return flat


def split(flat: Sequence[tuple[object, object]],
          blocks: Sequence[Sequence[int]]) -> list[tuple[object, list[tuple[object, object]]]]:
    """Group a flat quotient list into consecutive blocks.

    Returns (block direct sum, inner quotient list) per block; blocks
    must be nonempty consecutive index groups covering the list.
    """
    out = []
    expected = 0
    for block in blocks:
        idxs = list(block)
        if not idxs or idxs != list(range(expected, expected + len(idxs))):
            raise ValueError("blocks must be nonempty consecutive index groups")
        expected += len(idxs)
        inner = [flat[i] for i in idxs]
        total = inner[0][1]
        for _, obj in inner[1:]:
            total = total + obj
        out.append((total, inner))
    if expected != len(flat):
        raise ValueError("blocks must cover the whole quotient list")
    return out


def shuffle_merge(fa: HNFiltration, fb: HNFiltration,
                  mode: str | Sequence[str] = "by-slope") -> HNFiltration:
    """Interleave two filtrations into a filtration of the direct sum.

    In "by-slope" mode the quotients are merged in ascending slope order
    and equal slopes are coalesced by direct sum, which yields the HN
    filtration of the sum.  An explicit shuffle is a sequence over
    {"a", "b"} naming the source of each successive quotient; it must
    use each source exactly as often as it has quotients.
    """
    if fa.family.descriptor() != fb.family.descriptor():
        raise InvalidShuffleError("filtrations belong to different families")
    family = fa.family
    if mode == "by-slope":
        return merge_towers(family, [(fa.quotients, fa.terms), (fb.quotients, fb.terms)])
    picks = list(mode)
    if picks.count("a") != len(fa.quotients) or picks.count("b") != len(fb.quotients) \
            or len(picks) != len(fa.quotients) + len(fb.quotients):
        raise InvalidShuffleError("shuffle must use each source's quotients exactly once, in order")
    ia = ib = 0
    quotients = []
    terms = [fa.terms[0] + fb.terms[0]]
    for pick in picks:
        if pick == "a":
            quotients.append(fa.quotients[ia])
            ia += 1
        elif pick == "b":
            quotients.append(fb.quotients[ib])
            ib += 1
        else:
            raise InvalidShuffleError(f"unknown shuffle tag {pick!r}")
        terms.append(fa.terms[ia] + fb.terms[ib])
    return HNFiltration(family, tuple(quotients), tuple(terms))


def validate_stability(family: StabilityFamily, window: Window) -> Report:
    """Check the stability axioms on a finite window of generators.

    Verifies tau-equivariance of generator slopes, tau(phi) >= phi,
    Hom-vanishing in degrees <= 0 against the slope order on all
    generator pairs, and runs hn + verify_hn on random objects.
    """
    checks = []
    gens = family.window_generators(window)
    slopes = []
    for g in gens:
        s = family.semistable_slope(g)
        if s is None:
            checks.append(CheckItem("generators_semistable", False,
                                    f"window generator {g.render()} is not semistable"))
            return Report(tuple(checks))
        slopes.append(s)
    checks.append(CheckItem("generators_semistable", True))

    ok, detail = True, ""
    for g, s in zip(gens, slopes):
        shifted_slope = family.semistable_slope(g.shift(1))
        if shifted_slope != family.tau(s):
            ok, detail = False, f"slope of {g.render()}[1] is not tau(slope)"
            break
        if family.compare(family.tau(s), s) == Ordering.LESS:
            ok, detail = False, f"tau({family.render_slope(s)}) < {family.render_slope(s)}"
            break
        if family.tau_inv(family.tau(s)) != s:
            ok, detail = False, f"tau_inv(tau) != id at {family.render_slope(s)}"
            break
    checks.append(CheckItem("tau_equivariance", ok, detail))

    ok, detail = True, ""
    for g1, s1 in zip(gens, slopes):
        for g2, s2 in zip(gens, slopes):
            if family.compare(s1, s2) == Ordering.GREATER:
                profile = family.hom_profile(g1, g2)
                if not profile.vanishes_at_and_below(0):
                    ok = False
                    detail = (f"Hom^(<=0)({g1.render()}, {g2.render()}) != 0 "
                              f"against the order: profile {profile!r}")
                    break
        if not ok:
            break
    checks.append(CheckItem("hom_vanishing", ok, detail))

    rng = random.Random(window.seed)
    ok, detail = True, ""
    for _ in range(window.samples):
        x = family.random_object(rng, window)
        report = verify_hn(x, family.hn(x), family)
        if not report.ok:
            ok = False
            failed = ", ".join(c.name for c in report.failures())
            detail = f"hn({x.render()}) failed: {failed}"
            break
    checks.append(CheckItem("hn_random_objects", ok, detail))

    return Report(tuple(checks))

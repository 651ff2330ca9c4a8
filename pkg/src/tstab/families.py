"""The concrete t-stabilities on the derived category of P1.

Three families are provided.

* `CoarseZ` grades by the shift alone: one semistable subcategory per
  homological level.
* `StandardP1` refines each level into line-bundle strata (one per
  degree, ascending) below torsion strata (one per point, in a chosen
  point order); every indecomposable is semistable, so HN filtrations
  are computed by grouping.
* `ExceptionalP1(k, p)` is built on the twisting pair (O(k), O(k+1)).
  Its slope set has two columns indexed by the shift, interleaved
  according to the parameter p (p = inf puts the whole first column
  below the second).  Indecomposables other than O(k)[i], O(k+1)[i] are
  destabilised by one of three two-term resolutions:

      (n-k) O(k+1)       -> O(n)   -> (n-k-1) O(k)[1]    for n > k+1
      (k-n) O(k+1)[-1]   -> O(n)   -> (k-n+1) O(k)       for n < k
      d O(k+1)           -> T(x,d) -> d O(k)[1]

  and `exceptional_rewrite` turns these into per-summand HN data.

The cross-column order for finite p is (i,0) < (j,1) iff i <= j+p+1
(equivalently (j,1) < (i,0) iff i >= j+p+2), the unique total order
extending the interleaving chain O(k)[i+p] < O(k+1)[i-1] < O(k)[i+p+1].
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .errors import InvalidPartitionError
from .p1 import (DerivedObject, HomProfile, Line, Point, ShiftedIndec, Torsion, ZERO,
                 hom_profile, k0_class, line, normalize, torsion)
from .slopes import Ordering
from .stability import (CheckItem, CoarseSlope, ExceptionalSlope, HNFiltration, IntLevel,
                        PointLevel, Report, StabilityFamily, StandardSlope, TermRewrite,
                        Window)

INF = float("inf")


class P1Family(StabilityFamily):
    """Shared object model of the three P1 families."""

    zero = ZERO

    def accepts(self, x) -> bool:
        return isinstance(x, DerivedObject)

    def hom_profile(self, x, y) -> HomProfile:
        return hom_profile(x, y)

    def k0(self, x):
        return k0_class(x)

    def single_term_object(self, term: ShiftedIndec, mult: int) -> DerivedObject:
        return normalize([(term, mult)])

    def window_generators(self, window: Window) -> list[DerivedObject]:
        gens = []
        for i in window.shifts():
            for n in window.degrees():
                gens.append(line(n, i))
            for x in window.points:
                for d in window.lengths():
                    gens.append(torsion(x, d, i))
        return gens

    def random_object(self, rng: random.Random, window: Window) -> DerivedObject:
        count = rng.randint(1, window.max_summands)
        pairs = []
        for _ in range(count):
            sh = rng.randint(-window.max_shift, window.max_shift)
            mult = rng.randint(1, 3)
            if rng.random() < 0.7:
                base = Line(rng.randint(-window.max_degree, window.max_degree))
            else:
                base = Torsion(rng.choice(window.points), rng.randint(1, window.max_length))
            pairs.append((ShiftedIndec(base, sh), mult))
        return normalize(pairs)


# --- coarse -------------------------------------------------------------------

@dataclass(frozen=True)
class CoarseZ(P1Family):
    """The shift grading: semistable subcategory at level i is Coh[i]."""

    kind = "coarse"

    def compare(self, a: CoarseSlope, b: CoarseSlope) -> Ordering:
        if not isinstance(a, CoarseSlope) or not isinstance(b, CoarseSlope):
            raise TypeError("cross-family slope comparison")
        return Ordering.of(a.i, b.i)

    def tau(self, s: CoarseSlope) -> CoarseSlope:
        return CoarseSlope(s.i + 1)

    def tau_inv(self, s: CoarseSlope) -> CoarseSlope:
        return CoarseSlope(s.i - 1)

    def slope_of_term(self, term: ShiftedIndec) -> CoarseSlope:
        return CoarseSlope(term.shift)

    def term_filtration(self, term: ShiftedIndec, mult: int) -> TermRewrite:
        obj = normalize([(term, mult)])
        return TermRewrite(((CoarseSlope(term.shift), obj),), ZERO)

    def descriptor(self) -> dict:
        return {"family": "coarse"}

    def slope_json(self, s: CoarseSlope) -> dict:
        return {"shift": s.i}

    def slope_from_json(self, data: dict) -> CoarseSlope:
        return CoarseSlope(int(data["shift"]))

    def render_slope(self, s: CoarseSlope) -> str:
        return f"({s.i})"


# --- standard -----------------------------------------------------------------

def standard_slope(term: ShiftedIndec) -> StandardSlope:
    """Slope of a shifted indecomposable in the standard families."""
    if isinstance(term.base, Line):
        return StandardSlope(term.shift, IntLevel(term.base.n))
    return StandardSlope(term.shift, PointLevel(term.base.x))


@dataclass(frozen=True)
class StandardP1(P1Family):
    """The finest grading by (shift, degree-or-point).

    Within one shift level all line-bundle slopes (ascending in degree)
    lie below all point slopes; points are ordered by their session
    order (lexicographic by label when unconfigured).  `point_labels`
    records the declared point universe for serialisation and for
    validating point sets of cuts; slope comparisons use the order
    carried by the points themselves.
    """

    point_labels: tuple[str, ...] = ()

    kind = "standard"

    def __post_init__(self):
        object.__setattr__(self, "point_labels", tuple(self.point_labels))

    def points(self) -> tuple[Point, ...]:
        return tuple(Point(lbl, idx) for idx, lbl in enumerate(self.point_labels))

    def point(self, label: str) -> Point:
        if label not in self.point_labels:
            raise KeyError(f"undeclared point label {label!r}")
        return Point(label, self.point_labels.index(label))

    def compare(self, a: StandardSlope, b: StandardSlope) -> Ordering:
        if not isinstance(a, StandardSlope) or not isinstance(b, StandardSlope):
            raise TypeError("cross-family slope comparison")
        return Ordering.of(a.key(), b.key())

    def tau(self, s: StandardSlope) -> StandardSlope:
        return StandardSlope(s.i + 1, s.level)

    def tau_inv(self, s: StandardSlope) -> StandardSlope:
        return StandardSlope(s.i - 1, s.level)

    def slope_of_term(self, term: ShiftedIndec) -> StandardSlope:
        return standard_slope(term)

    def term_filtration(self, term: ShiftedIndec, mult: int) -> TermRewrite:
        obj = normalize([(term, mult)])
        return TermRewrite(((standard_slope(term), obj),), ZERO)

    def descriptor(self) -> dict:
        return {"family": "standard", "point_order": list(self.point_labels)}

    def slope_json(self, s: StandardSlope) -> dict:
        if isinstance(s.level, IntLevel):
            return {"shift": s.i, "level": {"int": s.level.n}}
        return {"shift": s.i, "level": {"point": s.level.point.label}}

    def slope_from_json(self, data: dict) -> StandardSlope:
        level = data["level"]
        if "int" in level:
            return StandardSlope(int(data["shift"]), IntLevel(int(level["int"])))
        label = level["point"]
        pt = self.point(label) if label in self.point_labels else Point(label)
        return StandardSlope(int(data["shift"]), PointLevel(pt))

    def render_slope(self, s: StandardSlope) -> str:
        return repr(s)


def hn_standard(x: DerivedObject) -> HNFiltration:
    """HN filtration under the standard family: group, sort, coalesce."""
    return StandardP1().hn(x)


# --- exceptional ----------------------------------------------------------------

def compare_exceptional(a: ExceptionalSlope, b: ExceptionalSlope, p) -> Ordering:
    """Total order on the two-column slope set for interleaving parameter p."""
    if not isinstance(a, ExceptionalSlope) or not isinstance(b, ExceptionalSlope):
        raise TypeError("cross-family slope comparison")
    if a.col == b.col:
        return Ordering.of(a.i, b.i)
    if a.col == 0:
        if p == INF or a.i <= b.i + p + 1:
            return Ordering.LESS
        return Ordering.GREATER
    return Ordering(-compare_exceptional(b, a, p).value)


@dataclass(frozen=True)
class ExceptionalP1(P1Family):
    """Stability built on the twisting pair (O(k), O(k+1)) with interleaving p."""

    k: int = 0
    p: int | float = 0

    kind = "exceptional"

    def __post_init__(self):
        if self.p != INF and (not isinstance(self.p, int) or self.p < 0):
            raise ValueError("p must be a nonnegative integer or inf")

    def compare(self, a: ExceptionalSlope, b: ExceptionalSlope) -> Ordering:
        return compare_exceptional(a, b, self.p)

    def tau(self, s: ExceptionalSlope) -> ExceptionalSlope:
        return ExceptionalSlope(s.i + 1, s.col)

    def tau_inv(self, s: ExceptionalSlope) -> ExceptionalSlope:
        return ExceptionalSlope(s.i - 1, s.col)

    def slope_of_term(self, term: ShiftedIndec) -> ExceptionalSlope | None:
        if isinstance(term.base, Line):
            if term.base.n == self.k:
                return ExceptionalSlope(term.shift, 0)
            if term.base.n == self.k + 1:
                return ExceptionalSlope(term.shift, 1)
        return None

    def term_filtration(self, term: ShiftedIndec, mult: int) -> TermRewrite:
        return exceptional_rewrite(term, self.k, mult)

    def window_generators(self, window: Window) -> list[DerivedObject]:
        gens = []
        for i in window.shifts():
            gens.append(line(self.k, i))
            gens.append(line(self.k + 1, i))
        return gens

    def descriptor(self) -> dict:
        return {"family": "exceptional", "k": self.k,
                "p": "inf" if self.p == INF else self.p}

    def slope_json(self, s: ExceptionalSlope) -> dict:
        return {"shift": s.i, "col": s.col}

    def slope_from_json(self, data: dict) -> ExceptionalSlope:
        return ExceptionalSlope(int(data["shift"]), int(data["col"]))

    def render_slope(self, s: ExceptionalSlope) -> str:
        return f"({s.i}, {s.col})"


def exceptional_rewrite(term: ShiftedIndec, k: int, mult: int = 1) -> TermRewrite:
    """Per-summand HN data over the twisting pair (O(k), O(k+1)).

    Generators stay put; any other line bundle and any torsion sheaf
    splits into a column-0 and a column-1 quotient via its two-term
    resolution, with the mid-term recording the intermediate object.
    """
    i = term.shift
    base = term.base
    if isinstance(base, Line):
        n = base.n
        if n == k:
            return TermRewrite(((ExceptionalSlope(i, 0), line(k, i, mult)),), ZERO)
        if n == k + 1:
            return TermRewrite(((ExceptionalSlope(i, 1), line(k + 1, i, mult)),), ZERO)
        if n > k + 1:
            low = (ExceptionalSlope(i + 1, 0), line(k, i + 1, mult * (n - k - 1)))
            high = (ExceptionalSlope(i, 1), line(k + 1, i, mult * (n - k)))
            return TermRewrite((low, high), high[1])
        # n < k
        low = (ExceptionalSlope(i, 0), line(k, i, mult * (k - n + 1)))
        high = (ExceptionalSlope(i - 1, 1), line(k + 1, i - 1, mult * (k - n)))
        return TermRewrite((low, high), high[1])
    d = base.d
    low = (ExceptionalSlope(i + 1, 0), line(k, i + 1, mult * d))
    high = (ExceptionalSlope(i, 1), line(k + 1, i, mult * d))
    return TermRewrite((low, high), high[1])


def hn_exceptional(x: DerivedObject, k: int, p) -> HNFiltration:
    """HN filtration over (O(k), O(k+1)): rewrite summands, merge by slope."""
    return ExceptionalP1(k, p).hn(x)


# --- refinement order -----------------------------------------------------------

@dataclass(frozen=True)
class FinerVerdict:
    """Outcome of a window check of the refinement conditions.

    `condition` names the first failing condition ("semistable",
    "well_defined", "order", "tau") and `witnesses` lists all window
    generators breaking semistability, when that is the failure.
    """

    holds: bool
    condition: str = ""
    witness: str = ""
    witnesses: tuple[str, ...] = ()

    def __bool__(self):
        return self.holds


def is_finer(fine: StabilityFamily, weak: StabilityFamily, window: Window) -> FinerVerdict:
    """Window certification that `fine` refines `weak`.

    Checks, on all of `fine`'s window generators: (i) each is
    weak-semistable; (ii) the induced slope map is well defined and
    order-compatible; (iii) the induced map commutes with tau.  For the
    shift-periodic families here a window check at the default radius
    certifies the global statement.
    """
    gens = fine.window_generators(window)
    assignments = []  # (generator, fine slope, weak slope)
    bad = []
    for g in gens:
        phi = fine.semistable_slope(g)
        psi = weak.semistable_slope(g)
        if psi is None:
            bad.append(g.render())
        else:
            assignments.append((g, phi, psi))
    if bad:
        return FinerVerdict(False, "semistable",
                            f"{bad[0]} is fine-semistable but not weak-semistable",
                            tuple(bad))

    induced: dict = {}
    for g, phi, psi in assignments:
        if phi in induced and induced[phi] != psi:
            return FinerVerdict(False, "well_defined",
                                f"slope {fine.render_slope(phi)} maps to two weak slopes")
        induced[phi] = psi

    for phi1, psi1 in induced.items():
        for phi2, psi2 in induced.items():
            if fine.compare(phi1, phi2) == Ordering.LESS \
                    and weak.compare(psi1, psi2) == Ordering.GREATER:
                return FinerVerdict(False, "order",
                                    f"{fine.render_slope(phi1)} < {fine.render_slope(phi2)} "
                                    f"but induced slopes reverse: {weak.render_slope(psi1)} > "
                                    f"{weak.render_slope(psi2)}")

    for phi, psi in induced.items():
        tphi = fine.tau(phi)
        if tphi in induced and induced[tphi] != weak.tau(psi):
            return FinerVerdict(False, "tau",
                                f"induced map does not commute with tau at {fine.render_slope(phi)}")

    return FinerVerdict(True)


# --- coarsening -----------------------------------------------------------------

@dataclass(frozen=True)
class SlopePartition:
    """Blocks of a slope set, described by predicates.

    `block_of` maps a slope to its block id, `compare_blocks` orders the
    block ids, and `tau_block` / `tau_block_inv` give the induced shift
    on blocks.  Order-congruence and tau-stability are checked on a
    window by `coarsen`.
    """

    label: str
    block_of: Callable
    compare_blocks: Callable
    tau_block: Callable
    tau_block_inv: Callable


def by_shift_partition() -> SlopePartition:
    """Blocks of the standard slope set by shift level (the coarse analog)."""
    return SlopePartition(
        label="by-shift",
        block_of=lambda s: s.i,
        compare_blocks=lambda a, b: Ordering.of(a, b),
        tau_block=lambda b: b + 1,
        tau_block_inv=lambda b: b - 1,
    )


def column_partition() -> SlopePartition:
    """The two-column blocks of an exceptional slope set.

    Order-congruent only for p = inf, where the whole first column sits
    below the second; for finite p the columns interleave and `coarsen`
    rejects the partition.
    """
    return SlopePartition(
        label="columns",
        block_of=lambda s: s.col,
        compare_blocks=lambda a, b: Ordering.of(a, b),
        tau_block=lambda b: b,
        tau_block_inv=lambda b: b,
    )


class CoarsenedFamily(StabilityFamily):
    """The derived family of a validated slope-set partition.

    Semistable objects are those whose base HN slopes all lie in one
    block; HN filtrations arise from the base filtration by grouping
    consecutive quotients with equal blocks.
    """

    def __init__(self, base: StabilityFamily, partition: SlopePartition):
        self.base = base
        self.partition = partition
        self.kind = f"coarsened({base.kind}; {partition.label})"
        self.zero = base.zero

    def accepts(self, x) -> bool:
        return self.base.accepts(x)

    def hom_profile(self, x, y):
        return self.base.hom_profile(x, y)

    def k0(self, x):
        return self.base.k0(x)

    def single_term_object(self, term, mult: int):
        return self.base.single_term_object(term, mult)

    def compare(self, a, b) -> Ordering:
        return self.partition.compare_blocks(a, b)

    def tau(self, s):
        return self.partition.tau_block(s)

    def tau_inv(self, s):
        return self.partition.tau_block_inv(s)

    def slope_of_term(self, term):
        s = self.base.slope_of_term(term)
        return None if s is None else self.partition.block_of(s)

    def term_filtration(self, term, mult: int) -> TermRewrite:
        base_rw = self.base.term_filtration(term, mult)
        grouped: list[tuple[object, object]] = []
        for slope, obj in base_rw.quotients:
            block = self.partition.block_of(slope)
            if grouped and self.compare(grouped[-1][0], block) == Ordering.EQUAL:
                grouped[-1] = (grouped[-1][0], grouped[-1][1] + obj)
            else:
                grouped.append((block, obj))
        mid = self.zero
        for _, obj in grouped[1:]:
            mid = mid + obj
        return TermRewrite(tuple(grouped), mid)

    def semistable_slope(self, x):
        self._require(x)
        if x.is_zero:
            return None
        blocks = {self.partition.block_of(s) for s in self.base.hn(x).slopes}
        if len(blocks) == 1:
            return blocks.pop()
        return None

    def window_generators(self, window: Window):
        return self.base.window_generators(window)

    def random_object(self, rng, window: Window):
        return self.base.random_object(rng, window)

    def descriptor(self) -> dict:
        return {"family": "coarsened", "base": self.base.descriptor(),
                "partition": self.partition.label}

    def slope_json(self, s) -> dict:
        return {"block": str(s)}

    def render_slope(self, s) -> str:
        return f"[{s}]"


def coarsen(family: StabilityFamily, partition: SlopePartition,
            window: Window = Window()) -> CoarsenedFamily:
    """Derive the coarsened family, validating the partition on a window.

    The blocks must be order-congruent (slopes in distinct blocks
    compare the way their blocks do) and permuted by tau; violations
    raise InvalidPartitionError with a witness.
    """
    slopes = []
    seen = set()
    for g in family.window_generators(window):
        s = family.semistable_slope(g)
        if s is not None and s not in seen:
            seen.add(s)
            slopes.append(s)
    for s1 in slopes:
        for s2 in slopes:
            b1, b2 = partition.block_of(s1), partition.block_of(s2)
            cmp_slopes = family.compare(s1, s2)
            cmp_blocks = partition.compare_blocks(b1, b2)
            if cmp_slopes == Ordering.LESS and cmp_blocks == Ordering.GREATER:
                raise InvalidPartitionError(
                    f"blocks are not order-congruent: {family.render_slope(s1)} < "
                    f"{family.render_slope(s2)} but block {b1} > block {b2}")
            if cmp_blocks == Ordering.EQUAL and b1 != b2:
                raise InvalidPartitionError("block ids must order consistently with equality")
    for s in slopes:
        t = family.tau(s)
        if partition.block_of(t) != partition.tau_block(partition.block_of(s)):
            raise InvalidPartitionError(
                f"blocks are not tau-stable at {family.render_slope(s)}")
    return CoarsenedFamily(family, partition)


# --- finest check -----------------------------------------------------------------

def finest_check(family: StabilityFamily, window: Window) -> Report:
    """Check the finest criterion on a window: within each slope, all pairs
    of semistable objects admit nonzero maps in both directions."""
    groups: dict = {}
    for g in family.window_generators(window):
        s = family.semistable_slope(g)
        if s is not None:
            groups.setdefault(s, []).append(g)
    ok, detail = True, ""
    pairs_checked = 0
    for s, gens in groups.items():
        samples = list(gens) + [2 * gens[0]]
        for a in samples:
            for b in samples:
                pairs_checked += 1
                if family.hom_profile(a, b)[0] == 0:
                    ok = False
                    detail = (f"Hom^0({a.render()}, {b.render()}) = 0 within slope "
                              f"{family.render_slope(s)}")
                    break
            if not ok:
                break
        if not ok:
            break
    item = CheckItem("mutual_hom_nonzero", ok,
                     detail if not ok else f"{pairs_checked} pairs checked")
    return Report((item,))


# --- descriptors ------------------------------------------------------------------

def family_from_descriptor(desc: dict) -> StabilityFamily:
    """Rebuild a family from its JSON descriptor."""
    kind = desc.get("family")
    if kind == "coarse":
        return CoarseZ()
    if kind == "standard":
        return StandardP1(tuple(desc.get("point_order", ())))
    if kind == "exceptional":
        p = desc.get("p", 0)
        return ExceptionalP1(int(desc.get("k", 0)), INF if p == "inf" else int(p))
    if kind == "elliptic":
        from .elliptic import EllipticStandard
        return EllipticStandard(tuple(desc.get("point_order", ())))
    raise ValueError(f"unknown family descriptor {desc!r}")

"""Tests for the elliptic-curve model: stable classes, Hom rules, tilting pairs."""

import itertools
import math
import random
from fractions import Fraction

import pytest

from tstab.elliptic import (ELLIPTIC_ZERO, EllipticObject, EllipticStandard, ShiftedClass,
                            StableClass, a_qp_split, elliptic_heart_contains, hn_elliptic,
                            hom_dim_stable, hom_profile_elliptic, mu_class, stable)
from tstab.errors import QOutOfRangeError
from tstab.p1 import Point
from tstab.slopes import ExtendedRational, PLUS_INFINITY
from tstab.stability import Window, validate_stability, verify_hn

L, M, N = Point("l"), Point("m"), Point("n")
FAMILY = EllipticStandard()
WINDOW = Window(max_degree=4, max_shift=2, points=(L, M, N), samples=25)


def _window_classes(max_rank=5, max_degree=7, points=(L, M, N)):
    classes = []
    for pt in points:
        classes.append(StableClass(0, 1, pt))
        for r in range(1, max_rank + 1):
            for d in range(-max_degree, max_degree + 1):
                if math.gcd(r, d) == 1:
                    classes.append(StableClass(r, d, pt))
    return classes


# --- stable classes --------------------------------------------------------------

def test_stable_class_validation():
    StableClass(1, 0, L)
    StableClass(0, 1, L)
    StableClass(2, -3, L)
    with pytest.raises(ValueError):
        StableClass(2, 4, L)
    with pytest.raises(ValueError):
        StableClass(0, 2, L)
    with pytest.raises(ValueError):
        StableClass(-1, 1, L)


def test_mu_class_examples():
    assert mu_class(StableClass(1, 0, L)) == ExtendedRational.finite(0)
    assert mu_class(StableClass(0, 1, L)) == PLUS_INFINITY
    assert mu_class(StableClass(2, 3, L)) == ExtendedRational.finite(Fraction(3, 2))


def test_hom_dim_stable_examples():
    e, f = StableClass(1, 0, L), StableClass(1, 1, M)
    # Euler oracle: chi = r_e d_f - d_e r_f = 1, concentrated in degree 0
    assert hom_dim_stable(e, f, 0) - hom_dim_stable(e, f, 1) == 1
    assert hom_dim_stable(e, f, 0) == 1
    assert hom_dim_stable(e, e, 0) == 1 and hom_dim_stable(e, e, 1) == 1
    g = StableClass(1, 0, M)
    assert hom_dim_stable(e, g, 0) == 0 and hom_dim_stable(e, g, 1) == 0


def test_euler_and_serre_identities_on_window():
    classes = _window_classes(max_rank=3, max_degree=5, points=(L, M))
    for e, f in itertools.product(classes, classes):
        chi = e.r * f.d - e.d * f.r
        assert hom_dim_stable(e, f, 0) - hom_dim_stable(e, f, 1) == chi
        assert hom_dim_stable(e, f, 1) == hom_dim_stable(f, e, 0)
        assert hom_dim_stable(e, f, 0) >= 0
        assert hom_dim_stable(e, f, 1) >= 0


# --- objects and filtrations -------------------------------------------------------

def test_normal_form_and_render():
    x = stable(1, 1, M) + 2 * stable(1, 0, L) + stable(1, 1, M)
    assert x.render() == "2*S(1,0,l) + 2*S(1,1,m)"
    assert (3 * stable(0, 1, L, shift=1)).render() == "3*S(0,1,l)[1]"
    assert ELLIPTIC_ZERO.render() == "0"
    assert x.shift(2).shift(-2) == x


def test_hn_elliptic_grouping():
    filt = hn_elliptic(stable(1, 0, L) + stable(1, 1, M))
    assert [s.mu for s in filt.slopes] == [ExtendedRational.finite(0),
                                           ExtendedRational.finite(1)]
    filt = hn_elliptic(stable(0, 1, L) + stable(1, 5, M))
    assert [s.cls.is_skyscraper for s in filt.slopes] == [False, True]
    assert len(hn_elliptic(4 * stable(2, 1, N)).quotients) == 1


def test_hn_elliptic_orders_by_shift_mu_then_point():
    x = stable(1, 0, M) + stable(1, 0, L) + stable(1, 1, L) + stable(2, 1, L, shift=-1)
    filt = hn_elliptic(x)
    rendered = [o.render() for o in filt.quotient_objects]
    assert rendered == ["S(2,1,l)[-1]", "S(1,0,l)", "S(1,0,m)", "S(1,1,l)"]
    report = verify_hn(x, filt, FAMILY)
    assert report.ok, report.summary()


def test_single_class_objects_are_semistable():
    for cls in _window_classes(max_rank=3, max_degree=4, points=(L,))[:40]:
        for shift in (-1, 0, 2):
            obj = 2 * EllipticObject(((ShiftedClass(cls, shift), 1),))
            assert FAMILY.semistable_slope(obj) is not None


def test_equal_slope_distinct_points_not_semistable():
    x = stable(1, 0, L) + stable(1, 0, M)
    assert FAMILY.semistable_slope(x) is None
    assert len(FAMILY.hn(x).quotients) == 2


def test_validate_elliptic_stability():
    report = validate_stability(FAMILY, WINDOW)
    assert report.ok, report.summary()


# --- tilting pairs -----------------------------------------------------------------

def test_a_qp_split_standard_pair():
    x = stable(1, -1, L) + stable(1, 0, L) + stable(1, 1, M) + stable(0, 1, N)
    first, second = a_qp_split(x, 0)
    assert second == stable(1, -1, L)
    assert first == stable(1, 0, L) + stable(1, 1, M) + stable(0, 1, N)


def test_a_qp_split_point_set_matters():
    x = stable(1, 0, L) + stable(1, 0, M)
    first, second = a_qp_split(x, 0, P={"l"})
    assert second == stable(1, 0, L)
    assert first == stable(1, 0, M)


def test_a_qp_split_skyscraper_stays_high():
    for q in (0, Fraction(1, 2)):
        first, second = a_qp_split(stable(0, 1, L), q)
        assert second.is_zero and first == stable(0, 1, L)
    first, second = a_qp_split(stable(0, 1, L), "inf")
    assert second.is_zero  # mu = q = inf but l not in P
    first, second = a_qp_split(stable(0, 1, L), "inf", P={"l"})
    assert first.is_zero and second == stable(0, 1, L)


def test_a_qp_split_rejects_bad_q_and_shifts():
    with pytest.raises(QOutOfRangeError):
        a_qp_split(stable(1, 0, L), 1)
    with pytest.raises(QOutOfRangeError):
        a_qp_split(stable(1, 0, L), Fraction(-1, 2))
    with pytest.raises(ValueError):
        a_qp_split(stable(1, 0, L, shift=1), 0)


def test_a_qp_split_hom_vanishing_random():
    rng = random.Random(77)
    classes = _window_classes(max_rank=3, max_degree=5)
    for q in (0, Fraction(1, 2), "inf"):
        for P in (frozenset(), frozenset({"l"})):
            for _ in range(40):
                picks = [rng.choice(classes) for _ in range(rng.randint(1, 5))]
                x = ELLIPTIC_ZERO
                for cls in picks:
                    x = x + stable(cls.r, cls.d, cls.x)
                first, second = a_qp_split(x, q, P)
                assert first + second == x
                assert hom_profile_elliptic(first, second)[0] == 0


def test_elliptic_heart_contains_examples():
    assert elliptic_heart_contains(stable(1, 1, L), 0)
    assert elliptic_heart_contains(stable(1, -1, L, shift=1), 0)
    assert not elliptic_heart_contains(stable(1, -1, L), 0)
    assert not elliptic_heart_contains(stable(1, 1, L, shift=2), 0)
    assert elliptic_heart_contains(ELLIPTIC_ZERO, 0)
    # mu = q membership splits along P
    assert elliptic_heart_contains(stable(1, 0, L, shift=1), 0, P={"l"})
    assert not elliptic_heart_contains(stable(1, 0, L, shift=1), 0)


def test_heart_of_standard_pair_is_shifted_sheaves():
    # q = 0, P = empty: mu >= 0 lives at shift 0, mu < 0 at shift 1
    assert elliptic_heart_contains(stable(2, 1, L) + stable(1, -2, M, shift=1), 0)
    assert not elliptic_heart_contains(stable(2, 1, L, shift=1), 0)

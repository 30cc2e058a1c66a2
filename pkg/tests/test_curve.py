"""Curve building, classification, deck transformations, chart changes."""
from __future__ import annotations

from fractions import Fraction as Q

import pytest

from logtr import fixtures
from logtr.curve import (
    AssumptionViolation,
    ChartError,
    LogRatFunc,
    UnsupportedCurveError,
    build_curve,
    classify_log_point,
    deck_transform,
    mobius,
    swap_curve,
)
from logtr.fixtures import lrf
from logtr.ratfunc import RatFunc

Z = RatFunc.z()


def test_lambert_classification():
    c = fixtures.lambert()
    assert [r.p for r in c.rams] == [1]
    assert c.vitals == ()  # dy = dz has no poles
    dual = swap_curve(c)
    assert dual.rams == ()  # dual side is trivial
    assert [(v.a, v.alpha_inv) for v in dual.vitals] == [(Q(0), Q(-1))]


def test_airy_classification_and_deck():
    c = fixtures.airy()
    assert [r.p for r in c.rams] == [0]
    assert c.vitals == ()
    s = deck_transform(c, 0, 6)
    assert s.coeff(1) == -1
    assert all(s.coeff(k) == 0 for k in range(2, 7))


def test_bms_ram_point():
    c = fixtures.bms3()
    assert [r.p for r in c.rams] == [Q(1, 2)]


def test_lambert_deck_series():
    # independent undetermined-coefficient solve of x(sigma) = x(z) for
    # x = z - log z at p = 1 gives sigma = 1 - t + (2/3) t^2 - (4/9) t^3 + ...
    c = fixtures.lambert()
    s = deck_transform(c, 1, 3)
    assert [s.coeff(k) for k in (1, 2, 3)] == [-1, Q(2, 3), Q(-4, 9)]


def test_deck_is_involution_on_all_fixtures():
    for name in fixtures.FIXTURES:
        c = fixtures.get(name)
        for r in c.rams:
            s = r.deck(9)
            ss = s.compose(s)
            assert ss.coeff(1) == 1
            assert all(ss.coeff(k) == 0 for k in range(2, ss.high + 1)), name


def test_simple_zero_certificate():
    for name in fixtures.FIXTURES:
        c = fixtures.get(name)
        for r in c.rams:
            xl = r.x_local(6)
            assert xl.coeff(0) == 0 and xl.coeff(1) == 0 and xl.coeff(2) != 0


def test_classify_log_points():
    # y = log z next to x = z - log z: dx has a pole at 0, so not vital
    c = build_curve(lrf(Z, [(0, -1)]), lrf(0, [(0, 1)]))
    assert classify_log_point(c, 0, "y") == "non-vital"
    # three-pole Hodge-type curve: only the log point away from dy is vital
    th = fixtures.triple_hodge()
    assert classify_log_point(th, Q(1, 2), "x") == "vital"
    assert classify_log_point(th, 0, "x") == "non-vital"
    # a double pole of dy is never vital regardless of residue
    c2 = build_curve(lrf(Z * Z), lrf(Z - 1 / (Z - 3)))
    assert classify_log_point(c2, 3, "y") == "non-vital"


def test_vital_detection_kappa_insertion():
    c = fixtures.kappa_insertion()
    assert [(v.a, v.alpha_inv) for v in c.vitals] == [(Q(-1), Q(1))]
    assert [r.p for r in c.rams] == [1]


def test_mixed_curve_both_sides():
    c = fixtures.mixed()
    assert [(v.a, v.alpha_inv) for v in c.vitals] == [(Q(-1), Q(1))]
    dual = swap_curve(c)
    assert [r.p for r in dual.rams] == [Q(-4, 5), Q(-1, 5)]
    assert [(v.a, v.alpha_inv) for v in dual.vitals] == [(Q(0), Q(-1))]


def test_irrational_ramification_rejected():
    # x = z^2 - log z has dx zeros at +-1/sqrt(2)
    with pytest.raises(UnsupportedCurveError):
        build_curve(lrf(Z * Z, [(0, -1)]), lrf(Z))


def test_chart_errors():
    # dx vanishes at infinity
    with pytest.raises(ChartError):
        build_curve(lrf(-1 / (2 * Z * Z)), lrf(Z))
    # vital point hiding at infinity: dy = dz/z simple there, dx regular
    with pytest.raises(ChartError):
        build_curve(lrf(1 / Z), lrf(0, [(0, 1)]))


def test_assumption_violations():
    # non-simple zero of dx
    with pytest.raises(AssumptionViolation):
        build_curve(lrf(Z ** 3), lrf(Z))
    # dy vanishing at the zero of dx
    with pytest.raises(AssumptionViolation):
        build_curve(lrf(Z * Z), lrf(Z * Z))


def test_dual_trivial_flags():
    assert fixtures.lambert().dual_trivial
    assert fixtures.airy().dual_trivial
    assert fixtures.rorbifold2().dual_trivial
    assert not fixtures.mixed().dual_trivial


def test_mobius_identity_and_shift():
    c = build_curve(lrf(Z * Z), lrf(Z))
    same = mobius(c, 1, 0, 0, 1)
    assert same.hash == c.hash
    shifted = mobius(c, 1, 1, 0, 1)  # z -> z + 1
    assert [r.p for r in shifted.rams] == [-1]


def test_mobius_log_inversion():
    c = build_curve(lrf(0, [(0, 1)]), lrf(Z))
    flipped = mobius(c, 0, 1, 1, 0)  # z -> 1/z
    assert flipped.x.log_terms == ((Q(0), Q(-1)),)


def test_mobius_preserves_classification():
    c = fixtures.kappa_insertion()
    moved = mobius(c, 1, 3, 0, 1)  # z -> z + 3
    assert [(v.a, v.alpha_inv) for v in moved.vitals] == [(Q(-4), Q(1))]
    assert [r.p for r in moved.rams] == [Q(-2)]
    assert classify_log_point(moved, -4, "y") == "vital"


def test_vitality_never_on_higher_order_poles():
    for name in fixtures.FIXTURES:
        c = fixtures.get(name)
        for v in c.vitals:
            assert c.yp.pole_order_at(v.a) == 1
            assert not c.xp.has_pole_at(v.a)


def test_curve_hash_ignores_log_order():
    a = LogRatFunc(RatFunc.const(0), [(0, 1), (2, 1)])
    b = LogRatFunc(RatFunc.const(0), [(2, 1), (0, 1)])
    ca = build_curve(a, lrf(0, [(0, 1)]))
    cb = build_curve(b, lrf(0, [(0, 1)]))
    assert ca.hash == cb.hash

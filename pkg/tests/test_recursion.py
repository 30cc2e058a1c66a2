"""Recursion engine: residue recursion, corrections, loop equations."""
from __future__ import annotations

from fractions import Fraction as Q

import pytest

from logtr import fixtures
from logtr.curve import build_curve
from logtr.differentials import FDiff, check_symmetry, fd_to_ratfunc
from logtr.fixtures import lrf
from logtr.qmath import ExactError
from logtr.ratfunc import RatFunc
from logtr.recursion import Engine, check_loop_equations, check_projection
from logtr.series import expand_ratfunc

Z = RatFunc.z()


def eng(name):
    return Engine(fixtures.get(name))


# ---------------------------------------------------------------------------
# frozen one-residue oracles for x = z^2, y = z
#
# (0,3): the only ramification point is 0 with deck -t; the kernel is
# dz1 * (-2) sum_{k odd} t^k z1^{-k-1} / (2 * 4 t^2), and the bracket at
# order t^0 is -2 eta_{0,2}(z2) eta_{0,2}(z3), giving (1/2) eta2 x eta2 x eta2.
# (1,1): writing omega = c * dz/z^4, the quadratic constraint at the
# ramification point forces -1/4 + 4c = 0, i.e. c = 1/16.
# ---------------------------------------------------------------------------

def test_airy_0_3():
    fd = eng("airy").tr(0, 3)
    key = tuple(((Q(0), 2),) * 3)
    assert fd.terms == {key: Q(1, 2)}


def test_airy_1_1():
    fd = eng("airy").tr(1, 1)
    assert fd.terms == {((Q(0), 4),): Q(1, 16)}


def test_airy_symmetry_of_computed_1_2():
    fd = eng("airy").tr(1, 2)
    assert not fd.is_zero()
    assert check_symmetry(fd)


def test_lambert_0_3_pole_location():
    fd = eng("lambert").tr(0, 3)
    assert fd.pole_support() == {Q(1)}


def test_genus0_log_equals_plain():
    e = eng("kappa_insertion")
    for n in (3, 4):
        assert e.tr(0, n) == e.logtr(0, n)


def test_log_equals_plain_without_vital_points():
    for name in ("airy", "lambert", "bms3", "rorbifold2", "triple_hodge"):
        e = eng(name)
        for (g, n) in ((0, 3), (1, 1), (1, 2), (0, 4)):
            assert e.tr(g, n) == e.logtr(g, n), name


def test_first_divergence_at_1_1_on_vital_curve():
    e = eng("kappa_insertion")
    assert e.tr(0, 3) == e.logtr(0, 3)
    assert e.tr(1, 1) != e.logtr(1, 1)


def test_kappa_insertion_logtr_1_1_has_pole_at_minus_one():
    e = eng("kappa_insertion")
    assert Q(-1) in e.logtr(1, 1).pole_support()
    assert Q(-1) not in e.tr(1, 1).pole_support()


def test_log_correction_local_normalization():
    # with x = z near the vital point and residue 1, the genus-1 germ is
    # -(1/24) d^2/dz^2 log(z-a) dz = (1/24) dz/(z-a)^2
    c = build_curve(lrf(Z), lrf(0, [(5, 1)]))
    e = Engine(c)
    (v, form), = e.log_correction(1)
    assert form == RatFunc.const(Q(1, 24)) / (Z - 5) ** 2
    # exactness: zero residue at the vital point
    assert expand_ratfunc(form, Q(5), -4, 2).residue() == 0
    # the recursion correction enters with the opposite sign
    assert e.vital_correction_fd(1).terms == {((Q(5), 2),): Q(-1, 24)}


def test_log_correction_empty_without_vitals():
    assert eng("airy").vital_correction_fd(1).is_zero()


def test_loop_equations_airy_and_kappa():
    for name, mode in (("airy", "tr"), ("kappa_insertion", "logtr")):
        e = eng(name)
        rows = check_loop_equations(e, mode, budget=2)
        assert rows
        for row in rows:
            assert row["linear_ok"] and row["quadratic_ok"], (name, row)


def test_corrupted_output_fails_linear_check():
    e = eng("airy")
    e.tr(1, 1)
    bad = FDiff(1, {((Q(0), 4),): Q(1, 16), ((Q(0), 3),): Q(1)})
    e._memo[(1, 1, "tr")] = bad
    rows = check_loop_equations(e, "tr", budget=1)
    assert any(not r["linear_ok"] for r in rows)


def test_projection_checks():
    e = eng("kappa_insertion")
    ok = check_projection(e.logtr(1, 1), e, "logtr", 1, 1)
    assert ok["ok"], ok
    # vital-point pole on a plain-recursion output must fail
    bad = e.tr(1, 1) + FDiff(1, {((Q(-1), 2),): Q(1)})
    rep = check_projection(bad, e, "tr", 1, 1)
    assert not rep["ok"]
    # n >= 2 logarithmic outputs never carry vital poles
    rep2 = check_projection(e.logtr(1, 2), e, "logtr", 1, 2)
    assert rep2["ok"]
    assert Q(-1) not in e.logtr(1, 2).pole_support()


def test_unstable_requests_rejected():
    with pytest.raises(ExactError):
        eng("airy").tr(0, 2)
    with pytest.raises(ExactError):
        eng("airy").tr(0, 1)


def test_family_enumeration():
    fam = eng("airy").family(3, "tr")
    assert set(fam) == {(0, 3), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1)}


def test_pole_orders_within_cap():
    e = eng("lambert")
    for (g, n) in ((0, 3), (1, 1), (1, 2), (2, 1)):
        fd = e.tr(g, n)
        assert fd.max_order_at(Q(1)) <= 6 * g - 4 + 2 * n

"""Bridge between the plain and logarithmic families."""
from __future__ import annotations

from fractions import Fraction as Q

from logtr import fixtures
from logtr.bridge import log_from_tr, phi, star_pair, tr_from_log
from logtr.differentials import FDiff
from logtr.recursion import Engine


def test_phi_zero_without_vital_points():
    c = fixtures.airy()
    assert phi(c, 1).is_zero()
    assert phi(c, 2).is_zero()


def test_phi_kappa_insertion():
    c = fixtures.kappa_insertion()
    p1 = phi(c, 1)
    assert p1.pole_support() == {Q(-1)}
    # phi_1 equals the (1,1) discrepancy between the two recursions
    e = Engine(c)
    assert e.logtr(1, 1) - e.tr(1, 1) == p1


def test_star_pair_basics():
    c = fixtures.kappa_insertion()
    e = Engine(c)
    om = e.tr(1, 1)
    zero = FDiff.zero(1)
    assert star_pair(om, 0, zero, c).is_zero()
    p1 = phi(c, 1)
    a = star_pair(om, 0, p1, c)
    b = star_pair(om, 0, p1.scale(Q(3, 2)), c)
    assert b == a.scale(Q(3, 2))


def test_star_pair_with_bergman_is_ram_projection():
    # phi_g is regular at the ramification points, so its projection there
    # vanishes; the pairing against a two-point seed slot must agree
    c = fixtures.kappa_insertion()
    e = Engine(c)
    p1 = phi(c, 1)
    # emulate the seed slot by a stored two-point differential: the computed
    # (0,3) has only ramification poles, pairing it against phi stays finite
    fd = e.tr(0, 3)
    res = star_pair(fd, 2, p1, c)
    assert res.n == 2


def test_bridge_identity_with_empty_vital_set():
    c = fixtures.lambert()
    e = Engine(c)
    fam = e.family(3, "tr")
    for (g, n), fd in fam.items():
        assert log_from_tr(fam, c, g, n) == fd
        assert tr_from_log(fam, c, g, n) == fd


def test_bridge_equals_direct_recursion_on_kappa_insertion():
    c = fixtures.kappa_insertion()
    e = Engine(c)
    budget = 3
    tr_fam = e.family(budget, "tr")
    log_fam = e.family(budget, "logtr")
    for (g, n) in tr_fam:
        assert log_from_tr(tr_fam, c, g, n) == log_fam[(g, n)], (g, n)
        assert tr_from_log(log_fam, c, g, n) == tr_fam[(g, n)], (g, n)


def test_bridge_round_trip_mixed_curve():
    c = fixtures.mixed()
    e = Engine(c)
    budget = 3
    tr_fam = e.family(budget, "tr")
    rebuilt_log = {k: log_from_tr(tr_fam, c, *k) for k in tr_fam}
    back = {k: tr_from_log(rebuilt_log, c, *k) for k in tr_fam}
    assert back == tr_fam

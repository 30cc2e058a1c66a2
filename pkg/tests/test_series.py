"""Exact scalar / polynomial / rational / Laurent layer."""
from __future__ import annotations

import random
from fractions import Fraction as Q

import pytest

from logtr.poly import Poly
from logtr.qmath import InsufficientPrecision, parse_q, qstr
from logtr.ratfunc import RatFunc
from logtr.series import INF, LSeries, expand_ratfunc, log_shift_series, sfun_series

Z = RatFunc.z()


def rand_ratfunc(rng, max_deg=3):
    def poly():
        while True:
            p = Poly([Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(rng.randint(1, max_deg + 1))])
            if not p.is_zero():
                return p
    return RatFunc(poly(), poly())


# ---------------------------------------------------------------------------
# rational parsing
# ---------------------------------------------------------------------------

def test_parse_and_format():
    assert parse_q("3/4") == Q(3, 4)
    assert parse_q("-7") == Q(-7)
    assert qstr(Q(-7, 2)) == "-7/2"
    with pytest.raises(ValueError):
        parse_q("0.5")
    with pytest.raises(ValueError):
        parse_q(0.5)


# ---------------------------------------------------------------------------
# rational function field
# ---------------------------------------------------------------------------

def test_rf_self_cancellation():
    f = Z / (Z - 1)
    assert (f - f).is_zero()


def test_rf_partial_fraction_identity():
    # (1/2)/(z-1) - (1/2)/(z+1) recombines to 1/(z^2 - 1)
    lhs = RatFunc.const(Q(1, 2)) / (Z - 1) - RatFunc.const(Q(1, 2)) / (Z + 1)
    rhs = 1 / (Z * Z - 1)
    assert lhs == rhs


def test_rf_product_inverse():
    # the Lambert dx/dz times its reciprocal
    f = 1 - 1 / Z
    g = Z / (Z - 1)
    assert f * g == RatFunc.const(1)


def test_rf_canonical_form():
    f = RatFunc(Poly([0, 2]), Poly([0, 0, 4]))  # 2z / 4z^2 = 1/(2z)
    assert f.num == Poly([Q(1, 2)])
    assert f.den == Poly([0, 1])
    assert f.den.leading() == 1


def test_rf_field_axioms_randomized():
    rng = random.Random(20240)
    for _ in range(25):
        a, b, c = (rand_ratfunc(rng) for _ in range(3))
        assert (a + b) * c == a * c + b * c
        assert a * (b * c) == (a * b) * c
        assert a + (b + c) == (a + b) + c
        if not b.is_zero():
            assert (a / b) * b == a


def test_rf_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        Z / RatFunc.const(0)


# ---------------------------------------------------------------------------
# Laurent expansions
# ---------------------------------------------------------------------------

def test_expand_one_over_z_at_zero():
    s = expand_ratfunc(1 / Z, Q(0), -2, 1)
    assert s.coeff(-1) == 1
    assert all(s.coeff(k) == 0 for k in (-2, 0, 1))


def test_expand_lambert_derivative_at_one():
    s = expand_ratfunc(1 - 1 / Z, Q(1), 0, 2)
    # hand expansion: (z-1)/z = t/(1+t) = t - t^2 + ...
    assert [s.coeff(k) for k in (0, 1, 2)] == [0, 1, -1]


def test_expand_at_infinity_geometric():
    s = expand_ratfunc(Z / (Z - 1), INF, 0, 2)
    # in w = 1/z: 1/(1-w) = 1 + w + w^2
    assert [s.coeff(k) for k in (0, 1, 2)] == [1, 1, 1]


def test_expand_product_matches_product_of_expansions():
    rng = random.Random(7711)
    for _ in range(20):
        f, g = rand_ratfunc(rng), rand_ratfunc(rng)
        if f.is_zero() or g.is_zero():
            continue
        p = Q(rng.randint(-2, 2))
        sf = expand_ratfunc(f, p, -6, 8)
        sg = expand_ratfunc(g, p, -6, 8)
        sp = expand_ratfunc(f * g, p, sf.low + sg.low, 6)
        prod = sf * sg
        for k in range(prod.low, min(prod.high, 6) + 1):
            assert prod.coeff(k) == sp.coeff(k)


def test_window_soundness_errors():
    s = expand_ratfunc(1 / Z, Q(0), -1, 3)
    with pytest.raises(InsufficientPrecision):
        s.coeff(4)
    # residue of a window that cannot see order -1
    deep = expand_ratfunc(1 / Z ** 4, Q(0), -4, -3)
    with pytest.raises(InsufficientPrecision):
        deep.residue()


# ---------------------------------------------------------------------------
# residues
# ---------------------------------------------------------------------------

def test_residue_basics():
    assert expand_ratfunc(1 / Z, Q(0), -2, 2).residue() == 1
    assert expand_ratfunc(1 / Z ** 2, Q(0), -3, 2).residue() == 0
    f = 1 / (Z - 1) + 3 / (Z - 1) ** 2
    assert expand_ratfunc(f, Q(1), -3, 2).residue() == 1


def test_residue_of_exact_differential_vanishes():
    rng = random.Random(99)
    for _ in range(20):
        f = rand_ratfunc(rng)
        p = Q(rng.randint(-2, 2))
        df = f.derivative()
        if df.is_zero():
            continue
        assert expand_ratfunc(df, p, -8, 4).residue() == 0


# ---------------------------------------------------------------------------
# series calculus
# ---------------------------------------------------------------------------

def test_reversion_identity_and_rescale():
    t = LSeries.var(6)
    assert [t.reversion().coeff(k) for k in range(1, 7)] == [1, 0, 0, 0, 0, 0]
    two_t = t.scale(2)
    assert two_t.reversion().coeff(1) == Q(1, 2)


def test_reversion_catalan():
    # t + t^2 reverts to sum (-1)^{n-1} C_{n-1} t^n with Catalan numbers
    t = LSeries.var(6)
    s = t + t * t
    r = s.reversion()
    assert [r.coeff(k) for k in range(1, 6)] == [1, -1, 2, -5, 14]


def test_reversion_round_trip_randomized():
    rng = random.Random(5)
    for _ in range(10):
        cs = [Q(0), Q(rng.choice([1, -1, 2]))] + [Q(rng.randint(-3, 3), rng.randint(1, 2)) for _ in range(6)]
        s = LSeries(0, 7, cs)
        r = s.reversion()
        back = s.compose(r)
        assert [back.coeff(k) for k in range(back.low, back.high + 1)] == [
            1 if k == 1 else 0 for k in range(back.low, back.high + 1)
        ]


def test_exp_log_round_trip():
    zero = LSeries.zero(0, 5)
    assert zero.exp().coeff(0) == 1
    u = LSeries.var(3)
    l = (u + 1).log() if False else LSeries(0, 3, [1, 1, 0, 0]).log()
    assert [l.coeff(k) for k in range(4)] == [0, 1, Q(-1, 2), Q(1, 3)]
    f = LSeries(0, 6, [1, 1, 1, 0, 0, 0, 0])
    back = f.log().exp()
    assert [back.coeff(k) for k in range(7)] == [1, 1, 1, 0, 0, 0, 0]


def test_exp_requires_positive_valuation():
    with pytest.raises(Exception):
        LSeries(0, 3, [1, 0, 0, 0]).exp()


# ---------------------------------------------------------------------------
# the deformation kernel S(u)
# ---------------------------------------------------------------------------

def test_sfun_low_orders():
    s, sinv = sfun_series(4)
    assert [s.coeff(k) for k in range(5)] == [1, 0, Q(1, 24), 0, Q(1, 1920)]
    assert [sinv.coeff(k) for k in range(5)] == [1, 0, Q(-1, 24), 0, Q(7, 5760)]


def test_sfun_defining_identity():
    for order in (2, 4, 8):
        s, sinv = sfun_series(order)
        prod = s * sinv
        assert all(prod.coeff(k) == (1 if k == 0 else 0) for k in range(order + 1))


def test_sfun_is_even_with_unit_constant():
    s, sinv = sfun_series(9)
    assert s.coeff(0) == 1
    assert all(s.coeff(k) == 0 for k in range(1, 10, 2))
    assert all(sinv.coeff(k) == 0 for k in range(1, 10, 2))


def test_log_shift_series():
    # d/dt log(z - a) at z = p + t must match 1/(z-a) expanded at p
    p, a = Q(2), Q(-1)
    ls = log_shift_series(p, a, 6)
    direct = expand_ratfunc(1 / (Z - a), p, 0, 5)
    d = ls.derivative()
    assert all(d.coeff(k) == direct.coeff(k) for k in range(0, 6))

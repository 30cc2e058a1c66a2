"""Fixture spectral curves used by the check suites and tests.

All special points are rational by construction; where a textbook member of
a family has irrational ramification (for example x = z^2 - log z), an
equivalent member of the same family with rational ramification is used
instead (x = 2 z^2 - log z).
"""
from __future__ import annotations

from fractions import Fraction as Q

from .curve import LogRatFunc, SpectralCurve, build_curve
from .poly import Poly
from .ratfunc import RatFunc

_Z = RatFunc.z()


def lrf(rational=0, logs=()) -> LogRatFunc:
    if isinstance(rational, (int, Q)):
        rational = RatFunc.const(rational)
    return LogRatFunc(rational, logs)


def airy() -> SpectralCurve:
    return build_curve(lrf(_Z * _Z), lrf(_Z))


def lambert() -> SpectralCurve:
    return build_curve(lrf(_Z, [(0, -1)]), lrf(_Z))


def rspin2() -> SpectralCurve:
    # spin-type family x = P(z) - log z with y = z; P = 2 z^2 keeps the
    # ramification points (+-1/2) rational
    return build_curve(lrf(2 * _Z * _Z, [(0, -1)]), lrf(_Z))


def rorbifold2() -> SpectralCurve:
    # same x, orbifold-type side y = log z
    return build_curve(lrf(2 * _Z * _Z, [(0, -1)]), lrf(0, [(0, 1)]))


def triple_hodge() -> SpectralCurve:
    # three-parameter Hodge-type curve with (alpha, beta, gamma) = (1, 2, 3),
    # written in the chart Z = (1+2z)/(1+z): x = log Z - (1/2) log(Z - 1/2),
    # y = log Z; the single ramification point is Z = 1
    return build_curve(lrf(0, [(0, 1), (Q(1, 2), Q(-1, 2))]), lrf(0, [(0, 1)]))


def kappa_insertion() -> SpectralCurve:
    return build_curve(lrf(_Z, [(0, -1)]), lrf(0, [(-1, 1)]))


def bms3() -> SpectralCurve:
    # m = 3 member of the map-enumeration family x = m log(1+z) - log z, y = z
    return build_curve(lrf(0, [(-1, 3), (0, -1)]), lrf(_Z))


def family2_sample() -> SpectralCurve:
    # n-point family sample with R1/R2 = (4/3) z, R3/R4 = 1 + z, alpha = 1,
    # run on the shifted side y~ = log z; ramification at 1/2 and -3/2
    return build_curve(lrf(Q(4, 3) * _Z, [(0, -1), (-1, 1)]), lrf(0, [(0, 1)]))


def family2_data():
    """(R1, R2, R3, R4, alpha) for the n-point formula of the sample above."""
    return (Poly([0, Q(4, 3)]), Poly([1]), Poly([1, 1]), Poly([1]), Q(1))


def hock_case1() -> SpectralCurve:
    # x = log R + A z with R = z, A = 1, y = z
    return build_curve(lrf(_Z, [(0, 1)]), lrf(_Z))


def hock_case1_pole() -> SpectralCurve:
    # x = log R + A z with R = z/(z-2), A = 1/4, y = z; rams at 4 and -2
    return build_curve(lrf(Q(1, 4) * _Z, [(0, 1), (2, -1)]), lrf(_Z))


def hock_case2() -> SpectralCurve:
    # x = log R with R = z(z-2), y = log z
    return build_curve(lrf(0, [(0, 1), (2, 1)]), lrf(0, [(0, 1)]))


def mixed() -> SpectralCurve:
    # both sides carry vital points and the swapped curve has its own
    # ramification points (-4/5 and -1/5); exercises the full duality
    return build_curve(lrf(_Z, [(0, -1)]), lrf(Q(25, 8) * _Z * _Z, [(-1, 1)]))


FIXTURES = {
    "airy": airy,
    "lambert": lambert,
    "rspin2": rspin2,
    "rorbifold2": rorbifold2,
    "triple_hodge": triple_hodge,
    "kappa_insertion": kappa_insertion,
    "bms3": bms3,
    "family2": family2_sample,
    "hock_case1": hock_case1,
    "hock_case1_pole": hock_case1_pole,
    "hock_case2": hock_case2,
    "mixed": mixed,
}


def get(name: str) -> SpectralCurve:
    return FIXTURES[name]()

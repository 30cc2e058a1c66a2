"""Spectral curves on CP^1 with logarithmic singularities.

A curve is a pair (x, y) of functions whose differentials are rational; x and
y themselves may carry terms c*log(z - a).  Construction validates the
standing assumptions: all zeros of dx are simple, rational, and finite; dy is
regular and nonvanishing there; poles of dy where dx stays regular are
classified as vital (simple pole, nonzero residue) or non-vital.  Everything
is exact over Q, so special points that fail to be rational are rejected with
advice to move them by a Mobius change of chart.
"""
from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass
from fractions import Fraction

from .poly import Poly
from .qmath import ExactError, QZERO, qstr
from .ratfunc import RatFunc
from .series import INF, LSeries, expand_ratfunc, log_shift_series


class UnsupportedCurveError(ExactError):
    """A special point is irrational in this chart; apply a Mobius change."""


class ChartError(ExactError):
    """A special point sits at infinity in this chart; apply a Mobius change."""


class AssumptionViolation(ExactError):
    """The curve violates the standing assumptions of the recursion."""


DEFAULT_VALIDATION_ORDER = 8


class LogRatFunc:
    """rational(z) + sum of c * log(z - a) with distinct finite rational a."""

    __slots__ = ("rational", "log_terms")

    def __init__(self, rational: RatFunc, log_terms=()):
        terms = []
        for a, c in log_terms:
            a, c = Fraction(a), Fraction(c)
            if c != 0:
                terms.append((a, c))
        terms.sort()
        pts = [a for a, _ in terms]
        if len(set(pts)) != len(pts):
            raise ExactError("duplicate logarithmic points")
        self.rational = rational if isinstance(rational, RatFunc) else RatFunc.const(rational)
        self.log_terms = tuple(terms)

    def __eq__(self, other):
        if isinstance(other, LogRatFunc):
            return self.rational == other.rational and self.log_terms == other.log_terms
        return NotImplemented

    def __hash__(self):
        return hash((self.rational, self.log_terms))

    def __repr__(self):
        logs = " + ".join(f"{c}*log(z-{a})" for a, c in self.log_terms)
        return f"LogRatFunc({self.rational!r}" + (f" + {logs})" if logs else ")")

    def has_logs(self) -> bool:
        return bool(self.log_terms)

    def is_zero(self) -> bool:
        return self.rational.is_zero() and not self.log_terms

    def derivative(self) -> RatFunc:
        """The derivative is always an honest rational function."""
        d = self.rational.derivative()
        for a, c in self.log_terms:
            d = d + RatFunc.const(c) / (RatFunc.z() - a)
        return d

    def log_coefficient(self, a: Fraction) -> Fraction:
        for pt, c in self.log_terms:
            if pt == a:
                return c
        return QZERO

    def local_series(self, p: Fraction, low: int, high: int) -> LSeries:
        """Expansion at finite p with all constant terms dropped.

        Log terms contribute their rational tail log(1 + t/(p-a)); the
        transcendental constants log(p-a) never survive the differences and
        derivatives taken downstream, so they are not represented.  Requires
        p to avoid the logarithmic points.
        """
        s = expand_ratfunc(self.rational, p, low, high)
        s = s - s.coeff(0) if s.low <= 0 <= s.high else s
        for a, c in self.log_terms:
            s = s + log_shift_series(Fraction(p), a, high).scale(c)
        return s

    def scale(self, c: Fraction) -> "LogRatFunc":
        c = Fraction(c)
        return LogRatFunc(self.rational * c, [(a, c * k) for a, k in self.log_terms])

    def add_rational(self, f: RatFunc) -> "LogRatFunc":
        return LogRatFunc(self.rational + f, self.log_terms)


@dataclass(frozen=True)
class VitalPoint:
    a: Fraction
    alpha_inv: Fraction  # residue of dy at a

    @property
    def alpha(self) -> Fraction:
        return 1 / self.alpha_inv


class RamPoint:
    """A simple zero of dx together with its local deck data."""

    __slots__ = ("p", "_curve", "_cache", "_lock")

    def __init__(self, p: Fraction, curve: "SpectralCurve"):
        self.p = p
        self._curve = curve
        self._cache = {}
        self._lock = threading.Lock()

    def __repr__(self):
        return f"RamPoint({self.p})"

    def x_local(self, order: int) -> LSeries:
        """Series of x - x(p) in t = z - p; valuation exactly 2."""
        key = ("x", order)
        with self._lock:
            if key not in self._cache:
                s = self._curve.x.local_series(self.p, 0, order)
                if s.coeff(1) != 0 or s.coeff(2) == 0:
                    raise AssumptionViolation(f"zero of dx at {self.p} is not simple")
                self._cache[key] = s
            return self._cache[key]

    def y_local(self, order: int) -> LSeries:
        """Series of y - y(p) in t = z - p (constants dropped)."""
        key = ("y", order)
        with self._lock:
            if key not in self._cache:
                self._cache[key] = self._curve.y.local_series(self.p, 0, order)
            return self._cache[key]

    def deck(self, order: int) -> LSeries:
        """Displacement series s(t) with sigma(z) = p + s(t), s = -t + O(t^2).

        Solved order by order from x(p + s) = x(p + t); each new coefficient
        enters linearly with factor -2*c2 != 0.
        """
        key = ("deck", order)
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        xs = self.x_local(order + 1)
        c = [xs.coeff(k) for k in range(order + 2)]
        c2 = c[2]
        sig = [QZERO, Fraction(-1)] + [QZERO] * (order - 1)
        for m in range(2, order + 1):
            # residual coefficient of t^{m+1} in x_local(sigma) - x_local(t)
            comp = _compose_trunc(c, sig, m + 1)
            resid = comp[m + 1] - c[m + 1]
            sig[m] = resid / (2 * c2)
        out = LSeries(1, order, sig[1:], None)
        # involution and invariance certificates
        ss = out.compose(out)
        for k in range(1, ss.high + 1):
            if ss.coeff(k) != (1 if k == 1 else 0):
                raise ExactError(f"deck series at {self.p} failed the involution check")
        comp = _compose_trunc(c, [QZERO] + list(out.coeffs), order + 1)
        if any(comp[k] != c[k] for k in range(order + 2)):
            raise ExactError(f"deck series at {self.p} does not preserve x")
        with self._lock:
            self._cache[key] = out
        return out


def _compose_trunc(f: list, g: list, n: int) -> list:
    """f(g(t)) mod t^{n+1}; g[0] must be 0."""
    acc = [QZERO] * (n + 1)
    for coeff in reversed(f):
        out = [QZERO] * (n + 1)
        for i, ai in enumerate(acc):
            if ai:
                for j, bj in enumerate(g):
                    if bj and i + j <= n:
                        out[i + j] += ai * bj
        out[0] += coeff
        acc = out
    return acc


class SpectralCurve:
    """Validated spectral curve data on CP^1 (single affine chart)."""

    def __init__(self, x: LogRatFunc, y: LogRatFunc, rams, vitals, nonvital_log_poles, dual_trivial):
        self.x = x
        self.y = y
        self.xp = x.derivative()
        self.yp = y.derivative()
        self.rams = tuple(RamPoint(p, self) for p in rams)
        self.vitals = tuple(vitals)
        self.nonvital_log_poles = tuple(nonvital_log_poles)
        self.dual_trivial = dual_trivial
        self.hash = _curve_hash(x, y)

    def __repr__(self):
        return f"SpectralCurve(rams={[r.p for r in self.rams]}, vitals={[v.a for v in self.vitals]})"

    def ram_at(self, p: Fraction) -> RamPoint:
        for r in self.rams:
            if r.p == p:
                return r
        raise ExactError(f"{p} is not a ramification point")

    def special_points(self) -> set:
        pts = {r.p for r in self.rams} | {v.a for v in self.vitals} | set(self.nonvital_log_poles)
        pts |= {a for a, _ in self.x.log_terms} | {a for a, _ in self.y.log_terms}
        for poly in (self.xp.num, self.xp.den, self.yp.num, self.yp.den):
            pts |= {r for r, _ in poly.rational_roots()}
        return pts


def form_order_at_infinity(f: RatFunc) -> int:
    """Order of vanishing at infinity of the 1-form f(z) dz (negative = pole)."""
    if f.is_zero():
        raise ExactError("zero differential")
    return f.order_at_infinity() - 2


def residue_at_infinity(f: RatFunc) -> Fraction:
    """Residue of f(z) dz at infinity: minus the z^{-1} tail coefficient."""
    s = expand_ratfunc(f, INF, 0, max(2, f.num.degree + f.den.degree + 2))
    return -s.coeff(1)


def build_curve(x: LogRatFunc, y: LogRatFunc) -> SpectralCurve:
    """Validate and classify a spectral curve.

    Raises UnsupportedCurveError for irrational special points, ChartError
    when dx vanishes at infinity or a vital point sits there, and
    AssumptionViolation for non-simple dx zeros or dy degenerating at them.
    """
    if not isinstance(x, LogRatFunc):
        x = LogRatFunc(x)
    if not isinstance(y, LogRatFunc):
        y = LogRatFunc(y)
    xp, yp = x.derivative(), y.derivative()
    if xp.is_zero() or yp.is_zero():
        raise AssumptionViolation("dx and dy must be nonzero differentials")
    if form_order_at_infinity(xp) >= 1:
        raise ChartError("dx has a zero at infinity; apply a Mobius change of chart")

    roots = xp.num.rational_roots()
    if sum(m for _, m in roots) != xp.num.degree:
        raise UnsupportedCurveError(
            "the zero locus of dx does not split over Q in this chart; "
            "apply a Mobius change of chart"
        )
    rams = []
    for p, mult in roots:
        if mult != 1:
            raise AssumptionViolation(f"zero of dx at {p} is not simple")
        if yp.has_pole_at(p):
            raise AssumptionViolation(f"dy is singular at the zero {p} of dx")
        if yp(p) == 0:
            raise AssumptionViolation(f"dy vanishes at the zero {p} of dx")
        rams.append(p)

    vitals, nonvital = _classify_dy_poles(xp, yp)

    # a vital point must not hide at infinity in this chart
    if form_order_at_infinity(yp) == -1 and form_order_at_infinity(xp) >= 0:
        raise ChartError("simple pole of dy at infinity with dx regular there; "
                         "apply a Mobius change of chart")

    dual_trivial = yp.num.is_const() and form_order_at_infinity(yp) <= 0

    curve = SpectralCurve(x, y, rams, vitals, nonvital, dual_trivial)
    for r in curve.rams:
        r.deck(DEFAULT_VALIDATION_ORDER)
    return curve


def _classify_dy_poles(xp: RatFunc, yp: RatFunc):
    vitals, nonvital = [], []
    den = yp.den
    rem = den
    for a, mult in den.rational_roots():
        lin = Poly([-a, 1])
        for _ in range(mult):
            rem = rem.exact_div(lin)
        if mult == 1 and not xp.has_pole_at(a):
            den1 = den.exact_div(lin)
            res = yp.num(a) / den1(a)
            vitals.append(VitalPoint(a, res))
        else:
            nonvital.append(a)
    if rem.degree >= 1:
        # irrational poles of dy are tolerable only when provably non-vital
        g = rem.gcd(rem.derivative())
        w = rem.exact_div(g) if not g.is_const() else rem
        simple_part = w.exact_div(w.gcd(g)) if not g.is_const() else w
        uncovered = simple_part.exact_div(simple_part.gcd(xp.den))
        if uncovered.degree >= 1:
            raise UnsupportedCurveError(
                "dy has a possibly vital pole at an irrational point; "
                "apply a Mobius change of chart"
            )
    vitals.sort(key=lambda v: v.a)
    nonvital.sort()
    return vitals, nonvital


def classify_log_point(curve: SpectralCurve, a: Fraction, side: str) -> str:
    """'vital' iff the named differential has a simple pole at a and the
    other differential is regular there."""
    a = Fraction(a)
    this, other = (curve.xp, curve.yp) if side == "x" else (curve.yp, curve.xp)
    order = this.pole_order_at(a)
    if order == 0:
        raise ExactError(f"{a} is not a pole of d{side}")
    if order == 1 and not other.has_pole_at(a):
        return "vital"
    return "non-vital"


def deck_transform(curve: SpectralCurve, p: Fraction, order: int) -> LSeries:
    """Displacement series of the deck involution at the ramification point p."""
    return curve.ram_at(Fraction(p)).deck(order)


def swap_curve(curve: SpectralCurve) -> SpectralCurve:
    """The curve with the roles of x and y exchanged, fully re-classified."""
    return build_curve(curve.y, curve.x)


def mobius(curve: SpectralCurve, a, b, c, d) -> SpectralCurve:
    """Precompose x and y with z -> (a z + b)/(c z + d) and rebuild.

    Log terms are re-normalized exactly: additive transcendental constants
    produced by the substitution are dropped (only dx, dy matter), and the
    log weight escaping to the pole of the map is re-aggregated at the
    preimage of infinity.
    """
    a, b, c, d = (Fraction(v) for v in (a, b, c, d))
    if a * d - b * c == 0:
        raise ExactError("degenerate Mobius transform")
    w = RatFunc(Poly([b, a]), Poly([d, c]))
    return build_curve(_mobius_lrf(curve.x, a, b, c, d, w), _mobius_lrf(curve.y, a, b, c, d, w))


def _mobius_lrf(f: LogRatFunc, a, b, c, d, w: RatFunc) -> LogRatFunc:
    rational = f.rational.compose(w)
    terms: dict = {}

    def add(pt, coeff):
        terms[pt] = terms.get(pt, QZERO) + coeff

    for aj, cj in f.log_terms:
        top = a - aj * c  # w(z) - aj = (top*z + (b - aj*d))/(c z + d)
        if top != 0:
            add(-(b - aj * d) / top, cj)
            if c != 0:
                add(-d / c, -cj)
        else:
            # the log point moves to infinity; only the denominator term stays
            if c == 0:
                raise ExactError("Mobius transform sends a log point to infinity")
            add(-d / c, -cj)
    return LogRatFunc(rational, [(pt, cf) for pt, cf in terms.items() if cf != 0])


def _curve_hash(x: LogRatFunc, y: LogRatFunc) -> str:
    def lrf_data(f: LogRatFunc):
        return {
            "num": [qstr(v) for v in f.rational.num.coeffs],
            "den": [qstr(v) for v in f.rational.den.coeffs],
            "log": [[qstr(a), qstr(c)] for a, c in f.log_terms],
        }

    blob = json.dumps({"x": lrf_data(x), "y": lrf_data(y)}, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()

"""Truncated Laurent series with sound window tracking.

An ``LSeries`` stores exact coefficients for orders ``low .. high`` of a local
expansion.  Soundness contract: orders below ``low`` are *known to vanish*,
orders above ``high`` are *unknown*.  Every constructor in this package
guarantees the first half; arithmetic narrows ``high`` by the usual interval
rules; reading past ``high`` raises :class:`InsufficientPrecision` so callers
can widen and retry instead of silently truncating.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .qmath import ExactError, InsufficientPrecision, QONE, QZERO
from .ratfunc import RatFunc

INF = "inf"  # expansion-point tag for the chart at infinity


class LSeries:
    __slots__ = ("low", "high", "coeffs", "point")

    def __init__(self, low: int, high: int, coeffs, point=None):
        if high < low:
            raise InsufficientPrecision(f"empty Laurent window [{low},{high}]")
        if len(coeffs) != high - low + 1:
            raise ExactError("coefficient list does not match window")
        self.low = low
        self.high = high
        self.coeffs = [Fraction(c) for c in coeffs]
        self.point = point
        # tighten: leading zeros are a free improvement of the 'low' bound
        while self.low < self.high and self.coeffs and self.coeffs[0] == 0:
            self.coeffs.pop(0)
            self.low += 1

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(low: int, high: int, point=None) -> "LSeries":
        return LSeries(low, high, [QZERO] * (high - low + 1), point)

    @staticmethod
    def one(high: int, point=None) -> "LSeries":
        return LSeries(0, high, [QONE] + [QZERO] * high, point)

    @staticmethod
    def var(high: int, point=None) -> "LSeries":
        if high < 1:
            raise InsufficientPrecision("window too small for t")
        return LSeries(0, high, [QZERO, QONE] + [QZERO] * (high - 1), point)

    @staticmethod
    def from_coeff_map(cmap: dict, low: int, high: int, point=None) -> "LSeries":
        return LSeries(low, high, [cmap.get(k, QZERO) for k in range(low, high + 1)], point)

    # -- queries ----------------------------------------------------------
    def coeff(self, k: int) -> Fraction:
        if k < self.low:
            return QZERO
        if k > self.high:
            raise InsufficientPrecision(f"order {k} beyond window [{self.low},{self.high}]")
        return self.coeffs[k - self.low]

    def residue(self) -> Fraction:
        """Coefficient at order -1 (the residue of ``f dt``)."""
        return self.coeff(-1)

    def valuation(self):
        """Exact valuation if a nonzero coefficient is visible, else None."""
        for k in range(self.low, self.high + 1):
            if self.coeffs[k - self.low] != 0:
                return k
        return None

    def is_zero_to_window(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __repr__(self):
        terms = [f"{c}*t^{k}" for k, c in self.items() if c]
        body = " + ".join(terms) if terms else "0"
        return f"LSeries({body} + O(t^{self.high + 1}))"

    def items(self):
        for k in range(self.low, self.high + 1):
            yield k, self.coeffs[k - self.low]

    def _chk(self, other: "LSeries"):
        if self.point is not None and other.point is not None and self.point != other.point:
            raise ExactError("mixing expansions at different points")
        return self.point if self.point is not None else other.point

    # -- linear operations -------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LSeries(0, self.high, [Fraction(other)] + [QZERO] * self.high, self.point)
        pt = self._chk(other)
        low = min(self.low, other.low)
        high = min(self.high, other.high)
        return LSeries(low, high, [self.coeff(k) + other.coeff(k) for k in range(low, high + 1)], pt)

    __radd__ = __add__

    def __neg__(self):
        return LSeries(self.low, self.high, [-c for c in self.coeffs], self.point)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-Fraction(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Fraction) -> "LSeries":
        c = Fraction(c)
        return LSeries(self.low, self.high, [c * v for v in self.coeffs], self.point)

    def shift_orders(self, m: int) -> "LSeries":
        """Multiply by t**m."""
        return LSeries(self.low + m, self.high + m, list(self.coeffs), self.point)

    def truncate(self, high: int) -> "LSeries":
        if high >= self.high:
            return self
        return LSeries(self.low, high, self.coeffs[: high - self.low + 1], self.point)

    # -- multiplicative operations ------------------------------------------
    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        pt = self._chk(other)
        low = self.low + other.low
        high = min(self.low + other.high, other.low + self.high)
        out = [QZERO] * (high - low + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            ka = self.low + i
            for j, b in enumerate(other.coeffs):
                if b == 0:
                    continue
                k = ka + other.low + j
                if k > high:
                    break
                out[k - low] += a * b
        return LSeries(low, high, out, pt)

    __rmul__ = __mul__

    def inverse(self) -> "LSeries":
        v = self.valuation()
        if v is None:
            raise InsufficientPrecision("cannot invert a series with no visible nonzero term")
        n = self.high - v  # unit part known to this order
        a = [self.coeff(v + k) for k in range(n + 1)]
        b = [QZERO] * (n + 1)
        b[0] = 1 / a[0]
        for m in range(1, n + 1):
            s = QZERO
            for k in range(1, m + 1):
                if a[k]:
                    s += a[k] * b[m - k]
            b[m] = -s * b[0]
        return LSeries(-v, -v + n, b, self.point)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return LSeries.one(max(self.high, 0), self.point)
        acc = self
        for _ in range(k - 1):
            acc = acc * self
        return acc

    # -- calculus ---------------------------------------------------------------
    def derivative(self) -> "LSeries":
        low, high = self.low - 1, self.high - 1
        return LSeries(low, high, [(k + 1) * self.coeff(k + 1) for k in range(low, high + 1)], self.point)

    def integrate(self) -> "LSeries":
        """Primitive with zero constant term; requires residue 0 in window."""
        if self.low <= -1 <= self.high and self.coeff(-1) != 0:
            raise ExactError("cannot integrate a series with nonzero residue")
        low, high = self.low + 1, self.high + 1
        out = []
        for k in range(low, high + 1):
            out.append(QZERO if k == 0 else self.coeff(k - 1) / k)
        return LSeries(low, high, out, self.point)

    # -- composition -------------------------------------------------------------
    def compose(self, g: "LSeries") -> "LSeries":
        """self(g(t)) for g with positive valuation.

        The result window is [min-possible, min(self.high, g.high + self.low - 1)]:
        unknown coefficients of g past its window only influence orders beyond
        that bound, so padding g with zeros during the Horner pass is sound.
        """
        if g.low < 1:
            raise ExactError("composition requires inner valuation >= 1")
        high = min(self.high, g.high + self.low - 1)
        parts = []
        if self.high >= 0 and high >= 0:
            fl = [self.coeff(k) for k in range(0, self.high + 1)]
            gl = [g.coeff(k) if g.low <= k <= min(g.high, high) else QZERO for k in range(0, high + 1)]
            acc = _compose_list(fl, gl, high)
            parts.append(LSeries(0, high, acc, None))
        if self.low < 0:
            ginv = g.inverse()
            p = ginv
            for k in range(-1, self.low - 1, -1):
                c = self.coeff(k)
                if c:
                    parts.append(p.scale(c))
                if k > self.low:
                    p = p * ginv
        if not parts:
            return LSeries.zero(0, max(high, 0), None)
        out = parts[0]
        for extra in parts[1:]:
            out = out + extra
        return out.truncate(high) if out.high > high else out

    # -- transcendental (truncated) ------------------------------------------------
    def exp(self) -> "LSeries":
        """exp of a series with positive valuation."""
        if self.low < 1 and not (self.low >= 0 and self.coeff(0) == 0):
            raise ExactError("series exp requires valuation >= 1")
        n = self.high
        f = [self.coeff(k) if k >= self.low else QZERO for k in range(n + 1)]
        e = [QZERO] * (n + 1)
        e[0] = QONE
        for m in range(1, n + 1):
            s = QZERO
            for k in range(1, m + 1):
                if f[k]:
                    s += k * f[k] * e[m - k]
            e[m] = s / m
        return LSeries(0, n, e, self.point)

    def log(self) -> "LSeries":
        """log of a series with constant term 1."""
        if self.coeff(0) != 1 or self.low < 0:
            raise ExactError("series log requires constant term 1")
        n = self.high
        f = [self.coeff(k) for k in range(n + 1)]
        l = [QZERO] * (n + 1)
        for m in range(1, n + 1):
            s = Fraction(m) * f[m]
            for k in range(1, m):
                if l[k]:
                    s -= k * l[k] * f[m - k]
            l[m] = s / m
        return LSeries(0, n, l, self.point)

    def reversion(self) -> "LSeries":
        """Compositional inverse of a series with valuation exactly 1.

        Newton iteration r <- r - (self(r) - t)/self'(r), doubling the
        working order; the result is validated by composing back.
        """
        if self.valuation() != 1:
            raise ExactError("reversion requires valuation exactly 1")
        n = self.high
        g = [self.coeff(k) for k in range(n + 1)]
        r = [QZERO, 1 / g[1]]  # order-1 seed
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            r = r + [QZERO] * (prec + 1 - len(r))
            gr = _compose_list(g, r, prec)
            gr[1] -= 1  # g(r) - t
            dgr = _compose_list([k * g[k] for k in range(1, n + 1)], r, prec)
            corr = _div_list(gr, dgr, prec)
            r = [r[k] - corr[k] for k in range(prec + 1)]
        out = LSeries(1, n, r[1:], None)
        check = _compose_list(g, [QZERO] + out.coeffs, n)
        if any(check[k] != (1 if k == 1 else 0) for k in range(n + 1)):
            raise ExactError("reversion failed to validate by composition")
        return out


def _compose_list(f: list, r: list, n: int) -> list:
    """f(r(t)) mod t^{n+1} for power-series coefficient lists, r[0] == 0."""
    acc = [QZERO] * (n + 1)
    for c in reversed(f):
        acc = _mul_list(acc, r, n)
        acc[0] += c
    return acc


def _mul_list(a: list, b: list, n: int) -> list:
    out = [QZERO] * (n + 1)
    for i, ai in enumerate(a):
        if ai and i <= n:
            for j, bj in enumerate(b):
                if bj and i + j <= n:
                    out[i + j] += ai * bj
    return out


def _div_list(a: list, b: list, n: int) -> list:
    """a/b mod t^{n+1}; b must have nonzero constant term."""
    if not b or b[0] == 0:
        raise ExactError("list division by series with zero constant term")
    inv0 = 1 / b[0]
    out = [QZERO] * (n + 1)
    for m in range(n + 1):
        s = a[m] if m < len(a) else QZERO
        for k in range(1, m + 1):
            if k < len(b) and b[k]:
                s -= b[k] * out[m - k]
        out[m] = s * inv0
    return out


# ---------------------------------------------------------------------------
# expansions of rational functions
# ---------------------------------------------------------------------------

def expand_ratfunc(f: RatFunc, p, low: int, high: int) -> LSeries:
    """Exact Laurent expansion of f at a finite point p or at infinity.

    At a finite p the local variable is t = z - p; at infinity it is w = 1/z.
    The returned window starts at min(low, valuation) so that coefficients
    below it are genuinely zero.
    """
    if f.is_zero():
        return LSeries.zero(low, high, p)
    if p == INF:
        num = list(reversed(f.num.coeffs))
        den = list(reversed(f.den.coeffs))
        vshift = f.den.degree - f.num.degree
        return _expand_poly_quotient(num, den, vshift, low, high, INF)
    p = Fraction(p)
    num = f.num.shift(p).coeffs
    den = f.den.shift(p).coeffs
    return _expand_poly_quotient(list(num), list(den), 0, low, high, p)


def _expand_poly_quotient(num, den, vshift, low, high, point) -> LSeries:
    vn = next(i for i, c in enumerate(num) if c)
    vd = next(i for i, c in enumerate(den) if c)
    val = vn - vd + vshift
    lo = min(low, val)
    n = high - val  # orders of the unit-part quotient needed beyond 0
    if n < 0:
        return LSeries.zero(lo, high, point)
    a = [num[vn + k] if vn + k < len(num) else QZERO for k in range(n + 1)]
    b = [den[vd + k] if vd + k < len(den) else QZERO for k in range(n + 1)]
    q = _div_list(a, b, n)
    cmap = {val + k: q[k] for k in range(n + 1)}
    return LSeries.from_coeff_map(cmap, lo, high, point)


def log_shift_series(p: Fraction, a: Fraction, high: int) -> LSeries:
    """Series of log(z - a) at z = p + t with the constant term dropped.

    Requires p != a.  log(z-a) = log(p-a) + log(1 + t/(p-a)); only the
    (rational) nonconstant part is returned, which is all any difference or
    derivative downstream ever uses.
    """
    d = Fraction(p) - Fraction(a)
    if d == 0:
        raise ExactError("log series requested at its own branch point")
    out = [QZERO]
    for k in range(1, high + 1):
        out.append(Fraction((-1) ** (k + 1), k) / d ** k)
    return LSeries(0, high, out, p)


# ---------------------------------------------------------------------------
# the convolution kernel S(u) = (e^{u/2} - e^{-u/2})/u and its reciprocal
# ---------------------------------------------------------------------------

def sfun_series(order: int) -> tuple[LSeries, LSeries]:
    """(S, 1/S) truncated at the given order; both are even series."""
    if order < 0:
        raise ExactError("negative truncation order")
    coeffs = [QZERO] * (order + 1)
    k = 0
    while 2 * k <= order:
        coeffs[2 * k] = Fraction(1, 4 ** k * factorial(2 * k + 1))
        k += 1
    s = LSeries(0, order, coeffs, None)
    return s, s.inverse()


def sfun_inv_coeff(g: int) -> Fraction:
    """Coefficient of u^{2g} in 1/S(u)."""
    if g < 0:
        return QZERO
    _, sinv = sfun_series(2 * g)
    return sinv.coeff(2 * g)

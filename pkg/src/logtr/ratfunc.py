"""Rational functions over Q in canonical form (reduced, monic denominator)."""
from __future__ import annotations

from fractions import Fraction

from .poly import Poly
from .qmath import ExactError, QONE, QZERO


def _coerce(v) -> "RatFunc":
    if isinstance(v, RatFunc):
        return v
    if isinstance(v, Poly):
        return RatFunc(v)
    return RatFunc.const(v)


class RatFunc:
    """Quotient of two polynomials, always reduced with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, Poly):
            num = Poly.const(num) if not isinstance(num, (list, tuple)) else Poly(num)
        if den is None:
            den = Poly([1])
        elif not isinstance(den, Poly):
            den = Poly.const(den) if not isinstance(den, (list, tuple)) else Poly(den)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        g = num.gcd(den)
        if not g.is_const() and not g.is_zero():
            num = num.exact_div(g)
            den = den.exact_div(g)
        lead = den.leading()
        if lead != 1:
            inv = 1 / lead
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    # -- constructors ---------------------------------------------------
    @staticmethod
    def const(c) -> "RatFunc":
        return RatFunc(Poly.const(c))

    @staticmethod
    def z() -> "RatFunc":
        return RatFunc(Poly.x())

    # -- queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_const() and (self.num.coeffs[0] if self.num.coeffs else QZERO) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"({self.num!r})/({self.den!r})" if self.den.degree > 0 or self.den.coeffs != (QONE,) else repr(self.num)

    # -- field operations ---------------------------------------------------
    def __add__(self, other) -> "RatFunc":
        other = _coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "RatFunc":
        other = _coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return _coerce(other) / self

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return RatFunc(self.den, self.num) ** (-k)
        return RatFunc(self.num ** k, self.den ** k)

    # -- calculus -----------------------------------------------------------
    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def __call__(self, z: Fraction) -> Fraction:
        d = self.den(z)
        if d == 0:
            raise ZeroDivisionError(f"pole at z = {z}")
        return self.num(z) / d

    def has_pole_at(self, z: Fraction) -> bool:
        return self.den(z) == 0

    def pole_order_at(self, z: Fraction) -> int:
        """Order of the pole at z (0 if regular there)."""
        if not self.has_pole_at(z):
            return 0
        lin = Poly([-Fraction(z), 1])
        den, k = self.den, 0
        while True:
            q, r = den.divmod(lin)
            if not r.is_zero():
                break
            den, k = q, k + 1
        return k

    def compose(self, other: "RatFunc") -> "RatFunc":
        """self(other(z)), exact substitution."""
        num = RatFunc.const(0)
        for c in reversed(self.num.coeffs):
            num = num * other + RatFunc.const(c)
        den = RatFunc.const(0)
        for c in reversed(self.den.coeffs):
            den = den * other + RatFunc.const(c)
        return num / den

    def shift(self, a: Fraction) -> "RatFunc":
        """self(z + a)."""
        return RatFunc(self.num.shift(a), self.den.shift(a))

    # -- structure ------------------------------------------------------------
    def order_at_infinity(self) -> int:
        """Order of vanishing at infinity of the function (negative = pole)."""
        if self.is_zero():
            raise ExactError("zero function has no order at infinity")
        return self.den.degree - self.num.degree

    def leading_at_infinity(self) -> Fraction:
        """Coefficient c in self ~ c * z**(-order_at_infinity()) at infinity."""
        return self.num.leading() / self.den.leading()

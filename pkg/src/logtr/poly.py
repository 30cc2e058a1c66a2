"""Dense univariate polynomials over exact rationals."""
from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd

from .qmath import ExactError, QONE, QZERO


def _trim(cs: list[Fraction]) -> tuple[Fraction, ...]:
    n = len(cs)
    while n > 0 and cs[n - 1] == 0:
        n -= 1
    return tuple(cs[:n])


class Poly:
    """Polynomial with Fraction coefficients, ascending degree order.

    The zero polynomial has an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _trim([Fraction(c) for c in coeffs])

    # -- constructors -------------------------------------------------
    @staticmethod
    def const(c) -> "Poly":
        return Poly([Fraction(c)])

    @staticmethod
    def x() -> "Poly":
        return Poly([0, 1])

    @staticmethod
    def from_roots(roots) -> "Poly":
        p = Poly([1])
        for r in roots:
            p = p * Poly([-Fraction(r), 1])
        return p

    # -- basic queries -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ExactError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "Poly(0)"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}*z^{i}" if i else f"{c}")
        return "Poly(" + " + ".join(parts) + ")"

    # -- ring operations ----------------------------------------------
    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly.const(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            c = Fraction(other)
            return Poly([c * a for a in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [QZERO] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ExactError("negative power of a polynomial")
        out, base = Poly([1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), self
        quo = [QZERO] * (dq + 1)
        lead = other.leading()
        for i in range(dq, -1, -1):
            c = rem[i + other.degree] / lead
            quo[i] = c
            if c:
                for j, oc in enumerate(other.coeffs):
                    rem[i + j] -= c * oc
        return Poly(quo), Poly(rem)

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ExactError("inexact polynomial division")
        return q

    # -- calculus and evaluation ----------------------------------------
    def derivative(self) -> "Poly":
        return Poly([i * c for i, c in enumerate(self.coeffs)][1:])

    def __call__(self, z: Fraction) -> Fraction:
        acc = QZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly()
        for c in reversed(self.coeffs):
            acc = acc * other + Poly.const(c)
        return acc

    def shift(self, a: Fraction) -> "Poly":
        """p(z + a)."""
        return self.compose(Poly([Fraction(a), 1]))

    # -- gcd and normalization ------------------------------------------
    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = 1 / self.leading()
        return Poly([c * inv for c in self.coeffs])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def squarefree_part(self) -> "Poly":
        if self.degree < 1:
            return self.monic()
        return self.exact_div(self.gcd(self.derivative())).monic()

    # -- rational roots --------------------------------------------------
    def _int_primitive(self) -> list[int]:
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // igcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for v in ints:
            g = igcd(g, abs(v))
        return [v // g for v in ints] if g else ints

    def rational_roots(self) -> list[tuple[Fraction, int]]:
        """All rational roots with multiplicities, sorted."""
        if self.degree < 1:
            return []
        roots: dict[Fraction, int] = {}
        p = self
        # strip z^k
        k = 0
        while p.coeffs and p.coeffs[0] == 0:
            p = Poly(p.coeffs[1:])
            k += 1
        if k:
            roots[QZERO] = k
        while p.degree >= 1:
            ints = p._int_primitive()
            a0, an = abs(ints[0]), abs(ints[-1])
            found = None
            for pn in _divisors(a0):
                for qn in _divisors(an):
                    if igcd(pn, qn) != 1:
                        continue
                    for cand in (Fraction(pn, qn), Fraction(-pn, qn)):
                        if p(cand) == 0:
                            found = cand
                            break
                    if found is not None:
                        break
                if found is not None:
                    break
            if found is None:
                break
            lin = Poly([-found, 1])
            mult = 0
            while True:
                q, r = p.divmod(lin)
                if not r.is_zero():
                    break
                p, mult = q, mult + 1
            roots[found] = roots.get(found, 0) + mult
        return sorted(roots.items())

    def splits_over_q(self) -> bool:
        """True iff the polynomial factors into linear factors over Q."""
        total = sum(m for _, m in self.rational_roots())
        return total == max(self.degree, 0)


def _divisors(n: int) -> list[int]:
    if n == 0:
        return [0]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)

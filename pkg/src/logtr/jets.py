"""Sparse multivariate truncated polynomials for the duality transforms.

Variables: one global grading variable h (the deformation parameter), one
extraction variable u_i per slot, and one local coordinate e_i per slot
(e_i = z_i - anchor_i, Laurent exponents allowed).  Exponent keys are plain
int tuples (h, u_1..u_n, e_1..e_n).

Truncation discipline: exponents above the h cap or the per-slot u caps are
dropped (they can never re-enter: no stored factor carries negative h or u
exponents).  The e exponents are capped above only with an explicit slack
for the negative-valuation factors applied during slot collapse, and are
never capped below; every retained coefficient is exact.

A grading guard enforces the coupling 3*h >= 2*(sum of u exponents) that
every vertex and edge weight of the transforms obeys; it is what makes the
per-slot u budgets finite.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .qmath import ExactError, QZERO
from .series import LSeries


class JetAlgebra:
    __slots__ = ("n", "h_cap", "u_caps", "e_caps", "couple")

    def __init__(self, n: int, h_cap: int, u_caps, e_caps, couple: bool = True):
        self.n = n
        self.h_cap = h_cap
        self.u_caps = tuple(u_caps)
        self.e_caps = tuple(e_caps)  # per-slot upper bounds on e exponents
        self.couple = couple
        if len(self.u_caps) != n or len(self.e_caps) != n:
            raise ExactError("cap arity mismatch")

    def keep(self, key: tuple) -> bool:
        h = key[0]
        if h > self.h_cap:
            return False
        usum = 0
        for i in range(self.n):
            u = key[1 + i]
            if u > self.u_caps[i]:
                return False
            usum += u
            if key[1 + self.n + i] > self.e_caps[i]:
                return False
        if self.couple and 3 * h < 2 * usum:
            return False
        return True

    def zero_key(self) -> tuple:
        return (0,) * (1 + 2 * self.n)


class MPoly:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: JetAlgebra, terms=None):
        self.alg = alg
        self.terms: dict = {}
        if terms:
            for k, c in terms.items() if isinstance(terms, dict) else terms:
                self._acc(k, c)

    def _acc(self, key: tuple, c: Fraction):
        if c == 0 or not self.alg.keep(key):
            return
        new = self.terms.get(key, QZERO) + c
        if new:
            self.terms[key] = new
        else:
            self.terms.pop(key, None)

    # -- constructors -----------------------------------------------------
    @staticmethod
    def zero(alg: JetAlgebra) -> "MPoly":
        return MPoly(alg)

    @staticmethod
    def const(alg: JetAlgebra, c) -> "MPoly":
        out = MPoly(alg)
        out._acc(alg.zero_key(), Fraction(c))
        return out

    @staticmethod
    def monomial(alg: JetAlgebra, c, h: int = 0, u: dict = None, e: dict = None) -> "MPoly":
        key = [0] * (1 + 2 * alg.n)
        key[0] = h
        for i, k in (u or {}).items():
            key[1 + i] = k
        for i, k in (e or {}).items():
            key[1 + alg.n + i] = k
        out = MPoly(alg)
        out._acc(tuple(key), Fraction(c))
        return out

    @staticmethod
    def from_series(alg: JetAlgebra, slot: int, s: LSeries, lo_need: int = None, hi_need: int = None) -> "MPoly":
        """Lift a Laurent jet of slot's local coordinate into the algebra.

        The series window must cover [lo_need, hi_need] (defaults: its own
        window); exactness of retained coefficients is inherited from the
        series soundness contract.
        """
        lo = s.low if lo_need is None else lo_need
        hi = min(s.high, alg.e_caps[slot]) if hi_need is None else hi_need
        if hi > s.high:
            from .qmath import InsufficientPrecision
            raise InsufficientPrecision(f"jet window [{s.low},{s.high}] too small for {hi}")
        out = MPoly(alg)
        base = [0] * (1 + 2 * alg.n)
        for k in range(max(lo, s.low), hi + 1):
            c = s.coeff(k)
            if c:
                key = list(base)
                key[1 + alg.n + slot] = k
                out._acc(tuple(key), c)
        return out

    # -- ring operations -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MPoly") -> "MPoly":
        out = MPoly(self.alg, dict(self.terms))
        for k, c in other.terms.items():
            out._acc(k, c)
        return out

    def __sub__(self, other: "MPoly") -> "MPoly":
        out = MPoly(self.alg, dict(self.terms))
        for k, c in other.terms.items():
            out._acc(k, -c)
        return out

    def scale(self, c) -> "MPoly":
        c = Fraction(c)
        if c == 0:
            return MPoly(self.alg)
        return MPoly(self.alg, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other: "MPoly") -> "MPoly":
        out = MPoly(self.alg)
        if len(self.terms) > len(other.terms):
            a, b = other, self
        else:
            a, b = self, other
        # bucket by the grading exponent: pairs beyond the h cap never pair up
        hcap = self.alg.h_cap
        buckets: dict = {}
        for kb, cb in b.terms.items():
            buckets.setdefault(kb[0], []).append((kb, cb))
        acc = out._acc
        for ka, ca in a.terms.items():
            ha = ka[0]
            for hb, items in buckets.items():
                if ha + hb > hcap:
                    continue
                for kb, cb in items:
                    acc(tuple(x + y for x, y in zip(ka, kb)), ca * cb)
        return out

    def shift(self, h: int = 0, u: dict = None, e: dict = None) -> "MPoly":
        """Multiply by a monomial (exponent shifts may be negative)."""
        delta = [0] * (1 + 2 * self.alg.n)
        delta[0] = h
        for i, k in (u or {}).items():
            delta[1 + i] = k
        for i, k in (e or {}).items():
            delta[1 + self.alg.n + i] = k
        out = MPoly(self.alg)
        for key, c in self.terms.items():
            out._acc(tuple(x + y for x, y in zip(key, delta)), c)
        return out

    def exp_positive_h(self) -> "MPoly":
        """exp of a polynomial with strictly positive h valuation."""
        if self.is_zero():
            return MPoly.const(self.alg, 1)
        hval = min(k[0] for k in self.terms)
        if hval < 1:
            raise ExactError("exp requires positive h valuation")
        out = MPoly.const(self.alg, 1)
        power = MPoly.const(self.alg, 1)
        for m in range(1, self.alg.h_cap // hval + 1):
            power = power * self
            if power.is_zero():
                break
            out = out + power.scale(Fraction(1, factorial(m)))
        return out

    # -- extraction and calculus --------------------------------------------------
    def u_coefficient(self, slot: int, k: int) -> "MPoly":
        """Coefficient of u_slot^k (result no longer depends on u_slot)."""
        idx = 1 + slot
        out = MPoly(self.alg)
        for key, c in self.terms.items():
            if key[idx] == k:
                nk = list(key)
                nk[idx] = 0
                out._acc(tuple(nk), c)
        return out

    def u_degree(self, slot: int) -> int:
        idx = 1 + slot
        return max((key[idx] for key in self.terms), default=0)

    def h_coefficient(self, k: int) -> "MPoly":
        out = MPoly(self.alg)
        for key, c in self.terms.items():
            if key[0] == k:
                nk = (0,) + key[1:]
                out._acc(nk, c)
        return out

    def d_de(self, slot: int) -> "MPoly":
        idx = 1 + self.alg.n + slot
        out = MPoly(self.alg)
        for key, c in self.terms.items():
            m = key[idx]
            if m != 0:
                nk = list(key)
                nk[idx] = m - 1
                out._acc(tuple(nk), c * m)
        return out

    def eval_slot(self, slot: int) -> "MPoly":
        """Set e_slot = 0: keep the order-0 part, reject surviving poles."""
        idx = 1 + self.alg.n + slot
        out = MPoly(self.alg)
        for key, c in self.terms.items():
            m = key[idx]
            if m < 0:
                raise ExactError(f"pole in slot {slot} at its anchor during evaluation")
            if m == 0:
                out._acc(key, c)
        return out

    def truncate_slot(self, slot: int, lo: int, hi: int) -> "MPoly":
        idx = 1 + self.alg.n + slot
        out = MPoly(self.alg)
        for key, c in self.terms.items():
            if lo <= key[idx] <= hi:
                out._acc(key, c)
        return out

    def slot_orders(self, slot: int):
        idx = 1 + self.alg.n + slot
        return sorted({key[idx] for key in self.terms})

    def pure_e_coefficients(self, slots) -> dict:
        """Map from e-exponent tuples (over the given slots) to rationals.

        Requires every h and u exponent to vanish (call after extraction).
        """
        out = {}
        n = self.alg.n
        for key, c in self.terms.items():
            if key[0] != 0 or any(key[1 + i] for i in range(n)):
                raise ExactError("nonscalar exponents remain")
            ekey = tuple(key[1 + n + s] for s in slots)
            out[ekey] = out.get(ekey, QZERO) + c
        return {k: v for k, v in out.items() if v}

"""Pole-basis storage for the symmetric n-differentials.

A stored differential is a finite rational combination of pure tensors
eta_{q1,d1}(z_1) ... eta_{qn,dn}(z_n) with eta_{q,d} = dz/(z-q)^d and d >= 2,
so every stored object is residue-free in each slot by construction.  On the
rational curve this basis is exact for everything the recursion produces.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from math import comb

from .poly import Poly
from .qmath import ExactError, QZERO, qstr, parse_q
from .ratfunc import RatFunc
from .series import LSeries, expand_ratfunc

PoleKey = tuple  # (q: Fraction, d: int >= 2)
TermKey = tuple  # tuple of PoleKey, one per slot


class FDiff:
    """Factorized differential: map from pole-tensor keys to coefficients."""

    __slots__ = ("n", "terms", "tag")

    def __init__(self, n: int, terms=None, tag=None):
        self.n = n
        self.terms: dict = {}
        if terms:
            for key, c in terms.items() if isinstance(terms, dict) else terms:
                self._accumulate(key, c)
        self.tag = tag

    def _accumulate(self, key: TermKey, c: Fraction):
        if c == 0:
            return
        if len(key) != self.n:
            raise ExactError("term arity mismatch")
        for q, d in key:
            if d < 2:
                raise ExactError(f"pole order {d} below 2 breaks residue-freeness")
        new = self.terms.get(key, QZERO) + c
        if new:
            self.terms[key] = new
        else:
            self.terms.pop(key, None)

    # -- constructors ----------------------------------------------------
    @staticmethod
    def zero(n: int) -> "FDiff":
        return FDiff(n)

    @staticmethod
    def eta(q, d: int) -> "FDiff":
        return FDiff(1, {((Fraction(q), d),): Fraction(1)})

    @staticmethod
    def scalar(c) -> "FDiff":
        """Arity-0 differential (a bare coefficient)."""
        return FDiff(0, {(): Fraction(c)})

    # -- linear structure ---------------------------------------------------
    def __add__(self, other: "FDiff") -> "FDiff":
        if self.n != other.n:
            raise ExactError("arity mismatch in sum")
        out = FDiff(self.n, dict(self.terms))
        for key, c in other.terms.items():
            out._accumulate(key, c)
        return out

    def __sub__(self, other: "FDiff") -> "FDiff":
        return self + other.scale(-1)

    def __neg__(self) -> "FDiff":
        return self.scale(-1)

    def scale(self, c) -> "FDiff":
        c = Fraction(c)
        if c == 0:
            return FDiff.zero(self.n)
        return FDiff(self.n, {k: c * v for k, v in self.terms.items()})

    def tensor(self, other: "FDiff") -> "FDiff":
        out = FDiff(self.n + other.n)
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                out._accumulate(ka + kb, ca * cb)
        return out

    def reorder(self, positions) -> "FDiff":
        """Permute slots so that slot i of the result is slot positions[i]."""
        out = FDiff(self.n)
        for key, c in self.terms.items():
            out._accumulate(tuple(key[j] for j in positions), c)
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, FDiff):
            return self.n == other.n and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return f"FDiff(n={self.n}, 0)"
        bits = []
        for key, c in sorted(self.terms.items()):
            slots = " ".join(f"eta({qstr(q)},{d})" for q, d in key)
            bits.append(f"{qstr(c)} * {slots}" if key else qstr(c))
        return f"FDiff(n={self.n}, " + " + ".join(bits) + ")"

    # -- structure queries ------------------------------------------------------
    def pole_support(self) -> set:
        return {q for key in self.terms for q, _ in key}

    def max_order_at(self, q) -> int:
        q = Fraction(q)
        return max((d for key in self.terms for p, d in key if p == q), default=0)

    def coefficient(self, key: TermKey) -> Fraction:
        return self.terms.get(key, QZERO)

    # -- serialization ------------------------------------------------------------
    def to_records(self) -> list:
        recs = []
        for key, c in self.terms.items():
            recs.append({
                "poles": [{"q": qstr(q), "d": d} for q, d in key],
                "coeff": qstr(c),
            })
        recs.sort(key=lambda r: ([(p["q"], p["d"]) for p in r["poles"]]))
        return recs

    @staticmethod
    def from_records(n: int, recs) -> "FDiff":
        out = FDiff(n)
        for r in recs:
            key = tuple((parse_q(p["q"]), int(p["d"])) for p in r["poles"])
            out._accumulate(key, parse_q(r["coeff"]))
        return out


def check_symmetry(fd: FDiff) -> bool:
    """True iff the coefficient map is invariant under all slot permutations."""
    if fd.n <= 1:
        return True
    for key, c in fd.terms.items():
        for perm in permutations(range(fd.n)):
            if fd.coefficient(tuple(key[i] for i in perm)) != c:
                return False
    return True


# ---------------------------------------------------------------------------
# conversion to and from honest rational 1-forms
# ---------------------------------------------------------------------------

def fd_to_ratfunc(fd: FDiff) -> RatFunc:
    """The coefficient of dz of an arity-1 stored differential."""
    if fd.n != 1:
        raise ExactError("only arity-1 differentials convert to rational forms")
    out = RatFunc.const(0)
    z = RatFunc.z()
    for key, c in fd.terms.items():
        (q, d), = key
        out = out + RatFunc.const(c) / (z - q) ** d
    return out


def principal_parts_fd(f: RatFunc, points, max_order: int) -> FDiff:
    """Collect the order <= -2 principal parts of f dz at the given points.

    Requires the residue (order -1 coefficient) to vanish at each point.
    """
    out = FDiff(1)
    for q in points:
        q = Fraction(q)
        s = expand_ratfunc(f, q, -max_order - 1, -1)
        if s.coeff(-1) != 0:
            raise ExactError(f"nonzero residue at {q}; not in the pole basis")
        for k in range(s.low, -1):
            c = s.coeff(k)
            if c:
                out._accumulate(((q, -k),), c)
    return out


def fd_from_ratform(f: RatFunc, n: int = 1) -> FDiff:
    """Exact pole-basis form of a rational 1-form f dz.

    Fails loudly if f has irrational poles, nonzero residues, or does not
    vanish to second order at infinity.
    """
    if f.is_zero():
        return FDiff.zero(1)
    roots = f.den.rational_roots()
    if sum(m for _, m in roots) != f.den.degree:
        raise ExactError("denominator does not split over Q")
    out = principal_parts_fd(f, [q for q, _ in roots], max(m for _, m in roots) + 1)
    if fd_to_ratfunc(out) != f:
        raise ExactError("form is not a pure residue-free pole combination")
    return out


def apply_d_over_dx(form, curve) -> RatFunc:
    """The operator taking a 1-form eta to d(eta/dx); exact rational output.

    Accepts an arity-1 FDiff or the dz-coefficient of a rational 1-form and
    returns the dz-coefficient of the result.
    """
    f = fd_to_ratfunc(form) if isinstance(form, FDiff) else form
    return (f / curve.xp).derivative()


# ---------------------------------------------------------------------------
# Laurent series whose coefficients are stored differentials
# ---------------------------------------------------------------------------

class FDSeries:
    """Local expansion in one active slot, coefficients over the other slots.

    ``labels`` names the output slots covered by the coefficients, in the
    order the pole tuples are stored; multiplication merges label sets and
    reorders keys into ascending label order.
    """

    __slots__ = ("low", "high", "coeffs", "labels")

    def __init__(self, low: int, high: int, coeffs, labels=()):
        if high < low:
            from .qmath import InsufficientPrecision
            raise InsufficientPrecision(f"empty window [{low},{high}]")
        self.low = low
        self.high = high
        self.coeffs = list(coeffs)
        self.labels = tuple(labels)
        if len(self.coeffs) != high - low + 1:
            raise ExactError("coefficient count does not match window")
        # leading exact zeros sharpen the valuation bound for free
        while self.low < self.high and self.coeffs and self.coeffs[0].is_zero():
            self.coeffs.pop(0)
            self.low += 1

    @staticmethod
    def zero(low: int, high: int, labels=()) -> "FDSeries":
        n = len(labels)
        return FDSeries(low, high, [FDiff.zero(n) for _ in range(low, high + 1)], labels)

    @staticmethod
    def constant(fd: FDiff, high: int, labels=()) -> "FDSeries":
        """The exact series fd * t^0 (zero above order 0 by exactness)."""
        out = [fd] + [FDiff.zero(fd.n) for _ in range(high)]
        return FDSeries(0, high, out, labels)

    def coeff(self, k: int) -> FDiff:
        if k < self.low:
            return FDiff.zero(len(self.labels))
        if k > self.high:
            from .qmath import InsufficientPrecision
            raise InsufficientPrecision(f"order {k} beyond window [{self.low},{self.high}]")
        return self.coeffs[k - self.low]

    def __add__(self, other: "FDSeries") -> "FDSeries":
        if self.labels != other.labels:
            raise ExactError("label mismatch in sum")
        low, high = min(self.low, other.low), min(self.high, other.high)
        return FDSeries(low, high, [self.coeff(k) + other.coeff(k) for k in range(low, high + 1)], self.labels)

    def scale(self, c) -> "FDSeries":
        return FDSeries(self.low, self.high, [fd.scale(c) for fd in self.coeffs], self.labels)

    def mul_scalar_series(self, s: LSeries) -> "FDSeries":
        low = self.low + s.low
        high = min(self.low + s.high, s.low + self.high)
        out = [FDiff.zero(len(self.labels)) for _ in range(low, high + 1)]
        for i, fd in enumerate(self.coeffs):
            if fd.is_zero():
                continue
            ka = self.low + i
            for k, c in s.items():
                if c and ka + k <= high:
                    out[ka + k - low] = out[ka + k - low] + fd.scale(c)
        return FDSeries(low, high, out, self.labels)

    def mul(self, other: "FDSeries") -> "FDSeries":
        """Tensor product in the coefficients, convolution in the orders."""
        merged = tuple(sorted(self.labels + other.labels))
        if len(set(merged)) != len(merged):
            raise ExactError("overlapping labels in product")
        pos = {lab: i for i, lab in enumerate(merged)}
        perm_src = [None] * len(merged)
        for i, lab in enumerate(self.labels + other.labels):
            perm_src[pos[lab]] = i
        low = self.low + other.low
        high = min(self.low + other.high, other.low + self.high)
        out = [FDiff.zero(len(merged)) for _ in range(low, high + 1)]
        for i, fa in enumerate(self.coeffs):
            if fa.is_zero():
                continue
            ka = self.low + i
            for j, fb in enumerate(other.coeffs):
                if fb.is_zero():
                    continue
                k = ka + other.low + j
                if k > high:
                    break
                out[k - low] = out[k - low] + fa.tensor(fb).reorder(perm_src)
        return FDSeries(low, high, out, merged)

    def compose(self, g: LSeries) -> "FDSeries":
        """Substitute the active variable by g(t) with valuation exactly 1."""
        if g.valuation() != 1:
            raise ExactError("composition requires inner valuation exactly 1")
        high = min(self.high, g.high + self.low - 1)
        powers = {0: LSeries.one(max(high, 0))}
        cur = None
        for k in range(1, self.high + 1):
            cur = g if k == 1 else cur * g
            powers[k] = cur
        if self.low < 0:
            ginv = g.inverse()
            cur = None
            for k in range(-1, self.low - 1, -1):
                cur = ginv if k == -1 else cur * ginv
                powers[k] = cur
        out = FDSeries.zero(self.low, high, self.labels)
        for k in range(self.low, self.high + 1):
            fd = self.coeff(k)
            if fd.is_zero():
                continue
            out = out + FDSeries.constant(fd, max(high - min(k, 0), 0), self.labels).mul_scalar_series(powers[k])
        return out

    def pullback(self, g: LSeries) -> "FDSeries":
        """Pull back the 1-form data f(s) ds through s = g(t): f(g) g'."""
        return self.compose(g).mul_scalar_series(g.derivative())

    def residue(self) -> FDiff:
        return self.coeff(-1)


# ---------------------------------------------------------------------------
# slot expansion
# ---------------------------------------------------------------------------

def eta_series_at(q: Fraction, d: int, p: Fraction, low: int, high: int) -> LSeries:
    """Expansion of 1/(z-q)^d at z = p + t (the dz pullback is trivial)."""
    if q == p:
        return LSeries.from_coeff_map({-d: Fraction(1)}, min(low, -d), high, None)
    base = p - q
    cmap = {}
    for k in range(0, high + 1):
        cmap[k] = Fraction((-1) ** k * comb(d + k - 1, k), 1) / base ** (d + k)
    return LSeries.from_coeff_map(cmap, min(low, 0), high, None)


def expand_slot(fd: FDiff, slot: int, p, low: int, high: int, labels=None) -> FDSeries:
    """Laurent data of one slot at z = p + t; remaining slots stay symbolic.

    ``labels`` names the remaining slots (defaults to 0..n-2 after removal).
    """
    if not 0 <= slot < fd.n:
        raise ExactError("slot out of range")
    p = Fraction(p)
    if labels is None:
        labels = tuple(range(fd.n - 1))
    out = FDSeries.zero(low, high, labels)
    for key, c in fd.terms.items():
        q, d = key[slot]
        rest = key[:slot] + key[slot + 1:]
        s = eta_series_at(q, d, p, low, high)
        piece = FDiff(fd.n - 1, {rest: c})
        out = out + FDSeries(s.low, s.high, [piece.scale(v) if v else FDiff.zero(fd.n - 1) for _, v in s.items()], labels)
    return out


def bergman_slot_series(p: Fraction, high: int, label) -> FDSeries:
    """B(p+t, w) expanded in t: sum (k+1) t^k eta_{p,k+2}(w)."""
    coeffs = [FDiff(1, {((Fraction(p), k + 2),): Fraction(k + 1)}) for k in range(0, high + 1)]
    return FDSeries(0, high, coeffs, (label,))


def bergman_diagonal_series(sigma: LSeries) -> LSeries:
    """B(z, sigma(z)) as a scalar quadratic-differential series in t.

    Equals sigma'(t) / (t - sigma(t))^2 with both slots at the same
    ramification point.
    """
    diff = LSeries.var(sigma.high) - sigma
    inv2 = diff.inverse()
    inv2 = inv2 * inv2
    return inv2 * sigma.derivative()

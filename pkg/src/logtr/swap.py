"""The universal duality transform exchanging the roles of x and y.

The transform writes each dual differential, divided by the product of the
dual dx's, as a sum over connected multigraphs: per-vertex operators
sum_k (d/dy)^k [u^k] (dx/dy) (1/u) exp(vertex weight) acting on a product of
edge weights built from the forward family.  The implementation assembles the
all-multigraph (disconnected) generating object per vertex subset as an exact
multivariate jet around chosen anchors, extracts the connected part by subset
inversion, and reads off the requested hbar coefficient.

Grading bookkeeping: stored h exponents are relative, absorbing one inverse
power of h per vertex; the target coefficient sits at stored degree
2g - 2 + 2n.  Monomials always obey 3*(h degree) >= 2*(total u degree), which
caps the per-vertex extraction order at 3g - 3 + 2n; that proven bound is the
truncation certificate for the u sums.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from .curve import SpectralCurve, swap_curve
from .differentials import FDiff, fd_to_ratfunc
from .jets import JetAlgebra, MPoly
from .qmath import ExactError, QZERO
from .ratfunc import RatFunc
from .recursion import Engine, log_correction
from .series import LSeries, expand_ratfunc, sfun_series


# ---------------------------------------------------------------------------
# S(u) coefficients
# ---------------------------------------------------------------------------

def _s_coeffs(order: int) -> list:
    s, _ = sfun_series(2 * order)
    return [s.coeff(2 * k) for k in range(order + 1)]


# ---------------------------------------------------------------------------
# diagonal-regularized two-point kernel, exact in z
# ---------------------------------------------------------------------------

class _BiJet:
    """Bivariate truncated jets in (d, u) with rational-function coefficients.

    Used once per curve to compute the same-vertex two-point weights: the
    coordinates are z1 = z + u + d, z2 = z + u, so the diagonal is d = 0.
    """

    __slots__ = ("terms", "dmax", "umax")

    def __init__(self, dmax, umax, terms=None):
        self.dmax = dmax
        self.umax = umax
        self.terms = terms or {}

    def add(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k)
            out[k] = v if w is None else w + v
        return _BiJet(self.dmax, self.umax, {k: v for k, v in out.items() if not v.is_zero()})

    def sub(self, other):
        return self.add(other.scale(-1))

    def scale(self, c):
        return _BiJet(self.dmax, self.umax, {k: v * c for k, v in self.terms.items()})

    def mul(self, other):
        out = {}
        for (i1, j1), v1 in self.terms.items():
            for (i2, j2), v2 in other.terms.items():
                i, j = i1 + i2, j1 + j2
                if i > self.dmax or j > self.umax:
                    continue
                w = out.get((i, j))
                p = v1 * v2
                out[(i, j)] = p if w is None else w + p
        return _BiJet(self.dmax, self.umax, {k: v for k, v in out.items() if not v.is_zero()})

    def inverse(self):
        """Neumann series 1/(c0 + R) = (1/c0) sum (-R/c0)^m; R is nilpotent
        under the rectangular truncation."""
        c0 = self.terms.get((0, 0))
        if c0 is None or c0.is_zero():
            raise ExactError("bivariate inverse needs an invertible constant term")
        inv0 = 1 / c0
        rest = _BiJet(self.dmax, self.umax,
                      {k: v * inv0 for k, v in self.terms.items() if k != (0, 0)})
        out = _BiJet(self.dmax, self.umax, {(0, 0): RatFunc.const(1)})
        power = _BiJet(self.dmax, self.umax, {(0, 0): RatFunc.const(1)})
        sign = Fraction(1)
        for _ in range(self.dmax + self.umax + 1):
            power = power.mul(rest)
            if not power.terms:
                break
            sign = -sign
            out = out.add(power.scale(sign))
        return out.scale(inv0)

    def diff_d(self):
        out = {}
        for (i, j), v in self.terms.items():
            if i:
                out[(i - 1, j)] = v * i if (i - 1, j) not in out else out[(i - 1, j)] + v * i
        return _BiJet(self.dmax, self.umax, out)

    def diff_u(self):
        out = {}
        for (i, j), v in self.terms.items():
            if j:
                key = (i, j - 1)
                out[key] = v * j if key not in out else out[key] + v * j
        return _BiJet(self.dmax, self.umax, out)

    def shift_d(self, m):
        return _BiJet(self.dmax, self.umax, {(i + m, j): v for (i, j), v in self.terms.items() if 0 <= i + m <= self.dmax})

    def coeff(self, i, j) -> RatFunc:
        return self.terms.get((i, j), RatFunc.const(0))


def _derivative_list(curve: SpectralCurve, side: str, count: int) -> list:
    """[f^(1)representations...]: successive z-derivatives of x (or y), as
    rational functions; index k holds the (k+1)-st derivative."""
    f = curve.xp if side == "x" else curve.yp
    out = [f]
    for _ in range(count):
        out.append(out[-1].derivative())
    return out


def loop_kernel_coeff(curve: SpectralCurve, k: int, l: int, _cache={}) -> RatFunc:
    """d_{x1}^{2k} d_{x2}^{2l} of (B/dx1 dx2 - 1/(x1-x2)^2) on the diagonal.

    Exact rational function of the diagonal point; the difference of the two
    singular kernels is regular, which the construction certifies by exact
    divisibility by (z1 - z2)^2.
    """
    key = (curve.hash, k, l)
    if key in _cache:
        return _cache[key]
    # the double pole is unshifted from d^2, and each d/dx eats one order in
    # its variable (with d/ds2 = d/du - d/dd spilling into d as well)
    D = 2 * k + 2 * l + 2
    U = 2 * l + 2
    xd = _derivative_list(curve, "x", D + U + 2)
    # z1 = z + u + d, z2 = z + u: expand x'(z1), x'(z2), and the divided
    # difference (x(z1) - x(z2))/d, all as (d, u)-jets
    xp1 = _BiJet(D, U)
    xp2 = _BiJet(D, U)
    pdiff = _BiJet(D, U)
    for i in range(D + 1):
        for j in range(U + 1):
            m = i + j
            # x'(z+u+d): coefficient of d^i u^j is x^{(1+m)} / (i! j!)
            c = xd[m] * Fraction(1, factorial(i) * factorial(j))
            xp1.terms[(i, j)] = c
            if i == 0:
                xp2.terms[(0, j)] = xd[j] * Fraction(1, factorial(j))
            # (x(z1)-x(z2))/d = sum_{m>=1} x^{(m)}(z+u) d^{m-1}/m!
            cc = xd[i + j] * Fraction(1, factorial(i + 1) * factorial(j))
            pdiff.terms[(i, j)] = cc
    xp1.terms = {kk: v for kk, v in xp1.terms.items() if not v.is_zero()}
    xp2.terms = {kk: v for kk, v in xp2.terms.items() if not v.is_zero()}
    pdiff.terms = {kk: v for kk, v in pdiff.terms.items() if not v.is_zero()}
    q = xp1.mul(xp2).inverse().sub(pdiff.mul(pdiff).inverse())
    for j in range(U + 1):
        if (0, j) in q.terms or (1, j) in q.terms:
            raise ExactError("two-point kernel difference failed to regularize")
    c = q.shift_d(-2)
    invxp1 = xp1.inverse()
    invxp2 = xp2.inverse()
    for _ in range(2 * k):
        c = invxp1.mul(c.diff_d())
    for _ in range(2 * l):
        # d/ds2 acts as d/du - d/dd in these coordinates
        c = invxp2.mul(c.diff_u().sub(c.diff_d()))
    out = c.coeff(0, 0)
    _cache[key] = out
    return out


# ---------------------------------------------------------------------------
# family providers
# ---------------------------------------------------------------------------

class FDFamilyProvider:
    """Edge and vertex inputs taken from stored pole-basis differentials."""

    def __init__(self, curve: SpectralCurve, family: dict):
        self.curve = curve
        self.family = family

    def one_point_ratio(self, gt: int) -> RatFunc:
        fd = self.family.get((gt, 1))
        if fd is None:
            raise ExactError(f"family lacks the one-point input at genus {gt}")
        return fd_to_ratfunc(fd) / self.curve.xp

    def stable_edge(self, gt: int, m: int):
        if (gt, m) == (0, 2):
            raise ExactError("the two-point seed is built in, not provided")
        fd = self.family.get((gt, m))
        if fd is None:
            raise ExactError(f"family lacks the ({gt},{m}) edge input")
        return fd


class TrivialDualFamilyProvider:
    """Closed-form family of a curve whose own dual side is trivial: the
    stable differentials vanish except one-point ones, whose ratio to dx is
    minus the h^{2g} deformation corrections of the vital logarithms."""

    def __init__(self, curve: SpectralCurve):
        self.curve = curve

    def one_point_ratio(self, gt: int) -> RatFunc:
        total = RatFunc.const(0)
        for _, form in log_correction(self.curve, gt):
            total = total - form / self.curve.xp
        return total

    def stable_edge(self, gt: int, m: int):
        return None


# ---------------------------------------------------------------------------
# one evaluation of the transform at fixed anchors
# ---------------------------------------------------------------------------

class SwapRun:
    """Exact local evaluation of the dual n-point data at chosen anchors.

    anchors: per slot, the expansion point t_i (rational, pairwise distinct).
    windows: per slot, the needed exact output window (lo, hi); lo < 0 only
    when the anchor is a candidate pole of the dual side.
    """

    def __init__(self, curve: SpectralCurve, provider, g: int, n: int, anchors, windows):
        self.curve = curve
        self.provider = provider
        self.g, self.n = g, n
        self.anchors = [Fraction(a) for a in anchors]
        if len(set(self.anchors)) != n:
            raise ExactError("anchors must be pairwise distinct")
        self.windows = list(windows)
        self.hrel = 2 * g - 2 + 2 * n
        self.K = max(3 * g - 3 + 2 * n, 1)
        slack = 2 * self.K + 1 + self.hrel + 2
        e_caps = [w[1] + slack for w in self.windows]
        self.alg = JetAlgebra(n, self.hrel, [self.K + 1] * n, e_caps)
        # twin algebra without the u-h coupling guard, for building weights
        # whose grading shift lands only at the end of the construction
        self.alg_free = JetAlgebra(n, self.hrel, [self.K + 1] * n, e_caps, couple=False)
        self._jet_cache: dict = {}
        self._scoef = _s_coeffs(self.hrel // 2 + 1)
        self._subset_cache: dict = {}
        self._d2k_cache: dict = {}

    # -- ingredient jets ------------------------------------------------
    def jet(self, f: RatFunc, slot: int) -> MPoly:
        key = (f, slot)
        if key not in self._jet_cache:
            s = expand_ratfunc(f, self.anchors[slot], 0, self.alg.e_caps[slot])
            self._jet_cache[key] = MPoly.from_series(self.alg, slot, s)
        return self._jet_cache[key]

    def _dx2k(self, base_key, f: RatFunc, order: int) -> RatFunc:
        """order-fold application of (1/x') d/dz, cached by symbolic key."""
        key = (base_key, order)
        if key not in self._d2k_cache:
            if order == 0:
                self._d2k_cache[key] = f
            else:
                prev = self._dx2k(base_key, f, order - 1)
                self._d2k_cache[key] = prev.derivative() / self.curve.xp
        return self._d2k_cache[key]

    # -- vertex weight ---------------------------------------------------
    def vertex_exponent(self, slot: int) -> MPoly:
        """u S(h u d/dx) [sum over genus of the one-point ratios] minus the
        seed term; every contribution is an exact rational function."""
        out = MPoly.zero(self.alg)
        # genus >= 1 one-point inputs, with the full S sum
        gmax = self.hrel // 2
        for gt in range(1, gmax + 1):
            if 2 * gt - 1 > 2 * self.g - 2 + self.n:
                break
            ratio = self.provider.one_point_ratio(gt)
            if ratio.is_zero():
                continue
            for k in range(0, (self.hrel - 2 * gt) // 2 + 1):
                f = self._dx2k(("om1", gt), ratio, 2 * k)
                term = self.jet(f, slot).shift(h=2 * gt + 2 * k, u={slot: 2 * k + 1})
                out = out + term.scale(self._scoef[k])
        # the seed -y contributes only through two or more x-derivatives
        for k in range(1, self.hrel // 2 + 1):
            f = self._dx2k(("seed",), self._seed_ratio(), 2 * k - 1)
            term = self.jet(f, slot).shift(h=2 * k, u={slot: 2 * k + 1})
            out = out + term.scale(-self._scoef[k])
        return out

    def _seed_ratio(self) -> RatFunc:
        # d/dx applied once to y: y'/x' (rational even when y carries logs)
        return self.curve.yp / self.curve.xp

    # -- edge weights -----------------------------------------------------
    def cross_edge(self, i: int, j: int) -> MPoly:
        """Total weight of two-point connections between distinct slots."""
        ti, tj = self.anchors[i], self.anchors[j]
        smax = (self.hrel - 2) // 2
        out = MPoly.zero(self.alg)
        base_i = expand_ratfunc(1 / self.curve.xp, ti, 0, self.alg.e_caps[i])
        base_j = expand_ratfunc(1 / self.curve.xp, tj, 0, self.alg.e_caps[j])
        invx_i = MPoly.from_series(self.alg, i, base_i)
        invx_j = MPoly.from_series(self.alg, j, base_j)
        # 1/(z_i - z_j)^2 as a two-slot jet
        delta = ti - tj
        geom = MPoly.zero(self.alg)
        cap = self.alg.e_caps[i] + self.alg.e_caps[j]
        for m in range(0, cap + 1):
            c = Fraction((m + 1) * (-1) ** m, 1) / delta ** (m + 2)
            inner = MPoly.zero(self.alg)
            for a in range(0, m + 1):
                if a <= self.alg.e_caps[i] and m - a <= self.alg.e_caps[j]:
                    sgn = Fraction((-1) ** (m - a) * factorial(m), factorial(a) * factorial(m - a))
                    inner = inner + MPoly.monomial(self.alg, sgn, e={i: a, j: m - a})
            geom = geom + inner.scale(c)
        base = geom * invx_i * invx_j
        for k in range(0, smax + 1):
            dk = base
            for _ in range(2 * k):
                dk = invx_i * dk.d_de(i)
            for l in range(0, smax - k + 1):
                dkl = dk
                for _ in range(2 * l):
                    dkl = invx_j * dkl.d_de(j)
                w = dkl.shift(h=2 + 2 * k + 2 * l, u={i: 2 * k + 1, j: 2 * l + 1})
                out = out + w.scale(self._scoef[k] * self._scoef[l])
        return out

    def loop_edge(self, i: int) -> MPoly:
        """Same-vertex two-point weight with the diagonal regularization,
        including the 1/2 symmetry factor."""
        smax = (self.hrel - 2) // 2
        out = MPoly.zero(self.alg)
        for k in range(0, smax + 1):
            for l in range(0, smax - k + 1):
                f = loop_kernel_coeff(self.curve, k, l)
                if f.is_zero():
                    continue
                term = self.jet(f, i).shift(h=2 + 2 * k + 2 * l, u={i: 2 * k + 2 * l + 2})
                out = out + term.scale(self._scoef[k] * self._scoef[l] * Fraction(1, 2))
        return out

    def higher_edges_at(self, i: int, subset) -> MPoly:
        """Multiedge weights (index >= 3 or positive genus) whose minimal
        attached slot is i; grouped this way every edge is consumed exactly
        once, just before slot i collapses."""
        out = MPoly.zero(self.alg)
        chi = 2 * self.g - 2 + self.n
        tail = tuple(s for s in subset if s >= i)
        for m in range(2, self.hrel // 2 + 2):
            for gt in range(0, self.hrel // 2 + 1):
                if (gt, m) == (0, 2):
                    continue
                cost = 2 * (m - 1) + 2 * gt
                if cost > self.hrel or 2 * gt - 2 + m > chi:
                    continue
                fd = self.provider.stable_edge(gt, m)
                if fd is None or fd.is_zero():
                    continue
                out = out + self._one_multiedge(fd, gt, m, i, tail)
        return out

    def _one_multiedge(self, fd: FDiff, gt: int, m: int, head: int, tail) -> MPoly:
        """Weight of one stored differential as a multiedge, summed over leg
        attachments containing head (multisets, weight 1/prod(mult!))."""
        out = MPoly.zero(self.alg)
        budget_k = (self.hrel - 2 * (m - 1) - 2 * gt) // 2
        leg_cache: dict = {}

        def leg_jet(q, d, slot, k):
            key = (q, d, slot, k)
            if key not in leg_cache:
                f = self._dx2k(("eta", q, d), RatFunc.const(1) / ((RatFunc.z() - q) ** d) / self.curve.xp, 2 * k)
                leg_cache[key] = self.jet(f, slot)
            return leg_cache[key]

        free = self.alg_free
        for attach in combinations_with_replacement(tail, m):
            if attach[0] != head:
                continue
            mult: dict = {}
            for v in attach:
                mult[v] = mult.get(v, 0) + 1
            sym = Fraction(1)
            for v, c in mult.items():
                sym /= factorial(c)
            for key, coeff in fd.terms.items():
                # built in the uncoupled algebra: the grading shift of the
                # whole multiedge lands only after all legs are in place
                piece = MPoly.const(free, coeff * sym)
                hshift = 2 * (m - 1) + 2 * gt
                for leg in range(m):
                    slot = attach[leg]
                    q, d = key[leg]
                    leg_sum = MPoly.zero(free)
                    for k in range(0, budget_k + 1):
                        lj = MPoly(free, leg_jet(q, d, slot, k).terms)
                        lj = lj.shift(h=2 * k, u={slot: 2 * k + 1})
                        leg_sum = leg_sum + lj.scale(self._scoef[k])
                    piece = piece * leg_sum
                    if piece.is_zero():
                        break
                piece = piece.shift(h=hshift)
                out = out + MPoly(self.alg, piece.terms)
        return out

    # -- assembly and collapse ----------------------------------------------
    def all_graphs(self, subset: tuple) -> MPoly:
        """The collapsed all-multigraph object over the given slots.

        Edges are grouped by their minimal slot and each slot is collapsed as
        soon as everything touching it has been multiplied in; the collapse
        operator commutes with the remaining factors, and early collapse
        keeps the intermediate states small.
        """
        if subset in self._subset_cache:
            return self._subset_cache[subset]
        state = MPoly.const(self.alg, 1)
        for a, i in enumerate(subset):
            group = self.loop_edge(i)
            for j in subset[a + 1:]:
                group = group + self.cross_edge(i, j)
            group = group + self.higher_edges_at(i, subset)
            state = state * group.exp_positive_h()
            state = state * self.vertex_exponent(i).exp_positive_h()
            state = self.collapse(state, i)
        self._subset_cache[subset] = state
        return state

    def collapse(self, state: MPoly, slot: int) -> MPoly:
        """Apply sum_k (d/dy)^k [u^k] (dx/dy) (1/u) to one slot and evaluate
        (or retain the requested window for anchored-pole slots)."""
        dxdy = self._laurent_jet(self.curve.xp / self.curve.yp, slot)
        invyp = self._laurent_jet(1 / self.curve.yp, slot)
        lo, hi = self.windows[slot]
        out = MPoly.zero(self.alg)
        for b in range(1, self.K + 2):
            piece = state.u_coefficient(slot, b)
            if piece.is_zero():
                continue
            k = b - 1
            piece = piece * dxdy
            for _ in range(k):
                piece = piece.d_de(slot) * invyp
            if lo == 0 and hi == 0:
                piece = piece.eval_slot(slot)
            else:
                piece = piece.truncate_slot(slot, lo, hi)
            out = out + piece
        return out

    def _laurent_jet(self, f: RatFunc, slot: int) -> MPoly:
        key = ("laurent", f, slot)
        if key not in self._jet_cache:
            s = expand_ratfunc(f, self.anchors[slot], -2, self.alg.e_caps[slot])
            self._jet_cache[key] = MPoly.from_series(self.alg, slot, s, lo_need=s.low)
        return self._jet_cache[key]

    # -- connected part ------------------------------------------------------
    def connected(self) -> MPoly:
        slots = tuple(range(self.n))
        return self._connected(slots)

    def _connected(self, subset: tuple) -> MPoly:
        if len(subset) == 1:
            return self.all_graphs(subset)
        total = self.all_graphs(subset)
        head = subset[0]
        rest = subset[1:]
        for r in range(0, len(rest)):
            for tail in _subsets_of_size(rest, r):
                block = (head,) + tail
                if len(block) == len(subset):
                    continue
                comp = tuple(s for s in subset if s not in block)
                total = total - self._connected(block) * self.all_graphs(comp)
        return total

    def result(self) -> dict:
        """Exact window data of the dual object divided by the dual dx's.

        Returns a map from per-slot e-exponent tuples to rationals; includes
        the global (-1)^n prefactor of the transform.
        """
        conn = self.connected()
        coeff = conn.h_coefficient(self.hrel)
        sign = Fraction((-1) ** self.n)
        data = coeff.pure_e_coefficients(tuple(range(self.n)))
        return {k: sign * v for k, v in data.items() if v}


def _subsets_of_size(items: tuple, r: int):
    from itertools import combinations
    return combinations(items, r)

"""Recomputation bridge between the plain and logarithmic differential families.

The logarithmic family is a blobbed solution of the same loop equations; the
two families determine each other through finite sums over insertions of the
genus-graded one-point blob phi_g, contracted slot by slot with the star
pairing at the ramification points.
"""
from __future__ import annotations

from fractions import Fraction
from math import factorial

from .curve import SpectralCurve
from .differentials import FDSeries, FDiff, expand_slot, fd_to_ratfunc
from .qmath import ExactError, QZERO
from .ratfunc import RatFunc
from .recursion import Engine, vital_correction_fd
from .series import expand_ratfunc


def phi(curve: SpectralCurve, g: int) -> FDiff:
    """The one-point blob: minus the pole-basis projection of the vital-point
    deformed-log germs.  Zero when the vital set is empty."""
    return vital_correction_fd(curve, g)


def _primitive(fd: FDiff) -> RatFunc:
    """A rational primitive of an arity-1 pole-basis form (d >= 2 has no log)."""
    out = RatFunc.const(0)
    z = RatFunc.z()
    for key, c in fd.terms.items():
        (q, d), = key
        out = out + RatFunc.const(Fraction(c, 1 - d)) * (z - q) ** (1 - d)
    return out


def star_pair(omega: FDiff, slot: int, blob: FDiff, curve: SpectralCurve, width: int = 0) -> FDiff:
    """Contract one slot of omega against a blob: sum over zeros p of dx of
    res_{t=p} omega(..., t, ...) * int_p^t blob.

    The primitive is rational and its basepoint constant is killed by the
    residue because stored differentials are residue-free in every slot.
    """
    if blob.n != 1:
        raise ExactError("blob must be an arity-1 differential")
    n = omega.n
    rest = tuple(i for i in range(n) if i != slot)
    out = FDiff.zero(n - 1)
    if blob.is_zero() or omega.is_zero():
        return out
    W = width or (max(omega.max_order_at(r.p) for r in curve.rams) + 4 if curve.rams else 4)
    prim = _primitive(blob)
    for ram in curve.rams:
        se = expand_slot(omega, slot, ram.p, -W, W, labels=rest)
        ps = expand_ratfunc(prim, ram.p, 0, W)
        ps = ps - ps.coeff(0)  # basepoint normalization; irrelevant under res
        out = out + se.mul_scalar_series(ps).residue()
    return out


def _insertion_sum(family: dict, curve: SpectralCurve, g: int, m: int, signed: bool) -> FDiff:
    """sum_{k<=g} (+-1)^k/k! sum_{g0 + g1 + ... + gk = g, gi >= 1}
    family[(g0, m+k)] with each extra slot star-contracted against phi_{gi}.
    """
    total = FDiff.zero(m)
    blobs = {}
    for k in range(0, g + 1):
        sign = Fraction((-1) ** k if signed else 1, factorial(k))
        for parts in _compositions(g, k):
            g0 = g - sum(parts)
            arity = m + k
            if g0 == 0 and arity <= 2:
                continue  # the two-point seed pairs to zero, one-point never occurs
            if 2 * g0 - 2 + arity <= 0:
                continue
            base = family[(g0, arity)]
            for gi in parts:
                if gi not in blobs:
                    blobs[gi] = phi(curve, gi)
                base = star_pair(base, base.n - 1, blobs[gi], curve)
            total = total + base.scale(sign)
    return total


def _compositions(g: int, k: int):
    """Ordered k-tuples of integers >= 1 summing to at most g."""
    if k == 0:
        yield ()
        return
    for first in range(1, g + 1):
        for rest in _compositions(g - first, k - 1):
            if first + sum(rest) <= g:
                yield (first,) + rest


def log_from_tr(family: dict, curve: SpectralCurve, g: int, m: int) -> FDiff:
    """Rebuild the logarithmic differential from the plain family."""
    out = _insertion_sum(family, curve, g, m, signed=False)
    if m == 1 and g >= 1:
        out = out + phi(curve, g)
    return out


def tr_from_log(family: dict, curve: SpectralCurve, g: int, m: int) -> FDiff:
    """Rebuild the plain differential from the logarithmic family."""
    out = _insertion_sum(family, curve, g, m, signed=True)
    if m == 1 and g >= 1:
        out = out - phi(curve, g)
    return out

"""Ground-field helpers: exact rationals, parsing, and small linear solves.

Every coefficient in this package is a ``fractions.Fraction``.  Rationals
cross the CLI boundary as strings of the form ``"p/q"`` (or ``"p"``); floats
are rejected everywhere.
"""
from __future__ import annotations

from fractions import Fraction

Q = Fraction

QZERO = Fraction(0)
QONE = Fraction(1)


class ExactError(Exception):
    """Base class for all exactness/assumption failures in this package."""


class InsufficientPrecision(ExactError):
    """A Laurent window was too narrow for the requested coefficient."""


def qstr(x: Fraction) -> str:
    """Canonical string form ``p/q`` (or ``p`` when q == 1)."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_q(text) -> Fraction:
    """Parse a rational given as ``"p/q"`` or ``"p"``.  Rejects floats."""
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ValueError(f"rational must be a string 'p/q' or an int, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    s = text.strip()
    if "." in s or "e" in s.lower():
        raise ValueError(f"floats are not accepted, got {text!r}")
    if "/" in s:
        num, den = s.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(s))


def solve_linear(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Solve a (possibly overdetermined but consistent) exact linear system.

    Gaussian elimination over Q.  Raises ExactError if the system is
    singular or inconsistent.
    """
    m, n = len(rows), len(rows[0]) if rows else 0
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    for i in range(r, m):
        if a[i][n] != 0:
            raise ExactError("inconsistent linear system")
    if len(piv_cols) < n:
        raise ExactError("singular linear system")
    sol = [QZERO] * n
    for i, c in enumerate(piv_cols):
        sol[c] = a[i][n]
    return sol

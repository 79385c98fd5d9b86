"""Exact linear feasibility: find ``x ≥ 0`` with ``A x = b`` over the rationals.

Phase one of the simplex method with artificial variables and Bland's
pivoting rule, which cannot cycle. All arithmetic is on ``Fraction``, so
"infeasible" is a proof, not a tolerance call.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

_ZERO = Fraction(0)


def find_nonnegative_solution(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> list[Fraction] | None:
    """Return a vertex solution of ``rows · x = rhs, x ≥ 0`` or ``None`` if none exists."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    if m == 0:
        return [_ZERO] * n
    if any(len(r) != n for r in rows) or len(rhs) != m:
        raise ValueError("ragged constraint system")

    # tableau: n structural columns, m artificial columns, then the right-hand side
    tab: list[list[Fraction]] = []
    for i, (r, b) in enumerate(zip(rows, rhs)):
        r = [Fraction(v) for v in r]
        b = Fraction(b)
        if b < 0:
            r = [-v for v in r]
            b = -b
        art = [_ZERO] * m
        art[i] = Fraction(1)
        tab.append(r + art + [b])
    basis = list(range(n, n + m))
    width = n + m
    # reduced costs of "minimise the sum of artificials"
    cost = [-sum((tab[i][j] for i in range(m)), _ZERO) for j in range(n)] + [_ZERO] * m
    value = -sum((tab[i][-1] for i in range(m)), _ZERO)

    while True:
        entering = next((j for j in range(width) if cost[j] < 0), None)
        if entering is None:
            break
        leaving = None
        best = None
        for i in range(m):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leaving]):
                    best, leaving = ratio, i
        if leaving is None:
            # unbounded direction; cannot happen for a phase-one objective bounded below by 0
            raise ArithmeticError("phase-one objective unbounded")
        _pivot(tab, leaving, entering)
        factor = cost[entering]
        if factor:
            prow = tab[leaving]
            for j in range(width):
                if prow[j]:
                    cost[j] -= factor * prow[j]
            value -= factor * prow[-1]
        basis[leaving] = entering

    if value != 0:
        return None
    x = [_ZERO] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = tab[i][-1]
    return x


def _pivot(tab: list[list[Fraction]], r: int, c: int) -> None:
    prow = tab[r]
    p = prow[c]
    if p != 1:
        tab[r] = prow = [v / p for v in prow]
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(tab):
        if i != r:
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]

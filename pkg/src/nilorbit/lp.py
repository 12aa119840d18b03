"""Exact feasibility for homogeneous systems of linear constraints.

The only question the cone code asks is whether a point x exists with

    A_eq x = 0,   A_gt x > 0,   A_ge x >= 0

over the rationals.  The system is homogeneous, so strict rows can be
rescaled to ``>= 1``.  We solve the equalities by a kernel basis and run a
phase-one simplex with Bland's rule on what remains.  Everything is Fraction
arithmetic, so the answer is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

from .exact import ONE, ZERO, dot, null_vectors


def _int_row(values) -> list[int]:
    """Positive multiple of a rational row with integer entries."""
    den = 1
    for v in values:
        den = lcm(den, Fraction(v).denominator)
    return [int(Fraction(v) * den) for v in values]


def _reduce(row: list[int]) -> list[int]:
    g = gcd(*row)
    return [v // g for v in row] if g > 1 else row


def _phase_one(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Find z >= 0 with rows . z = rhs (rhs >= 0), or None.

    Tableau simplex with one artificial per row and Bland's rule against
    cycling.  The tableau is kept fraction free: every row is an integer
    multiple of the true row, which leaves ratios and signs unchanged, and is
    divided by its gcd after each pivot.
    """
    m = len(rows)
    nz = len(rows[0]) if rows else 0
    if m == 0:
        return [ZERO] * nz
    ncol = nz + m
    # row i scaled to integers; its artificial absorbs the scale, which keeps feasibility
    tab = []
    for i, (r, b) in enumerate(zip(rows, rhs)):
        t = _int_row(list(r) + [b])
        tab.append(t[:nz] + [1 if j == i else 0 for j in range(m)] + [t[-1]])
    basis = [nz + i for i in range(m)]
    # minimise the sum of artificials
    cost = [0] * (ncol + 1)
    for i in range(m):
        for j in range(ncol + 1):
            cost[j] -= tab[i][j]
    for i in range(m):
        cost[nz + i] = 0
    while True:
        enter = next((j for j in range(ncol) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                if leave is None:
                    leave = i
                    continue
                # compare rhs_i / a_i with rhs_leave / a_leave, each over its basic coefficient
                lhs = tab[i][-1] * tab[leave][enter]
                rhs_ = tab[leave][-1] * a
                if lhs < rhs_ or (lhs == rhs_ and basis[i] < basis[leave]):
                    leave = i
        if leave is None:  # unbounded in phase one cannot happen; guard anyway
            break
        prow = tab[leave]
        piv = prow[enter]
        for i in range(m):
            if i != leave:
                f = tab[i][enter]
                if f != 0:
                    tab[i] = _reduce([piv * x - f * y for x, y in zip(tab[i], prow)])
        f = cost[enter]
        cost = _reduce([piv * x - f * y for x, y in zip(cost, prow)])
        basis[leave] = enter
    if cost[-1] != 0:
        return None
    z = [ZERO] * ncol
    for i, bcol in enumerate(basis):
        z[bcol] = Fraction(tab[i][-1], tab[i][bcol])
    return z[:nz]


def find_point(dim: int, eq: Sequence[Sequence] = (), gt: Sequence[Sequence] = (),
               ge: Sequence[Sequence] = ()) -> tuple | None:
    """A rational x with eq.x = 0, gt.x > 0, ge.x >= 0, or None if there is none."""
    kern = null_vectors([tuple(r) for r in eq], dim) if eq else [
        tuple(ONE if i == j else ZERO for j in range(dim)) for i in range(dim)]
    k = len(kern)
    if k == 0:
        return None if gt else tuple(ZERO for _ in range(dim))
    # constraints on y where x = sum_j y_j kern_j
    def restrict(form):
        return [dot(form, v) for v in kern]
    rows, rhs = [], []
    for form in gt:
        r = restrict(form)
        if all(a == 0 for a in r):
            return None
        rows.append(r)
        rhs.append(ONE)
    for form in ge:
        r = restrict(form)
        if all(a == 0 for a in r):
            continue
        rows.append(r)
        rhs.append(ZERO)
    if not rows:
        y = [ZERO] * k
    else:
        # y = y+ - y-, slack s: r.y+ - r.y- - s = rhs
        m = len(rows)
        lp_rows = []
        for i, r in enumerate(rows):
            lp_rows.append(list(r) + [-a for a in r] + [(-ONE if j == i else ZERO) for j in range(m)])
        z = _phase_one(lp_rows, rhs)
        if z is None:
            return None
        y = [z[j] - z[k + j] for j in range(k)]
    x = [ZERO] * dim
    for c, v in zip(y, kern):
        if c != 0:
            x = [a + c * b for a, b in zip(x, v)]
    return tuple(x)


def feasible(dim: int, eq=(), gt=(), ge=()) -> bool:
    return find_point(dim, eq, gt, ge) is not None

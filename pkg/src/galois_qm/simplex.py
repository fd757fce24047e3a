"""Exact rational phase-1 simplex for feasibility of ``A x = b, x >= 0``.

Pivoting uses Bland's rule (lowest-index entering column, lowest-index
leaving basic variable on ratio ties), so the method terminates without
cycling and the result is reproducible.  When the system is infeasible the
final phase-1 duals give a Farkas certificate ``y`` with ``y.A_j <= 0`` for
every column and ``y.b > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass
class Phase1Result:
    feasible: bool
    x: list[Fraction] | None
    farkas: list[Fraction] | None
    pivots: int


def feasible_point(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Phase1Result:
    m = len(a)
    n = len(a[0]) if m else 0
    rows = []
    flips = []
    for i in range(m):
        row = [Fraction(v) for v in a[i]]
        rhs = Fraction(b[i])
        flip = rhs < 0
        if flip:
            row, rhs = [-v for v in row], -rhs
        flips.append(flip)
        rows.append(row + [Fraction(int(i == k)) for k in range(m)] + [rhs])
    width = n + m
    # reduced costs of min sum(artificials) with the artificial basis
    cost = [-sum((r[j] for r in rows), Fraction(0)) for j in range(n)] + [Fraction(0)] * m
    obj = -sum((r[width] for r in rows), Fraction(0))
    basis = [n + i for i in range(m)]
    pivots = 0
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i, r in enumerate(rows):
            if r[enter] > 0:
                ratio = r[width] / r[enter]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:  # pragma: no cover - phase 1 is bounded below by 0
            raise AssertionError("phase-1 objective unbounded")
        pr = rows[leave]
        piv = pr[enter]
        if piv != 1:
            pr = [v / piv for v in pr]
            rows[leave] = pr
        nz = [j for j, v in enumerate(pr) if v]
        for i, r in enumerate(rows):
            if i != leave and r[enter]:
                f = r[enter]
                for j in nz:
                    r[j] -= f * pr[j]
        f = cost[enter]
        for j in nz:
            if j < width:
                cost[j] -= f * pr[j]
        obj -= f * pr[width]
        basis[leave] = enter
        pivots += 1
    value = -obj
    if value > 0:
        y = [1 - cost[n + i] for i in range(m)]
        y = [-v if flip else v for v, flip in zip(y, flips)]
        return Phase1Result(False, None, y, pivots)
    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rows[i][width]
    return Phase1Result(True, x, None, pivots)

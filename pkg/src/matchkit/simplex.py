"""Exact simplex over rationals.

Solves  max c.x  subject to  A x <= b,  x >= 0  with Fraction arithmetic,
Bland's smallest-index anti-cycling rule, and a phase-1 round (artificial
variables) whenever some right-hand side is negative.  Every solve is
certified before returning: primal feasibility, dual feasibility, and exact
equality of the two objective values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import MatchkitError

ZERO = Fraction(0)
ONE = Fraction(1)


class LpInternalError(MatchkitError):
    """Unbounded/infeasible programs cannot arise from well-formed markets;
    hitting one means the caller built a bad program."""


@dataclass
class LpResult:
    value: Fraction
    x: list[Fraction]
    duals: list[Fraction]


def simplex_max(
    c: list[Fraction], rows: list[list[Fraction]], rhs: list[Fraction]
) -> LpResult:
    """Maximize c.x s.t. rows[i].x <= rhs[i] for all i, x >= 0."""
    m, n = len(rows), len(c)
    c = [Fraction(v) for v in c]
    b = [Fraction(v) for v in rhs]

    # Tableau columns: n decision vars, m slacks, then (phase 1 only) one
    # artificial per negated row.  Row i holds the equation for basis[i].
    neg = [i for i in range(m) if b[i] < 0]
    n_art = len(neg)
    width = n + m + n_art
    tab: list[list[Fraction]] = []
    basis: list[int] = []
    art_col = {}
    for k, i in enumerate(neg):
        art_col[i] = n + m + k
    for i in range(m):
        row = [Fraction(v) for v in rows[i]] + [ZERO] * (m + n_art)
        row[n + i] = ONE
        flip = i in art_col
        if flip:
            row = [-v for v in row]
            row[art_col[i]] = ONE
            basis.append(art_col[i])
        else:
            basis.append(n + i)
        row.append(-b[i] if flip else b[i])
        tab.append(row)

    def pivot(r: int, col: int) -> None:
        prow = tab[r]
        piv = prow[col]
        if piv != ONE:
            inv = ONE / piv
            tab[r] = prow = [v * inv for v in prow]
        for i in range(m):
            if i == r:
                continue
            factor = tab[i][col]
            if factor:
                row_i = tab[i]
                tab[i] = [a - factor * p for a, p in zip(row_i, prow)]
        basis[r] = col

    def run(red: list[Fraction], allowed: int) -> None:
        # Bland: entering = lowest-index column with positive reduced cost;
        # leaving = min ratio, ties by lowest basic-variable index.
        while True:
            enter = -1
            for j in range(allowed):
                if red[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return
            leave = -1
            best = None
            for i in range(m):
                a = tab[i][enter]
                if a > 0:
                    ratio = tab[i][-1] / a
                    if best is None or ratio < best or (
                        ratio == best and basis[i] < basis[leave]
                    ):
                        best = ratio
                        leave = i
            if leave < 0:
                raise LpInternalError("linear program is unbounded")
            pivot(leave, enter)
            factor = red[enter]
            prow = tab[leave]
            for j in range(allowed):
                red[j] -= factor * prow[j]

    if n_art:
        # Phase 1: drive the artificials (basic, cost -1) to zero.
        red1 = [ZERO] * width
        infeas = ZERO
        for i in neg:
            for j in range(width):
                red1[j] += tab[i][j]
            infeas += tab[i][-1]
        for k in range(n_art):
            red1[n + m + k] = ZERO
        run(red1, n + m)
        total = sum((tab[i][-1] for i in range(m) if basis[i] >= n + m), ZERO)
        if total != 0:
            raise LpInternalError("linear program is infeasible")
        for i in range(m):
            if basis[i] >= n + m:
                # Basic artificial at zero: swap in any structural column
                # (its own slack always has a nonzero coefficient).
                for j in range(n + m):
                    if tab[i][j] != 0:
                        pivot(i, j)
                        break
                else:
                    raise LpInternalError("degenerate artificial row")

    # Phase 2 on the real objective.
    red = [Fraction(v) for v in c] + [ZERO] * (m + n_art)
    for i in range(m):
        if basis[i] < n and red[basis[i]] != 0:
            factor = red[basis[i]]
            prow = tab[i]
            for j in range(n + m):
                red[j] -= factor * prow[j]
    run(red, n + m)

    x = [ZERO] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = tab[i][-1]
    duals = [-red[n + i] for i in range(m)]
    value = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
    _certify(c, rows, b, x, duals, value)
    return LpResult(value=value, x=x, duals=duals)


def _certify(c, rows, b, x, duals, value) -> None:
    for xi in x:
        if xi < 0:
            raise LpInternalError("negative primal variable")
    for row, bi in zip(rows, b):
        lhs = sum((a * xi for a, xi in zip(row, x)), ZERO)
        if lhs > bi:
            raise LpInternalError("primal constraint violated")
    dual_value = ZERO
    for yi, bi in zip(duals, b):
        if yi < 0:
            raise LpInternalError("negative dual variable")
        dual_value += yi * bi
    for j, cj in enumerate(c):
        col = sum((duals[i] * rows[i][j] for i in range(len(rows))), ZERO)
        if col < cj:
            raise LpInternalError("dual constraint violated")
    if dual_value != value:
        raise LpInternalError("duality gap at claimed optimum")

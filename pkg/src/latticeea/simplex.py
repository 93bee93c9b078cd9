"""Two-phase tableau simplex over exact rationals, Bland's rule throughout.

Solves  minimize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
Small and slow on purpose: the state polytopes handled here have a few dozen
rows at most, and exactness matters more than speed.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Sequence

Row = Sequence[Fraction]


@dataclasses.dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
    infeasibility: Fraction | None = None  # phase-1 optimum when infeasible


def _pivot(T: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    piv = T[r][c]
    Rr = [v / piv for v in T[r]]
    T[r] = Rr
    for i, Ri in enumerate(T):
        if i != r and Ri[c] != 0:
            f = Ri[c]
            T[i] = [a - f * b for a, b in zip(Ri, Rr)]
    basis[r] = c


def _run(T, basis, allowed: int) -> bool:
    """Optimise in place; the objective row is T[-1].  False if unbounded."""
    m = len(T) - 1
    while True:
        obj = T[-1]
        enter = next((j for j in range(allowed) if obj[j] < 0), None)
        if enter is None:
            return True
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return False
        _pivot(T, basis, best[1], enter)


def minimize(
    c: Row,
    A_ub: Sequence[Row] = (),
    b_ub: Row = (),
    A_eq: Sequence[Row] = (),
    b_eq: Row = (),
) -> LPResult:
    n = len(c)
    F = Fraction
    rows = [([F(v) for v in a], F(b), True) for a, b in zip(A_ub, b_ub)]
    rows += [([F(v) for v in a], F(b), False) for a, b in zip(A_eq, b_eq)]
    n_slack = sum(1 for _, _, ub in rows if ub)
    # columns: x (n) | slacks | artificials | rhs
    signs = [-1 if b < 0 else 1 for _, b, _ in rows]
    slack_of, k = {}, 0
    for i, (_, _, ub) in enumerate(rows):
        if ub:
            slack_of[i], k = n + k, k + 1
    art_rows = [i for i, (_, _, ub) in enumerate(rows) if not ub or signs[i] < 0]
    n_art = len(art_rows)
    width = n + n_slack + n_art
    T: list[list[Fraction]] = []
    basis: list[int] = []
    for i, (a, b, ub) in enumerate(rows):
        row = [F(0)] * (width + 1)
        sg = signs[i]
        for j, v in enumerate(a):
            row[j] = sg * v
        if ub:
            row[slack_of[i]] = F(sg)
        row[-1] = sg * b
        T.append(row)
        basis.append(slack_of[i] if ub and sg > 0 else -1)
    for k, i in enumerate(art_rows):
        T[i][n + n_slack + k] = F(1)
        basis[i] = n + n_slack + k

    # phase 1: minimise the sum of artificials
    obj = [F(0)] * (width + 1)
    for i in art_rows:
        for j in range(width + 1):
            obj[j] -= T[i][j]
    for k in range(n_art):
        obj[n + n_slack + k] = F(0)
    T.append(obj)
    _run(T, basis, width)
    if -T[-1][-1] > 0:
        return LPResult("infeasible", infeasibility=-T[-1][-1])
    T.pop()
    # drive remaining artificials (at level zero) out of the basis
    i = 0
    while i < len(T):
        if basis[i] >= n + n_slack:
            col = next((j for j in range(n + n_slack) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1
    T = [row[: n + n_slack] + [row[-1]] for row in T]

    # phase 2
    obj = [F(v) for v in c] + [F(0)] * n_slack + [F(0)]
    for i, b in enumerate(basis):
        if obj[b] != 0:
            f = obj[b]
            obj = [u - f * v for u, v in zip(obj, T[i])]
    T.append(obj)
    if not _run(T, basis, n + n_slack):
        return LPResult("unbounded")
    x = [F(0)] * n
    for i, b in enumerate(basis):
        if b < n:
            x[b] = T[i][-1]
    return LPResult("optimal", tuple(x), -T[-1][-1])


def maximize(c: Row, *args, **kwargs) -> LPResult:
    res = minimize([-Fraction(v) for v in c], *args, **kwargs)
    if res.status == "optimal":
        return dataclasses.replace(res, value=-res.value)
    return res


def solve_square(M: Sequence[Row], rhs: Row) -> tuple[Fraction, ...] | None:
    """Unique solution of a square system by Gauss-Jordan, or None if singular."""
    n = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(M, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [v / p for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return tuple(A[r][-1] for r in range(n))

"""Exact phase-1 simplex over the rationals (Bland's rule)."""
from __future__ import annotations

from fractions import Fraction


def phase_one(A_ub, b_ub, A_eq, b_eq, nvars: int):
    """Find ``x >= 0`` with ``A_ub x <= b_ub`` and ``A_eq x = b_eq``.

    Returns ``(x, value)``: ``x`` is a feasible vertex (list of Fractions)
    or ``None``; ``value`` is the optimal sum of artificial variables, which
    is positive exactly when the system is infeasible.
    """
    Z = Fraction(0)
    rows = []  # (coeffs over structural + slack, rhs, needs_artificial)
    n_ub = len(A_ub)
    width = nvars + n_ub
    for r, (row, b) in enumerate(zip(A_ub, b_ub)):
        coeffs = [Fraction(v) for v in row] + [Z] * n_ub
        coeffs[nvars + r] = Fraction(1)
        rhs = Fraction(b)
        if rhs < 0:
            rows.append(([-v for v in coeffs], -rhs, True))
        else:
            rows.append((coeffs, rhs, False))
    for row, b in zip(A_eq, b_eq):
        coeffs = [Fraction(v) for v in row] + [Z] * n_ub
        rhs = Fraction(b)
        if rhs < 0:
            coeffs, rhs = [-v for v in coeffs], -rhs
        rows.append((coeffs, rhs, True))

    n_art = sum(1 for _, _, art in rows if art)
    total = width + n_art
    T = []
    basis = []
    a = width
    for r, (coeffs, rhs, art) in enumerate(rows):
        line = coeffs + [Z] * n_art + [rhs]
        if art:
            line[a] = Fraction(1)
            basis.append(a)
            a += 1
        else:
            basis.append(nvars + r)
        T.append(line)

    # Reduced costs of "minimize sum of artificials", expressed in the
    # non-basic variables.
    cost = [Z] * (total + 1)
    for r, line in enumerate(T):
        if basis[r] >= width:
            for j in range(total + 1):
                cost[j] -= line[j]
    for j in range(width, total):
        cost[j] = Z
    for r in range(len(T)):
        if basis[r] >= width:
            cost[basis[r]] = Z

    while True:
        enter = next((j for j in range(total) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        leave = None
        for r, line in enumerate(T):
            if line[enter] > 0:
                ratio = line[-1] / line[enter]
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave is None:  # unbounded; cannot happen for phase 1
            raise RuntimeError("phase-1 objective unbounded")
        _pivot(T, cost, leave, enter)
        basis[leave] = enter

    value = -cost[-1]
    if value > 0:
        return None, value
    x = [Z] * nvars
    for r, j in enumerate(basis):
        if j < nvars:
            x[j] = T[r][-1]
    return x, value


def _pivot(T, cost, r, c) -> None:
    piv = T[r][c]
    row = [v / piv for v in T[r]]
    T[r] = row
    nz = [j for j, v in enumerate(row) if v != 0]
    for i, line in enumerate(T):
        if i != r and line[c] != 0:
            f = line[c]
            for j in nz:
                line[j] -= f * row[j]
    if cost[c] != 0:
        f = cost[c]
        for j in nz:
            cost[j] -= f * row[j]

"""Exact rational linear-program feasibility at desk scale.

Phase-1 simplex with Bland's rule on Fraction tableaus: finds a point of
{x >= 0 : A x = b} or reports that none exists.  No tolerances, no
cycling.  Problem sizes here are tiny (tens of variables), so the dense
tableau is fine.
"""

from __future__ import annotations

from .linalg import ONE, ZERO


def feasible_point(a_rows, b):
    """Return x >= 0 with A x = b, or None when the system is infeasible."""
    m = len(a_rows)
    if m == 0:
        return []
    n = len(a_rows[0])
    # Normalize to b >= 0 so artificial variables start feasible.
    rows = []
    rhs = []
    for i in range(m):
        if b[i] < 0:
            rows.append([-x for x in a_rows[i]])
            rhs.append(-b[i])
        else:
            rows.append(list(a_rows[i]))
            rhs.append(b[i])
    # Tableau columns: n structural + m artificial + rhs.
    tableau = [rows[i] + [ONE if j == i else ZERO for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    # Phase-1 objective: minimize the sum of artificials.  Reduced costs
    # price out the basic artificials: structural j gets -sum_i A[i][j],
    # artificial columns start at 1 - 1 = 0, rhs tracks -objective.
    cost = [ZERO] * n + [ONE] * m + [ZERO]
    for i in range(m):
        for j in range(n + m + 1):
            cost[j] -= tableau[i][j]

    while True:
        enter = next((j for j in range(n + m) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            coef = tableau[i][enter]
            if coef > 0:
                ratio = tableau[i][-1] / coef
                # Bland: smallest ratio, ties to the lowest basis index.
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return None  # unbounded phase-1 cannot happen with artificials
        _, leave = best
        pivot = tableau[leave][enter]
        tableau[leave] = [x / pivot for x in tableau[leave]]
        for i in range(m):
            if i != leave and tableau[i][enter] != 0:
                f = tableau[i][enter]
                tableau[i] = [x - f * y for x, y in zip(tableau[i], tableau[leave])]
        if cost[enter] != 0:
            f = cost[enter]
            cost = [x - f * y for x, y in zip(cost, tableau[leave])]
        basis[leave] = enter

    if -cost[-1] != 0:
        return None  # artificials cannot be driven to zero
    x = [ZERO] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = tableau[i][-1]
    return x

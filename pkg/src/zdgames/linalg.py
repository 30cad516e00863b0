"""Exact linear algebra over the rationals.

Everything downstream (ZD detection, consistency, independence) is a rank
or nullspace condition, so all eliminations here run on ``Fraction``
entries with no tolerances.  Matrices are lists of row lists; vectors are
lists.  Sizes are desk scale (state spaces up to a few thousand), so plain
Gauss-Jordan with pivot normalization is enough.
"""

from __future__ import annotations

from fractions import Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def copy_matrix(m):
    return [list(row) for row in m]


def zeros(rows: int, cols: int):
    return [[ZERO] * cols for _ in range(rows)]


def identity(n: int):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = ONE
    return m


def transpose(m):
    if not m:
        return []
    return [list(col) for col in zip(*m)]


def matvec(m, v):
    return [sum((row[j] * v[j] for j in range(len(v))), ZERO) for row in m]


def matmul(a, b):
    bt = transpose(b)
    return [[sum((ra[k] * cb[k] for k in range(len(ra))), ZERO) for cb in bt] for ra in a]


def vec_add(u, v):
    return [x + y for x, y in zip(u, v)]


def vec_sub(u, v):
    return [x - y for x, y in zip(u, v)]


def vec_scale(c, v):
    return [c * x for x in v]


def is_zero_vector(v) -> bool:
    return all(x == 0 for x in v)


def rref(m):
    """Reduced row echelon form.

    Returns ``(reduced, pivot_columns)``.  Pivot ties break toward the
    lowest column index; pivots are normalized to 1 and eliminated both
    above and below, so the output is canonical for the row space.
    """
    a = copy_matrix(m)
    if not a:
        return a, []
    n_rows, n_cols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot_row = None
        for i in range(r, n_rows):
            if a[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        inv = ONE / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return a, pivots


def rank(m) -> int:
    _, pivots = rref(m)
    return len(pivots)


def row_space_basis(m):
    """Canonical basis (nonzero RREF rows) of the row space of ``m``."""
    reduced, pivots = rref(m)
    return [reduced[i] for i in range(len(pivots))]


def nullspace(m, n_cols: int | None = None):
    """Basis of the right nullspace {x : m x = 0}.

    ``n_cols`` must be given when ``m`` has no rows.  Free variables are
    set to 1 one at a time, which makes the basis deterministic.
    """
    if not m:
        if n_cols is None:
            raise ValueError("nullspace of an empty matrix needs n_cols")
        return [[ONE if j == i else ZERO for j in range(n_cols)] for i in range(n_cols)]
    cols = len(m[0])
    reduced, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        basis.append(v)
    return basis


def solve(m, b):
    """One particular solution of ``m x = b`` with free variables at 0.

    Returns ``None`` when the system is inconsistent.
    """
    if not m:
        return None
    cols = len(m[0])
    aug = [list(row) + [b[i]] for i, row in enumerate(m)]
    reduced, pivots = rref(aug)
    for i in range(len(pivots)):
        if pivots[i] == cols:
            return None  # pivot in the augmented column
    x = [ZERO] * cols
    for i, p in enumerate(pivots):
        x[p] = reduced[i][cols]
    return x


def hstack(a, b):
    return [list(ra) + list(rb) for ra, rb in zip(a, b)]


def columns_to_matrix(cols):
    """Matrix whose j-th column is ``cols[j]``."""
    return transpose([list(c) for c in cols])


def in_row_space(v, basis_rows) -> bool:
    stacked = [list(r) for r in basis_rows] + [list(v)]
    return rank(stacked) == rank([list(r) for r in basis_rows])


def rref_last_pivot(m):
    """RREF preferring the *highest* column index for each pivot.

    Used to reduce relation vectors modulo a kernel so that canonical
    representatives concentrate their support on low-index coordinates.
    Returns ``(reduced, pivot_columns)`` in original column indexing.
    """
    rev = [list(reversed(row)) for row in m]
    reduced, pivots = rref(rev)
    n_cols = len(m[0]) if m else 0
    back = [list(reversed(row)) for row in reduced]
    return back, [n_cols - 1 - p for p in pivots]


def eliminate_rows(vectors, basis_rows, basis_pivots):
    """Subtract basis components so each vector is 0 on the basis pivots.

    ``basis_rows`` must have 1 at their own pivot column.
    """
    out = []
    for v in vectors:
        w = list(v)
        for row, p in zip(basis_rows, basis_pivots):
            if w[p] != 0:
                f = w[p]
                w = [x - f * y for x, y in zip(w, row)]
        out.append(w)
    return out

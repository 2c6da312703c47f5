"""Exact dense linear algebra over any field-like coefficient type.

Entries only need +, -, *, /, unary - and truthiness (zero test), which
RatFunc and the tower elements provide.  Elimination scans rows and
columns in index order, so results are deterministic.
"""

from __future__ import annotations

from .errors import DivisionByZero


def _rref(rows, zero, one):
    """Reduced row echelon form in place; returns the pivot column list."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = one / rows[r][c]
        rows[r] = [inv * x for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return pivots


def nullspace(matrix, zero, one):
    """Basis of {v : M v = 0}, one vector per free column.

    Each basis vector is normalized with its free coordinate set to one;
    vectors are returned in increasing free-column order.
    """
    if not matrix:
        return []
    rows = [list(row) for row in matrix]
    ncols = len(rows[0])
    pivots = _rref(rows, zero, one)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][fc]
        basis.append(v)
    return basis


def solve(matrix, rhs, zero, one):
    """Solve M x = rhs for square M; raises DivisionByZero when singular."""
    n = len(matrix)
    rows = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    pivots = _rref(rows, zero, one)
    if len(pivots) < n or any(c >= n for c in pivots):
        raise DivisionByZero("singular linear system")
    x = [zero] * n
    for r, c in enumerate(pivots):
        x[c] = rows[r][n]
    return x

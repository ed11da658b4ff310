"""Exact linear algebra: bit-packed F2 elimination and integer Smith form.

Matrices over F2 travel as lists of Python ints, one bitmask per row, so a
rank computation is a handful of xors.  Matrices over Z travel as sparse
row dictionaries; elimination peels off unit pivots first (the boundary
matrices built elsewhere in this package start with entries in {-1, 0, 1},
so this stage almost always consumes everything) and hands any leftover
core to a dense Smith normal form with exact big-integer arithmetic.
"""

from __future__ import annotations

from typing import Iterable, Sequence


def f2_rank(rows: Iterable[int]) -> int:
    """Rank over F2 of the matrix whose rows are the given bitmasks."""
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            p = row.bit_length() - 1
            if p not in pivots:
                pivots[p] = row
                rank += 1
                break
            row ^= pivots[p]
    return rank


def _strip_unit_pivots(rows: dict[int, dict[int, int]]) -> int:
    """Eliminate with +-1 pivots in place; returns the number eliminated.

    Pivots are chosen to minimize fill (Markowitz count), which keeps the
    intermediate entries small on the nearly-unimodular matrices homology
    blocks produce.
    """
    cols: dict[int, set[int]] = {}
    for r, row in rows.items():
        for c in row:
            cols.setdefault(c, set()).add(r)
    eliminated = 0
    while True:
        best = None
        best_cost = None
        for r, row in rows.items():
            for c, val in row.items():
                if val in (1, -1):
                    cost = (len(row) - 1) * (len(cols[c]) - 1)
                    if best_cost is None or cost < best_cost:
                        best, best_cost = (r, c), cost
                        if cost == 0:
                            break
            if best_cost == 0:
                break
        if best is None:
            return eliminated
        r0, c0 = best
        pivot_row = rows.pop(r0)
        sign = pivot_row[c0]
        for c in pivot_row:
            cols[c].discard(r0)
        for r in list(cols[c0]):
            row = rows[r]
            factor = row[c0] * sign
            for c, val in pivot_row.items():
                new = row.get(c, 0) - factor * val
                if new:
                    row[c] = new
                    cols.setdefault(c, set()).add(r)
                else:
                    if c in row:
                        del row[c]
                        cols[c].discard(r)
            if not row:
                del rows[r]
        del cols[c0]
        eliminated += 1


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(mat: Sequence[Sequence[int]]):
    """Diagonalize an integer matrix: returns (d, u, v) with d = u*mat*v.

    ``d`` is diagonal with d[0][0] | d[1][1] | ..., all entries
    non-negative; ``u`` and ``v`` are square with determinant +-1.  Dense
    big-integer arithmetic throughout; meant for small cores and oracle
    checks, not bulk elimination.
    """
    a = [list(row) for row in mat]
    m = len(a)
    n = len(a[0]) if m else 0
    u = _identity(m)
    v = _identity(n)

    def row_sub(i: int, j: int, q: int) -> None:
        ai, aj = a[i], a[j]
        for k in range(n):
            ai[k] -= q * aj[k]
        ui, uj = u[i], u[j]
        for k in range(m):
            ui[k] -= q * uj[k]

    def col_sub(i: int, j: int, q: int) -> None:
        for row in a:
            row[i] -= q * row[j]
        for row in v:
            row[i] -= q * row[j]

    def row_swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < m and t < n:
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (pivot is None
                                or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        row_swap(t, pivot[0])
        col_swap(t, pivot[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_sub(i, t, q)
                    if a[i][t]:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_sub(j, t, q)
                    if a[t][j]:
                        col_swap(t, j)
                        dirty = True
            if dirty:
                continue
            p = a[t][t]
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_sub(t, offender, -1)
        if a[t][t] < 0:
            for k in range(n):
                a[t][k] = -a[t][k]
            for k in range(m):
                u[t][k] = -u[t][k]
        t += 1
    return a, u, v


def _dense_invariant_factors(mat: Sequence[Sequence[int]]) -> list[int]:
    d, _, _ = smith_normal_form(mat)
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i]:
            out.append(d[i][i])
    return out


def invariant_factors(rows: Iterable[dict[int, int]]) -> list[int]:
    """Nonzero invariant factors of a sparse integer matrix.

    ``rows`` holds one dict per row mapping column index to a nonzero
    entry.  The number of factors is the rank; the factors greater than 1
    are the torsion coefficients of the cokernel.
    """
    work = {i: dict(row) for i, row in enumerate(rows) if row}
    rank = _strip_unit_pivots(work)
    factors = [1] * rank
    if work:
        live_cols = sorted({c for row in work.values() for c in row})
        col_pos = {c: k for k, c in enumerate(live_cols)}
        dense = []
        for row in work.values():
            vec = [0] * len(live_cols)
            for c, val in row.items():
                vec[col_pos[c]] = val
            dense.append(vec)
        factors.extend(_dense_invariant_factors(dense))
    return factors


def integer_rank(rows: Iterable[dict[int, int]]) -> int:
    return len(invariant_factors(rows))

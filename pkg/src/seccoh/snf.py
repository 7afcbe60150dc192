"""Exact integer matrix reductions: Smith normal form and column lattices.

Everything runs over plain Python ints, so there is no overflow and no
floating point anywhere.  Transform matrices are tracked explicitly
because downstream code needs generators and reduction maps, not just
invariant factors.
"""

from __future__ import annotations


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matvec(matrix: list[list[int]], vec: list[int]) -> list[int]:
    return [sum(row[j] * vec[j] for j in range(len(vec))) for row in matrix]


def smith_normal_form(matrix):
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns ``(S, U, Uinv, V)`` with ``S = U @ A @ V``, ``U @ Uinv = I``,
    and S diagonal with nonnegative entries forming a divisibility chain
    d_0 | d_1 | ... (zeros, if any, trail).
    """
    rows = [list(r) for r in matrix]
    n = len(rows)
    m = len(rows[0]) if n else 0
    U = _identity(n)
    Uinv = _identity(n)
    V = _identity(m)

    def row_swap(i, j):
        if i == j:
            return
        rows[i], rows[j] = rows[j], rows[i]
        U[i], U[j] = U[j], U[i]
        for r in range(n):
            Uinv[r][i], Uinv[r][j] = Uinv[r][j], Uinv[r][i]

    def row_add(i, j, c):
        # row_i += c * row_j; inverse op recorded on Uinv columns
        ri, rj = rows[i], rows[j]
        for k in range(m):
            ri[k] += c * rj[k]
        ui, uj = U[i], U[j]
        for k in range(n):
            ui[k] += c * uj[k]
        for r in range(n):
            Uinv[r][j] -= c * Uinv[r][i]

    def row_negate(i):
        rows[i] = [-v for v in rows[i]]
        U[i] = [-v for v in U[i]]
        for r in range(n):
            Uinv[r][i] = -Uinv[r][i]

    def col_swap(i, j):
        if i == j:
            return
        for r in rows:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]

    def col_add(i, j, c):
        # col_i += c * col_j
        for r in rows:
            r[i] += c * r[j]
        for r in V:
            r[i] += c * r[j]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, n):
            for j in range(t, m):
                v = rows[i][j]
                if v and (best is None or abs(v) < best):
                    pivot, best = (i, j), abs(v)
        if pivot is None:
            break
        row_swap(t, pivot[0])
        col_swap(t, pivot[1])
        while True:
            if rows[t][t] < 0:
                row_negate(t)
            for i in range(t + 1, n):
                while rows[i][t]:
                    q = rows[i][t] // rows[t][t]
                    row_add(i, t, -q)
                    if rows[i][t]:
                        row_swap(t, i)
            for j in range(t + 1, m):
                while rows[t][j]:
                    q = rows[t][j] // rows[t][t]
                    col_add(j, t, -q)
                    if rows[t][j]:
                        col_swap(t, j)
            if any(rows[i][t] for i in range(t + 1, n)):
                continue
            if any(rows[t][j] for j in range(t + 1, m)):
                continue
            d = rows[t][t]
            bad = None
            for i in range(t + 1, n):
                if any(v % d for v in rows[i][t + 1 : m]):
                    bad = i
                    break
            if bad is None:
                break
            row_add(t, bad, 1)
        t += 1

    return rows, U, Uinv, V


def diagonal_of(S) -> list[int]:
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0))]


def kernel_basis(matrix) -> list[list[int]]:
    """Basis of the integer kernel {v : A v = 0}, as a list of vectors."""
    n = len(matrix)
    m = len(matrix[0]) if n else 0
    if m == 0:
        return []
    if n == 0:
        return [[1 if i == j else 0 for i in range(m)] for j in range(m)]
    S, _, _, V = smith_normal_form(matrix)
    rank = sum(1 for d in diagonal_of(S) if d != 0)
    return [[V[i][j] for i in range(m)] for j in range(rank, m)]


def _column_echelon(matrix, track: bool):
    """Integer column echelon form.

    Returns ``(cols, wcols, pivots)`` where ``cols`` spans the same column
    lattice as the input, pivots is a list of (row, col) with strictly
    increasing rows, and every processed row is zero outside its pivot
    column.  ``wcols`` records the column operations (input @ W == cols)
    when ``track`` is set.
    """
    n = len(matrix)
    m = len(matrix[0]) if n else 0
    cols = [[matrix[r][j] for r in range(n)] for j in range(m)]
    wcols = [[1 if i == j else 0 for i in range(m)] for j in range(m)] if track else None

    def cswap(i, j):
        if i == j:
            return
        cols[i], cols[j] = cols[j], cols[i]
        if track:
            wcols[i], wcols[j] = wcols[j], wcols[i]

    def cadd(i, j, c):
        ci, cj = cols[i], cols[j]
        for r in range(n):
            ci[r] += c * cj[r]
        if track:
            wi, wj = wcols[i], wcols[j]
            for r in range(m):
                wi[r] += c * wj[r]

    def cneg(i):
        cols[i] = [-v for v in cols[i]]
        if track:
            wcols[i] = [-v for v in wcols[i]]

    t = 0
    pivots: list[tuple[int, int]] = []
    for r in range(n):
        while True:
            nz = [j for j in range(t, m) if cols[j][r]]
            if len(nz) <= 1:
                break
            j0 = min(nz, key=lambda j: abs(cols[j][r]))
            for j in nz:
                if j == j0:
                    continue
                q = cols[j][r] // cols[j0][r]
                cadd(j, j0, -q)
        nz = [j for j in range(t, m) if cols[j][r]]
        if nz:
            cswap(t, nz[0])
            if cols[t][r] < 0:
                cneg(t)
            pivots.append((r, t))
            t += 1
    return cols, wcols, pivots


def _echelon_coords(cols, pivots, vec):
    """Coefficients of ``vec`` over the echelon pivot columns, or None."""
    residual = list(vec)
    coeffs = [0] * len(pivots)
    for k, (r, c) in enumerate(pivots):
        q, rem = divmod(residual[r], cols[c][r])
        if rem:
            return None
        if q:
            col = cols[c]
            for i in range(len(residual)):
                residual[i] -= q * col[i]
        coeffs[k] = q
    if any(residual):
        return None
    return coeffs


class Lattice:
    """Integer column lattice given by a generating set.

    Keeps an echelon basis; answers membership and basis coordinates.
    """

    def __init__(self, generators: list[list[int]], dim: int):
        self.dim = dim
        matrix = [[g[r] for g in generators] for r in range(dim)]
        cols, _, pivots = _column_echelon(matrix, track=False)
        self._cols = cols
        self._pivots = pivots
        self.basis = [cols[c] for _, c in pivots]

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def coords(self, vec: list[int]):
        """Express ``vec`` in the echelon basis; None if not in the lattice."""
        return _echelon_coords(self._cols, self._pivots, vec)

    def contains(self, vec: list[int]) -> bool:
        return self.coords(vec) is not None


def lattice_solve(matrix, target):
    """One integer solution x of ``A x = target``, or None if unsolvable."""
    n = len(matrix)
    m = len(matrix[0]) if n else 0
    cols, wcols, pivots = _column_echelon(matrix, track=True)
    y = _echelon_coords(cols, pivots, target)
    if y is None:
        return None
    x = [0] * m
    for k, (_, c) in enumerate(pivots):
        if y[k]:
            w = wcols[c]
            for i in range(m):
                x[i] += y[k] * w[i]
    return x

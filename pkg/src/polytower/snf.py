"""Exact integer matrix routines: Smith normal form, kernels, solving.

Matrices are lists of lists of unbounded Python ints.  The Smith reduction
tracks both transforms, picks minimum-magnitude pivots to limit coefficient
growth, and enforces the divisibility chain d1 | d2 | ... on the diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass


def zeros(rows: int, cols: int) -> list:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> list:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def matmul(a: list, b: list) -> list:
    if not a or not b:
        rows = len(a)
        cols = len(b[0]) if b else 0
        return zeros(rows, cols)
    n, m, p = len(a), len(b), len(b[0])
    out = zeros(n, p)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for k in range(m):
            aik = ai[k]
            if aik:
                bk = b[k]
                for j in range(p):
                    if bk[j]:
                        oi[j] += aik * bk[j]
    return out


def mat_vec(a: list, v: list) -> list:
    return [sum(ai[j] * v[j] for j in range(len(v)) if v[j]) for ai in a]


def transpose(a: list) -> list:
    if not a:
        return []
    return [list(row) for row in zip(*a)]


def copy_matrix(a: list) -> list:
    return [list(row) for row in a]


def is_zero_matrix(a: list) -> bool:
    return all(all(x == 0 for x in row) for row in a)


@dataclass
class SmithForm:
    """S = U * A * V with U, V unimodular and S diagonal, d1 | d2 | ..."""

    diagonal: list
    rank: int
    left: list  # U, rows x rows
    right: list  # V, cols x cols
    rows: int
    cols: int


def smith_normal_form(matrix: list, cols: int | None = None) -> SmithForm:
    m = len(matrix)
    n = cols if cols is not None else (len(matrix[0]) if m else 0)
    s = copy_matrix(matrix)
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        if i != j:
            s[i], s[j] = s[j], s[i]
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        if i != j:
            for row in s:
                row[i], row[j] = row[j], row[i]
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(src, dst, factor):
        if factor:
            s[dst] = [a + factor * b for a, b in zip(s[dst], s[src])]
            u[dst] = [a + factor * b for a, b in zip(u[dst], u[src])]

    def add_col(src, dst, factor):
        if factor:
            for row in s:
                row[dst] += factor * row[src]
            for row in v:
                row[dst] += factor * row[src]

    def negate_row(i):
        s[i] = [-a for a in s[i]]
        u[i] = [-a for a in u[i]]

    t = 0
    limit = min(m, n)
    while t < limit:
        pivot = None
        best = None
        for i in range(t, m):
            row = s[i]
            for j in range(t, n):
                a = row[j]
                if a and (best is None or abs(a) < best):
                    best = abs(a)
                    pivot = (i, j)
                    if best == 1:
                        break
            if best == 1:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear the pivot column
            for i in range(t + 1, m):
                if s[i][t]:
                    q = s[i][t] // s[t][t]
                    add_row(t, i, -q)
            if any(s[i][t] for i in range(t + 1, m)):
                # a remainder became the smaller pivot; move it up
                for i in range(t + 1, m):
                    if s[i][t]:
                        swap_rows(t, i)
                        break
                continue
            # clear the pivot row
            for j in range(t + 1, n):
                if s[t][j]:
                    q = s[t][j] // s[t][t]
                    add_col(t, j, -q)
            if any(s[t][j] for j in range(t + 1, n)):
                for j in range(t + 1, n):
                    if s[t][j]:
                        swap_cols(t, j)
                        break
                continue
            # pivot must divide everything below-right; otherwise fold a bad
            # row in and restart the clearing loop
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if s[i][j] % s[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if s[t][t] < 0:
            negate_row(t)
        t += 1

    diagonal = [s[i][i] for i in range(limit)]
    rank = sum(1 for d in diagonal if d)
    return SmithForm(diagonal=diagonal, rank=rank, left=u, right=v, rows=m, cols=n)


def rank(matrix: list, cols: int | None = None) -> int:
    return smith_normal_form(matrix, cols).rank


def invariant_factors(matrix: list, cols: int | None = None) -> list:
    form = smith_normal_form(matrix, cols)
    return [d for d in form.diagonal if d]


def kernel_basis(matrix: list, cols: int | None = None) -> list:
    """Basis of the integer kernel, as a list of column vectors.

    The kernel of an integer matrix is a saturated sublattice, so the columns
    of the right transform beyond the rank are a basis of it.
    """
    form = smith_normal_form(matrix, cols)
    n = form.cols
    basis = []
    for j in range(form.rank, n):
        basis.append([form.right[i][j] for i in range(n)])
    return basis


def solve(matrix: list, rhs: list, cols: int | None = None) -> list | None:
    """One integer solution x of A x = b, or None when none exists."""
    form = smith_normal_form(matrix, cols)
    y = mat_vec(form.left, rhs)
    xprime = [0] * form.cols
    for i in range(form.rows):
        d = form.diagonal[i] if i < len(form.diagonal) else 0
        if d:
            if y[i] % d:
                return None
            xprime[i] = y[i] // d
        elif y[i]:
            return None
    return mat_vec(form.right, xprime)


def solve_matrix(matrix: list, rhs_columns: list, cols: int | None = None) -> list | None:
    """Solve A X = B columnwise; B given as a list of column vectors."""
    form = smith_normal_form(matrix, cols)
    out = []
    for b in rhs_columns:
        y = mat_vec(form.left, b)
        xprime = [0] * form.cols
        ok = True
        for i in range(form.rows):
            d = form.diagonal[i] if i < len(form.diagonal) else 0
            if d:
                if y[i] % d:
                    ok = False
                    break
                xprime[i] = y[i] // d
            elif y[i]:
                ok = False
                break
        if not ok:
            return None
        out.append(mat_vec(form.right, xprime))
    return out

"""Exact linear algebra over the rationals.

Matrices are lists of rows, vectors are lists; all entries are
fractions.Fraction.  Pivoting always selects the first nonzero entry in
column order, so reduced row echelon forms, nullspace bases and basis
completions are canonical: the same input yields the same output on
every run.  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction

Vec = "list[Fraction]"
Mat = "list[list[Fraction]]"


def frac(x) -> Fraction:
    """Coerce an int, a "p/q" string or a Fraction to Fraction."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def vec(entries) -> list:
    return [frac(x) for x in entries]


def mat(rows) -> list:
    return [[frac(x) for x in row] for row in rows]


def zeros(r: int, c: int) -> list:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> list:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = Fraction(1)
    return out


def transpose(a) -> list:
    return [list(col) for col in zip(*a)] if a else []


def mat_mul(a, b) -> list:
    if a and b and len(a[0]) != len(b):
        raise ValueError("matrix shapes do not match")
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt]
            for row in a]


def mat_vec(a, v) -> list:
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def vec_add(u, v) -> list:
    return [x + y for x, y in zip(u, v)]


def vec_sub(u, v) -> list:
    return [x - y for x, y in zip(u, v)]


def vec_scale(c, v) -> list:
    c = frac(c)
    return [c * x for x in v]


def is_zero_vec(v) -> bool:
    return all(x == 0 for x in v)


def rref(a) -> tuple:
    """Reduced row echelon form.  Returns (rref_matrix, pivot_columns)."""
    m = [row[:] for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        pr = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a) -> int:
    return len(rref(a)[1]) if a else 0


def row_space(a) -> list:
    """Canonical (RREF) basis of the row space."""
    r, pivots = rref(a)
    return [row[:] for row in r[: len(pivots)]]


def nullspace(a) -> list:
    """Canonical basis of {v : a v = 0}, free variables in column order."""
    if not a:
        return []
    cols = len(a[0])
    r, pivots = rref(a)
    pivset = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivset:
            continue
        v = [Fraction(0)] * cols
        v[free] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i][free]
        basis.append(v)
    return basis


def solve(a, b):
    """One exact solution of a x = b, or None if inconsistent.

    Free variables are set to zero, so the answer is canonical.
    """
    if not a:
        return None if any(x != 0 for x in b) else []
    cols = len(a[0])
    aug = [row[:] + [frac(x)] for row, x in zip(a, b)]
    r, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for i, p in enumerate(pivots):
        x[p] = r[i][cols]
    return x


def inverse(a) -> list:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    aug = [row[:] + ident_row for row, ident_row in zip(a, identity(n))]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in r[:n]]


def coords_in_span(basis, v):
    """Coefficients c with sum(c_i * basis_i) = v, or None if v not in span."""
    if not basis:
        return [] if is_zero_vec(v) else None
    return solve(transpose(basis), v)


def in_span(basis, v) -> bool:
    return coords_in_span(basis, v) is not None


def complete_basis(rows, n) -> list:
    """Standard unit vectors extending span(rows) to the full space, in index order."""
    cur = [row[:] for row in rows]
    r = rank(cur) if cur else 0
    extra = []
    for i in range(n):
        e = [Fraction(0)] * n
        e[i] = Fraction(1)
        if rank(cur + [e]) > r:
            cur.append(e)
            extra.append(e)
            r += 1
        if r == n:
            break
    return extra


def intersect_spans(a_rows, b_rows) -> list:
    """Canonical basis of span(a_rows) & span(b_rows)."""
    if not a_rows or not b_rows:
        return []
    n = len(a_rows[0])
    # v = x A = y B: kernel of the n x (k+l) matrix with columns A_i, -B_j.
    cols = [list(row) for row in a_rows] + [[-x for x in row] for row in b_rows]
    ker = nullspace(transpose(cols))
    vecs = []
    for k in ker:
        v = [Fraction(0)] * n
        for coef, row in zip(k[: len(a_rows)], a_rows):
            v = vec_add(v, vec_scale(coef, row))
        if not is_zero_vec(v):
            vecs.append(v)
    return row_space(vecs) if vecs else []

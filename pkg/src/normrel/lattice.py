"""Integer lattices: Hermite and Smith normal forms and exact rational solving.

Matrices are numpy arrays.  Computation starts in int64 and switches to Python
integers (object dtype) as soon as entries grow large enough to risk overflow.
Lattices are spanned by the *rows* of the matrices passed here.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Optional

import numpy as np

_SAFE = 1 << 30  # below this, products of two entries fit in int64 with headroom


def _as_int_matrix(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        return np.array(a, dtype=object)
    if a.size == 0:
        return np.zeros(a.shape, dtype=np.int64)
    if not np.issubdtype(a.dtype, np.integer):
        raise TypeError("integer matrix expected")
    a = a.astype(np.int64)
    if a.size and int(np.abs(a).max()) >= _SAFE:
        return a.astype(object)
    return a


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(np.abs(a).max())


def hnf(a, transform: bool = False, pivot_limit: Optional[int] = None):
    """Row Hermite normal form.

    Returns ``H`` whose rows form a basis of the row lattice of ``a``, in
    echelon form with positive pivots and entries above each pivot reduced to
    ``[0, pivot)``.  With ``transform=True`` also returns ``T`` with
    ``T @ a == H`` (built by carrying an identity block, so keep the number of
    input rows modest).  ``pivot_limit`` stops after that many columns.
    """
    a = _as_int_matrix(a)
    m, n = a.shape if a.ndim == 2 else (0, 0)
    if transform:
        eye = np.eye(m, dtype=np.int64)
        work = np.concatenate([a.astype(object) if a.dtype == object else a,
                               eye.astype(a.dtype)], axis=1)
    else:
        work = a.copy()
    ncols = n if pivot_limit is None else min(n, pivot_limit)
    r = 0
    for col in range(ncols):
        if r >= work.shape[0]:
            break
        found = False
        while True:
            colv = work[r:, col]
            nz = np.flatnonzero(colv)
            if nz.size == 0:
                break
            found = True
            absv = np.abs(colv[nz]).astype(np.int64) if work.dtype != object else np.array([abs(x) for x in colv[nz]], dtype=object)
            piv = r + int(nz[int(np.argmin(absv))])
            if piv != r:
                work[[r, piv]] = work[[piv, r]]
            if work[r, col] < 0:
                work[r] = -work[r]
            p = work[r, col]
            below = work[r + 1:, col]
            if not np.any(below):
                break
            q = below // p
            if work.dtype != object and _maxabs(q) * _maxabs(work[r]) >= (1 << 62):
                work = work.astype(object)
                continue
            work[r + 1:] -= q[:, None] * work[r]
            if work.dtype != object and _maxabs(work) >= _SAFE:
                work = work.astype(object)
        if not found:
            continue
        # drop rows that became zero in the lattice part
        tail = work[r + 1:, :n]
        if tail.shape[0]:
            keep = np.any(tail != 0, axis=1) if not transform else np.ones(tail.shape[0], dtype=bool)
            if not np.all(keep):
                work = np.concatenate([work[:r + 1], work[r + 1:][keep]], axis=0)
        p = work[r, col]
        if r:
            q = work[:r, col] // p
            if np.any(q):
                if work.dtype != object and _maxabs(q) * _maxabs(work[r]) >= (1 << 62):
                    work = work.astype(object)
                work[:r] -= q[:, None] * work[r]
                if work.dtype != object and _maxabs(work) >= _SAFE:
                    work = work.astype(object)
        r += 1
    if transform == "full":
        return _normalize_dtype(work[:r, :n]), _normalize_dtype(work[:, n:]), r
    if transform:
        return _normalize_dtype(work[:r, :n]), _normalize_dtype(work[:r, n:])
    h = work[:r]
    if pivot_limit is not None:
        h = work[np.any(work != 0, axis=1)]
    return _normalize_dtype(h)


def _normalize_dtype(a: np.ndarray) -> np.ndarray:
    if a.dtype == object and (a.size == 0 or _maxabs(a) < (1 << 62)):
        return a.astype(np.int64)
    return a


def pivots(h: np.ndarray) -> list:
    """Pivot column of each row of an echelon matrix."""
    out = []
    for row in h:
        nz = np.flatnonzero(row)
        out.append(int(nz[0]))
    return out


def rank(a) -> int:
    return hnf(a).shape[0]


def determinant_of_full_rank(h: np.ndarray) -> int:
    """|det| of a square HNF (product of pivots)."""
    result = 1
    for i, c in enumerate(pivots(h)):
        result *= int(h[i, c])
    return result


def row_in_lattice(h: np.ndarray, v) -> Optional[list]:
    """Coordinates of v in the row basis h (an HNF), or None if v is not in the lattice."""
    v = [int(x) for x in np.asarray(v).ravel()]
    coeffs = []
    for i, c in enumerate(pivots(h)):
        p = int(h[i, c])
        if v[c] % p:
            return None
        q = v[c] // p
        coeffs.append(q)
        if q:
            row = h[i]
            v = [x - q * int(y) for x, y in zip(v, row)]
    if any(v):
        return None
    return coeffs


def kernel_basis(a) -> np.ndarray:
    """Integer basis (rows) of {x : x @ a == 0}, in row HNF."""
    a = _as_int_matrix(a)
    m = a.shape[0]
    if a.shape[1] == 0:
        return np.eye(m, dtype=np.int64)
    _, t, r = hnf(a, transform="full")
    # the unimodular transform sends the remaining rows to zero
    if r >= m:
        return np.zeros((0, m), dtype=np.int64)
    return hnf(t[r:])


def smith_normal_form(a):
    """Smith normal form with transforms: returns (diag, U, V) with U @ a @ V = D.

    ``diag`` lists all min(m, n) diagonal entries (zeros included) with each
    entry dividing the next nonzero one.  Pure Python integers; meant for the
    small presentation matrices of finite abelian groups.
    """
    a = [[int(x) for x in row] for row in np.asarray(a, dtype=object).reshape(np.shape(a))]
    m = len(a)
    n = len(a[0]) if m else (np.shape(a)[1] if len(np.shape(a)) == 2 else 0)
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row dst += k * row src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    t = 0
    while t < min(m, n):
        entries = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: a[t][t] must divide the rest of the block
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % a[t][t]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    diag = [a[i][i] for i in range(min(m, n))]
    return diag, np.array(u, dtype=object), np.array(v, dtype=object)


def elementary_divisors(a) -> list:
    return smith_normal_form(a)[0]


def solve_rational(a, b) -> Optional[list]:
    """Exact x with x @ a == b over Q (a: m x n, b: length n), or None.

    Fraction-based Gauss-Jordan; only for small systems.
    """
    a = [[Fraction(int(x)) for x in row] for row in np.asarray(a, dtype=object)]
    m = len(a)
    if m == 0:
        return [] if not any(int(x) for x in np.asarray(b).ravel()) else None
    n = len(a[0])
    # solve a^T x = b
    mat = [[a[i][j] for i in range(m)] + [Fraction(int(np.asarray(b).ravel()[j]))] for j in range(n)]
    piv_cols = []
    row = 0
    for col in range(m):
        sel = next((r for r in range(row, n) if mat[r][col] != 0), None)
        if sel is None:
            continue
        mat[row], mat[sel] = mat[sel], mat[row]
        inv = 1 / mat[row][col]
        mat[row] = [x * inv for x in mat[row]]
        for r in range(n):
            if r != row and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[row])]
        piv_cols.append(col)
        row += 1
    if any(mat[r][m] != 0 for r in range(row, n)):
        return None
    x = [Fraction(0)] * m
    for r, col in enumerate(piv_cols):
        x[col] = mat[r][m]
    return x


def content(values) -> int:
    g = 0
    for x in values:
        g = gcd(g, int(x))
    return g


def lcm_of_denominators(values) -> int:
    out = 1
    for x in values:
        out = lcm(out, Fraction(x).denominator)
    return out

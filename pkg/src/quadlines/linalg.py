"""Exact dense linear algebra over the package's fields.

Matrices are plain lists of rows of field elements.  Everything is exact:
Gaussian elimination divides by pivots, which is lossless over Q and F_q.
A raw-integer fast path for F_p (``modp_*``) backs the enumeration loops.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from .fields import Field


def matrix_copy(rows):
    return [list(r) for r in rows]


def rref(rows, field: Field):
    """Reduced row echelon form.  Returns (reduced rows, pivot column list)."""
    m = matrix_copy(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if m[i][c]:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = field.one() / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows, field: Field) -> int:
    return len(rref(rows, field)[1])


def kernel_basis(rows, ncols: int, field: Field):
    """Exact basis of {x : rows . x = 0}; rank + nullity = ncols."""
    if not rows:
        rows = [[field.zero()] * ncols]
    red, pivots = rref(rows, field)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [field.zero()] * ncols
        v[f] = field.one()
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def mat_vec(rows, x, field: Field):
    out = []
    for r in rows:
        s = field.zero()
        for a, b in zip(r, x):
            if a and b:
                s = s + a * b
        out.append(s)
    return out


def mat_mul(a, b, field: Field):
    nb = len(b[0])
    out = []
    for row in a:
        acc = [field.zero()] * nb
        for i, aij in enumerate(row):
            if aij:
                bi = b[i]
                for j in range(nb):
                    if bi[j]:
                        acc[j] = acc[j] + aij * bi[j]
        out.append(acc)
    return out


def transpose(rows):
    return [list(col) for col in zip(*rows)]


def identity(n: int, field: Field):
    z, o = field.zero(), field.one()
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def det(rows, field: Field):
    """Determinant by elimination; exact over any field."""
    m = matrix_copy(rows)
    n = len(m)
    sign = field.one()
    acc = field.one()
    for c in range(n):
        pr = None
        for i in range(c, n):
            if m[i][c]:
                pr = i
                break
        if pr is None:
            return field.zero()
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            sign = -sign
        acc = acc * m[c][c]
        inv = field.one() / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * acc


def random_matrix(nrows: int, ncols: int, field: Field, rng):
    return [[field.random(rng) for _ in range(ncols)] for _ in range(nrows)]


def random_invertible(n: int, field: Field, rng, max_tries: int = 50):
    for _ in range(max_tries):
        m = random_matrix(n, n, field, rng)
        if det(m, field):
            return m
    raise RuntimeError("failed to draw an invertible matrix")


def random_full_rank(nrows: int, ncols: int, field: Field, rng, max_tries: int = 50):
    want = min(nrows, ncols)
    for _ in range(max_tries):
        m = random_matrix(nrows, ncols, field, rng)
        if rank(m, field) == want:
            return m
    raise RuntimeError("failed to draw a full-rank matrix")


def is_zero_vector(v) -> bool:
    return not any(v)


def in_span(vectors, v, field: Field) -> bool:
    """Is v in the row span of vectors?"""
    base = rank(vectors, field) if vectors else 0
    return rank(list(vectors) + [v], field) == base


@dataclass
class LinearSystem:
    """A homogeneous exact linear system rows . x = 0."""

    rows: List[list]
    ncols: int
    field: Field

    def kernel_basis(self):
        return kernel_basis(self.rows, self.ncols, self.field)

    def rank(self) -> int:
        return rank(self.rows, self.field) if self.rows else 0

    def nullity(self) -> int:
        return self.ncols - self.rank()


# ---------------------------------------------------------------------------
# F_p fast path on plain ints (hot enumeration loops only).

def modp_rref(rows: List[List[int]], ncols: int, p: int):
    m = [r[:] for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if m[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        mr = m[r]
        for i in range(len(m)):
            if i != r:
                f = m[i][c] % p
                if f:
                    m[i] = [(a - f * b) % p for a, b in zip(m[i], mr)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def modp_rank(rows: List[List[int]], ncols: int, p: int) -> int:
    return len(modp_rref(rows, ncols, p)[1])


def modp_kernel_basis(rows: List[List[int]], ncols: int, p: int):
    if not rows:
        rows = [[0] * ncols]
    red, pivots = modp_rref(rows, ncols, p)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-red[r][f]) % p
        basis.append(v)
    return basis


def modp_has_full_column_rank(rows: List[List[int]], ncols: int, p: int) -> bool:
    """Early-exit rank test: True iff the kernel is trivial."""
    m = [r[:] for r in rows]
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, len(m)):
            if m[i][c] % p:
                pr = i
                break
        if pr is None:
            return False
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], -1, p)
        mr = [(x * inv) % p for x in m[r]]
        m[r] = mr
        for i in range(r + 1, len(m)):
            f = m[i][c] % p
            if f:
                m[i] = [(a - f * b) % p for a, b in zip(m[i], mr)]
        r += 1
        if r == ncols:
            return True
    return False

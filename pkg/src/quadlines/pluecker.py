"""Bivector (Pluecker) algebra for single lines in P^N.

A line is carried as the full antisymmetric (N+1)x(N+1) matrix of its
Pluecker coordinates; the redundancy keeps the incidence operations
index-free.  Decomposability is decided by 4x4 Pfaffians, with a rank-2
test kept alongside as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import List, Optional, Sequence

from . import linalg
from .errors import DegenerateSpanError, NotALineError
from .fields import Field


def upper_pairs(N: int):
    return [(i, j) for i in range(N + 1) for j in range(i + 1, N + 1)]


class Bivector:
    """An antisymmetric matrix of scalars, not identically zero."""

    __slots__ = ("N", "mat", "field")

    def __init__(self, mat: Sequence[Sequence], field: Field):
        n1 = len(mat)
        self.N = n1 - 1
        self.field = field
        m = [[field.elem(x) for x in row] for row in mat]
        for i in range(n1):
            if m[i][i]:
                raise ValueError(f"nonzero diagonal entry at ({i},{i})")
            for j in range(i + 1, n1):
                if m[i][j] != -m[j][i]:
                    raise ValueError(f"antisymmetry fails at ({i},{j})")
        self.mat = m

    @staticmethod
    def from_upper(upper: dict, N: int, field: Field) -> "Bivector":
        z = field.zero()
        mat = [[z for _ in range(N + 1)] for _ in range(N + 1)]
        for (i, j), v in upper.items():
            v = field.elem(v)
            mat[i][j] = v
            mat[j][i] = -v
        return Bivector(mat, field)

    def entry(self, i: int, j: int):
        return self.mat[i][j]

    def upper(self):
        return {(i, j): self.mat[i][j] for i, j in upper_pairs(self.N)
                if self.mat[i][j]}

    def is_zero(self) -> bool:
        return all(not self.mat[i][j] for i, j in upper_pairs(self.N))

    def scale(self, c) -> "Bivector":
        c = self.field.elem(c)
        return Bivector([[c * x for x in row] for row in self.mat], self.field)

    def columns(self):
        return [[self.mat[i][j] for i in range(self.N + 1)]
                for j in range(self.N + 1)]

    def pfaffian_witness(self) -> Optional[tuple]:
        """First (i,j,k,l) whose 4x4 Pfaffian is nonzero, else None."""
        m = self.mat
        for i, j, k, l in combinations(range(self.N + 1), 4):
            pf = m[i][j] * m[k][l] - m[i][k] * m[j][l] + m[i][l] * m[j][k]
            if pf:
                return (i, j, k, l)
        return None

    def is_decomposable(self) -> bool:
        return self.pfaffian_witness() is None

    def matrix_rank(self) -> int:
        """Independent oracle: decomposable and nonzero iff rank is 2."""
        return linalg.rank(self.mat, self.field)

    def two_points(self):
        """Two independent points spanning the line (decomposable input)."""
        cols = self.columns()
        first = None
        for c in cols:
            if any(c):
                first = c
                break
        if first is None:
            raise NotALineError("zero bivector")
        for c in cols:
            if linalg.rank([first, c], self.field) == 2:
                return first, c
        raise NotALineError("bivector has rank < 2")

    def proportional(self, other: "Bivector") -> bool:
        """Projective equality of two nonzero bivectors."""
        pairs = upper_pairs(self.N)
        ref = None
        for e in pairs:
            if self.mat[e[0]][e[1]] or other.mat[e[0]][e[1]]:
                ref = e
                break
        if ref is None:
            return True  # both zero
        a, b = self.mat[ref[0]][ref[1]], other.mat[ref[0]][ref[1]]
        if not a or not b:
            return False
        for i, j in pairs:
            if self.mat[i][j] * b != other.mat[i][j] * a:
                return False
        return True


def wedge(u: Sequence, v: Sequence, field: Field) -> Bivector:
    """Pluecker coordinates of the span of two independent points."""
    uu = [field.elem(x) for x in u]
    vv = [field.elem(x) for x in v]
    if linalg.rank([uu, vv], field) < 2:
        raise DegenerateSpanError("proportional points")
    n1 = len(uu)
    mat = [[uu[i] * vv[j] - uu[j] * vv[i] for j in range(n1)] for i in range(n1)]
    return Bivector(mat, field)


def point_on_line(x: Sequence, B: Bivector) -> bool:
    """Incidence x on the line of B, via vanishing of the trivector x ^ B."""
    if not B.is_decomposable():
        raise NotALineError("bivector fails the Pfaffian relations")
    xx = [B.field.elem(c) for c in x]
    m = B.mat
    for i, j, k in combinations(range(B.N + 1), 3):
        t = xx[i] * m[j][k] - xx[j] * m[i][k] + xx[k] * m[i][j]
        if t:
            return False
    return True


def line_in_hyperplane(H: Sequence, B: Bivector) -> bool:
    """True iff the line lies in the hyperplane with covector H (B.H = 0)."""
    HH = [B.field.elem(c) for c in H]
    for row in B.mat:
        s = B.field.zero()
        for a, b in zip(row, HH):
            if a and b:
                s = s + a * b
        if s:
            return False
    return True


def lines_meet(B1: Bivector, B2: Bivector) -> bool:
    """Two lines meet iff their 4-vector wedge vanishes."""
    m1, m2 = B1.mat, B2.mat
    for i, j, k, l in combinations(range(B1.N + 1), 4):
        t = (m1[i][j] * m2[k][l] - m1[i][k] * m2[j][l] + m1[i][l] * m2[j][k]
             + m1[k][l] * m2[i][j] - m1[j][l] * m2[i][k] + m1[j][k] * m2[i][l])
        if t:
            return False
    return True


def wedge_vector(vectors: List[Sequence], field: Field):
    """Coefficients of v_1 ^ ... ^ v_k, indexed by ascending k-subsets."""
    k = len(vectors)
    n1 = len(vectors[0])
    vv = [[field.elem(x) for x in v] for v in vectors]
    comps = {}
    for S in combinations(range(n1), k):
        sub = [[vv[r][c] for c in S] for r in range(k)]
        comps[S] = linalg.det(sub, field)
    return comps


def _merge_sign(S: tuple, i: int, j: int) -> int:
    """Sign of sorting (S..., i, j) ascending; 0 if indices collide."""
    if i in S or j in S:
        return 0
    seq = list(S) + [i, j]
    sign = 1
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                sign = -sign
    return sign


def meets_subspace(B: Bivector, A_basis: List[Sequence]) -> bool:
    """True iff the line of B meets the subspace spanned by A_basis.

    Computed as vanishing of (wedge of A_basis) ^ B; the equivalent rank
    formulation is kept in the tests as an independent check.
    """
    field = B.field
    k = len(A_basis)
    n1 = B.N + 1
    if k + 2 > n1:
        return True  # dimension forces intersection
    comps = wedge_vector(A_basis, field)
    for T in combinations(range(n1), k + 2):
        total = field.zero()
        Tset = set(T)
        for i, j in combinations(T, 2):
            S = tuple(sorted(Tset - {i, j}))
            sg = _merge_sign(S, i, j)
            if sg == 0:
                continue
            term = comps[S] * B.mat[i][j]
            total = total + (term if sg > 0 else -term)
        if total:
            return False
    return True


def meets_subspace_rank(B: Bivector, A_basis: List[Sequence]) -> bool:
    """Rank-based oracle for meets_subspace."""
    field = B.field
    rows = [[field.elem(x) for x in v] for v in A_basis]
    base = linalg.rank(rows, field)
    u, v = B.two_points()
    joined = linalg.rank(rows + [u, v], field)
    return joined <= base + 1


@dataclass
class Flag:
    """Nested subspaces A (and optionally A in B) given by exact bases."""

    center: List[list]
    container: Optional[List[list]] = None
    field: Field = dc_field(default=None)

    def __post_init__(self):
        if self.container is not None:
            rows = [list(map(self.field.elem, v)) for v in self.container]
            base = linalg.rank(rows, self.field)
            for v in self.center:
                if linalg.rank(rows + [list(map(self.field.elem, v))],
                               self.field) != base:
                    raise ValueError("flag is not nested: center not in container")

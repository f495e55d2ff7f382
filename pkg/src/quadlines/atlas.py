"""Reference constructions: the five model families and the triangular
coordinate-matrix normal form.

Families (by structural name, with the numeric atlas ids used by the CLI):

* ``balanced`` (2.1)    lines joining corresponding points of two disjoint
                        copies of P^n inside P^{2n+1}.
* ``cone`` (2.2)        ruling lines of a cone, apex a point, over the
                        degree-2 Veronese image of P^n.
* ``chordal`` (2.3)     chords of a twisted cubic in P^3, parametrized by
                        the symmetric coordinates of binary quadrics.
* ``quadric`` (2.4)     lines on a smooth quadric hypersurface in P^4,
                        built from a twisted-cotangent presentation and
                        extracted by exact interpolation of bivectors.
* ``quadric-line`` (2.5) the previous family restricted to a general plane
                        of the parameter space: lines on the quadric that
                        meet a fixed line on it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from . import linalg
from .errors import NotAnIsomorphismError, QuadlinesError
from .family import (
    LineFamily, normalize_projective, random_projective_point, validate,
)
from .fields import Field, Rationals
from .forms import HomForm, monomials, span_dimension


def balanced_family(n: int, field: Field) -> LineFamily:
    """Lines joining matched points of two disjoint P^n's (N = 2n+1)."""
    entries: Dict[Tuple[int, int], HomForm] = {}
    for i in range(n + 1):
        for j in range(n + 1):
            exp = [0] * (n + 1)
            exp[i] += 1
            exp[j] += 1
            entries[(i, n + 1 + j)] = HomForm.monomial(n + 1, tuple(exp), 1, field)
    return LineFamily(n, 2 * n + 1, entries, field, f"balanced(n={n})")


def cone_family(n: int, field: Field) -> LineFamily:
    """Cone rulings over the degree-2 Veronese of P^n (N = (n+2 choose 2))."""
    monos = monomials(n + 1, 2)
    N = len(monos)  # (n+2)(n+1)/2 quadric monomials; ambient P^N
    entries = {}
    for k, m in enumerate(monos):
        entries[(0, k + 1)] = HomForm.monomial(n + 1, m, 1, field)
    return LineFamily(n, N, entries, field, f"cone(n={n})")


def chordal_family(field: Field) -> LineFamily:
    """Chords of the twisted cubic, over the coefficients (s0:s1:s2) of
    binary quadrics; the chord joins the parameter's two roots."""
    f = lambda terms: HomForm(3, 2, terms, field)
    entries = {
        (0, 1): f({(2, 0, 0): 1}),                  # s0^2
        (0, 2): f({(1, 1, 0): -1}),                 # -s0*s1
        (0, 3): f({(0, 2, 0): 1, (1, 0, 1): -1}),   # s1^2 - s0*s2
        (1, 2): f({(1, 0, 1): 1}),                  # s0*s2
        (1, 3): f({(0, 1, 1): -1}),                 # -s1*s2
        (2, 3): f({(0, 0, 2): 1}),                  # s2^2
    }
    return LineFamily(2, 3, entries, field, "chordal")


# ---------------------------------------------------------------------------
# lines on a smooth quadric in P^4


def _pfaffian4(A, field):
    return (A[0][1] * A[2][3] - A[0][2] * A[1][3] + A[0][3] * A[1][2])


_PAIRS4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def _wedge4(u, v):
    return [u[i] * v[j] - u[j] * v[i] for i, j in _PAIRS4]


def quadric_family(field: Field, seed: int = 0,
                   max_attempts: int = 20) -> LineFamily:
    """Lines on a smooth quadric hypersurface of P^4 (n = 3, N = 4).

    Sections of the twisted cotangent sheaf on the parameter P^3 are the
    antisymmetric 4x4 matrices B acting by t -> B.t (the contraction with
    t is zero, which is the Euler relation).  After quotienting by a fixed
    nondegenerate section A, the line attached to t is the annihilator of
    {B : B.t proportional to A.t}, i.e. the row space of the bivector map
    B -> (B.t) ^ (A.t).  The ten quadric entries of the family are
    recovered from exact per-point bivectors by solving one linear system
    in the quadric coefficients and one scale per sample point.
    """
    rng = random.Random(f"{seed}:quadric-atlas")
    last_error = None
    for _ in range(max_attempts):
        A = _random_nondegenerate_antisym(field, rng)
        try:
            fam = _quadric_family_from_section(A, field, rng)
        except QuadlinesError as e:
            last_error = e
            continue
        rep = validate(fam, seed=seed, trials=25)
        if rep.valid:
            return fam
        last_error = RuntimeError(f"constructed family failed validation: "
                                  f"{rep.to_dict()}")
    raise RuntimeError(f"quadric family construction failed: {last_error}")


def _random_nondegenerate_antisym(field, rng):
    for _ in range(50):
        vals = {ij: field.random(rng) for ij in _PAIRS4}
        A = [[field.zero()] * 4 for _ in range(4)]
        for (i, j), v in vals.items():
            A[i][j] = v
            A[j][i] = -v
        if _pfaffian4(A, field):
            return A
    raise RuntimeError("no nondegenerate antisymmetric matrix found")


def _quadric_family_from_section(A, field, rng) -> LineFamily:
    vecA = [A[i][j] for i, j in _PAIRS4]
    # reduced basis of the 5-dim annihilator of A: ambient coordinates
    ann, pivots = linalg.rref(linalg.kernel_basis([vecA], 6, field), field)
    if len(pivots) != 5:
        raise RuntimeError("annihilator of the section is not 5-dimensional")

    def line_bivector(t):
        At = linalg.mat_vec(A, list(t), field)
        rows = []
        for (i, j) in _PAIRS4:
            Bt = [field.zero()] * 4
            Bt[i] = t[j]
            Bt[j] = -t[i]
            rows.append(_wedge4(Bt, At))
        # rows of the map B -> (B t)^(A t), transposed to functionals
        funcs = [list(col) for col in zip(*rows)]
        base = None
        for r in funcs:
            if any(r):
                base = r
                break
        if base is None:
            return None
        second = None
        for r in funcs:
            if linalg.rank([base, r], field) == 2:
                second = r
                break
        if second is None:
            return None
        y1 = [base[c] for c in pivots]
        y2 = [second[c] for c in pivots]
        return [y1[a] * y2[b] - y1[b] * y2[a]
                for a in range(5) for b in range(a + 1, 5)]

    monos = monomials(4, 2)
    samples = []
    seen = set()
    while len(samples) < 26:
        t = random_projective_point(field, 3, rng)
        key = normalize_projective(t, field)
        if key in seen:
            continue
        seen.add(key)
        b = line_bivector(t)
        if b is None or not any(b):
            raise QuadlinesError("degenerate sample in quadric construction")
        samples.append((t, b))

    # unknowns: 10 quadrics x 10 coefficients, then one scale per sample
    nunk = 100 + len(samples)
    rows = []
    for s, (t, b) in enumerate(samples):
        mvals = [HomForm.monomial(4, m, 1, field).evaluate(t) for m in monos]
        for e in range(10):
            row = [field.zero()] * nunk
            for k in range(10):
                row[e * 10 + k] = mvals[k]
            row[100 + s] = -b[e]
            rows.append(row)
    kern = linalg.kernel_basis(rows, nunk, field)
    if len(kern) != 1:
        raise QuadlinesError(
            f"bivector interpolation is not unique (kernel dim {len(kern)})")
    sol = kern[0]
    entries = {}
    pairs5 = [(a, b) for a in range(5) for b in range(a + 1, 5)]
    for e, (a, b) in enumerate(pairs5):
        terms = {m: sol[e * 10 + k] for k, m in enumerate(monos)}
        form = HomForm(4, 2, terms, field)
        if form:
            entries[(a, b)] = form
    return LineFamily(3, 4, entries, field, "quadric")


def quadric_section_family(field: Field, seed: int = 0,
                           max_attempts: int = 20) -> LineFamily:
    """Pull the quadric family back along a general plane of its P^3:
    the lines on the quadric meeting a fixed line (n = 2, N = 4)."""
    base = quadric_family(field, seed=seed)
    rng = random.Random(f"{seed}:quadric-plane")
    for _ in range(max_attempts):
        P = linalg.random_full_rank(4, 3, field, rng)
        entries = {ij: f.compose_linear(P) for ij, f in base.entries.items()}
        entries = {ij: f for ij, f in entries.items() if f}
        try:
            fam = LineFamily(2, 4, entries, field, "quadric-line")
        except QuadlinesError:
            continue
        rep = validate(fam, seed=seed, trials=25)
        if rep.valid:
            return fam
    raise RuntimeError("no valid plane restriction found")


# ---------------------------------------------------------------------------
# atlas dispatcher

_ATLAS_IDS = {
    "2.1": "balanced", "balanced": "balanced",
    "2.2": "cone", "cone": "cone",
    "2.3": "chordal", "chordal": "chordal",
    "2.4": "quadric", "quadric": "quadric",
    "2.5": "quadric-line", "quadric-line": "quadric-line",
}


def atlas(which: str, n: Optional[int] = None, field: Optional[Field] = None,
          seed: int = 0) -> LineFamily:
    """Construct a model family by atlas id ("2.1".."2.5") or by name."""
    if field is None:
        field = Rationals()
    key = _ATLAS_IDS.get(str(which))
    if key is None:
        raise ValueError(f"unknown atlas id {which!r}")
    if key == "balanced":
        return balanced_family(2 if n is None else n, field)
    if key == "cone":
        return cone_family(2 if n is None else n, field)
    if key == "chordal":
        if n not in (None, 2):
            raise ValueError("the chordal family has n = 2")
        return chordal_family(field)
    if key == "quadric":
        if n not in (None, 3):
            raise ValueError("the quadric-lines family has n = 3")
        return quadric_family(field, seed=seed)
    if n not in (None, 2):
        raise ValueError("the quadric-line-section family has n = 2")
    return quadric_section_family(field, seed=seed)


ATLAS_LABELS = ("balanced", "cone", "chordal", "quadric", "quadric-line")


# ---------------------------------------------------------------------------
# triangular coordinate matrices and the shift normal form


@dataclass
class CoordMatrix:
    """The 2 x (n+2) presentation: rows (t_0..t_n, 0) and (0, l_0..l_n)
    with l_i = a[i][0] t_i + ... + a[i][n-i] t_n, a[i][0] != 0."""

    n: int
    field: Field
    a: List[list]

    def __post_init__(self):
        if len(self.a) != self.n + 1:
            raise ValueError("need one coefficient row per l_i")
        self.a = [[self.field.elem(c) for c in row] for row in self.a]
        for i, row in enumerate(self.a):
            if len(row) != self.n + 1 - i:
                raise ValueError(f"row {i} must have {self.n + 1 - i} coefficients")
            if not row[0]:
                raise NotAnIsomorphismError(
                    f"diagonal coefficient a[{i}][{i}] is zero")

    def l_form(self, i: int) -> HomForm:
        coeffs = [self.field.zero()] * (self.n + 1)
        for k, c in enumerate(self.a[i]):
            coeffs[i + k] = c
        return HomForm.linear(coeffs, self.field)

    def rows(self) -> Tuple[List[HomForm], List[HomForm]]:
        n, field = self.n, self.field
        zero = HomForm.zero(n + 1, 1, field)
        row1 = [HomForm.variable(n + 1, i, field) for i in range(n + 1)] + [zero]
        row2 = [zero] + [self.l_form(i) for i in range(n + 1)]
        return row1, row2


def random_coord_matrix(n: int, field: Field, rng) -> CoordMatrix:
    a = []
    for i in range(n + 1):
        row = [field.random_nonzero(rng)]
        row += [field.random(rng) for _ in range(n - i)]
        a.append(row)
    return CoordMatrix(n, field, a)


def coord_to_family(M: CoordMatrix) -> LineFamily:
    """The family of lines spanned by the two rows (N = n+1)."""
    row1, row2 = M.rows()
    entries = {}
    for c in range(M.n + 2):
        for d in range(c + 1, M.n + 2):
            f = row1[c] * row2[d] - row1[d] * row2[c]
            if f:
                entries[(c, d)] = f
    return LineFamily(M.n, M.n + 1, entries, M.field, "coord-matrix")


@dataclass
class NormalFormResult:
    """Shifted presentation plus the base changes that produce it."""

    matrix: CoordMatrix            # the shifted form (all l_i = t_i)
    rows: tuple                    # the transformed rows, for inspection
    source_change: List[list]      # substitution applied to the source vars
    ambient_change: List[list]     # column operations applied on the right
    minors_span: int               # span of the 2x2 minors; full = (n+2)(n+1)/2


def normal_form(M: CoordMatrix) -> NormalFormResult:
    """Iterated triangular base change bringing the matrix to the shifted
    form whose second row is the first shifted by one column.

    At step k the forms in the second row's last columns are a triangular
    basis; the k-th variable is expressed in that basis, one column
    operation plants it, and the first row's new entry becomes the next
    coordinate of the source.  The 2x2 minors of the result span the full
    space of quadrics.
    """
    n, field = M.n, M.field
    row1, row2 = M.rows()
    width = n + 2
    source_total = linalg.identity(n + 1, field)
    ambient_total = linalg.identity(width, field)

    for k in range(n + 1):
        L = [row2[c] for c in range(k + 1, width)]
        cols = [f.coefficient_vector() for f in L]
        target = HomForm.variable(n + 1, k, field).coefficient_vector()
        aug = [list(col_vals) + [t] for col_vals, t in
               zip(zip(*cols), target)]
        red, pivots = linalg.rref(aug, field)
        mu = [field.zero()] * len(L)
        for r, c in enumerate(pivots):
            if c == len(L):
                raise NotAnIsomorphismError(
                    "variable not expressible in the triangular forms")
            mu[c] = red[r][len(L)]
        # column operation: col_{k+1} := sum mu_c col_c
        new1 = HomForm.zero(n + 1, 1, field)
        new2 = HomForm.zero(n + 1, 1, field)
        for c, m in enumerate(mu):
            if m:
                new1 = new1 + row1[k + 1 + c].scale(m)
                new2 = new2 + row2[k + 1 + c].scale(m)
        row1[k + 1], row2[k + 1] = new1, new2
        elem = linalg.identity(width, field)
        for c, m in enumerate(mu):
            elem[k + 1 + c][k + 1] = m
        ambient_total = linalg.mat_mul(ambient_total, elem, field)
        if k == n:
            break
        # source change: the fresh first-row entry becomes variable k+1
        tprime = _linear_coeffs(row1[k + 1])
        if not tprime[k + 1]:
            raise NotAnIsomorphismError(
                "shift substitution is singular (zero leading coefficient)")
        T = linalg.identity(n + 1, field)
        inv = field.one() / tprime[k + 1]
        T[k + 1] = [field.zero()] * (n + 1)
        T[k + 1][k + 1] = inv
        for j in range(n + 1):
            if j != k + 1 and tprime[j]:
                T[k + 1][j] = -tprime[j] * inv
        row1 = [f.compose_linear(T) for f in row1]
        row2 = [f.compose_linear(T) for f in row2]
        source_total = linalg.mat_mul(source_total, T, field)

    # verify the shifted shape exactly
    for c in range(width):
        want1 = (HomForm.variable(n + 1, c, field) if c <= n
                 else HomForm.zero(n + 1, 1, field))
        want2 = (HomForm.variable(n + 1, c - 1, field) if c >= 1
                 else HomForm.zero(n + 1, 1, field))
        if row1[c] != want1 or row2[c] != want2:
            raise RuntimeError("normal form did not reach the shifted shape")

    minors = [row1[c] * row2[d] - row1[d] * row2[c]
              for c in range(width) for d in range(c + 1, width)]
    span = span_dimension(minors)
    shifted = CoordMatrix(n, field, [[1] + [0] * (n - i) for i in range(n + 1)])
    return NormalFormResult(matrix=shifted, rows=(row1, row2),
                            source_change=source_total,
                            ambient_change=ambient_total, minors_span=span)


def _linear_coeffs(f: HomForm):
    out = [f.field.zero()] * f.nvars
    for exp, c in f.terms.items():
        out[exp.index(1)] = c
    return out

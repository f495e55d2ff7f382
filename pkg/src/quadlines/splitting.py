"""Restriction to source lines, splitting types, jumping loci,
fundamental curves.

The restriction of the family to a source line through p and q is the
pencil of bivectors W(s p + u q) = A s^2 + B su + C u^2.  Its type is
decided by an exact linear system: a nonzero x with x ^ W(s,u)
identically zero is a common point of all lines of the pencil (the pencil
rules a quadratic cone with vertex x, type (2,0)); no such x means type
(1,1).  A pairwise-incidence oracle provides an independent second
derivation of the same dichotomy, and exhaustive enumeration over finite
fields drives the jumping-locus and fundamental-curve analysis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Tuple

from . import linalg
from .errors import ContractedLineError, EmptyJumpingSetError
from .family import (
    LineFamily, count_common_zeros, count_projective_points,
    normalize_projective, random_projective_point, reduce_family_mod_p,
)
from .fields import Field, PrimeField, Rationals, next_prime
from .forms import HomForm, monomials
from .pluecker import Bivector, lines_meet, upper_pairs

SplittingType = Tuple[int, int]
BALANCED_TYPE: SplittingType = (1, 1)
CONE_TYPE: SplittingType = (2, 0)


@dataclass
class ConeCertificate:
    """A vertex lying on every line of the restricted pencil."""

    vertex: tuple
    source_line: tuple  # (p, q)


# ---------------------------------------------------------------------------
# single-line analysis (generic fields)


def restrict_to_line(F: LineFamily, p_pt, q_pt):
    """Coefficient matrices (A, B, C) of W(s p + u q), via evaluation at
    (1,0), (0,1), (1,1)  (characteristic is never 2 here)."""
    field = F.field
    pp = [field.elem(x) for x in p_pt]
    qq = [field.elem(x) for x in q_pt]
    if linalg.rank([pp, qq], field) < 2:
        raise ValueError("source points are proportional")
    pq = [a + b for a, b in zip(pp, qq)]
    pairs = upper_pairs(F.N)
    A, B, C = {}, {}, {}
    for ij in pairs:
        f = F.entry(*ij)
        a, c, m = f.evaluate(pp), f.evaluate(qq), f.evaluate(pq)
        A[ij], C[ij], B[ij] = a, c, m - a - c
    return A, B, C


def _pencil_is_contracted(A, B, C, pairs, field) -> bool:
    rows = [[M[ij] for ij in pairs] for M in (A, B, C)]
    return linalg.rank(rows, field) <= 1


def _vertex_system_rows(coeff_maps, N, field):
    rows = []
    for i, j, k in combinations(range(N + 1), 3):
        for M in coeff_maps:
            row = [field.zero()] * (N + 1)
            row[i] = M[(j, k)]
            row[j] = -M[(i, k)]
            row[k] = M[(i, j)]
            if any(row):
                rows.append(row)
    return rows


def splitting_type(F: LineFamily, p_pt, q_pt
                   ) -> Tuple[SplittingType, Optional[ConeCertificate]]:
    """Type of the family restricted to the source line through p and q.

    (2,0) comes with a ConeCertificate holding the cone vertex.
    Raises ContractedLineError when the restriction is projectively
    constant (the family cannot be an embedding on this line).
    """
    field = F.field
    pairs = upper_pairs(F.N)
    A, B, C = restrict_to_line(F, p_pt, q_pt)
    if _pencil_is_contracted(A, B, C, pairs, field):
        raise ContractedLineError(
            f"restriction to the line through {p_pt} and {q_pt} is constant")
    rows = _vertex_system_rows((A, B, C), F.N, field)
    kernel = linalg.kernel_basis(rows, F.N + 1, field)
    if not kernel:
        return BALANCED_TYPE, None
    if len(kernel) > 1:
        raise ContractedLineError(
            "vertex system has a multi-dimensional kernel; "
            "the restriction degenerates")
    vertex = tuple(kernel[0])
    cert = ConeCertificate(vertex=vertex,
                           source_line=(tuple(p_pt), tuple(q_pt)))
    return CONE_TYPE, cert


def incidence_oracle(F: LineFamily, p_pt, q_pt, seed: int = 0,
                     sample_pairs: int = 10) -> SplittingType:
    """Independent dichotomy test: (2,0) iff sampled pairs of lines of the
    pencil all meet AND the sampled lines share a common point."""
    field = F.field
    A, B, C = restrict_to_line(F, p_pt, q_pt)
    pairs = upper_pairs(F.N)
    if _pencil_is_contracted(A, B, C, pairs, field):
        raise ContractedLineError("restriction is constant")

    def at(s, u):
        s2, su, u2 = s * s, s * u, u * u
        upper = {}
        for ij in pairs:
            v = A[ij] * s2 + B[ij] * su + C[ij] * u2
            if v:
                upper[ij] = v
        return Bivector.from_upper(upper, F.N, field) if upper else None

    rng = random.Random(f"{seed}:incidence")
    params: List[tuple] = [(field.one(), field.zero()),
                           (field.zero(), field.one())]
    if isinstance(field, PrimeField) and field.p <= 23:
        params += [(field.one(), field.elem(u)) for u in range(1, field.p)]
    else:
        seen = {repr(field.zero())}
        while len(params) < 8:
            u = field.random(rng)
            key = repr(u)
            if key not in seen:
                seen.add(key)
                params.append((field.one(), u))
    bivs = [b for b in (at(s, u) for s, u in params) if b is not None]
    checked = 0
    for x in range(len(bivs)):
        for y in range(x + 1, len(bivs)):
            if checked >= sample_pairs:
                break
            checked += 1
            if not lines_meet(bivs[x], bivs[y]):
                return BALANCED_TYPE
        if checked >= sample_pairs:
            break
    # all sampled pairs meet; demand an actual common point (rank test on
    # the stacked incidence conditions of several sampled lines)
    rows = []
    for biv in bivs[:4]:
        for i, j, k in combinations(range(F.N + 1), 3):
            row = [field.zero()] * (F.N + 1)
            row[i] = biv.mat[j][k]
            row[j] = -biv.mat[i][k]
            row[k] = biv.mat[i][j]
            if any(row):
                rows.append(row)
    kernel = linalg.kernel_basis(rows, F.N + 1, field)
    return CONE_TYPE if kernel else BALANCED_TYPE


@dataclass
class GenericTypeReport:
    splitting: SplittingType
    trials: int
    counts: Dict[SplittingType, int]
    seed: int
    confidence_note: str

    def to_dict(self):
        return {"splitting": list(self.splitting), "trials": self.trials,
                "counts": {str(k): v for k, v in self.counts.items()},
                "seed": self.seed, "confidence_note": self.confidence_note}


def generic_splitting_type(F: LineFamily, trials: int = 50,
                           seed: int = 0) -> GenericTypeReport:
    """Minimum splitting type over sampled source lines (lexicographic)."""
    field = F.field
    counts: Dict[SplittingType, int] = {}
    if F.n == 1:
        t, _ = splitting_type(F, [1] + [0] * F.n, [0, 1] + [0] * (F.n - 1))
        counts[t] = 1
        return GenericTypeReport(t, 1, counts, seed,
                                 "n = 1: the unique line class was tested")
    if trials < 10:
        raise ValueError("trials >= 10 required")
    rng = random.Random(f"{seed}:generic-type")
    done = 0
    while done < trials:
        p_pt = random_projective_point(field, F.n, rng)
        q_pt = random_projective_point(field, F.n, rng)
        if linalg.rank([list(p_pt), list(q_pt)], field) < 2:
            continue
        t, _ = splitting_type(F, p_pt, q_pt)
        counts[t] = counts.get(t, 0) + 1
        done += 1
    result = min(counts)
    if len(counts) == 1:
        note = (f"all {trials} sampled lines have type {result}; a smaller "
                f"generic type would put every sample inside a proper closed "
                f"subset (density d), probability <= d^{trials}")
    else:
        note = "both types observed; the minimum is certain"
    return GenericTypeReport(result, trials, counts, seed, note)


# ---------------------------------------------------------------------------
# source-line enumeration (plain int coordinates)


def source_lines_n2(p: int) -> Iterator[Tuple[tuple, tuple, tuple]]:
    """All lines of P^2(F_p) as (dual point, two spanning points)."""
    for b in range(p):
        for c in range(p):
            yield (1, b, c), (-b % p, 1, 0), (-c % p, 0, 1)
    for c in range(p):
        yield (0, 1, c), (1, 0, 0), (0, -c % p, 1)
    yield (0, 0, 1), (1, 0, 0), (0, 1, 0)


def source_lines_n3(p: int) -> Iterator[Tuple[tuple, tuple]]:
    """All lines of P^3(F_p) as row-reduced spanning pairs."""
    r = range(p)
    for a in r:
        for b in r:
            for c in r:
                for d in r:
                    yield (1, 0, a, b), (0, 1, c, d)
    for a in r:
        for b in r:
            for c in r:
                yield (1, a, 0, b), (0, 0, 1, c)
    for a in r:
        for b in r:
            yield (1, a, b, 0), (0, 0, 0, 1)
            yield (0, 1, 0, a), (0, 0, 1, b)
    for a in r:
        yield (0, 1, a, 0), (0, 0, 0, 1)
    yield (0, 0, 1, 0), (0, 0, 0, 1)


def pluecker6(u: tuple, v: tuple, p: int) -> tuple:
    """Normalized Pluecker coordinates of a line of P^3(F_p)."""
    raw = [(u[i] * v[j] - u[j] * v[i]) % p
           for i, j in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]]
    for x in raw:
        if x:
            inv = pow(x, -1, p)
            return tuple((inv * y) % p for y in raw)
    raise ValueError("degenerate line")


# ---------------------------------------------------------------------------
# fast per-line classification over F_p


def compile_modp(F: LineFamily):
    """Entries as integer term lists (coeff, var index, var index)."""
    assert isinstance(F.field, PrimeField)
    pairs = upper_pairs(F.N)
    compiled = []
    for ij in pairs:
        f = F.entry(*ij)
        terms = []
        for exp, c in f.terms.items():
            idx = [i for i, e in enumerate(exp) for _ in range(e)]
            terms.append((c.val, idx[0], idx[1]))
        compiled.append(terms)
    return pairs, compiled


def _eval_compiled(compiled_entry, t, p):
    total = 0
    for c, a, b in compiled_entry:
        total += c * t[a] * t[b]
    return total % p


class _ModpLineClassifier:
    """Shared scaffolding for classifying many source lines over F_p."""

    def __init__(self, F: LineFamily):
        self.p = F.field.p
        self.N = F.N
        self.pairs, self.compiled = compile_modp(F)
        self.pair_index = {ij: k for k, ij in enumerate(self.pairs)}
        self.patterns = []
        for i, j, k in combinations(range(self.N + 1), 3):
            self.patterns.append((i, j, k, self.pair_index[(j, k)],
                                  self.pair_index[(i, k)],
                                  self.pair_index[(i, j)]))

    def coefficient_matrices(self, p_pt, q_pt):
        p = self.p
        pq = tuple((a + b) % p for a, b in zip(p_pt, q_pt))
        A, B, C = [], [], []
        for terms in self.compiled:
            a = _eval_compiled(terms, p_pt, p)
            c = _eval_compiled(terms, q_pt, p)
            m = _eval_compiled(terms, pq, p)
            A.append(a)
            C.append(c)
            B.append((m - a - c) % p)
        return A, B, C

    def is_contracted(self, A, B, C) -> bool:
        return linalg.modp_rank([A, B, C], len(self.pairs), self.p) <= 1

    def rows(self, A, B, C):
        n1 = self.N + 1
        p = self.p
        out = []
        for i, j, k, jk, ik, ij in self.patterns:
            for M in (A, B, C):
                if M[jk] or M[ik] or M[ij]:
                    row = [0] * n1
                    row[i] = M[jk]
                    row[j] = (-M[ik]) % p
                    row[k] = M[ij]
                    out.append(row)
        return out

    def classify(self, p_pt, q_pt):
        """-> (type, vertex or None); ContractedLineError on degeneracy."""
        A, B, C = self.coefficient_matrices(p_pt, q_pt)
        rows = self.rows(A, B, C)
        if linalg.modp_has_full_column_rank(rows, self.N + 1, self.p):
            return BALANCED_TYPE, None
        if self.is_contracted(A, B, C):
            raise ContractedLineError(
                f"restriction to {p_pt},{q_pt} is constant")
        kernel = linalg.modp_kernel_basis(rows, self.N + 1, self.p)
        if len(kernel) != 1:
            raise ContractedLineError("vertex system kernel is not a line")
        return CONE_TYPE, tuple(kernel[0])


# ---------------------------------------------------------------------------
# jumping reports


@dataclass
class JumpingReport:
    mode: str
    prime: Optional[int]
    total: int
    generic: SplittingType
    jumping_count: int
    jumping_lines: list
    certificates: List[ConeCertificate]
    fitted_degree: Optional[int]
    fitted_forms: List[HomForm]
    codim_verdict: str
    threshold: float
    seed: int

    def to_dict(self):
        return {
            "mode": self.mode, "prime": self.prime, "total": self.total,
            "generic": list(self.generic), "jumping_count": self.jumping_count,
            "jumping_lines": [list(map(int, line))
                              for line in self.jumping_lines],
            "fitted_degree": self.fitted_degree,
            "fitted_forms": [f.to_string() for f in self.fitted_forms],
            "codim_verdict": self.codim_verdict, "threshold": self.threshold,
            "seed": self.seed,
        }


_ENUM_LINE_BOUND = 30000


def _fit_lowest_degree(points: List[tuple], nvars: int, field: Field,
                       max_degree: int = 4):
    """Lowest-degree forms vanishing on all points (exact interpolation)."""
    for d in range(1, max_degree + 1):
        monos = monomials(nvars, d)
        rows = []
        for pt in points:
            pe = [field.elem(x) for x in pt]
            rows.append([HomForm.monomial(nvars, m, 1, field).evaluate(pe)
                         for m in monos])
        kern = linalg.kernel_basis(rows, len(monos), field)
        if kern:
            forms = [HomForm(nvars, d,
                             {m: c for m, c in zip(monos, v) if c}, field)
                     for v in kern]
            return d, forms
    return None, []


def enumerate_jumping(F: LineFamily, seed: int = 0,
                      trials: Optional[int] = None) -> JumpingReport:
    """Classify every source line (exhaustive over small finite fields) or
    a sample, and report the jumping locus with fitted equations.

    Families over Q are analyzed through a good-prime reduction.
    """
    if isinstance(F.field, Rationals):
        return enumerate_jumping(_good_reduction(F), seed=seed, trials=trials)
    field = F.field
    if not isinstance(field, PrimeField):
        raise ValueError("jumping enumeration needs a prime field (or Q)")
    p = field.p

    if F.n == 2 and p * p + p + 1 <= _ENUM_LINE_BOUND and trials is None:
        return _enumerate_jumping_n2(F, seed)
    if F.n == 3 and (p * p + 1) * (p * p + p + 1) <= 3000 and trials is None:
        return _enumerate_jumping_n3(F, seed)
    return _sampled_jumping(F, seed, trials or max(1200, 16 * p))


def _good_reduction(F: LineFamily, p: Optional[int] = None) -> LineFamily:
    from .fields import DEFAULT_PRIME, SMALL_PRIME, NotInvertibleError
    q = p or (SMALL_PRIME if F.n >= 3 else DEFAULT_PRIME)
    for _ in range(25):
        try:
            return reduce_family_mod_p(F, q)
        except NotInvertibleError:
            q = next_prime(q)
    raise RuntimeError("no good reduction prime found")


def _enumerate_jumping_n2(F: LineFamily, seed: int) -> JumpingReport:
    clf = _ModpLineClassifier(F)
    p = clf.p
    total = 0
    cone_lines = []  # (dual point, vertex)
    for dual, p_pt, q_pt in source_lines_n2(p):
        total += 1
        t, vertex = clf.classify(p_pt, q_pt)
        if t == CONE_TYPE:
            cone_lines.append((dual, vertex, (p_pt, q_pt)))
    generic = CONE_TYPE if len(cone_lines) == total else BALANCED_TYPE
    jumping = cone_lines if generic == BALANCED_TYPE else []
    certs = [ConeCertificate(vertex=v, source_line=src)
             for _, v, src in jumping]
    lines = [dual for dual, _, _ in jumping]
    fitted_degree, fitted_forms = (None, [])
    if lines:
        fitted_degree, fitted_forms = _fit_lowest_degree(lines, 3, F.field)
    threshold = 0.5 * p
    verdict = "codim=1" if len(lines) >= threshold else "codim>=2"
    return JumpingReport(mode="exhaustive-n2", prime=p, total=total,
                         generic=generic, jumping_count=len(lines),
                         jumping_lines=lines, certificates=certs,
                         fitted_degree=fitted_degree, fitted_forms=fitted_forms,
                         codim_verdict=verdict, threshold=threshold, seed=seed)


def _enumerate_jumping_n3(F: LineFamily, seed: int) -> JumpingReport:
    clf = _ModpLineClassifier(F)
    p = clf.p
    total = 0
    cone_lines = []
    for p_pt, q_pt in source_lines_n3(p):
        total += 1
        t, vertex = clf.classify(p_pt, q_pt)
        if t == CONE_TYPE:
            cone_lines.append((pluecker6(p_pt, q_pt, p), vertex, (p_pt, q_pt)))
    generic = CONE_TYPE if len(cone_lines) == total else BALANCED_TYPE
    jumping = cone_lines if generic == BALANCED_TYPE else []
    certs = [ConeCertificate(vertex=v, source_line=src)
             for _, v, src in jumping]
    lines = [plk for plk, _, _ in jumping]
    fitted_degree, fitted_forms = (None, [])
    if lines:
        fitted_degree, fitted_forms = _fit_lowest_degree(lines, 6, F.field,
                                                         max_degree=2)
    threshold = 0.5 * p ** 3
    verdict = "codim=1" if len(lines) >= threshold else "codim>=2"
    return JumpingReport(mode="exhaustive-n3", prime=p, total=total,
                         generic=generic, jumping_count=len(lines),
                         jumping_lines=lines, certificates=certs,
                         fitted_degree=fitted_degree, fitted_forms=fitted_forms,
                         codim_verdict=verdict, threshold=threshold, seed=seed)


def _sampled_jumping(F: LineFamily, seed: int, trials: int) -> JumpingReport:
    field = F.field
    p = field.p
    clf = _ModpLineClassifier(F)
    rng = random.Random(f"{seed}:jumping-sample")
    counts = {BALANCED_TYPE: 0, CONE_TYPE: 0}
    hits = []
    for _ in range(trials):
        p_pt = tuple(rng.randrange(p) for _ in range(F.n + 1))
        q_pt = tuple(rng.randrange(p) for _ in range(F.n + 1))
        if not any(p_pt) or not any(q_pt):
            continue
        if linalg.modp_rank([list(p_pt), list(q_pt)], F.n + 1, p) < 2:
            continue
        t, vertex = clf.classify(p_pt, q_pt)
        counts[t] += 1
        if t == CONE_TYPE:
            hits.append((p_pt, q_pt, vertex))
    total = counts[BALANCED_TYPE] + counts[CONE_TYPE]
    generic = CONE_TYPE if counts[BALANCED_TYPE] == 0 else BALANCED_TYPE
    jump_hits = hits if generic == BALANCED_TYPE else []
    certs = [ConeCertificate(vertex=v, source_line=(pp, qq))
             for pp, qq, v in jump_hits]
    threshold = max(2.0, 0.5 * total / p)
    verdict = "codim=1" if len(jump_hits) >= threshold else "codim>=2"
    return JumpingReport(mode="sampled", prime=p, total=total,
                         generic=generic, jumping_count=len(jump_hits),
                         jumping_lines=[h[0] for h in jump_hits],
                         certificates=certs, fitted_degree=None,
                         fitted_forms=[], codim_verdict=verdict,
                         threshold=threshold, seed=seed)


def jumping_codim_two_primes(F: LineFamily, p: Optional[int] = None,
                             seed: int = 0) -> Tuple[str, list]:
    """Codimension verdict for a family over Q: enumerate at a good prime
    and at the next one; counts of a codim-1 locus grow like c.p^(dim-1)."""
    if not isinstance(F.field, Rationals):
        rep = enumerate_jumping(F, seed=seed)
        return rep.codim_verdict, [rep]
    from .fields import DEFAULT_PRIME, SMALL_PRIME
    base = p or (SMALL_PRIME if F.n >= 3 else DEFAULT_PRIME)
    reports = []
    for q in (base, next_prime(base)):
        reports.append(enumerate_jumping(_good_reduction(F, q), seed=seed))
    verdicts = {r.codim_verdict for r in reports}
    if len(verdicts) != 1:
        raise RuntimeError(f"codimension verdicts disagree across primes: "
                           f"{[r.to_dict() for r in reports]}")
    return reports[0].codim_verdict, reports


def symmetric_gram_rank(form: HomForm) -> int:
    """Rank of the Gram matrix of a quadratic form (char != 2): a ternary
    conic is smooth/irreducible iff the rank is 3; a quadric in P^4 is
    smooth iff the rank is 5."""
    field = form.field
    n = form.nvars
    gram = [[field.zero()] * n for _ in range(n)]
    for m, c in form.terms.items():
        idx = [i for i, e in enumerate(m) for _ in range(e)]
        i, j = idx
        if i == j:
            gram[i][i] = gram[i][i] + c + c
        else:
            gram[i][j] = gram[i][j] + c
            gram[j][i] = gram[j][i] + c
    return linalg.rank(gram, field)


# ---------------------------------------------------------------------------
# fundamental curves


@dataclass
class FundamentalCurve:
    verdict: str                   # "Line" | "RationalNormalCubic" | "Other"
    vertices: List[tuple]
    span_rank: int
    quadric_fit_dim: Optional[int]
    locus_count: Optional[int]

    def to_dict(self):
        return {"verdict": self.verdict,
                "vertex_count": len(self.vertices),
                "span_rank": self.span_rank,
                "quadric_fit_dim": self.quadric_fit_dim,
                "locus_count": self.locus_count}


def fundamental_curve(F: LineFamily, report: JumpingReport) -> FundamentalCurve:
    """Classify the locus of cone vertices attached to the jumping lines.

    The vertices either fill a line, or an exact rational normal cubic
    (span P^3, at least three independent quadrics whose common zero set
    the vertices exhaust), or something else ("Other").
    """
    if not report.mode.startswith("exhaustive") or F.n != 2:
        raise EmptyJumpingSetError("fundamental curve needs an exhaustive "
                                   "n = 2 jumping report")
    if report.jumping_count == 0:
        raise EmptyJumpingSetError("no jumping lines")
    field = F.field
    vertices = sorted({normalize_projective([field.elem(x) for x in c.vertex],
                                            field)
                       for c in report.certificates}, key=repr)
    span_rank = linalg.rank([list(v) for v in vertices], field)
    if span_rank == 2:
        return FundamentalCurve("Line", vertices, span_rank, None, None)
    if span_rank != 4:
        return FundamentalCurve("Other", vertices, span_rank, None, None)
    # express the vertices in coordinates of their P^3 span
    basis, pivots = linalg.rref([list(v) for v in vertices], field)
    coords = [[v[c] for c in pivots] for v in vertices]
    monos = monomials(4, 2)
    rows = [[HomForm.monomial(4, m, 1, field).evaluate(v) for m in monos]
            for v in coords]
    kern = linalg.kernel_basis(rows, len(monos), field)
    if len(kern) < 3:
        return FundamentalCurve("Other", vertices, span_rank, len(kern), None)
    quadrics = [HomForm(4, 2, {m: c for m, c in zip(monos, v) if c}, field)
                for v in kern]
    locus = count_common_zeros(quadrics, field, 3)
    verdict = "RationalNormalCubic" if locus == len(vertices) else "Other"
    return FundamentalCurve(verdict, vertices, span_rank, len(kern), locus)

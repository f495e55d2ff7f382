"""Families of lines in P^N over P^n: the antisymmetric matrix of quadrics.

A LineFamily holds the bivector family W(t): an (N+1)x(N+1) antisymmetric
matrix whose entries are quadratic forms in the n+1 source coordinates.
Evaluating W at a parameter point gives the Pluecker matrix of one line.
The module provides validation (symbolic decomposability, basepoint scan,
embedding spot-checks), span analysis, Grassmannian degeneracy, linear
projection and re-coordinatization, and the JSON interchange format.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from . import linalg
from .errors import (
    BasePointError, FamilyFormatError, ProjectionNotIsomorphicError,
    QuadlinesError,
)
from .fields import Field, PrimeField, Rationals, field_from_descriptor
from .forms import HomForm, span_dimension
from .parsing import parse_poly
from .pluecker import Bivector, upper_pairs


class LineFamily:
    """A family of lines: antisymmetric matrix of degree-2 forms."""

    def __init__(self, n: int, N: int, entries: Dict[Tuple[int, int], HomForm],
                 field: Field, label: str = ""):
        self.n = n
        self.N = N
        self.field = field
        self.label = label
        clean = {}
        for (i, j), f in entries.items():
            if not (0 <= i < j <= N):
                raise FamilyFormatError(f"entry index ({i},{j}) out of range",
                                        (i, j))
            if f.nvars != n + 1 or f.degree != 2:
                raise FamilyFormatError(
                    f"entry ({i},{j}) must be a quadric in {n + 1} variables",
                    (i, j))
            if f:
                clean[(i, j)] = f
        if not clean:
            raise FamilyFormatError("all entries are zero")
        self.entries = clean

    def entry(self, i: int, j: int) -> HomForm:
        if i == j:
            return HomForm.zero(self.n + 1, 2, self.field)
        if i < j:
            return self.entries.get((i, j), HomForm.zero(self.n + 1, 2, self.field))
        return -self.entry(j, i)

    def upper_forms(self) -> List[HomForm]:
        return [self.entry(i, j) for i, j in upper_pairs(self.N)]

    def evaluate(self, t: Sequence) -> Bivector:
        """The line at parameter t; raises BasePointError if W(t) = 0."""
        tt = [self.field.elem(x) for x in t]
        upper = {}
        for (i, j), f in self.entries.items():
            v = f.evaluate(tt)
            if v:
                upper[(i, j)] = v
        if not upper:
            raise BasePointError(tuple(tt))
        return Bivector.from_upper(upper, self.N, self.field)

    def relabel(self, label: str) -> "LineFamily":
        return LineFamily(self.n, self.N, dict(self.entries), self.field, label)

    def __eq__(self, other):
        return (isinstance(other, LineFamily) and self.n == other.n
                and self.N == other.N and self.field == other.field
                and self.entries == other.entries)

    def __repr__(self):
        return (f"LineFamily({self.label or 'unlabeled'}: "
                f"P^{self.n} -> G(1,{self.N}) over {self.field})")


# ---------------------------------------------------------------------------
# projective point utilities

def enumerate_projective_points(field, n: int) -> Iterator[tuple]:
    """All points of P^n(F_q), normalized with leading coordinate 1."""
    one, zero = field.one(), field.zero()
    elems = list(field.elements())
    for lead in range(n + 1):
        for tail in itertools.product(elems, repeat=n - lead):
            yield tuple([zero] * lead + [one] + list(tail))


def count_projective_points(q: int, n: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def random_projective_point(field, n: int, rng) -> tuple:
    while True:
        pt = tuple(field.random(rng) for _ in range(n + 1))
        if any(pt):
            return pt


def normalize_projective(pt, field) -> tuple:
    """Scale so the first nonzero coordinate is 1 (for dedup/hashing)."""
    for x in pt:
        if x:
            inv = field.one() / x
            return tuple(inv * y for y in pt)
    raise ValueError("zero vector is not a projective point")


def points_proportional(x, y, field) -> bool:
    return linalg.rank([list(x), list(y)], field) < 2


# ---------------------------------------------------------------------------
# reports

@dataclass
class SpotcheckReport:
    trials: int
    seed: int
    injectivity_failures: list = dc_field(default_factory=list)
    immersion_failures: list = dc_field(default_factory=list)
    basepoints_hit: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.injectivity_failures or self.immersion_failures
                    or self.basepoints_hit)

    def to_dict(self):
        return {
            "trials": self.trials,
            "seed": self.seed,
            "injectivity_failures": [repr(w) for w in self.injectivity_failures],
            "immersion_failures": [repr(w) for w in self.immersion_failures],
            "basepoints_hit": [repr(w) for w in self.basepoints_hit],
            "ok": self.ok,
        }


@dataclass
class ValidationReport:
    label: str
    seed: int
    pfaffian_ok: bool
    pfaffian_witness: Optional[tuple]
    basepoint_ok: bool
    basepoint_mode: str
    basepoint_points_checked: int
    basepoint_witness: Optional[tuple]
    spotcheck: SpotcheckReport

    @property
    def valid(self) -> bool:
        return self.pfaffian_ok and self.basepoint_ok and self.spotcheck.ok

    def to_dict(self):
        return {
            "label": self.label,
            "seed": self.seed,
            "pfaffian_ok": self.pfaffian_ok,
            "pfaffian_witness": (None if self.pfaffian_witness is None
                                 else repr(self.pfaffian_witness)),
            "basepoint_ok": self.basepoint_ok,
            "basepoint_mode": self.basepoint_mode,
            "basepoint_points_checked": self.basepoint_points_checked,
            "basepoint_witness": (None if self.basepoint_witness is None
                                  else repr(self.basepoint_witness)),
            "spotcheck": self.spotcheck.to_dict(),
            "valid": self.valid,
        }


@dataclass
class ProjectionReport:
    mode: str
    pairs_checked: int
    points_checked: int
    seed: int
    ok: bool = True

    def to_dict(self):
        return self.__dict__.copy()


# ---------------------------------------------------------------------------
# analyses

def pfaffian_identity_witness(F: LineFamily) -> Optional[tuple]:
    """First failing symbolic Pfaffian, as (i,j,k,l, monomial), else None.

    Every 4x4 Pfaffian of W must vanish identically for the family to land
    in the Grassmannian.
    """
    for i, j, k, l in itertools.combinations(range(F.N + 1), 4):
        pf = (F.entry(i, j) * F.entry(k, l)
              - F.entry(i, k) * F.entry(j, l)
              + F.entry(i, l) * F.entry(j, k))
        if pf:
            monomial = sorted(pf.terms, reverse=True)[0]
            return (i, j, k, l, monomial)
    return None


_EXHAUSTIVE_POINT_BOUND = 30000


def _basepoint_scan(F: LineFamily, seed: int, trials: int):
    """Scan for parameter points where all entries vanish.

    Exhaustive over F_p when the point count is desk-scale; extension
    fields F_{p^2}, F_{p^3} are covered for n <= 2 through the
    zero-dimensional system solver; otherwise sampled.
    """
    import random as _random
    field = F.field
    forms = list(F.entries.values())
    checked = 0
    if isinstance(field, PrimeField) and \
            count_projective_points(field.p, F.n) <= _EXHAUSTIVE_POINT_BOUND:
        for pt in enumerate_projective_points(field, F.n):
            checked += 1
            if all(not f.evaluate(pt) for f in forms):
                return False, "exhaustive-Fp", checked, pt
        mode = "exhaustive-Fp"
        if F.n == 2:
            from .pointcount import count_extension_basepoints
            extra, ext_checked = count_extension_basepoints(F)
            checked += ext_checked
            if extra:
                return False, "exhaustive-Fp+ext", checked, extra[0]
            mode = "exhaustive-Fp+ext"
        return True, mode, checked, None
    rng = _random.Random(f"{seed}:basepoints")
    for _ in range(trials):
        pt = random_projective_point(field, F.n, rng)
        checked += 1
        if all(not f.evaluate(pt) for f in forms):
            return False, "sampled", checked, pt
    return True, "sampled", checked, None


def embedding_spotcheck(F: LineFamily, trials: int = 100,
                        seed: int = 0) -> SpotcheckReport:
    """Sampled injectivity and immersion checks.

    Injectivity: distinct sampled parameters give projectively distinct
    bivectors.  Immersion: the Jacobian of the upper-triangular quadrics
    has rank n+1 at sampled points.
    """
    import random as _random
    if trials < 1:
        raise ValueError("trials >= 1 required")
    rng = _random.Random(f"{seed}:spotcheck")
    report = SpotcheckReport(trials=trials, seed=seed)
    forms = [f for f in F.upper_forms() if f]
    partials = [[f.partial(i) for i in range(F.n + 1)] for f in forms]
    for _ in range(trials):
        t1 = random_projective_point(F.field, F.n, rng)
        t2 = random_projective_point(F.field, F.n, rng)
        try:
            B1 = F.evaluate(t1)
        except BasePointError:
            report.basepoints_hit.append(t1)
            continue
        if not points_proportional(t1, t2, F.field):
            try:
                B2 = F.evaluate(t2)
            except BasePointError:
                report.basepoints_hit.append(t2)
                continue
            if B1.proportional(B2):
                report.injectivity_failures.append((t1, t2))
        jac = [[df.evaluate(t1) for df in row] for row in partials]
        if linalg.rank(jac, F.field) != F.n + 1:
            report.immersion_failures.append(t1)
    return report


def validate(F: LineFamily, seed: int = 0, trials: int = 100,
             basepoint_trials: int = 400) -> ValidationReport:
    """Full validity analysis; failures become report entries, not errors."""
    witness = pfaffian_identity_witness(F)
    bp_ok, bp_mode, bp_checked, bp_witness = _basepoint_scan(
        F, seed, basepoint_trials)
    spot = embedding_spotcheck(F, trials=trials, seed=seed)
    return ValidationReport(
        label=F.label, seed=seed,
        pfaffian_ok=witness is None, pfaffian_witness=witness,
        basepoint_ok=bp_ok, basepoint_mode=bp_mode,
        basepoint_points_checked=bp_checked, basepoint_witness=bp_witness,
        spotcheck=spot)


def plucker_span_dim(F: LineFamily) -> int:
    """Dimension of the span of the Pluecker quadrics (r+1 for <X> = P^r)."""
    return span_dimension(F.upper_forms())


def grassmann_degenerate(F: LineFamily) -> Optional[list]:
    """A covector H with W(t).H identically zero, if the family lies in a
    smaller Grassmannian; None otherwise.  Exact linear algebra in H."""
    from .forms import monomials
    rows = []
    monos = monomials(F.n + 1, 2)
    for i in range(F.N + 1):
        row_forms = [F.entry(i, j) for j in range(F.N + 1)]
        for m in monos:
            rows.append([f.coefficient(m) for f in row_forms])
    basis = linalg.kernel_basis(rows, F.N + 1, F.field)
    return basis[0] if basis else None


def _congruence_entries(F: LineFamily, pi: List[list],
                        field: Field) -> Dict[Tuple[int, int], HomForm]:
    """Entries of pi W pi^T, each a combination of the old quadrics."""
    m1 = len(pi)
    out: Dict[Tuple[int, int], HomForm] = {}
    for a in range(m1):
        for b in range(a + 1, m1):
            acc = HomForm.zero(F.n + 1, 2, field)
            for (i, j), f in F.entries.items():
                c = pi[a][i] * pi[b][j] - pi[a][j] * pi[b][i]
                if c:
                    acc = acc + f.scale(c)
            if acc:
                out[(a, b)] = acc
    return out


def transform_family(F: LineFamily, source: Optional[List[list]] = None,
                     ambient: Optional[List[list]] = None) -> LineFamily:
    """Precompose with a source coordinate change and/or apply an invertible
    ambient transformation W -> G W G^T."""
    entries = dict(F.entries)
    if source is not None:
        entries = {ij: f.compose_linear(source) for ij, f in entries.items()}
    G = None
    if ambient is not None:
        G = [[F.field.elem(x) for x in row] for row in ambient]
        tmp = LineFamily(F.n, F.N, entries, F.field, F.label)
        entries = _congruence_entries(tmp, G, F.field)
    return LineFamily(F.n, F.N, entries, F.field, F.label)


_PAIR_SCAN_POINT_BOUND = 600


def project_family(F: LineFamily, pi: List[list], seed: int = 0,
                   check_trials: int = 60) -> Tuple[LineFamily, ProjectionReport]:
    """Compress the family along a surjective linear map k^{N+1} -> k^{m+1}.

    The projected family is checked for contracted lines and collisions:
    exhaustively over small finite parameter spaces, by sampling otherwise.
    A detected failure raises ProjectionNotIsomorphicError with a witness.
    """
    import random as _random
    m = len(pi) - 1
    if m < 3:
        raise ValueError("target Grassmannian G(1,m) needs m >= 3")
    pi_f = [[F.field.elem(x) for x in row] for row in pi]
    if linalg.rank(pi_f, F.field) != m + 1:
        raise ValueError("projection matrix is not surjective")
    entries = _congruence_entries(F, pi_f, F.field)
    if not entries:
        raise ProjectionNotIsomorphicError("contraction", "entire family")
    G = LineFamily(F.n, m, entries, F.field, F.label)

    field = F.field
    exhaustive = (isinstance(field, PrimeField)
                  and count_projective_points(field.p, F.n)
                  <= _PAIR_SCAN_POINT_BOUND)
    if exhaustive:
        pts = list(enumerate_projective_points(field, F.n))
        bivs = []
        for t in pts:
            try:
                bivs.append(G.evaluate(t))
            except BasePointError:
                raise ProjectionNotIsomorphicError("contraction", t)
        for x in range(len(pts)):
            for y in range(x + 1, len(pts)):
                if bivs[x].proportional(bivs[y]):
                    if not F.evaluate(pts[x]).proportional(F.evaluate(pts[y])):
                        raise ProjectionNotIsomorphicError(
                            "collision", (pts[x], pts[y]))
        report = ProjectionReport(mode="exhaustive",
                                  pairs_checked=len(pts) * (len(pts) - 1) // 2,
                                  points_checked=len(pts), seed=seed)
    else:
        rng = _random.Random(f"{seed}:projection")
        pairs = 0
        for _ in range(check_trials):
            t1 = random_projective_point(field, F.n, rng)
            t2 = random_projective_point(field, F.n, rng)
            try:
                B1 = G.evaluate(t1)
            except BasePointError:
                raise ProjectionNotIsomorphicError("contraction", t1)
            if points_proportional(t1, t2, field):
                continue
            try:
                B2 = G.evaluate(t2)
            except BasePointError:
                raise ProjectionNotIsomorphicError("contraction", t2)
            pairs += 1
            if B1.proportional(B2):
                if not F.evaluate(t1).proportional(F.evaluate(t2)):
                    raise ProjectionNotIsomorphicError("collision", (t1, t2))
        report = ProjectionReport(mode="sampled", pairs_checked=pairs,
                                  points_checked=check_trials, seed=seed)
    return G, report


def count_common_zeros(quadrics, field, n: int, pure_bound: int = 3000) -> int:
    """Points of P^n(F_p) where all the given forms vanish.

    Pure-Python scan for small point counts, numpy int64 modular scan
    otherwise (exact: products stay far below 2^63).
    """
    p = field.p
    if count_projective_points(p, n) <= pure_bound:
        count = 0
        for pt in enumerate_projective_points(field, n):
            if all(not q.evaluate(pt) for q in quadrics):
                count += 1
        return count
    import numpy as np
    compiled = []
    for q in quadrics:
        compiled.append([(c.val, *[i for i, e in enumerate(m)
                                   for _ in range(e)])
                         for m, c in q.terms.items()])
    n1 = n + 1
    total = 0
    for lead in range(n1):
        free = n - lead
        if free == 0:
            grids = np.zeros((1, n1), dtype=np.int64)
            grids[0, lead] = 1
        else:
            axes = np.meshgrid(*([np.arange(p, dtype=np.int64)] * free),
                               indexing="ij")
            flat = [a.reshape(-1) for a in axes]
            npts = flat[0].shape[0]
            grids = np.zeros((npts, n1), dtype=np.int64)
            grids[:, lead] = 1
            for off, col in enumerate(flat):
                grids[:, lead + 1 + off] = col
        ok = np.ones(grids.shape[0], dtype=bool)
        for terms in compiled:
            acc = np.zeros(grids.shape[0], dtype=np.int64)
            for c, a, b in terms:
                acc = (acc + c * grids[:, a] * grids[:, b]) % p
            ok &= acc == 0
        total += int(ok.sum())
    return total


def reduce_family_mod_p(F: LineFamily, p: int) -> LineFamily:
    """Good-prime reduction of a family over Q into F_p.

    Raises NotInvertibleError when a denominator is divisible by p; the
    caller is expected to move to the next prime.
    """
    target = PrimeField(p)
    entries = {}
    for ij, f in F.entries.items():
        entries[ij] = HomForm(
            f.nvars, f.degree,
            {e: target.from_rational(c) for e, c in f.terms.items()}, target)
    return LineFamily(F.n, F.N, entries, target, F.label)


# ---------------------------------------------------------------------------
# JSON interchange

def family_to_json(F: LineFamily) -> dict:
    entries = []
    for (i, j) in sorted(F.entries):
        entries.append({"i": i, "j": j, "poly": F.entries[(i, j)].to_string()})
    return {"label": F.label, "field": F.field.descriptor(),
            "n": F.n, "N": F.N, "entries": entries}


def family_from_json(obj: dict) -> LineFamily:
    try:
        field = field_from_descriptor(obj["field"])
        n, N = int(obj["n"]), int(obj["N"])
        raw = obj["entries"]
        label = obj.get("label", "")
    except (KeyError, TypeError, ValueError) as e:
        raise FamilyFormatError(f"malformed family JSON: {e}")
    if isinstance(field, Rationals) is False and not isinstance(field, PrimeField):
        raise FamilyFormatError(f"unsupported field {obj['field']!r}")
    entries: Dict[Tuple[int, int], HomForm] = {}
    for ent in raw:
        i, j = int(ent["i"]), int(ent["j"])
        if i == j:
            raise FamilyFormatError(
                f"diagonal entry ({i},{j}) must be zero", (i, j))
        f = parse_poly(ent["poly"], field, nvars=n + 1, degree=2)
        key, val = ((i, j), f) if i < j else ((j, i), -f)
        if key in entries:
            if entries[key] != val:
                raise FamilyFormatError(
                    f"entries ({key[0]},{key[1]}) and ({key[1]},{key[0]}) "
                    f"are not antisymmetric", key)
        else:
            entries[key] = val
    return LineFamily(n, N, entries, field, label)


def canonical_json_bytes(obj: dict) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode()


def family_content_hash(F: LineFamily) -> str:
    return hashlib.sha256(canonical_json_bytes(family_to_json(F))).hexdigest()

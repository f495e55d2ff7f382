"""Numerical invariants: Schubert bidegrees, swept varieties, global cones.

The bidegree of a surface family is counted set-theoretically: the order
is the number of parameters whose line meets a general codimension-3
center, the class the number whose line lies in a general hyperplane.
Counts run over F_p, F_{p^2} and F_{p^3}; conjugate solution points are
captured by the degree<=3 geometric count N2 + N3 - N1.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from . import linalg
from .errors import SpecialPositionWarning
from .family import (
    LineFamily, count_common_zeros, count_projective_points,
    random_projective_point, reduce_family_mod_p,
)
from .fields import PrimeField, Rationals
from .forms import HomForm, monomials
from .pluecker import Flag, upper_pairs, wedge_vector, _merge_sign
from .pointcount import count_over_extensions


@dataclass(frozen=True)
class Bidegree:
    order: int
    hyperplane_class: int

    @property
    def degree(self) -> int:
        return self.order + self.hyperplane_class

    def as_pair(self) -> Tuple[int, int]:
        return (self.order, self.hyperplane_class)


@dataclass
class CountReport:
    kind: str
    value: int
    observed: List[int]
    unanimous: bool
    extension_counts: List[dict]
    redraws: int
    seed: int

    def to_dict(self):
        return {"kind": self.kind, "value": self.value,
                "observed": self.observed, "unanimous": self.unanimous,
                "extension_counts": self.extension_counts,
                "redraws": self.redraws, "seed": self.seed}


# ---------------------------------------------------------------------------
# Schubert conditions as quadrics in the parameters


def meets_center_conditions(F: LineFamily, center: List[list]) -> List[HomForm]:
    """Quadrics in t expressing that the line W(t) meets the given subspace:
    the components of (wedge of the center's basis) ^ W(t)."""
    field = F.field
    k = len(center)
    n1 = F.N + 1
    comps = wedge_vector(center, field)
    out = []
    for T in combinations(range(n1), k + 2):
        acc = HomForm.zero(F.n + 1, 2, field)
        Tset = set(T)
        for i, j in combinations(T, 2):
            S = tuple(sorted(Tset - {i, j}))
            sg = _merge_sign(S, i, j)
            if sg == 0:
                continue
            c = comps[S]
            if not c:
                continue
            acc = acc + F.entry(i, j).scale(c if sg > 0 else -c)
        out.append(acc)
    return out


def containment_conditions(F: LineFamily, H: list) -> List[HomForm]:
    """Quadrics in t expressing W(t).H = 0 (the line lies in the hyperplane)."""
    field = F.field
    HH = [field.elem(x) for x in H]
    out = []
    for i in range(F.N + 1):
        acc = HomForm.zero(F.n + 1, 2, field)
        for j in range(F.N + 1):
            if HH[j]:
                acc = acc + F.entry(i, j).scale(HH[j])
        out.append(acc)
    return out


def order_flag(F: LineFamily, rng) -> Flag:
    """A general center of projective dimension N-3 (N-2 basis vectors)."""
    basis = linalg.random_full_rank(F.N - 2, F.N + 1, F.field, rng)
    return Flag(center=basis, field=F.field)


def class_flag(F: LineFamily, rng) -> Tuple[Flag, list]:
    """A general hyperplane H with a general center of dimension N-2 in it."""
    field = F.field
    while True:
        H = random_projective_point(field, F.N, rng)
        basis = linalg.kernel_basis([list(H)], F.N + 1, field)
        mix = linalg.random_full_rank(F.N - 1, F.N, field, rng)
        center = linalg.mat_mul(mix, basis, field)
        if linalg.rank(center, field) == F.N - 1:
            return Flag(center=center, container=basis, field=field), list(H)


_BEZOUT_GUARD = 12  # a Veronese surface meets these cycles in <= 4 points


def _counted_system(F: LineFamily, kind: str, rng) -> List[HomForm]:
    if kind == "order":
        flag = order_flag(F, rng)
        return meets_center_conditions(F, flag.center)
    flag, H = class_flag(F, rng)
    return (containment_conditions(F, H)
            + meets_center_conditions(F, flag.center))


def schubert_count(F: LineFamily, kind: str = "order", repetitions: int = 5,
                   seed: int = 0, max_redraws: int = 20) -> CountReport:
    """Set-theoretic intersection count with a Schubert cycle, stabilized
    over F_p, F_{p^2}, F_{p^3} and repeated over random flags.

    Raises SpecialPositionWarning when no unique modal value emerges.
    """
    if F.n != 2:
        raise ValueError("bidegree counting is defined for surface families")
    if isinstance(F.field, Rationals):
        from .splitting import _good_reduction
        return schubert_count(_good_reduction(F), kind=kind,
                              repetitions=repetitions, seed=seed,
                              max_redraws=max_redraws)
    if not isinstance(F.field, PrimeField):
        raise ValueError("counting needs a prime field or Q")
    p = F.field.p
    rng = random.Random(f"{seed}:schubert:{kind}")
    observed = []
    extension_counts = []
    redraws = 0
    while len(observed) < repetitions:
        if redraws > max_redraws:
            raise SpecialPositionWarning(
                f"too many degenerate flags for {kind} count", observed)
        system = _counted_system(F, kind, rng)
        try:
            counts = count_over_extensions(system, p, seed=seed)
        except SpecialPositionWarning:
            redraws += 1
            continue
        if counts["geometric"] > _BEZOUT_GUARD:
            redraws += 1
            continue
        observed.append(counts["geometric"])
        extension_counts.append(counts)
    tally: Dict[int, int] = {}
    for v in observed:
        tally[v] = tally.get(v, 0) + 1
    best = max(tally.values())
    modes = [v for v, c in tally.items() if c == best]
    if len(modes) != 1:
        raise SpecialPositionWarning(
            f"no unique modal {kind} count", observed)
    return CountReport(kind=kind, value=modes[0], observed=observed,
                       unanimous=len(tally) == 1,
                       extension_counts=extension_counts,
                       redraws=redraws, seed=seed)


def bidegree(F: LineFamily, repetitions: int = 5,
             seed: int = 0) -> Tuple[Bidegree, Dict[str, CountReport]]:
    a = schubert_count(F, "order", repetitions=repetitions, seed=seed)
    b = schubert_count(F, "class", repetitions=repetitions, seed=seed)
    return Bidegree(a.value, b.value), {"order": a, "class": b}


# ---------------------------------------------------------------------------
# swept variety


@dataclass
class SweptReport:
    dimension: int
    fiber_counts: List[int]
    fitted_dim: int
    fitted_forms: List[HomForm]
    fitted_rank: Optional[int]
    verified_on_fresh: bool
    samples: int
    seed: int

    def to_dict(self):
        return {"dimension": self.dimension, "fiber_counts": self.fiber_counts,
                "fitted_dim": self.fitted_dim,
                "fitted_forms": [f.to_string() for f in self.fitted_forms],
                "fitted_rank": self.fitted_rank,
                "verified_on_fresh": self.verified_on_fresh,
                "samples": self.samples, "seed": self.seed}


def _sample_swept_point(F: LineFamily, rng):
    field = F.field
    t = random_projective_point(field, F.n, rng)
    B = F.evaluate(t)
    u, v = B.two_points()
    while True:
        s1, s2 = field.random(rng), field.random(rng)
        if s1 or s2:
            break
    return [s1 * a + s2 * b for a, b in zip(u, v)]


def _incidence_quadrics(F: LineFamily, y) -> List[HomForm]:
    """Quadrics in t whose common vanishing says y lies on the line W(t)."""
    field = F.field
    yy = [field.elem(x) for x in y]
    out = []
    for i, j, k in combinations(range(F.N + 1), 3):
        acc = HomForm.zero(F.n + 1, 2, field)
        if yy[i]:
            acc = acc + F.entry(j, k).scale(yy[i])
        if yy[j]:
            acc = acc - F.entry(i, k).scale(yy[j])
        if yy[k]:
            acc = acc + F.entry(i, j).scale(yy[k])
        out.append(acc)
    return out


def swept_variety(F: LineFamily, samples: int = 60,
                  seed: int = 0) -> SweptReport:
    """Dimension of the union of the lines, with fitted quadrics.

    Dimension: the union is the image of a P^1-bundle of dimension n+1;
    its dimension is n+1 minus the generic fiber dimension of the sweep,
    and the fiber dimension is read off exactly from F_p point counts of
    the incidence locus {t : y on W(t)} at sampled swept points y.
    """
    if samples < 20:
        raise ValueError("samples >= 20 required")
    if isinstance(F.field, Rationals):
        from .splitting import _good_reduction
        return swept_variety(_good_reduction(F), samples=samples, seed=seed)
    field = F.field
    p = field.p
    rng = random.Random(f"{seed}:swept")
    pts = [_sample_swept_point(F, rng) for _ in range(samples)]

    monos = monomials(F.N + 1, 2)
    rows = [[HomForm.monomial(F.N + 1, m, 1, field).evaluate(y) for m in monos]
            for y in pts]
    kern = linalg.kernel_basis(rows, len(monos), field)
    fitted = [HomForm(F.N + 1, 2, {m: c for m, c in zip(monos, v) if c}, field)
              for v in kern]
    fresh = [_sample_swept_point(F, rng) for _ in range(100)]
    verified = all(not f.evaluate(y) for f in fitted for y in fresh)

    fiber_counts = []
    for y in pts[: 4]:
        conditions = [g for g in _incidence_quadrics(F, y) if g]
        fiber_counts.append(count_common_zeros(conditions, field, F.n))
    fiberdim = 1 if sorted(fiber_counts)[len(fiber_counts) // 2] > 0.5 * p \
        else 0
    dimension = F.n + 1 - fiberdim

    rank = None
    if len(fitted) == 1:
        from .splitting import symmetric_gram_rank
        rank = symmetric_gram_rank(fitted[0])
    return SweptReport(dimension=dimension, fiber_counts=fiber_counts,
                       fitted_dim=len(fitted), fitted_forms=fitted,
                       fitted_rank=rank, verified_on_fresh=verified,
                       samples=samples, seed=seed)


# ---------------------------------------------------------------------------
# global cone vertex


def global_vertex(F: LineFamily) -> Optional[tuple]:
    """A point lying on every line of the family, if one exists: the exact
    solution of x ^ W(t) = 0 over all coefficients in t."""
    field = F.field
    monos = monomials(F.n + 1, 2)
    rows = []
    for i, j, k in combinations(range(F.N + 1), 3):
        fij, fik, fjk = F.entry(i, j), F.entry(i, k), F.entry(j, k)
        for m in monos:
            row = [field.zero()] * (F.N + 1)
            row[i] = fjk.coefficient(m)
            row[j] = -fik.coefficient(m)
            row[k] = fij.coefficient(m)
            if any(row):
                rows.append(row)
    kernel = linalg.kernel_basis(rows, F.N + 1, field)
    return tuple(kernel[0]) if kernel else None

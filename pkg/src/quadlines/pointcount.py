"""Exact point counting for zero-dimensional systems of conics in P^2.

Counts common zeros of a list of ternary quadrics over F_p, F_{p^2} and
F_{p^3} without any Groebner machinery: eliminate one variable with a
resultant, find the roots of the resulting binary form, then intersect
the univariate fibers by gcd.  Root extraction over F_q uses gcd with
x^q - x followed by randomized equal-degree splitting.
"""

from __future__ import annotations

import itertools
import random
from typing import List, Optional, Sequence, Tuple

from . import linalg
from .errors import SpecialPositionWarning
from .fields import ExtensionField, Field, PrimeField
from .forms import HomForm

# ---------------------------------------------------------------------------
# univariate polynomials as ascending coefficient lists


def _trim(f):
    while f and not f[-1]:
        f.pop()
    return f


def _deg(f) -> int:
    return len(f) - 1


def _monic(f, field):
    inv = field.one() / f[-1]
    return [c * inv for c in f]


def _poly_sub(f, g, field):
    n = max(len(f), len(g))
    z = field.zero()
    out = [(f[i] if i < len(f) else z) - (g[i] if i < len(g) else z)
           for i in range(n)]
    return _trim(out)


def _poly_mul(f, g, field):
    if not f or not g:
        return []
    z = field.zero()
    out = [z] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = out[i + j] + a * b
    return _trim(out)


def _poly_mod(f, g, field):
    f = list(f)
    ginv = field.one() / g[-1]
    dg = _deg(g)
    while len(f) - 1 >= dg and f:
        lead = f[-1] * ginv
        shift = len(f) - 1 - dg
        for i in range(dg + 1):
            f[shift + i] = f[shift + i] - lead * g[i]
        _trim(f)
        if not f:
            break
    return f


def _poly_gcd(f, g, field):
    f, g = _trim(list(f)), _trim(list(g))
    while g:
        f, g = g, _poly_mod(f, g, field)
    return _monic(f, field) if f else []


def _poly_powmod(base, e: int, mod, field):
    result = [field.one()]
    b = _poly_mod(list(base), mod, field)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, b, field), mod, field)
        b = _poly_mod(_poly_mul(b, b, field), mod, field)
        e >>= 1
    return result


def poly_roots(f: Sequence, field: Field, rng) -> list:
    """Distinct roots of a univariate polynomial over a finite field."""
    f = _trim([field.elem(c) for c in f])
    if _deg(f) <= 0:
        return []
    q = field.order
    f = _monic(f, field)
    x = [field.zero(), field.one()]
    xq = _poly_powmod(x, q, f, field)
    g = _poly_gcd(_poly_sub(xq, x, field), f, field)
    return _split_linear(g, field, rng)


def _split_linear(g, field: Field, rng) -> list:
    """Roots of a monic product of distinct linear factors."""
    d = _deg(g)
    if d <= 0:
        return []
    if d == 1:
        return [-g[0]]
    q = field.order
    for _ in range(64):
        a = field.random(rng)
        h = _poly_powmod([a, field.one()], (q - 1) // 2, g, field)
        h = _poly_sub(h, [field.one()], field)
        g1 = _poly_gcd(h, g, field) if h else list(g)
        if 0 < _deg(g1) < d:
            g2 = _poly_divexact(g, g1, field)
            return _split_linear(g1, field, rng) + _split_linear(g2, field, rng)
    raise RuntimeError("equal-degree splitting failed to converge")


def _poly_divexact(f, g, field):
    """Exact quotient f / g (remainder known to vanish)."""
    f = list(f)
    out = [field.zero()] * (len(f) - len(g) + 1)
    ginv = field.one() / g[-1]
    dg = _deg(g)
    while f and _deg(f) >= dg:
        lead = f[-1] * ginv
        shift = _deg(f) - dg
        out[shift] = lead
        for i in range(dg + 1):
            f[shift + i] = f[shift + i] - lead * g[i]
        _trim(f)
    return _trim(out)


# ---------------------------------------------------------------------------
# binary forms and the t2-resultant of two ternary quadrics


def binary_form_roots(form: HomForm, rng) -> list:
    """Projective roots (t0:t1) of a nonzero binary form."""
    field = form.field
    d = form.degree
    coeffs = [form.coefficient((d - k, k)) for k in range(d + 1)]
    roots = [(field.one(), r) for r in poly_roots(coeffs, field, rng)]
    if not coeffs[-1]:
        roots.append((field.zero(), field.one()))
    return roots


def _t2_profile(g: HomForm):
    """Coefficients of g as a polynomial in t2: binary forms c0, c1 and a
    scalar c2, with c_i of degree 2 - i in (t0, t1)."""
    field = g.field
    c0 = {}
    c1 = {}
    c2 = field.zero()
    for (e0, e1, e2), c in g.terms.items():
        if e2 == 0:
            c0[(e0, e1)] = c
        elif e2 == 1:
            c1[(e0, e1)] = c
        else:
            c2 = c
    return (HomForm(2, 2, c0, field), HomForm(2, 1, c1, field), c2)


def _t2_degree(profile) -> int:
    c0, c1, c2 = profile
    if c2:
        return 2
    if c1:
        return 1
    if c0:
        return 0
    return -1


def resultant_t2(g1: HomForm, g2: HomForm) -> HomForm:
    """Res_{t2}(g1, g2) as a binary form in (t0, t1).

    Computed by interpolation: the scalar Sylvester resultant is evaluated
    at degree+1 parameter slices and the coefficients recovered exactly.
    """
    field = g1.field
    p1, p2 = _t2_profile(g1), _t2_profile(g2)
    d1, d2 = _t2_degree(p1), _t2_degree(p2)
    if d1 < 0 or d2 < 0:
        return HomForm.zero(2, 4, field)
    if d1 == 0:
        return p1[0]
    if d2 == 0:
        return p2[0]

    def univ(profile, a, b):
        c0, c1, c2 = profile
        return [c0.evaluate([a, b]), c1.evaluate([a, b]), c2]

    def sylvester(u, v, m, n):
        size = m + n
        rows = []
        for s in range(n):
            row = [field.zero()] * size
            for i in range(m + 1):
                row[s + i] = u[m - i]
            rows.append(row)
        for s in range(m):
            row = [field.zero()] * size
            for i in range(n + 1):
                row[s + i] = v[n - i]
            rows.append(row)
        return linalg.det(rows, field)

    # total degree of the resultant for our graded coefficients
    res_deg = {(2, 2): 4, (2, 1): 4, (1, 2): 4, (1, 1): 3}[(d1, d2)]
    # sample at (1, x) for res_deg + 1 distinct x and interpolate
    xs = []
    it = field.elements() if isinstance(field, (PrimeField, ExtensionField)) \
        else iter(field.elem(i) for i in range(res_deg + 1))
    for x in it:
        xs.append(x)
        if len(xs) == res_deg + 1:
            break
    rows = []
    rhs = []
    one = field.one()
    for x in xs:
        u = univ(p1, one, x)[: d1 + 1]
        v = univ(p2, one, x)[: d2 + 1]
        val = sylvester(u, v, d1, d2)
        rows.append([x ** k for k in range(res_deg + 1)])
        rhs.append(val)
    # solve the Vandermonde system exactly for the t1-coefficients
    aug = [row + [r] for row, r in zip(rows, rhs)]
    red, pivots = linalg.rref(aug, field)
    sol = [field.zero()] * (res_deg + 1)
    for r, c in enumerate(pivots):
        if c == res_deg + 1:
            raise RuntimeError("inconsistent interpolation system")
        sol[c] = red[r][res_deg + 1]
    terms = {}
    for k, c in enumerate(sol):
        if c:
            terms[(res_deg - k, k)] = c
    return HomForm(2, res_deg, terms, field)


# ---------------------------------------------------------------------------
# solving a conic system over a finite field


def _embed_form(f: HomForm, target: Field) -> HomForm:
    return HomForm(f.nvars, f.degree,
                   {e: target.elem(c.val if hasattr(c, "val") else c)
                    for e, c in f.terms.items()}, target)


def solve_conic_system(quadrics: List[HomForm], field: Field, rng,
                       enumeration_bound: int = 30000) -> list:
    """All P^2(F_q) points where every quadric vanishes (set-theoretic).

    Raises SpecialPositionWarning when the solution set is not finite or
    the elimination degenerates beyond repair.
    """
    forms = [g for g in quadrics if g]
    if not forms:
        raise SpecialPositionWarning("system is identically zero")

    R = None
    for g1, g2 in itertools.combinations(forms, 2):
        cand = resultant_t2(g1, g2)
        if cand:
            R = cand
            break
    if R is None and len(forms) == 1:
        R = _t2_profile(forms[0])[0]
    if R is None or not R:
        # every pair shares a component; fall back to brute force
        q = field.order
        if q is not None and q * q + q + 1 <= enumeration_bound:
            return brute_force_conic_solutions(forms, field)
        raise SpecialPositionWarning(
            "conic system is degenerate (shared components)")

    points = set()
    for a, b in binary_form_roots(R, rng):
        fiber = None
        dead = False
        for g in forms:
            c0, c1, c2 = _t2_profile(g)
            u = _trim([c0.evaluate([a, b]), c1.evaluate([a, b]), c2])
            if not u:
                continue  # this quadric vanishes on the whole fiber
            fiber = u if fiber is None else _poly_gcd(fiber, u, field)
            if _deg(fiber) == 0:
                dead = True  # gcd is a nonzero constant: empty fiber
                break
        if dead:
            continue
        if fiber is None:
            raise SpecialPositionWarning(
                f"solution set contains the whole fiber over ({a}:{b})")
        for r in poly_roots(fiber, field, rng):
            points.add(_normalize((a, b, r), field))
    # the single point not covered by the (t0:t1) fibration
    special = (field.zero(), field.zero(), field.one())
    if all(not g.evaluate(special) for g in forms):
        points.add(special)
    for pt in points:
        assert all(not g.evaluate(pt) for g in forms)
    return sorted(points, key=repr)


def _normalize(pt, field):
    for x in pt:
        if x:
            inv = field.one() / x
            return tuple(inv * y for y in pt)
    raise ValueError("zero point")


def brute_force_conic_solutions(quadrics: List[HomForm], field: Field) -> list:
    """Independent oracle: scan every point of P^2(F_q)."""
    from .family import enumerate_projective_points
    out = []
    for pt in enumerate_projective_points(field, 2):
        if all(not g.evaluate(pt) for g in quadrics):
            out.append(pt)
    return sorted(out, key=repr)


def count_over_extensions(quadrics: List[HomForm], p: int,
                          seed: int = 0) -> dict:
    """Counts over F_p, F_{p^2}, F_{p^3} and the degree<=3 geometric count.

    With N_k the number of F_{p^k}-points, the number of geometric points
    of degree at most 3 equals N_2 + N_3 - N_1 (the quadratic and cubic
    point orbits are disjoint from each other and both contain the
    rational points).
    """
    counts = {}
    for k in (1, 2, 3):
        target = PrimeField(p) if k == 1 else ExtensionField(p, k)
        rng = random.Random(f"{seed}:ext{k}")
        embedded = [_embed_form(g, target) for g in quadrics]
        counts[k] = len(solve_conic_system(embedded, target, rng))
    counts["geometric"] = counts[2] + counts[3] - counts[1]
    return counts


def count_extension_basepoints(F) -> Tuple[list, int]:
    """Basepoints of an n = 2 family over F_{p^2} and F_{p^3}."""
    assert F.n == 2 and isinstance(F.field, PrimeField)
    witnesses = []
    for k in (2, 3):
        target = ExtensionField(F.field.p, k)
        rng = random.Random(f"basepoints:ext{k}")
        embedded = [_embed_form(g, target) for g in F.entries.values()]
        try:
            pts = solve_conic_system(embedded, target, rng)
        except SpecialPositionWarning:
            continue  # infinitely many would have been caught over F_p
        witnesses.extend(pts)
    return witnesses, 2

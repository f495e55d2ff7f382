"""Sparse homogeneous multivariate polynomials over an exact field.

A form of degree d in nvars variables is a map from exponent tuples
(summing to d) to nonzero field elements.  Degrees in this package never
exceed 4, so no clever multiplication is attempted.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Sequence, Tuple

from . import linalg
from .errors import DegenerateLineError, DegreeMismatchError
from .fields import Field

Exponent = Tuple[int, ...]


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> Tuple[Exponent, ...]:
    """All exponent tuples of the given total degree, descending lex order."""
    if nvars == 1:
        return ((degree,),)
    out = []
    for e0 in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - e0):
            out.append((e0,) + rest)
    return tuple(out)


class HomForm:
    """A homogeneous form; immutable after construction."""

    __slots__ = ("nvars", "degree", "terms", "field")

    def __init__(self, nvars: int, degree: int, terms: Dict[Exponent, object],
                 field: Field):
        clean = {}
        for exp, c in terms.items():
            if len(exp) != nvars or any(e < 0 for e in exp) or sum(exp) != degree:
                raise DegreeMismatchError(
                    f"exponent {exp} is not degree {degree} in {nvars} variables")
            c = field.elem(c)
            if c:
                clean[exp] = c
        self.nvars = nvars
        self.degree = degree
        self.terms = clean
        self.field = field

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zero(nvars: int, degree: int, field: Field) -> "HomForm":
        return HomForm(nvars, degree, {}, field)

    @staticmethod
    def monomial(nvars: int, exp: Exponent, coeff, field: Field) -> "HomForm":
        return HomForm(nvars, sum(exp), {tuple(exp): coeff}, field)

    @staticmethod
    def variable(nvars: int, i: int, field: Field) -> "HomForm":
        exp = tuple(1 if j == i else 0 for j in range(nvars))
        return HomForm(nvars, 1, {exp: field.one()}, field)

    @staticmethod
    def linear(coeffs: Sequence, field: Field) -> "HomForm":
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            c = field.elem(c)
            if c:
                terms[tuple(1 if j == i else 0 for j in range(n))] = c
        return HomForm(n, 1, terms, field)

    # -- basic queries -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coefficient(self, exp: Exponent):
        return self.terms.get(tuple(exp), self.field.zero())

    def coefficient_vector(self):
        """Coefficients in the canonical monomial basis (descending lex)."""
        return [self.terms.get(m, self.field.zero())
                for m in monomials(self.nvars, self.degree)]

    def _check_compatible(self, other: "HomForm"):
        if self.nvars != other.nvars:
            raise DegreeMismatchError(
                f"mixing forms in {self.nvars} and {other.nvars} variables")
        if self.degree != other.degree:
            raise DegreeMismatchError(
                f"adding forms of degree {self.degree} and {other.degree}")

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "HomForm") -> "HomForm":
        self._check_compatible(other)
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = terms.get(exp)
            s = c if s is None else s + c
            if s:
                terms[exp] = s
            elif exp in terms:
                del terms[exp]
        return HomForm(self.nvars, self.degree, terms, self.field)

    def __neg__(self) -> "HomForm":
        return HomForm(self.nvars, self.degree,
                       {e: -c for e, c in self.terms.items()}, self.field)

    def __sub__(self, other: "HomForm") -> "HomForm":
        return self + (-other)

    def scale(self, c) -> "HomForm":
        c = self.field.elem(c)
        if not c:
            return HomForm.zero(self.nvars, self.degree, self.field)
        return HomForm(self.nvars, self.degree,
                       {e: c * v for e, v in self.terms.items()}, self.field)

    def __mul__(self, other):
        if not isinstance(other, HomForm):
            return self.scale(other)
        if self.nvars != other.nvars:
            raise DegreeMismatchError("product of forms in different variable sets")
        terms: Dict[Exponent, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = c1 * c2
                s = terms.get(e)
                s = c if s is None else s + c
                if s:
                    terms[e] = s
                elif e in terms:
                    del terms[e]
        return HomForm(self.nvars, self.degree + other.degree, terms, self.field)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, HomForm) and self.nvars == other.nvars
                and self.degree == other.degree and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, self.degree, frozenset(self.terms.items())))

    # -- evaluation and substitution ------------------------------------------

    def evaluate(self, point: Sequence):
        """Exact value at a point; homogeneous of degree ``self.degree``."""
        if len(point) != self.nvars:
            raise DegreeMismatchError(
                f"point has {len(point)} coordinates, form has {self.nvars} variables")
        pt = [self.field.elem(x) for x in point]
        total = self.field.zero()
        for exp, c in self.terms.items():
            v = c
            for x, e in zip(pt, exp):
                for _ in range(e):
                    v = v * x
            total = total + v
        return total

    def compose_linear(self, rows: Sequence[Sequence]) -> "HomForm":
        """Substitute variable i by the linear form rows[i] in new variables."""
        if len(rows) != self.nvars:
            raise DegreeMismatchError("substitution needs one row per variable")
        new_n = len(rows[0])
        lin = [HomForm.linear(r, self.field) for r in rows]
        out = HomForm.zero(new_n, self.degree, self.field)
        for exp, c in self.terms.items():
            term = None
            for i, e in enumerate(exp):
                for _ in range(e):
                    term = lin[i] if term is None else term * lin[i]
            if term is None:  # degree-0 form
                term = HomForm(new_n, 0, {(0,) * new_n: self.field.one()}, self.field)
            out = out + term.scale(c)
        return out

    def substitute_line(self, p: Sequence, q: Sequence) -> "HomForm":
        """Restrict to the line through p and q: t -> s*p + u*q (2 variables)."""
        pf = [self.field.elem(x) for x in p]
        qf = [self.field.elem(x) for x in q]
        if len(pf) != self.nvars or len(qf) != self.nvars:
            raise DegreeMismatchError("points must match the variable count")
        if linalg.rank([pf, qf], self.field) < 2:
            raise DegenerateLineError("proportional points span no line")
        return self.compose_linear([[a, b] for a, b in zip(pf, qf)])

    def partial(self, i: int) -> "HomForm":
        """Formal partial derivative with respect to variable i."""
        if self.degree == 0:
            return HomForm.zero(self.nvars, 0, self.field)
        terms = {}
        for exp, c in self.terms.items():
            if exp[i]:
                e = list(exp)
                e[i] -= 1
                terms[tuple(e)] = c * exp[i]
        return HomForm(self.nvars, self.degree - 1, terms, self.field)

    # -- printing -------------------------------------------------------------

    def to_string(self, letter: str = "t") -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            factors = []
            for i, e in enumerate(exp):
                if e == 1:
                    factors.append(f"{letter}{i}")
                elif e > 1:
                    factors.append(f"{letter}{i}^{e}")
            cs = _scalar_string(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if factors and cs == "1":
                body = "*".join(factors)
            elif factors:
                body = cs + "*" + "*".join(factors)
            else:
                body = cs
            if not pieces:
                pieces.append(("-" if neg else "") + body)
            else:
                pieces.append(("- " if neg else "+ ") + body)
        return " ".join(pieces)

    def __repr__(self):
        return f"HomForm({self.to_string()})"


def _scalar_string(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    return str(c)  # FpElement prints its canonical representative


def span_dimension(forms: Iterable[HomForm]) -> int:
    """Rank of the coefficient matrix of the forms in the monomial basis."""
    forms = [f for f in forms]
    if not forms:
        return 0
    n, d, field = forms[0].nvars, forms[0].degree, forms[0].field
    for f in forms:
        if f.nvars != n or f.degree != d:
            raise DegreeMismatchError("span of forms with mixed degree or arity")
    rows = [f.coefficient_vector() for f in forms]
    return linalg.rank(rows, field)

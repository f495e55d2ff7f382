"""Exact scalar arithmetic: the rationals and prime fields F_p, F_{p^k}.

Every computation in this package is exact.  Scalars are either
:class:`fractions.Fraction` (characteristic zero) or wrapped modular
integers / coefficient tuples (finite fields).  Elements of different
fields refuse to combine; the mismatch is raised at operation time.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterator, Sequence, Union


class FieldMismatchError(TypeError):
    """Raised when scalars from different fields are combined."""


class NotInvertibleError(ZeroDivisionError):
    """Raised when inverting zero (or a zero divisor during reduction)."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(n ** 0.5) + 1):
        if n % d == 0:
            return False
    return True


class Field:
    """Common interface for the concrete fields below."""

    char: int  # characteristic (0 for the rationals)

    def zero(self):
        return self.elem(0)

    def one(self):
        return self.elem(1)

    def elem(self, x):
        raise NotImplementedError

    def random(self, rng):
        """Draw a uniform element (finite fields) or a small integer (Q)."""
        raise NotImplementedError

    def random_nonzero(self, rng):
        while True:
            x = self.random(rng)
            if x:
                return x

    def descriptor(self):
        """JSON-serializable field descriptor."""
        raise NotImplementedError


class Rationals(Field):
    """The field Q; elements are plain ``fractions.Fraction``."""

    char = 0
    order = None

    def elem(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, (FpElement, ExtElement)):
            raise FieldMismatchError("cannot coerce a finite-field scalar into Q")
        return Fraction(x)

    def random(self, rng):
        return Fraction(rng.randint(-20, 20))

    def descriptor(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Q"


class FpElement:
    """An element of F_p.  Normalized to 0 <= val < p."""

    __slots__ = ("val", "field")

    def __init__(self, val: int, field: "PrimeField"):
        self.val = val % field.p
        self.field = field

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.field.p != self.field.p:
                raise FieldMismatchError(
                    f"mixing F_{self.field.p} and F_{other.field.p}")
            return other.val
        if isinstance(other, int):
            return other % self.field.p
        raise FieldMismatchError(
            f"cannot combine F_{self.field.p} scalar with {type(other).__name__}")

    def __add__(self, other):
        return FpElement(self.val + self._coerce(other), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return FpElement(self.val - self._coerce(other), self.field)

    def __rsub__(self, other):
        return FpElement(self._coerce(other) - self.val, self.field)

    def __mul__(self, other):
        return FpElement(self.val * self._coerce(other), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o == 0:
            raise NotInvertibleError("division by zero in F_p")
        return FpElement(self.val * pow(o, -1, self.field.p), self.field)

    def __rtruediv__(self, other):
        if self.val == 0:
            raise NotInvertibleError("division by zero in F_p")
        o = self._coerce(other)
        return FpElement(o * pow(self.val, -1, self.field.p), self.field)

    def __neg__(self):
        return FpElement(-self.val, self.field)

    def __pow__(self, e: int):
        return FpElement(pow(self.val, e, self.field.p), self.field)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.field.p == other.field.p and self.val == other.val
        if isinstance(other, int):
            return self.val == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.val))

    def __bool__(self):
        return self.val != 0

    def __repr__(self):
        return f"{self.val}"


class PrimeField(Field):
    """The prime field F_p, p an odd prime >= 5."""

    def __init__(self, p: int):
        if not _is_prime(p) or p < 5:
            raise ValueError(f"prime >= 5 required, got {p}")
        self.p = p
        self.char = p
        self.order = p

    def elem(self, x):
        if isinstance(x, FpElement):
            if x.field.p != self.p:
                raise FieldMismatchError(f"F_{x.field.p} scalar used in F_{self.p}")
            return x
        if isinstance(x, int):
            return FpElement(x, self)
        if isinstance(x, Fraction):
            return self.from_rational(x)
        raise FieldMismatchError(f"cannot coerce {type(x).__name__} into F_{self.p}")

    def from_rational(self, fr: Fraction):
        """Reduce a rational mod p; the denominator must be a unit."""
        if fr.denominator % self.p == 0:
            raise NotInvertibleError(f"denominator {fr.denominator} not a unit mod {self.p}")
        return FpElement(fr.numerator * pow(fr.denominator % self.p, -1, self.p), self)

    def random(self, rng):
        return FpElement(rng.randrange(self.p), self)

    def elements(self) -> Iterator[FpElement]:
        for v in range(self.p):
            yield FpElement(v, self)

    def descriptor(self):
        return {"Fp": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"F_{self.p}"


class ExtElement:
    """An element of F_{p^k}, stored as a coefficient tuple (ascending)."""

    __slots__ = ("coeffs", "field")

    def __init__(self, coeffs: Sequence[int], field: "ExtensionField"):
        self.coeffs = tuple(c % field.p for c in coeffs)
        self.field = field

    def _coerce(self, other):
        if isinstance(other, ExtElement):
            if other.field is not self.field and other.field != self.field:
                raise FieldMismatchError("mixing distinct extension fields")
            return other.coeffs
        if isinstance(other, int):
            return (other % self.field.p,) + (0,) * (self.field.k - 1)
        if isinstance(other, FpElement):
            if other.field.p != self.field.p:
                raise FieldMismatchError("mixing extensions of different primes")
            return (other.val,) + (0,) * (self.field.k - 1)
        raise FieldMismatchError(
            f"cannot combine F_{self.field.p}^{self.field.k} scalar "
            f"with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        return ExtElement([a + b for a, b in zip(self.coeffs, o)], self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return ExtElement([a - b for a, b in zip(self.coeffs, o)], self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        return ExtElement([b - a for a, b in zip(self.coeffs, o)], self.field)

    def __mul__(self, other):
        return ExtElement(self.field._mul(self.coeffs, self._coerce(other)), self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return ExtElement([-a for a in self.coeffs], self.field)

    def inverse(self):
        return ExtElement(self.field._inv(self.coeffs), self.field)

    def __truediv__(self, other):
        o = ExtElement(self._coerce(other), self.field)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = ExtElement(self._coerce(other), self.field)
        return o * self.inverse()

    def __pow__(self, e: int):
        result = self.field.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (ExtElement, int, FpElement)):
            return self.coeffs == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"ext{self.coeffs}"


class ExtensionField(Field):
    """F_{p^k} for k in {2, 3}, as F_p[x] modulo an irreducible polynomial.

    The modulus is found deterministically, so two ExtensionField(p, k)
    instances are interchangeable.
    """

    def __init__(self, p: int, k: int):
        if k not in (2, 3):
            raise ValueError("only quadratic and cubic extensions are supported")
        if not _is_prime(p) or p < 5:
            raise ValueError(f"prime >= 5 required, got {p}")
        self.p = p
        self.k = k
        self.char = p
        self.order = p ** k
        # tail of the monic modulus: x^k = tail[0] + tail[1] x + ...
        self.tail = self._find_modulus_tail()
        self._red = self._reduction_rows()

    def _find_modulus_tail(self):
        p, k = self.p, self.k
        if k == 2:
            for a in range(2, p):
                if pow(a, (p - 1) // 2, p) == p - 1:  # non-residue
                    return (a, 0)
            raise RuntimeError("no quadratic non-residue found")
        # cubic: x^3 + a x + b with no roots in F_p is irreducible
        for b in range(1, p):
            for a in range(0, p):
                if all((x * x * x + a * x + b) % p for x in range(p)):
                    return ((-b) % p, (-a) % p, 0)  # x^3 = -b - a x
        raise RuntimeError("no irreducible cubic found")

    def _reduction_rows(self):
        """x^(k+i) expressed in the power basis, for i = 0..k-2."""
        rows = [list(self.tail)]
        for _ in range(self.k - 2):
            prev = rows[-1]
            row = [0] * self.k
            # multiply by x: shift, then reduce the overflow coefficient
            carry = prev[-1]
            for j in range(self.k - 1, 0, -1):
                row[j] = prev[j - 1]
            for j in range(self.k):
                row[j] = (row[j] + carry * self.tail[j]) % self.p
            rows.append(row)
        return rows

    def _mul(self, a, b):
        p, k = self.p, self.k
        prod = [0] * (2 * k - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        out = [c % p for c in prod[:k]]
        for i in range(k, 2 * k - 1):
            c = prod[i] % p
            if c:
                row = self._red[i - k]
                for j in range(k):
                    out[j] = (out[j] + c * row[j]) % p
        return out

    def _inv(self, a):
        """Extended Euclid on a against the modulus, over F_p."""
        if not any(a):
            raise NotInvertibleError("division by zero in F_{p^k}")
        p = self.p
        modulus = [(-t) % p for t in self.tail] + [1]
        r0, r1 = modulus, list(a)
        s0, s1 = [0] * (self.k + 1), [1] + [0] * self.k

        def deg(poly):
            for i in range(len(poly) - 1, -1, -1):
                if poly[i] % p:
                    return i
            return -1

        while deg(r1) > 0:
            d0, d1 = deg(r0), deg(r1)
            if d0 < d1:
                r0, r1, s0, s1 = r1, r0, s1, s0
                continue
            lead = (r0[deg(r0)] * pow(r1[deg(r1)], -1, p)) % p
            shift = deg(r0) - deg(r1)
            for i in range(deg(r1) + 1):
                r0[i + shift] = (r0[i + shift] - lead * r1[i]) % p
            for i in range(len(s1) - shift):
                s0[i + shift] = (s0[i + shift] - lead * s1[i]) % p
            if deg(r0) < deg(r1):
                r0, r1, s0, s1 = r1, r0, s1, s0
        c = r1[0] % p
        if c == 0:
            raise NotInvertibleError("element not invertible")
        cinv = pow(c, -1, p)
        return [(cinv * s) % p for s in s1[: self.k]]

    def elem(self, x):
        if isinstance(x, ExtElement):
            if x.field != self:
                raise FieldMismatchError("scalar from a different extension field")
            return x
        if isinstance(x, int):
            return ExtElement((x,) + (0,) * (self.k - 1), self)
        if isinstance(x, FpElement):
            if x.field.p != self.p:
                raise FieldMismatchError("scalar from an extension of a different prime")
            return ExtElement((x.val,) + (0,) * (self.k - 1), self)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise NotInvertibleError("denominator not a unit")
            v = x.numerator * pow(x.denominator % self.p, -1, self.p)
            return ExtElement((v,) + (0,) * (self.k - 1), self)
        raise FieldMismatchError(f"cannot coerce {type(x).__name__}")

    def generator_x(self):
        return ExtElement((0, 1) + (0,) * (self.k - 2), self)

    def random(self, rng):
        return ExtElement(tuple(rng.randrange(self.p) for _ in range(self.k)), self)

    def elements(self) -> Iterator[ExtElement]:
        for coeffs in itertools.product(range(self.p), repeat=self.k):
            yield ExtElement(coeffs, self)

    def descriptor(self):
        return {"Fp": self.p, "k": self.k}

    def __eq__(self, other):
        return (isinstance(other, ExtensionField)
                and other.p == self.p and other.k == self.k)

    def __hash__(self):
        return hash(("Fpk", self.p, self.k))

    def __repr__(self):
        return f"F_{self.p}^{self.k}"


Scalar = Union[Fraction, FpElement, ExtElement]

QQ = Rationals()

DEFAULT_PRIME = 101
SMALL_PRIME = 7  # full line enumeration in P^3 stays tractable here


def next_prime(n: int) -> int:
    n += 1
    while not _is_prime(n):
        n += 1
    return n


def field_from_descriptor(desc) -> Field:
    """Inverse of Field.descriptor(); accepts "Q" or {"Fp": p}."""
    if desc == "Q":
        return QQ
    if isinstance(desc, dict) and "Fp" in desc:
        if "k" in desc and desc["k"] != 1:
            return ExtensionField(desc["Fp"], desc["k"])
        return PrimeField(desc["Fp"])
    raise ValueError(f"unknown field descriptor {desc!r}")

import random

import pytest

from quadlines.errors import ParseError
from quadlines.fields import QQ, PrimeField
from quadlines.parsing import parse_poly

from conftest import random_form


def test_discriminant_string(Q):
    f = parse_poly("s1^2 - 4*s0*s2", Q)
    assert f.degree == 2 and f.nvars == 3 and len(f.terms) == 2
    assert f.evaluate([1, 2, 1]) == 0


def test_inhomogeneous_names_offender(Q):
    with pytest.raises(ParseError) as exc:
        parse_poly("s0 + s1^2", Q)
    assert "s0" in str(exc.value)


def test_round_trip_500_random_forms():
    """Printing then reparsing yields an identical term map."""
    rng = random.Random(7)
    for i in range(500):
        field = QQ if i % 2 else PrimeField(101)
        nvars = rng.randint(1, 5)
        degree = rng.randint(0, 3)
        f = random_form(field, nvars, degree, rng)
        if f.is_zero():
            continue
        text = f.to_string()
        g = parse_poly(text, field, nvars=nvars)
        assert g == f, text


def test_round_trip_fraction_coefficients(Q):
    from quadlines.forms import HomForm
    from fractions import Fraction
    f = HomForm(2, 2, {(2, 0): Fraction(1, 2), (0, 2): Fraction(-3, 4)}, Q)
    assert parse_poly(f.to_string(), Q, nvars=2) == f


def test_syntax_error_position():
    with pytest.raises(ParseError) as exc:
        parse_poly("t0 + @", QQ)
    assert exc.value.pos == 5


def test_rejects_parentheses():
    with pytest.raises(ParseError):
        parse_poly("(t0 + t1)^2", QQ)


def test_rejects_mixed_letters():
    with pytest.raises(ParseError):
        parse_poly("t0*s1", QQ)


def test_trailing_operator():
    with pytest.raises(ParseError):
        parse_poly("t0 +", QQ)


def test_double_star():
    with pytest.raises(ParseError):
        parse_poly("t0**2", QQ)


def test_zero_literal(Q):
    f = parse_poly("0", Q, nvars=3, degree=2)
    assert f.is_zero() and f.degree == 2


def test_explicit_nvars_bound(Q):
    with pytest.raises(ParseError):
        parse_poly("t5", Q, nvars=3)


def test_leading_minus(Q):
    f = parse_poly("-t0^2 + 2*t0*t1", Q)
    assert f.coefficient((2, 0)) == -1
    assert f.coefficient((1, 1)) == 2


def test_degree_param_enforced(Q):
    with pytest.raises(ParseError):
        parse_poly("t0*t1", Q, degree=3)


def test_fp_coefficients_reduce():
    F = PrimeField(7)
    f = parse_poly("8*t0^2", F)
    assert f.coefficient((2,)) == 1

import random

import pytest

from quadlines.fields import QQ, PrimeField
from quadlines.forms import HomForm, monomials


@pytest.fixture
def rng():
    return random.Random(20240)


@pytest.fixture
def F101():
    return PrimeField(101)


@pytest.fixture
def F7():
    return PrimeField(7)


@pytest.fixture
def Q():
    return QQ


def random_form(field, nvars, degree, rng, density=0.7):
    terms = {}
    for exp in monomials(nvars, degree):
        if rng.random() < density:
            terms[exp] = field.random(rng)
    return HomForm(nvars, degree, terms, field)


def random_point(field, n, rng):
    """A nonzero point with n+1 coordinates."""
    while True:
        pt = [field.random(rng) for _ in range(n + 1)]
        if any(pt):
            return pt

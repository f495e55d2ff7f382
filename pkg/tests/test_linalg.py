import random

import pytest

from quadlines import linalg
from quadlines.fields import QQ, PrimeField

from conftest import random_point


def _random_matrix(field, nrows, ncols, rng):
    return [[field.random(rng) for _ in range(ncols)] for _ in range(nrows)]


def test_zero_matrix_kernel(F101):
    rows = [[F101.zero()] * 3 for _ in range(2)]
    basis = linalg.kernel_basis(rows, 3, F101)
    assert len(basis) == 3


def test_identity_kernel_empty(F101):
    basis = linalg.kernel_basis(linalg.identity(4, F101), 4, F101)
    assert basis == []


def test_random_4x6_rank4_kernel(F101, rng):
    """Frozen setup: a random 4x6 matrix of rank 4 has a 2-dim kernel."""
    while True:
        rows = _random_matrix(F101, 4, 6, rng)
        if linalg.rank(rows, F101) == 4:
            break
    basis = linalg.kernel_basis(rows, 6, F101)
    assert len(basis) == 2
    for v in basis:
        assert all(not x for x in linalg.mat_vec(rows, v, F101))


@pytest.mark.parametrize("field_name", ["F101", "Q"])
def test_rank_nullity_on_random_matrices(field_name, rng):
    field = PrimeField(101) if field_name == "F101" else QQ
    for _ in range(100):
        nrows = rng.randint(1, 6)
        ncols = rng.randint(1, 6)
        rows = _random_matrix(field, nrows, ncols, rng)
        r = linalg.rank(rows, field)
        basis = linalg.kernel_basis(rows, ncols, field)
        assert r + len(basis) == ncols
        for v in basis:
            assert all(not x for x in linalg.mat_vec(rows, v, field))


def test_kernel_vectors_annihilate_exactly(Q, rng):
    rows = _random_matrix(Q, 3, 5, rng)
    for v in linalg.kernel_basis(rows, 5, Q):
        assert all(x == 0 for x in linalg.mat_vec(rows, v, Q))


def test_det_and_invertible(F101, rng):
    m = linalg.random_invertible(4, F101, rng)
    assert linalg.det(m, F101)
    m[2] = list(m[1])
    assert not linalg.det(m, F101)


def test_rref_pivots(Q):
    rows = [[Q.elem(1), Q.elem(2), Q.elem(3)],
            [Q.elem(2), Q.elem(4), Q.elem(6)]]
    red, pivots = linalg.rref(rows, Q)
    assert pivots == [0]


def test_in_span(F101, rng):
    v1 = random_point(F101, 4, rng)
    v2 = random_point(F101, 4, rng)
    combo = [a * 3 + b * 5 for a, b in zip(v1, v2)]
    assert linalg.in_span([v1, v2], combo, F101)


def test_linear_system_wrapper(F101, rng):
    rows = _random_matrix(F101, 3, 5, rng)
    sys = linalg.LinearSystem(rows, 5, F101)
    assert sys.rank() + sys.nullity() == 5
    assert len(sys.kernel_basis()) == sys.nullity()


def test_modp_path_matches_generic(rng):
    p = 101
    F = PrimeField(p)
    for _ in range(50):
        nrows = rng.randint(1, 7)
        ncols = rng.randint(1, 7)
        int_rows = [[rng.randrange(p) for _ in range(ncols)] for _ in range(nrows)]
        rows = [[F.elem(x) for x in r] for r in int_rows]
        assert linalg.modp_rank(int_rows, ncols, p) == linalg.rank(rows, F)
        kb_int = linalg.modp_kernel_basis(int_rows, ncols, p)
        kb = linalg.kernel_basis(rows, ncols, F)
        assert len(kb_int) == len(kb)
        for v in kb_int:
            assert all(sum(a * b for a, b in zip(r, v)) % p == 0 for r in int_rows)
        full = linalg.modp_has_full_column_rank(int_rows, ncols, p)
        assert full == (len(kb_int) == 0)

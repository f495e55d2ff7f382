import pytest

from quadlines import linalg
from quadlines.errors import DegenerateSpanError, NotALineError
from quadlines.fields import QQ
from quadlines.pluecker import (
    Bivector, Flag, line_in_hyperplane, lines_meet, meets_subspace,
    meets_subspace_rank, point_on_line, wedge,
)

from conftest import random_point


def _random_line(field, N, rng):
    u = random_point(field, N, rng)
    while True:
        v = random_point(field, N, rng)
        if linalg.rank([u, v], field) == 2:
            return wedge(u, v, field), u, v


def test_wedge_basis_vectors(Q):
    B = wedge([1, 0, 0, 0], [0, 1, 0, 0], Q)
    assert B.entry(0, 1) == 1 and B.entry(1, 0) == -1
    assert all(not B.entry(i, j) for i, j in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def test_wedge_antisymmetric_in_arguments(Q):
    u, v = [1, 2, 3, 4], [4, 3, 2, 1]
    B1, B2 = wedge(u, v, Q), wedge(v, u, Q)
    assert all(B1.entry(i, j) == -B2.entry(i, j)
               for i in range(4) for j in range(4))


def test_wedge_of_cubic_points_satisfies_pfaffians(Q):
    a, b = 2, 3
    u = [1, a, a * a, a ** 3]
    v = [1, b, b * b, b ** 3]
    B = wedge(u, v, Q)
    assert B.is_decomposable()


def test_wedge_rejects_proportional(Q):
    with pytest.raises(DegenerateSpanError):
        wedge([1, 2, 0], [2, 4, 0], Q)


def test_rank4_bivector_not_decomposable(Q):
    B = Bivector.from_upper({(0, 1): 1, (2, 3): 1}, 3, Q)
    assert not B.is_decomposable()
    assert B.matrix_rank() == 4


def test_decomposable_iff_rank_two(F101, rng):
    """Pfaffian test against the independent matrix-rank oracle."""
    for _ in range(40):
        B, u, v = _random_line(F101, 4, rng)
        assert B.is_decomposable() and B.matrix_rank() == 2
        # rank-2 update: add a multiple of another wedge
        C, _, _ = _random_line(F101, 4, rng)
        mixed = Bivector([[a + b for a, b in zip(r1, r2)]
                          for r1, r2 in zip(B.mat, C.mat)], F101)
        if mixed.is_zero():
            continue
        assert mixed.is_decomposable() == (mixed.matrix_rank() <= 2)


def test_wedge_column_space_is_span(F101, rng):
    B, u, v = _random_line(F101, 5, rng)
    cols = [c for c in B.columns() if any(c)]
    assert linalg.rank(cols, F101) == 2
    for c in cols:
        assert linalg.in_span([u, v], c, F101)


def test_point_on_line_columns(F101, rng):
    B, u, v = _random_line(F101, 4, rng)
    for c in B.columns():
        if any(c):
            assert point_on_line(c, B)


def test_point_on_line_generic_false_and_rank_oracle(F101, rng):
    for _ in range(30):
        B, u, v = _random_line(F101, 4, rng)
        x = random_point(F101, 4, rng)
        claim = point_on_line(x, B)
        cols = [c for c in B.columns() if any(c)]
        oracle = linalg.rank(cols + [x], F101) == linalg.rank(cols, F101)
        assert claim == oracle


def test_point_on_line_requires_line(Q):
    B = Bivector.from_upper({(0, 1): 1, (2, 3): 1}, 3, Q)
    with pytest.raises(NotALineError):
        point_on_line([1, 0, 0, 0], B)


def test_point_not_on_coordinate_line(Q):
    B = wedge([1, 0, 0], [0, 1, 0], Q)
    assert not point_on_line([0, 0, 1], B)


def test_line_in_hyperplane_cases(Q):
    B = wedge([1, 0, 0], [0, 1, 0], Q)
    assert line_in_hyperplane([0, 0, 1], B)
    assert not line_in_hyperplane([1, 0, 0], B)


def test_line_in_hyperplane_iff_both_points(F101, rng):
    for _ in range(20):
        B, u, v = _random_line(F101, 4, rng)
        H = random_point(F101, 4, rng)
        hu = sum((a * b for a, b in zip(H, u)), F101.zero())
        hv = sum((a * b for a, b in zip(H, v)), F101.zero())
        assert line_in_hyperplane(H, B) == (not hu and not hv)


def test_constructed_line_in_constructed_hyperplane(F101, rng):
    # hyperplane through both spanning points
    for _ in range(10):
        B, u, v = _random_line(F101, 4, rng)
        H = linalg.kernel_basis([u, v], 5, F101)[0]
        assert line_in_hyperplane(H, B)


def test_meets_subspace_containing_point(F101, rng):
    B, u, v = _random_line(F101, 4, rng)
    A = [u, random_point(F101, 4, rng)]
    assert meets_subspace(B, A)


def test_meets_subspace_generic_point_false(F101, rng):
    B, _, _ = _random_line(F101, 3, rng)
    A = [random_point(F101, 3, rng)]
    assert meets_subspace(B, A) == meets_subspace_rank(B, A)


def test_meets_subspace_rank_oracle_200(F101, rng):
    for _ in range(200):
        N = rng.choice([3, 4, 5])
        B, _, _ = _random_line(F101, N, rng)
        k = rng.randint(1, N - 1)
        A = [random_point(F101, N, rng) for _ in range(k)]
        if linalg.rank(A, F101) < k:
            continue
        assert meets_subspace(B, A) == meets_subspace_rank(B, A)


def test_lines_meet_rank_oracle(F101, rng):
    for _ in range(50):
        B1, u1, v1 = _random_line(F101, 4, rng)
        if rng.random() < 0.5:
            B2, _, _ = _random_line(F101, 4, rng)
        else:
            w = random_point(F101, 4, rng)
            if linalg.rank([u1, w], F101) < 2:
                continue
            B2 = wedge(u1, w, F101)  # shares the point u1
        _, u2, v2 = B2, *B2.two_points()
        oracle = linalg.rank([u1, v1, u2, v2], F101) <= 3
        assert lines_meet(B1, B2) == oracle


def test_flag_nesting_validated(Q):
    with pytest.raises(ValueError):
        Flag(center=[[1, 0, 0, 0]], container=[[0, 1, 0, 0], [0, 0, 1, 0]],
             field=Q)
    Flag(center=[[0, 1, 0, 0]], container=[[0, 1, 0, 0], [0, 0, 1, 0]], field=Q)


def test_proportional(F101, rng):
    B, u, v = _random_line(F101, 4, rng)
    assert B.proportional(B.scale(F101.elem(17)))
    C, _, _ = _random_line(F101, 4, rng)
    if not B.proportional(C):
        assert not C.proportional(B)

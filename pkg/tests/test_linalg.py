from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sullivan import linalg
from sullivan.linalg import SparseMatrix, kernel_basis, rank, solve_in_span

from strategies import int_matrices


def dense_rank(rows):
    """Textbook Gaussian elimination over Fractions, used as an oracle."""
    m = [[Fraction(x) for x in r] for r in rows]
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def test_empty_matrix_has_rank_zero():
    assert rank(SparseMatrix(0, 0)) == 0


def test_identity_rank():
    assert rank(SparseMatrix.identity(2)) == 2


def test_degree_eight_slice_is_full_rank():
    rows = [(1, 1, 1, 0, 0), (0, 1, 1, 1, 0), (0, 0, 1, 1, 1), (0, 1, 1, 0, 0), (0, 0, 1, 1, 0)]
    assert rank(SparseMatrix.from_rows(rows)) == 5


def test_kernel_of_identity_is_empty():
    assert kernel_basis(SparseMatrix.identity(3)) == []


def test_kernel_of_zero_matrix():
    assert len(kernel_basis(SparseMatrix(2, 3))) == 3


def test_kernel_of_all_ones_row():
    m = SparseMatrix.from_rows([(1, 1, 1)])
    basis = kernel_basis(m)
    assert len(basis) == 2
    for v in basis:
        assert sum(v) == 0


def test_solve_examples():
    assert solve_in_span([[1, 0]], [2, 0]) == [2]
    assert solve_in_span([[1, 0]], [0, 1]) is None
    span = [[1, 1, 1, 0, 0], [0, 1, 1, 1, 0]]
    assert solve_in_span(span, [1, 0, 0, -1, 0]) == [1, -1]


def test_solve_rejects_length_mismatch():
    with pytest.raises(ValueError):
        solve_in_span([[1, 0]], [1, 0, 0])


def test_rational_entries():
    m = SparseMatrix.from_rows([(Fraction(1, 2), Fraction(1, 3)), (Fraction(3, 2), 1)])
    assert rank(m) == 1


def test_row_space_dimension():
    rs = linalg.RowSpace(3)
    assert rs.add({0: Fraction(1), 1: Fraction(2)})
    assert not rs.add({0: Fraction(2), 1: Fraction(4)})
    assert rs.contains({0: Fraction(-1), 1: Fraction(-2)})
    assert rs.dimension == 1


@settings(max_examples=300)
@given(int_matrices())
def test_rank_matches_dense_oracle(data):
    rows, ncols = data
    m = SparseMatrix.from_rows(rows, ncols)
    assert rank(m) == dense_rank(rows)


@settings(max_examples=300)
@given(int_matrices())
def test_rank_of_transpose(data):
    rows, ncols = data
    m = SparseMatrix.from_rows(rows, ncols)
    assert rank(m) == rank(m.transpose())


@settings(max_examples=300)
@given(int_matrices())
def test_rank_nullity(data):
    rows, ncols = data
    m = SparseMatrix.from_rows(rows, ncols)
    kernel = kernel_basis(m)
    assert rank(m) + len(kernel) == ncols
    for v in kernel:
        for r in rows:
            assert sum(Fraction(a) * b for a, b in zip(r, v)) == 0


@settings(max_examples=300)
@given(int_matrices(max_cols=6), st.data())
def test_solve_recombines_target(data, draw):
    rows, ncols = data
    if not rows:
        return
    coeffs = draw.draw(st.lists(st.integers(-3, 3), min_size=len(rows), max_size=len(rows)))
    target = [sum(c * r[j] for c, r in zip(coeffs, rows)) for j in range(ncols)]
    sol = solve_in_span(rows, target)
    assert sol is not None
    assert [sum(c * r[j] for c, r in zip(sol, rows)) for j in range(ncols)] == target

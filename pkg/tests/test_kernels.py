import random

import pytest
from hypothesis import given, settings

from sullivan import linalg
from sullivan.cdga import differential_matrix
from sullivan.linalg import SparseMatrix
from sullivan.models import homogeneous_space_model

from strategies import int_matrices

compiled = pytest.mark.skipif(linalg.BACKEND != "compiled", reason="extension not built")


def test_python_backend_always_available():
    assert linalg.rank(SparseMatrix.identity(4), backend="python") == 4


def test_unknown_backend():
    with pytest.raises(ValueError):
        linalg.rank(SparseMatrix.identity(1), backend="fortran")


@compiled
@settings(max_examples=300)
@given(int_matrices(max_rows=9, max_cols=9, lo=-50, hi=50))
def test_backends_agree(data):
    rows, ncols = data
    m = SparseMatrix.from_rows(rows, ncols)
    assert linalg.rank(m, backend="python") == linalg.rank(m, backend="compiled")


@compiled
def test_overflow_falls_back_to_big_integers():
    rng = random.Random(7)
    for _ in range(20):
        rows = [[rng.randint(-10**12, 10**12) for _ in range(8)] for _ in range(8)]
        m = SparseMatrix.from_rows(rows)
        assert linalg.rank(m) == linalg.rank(m, backend="python") == 8


@compiled
def test_kernel_raises_overflow_directly():
    from sullivan import _kernels

    rows = [{0: 2**62, 1: 3}, {0: 3, 1: 2**62}]
    with pytest.raises(OverflowError):
        _kernels.rank_int64(rows, 2)


@compiled
def test_backends_agree_on_model_matrices():
    c = homogeneous_space_model((1, 1, 3))
    for d in range(14):
        m = differential_matrix(c, d)
        assert linalg.rank(m, backend="python") == linalg.rank(m, backend="compiled")

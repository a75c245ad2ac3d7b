"""Hypothesis strategies for random elements and matrices."""

from fractions import Fraction

from hypothesis import strategies as st

from sullivan.algebra import GradedAlgebra

# a mixed algebra: three even and three odd generators
MIXED = GradedAlgebra([("a2", 2), ("b2", 2), ("w4", 4), ("u1", 1), ("v3", 3), ("t5", 5)])

coefficients = st.one_of(
    st.integers(-6, 6).map(Fraction),
    st.builds(Fraction, st.integers(-5, 5), st.integers(1, 4)),
)


@st.composite
def homogeneous_elements(draw, algebra=MIXED, max_degree=8, degree=None):
    d = draw(st.integers(0, max_degree)) if degree is None else degree
    basis = algebra.basis_of_degree(d)
    if not basis:
        return algebra.zero()
    picks = draw(st.lists(st.sampled_from(basis), max_size=4, unique=True))
    terms = {m: draw(coefficients) for m in picks}
    e = algebra.zero()
    for m, c in terms.items():
        e = e + algebra.monomial(m, c)
    return e


@st.composite
def elements(draw, algebra=MIXED, max_degree=8):
    parts = draw(st.lists(homogeneous_elements(algebra, max_degree), max_size=3))
    return sum(parts, algebra.zero())


@st.composite
def int_matrices(draw, max_rows=7, max_cols=7, lo=-4, hi=4):
    nrows = draw(st.integers(0, max_rows))
    ncols = draw(st.integers(0, max_cols))
    cell = st.one_of(st.just(0), st.just(0), st.integers(lo, hi))
    return [[draw(cell) for _ in range(ncols)] for _ in range(nrows)], ncols

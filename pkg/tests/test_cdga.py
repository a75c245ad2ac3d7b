import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sullivan.algebra import GradedAlgebra
from sullivan.cdga import (
    CdgaMorphism,
    DifferentialError,
    FreeCdga,
    betti,
    check_d_squared,
    check_morphism,
    cochain_euler,
    compose,
    differential_matrix,
    identity_morphism,
    induced_cohomology_map,
    is_coboundary,
    is_isomorphism,
    is_minimal,
    is_pure,
)
from sullivan.linalg import rank
from sullivan.models import (
    homogeneous_space_model,
    minimal_flag_model,
    model_cpn,
    paper_morphism_f,
    projectivized_tangent_model,
)

from strategies import homogeneous_elements


def corrupted_model():
    # dv3 = a3·v1 with dv1 = t2, so d(dv3) = -a3·t2
    alg = GradedAlgebra([("t2", 2), ("a3", 3), ("v1", 1), ("v3", 3)])
    a3, v1 = alg.gens("a3", "v1")
    return FreeCdga(alg, {"v1": alg.gen("t2"), "v3": a3 * v1}, check=False)


def test_apply_d_on_cpn():
    c = model_cpn(2)
    y2, y5 = c.algebra.gens("y2", "y5")
    assert c.apply_d(y2 * y5) == y2**4


def test_product_of_closed_generators_is_closed():
    c = minimal_flag_model(3)
    a, b = c.algebra.gens("a2", "b2")
    assert c.apply_d(a * b**2).is_zero()


def test_apply_d_on_product_of_odd_generators():
    c = minimal_flag_model(2)
    a, b, v3, v5 = c.algebra.gens("a2", "b2", "v3", "v5")
    expected = -(a**2 + a * b + b**2) * v5 + (a**2 * b + a * b**2) * v3
    assert c.apply_d(v3 * v5) == expected


@pytest.mark.parametrize("n", range(2, 9))
def test_cpn_d_squared(n):
    assert check_d_squared(model_cpn(n))


@pytest.mark.parametrize("n", range(2, 6))
def test_homogeneous_space_d_squared(n):
    assert check_d_squared(homogeneous_space_model((1, 1, n - 1)))


def test_corrupted_model_is_caught():
    report = check_d_squared(corrupted_model())
    assert not report
    assert report.witnesses == ["v3"]
    with pytest.raises(DifferentialError):
        FreeCdga(corrupted_model().algebra, corrupted_model().differential)


def test_inhomogeneous_differential_rejected():
    alg = GradedAlgebra([("a2", 2), ("v3", 3)])
    with pytest.raises(DifferentialError):
        FreeCdga(alg, {"v3": alg.gen("a2")})


def test_differential_matrix_examples():
    m = differential_matrix(model_cpn(2), 5)
    assert m.shape == (1, 1)
    assert m.to_dense() == [[1]]
    z = differential_matrix(minimal_flag_model(2), 0)
    assert z.nrows == 1 and not z.entries
    f = differential_matrix(minimal_flag_model(2), 3)
    assert f.shape == (1, 3)
    assert f.to_dense() == [[-1, -1, -1]]


def test_betti_examples():
    assert list(betti(model_cpn(2), 6)) == [1, 0, 1, 0, 1, 0, 0]
    assert list(betti(projectivized_tangent_model(2), 6)) == [1, 0, 2, 0, 2, 0, 1]
    assert list(betti(minimal_flag_model(2), 6)) == [1, 0, 2, 0, 2, 0, 1]


def test_betti_table_access():
    t = betti(model_cpn(2), 6)
    assert t.bound == 6 and t.total() == 3 and t.euler() == 3
    with pytest.raises(KeyError):
        t[7]


MODELS = [model_cpn(3), minimal_flag_model(3), projectivized_tangent_model(2), homogeneous_space_model((1, 2))]


@pytest.mark.parametrize("c", MODELS, ids=["cpn3", "flagmin3", "ptangent2", "hs12"])
def test_rank_nullity_per_degree(c):
    bound = 10
    b = betti(c, bound)
    for d in range(bound + 1):
        dim = len(c.algebra.basis_of_degree(d))
        r_out = rank(differential_matrix(c, d))
        r_in = rank(differential_matrix(c, d - 1)) if d else 0
        assert b[d] == dim - r_out - r_in


@pytest.mark.parametrize("c", MODELS, ids=["cpn3", "flagmin3", "ptangent2", "hs12"])
def test_truncated_euler_identity(c):
    # Σ(-1)^d dim C^d = Σ(-1)^d b_d  +  (-1)^N rank(d: C^N → C^{N+1})
    N = 9
    b = betti(c, N)
    correction = (-1) ** N * rank(differential_matrix(c, N))
    assert cochain_euler(c, N) == b.euler() + correction


@settings(max_examples=300)
@given(st.sampled_from(range(len(MODELS))), st.data())
def test_leibniz(i, data):
    c = MODELS[i]
    x = data.draw(homogeneous_elements(c.algebra, max_degree=8))
    y = data.draw(homogeneous_elements(c.algebra, max_degree=8))
    p = x.homogeneous_degree() or 0
    assert c.apply_d(x * y) == c.apply_d(x) * y + (-1) ** p * x * c.apply_d(y)


def test_identity_morphism():
    c = minimal_flag_model(3)
    idm = identity_morphism(c)
    assert check_morphism(idm)
    assert is_isomorphism(idm)
    cm = induced_cohomology_map(idm, 10)
    assert cm.quasi_isomorphism
    for k, mat in cm.matrices.items():
        assert mat == [[int(i == j) for j in range(len(mat))] for i in range(len(mat))]


@pytest.mark.parametrize("n", range(2, 6))
def test_flipped_top_sign_fails(n):
    f = paper_morphism_f(n)
    top = f"v{2 * n + 1}"
    good = check_morphism(f)
    images = dict(f.images)
    y2, xo, yo = f.target.algebra.gens("y2", f"x{2 * n - 1}", f"y{2 * n + 1}")
    s = (-1) ** (n + 1)
    flipped = s * (y2 * xo + yo)
    images[top] = flipped
    report = check_morphism(CdgaMorphism(f.source, f.target, images))
    assert not report and report.witnesses == [top]
    assert good.passed != (n % 2 == 0)


def test_cpn_to_flag_is_not_a_morphism():
    m = CdgaMorphism(model_cpn(2), minimal_flag_model(2), {"y2": "a2", "y5": "0"})
    assert not check_morphism(m)
    with pytest.raises(ValueError):
        is_isomorphism(m)


def test_degree_mismatch_is_a_failure():
    m = CdgaMorphism(model_cpn(2), minimal_flag_model(2), {"y2": "a2^2", "y5": "0"})
    report = check_morphism(m)
    assert not report and "y2" in report.witnesses


def test_inclusion_is_not_quasi_isomorphism():
    sub = FreeCdga([("a2", 2)], {})
    inc = CdgaMorphism(sub, minimal_flag_model(2), {"a2": "a2"})
    assert check_morphism(inc)
    cm = induced_cohomology_map(inc, 6)
    assert not cm.quasi_isomorphism
    assert 2 in cm.failing_degrees


def test_compose_with_identity():
    f = paper_morphism_f(3)
    g = compose(identity_morphism(f.target), f)
    assert g.images == f.images


def test_is_pure_examples():
    assert is_pure(projectivized_tangent_model(3))
    assert is_pure(model_cpn(4))
    assert not is_pure(corrupted_model())


def test_minimality():
    assert is_minimal(minimal_flag_model(3))
    assert not is_minimal(homogeneous_space_model((1, 1, 1)))


def test_coboundary_detection():
    c = minimal_flag_model(2)
    a, b = c.algebra.gens("a2", "b2")
    assert is_coboundary(c, a**2 + a * b + b**2)
    assert not is_coboundary(c, a**2)

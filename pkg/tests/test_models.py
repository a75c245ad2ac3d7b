from math import comb

import pytest

from sullivan.algebra import GradedAlgebra
from sullivan.cdga import (
    FreeCdga,
    betti,
    check_d_squared,
    check_morphism,
    induced_cohomology_map,
    is_isomorphism,
    is_pure,
)
from sullivan.expr_io import parse_element
from sullivan.models import (
    BlockPartition,
    ChernData,
    builtin_model,
    chern_classes_tangent_cpn,
    corrected_morphism_f,
    homogeneous_space_model,
    minimal_flag_model,
    model_cpn,
    paper_morphism_f,
    projectivization_model,
    projectivized_tangent_model,
    verify_chern_normalization,
)


def p(src, c):
    return parse_element(src, c.algebra)


def test_cpn_two():
    c = model_cpn(2)
    assert c.d("y5") == p("y2^3", c)


def test_cpn_rejects_zero():
    with pytest.raises(ValueError):
        model_cpn(0)


@pytest.mark.parametrize("n, expected", [(2, [3, 3]), (3, [4, 6, 4])])
def test_chern_classes(n, expected):
    data = chern_classes_tangent_cpn(n)
    y2 = data.base.gen("y2")
    assert list(data.cocycles) == [k * y2**i for i, k in enumerate(expected, 1)]
    assert all(data.base.apply_d(c).is_zero() for c in data.cocycles)


def test_chern_data_validation():
    base = model_cpn(2)
    with pytest.raises(ValueError):
        ChernData(base, (base.gen("y2") ** 2,))
    with pytest.raises(ValueError):
        ChernData(base, (base.gen("y5"),))


def test_projectivization_of_tangent_bundle():
    c = projectivization_model(chern_classes_tangent_cpn(2))
    assert c.d("x3") == p("x2^2 + 3*y2*x2 + 3*y2^2", c)
    assert list(betti(c, 6)) == [1, 0, 2, 0, 2, 0, 1]


def test_trivial_bundle_projectivization():
    base = model_cpn(3)
    zero = base.algebra.zero()
    c = projectivization_model(ChernData(base, (zero, zero, zero)))
    assert c.d("x5") == p("x2^3", c)
    # product of CP^2 and CP^3
    assert betti(c, 12).total() == 12


def test_projectivized_tangent_examples():
    assert projectivized_tangent_model(2).d("x3") == p("x2^2 + x2*y2 + y2^2", projectivized_tangent_model(2))
    c3 = projectivized_tangent_model(3)
    assert c3.d("x5") == p("x2^3 + x2^2*y2 + x2*y2^2 + y2^3", c3)
    assert is_pure(c3)


@pytest.mark.parametrize("n", [2, 3, 8])
def test_chern_normalization(n):
    assert verify_chern_normalization(n)


def test_chern_normalization_identity_by_closed_form():
    # Σ C(n+1,i) y^i x^{n-i} = ((x+y)^{n+1} - y^{n+1}) / x, then x ↦ x - y
    alg = GradedAlgebra([("x2", 2), ("y2", 2)])
    x, y = alg.gens("x2", "y2")
    for n in range(2, 9):
        chern_form = sum((comb(n + 1, i) * y**i * x ** (n - i) for i in range(n + 1)), alg.zero())
        assert chern_form * x == (x + y) ** (n + 1) - y ** (n + 1)


def test_flag_big_n2():
    c = homogeneous_space_model((1, 1, 1))
    assert c.d("v1") == p("a2 + b2 + z2", c)
    assert c.d("v3") == p("a2*b2 + (a2 + b2)*z2", c)
    assert c.d("v5") == p("a2*b2*z2", c)


def test_flag_big_n3_top():
    c = homogeneous_space_model((1, 1, 2))
    assert c.d("v7") == p("a2*b2*z4", c)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_point_partition(m):
    c = homogeneous_space_model((m,))
    for k in range(1, m + 1):
        assert c.d(f"v{2 * k - 1}") == c.gen(f"z{2 * k}")
    assert list(betti(c, 2 * m + 2)) == [1] + [0] * (2 * m + 2)


def test_general_partition_naming():
    c = homogeneous_space_model((2, 1, 2))
    names = {g.name for g in c.generators}
    assert {"a2", "a4", "b2", "z2", "z4"} <= names
    assert check_d_squared(c)


def test_invalid_partition():
    with pytest.raises(ValueError):
        BlockPartition((1, 0))
    with pytest.raises(ValueError):
        homogeneous_space_model((1,))


def test_minimal_flag_examples():
    c2 = minimal_flag_model(2)
    assert c2.d("v3") == p("-(a2^2 + a2*b2 + b2^2)", c2)
    assert c2.d("v5") == p("-(a2^2*b2 + a2*b2^2)", c2)
    c3 = minimal_flag_model(3)
    assert c3.d("v5") == p("a2^3 + a2^2*b2 + a2*b2^2 + b2^3", c3)
    assert c3.d("v7") == p("a2^3*b2 + a2^2*b2^2 + a2*b2^3", c3)
    with pytest.raises(ValueError):
        minimal_flag_model(1)


@pytest.mark.parametrize("n", range(2, 7))
def test_published_morphism_sign_depends_on_parity(n):
    f = paper_morphism_f(n)
    report = check_morphism(f)
    if n % 2:
        assert report
        assert is_isomorphism(f)
    else:
        # the published image of the top generator has the wrong sign for even n
        assert not report
        assert report.witnesses == [f"v{2 * n + 1}"]


@pytest.mark.parametrize("n", range(2, 7))
def test_corrected_morphism(n):
    f = corrected_morphism_f(n)
    assert check_morphism(f)
    assert is_isomorphism(f)
    assert induced_cohomology_map(f, 4 * n).quasi_isomorphism
    if n % 2:
        assert f.images == paper_morphism_f(n).images


def test_builtin_names():
    for name in ("cpn", "ptangent", "flag-min", "flag-big"):
        assert isinstance(builtin_model(name, 3), FreeCdga)
    with pytest.raises(ValueError):
        builtin_model("torus", 2)

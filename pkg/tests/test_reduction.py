import pytest

from sullivan.algebra import GradedAlgebra
from sullivan.cdga import FreeCdga, betti, check_morphism, is_isomorphism, is_minimal
from sullivan.expr_io import parse_element
from sullivan.models import homogeneous_space_model, minimal_flag_model, model_cpn
from sullivan.reduction import (
    ReductionError,
    certify_reduction,
    eliminate,
    find_contractible_pair,
    match_models,
    minimize,
)


def test_first_pair_picks_z2():
    u, t, coeff = find_contractible_pair(homogeneous_space_model((1, 1, 1)))
    assert (u.name, t.name, coeff) == ("v1", "z2", 1)


@pytest.mark.parametrize("c", [minimal_flag_model(3), model_cpn(3)], ids=["flag-min", "cpn"])
def test_no_pair_in_minimal_models(c):
    assert find_contractible_pair(c) is None


def test_n2_cascade():
    big = homogeneous_space_model((1, 1, 1))
    reduced, step, proj = eliminate(big, "v1", "z2")
    a, b = reduced.algebra.gens("a2", "b2")
    assert reduced.d("v3") == a * b - (a + b) ** 2
    assert reduced.d("v5") == -a * b * (a + b)
    assert step.substitution == -(a + b)
    assert check_morphism(proj)
    assert find_contractible_pair(reduced) is None
    assert reduced == minimal_flag_model(2)


def test_ineligible_pair_rejected():
    alg = GradedAlgebra([("t2", 2), ("u1", 1), ("w1", 1)])
    c = FreeCdga(alg, {"u1": "t2", "w1": "t2"})
    with pytest.raises(ReductionError):
        eliminate(c, "u1", "w1")
    alg2 = GradedAlgebra([("t4", 4), ("s2", 2), ("u3", 3)])
    c2 = FreeCdga(alg2, {"u3": "t4 + s2*s2"})
    assert eliminate(c2, "u3", "t4")[0].generators


def test_remainder_involving_u_is_not_eligible():
    alg = GradedAlgebra([("t4", 4), ("w1", 1), ("u3", 3)])
    c = FreeCdga(alg, {"u3": "t4 + u3*w1"}, check=False)
    with pytest.raises(ReductionError):
        eliminate(c, "u3", "t4")
    assert find_contractible_pair(c) is None


@pytest.mark.parametrize("n", range(2, 6))
def test_cascade_degrees_and_certificate(n):
    big = homogeneous_space_model((1, 1, n - 1))
    result = minimize(big, up_to=4 * n - 2)
    assert len(result.steps) == n - 1
    assert sorted(g.degree for g in result.model.generators) == [2, 2, 2 * n - 1, 2 * n + 1]
    assert is_minimal(result.model)
    assert check_morphism(result.projection)


@pytest.mark.parametrize("n", range(2, 6))
def test_each_step_preserves_betti(n):
    current = homogeneous_space_model((1, 1, n - 1))
    bound = 4 * n
    before = betti(current, bound)
    while (pair := find_contractible_pair(current)) is not None:
        current, _, _ = eliminate(current, pair[0], pair[1])
        assert betti(current, bound) == before


@pytest.mark.parametrize("n", range(2, 6))
def test_cascade_matches_closed_form(n):
    reduced = minimize(homogeneous_space_model((1, 1, n - 1))).model
    target = minimal_flag_model(n)
    m = match_models(reduced, target)
    assert check_morphism(m)
    assert is_isomorphism(m)


def test_minimal_input_is_untouched():
    c = minimal_flag_model(4)
    result = minimize(c)
    assert result.steps == []
    assert result.model == c
    assert all(result.projection.images[g.name] == c.gen(g.name) for g in c.generators)


def test_point_reduces_to_nothing():
    result = minimize(homogeneous_space_model((3,)))
    assert result.model.generators == ()
    assert list(betti(result.model, 6)) == [1, 0, 0, 0, 0, 0, 0]


def test_max_steps_exhausted():
    with pytest.raises(ReductionError):
        minimize(homogeneous_space_model((1, 1, 3)), max_steps=1)


def test_certify_examples():
    assert certify_reduction(homogeneous_space_model((1, 1, 2)), minimal_flag_model(3), 10)
    report = certify_reduction(model_cpn(2), minimal_flag_model(2), 6)
    assert not report and "2" in report.witnesses
    c = minimal_flag_model(2)
    assert certify_reduction(c, c, 9)


def test_step_description():
    step = minimize(homogeneous_space_model((1, 1, 1))).steps[0]
    assert step.describe() == "kill (v1, z2): z2 = -a2 - b2"
    assert not step.substitution.involves("z2") and not step.substitution.involves("v1")
    assert step.substitution == parse_element("-a2 - b2", step.substitution.algebra)

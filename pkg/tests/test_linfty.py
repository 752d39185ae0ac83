"""Generalised Jacobi identity on fixtures and on broken sl2 variants."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from linfrep.core.errors import DegreeError, ShapeMismatchError
from linfrep.core.graded import GradedSpace, TensorSpace, exterior_basis
from linfrep.core.linfty import (
    LInfinityAlgebra, SkewMultiMap, bracket_from_table, check_jacobi, degree_pruning, direct_sum, jacobi_residual,
    low_arity_report,
)
from linfrep.services import fixtures as fx

ALPHAS = [-2, -1, 0, 1, 3, 4, Fraction(1, 2), Fraction(5, 2), Fraction(3, 2), 6]


def sl2_variant(alpha=2, beta=2, lam=1, arity_cap=3) -> LInfinityAlgebra:
    """sl2 with ℓ²(h,e) = αe, ℓ²(h,f) = -βf and ℓ²(e,f) = λh."""
    space = fx.sl2_space()
    table = {("h", "e"): {"e": alpha}, ("h", "f"): {"f": -beta}, ("e", "f"): {"h": lam}}
    return LInfinityAlgebra("sl2_variant", space, {2: bracket_from_table(space, 2, table)}, arity_cap)


@pytest.mark.parametrize("name", ["abelian", "sl2", "dgla", "string_lie2", "sl2_central", "heisenberg"])
def test_fixtures_satisfy_jacobi(name):
    report = check_jacobi(fx.FixtureRegistry.get_fixture(name)())
    assert report.passed, report.witness.describe()
    assert report.routes_agree
    assert report.checked_arities == [1, 2, 3, 4]
    assert report.witness is None


@pytest.mark.parametrize("alpha", ALPHAS)
def test_mutated_weight_of_e_breaks_jacobi(alpha):
    report = check_jacobi(sl2_variant(alpha=alpha))
    assert not report.passed
    assert report.routes_agree
    assert not report.holds_at(3)
    assert report.witness.arity == 3
    assert report.witness.key == ("e", "f", "h")


@pytest.mark.parametrize("beta", ALPHAS)
def test_mutated_weight_of_f_breaks_jacobi(beta):
    report = check_jacobi(sl2_variant(beta=beta))
    assert not report.passed
    assert report.routes_agree
    assert report.witness.arity == 3


def test_rescaled_ef_bracket_is_still_a_lie_algebra():
    """[e,f] = 2h is isomorphic to sl2 via e ↦ 2e."""
    report = check_jacobi(sl2_variant(lam=2))
    assert report.passed
    assert report.routes_agree


def test_bracket_table_accepts_any_ordering(sl2):
    ell2 = sl2.bracket(2)
    assert ell2.evaluate(("h", "e")) == {("e",): 2}
    assert ell2.evaluate(("e", "h")) == {("e",): -2}
    assert ell2.evaluate(("e", "e")) == {}


def test_degree_inconsistent_bracket_is_rejected():
    space = GradedSpace.from_basis("bad", [("a", 1), ("b", 1)])
    with pytest.raises(DegreeError):
        bracket_from_table(space, 2, {("a", "b"): {"a": 1}})


def test_curvature_is_rejected(sl2):
    with pytest.raises(ShapeMismatchError):
        LInfinityAlgebra("curved", sl2.space, {0: sl2.bracket(2)})


def test_degree_pruning_on_sl2():
    assert degree_pruning(fx.sl2(4)) == [1, 3, 4]


def test_arity_cap_hides_higher_brackets(string_lie2):
    capped = string_lie2.with_cap(2)
    assert capped.bracket(3) is None
    assert check_jacobi(capped).checked_arities == [1, 2]


def test_low_arity_relations_of_dgla(dgla):
    report = low_arity_report(dgla)
    assert report.differential
    assert report.cochain_bracket
    assert report.jacobi_up_to_homotopy
    assert report.has_differential
    assert not report.has_jacobiator


def test_direct_sum_with_abelian_stays_valid(sl2, heisenberg):
    total = direct_sum(sl2, heisenberg)
    assert total.space.dim == 6
    assert check_jacobi(total.with_cap(3)).passed


# ============================================================================
# Filtration by arity
# ============================================================================

def perturbed_bracket(alg, arity, key, target, coeff):
    existing = alg.brackets.get(arity)
    g = TensorSpace((alg.space,))
    comp = existing.scaled(1) if existing is not None else SkewMultiMap(alg.space, arity, TensorSpace(), g, 2 - arity)
    comp.add(key, (), {(target,): coeff})
    return alg.with_bracket(arity, comp)


@settings(max_examples=80, deadline=None)
@given(data=st.data(), name=st.sampled_from(["sl2", "dgla", "string_lie2", "heisenberg"]))
def test_perturbing_a_bracket_leaves_lower_arities_alone(data, name):
    alg = fx.FixtureRegistry.get_fixture(name)(4)
    g = alg.space
    options = [(m, x, y) for m in range(1, 5) for x in exterior_basis(g, m) for y in g.labels
               if g.degree_of(y) == sum(g.degree_of(a) for a in x) + 2 - m]
    m, x, y = data.draw(st.sampled_from(options))
    coeff = Fraction(data.draw(st.sampled_from([-1, 1, 2])))
    perturbed = perturbed_bracket(alg, m, x, y, coeff)
    for i in range(1, m):
        assert jacobi_residual(perturbed, i) == jacobi_residual(alg, i)


@settings(max_examples=30, deadline=None)
@given(name=st.sampled_from(["sl2", "dgla", "string_lie2", "heisenberg"]), cap=st.integers(1, 4))
def test_truncation_keeps_lower_residuals(name, cap):
    alg = fx.FixtureRegistry.get_fixture(name)(4)
    truncated = alg.with_cap(cap)
    assert check_jacobi(truncated).checked_arities == list(range(1, cap + 1))
    for i in range(1, cap + 1):
        assert jacobi_residual(truncated, i) == jacobi_residual(alg, i)

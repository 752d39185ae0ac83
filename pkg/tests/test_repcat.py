"""Representations, intertwiners and the Rep(g) axiom suites."""

from fractions import Fraction

import pytest

from linfrep.core.config import SessionConfig
from linfrep.core.errors import DegreeError, SpaceMismatchError
from linfrep.core.graded import TensorSpace
from linfrep.core.repcat import (
    Representation, adjoint_rep, ell_U, gamma, hom_differential, identity_intertwiner, is_equivariant,
    is_representation, juxtapose, lambda_of, lambda_rep, odot, tensor_rep, trivial_rep, varrho_of, varrho_rep,
    zero_intertwiner,
)
from linfrep.services import fixtures as fx
from linfrep.services.axioms import (
    SUITES, AxiomInstance, fixture_pool, monoidal_pair_verdicts, pseudonatural_verdicts, random_instance,
    representation_corpus, representation_routes, run_axiom_suite,
)
from linfrep.services.generator import InstanceGenerator
from linfrep.utils.suite_config import SuiteConfigManager


@pytest.mark.parametrize("name", ["abelian", "sl2", "dgla", "string_lie2", "sl2_central", "heisenberg"])
def test_adjoint_modules_are_representations(name):
    report = is_representation(adjoint_rep(fx.FixtureRegistry.get_fixture(name)()))
    assert report.passed
    assert report.routes_agree
    assert report.witness is None


def test_fundamental_module(sl2_fundamental):
    report = sl2_fundamental.verify()
    assert report.passed
    assert report.routes_agree
    assert sl2_fundamental.verified


def test_wrong_weight_breaks_the_fundamental_module():
    rep = fx.sl2_fundamental()
    rep.action.components[2].add(("h",), ("v2",), {("v2",): Fraction(2)})
    report = is_representation(rep)
    assert not report.passed
    assert report.routes_agree
    assert report.witness is not None


def test_tensor_of_representations(sl2_adjoint, sl2_fundamental):
    product = tensor_rep(sl2_adjoint, sl2_fundamental)
    assert product.space.arity == 2
    assert is_representation(product).passed


def test_trivial_module(sl2):
    assert is_representation(trivial_rep(sl2)).passed


def test_identity_is_equivariant(sl2_adjoint):
    one = identity_intertwiner(sl2_adjoint.algebra, sl2_adjoint.space)
    assert is_equivariant(sl2_adjoint, sl2_adjoint, one).passed
    assert juxtapose(one, sl2_adjoint.action).difference(sl2_adjoint.action).equal


def test_zero_has_zero_differential(sl2_adjoint, sl2_fundamental):
    zero = zero_intertwiner(sl2_adjoint.algebra, sl2_adjoint.space, sl2_fundamental.space, 0)
    assert hom_differential(sl2_adjoint, sl2_fundamental, zero).is_zero()


def test_differential_rejects_mismatched_spaces(sl2_adjoint, sl2_fundamental):
    one = identity_intertwiner(sl2_adjoint.algebra, sl2_adjoint.space)
    with pytest.raises(SpaceMismatchError):
        hom_differential(sl2_fundamental, sl2_adjoint, one)


def test_action_must_have_degree_one(sl2_adjoint):
    with pytest.raises(DegreeError):
        Representation("bad", sl2_adjoint.space, identity_intertwiner(sl2_adjoint.algebra, sl2_adjoint.space))


# ============================================================================
# Randomized suites
# ============================================================================

@pytest.mark.parametrize("suite", sorted(SUITES))
def test_axiom_suites_hold_on_random_instances(suite):
    settings = SuiteConfigManager().get_suite(suite)
    gen = InstanceGenerator(SessionConfig(seed=11))
    instances = [random_instance(gen, settings["arity_cap"]) for _ in range(settings["instances"])]
    outcome = run_axiom_suite(suite, instances)
    assert outcome.instances == 200
    assert outcome.failures == []
    assert outcome.passed


def test_representation_routes_agree():
    gen = InstanceGenerator(SessionConfig(seed=3))
    corpus = representation_corpus(gen, 100, 3)
    outcome, accepted = representation_routes(corpus)
    assert outcome.passed
    assert len(outcome.verdicts) == 100
    assert 50 <= accepted < 100


def test_unknown_suite():
    with pytest.raises(ValueError, match="Available"):
        run_axiom_suite("braided", [])


def test_random_instances_draw_fixture_algebras():
    gen = InstanceGenerator(SessionConfig(seed=11))
    names = {random_instance(gen, 3).algebra.name for _ in range(80)}
    assert {"sl2", "string_lie2"} <= names
    assert names - {"sl2", "string_lie2"}


def test_fixture_pool():
    alg, pool = fixture_pool("sl2", 3)
    assert [rep.name for rep in pool] == ["ad(sl2)", "V2", "K"]
    assert all(is_representation(rep).passed for rep in pool)
    with pytest.raises(ValueError):
        fixture_pool("dgla", 3)


# ============================================================================
# The pseudonatural pair (ϱ, λ)
# ============================================================================

@pytest.fixture(scope="module")
def string_instances():
    """Seeded intertwiners between the string Lie 2-algebra's modules, ℓ³ visible."""
    gen = InstanceGenerator(SessionConfig(seed=17, sparsity=0.3))
    alg, pool = fixture_pool("string_lie2", 3)
    ad, K = pool
    instances = []
    for U, V, W in ((ad, ad, ad), (ad, K, ad), (K, ad, ad)):
        instances.append(AxiomInstance(
            algebra=alg, U=U, V=V, W=W,
            f=gen.intertwiner(alg, U.space, V.space, degree=0),
            g=gen.intertwiner(alg, V.space, W.space, degree=-1),
            h=gen.intertwiner(alg, W.space, U.space, degree=1),
        ))
    return instances


def g_space(alg):
    return TensorSpace((alg.space,))


def test_pseudonatural_relations_on_the_string_algebra(string_instances):
    for inst in string_instances:
        failures = [v.name for v in pseudonatural_verdicts(inst) if not v.passed]
        assert failures == [], inst.label


def test_monoidal_splitting_on_the_string_algebra(string_instances):
    for inst in string_instances:
        failures = [v.name for v in monoidal_pair_verdicts(inst) if not v.passed]
        assert failures == [], inst.label


def test_varrho_leibniz(string_instances):
    inst = string_instances[0]
    alg, f, g = inst.algebra, inst.f, inst.g
    one_g = identity_intertwiner(alg, g_space(alg))
    rhs = juxtapose(varrho_of(g), odot(one_g, f)) - juxtapose(g, varrho_of(f))
    comparison = varrho_of(juxtapose(g, f)).difference(rhs)
    assert comparison.equal, comparison.witness


def test_lambda_leibniz(string_instances):
    inst = string_instances[0]
    alg, f, g = inst.algebra, inst.f, inst.g
    one_g = identity_intertwiner(alg, g_space(alg))
    rhs = juxtapose(lambda_of(g), odot(f, one_g)) - juxtapose(g, lambda_of(f))
    assert lambda_of(juxtapose(g, f)).difference(rhs).equal


def test_pseudonaturality_of_varrho(string_instances):
    inst = string_instances[0]
    alg, U, V, f = inst.algebra, inst.U, inst.V, inst.f
    one_g = identity_intertwiner(alg, g_space(alg))
    lhs = juxtapose(f, varrho_rep(U)) - juxtapose(varrho_rep(V), odot(one_g, f))
    rhs = hom_differential(tensor_rep(adjoint_rep(alg), U), V, varrho_of(f)) + varrho_of(hom_differential(U, V, f))
    comparison = lhs.difference(rhs)
    assert comparison.equal, comparison.witness
    assert not lhs.is_zero()


def test_varrho_of_a_tensor_module(string_lie2):
    alg = string_lie2
    ad = adjoint_rep(alg)
    one, one_g = identity_intertwiner(alg, ad.space), identity_intertwiner(alg, g_space(alg))
    swap = gamma(alg, ad.space, ad.space)
    rhs = odot(varrho_rep(ad), one) + juxtapose(swap, juxtapose(odot(varrho_rep(ad), one), odot(one_g, swap)))
    assert varrho_rep(tensor_rep(ad, ad)).difference(rhs).equal
    assert is_equivariant(tensor_rep(adjoint_rep(alg), ad), ad, varrho_rep(ad)).passed
    assert is_equivariant(tensor_rep(ad, adjoint_rep(alg)), ad, lambda_rep(ad)).passed


def test_ell_splits_over_tensor_products(string_lie2, sl2, sl2_fundamental):
    ad = adjoint_rep(string_lie2)
    lhs = ell_U(string_lie2, ad.space @ ad.space)
    rhs = odot(ell_U(string_lie2, ad.space), identity_intertwiner(string_lie2, ad.space))
    assert lhs.difference(rhs).equal
    assert not lhs.is_zero()
    V2 = sl2_fundamental.space
    assert ell_U(sl2, V2 @ V2).difference(odot(ell_U(sl2, V2), identity_intertwiner(sl2, V2))).equal


def test_tensor_action_is_associative(sl2, sl2_fundamental):
    ad = adjoint_rep(sl2)
    left = tensor_rep(tensor_rep(ad, sl2_fundamental), ad)
    right = tensor_rep(ad, tensor_rep(sl2_fundamental, ad))
    assert left.space == right.space
    assert left.action.difference(right.action).equal


def test_varrho_skew_relations(string_lie2):
    ad = adjoint_rep(string_lie2)
    G = g_space(string_lie2)
    swap_gg = gamma(string_lie2, G, G)
    one = identity_intertwiner(string_lie2, ad.space)
    twice = varrho_of(varrho_rep(ad))
    assert not twice.is_zero()
    assert (twice + juxtapose(twice, odot(swap_gg, one))).first_nonzero() is None
    assert (varrho_of(lambda_rep(ad)) + lambda_of(varrho_rep(ad))).first_nonzero() is None
    lam_twice = lambda_of(lambda_rep(ad))
    assert (lam_twice + juxtapose(lam_twice, odot(one, swap_gg))).first_nonzero() is None

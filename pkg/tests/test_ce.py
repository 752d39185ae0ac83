"""Chevalley-Eilenberg algebras, modules, morphisms and sign-convention mutations."""

import pytest

from linfrep.core.ce import (
    CECase, CEConventions, apply_delta, augmentation, augmentation_report, build_ce_algebra, build_ce_module,
    check_delta_squared, check_equivalence_suite, decode_brackets, export_presentation, monotonicity_audit,
    reversal_degree,
)
from linfrep.core.config import SessionConfig
from linfrep.core.repcat import adjoint_rep, trivial_rep
from linfrep.services import fixtures as fx
from linfrep.services.generator import InstanceGenerator


def ce_cases(gen, alg, pool, count):
    cases = []
    for k in range(count):
        U, V, W = (gen.rng.choice(pool) for _ in range(3))
        cases.append(CECase(f"case{k}", U, V, W, gen.intertwiner(alg, U.space, V.space),
                            gen.intertwiner(alg, V.space, W.space)))
    return cases


def test_reversal_degree():
    assert reversal_degree([]) == 0
    assert reversal_degree([1, 1]) == 1
    assert reversal_degree([1, 2, 3]) == 11
    assert reversal_degree([0, 5]) == 0


def test_sl2_delta_table(sl2):
    A = build_ce_algebra(sl2, 6)
    assert A.theta.degrees == (1, 1, 1)
    assert A.delta_table["h"] == {("e", "f"): 1}
    assert A.delta_table["e"] == {("e", "h"): -2}
    assert A.delta_table["f"] == {("f", "h"): 2}


def test_theta_degrees_shift(string_lie2):
    A = build_ce_algebra(string_lie2, 4)
    assert A.theta.degree_of("c") == 2
    assert A.theta.degree_of("e") == 1


def test_odd_generators_square_to_zero(sl2):
    A = build_ce_algebra(sl2, 6)
    theta_e = A.generator("e")
    assert (theta_e * theta_e).is_zero()
    assert apply_delta(A, A.unit()).is_zero()


@pytest.mark.parametrize("name", ["sl2", "string_lie2", "sl2_central", "dgla", "heisenberg", "abelian"])
def test_delta_squares_to_zero(name):
    A = build_ce_algebra(fx.FixtureRegistry.get_fixture(name)(), 6)
    verdict = check_delta_squared(A)
    assert verdict.passed, verdict.describe()
    assert verdict.failing_lengths == ()


@pytest.mark.parametrize("name", ["sl2", "string_lie2", "dgla", "heisenberg"])
def test_adjoint_modules_square_to_zero(name):
    alg = fx.FixtureRegistry.get_fixture(name)()
    module = build_ce_module(adjoint_rep(alg), build_ce_algebra(alg, 6))
    assert module.square_zero.passed, module.square_zero.describe()


def test_fundamental_module_squares_to_zero(sl2, sl2_fundamental):
    module = build_ce_module(sl2_fundamental, build_ce_algebra(sl2, 6))
    assert module.square_zero.passed
    assert module.generators() == (("v1",), ("v2",))


@pytest.mark.parametrize("name", ["sl2", "string_lie2", "dgla", "heisenberg"])
def test_brackets_decode_from_delta(name):
    alg = fx.FixtureRegistry.get_fixture(name)()
    decoded = decode_brackets(build_ce_algebra(alg, 6))
    for i in range(1, alg.arity_cap + 1):
        original = alg.bracket(i)
        recovered = decoded.bracket(i)
        assert (original is None) == (recovered is None)
        if original is not None:
            assert recovered.entries == original.entries


def test_truncation_is_monotone(sl2, sl2_fundamental):
    report = monotonicity_audit(sl2, (4, 6, 8), [adjoint_rep(sl2), sl2_fundamental])
    assert report.consistent
    assert report.conflict is None


def test_augmentation(dgla, sl2):
    A = build_ce_algebra(sl2, 4)
    assert augmentation(A.unit()) == 1
    assert augmentation(A.generator("e")) == 0
    assert augmentation_report(A).augmented
    assert augmentation_report(build_ce_algebra(dgla, 4)).augmented


def test_export_presentation(sl2, sl2_fundamental):
    A = build_ce_algebra(sl2, 4)
    data = export_presentation(A, [build_ce_module(sl2_fundamental, A)])
    assert data["algebra"] == "sl2"
    assert [g["label"] for g in data["generators"]] == ["e", "f", "h"]
    assert data["delta"]["h"] == [{"monomial": ["e", "f"], "output": [], "coeff": "1"}]
    assert "V2" in data["modules"]


# ============================================================================
# Equivalence suite
# ============================================================================

def test_equivalence_suite_on_sl2(sl2, sl2_fundamental):
    gen = InstanceGenerator(SessionConfig(seed=21))
    pool = [adjoint_rep(sl2), trivial_rep(sl2), sl2_fundamental]
    report = check_equivalence_suite(sl2, ce_cases(gen, sl2, pool, 100), 6)
    assert report.passed, [v.describe() for v in report.failures]


@pytest.fixture(scope="module")
def mutation_corpus():
    gen = InstanceGenerator(SessionConfig(seed=5, sparsity=0.0))
    corpus = []
    for alg in (fx.dgla(3), fx.heisenberg(3), fx.sl2(3)):
        pool = [adjoint_rep(alg), trivial_rep(alg), gen.candidate(alg), gen.candidate(alg)]
        corpus.append((alg, ce_cases(gen, alg, pool, 12)))
    return corpus


def test_default_conventions_pass_on_the_mutation_corpus(mutation_corpus):
    for alg, cases in mutation_corpus:
        report = check_equivalence_suite(alg, cases, 4)
        assert report.passed, [v.describe() for v in report.failures]


@pytest.mark.parametrize("switch", CEConventions.switches())
def test_every_sign_switch_is_caught(mutation_corpus, switch):
    conventions = CEConventions().flipped(switch)
    assert conventions.mutated == [switch]
    failures = []
    for alg, cases in mutation_corpus:
        failures.extend(check_equivalence_suite(alg, cases, 4, conventions).failures)
    assert failures, f"flipping {switch} went unnoticed"


def test_unknown_switch():
    assert len(CEConventions.switches()) == 10
    with pytest.raises(ValueError, match="Available"):
        CEConventions().flipped("delta_sign")


def test_conventions_are_frozen():
    conventions = CEConventions()
    assert conventions.flipped("delta_leibniz").delta_leibniz is False
    assert conventions.delta_leibniz is True
    assert conventions.mutated == []

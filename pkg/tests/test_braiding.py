"""Infinitesimal 2-braidings from 2-shifted Poisson structures."""

from fractions import Fraction

import pytest

from linfrep.core.braiding import (
    PseudonaturalPair, build_braiding_data, certify, check_varpi2_equivariant, classical_casimir_oracle,
    t_morphisms, t_objects,
)
from linfrep.core.errors import ShiftError
from linfrep.core.linfty import SkewMultiMap
from linfrep.core.poisson import ShiftedPoissonStructure, casimir_structure
from linfrep.core.repcat import (
    Intertwiner, adjoint_rep, hom_differential, identity_intertwiner, is_equivariant, tensor_rep, trivial_rep,
)
from linfrep.services import fixtures as fx


@pytest.fixture
def casimir_data(casimir):
    alg, sps = casimir
    return build_braiding_data(alg, sps)


def test_casimir_certificate_on_three_adjoint_modules(casimir_data):
    ad = adjoint_rep(casimir_data.algebra)
    certificate = certify(ad, ad, ad, casimir_data)
    assert certificate.passed, [v.name for v in certificate.verdicts() if not v.passed]
    assert certificate.degree_audit
    assert certificate.coherence.passed
    assert certificate.arity_cap == 2
    assert certificate.incidents == []


def test_casimir_matches_the_classical_formula(casimir_data):
    ad = adjoint_rep(casimir_data.algebra)
    V2 = fx.sl2_fundamental(2)
    for U, V in ((ad, ad), (ad, V2), (V2, V2)):
        comparison = t_objects(U, V, casimir_data).difference(classical_casimir_oracle(U, V, fx.SL2_CASIMIR))
        assert comparison.equal, comparison.witness


def test_homotopy_hexagons_with_identity_morphisms(casimir_data):
    ad = adjoint_rep(casimir_data.algebra)
    one = identity_intertwiner(casimir_data.algebra, ad.space)
    certificate = certify(ad, ad, ad, casimir_data, morphisms=(one, one, one))
    assert certificate.passed
    assert len(certificate.left_hexagon) == 2
    assert len(certificate.gamma_equivariance) == 4


def test_string_structure_certificate(string_poisson):
    alg, sps = string_poisson
    data = build_braiding_data(alg, sps)
    ad = adjoint_rep(alg)
    certificate = certify(ad, ad, ad, data)
    assert certificate.passed
    assert certificate.degree_audit
    assert certificate.coherence.passed
    assert data.varpi3_forced_zero
    assert data.varpi3.is_zero()
    assert sps.component(2, 0) is None or sps.component(2, 0).is_zero()


def test_non_invariant_tensor_is_not_equivariant():
    alg = fx.sl2(2)
    sps = casimir_structure(alg, {("e", "e"): Fraction(1)}, "e-squared", arity_cap=2)
    data = build_braiding_data(alg, sps)
    verdict = check_varpi2_equivariant(data)
    assert not verdict.passed
    assert verdict.note == ""
    assert not certify(adjoint_rep(alg), adjoint_rep(alg), adjoint_rep(alg), data).passed


def test_braiding_needs_shift_two():
    with pytest.raises(ShiftError):
        build_braiding_data(fx.sl2(2), ShiftedPoissonStructure.zero("zero", 1, arity_cap=2))


# ============================================================================
# A structure with nonzero t
# ============================================================================

@pytest.fixture
def central_data(central_casimir):
    alg, sps = central_casimir
    return build_braiding_data(alg, sps)


def closed_endomorphism(alg, U):
    """𝟙 + ⟦ρ,h⟧ with h(h) = c, a closed degree-0 map that is not the identity."""
    comp = SkewMultiMap(alg.space, 0, U.space, U.space, -1)
    comp.add((), ("h",), {("c",): Fraction(1)})
    h = Intertwiner(alg, U.space, U.space, -1, {1: comp})
    return identity_intertwiner(alg, U.space) + hom_differential(U, U, h)


def test_central_casimir_has_nonzero_t(central_data):
    ad = adjoint_rep(central_data.algebra)
    assert central_data.varpi3_forced_zero
    assert central_data.varpi3.is_zero()
    assert not central_data.varpi2.is_zero()
    t = t_objects(ad, ad, central_data)
    assert not t.is_zero()
    assert t.degree == 0
    assert is_equivariant(tensor_rep(ad, ad), tensor_rep(ad, ad), t).passed


def test_central_casimir_certificate(central_data):
    ad = adjoint_rep(central_data.algebra)
    certificate = certify(ad, ad, ad, central_data)
    assert certificate.passed, [v.name for v in certificate.verdicts() if not v.passed]
    assert certificate.degrees == {"t_objects": 0, "t_homotopies": -1, "t_triple": -2, "boundary": -1}


def test_homotopy_hexagons_with_non_identity_morphisms(central_data):
    alg = central_data.algebra
    ad = adjoint_rep(alg)
    f = closed_endomorphism(alg, ad)
    assert is_equivariant(ad, ad, f).passed
    assert not f.difference(identity_intertwiner(alg, ad.space)).equal
    t_ff = t_morphisms(f, f, central_data, ad, ad)
    assert not t_ff.is_zero()
    assert t_ff.degree == -1

    certificate = certify(ad, ad, ad, central_data, morphisms=(f, f, f))
    assert [v.name for v in certificate.gamma_equivariance] == [
        "gamma_equivariance[objects]", "gamma_equivariance[1_U]", "gamma_equivariance[1_V]",
        "gamma_equivariance[f,g]",
    ]
    assert certificate.passed, [v.name for v in certificate.verdicts() if not v.passed]


def test_t_is_assembled_from_the_pseudonatural_pair(central_data):
    ad = adjoint_rep(central_data.algebra)
    pair = PseudonaturalPair.of_representation(ad)
    one = identity_intertwiner(central_data.algebra, ad.space)
    assert PseudonaturalPair.of_morphism(one).varrho.is_zero()
    assert PseudonaturalPair.of_morphism(one).lam.is_zero()
    assert pair.varrho.source.factors == (central_data.algebra.space,) + ad.space.factors
    assert pair.lam.source.factors == ad.space.factors + (central_data.algebra.space,)
    # t_{1,1} vanishes because ϱ and λ kill identities
    assert t_morphisms(one, one, central_data, ad, ad).is_zero()


def test_degree_audit_reads_declared_degrees(casimir_data):
    K = trivial_rep(casimir_data.algebra)
    certificate = certify(K, K, K, casimir_data)
    # every family vanishes on the unit, but the audit still sees their degrees
    assert certificate.degrees == {"t_objects": 0, "t_homotopies": -1, "t_triple": -2, "boundary": -1}
    assert certificate.degree_audit

"""
Randomized axiom suites for Rep(𝔤).

Each instance is an algebra with three representations and a cycle of
intertwiners f: U ⇝ V, g: V ⇝ W, h: W ⇝ U. Most algebras are random and
nilpotent; a share of instances instead draws sl₂ or the string Lie
2-algebra with their adjoint, fundamental and trivial modules, so brackets
act nontrivially on both sides. The dg-category suite checks juxtaposition,
the differential and the pseudonatural pair (ϱ, λ); the monoidal suite
checks ⊙, γ, the unit and how ϱ, λ and ℓ split over tensor products; the
representation suite cross-checks both routes of the representation
predicate on candidates that mostly fail.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

from ..core.braiding import PseudonaturalPair, Verdict
from ..core.graded import UNIT, TensorSpace, parity_sign
from ..core.linfty import LInfinityAlgebra
from ..core.repcat import (
    Intertwiner, Representation, adjoint_rep, ell_U, gamma, hom_differential, identity_intertwiner,
    is_representation, juxtapose, odot, tensor_rep, trivial_rep, varrho_of,
)
from . import fixtures as fx
from .generator import InstanceGenerator

logger = logging.getLogger(__name__)

# Share of instances drawn from the fixture algebras.
FIXTURE_SHARE = 0.25


@dataclass
class AxiomInstance:
    algebra: LInfinityAlgebra
    U: Representation
    V: Representation
    W: Representation
    f: Intertwiner
    g: Intertwiner
    h: Intertwiner

    @property
    def label(self) -> str:
        return f"{self.algebra.name}:{self.U.name},{self.V.name},{self.W.name}"


@dataclass
class SuiteOutcome:
    """Verdicts of one suite over a corpus; failures keep the instance label."""

    suite: str
    instances: int
    verdicts: List[Verdict] = field(default_factory=list)
    incidents: List[str] = field(default_factory=list)

    @property
    def failures(self) -> List[Verdict]:
        return [v for v in self.verdicts if not v.passed]

    @property
    def passed(self) -> bool:
        return not self.failures and not self.incidents


def fixture_pool(name: str, arity_cap: int) -> Tuple[LInfinityAlgebra, List[Representation]]:
    """A fixture algebra with the modules it ships with."""
    if name == "sl2":
        alg = fx.sl2(arity_cap)
        return alg, [adjoint_rep(alg), fx.sl2_fundamental(arity_cap), trivial_rep(alg)]
    if name == "string_lie2":
        alg = fx.string_lie2(arity_cap)
        return alg, [adjoint_rep(alg), trivial_rep(alg)]
    raise ValueError(f"No module pool for fixture '{name}'")


def random_instance(gen: InstanceGenerator, arity_cap: int) -> AxiomInstance:
    if gen.rng.random() < FIXTURE_SHARE:
        alg, pool = fixture_pool(gen.rng.choice(("sl2", "string_lie2")), min(arity_cap, 3))
    else:
        alg = gen.algebra(arity_cap)
        pool = [adjoint_rep(alg), trivial_rep(alg), gen.representation(alg), gen.representation(alg)]
    U, V, W = (gen.rng.choice(pool) for _ in range(3))
    return AxiomInstance(
        algebra=alg, U=U, V=V, W=W,
        f=gen.intertwiner(alg, U.space, V.space),
        g=gen.intertwiner(alg, V.space, W.space),
        h=gen.intertwiner(alg, W.space, U.space),
    )


def _equal(name: str, lhs: Intertwiner, rhs: Intertwiner) -> Verdict:
    return Verdict.from_comparison(name, lhs.difference(rhs))


def _vanishes(name: str, family: Intertwiner) -> Verdict:
    up_to = family.checked_up_to
    witness = family.first_nonzero(up_to)
    return Verdict(name, witness is None, up_to, witness)


# ============================================================================
# dg-category
# ============================================================================

def dg_category_verdicts(inst: AxiomInstance) -> List[Verdict]:
    """Associativity, unitality, ⟦ρ,·⟧² = 0, the Leibniz rule for juxtaposition and the (ϱ, λ) relations."""
    alg = inst.algebra
    U, V, W, f, g, h = inst.U, inst.V, inst.W, inst.f, inst.g, inst.h
    d_f = hom_differential(U, V, f)
    d_g = hom_differential(V, W, g)
    leibniz_rhs = juxtapose(d_g, f) + juxtapose(g, d_f).scaled(parity_sign(g.degree))
    return [
        _equal("associativity", juxtapose(h, juxtapose(g, f)), juxtapose(juxtapose(h, g), f)),
        _equal("left_unit", juxtapose(identity_intertwiner(alg, V.space), f), f),
        _equal("right_unit", juxtapose(f, identity_intertwiner(alg, U.space)), f),
        _vanishes("differential_squared", hom_differential(U, V, d_f)),
        _equal("leibniz", hom_differential(U, W, juxtapose(g, f)), leibniz_rhs),
    ] + pseudonatural_verdicts(inst)


def pseudonatural_verdicts(inst: AxiomInstance) -> List[Verdict]:
    """ϱ and λ are derivations, ϱ is pseudonatural, ϱ_U is closed and both are skew in their 𝔤 slots."""
    alg = inst.algebra
    U, V, W, f, g = inst.U, inst.V, inst.W, inst.f, inst.g
    G = TensorSpace((alg.space,))
    one_g = identity_intertwiner(alg, G)
    g_gg = gamma(alg, G, G)
    pf, pg, pgf = (PseudonaturalPair.of_morphism(m) for m in (f, g, juxtapose(g, f)))
    rep_u, rep_v = PseudonaturalPair.of_representation(U), PseudonaturalPair.of_representation(V)
    sign_g = parity_sign(g.degree)

    varrho_rhs = juxtapose(pg.varrho, odot(one_g, f)) + juxtapose(g, pf.varrho).scaled(sign_g)
    lambda_rhs = juxtapose(pg.lam, odot(f, one_g)) + juxtapose(g, pf.lam).scaled(sign_g)
    naturality = juxtapose(f, rep_u.varrho) - juxtapose(rep_v.varrho, odot(one_g, f))
    homotopy = (hom_differential(tensor_rep(adjoint_rep(alg), U), V, pf.varrho)
                + varrho_of(hom_differential(U, V, f)))
    one_u = identity_intertwiner(alg, U.space)
    twice = PseudonaturalPair.of_morphism(rep_u.varrho)
    lam_twice = PseudonaturalPair.of_morphism(rep_u.lam)
    return [
        _equal("varrho_leibniz", pgf.varrho, varrho_rhs),
        _equal("lambda_leibniz", pgf.lam, lambda_rhs),
        _equal("pseudonaturality", naturality, homotopy),
        _vanishes("varrho_rep_closed", hom_differential(tensor_rep(adjoint_rep(alg), U), U, rep_u.varrho)),
        _vanishes("varrho_kills_units", varrho_of(one_u)),
        _vanishes("varrho_kills_gamma", varrho_of(gamma(alg, U.space, W.space))),
        _vanishes("varrho_skew", twice.varrho + juxtapose(twice.varrho, odot(g_gg, one_u))),
        _vanishes("varrho_lambda_skew", lam_twice.varrho + twice.lam),
        _vanishes("lambda_skew", lam_twice.lam + juxtapose(lam_twice.lam, odot(one_u, g_gg))),
    ]


# ============================================================================
# Symmetric monoidal structure
# ============================================================================

def monoidal_verdicts(inst: AxiomInstance) -> List[Verdict]:
    """Interchange, ⊙-associativity, Leibniz for ⊙, γ naturality/involutivity/hexagon, strict unit."""
    alg = inst.algebra
    U, V, W, f, g, h = inst.U, inst.V, inst.W, inst.f, inst.g, inst.h
    UV, VW = tensor_rep(U, V), tensor_rep(V, W)
    one_unit = identity_intertwiner(alg, UNIT)

    interchange = juxtapose(odot(g, h), odot(f, g))
    interchange_rhs = odot(juxtapose(g, f), juxtapose(h, g)).scaled(parity_sign(h.degree * f.degree))

    fg = odot(f, g)
    leibniz_rhs = (odot(hom_differential(U, V, f), g)
                   + odot(f, hom_differential(V, W, g)).scaled(parity_sign(f.degree)))

    naturality = juxtapose(gamma(alg, V.space, W.space), fg)
    naturality_rhs = juxtapose(odot(g, f), gamma(alg, U.space, V.space)).scaled(parity_sign(f.degree * g.degree))

    g_uv = gamma(alg, U.space, V.space)
    hexagon_rhs = juxtapose(odot(identity_intertwiner(alg, V.space), gamma(alg, U.space, W.space)),
                            odot(g_uv, identity_intertwiner(alg, W.space)))
    return [
        _equal("interchange", interchange, interchange_rhs),
        _equal("odot_associativity", odot(odot(f, g), h), odot(f, odot(g, h))),
        _equal("odot_leibniz", hom_differential(UV, VW, fg), leibniz_rhs),
        _equal("gamma_naturality", naturality, naturality_rhs),
        _equal("gamma_involutive", juxtapose(gamma(alg, V.space, U.space), g_uv),
               identity_intertwiner(alg, U.space @ V.space)),
        _equal("gamma_hexagon", gamma(alg, U.space, V.space @ W.space), hexagon_rhs),
        _vanishes("gamma_closed", hom_differential(UV, tensor_rep(V, U), g_uv)),
        _equal("left_unit_strict", odot(one_unit, f), f),
        _equal("right_unit_strict", odot(f, one_unit), f),
    ] + monoidal_pair_verdicts(inst)


def monoidal_pair_verdicts(inst: AxiomInstance) -> List[Verdict]:
    """How ϱ, λ, ℓ and the tensor action split over ⊙."""
    alg = inst.algebra
    U, V, W, f, g = inst.U, inst.V, inst.W, inst.f, inst.g
    G = TensorSpace((alg.space,))
    one_g, one_u, one_v = (identity_intertwiner(alg, S) for S in (G, U.space, V.space))
    pf, pg, pfg = (PseudonaturalPair.of_morphism(m) for m in (f, g, odot(f, g)))
    rep_u, rep_v = PseudonaturalPair.of_representation(U), PseudonaturalPair.of_representation(V)

    # f: U ⇝ V and g: V ⇝ W, so f⊙g: U⊙V ⇝ V⊙W
    varrho_split = (odot(pf.varrho, g)
                    + juxtapose(odot(f, pg.varrho), odot(gamma(alg, G, U.space), one_v)).scaled(parity_sign(f.degree)))
    varrho_swap = odot(pf.varrho, g) + juxtapose(
        gamma(alg, W.space, V.space),
        juxtapose(odot(pg.varrho, f), odot(one_g, gamma(alg, U.space, V.space))),
    ).scaled(parity_sign(f.degree * g.degree))
    lambda_split = (juxtapose(odot(pf.lam, g), odot(one_u, gamma(alg, V.space, G)))
                    + odot(f, pg.lam).scaled(parity_sign(f.degree)))
    rep_split = odot(rep_u.varrho, one_v) + juxtapose(
        gamma(alg, V.space, U.space),
        juxtapose(odot(rep_v.varrho, one_u), odot(one_g, gamma(alg, U.space, V.space))),
    )
    return [
        _equal("varrho_odot_split", pfg.varrho, varrho_split),
        _equal("varrho_odot_swap", pfg.varrho, varrho_swap),
        _equal("lambda_odot_split", pfg.lam, lambda_split),
        _equal("varrho_tensor_rep", PseudonaturalPair.of_representation(tensor_rep(U, V)).varrho, rep_split),
        _equal("ell_tensor", ell_U(alg, U.space @ V.space), odot(ell_U(alg, U.space), one_v)),
        _equal("tensor_rep_associative", tensor_rep(tensor_rep(U, V), W).action,
               tensor_rep(U, tensor_rep(V, W)).action),
    ]


SUITES: Dict[str, Callable[[AxiomInstance], List[Verdict]]] = {
    "dg_category": dg_category_verdicts,
    "monoidal": monoidal_verdicts,
}


def labelled(inst: AxiomInstance, verdicts: List[Verdict]) -> List[Verdict]:
    for v in verdicts:
        v.name = f"{v.name}[{inst.label}]"
    return verdicts


def run_axiom_suite(suite: str, instances: List[AxiomInstance]) -> SuiteOutcome:
    if suite not in SUITES:
        raise ValueError(f"Unknown axiom suite: '{suite}'. Available: {sorted(SUITES)}")
    outcome = SuiteOutcome(suite, len(instances))
    for inst in instances:
        outcome.verdicts.extend(labelled(inst, SUITES[suite](inst)))
    logger.debug(f"Suite {suite}: {len(outcome.failures)} failures over {len(instances)} instances")
    return outcome


# ============================================================================
# Representation predicate
# ============================================================================

def representation_corpus(gen: InstanceGenerator, count: int, arity_cap: int) -> List[Representation]:
    """Alternates square-zero representations with arbitrary action families."""
    corpus = []
    for k in range(count):
        alg = gen.algebra(arity_cap)
        corpus.append(gen.representation(alg) if k % 2 == 0 else gen.candidate(alg))
    return corpus


def representation_routes(corpus: List[Representation]) -> Tuple[SuiteOutcome, int]:
    """Route agreement on every candidate, and how many candidates are representations."""
    outcome = SuiteOutcome("representation", len(corpus))
    accepted = 0
    for rep in corpus:
        report = is_representation(rep)
        accepted += report.passed
        outcome.verdicts.append(Verdict(f"representation_routes[{rep.name}]", report.routes_agree,
                                        report.compared_up_to, None if report.routes_agree else report.witness))
        outcome.incidents.extend(report.incidents)
    logger.debug(f"Representation corpus: {accepted}/{len(corpus)} accepted")
    return outcome, accepted

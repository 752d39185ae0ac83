"""
Infinitesimal 2-braidings induced by 2-shifted Poisson structures.

Builds ϖ₂ and ϖ₃ from the weight-2 and weight-3 Poisson components, the
pseudonatural transformation t with its homotopies t_{f,g}, the triple
homotopy t_{U,V,W}, and certifies γ-equivariance, both hexagon relations,
total symmetry and coherence by exact intertwiner equality. Coherence is
certified as equality with ⟦ρ, t_{U,V,W}⟧, never as approximate vanishing.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import ShiftError, SpaceMismatchError
from .graded import GradedElement, Key, Sparse, TensorSpace, apply_shuffler, parity_sign
from .linfty import LInfinityAlgebra, SkewMultiMap, Witness
from .poisson import ShiftedPoissonStructure, admissible_arities, weight2_mc_residual
from .repcat import (
    Comparison, Intertwiner, Representation, adjoint_rep, gamma, hom_differential, identity_intertwiner,
    juxtapose, lambda_of, lambda_rep, odot, tabulate_intertwiner, tensor_rep, trivial_rep, varrho_of,
    varrho_rep,
)

logger = logging.getLogger(__name__)


@dataclass
class BraidingData:
    """
    ϖ₂ (degree 0) and ϖ₃ (degree -2) as intertwiners out of 𝕂, plus Σ⁺_{2,1}.

    ``varpi3_arities`` lists the arities at which π₃ has any degree-admissible
    coordinate; when it is empty ϖ₃ = 0 is forced, not merely unset.
    """

    algebra: LInfinityAlgebra
    structure: ShiftedPoissonStructure
    varpi2: Intertwiner
    varpi3: Intertwiner
    sigma21: Intertwiner
    varpi3_arities: List[int] = field(default_factory=list)

    @property
    def varpi3_forced_zero(self) -> bool:
        return not self.varpi3_arities


@dataclass
class PseudonaturalPair:
    """ϱ and λ := ϱ γ_{U,𝔤} of a representation or of an intertwiner."""

    varrho: Intertwiner
    lam: Intertwiner

    @classmethod
    def of_representation(cls, U: Representation) -> "PseudonaturalPair":
        return cls(varrho_rep(U), lambda_rep(U))

    @classmethod
    def of_morphism(cls, f: Intertwiner) -> "PseudonaturalPair":
        return cls(varrho_of(f), lambda_of(f))


@dataclass
class Verdict:
    """One certified identity: pass/fail, the arity range compared and the first offending component."""

    name: str
    passed: bool
    compared_up_to: int
    witness: Optional[Witness] = None
    note: str = ""

    @classmethod
    def from_comparison(cls, name: str, comparison: Comparison, note: str = "") -> "Verdict":
        return cls(name, comparison.equal, comparison.compared_up_to, comparison.witness, note)


@dataclass
class BraidingCertificate:
    """Every property of the induced infinitesimal 2-braiding on one triple of representations."""

    structure: str
    representations: Tuple[str, str, str]
    arity_cap: int
    varpi2_equivariant: Verdict
    varpi3_homotopy: Verdict
    gamma_equivariance: List[Verdict]
    left_hexagon: List[Verdict]
    right_hexagon: List[Verdict]
    total_symmetry: Verdict
    coherence: Verdict
    coherence_sum_zero: bool
    boundary_zero: bool
    degrees: Dict[str, int] = field(default_factory=dict)
    degree_audit: bool = True
    incidents: List[str] = field(default_factory=list)

    def verdicts(self) -> List[Verdict]:
        return ([self.varpi2_equivariant, self.varpi3_homotopy] + self.gamma_equivariance
                + self.left_hexagon + self.right_hexagon + [self.total_symmetry, self.coherence])

    @property
    def passed(self) -> bool:
        return self.degree_audit and all(v.passed for v in self.verdicts())


# ============================================================================
# Braiding data
# ============================================================================

def _g(alg: LInfinityAlgebra) -> TensorSpace:
    return TensorSpace((alg.space,))


def _reindexed(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure, weight: int, degree: int) -> Intertwiner:
    """ϖ_w^i := (-1)^i π_w^{ĩ} as an intertwiner 𝕂 ⇝ 𝔤^{⊗w}."""
    target = TensorSpace.power(alg.space, weight)
    components = {}
    for i in range(1, sps.arity_cap + 2):
        comp = sps.component(weight, i - 1)
        if comp is None:
            continue
        out = SkewMultiMap(alg.space, i - 1, TensorSpace(()), target, degree - (i - 1))
        sign = parity_sign(i)
        out.entries = {key: {k: sign * v for k, v in image.items()} for key, image in comp.entries.items()}
        components[i] = out
    return Intertwiner(alg, TensorSpace(()), target, degree, components, alg.arity_cap, True,
                       f"varpi{weight}")


def sigma21(alg: LInfinityAlgebra) -> Intertwiner:
    """Σ⁺_{2,1}: the symmetrised product Sym²𝔤 ⊗ 𝔤 → Sym³𝔤, equivariant and arity-1 only."""
    g3 = TensorSpace.power(alg.space, 3)

    def fn(i: int, x: Key, u: Key) -> Sparse:
        return apply_shuffler("sym", (2, 1), GradedElement(g3, {u: Fraction(1)}), inverse=True).terms

    return tabulate_intertwiner(alg, g3, g3, 0, 1, fn, name="sigma21")


def build_braiding_data(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure) -> BraidingData:
    """Reindex π₂ and π₃ into ϖ₂ and ϖ₃."""
    if sps.shift != 2:
        raise ShiftError(f"Infinitesimal 2-braidings need a 2-shifted structure, '{sps.name}' is {sps.shift}-shifted")
    for comp in sps.components.values():
        if comp.space != alg.space:
            raise SpaceMismatchError(f"'{sps.name}' is not a structure on '{alg.name}'")
    varpi2 = _reindexed(alg, sps, 2, 0)
    varpi3 = _reindexed(alg, sps, 3, -2)
    admissible = admissible_arities(alg.space, 3, 2, sps.arity_cap) if sps.weight_cap >= 3 else []
    logger.debug(f"Braiding data for '{sps.name}': ϖ₂ arities {sorted(varpi2.components)}, "
                 f"ϖ₃ arities {sorted(varpi3.components)}, π₃ admissible at {admissible}")
    return BraidingData(alg, sps, varpi2, varpi3, sigma21(alg), admissible)


def _adjoint_power(alg: LInfinityAlgebra, n: int) -> Representation:
    ad = adjoint_rep(alg)
    rep = ad
    for _ in range(n - 1):
        rep = tensor_rep(rep, ad)
    return rep


def check_varpi2_equivariant(data: BraidingData) -> Verdict:
    """⟦ρ,ϖ₂⟧ = 0, compared against the vanishing of the weight-2 Maurer-Cartan residual."""
    alg = data.algebra
    residual = hom_differential(trivial_rep(alg), _adjoint_power(alg, 2), data.varpi2)
    up_to = residual.checked_up_to
    witness = residual.first_nonzero(up_to)
    mc_clean = all(i >= up_to for i in weight2_mc_residual(alg, data.structure))
    note = ""
    if (witness is None) != mc_clean:
        note = "⟦ρ,ϖ₂⟧ and the weight-2 Maurer-Cartan residual disagree"
        logger.error(f"{note} for '{data.structure.name}'")
    return Verdict("varpi2_equivariant", witness is None and mc_clean, up_to, witness, note)


def check_varpi3_homotopy(data: BraidingData) -> Verdict:
    """⟦ρ,ϖ₃⟧ = Σ⁺_{2,1}(ϱ_{ϖ₂} ⊙ 𝟙_𝔤)ϖ₂."""
    alg = data.algebra
    lhs = hom_differential(trivial_rep(alg), _adjoint_power(alg, 3), data.varpi3)
    rhs = juxtapose(data.sigma21,
                    juxtapose(odot(varrho_of(data.varpi2), identity_intertwiner(alg, _g(alg))), data.varpi2))
    return Verdict.from_comparison("varpi3_homotopy", lhs.difference(rhs))


# ============================================================================
# The pseudonatural transformation t
# ============================================================================

def _insert(data: BraidingData, U: TensorSpace, V: TensorSpace, varpi: Intertwiner) -> Intertwiner:
    """𝟙_U ⊙ ϖ ⊙ 𝟙_V."""
    alg = data.algebra
    return odot(odot(identity_intertwiner(alg, U), varpi), identity_intertwiner(alg, V))


def t_objects(U: Representation, V: Representation, data: BraidingData) -> Intertwiner:
    """t_{U,V} := (λ_U ⊙ ϱ_V)(𝟙_U ⊙ ϖ₂ ⊙ 𝟙_V), a degree-0 endomorphism of U⊙V."""
    left, right = PseudonaturalPair.of_representation(U), PseudonaturalPair.of_representation(V)
    out = juxtapose(odot(left.lam, right.varrho), _insert(data, U.space, V.space, data.varpi2))
    out.name = f"t[{U.name},{V.name}]"
    return out


def t_morphisms(f: Intertwiner, g: Intertwiner, data: BraidingData,
                f_target: Representation, g_source: Representation) -> Intertwiner:
    """
    t_{f,g} := (λ_f ⊙ gϱ_V + λ_{U'}(f ⊙ 𝟙_𝔤) ⊙ ϱ_g)(𝟙_U ⊙ ϖ₂ ⊙ 𝟙_V).

    ``f_target`` is U' and ``g_source`` is V.
    """
    if f.target != f_target.space or g.source != g_source.space:
        raise SpaceMismatchError("Representations do not match the morphisms' target and source")
    alg = data.algebra
    pf, pg = PseudonaturalPair.of_morphism(f), PseudonaturalPair.of_morphism(g)
    first = odot(pf.lam, juxtapose(g, PseudonaturalPair.of_representation(g_source).varrho))
    second = odot(juxtapose(PseudonaturalPair.of_representation(f_target).lam,
                            odot(f, identity_intertwiner(alg, _g(alg)))), pg.varrho)
    return juxtapose(first + second, _insert(data, f.source, g.source, data.varpi2))


def t_triple_homotopy(U: Representation, V: Representation, W: Representation, data: BraidingData) -> Intertwiner:
    """t_{U,V,W} := ([λ_U ⊙ ϱ_V][𝟙_U ⊙ γ_{V,𝔤𝔤}] ⊙ ϱ_W)(𝟙_{UV} ⊙ ϖ₃ ⊙ 𝟙_W), degree -2."""
    alg = data.algebra
    g = _g(alg)
    swap = odot(identity_intertwiner(alg, U.space), gamma(alg, V.space, g @ g))
    head = juxtapose(odot(lambda_rep(U), varrho_rep(V)), swap)
    return juxtapose(odot(head, varrho_rep(W)), _insert(data, U.space @ V.space, W.space, data.varpi3))


def classical_casimir_oracle(U: Representation, V: Representation,
                             casimir: Dict[Tuple[str, str], Fraction]) -> Intertwiner:
    """
    -Σ Ω^{ab} ρ²(a; u) ⊗ ρ²(b; v) for algebras and modules concentrated in degree 0.

    ``casimir`` holds the full tensor Ω = Σ Ω^{ab} a⊗b.
    """
    alg = U.algebra
    rho_u, rho_v = U.action.component(2), V.action.component(2)

    def fn(i: int, x: Key, uv: Key) -> Sparse:
        u, v = uv[:U.space.arity], uv[U.space.arity:]
        acc: Sparse = {}
        if rho_u is None or rho_v is None:
            return acc
        for (a, b), omega in casimir.items():
            left = rho_u.evaluate((a,), u)
            right = rho_v.evaluate((b,), v)
            for ka, ca in left.items():
                for kb, cb in right.items():
                    key = ka + kb
                    acc[key] = acc.get(key, 0) - Fraction(omega) * ca * cb
        return {k: c for k, c in acc.items() if c}

    return tabulate_intertwiner(alg, U.space @ V.space, U.space @ V.space, 0, 1, fn, name="casimir-oracle")


# ============================================================================
# Certification
# ============================================================================

def _tensor(*reps: Representation) -> Representation:
    rep = reps[0]
    for other in reps[1:]:
        rep = tensor_rep(rep, other)
    return rep


def _conjugate(alg: LInfinityAlgebra, inner: Intertwiner, first: TensorSpace,
               a: TensorSpace, b: TensorSpace) -> Intertwiner:
    """(𝟙_first ⊙ γ_{b,a}) inner (𝟙_first ⊙ γ_{a,b})."""
    one = identity_intertwiner(alg, first)
    return juxtapose(odot(one, gamma(alg, b, a)), juxtapose(inner, odot(one, gamma(alg, a, b))))


def certify(U: Representation, V: Representation, W: Representation, data: BraidingData,
            morphisms: Optional[Tuple[Intertwiner, Intertwiner, Intertwiner]] = None) -> BraidingCertificate:
    """
    Certify the induced infinitesimal 2-braiding on (U, V, W).

    ``morphisms`` optionally supplies endomorphisms (f, g, h) of U, V and W for
    the homotopy-level hexagons; γ-equivariance of homotopies is checked on
    the pairs (𝟙_U, g), (f, 𝟙_V) and (f, g).
    """
    alg = data.algebra
    incidents: List[str] = []
    one_u, one_v, one_w = (identity_intertwiner(alg, R.space) for R in (U, V, W))
    UV, VW, UW = _tensor(U, V), _tensor(V, W), _tensor(U, W)

    t_uv, t_vu = t_objects(U, V, data), t_objects(V, U, data)
    t_uw, t_vw = t_objects(U, W, data), t_objects(V, W, data)
    g_uv = gamma(alg, U.space, V.space)

    # (a) γ-equivariance
    gamma_checks = [Verdict.from_comparison(
        "gamma_equivariance[objects]", juxtapose(g_uv, t_uv).difference(juxtapose(t_vu, g_uv)))]
    if morphisms is not None:
        f, g, h = morphisms
        pairs = [("1_U", one_u, U, g, V), ("1_V", f, U, one_v, V), ("f,g", f, U, g, V)]
        for label, left, L, right, R in pairs:
            lhs = juxtapose(g_uv, t_morphisms(left, right, data, L, R))
            rhs = juxtapose(t_morphisms(right, left, data, R, L), g_uv)
            gamma_checks.append(Verdict.from_comparison(f"gamma_equivariance[{label}]", lhs.difference(rhs)))

    # (b) left hexagon
    left_rhs = odot(t_uv, one_w) + _conjugate(alg, odot(t_uw, one_v), U.space, V.space, W.space)
    left_checks = [Verdict.from_comparison("left_hexagon[objects]", t_objects(U, VW, data).difference(left_rhs))]
    # (c) right hexagon
    g_vu = gamma(alg, V.space, U.space)
    right_rhs = odot(one_u, t_vw) + juxtapose(odot(g_vu, one_w),
                                              juxtapose(odot(one_v, t_uw), odot(g_uv, one_w)))
    right_checks = [Verdict.from_comparison("right_hexagon[objects]", t_objects(UV, W, data).difference(right_rhs))]

    if morphisms is not None:
        f, g, h = morphisms
        lhs = t_morphisms(f, odot(g, h), data, U, VW)
        rhs = odot(t_morphisms(f, g, data, U, V), h) + _conjugate(
            alg, odot(t_morphisms(f, h, data, U, W), g), U.space, V.space, W.space)
        left_checks.append(Verdict.from_comparison("left_hexagon[homotopies]", lhs.difference(rhs)))
        lhs = t_morphisms(odot(f, g), h, data, UV, W)
        rhs = odot(f, t_morphisms(g, h, data, V, W)) + juxtapose(
            odot(g_vu, one_w), juxtapose(odot(g, t_morphisms(f, h, data, U, W)), odot(g_uv, one_w)))
        right_checks.append(Verdict.from_comparison("right_hexagon[homotopies]", lhs.difference(rhs)))

    if gamma_checks[0].passed:
        left_ok = all(v.passed for v in left_checks[:1])
        right_ok = all(v.passed for v in right_checks[:1])
        if left_ok != right_ok:
            message = f"Left and right hexagon verdicts differ for γ-equivariant t on '{data.structure.name}'"
            logger.error(message)
            incidents.append(message)

    # (d) total symmetry
    t_sym = t_morphisms(g_uv, one_w, data, _tensor(V, U), W)
    total = Verdict("total_symmetry", t_sym.first_nonzero() is None, t_sym.checked_up_to, t_sym.first_nonzero())

    # (e) coherence
    triple = t_triple_homotopy(U, V, W, data)
    UVW = _tensor(U, V, W)
    boundary = hom_differential(UVW, UVW, triple)
    coherence_sum = (t_morphisms(t_uv, one_w, data, UV, W)
                     + t_morphisms(one_u, t_vw, data, U, VW)
                     + _conjugate(alg, t_morphisms(t_uw, one_v, data, UW, V), U.space, V.space, W.space))
    coherence = Verdict.from_comparison("coherence", coherence_sum.difference(boundary))

    degrees = {
        "t_objects": t_uv.degree,
        "t_homotopies": coherence_sum.degree,
        "t_triple": triple.degree,
        "boundary": boundary.degree,
    }
    expected = {"t_objects": 0, "t_homotopies": -1, "t_triple": -2, "boundary": -1}
    audit = all(d == expected[name] for name, d in degrees.items())
    if not audit:
        message = f"Degree audit failed for '{data.structure.name}': {degrees}"
        logger.error(message)
        incidents.append(message)

    certificate = BraidingCertificate(
        structure=data.structure.name,
        representations=(U.name, V.name, W.name),
        arity_cap=alg.arity_cap,
        varpi2_equivariant=check_varpi2_equivariant(data),
        varpi3_homotopy=check_varpi3_homotopy(data),
        gamma_equivariance=gamma_checks,
        left_hexagon=left_checks,
        right_hexagon=right_checks,
        total_symmetry=total,
        coherence=coherence,
        coherence_sum_zero=coherence_sum.first_nonzero() is None,
        boundary_zero=boundary.first_nonzero() is None,
        degrees=degrees,
        degree_audit=audit,
        incidents=incidents,
    )
    logger.info(f"Braiding certificate for '{data.structure.name}' on {certificate.representations}: "
                f"passed={certificate.passed}")
    return certificate

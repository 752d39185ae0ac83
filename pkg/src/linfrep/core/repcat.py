"""
The symmetric monoidal dg-category of representations.

Intertwiners f: U ⇝ V are families f^i: 𝔤^{⊗ĩ} ⊗ U → V of degree |f| - ĩ,
skew in the 𝔤 slots with the module slots pinned last. Every family knows
how far it is exact (``cap``) and whether nothing lives above its stored
components (``complete``); composites derive both from their inputs so that
equality checks only ever compare exact components.

Usage:
    from linfrep.core.repcat import adjoint_rep, hom_differential, juxtapose

    ad = adjoint_rep(alg)
    report = ad.verify()
    d_f = hom_differential(ad, ad, f)
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple, Union

from .errors import DegreeError, ShapeMismatchError, SpaceMismatchError
from .graded import (
    UNIT, Key, Number, Sparse, TensorSpace, add_term, exterior_basis, parity_sign, unshuffle_terms,
)
from .linfty import LInfinityAlgebra, SkewMultiMap, Witness

logger = logging.getLogger(__name__)


@dataclass
class Intertwiner:
    """A family f^i, i ≥ 1, of skew multilinear maps 𝔤^{⊗ĩ} ⊗ source → target."""

    algebra: LInfinityAlgebra
    source: TensorSpace
    target: TensorSpace
    degree: int
    components: Dict[int, SkewMultiMap] = field(default_factory=dict)
    cap: Optional[int] = None
    complete: bool = True
    name: str = ""

    def __post_init__(self):
        if self.cap is None:
            self.cap = self.algebra.arity_cap
        for i, comp in self.components.items():
            if i < 1:
                raise ShapeMismatchError(f"Intertwiner components start at arity 1, got {i}")
            if comp.space != self.algebra.space:
                raise SpaceMismatchError(f"Component {i} lives over '{comp.space.name}', not '{self.algebra.space.name}'")
            if comp.skew_arity != i - 1 or comp.module != self.source or comp.target != self.target:
                raise ShapeMismatchError(
                    f"Component {i} has shape Λ^{comp.skew_arity}⊗{comp.module.name} → {comp.target.name}, "
                    f"expected Λ^{i - 1}⊗{self.source.name} → {self.target.name}"
                )
            if not comp.is_zero() and comp.degree != self.degree - (i - 1):
                raise DegreeError(f"Component {i} has degree {comp.degree}, expected {self.degree - (i - 1)}")

    # -- shape -------------------------------------------------------------

    def component(self, i: int) -> Optional[SkewMultiMap]:
        comp = self.components.get(i)
        if comp is None or comp.is_zero():
            return None
        return comp

    def empty_component(self, i: int) -> SkewMultiMap:
        return SkewMultiMap(self.algebra.space, i - 1, self.source, self.target, self.degree - (i - 1))

    @property
    def top(self) -> int:
        arities = [i for i in self.components if self.component(i) is not None]
        return max(arities) if arities else 0

    @property
    def low(self) -> Number:
        arities = [i for i in self.components
                   if (self.complete or i <= self.cap) and self.component(i) is not None]
        if arities:
            return min(arities)
        return math.inf if self.complete else self.cap + 1

    @property
    def exact_cap(self) -> Number:
        return math.inf if self.complete else self.cap

    def evaluate(self, i: int, xs: Tuple[str, ...], ukey: Key) -> Sparse:
        comp = self.component(i)
        return comp.evaluate(xs, ukey) if comp is not None else {}

    # -- algebra -----------------------------------------------------------

    def _check(self, other: "Intertwiner") -> None:
        if self.algebra.space != other.algebra.space:
            raise SpaceMismatchError("Intertwiners over different algebras")
        if self.source != other.source or self.target != other.target:
            raise SpaceMismatchError(
                f"Cannot combine {self.source.name}⇝{self.target.name} with {other.source.name}⇝{other.target.name}"
            )
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise DegreeError(f"Cannot add intertwiners of degrees {self.degree} and {other.degree}")

    def _combine(self, other: "Intertwiner", scale: int) -> "Intertwiner":
        self._check(other)
        degree = self.degree if not self.is_zero() else other.degree
        components = {}
        for i in sorted(set(self.components) | set(other.components)):
            left = self.components.get(i)
            right = other.components.get(i)
            if left is None:
                combined = right.scaled(scale)
            elif right is None:
                combined = left.scaled(1)
            else:
                combined = left._combine(right, scale)
            if not combined.is_zero():
                combined.degree = degree - (i - 1)
                components[i] = combined
        complete = self.complete and other.complete
        caps = [x.cap for x in (self, other) if not x.complete]
        cap = min(caps) if caps else self.algebra.arity_cap
        return Intertwiner(self.algebra, self.source, self.target, degree, components, cap, complete)

    def __add__(self, other: "Intertwiner") -> "Intertwiner":
        return self._combine(other, 1)

    def __sub__(self, other: "Intertwiner") -> "Intertwiner":
        return self._combine(other, -1)

    def __neg__(self) -> "Intertwiner":
        return self.scaled(-1)

    def scaled(self, c: Union[int, Fraction]) -> "Intertwiner":
        components = {i: comp.scaled(c) for i, comp in self.components.items()} if c else {}
        return Intertwiner(self.algebra, self.source, self.target, self.degree, components, self.cap, self.complete)

    def is_zero(self) -> bool:
        return all(comp.is_zero() for comp in self.components.values())

    @property
    def checked_up_to(self) -> int:
        """Highest arity at which every component is known exactly, bounded by the algebra's cap."""
        return int(min(self.exact_cap, self.algebra.arity_cap))

    def first_nonzero(self, up_to: Optional[int] = None) -> Optional[Witness]:
        up_to = self.checked_up_to if up_to is None else up_to
        for i in sorted(self.components):
            if i > up_to:
                break
            found = self.components[i].first_nonzero()
            if found is not None:
                key, residual = found
                return Witness(i, key, residual)
        return None

    def difference(self, other: "Intertwiner") -> "Comparison":
        """Compare two families on every arity both know exactly."""
        residual = self - other
        up_to = residual.checked_up_to
        witness = residual.first_nonzero(up_to)
        return Comparison(equal=witness is None, compared_up_to=up_to, witness=witness, residual=residual)

    def truncated(self, up_to: int) -> "Intertwiner":
        components = {i: c for i, c in self.components.items() if i <= up_to}
        complete = self.complete and self.top <= up_to
        return Intertwiner(self.algebra, self.source, self.target, self.degree, components,
                           min(self.cap, up_to), complete, self.name)


@dataclass
class Comparison:
    """Outcome of comparing two intertwiners up to a stated arity."""

    equal: bool
    compared_up_to: int
    witness: Optional[Witness] = None
    residual: Optional[Intertwiner] = None


@dataclass
class Representation:
    """A module space with a degree-1 action family ρ^i: 𝔤^{⊗ĩ} ⊗ V → V."""

    name: str
    space: TensorSpace
    action: Intertwiner
    verified: bool = False

    def __post_init__(self):
        if self.action.source != self.space or self.action.target != self.space:
            raise SpaceMismatchError(f"Action of '{self.name}' does not act on {self.space.name}")
        if self.action.degree != 1 and not self.action.is_zero():
            raise DegreeError(f"Action of '{self.name}' has degree {self.action.degree}, expected 1")

    @property
    def algebra(self) -> LInfinityAlgebra:
        return self.action.algebra

    def verify(self) -> "RepresentationReport":
        report = is_representation(self)
        self.verified = report.passed
        return report


# ============================================================================
# Component builders
# ============================================================================

def tabulate_intertwiner(alg: LInfinityAlgebra, source: TensorSpace, target: TensorSpace, degree: int,
             natural_top: Number, fn: Callable[[int, Key, Key], Sparse], start: int = 1,
             name: str = "") -> Intertwiner:
    """Tabulate components start..min(natural_top, cap); complete iff nothing lies above the cap."""
    cap = alg.arity_cap
    components = {}
    last = int(min(natural_top, cap))
    for i in range(start, last + 1):
        comp = SkewMultiMap.tabulate(alg.space, i - 1, source, target, degree - (i - 1),
                                     lambda x, u, i=i: fn(i, x, u))
        if not comp.is_zero():
            components[i] = comp
    return Intertwiner(alg, source, target, degree, components, cap, natural_top <= cap, name)


def _g(alg: LInfinityAlgebra) -> TensorSpace:
    return TensorSpace((alg.space,))


def identity_intertwiner(alg: LInfinityAlgebra, U: TensorSpace) -> Intertwiner:
    """𝟙_U: the identity in arity 1, nothing above."""
    return tabulate_intertwiner(alg, U, U, 0, 1, lambda i, x, u: {u: Fraction(1)}, name=f"1_{U.name}")


def zero_intertwiner(alg: LInfinityAlgebra, U: TensorSpace, V: TensorSpace, degree: int) -> Intertwiner:
    return Intertwiner(alg, U, V, degree, {}, alg.arity_cap, True)


def ell_U(alg: LInfinityAlgebra, U: TensorSpace) -> Intertwiner:
    """ℓ_U^i := ℓ^{ĩ} ⊗ 1_U for i ≥ 2, an intertwiner U ⇝ (𝔤⊗U)[2]."""
    top = alg.top_arity + 1 if alg.top_arity else 0

    def fn(i: int, x: Key, u: Key) -> Sparse:
        return {w + u: c for w, c in alg.evaluate(x).items()}

    return tabulate_intertwiner(alg, U, _g(alg) @ U, 2, top, fn, start=2, name=f"ell_{U.name}")


def gamma(alg: LInfinityAlgebra, U: TensorSpace, V: TensorSpace) -> Intertwiner:
    """γ_{U,V}: u⊗v ↦ (-1)^{|u||v|} v⊗u in arity 1."""
    def fn(i: int, x: Key, uv: Key) -> Sparse:
        u, v = uv[:U.arity], uv[U.arity:]
        return {v + u: Fraction(parity_sign(U.degree(u) * V.degree(v)))}

    return tabulate_intertwiner(alg, U @ V, V @ U, 0, 1, fn, name=f"gamma_{U.name},{V.name}")


def varrho_of(f: Intertwiner) -> Intertwiner:
    """ϱ_f^i := (-1)^i f^{i+1}, read as a family 𝔤⊗U ⇝ V of degree |f| - 1."""
    alg = f.algebra
    source = _g(alg) @ f.source
    natural = f.top - 1 if f.complete else math.inf
    last = int(min(natural, f.exact_cap - 1, alg.arity_cap))
    components = {}
    for i in range(1, last + 1):
        inner = f.component(i + 1)
        if inner is None:
            continue
        sign = parity_sign(i)
        comp = SkewMultiMap.tabulate(
            alg.space, i - 1, source, f.target, f.degree - i,
            lambda x, xu: {k: sign * v for k, v in inner.evaluate(x + xu[:1], xu[1:]).items()},
        )
        if not comp.is_zero():
            components[i] = comp
    cap = alg.arity_cap if f.complete else max(f.cap - 1, 0)
    complete = f.complete and natural <= alg.arity_cap
    return Intertwiner(alg, source, f.target, f.degree - 1, components, cap, complete,
                       f"varrho({f.name})" if f.name else "")


def varrho_rep(U: Representation) -> Intertwiner:
    """ϱ_U^i := (-1)^{ĩ} ρ_U^{i+1}, so ϱ_U = -ϱ_{ρ_U}."""
    out = -varrho_of(U.action)
    out.name = f"varrho_{U.name}"
    return out


# ============================================================================
# Composition
# ============================================================================

def _composite_range(g: Intertwiner, f: Intertwiner) -> Tuple[int, int, bool]:
    """(last arity to compute, exact cap of the result, completeness)."""
    cap = g.algebra.arity_cap
    bound = min(g.exact_cap + f.low - 1, f.exact_cap + g.low - 1)
    if (g.complete and g.top == 0) or (f.complete and f.top == 0):
        natural: Number = 0
    elif g.complete and f.complete:
        natural = g.top + f.top - 1
    else:
        natural = math.inf
    exact = min(bound, cap)
    return int(min(exact, natural)), int(exact), natural <= exact


def _require_same_algebra(a: Intertwiner, b: Intertwiner) -> None:
    if a.algebra.space != b.algebra.space:
        raise SpaceMismatchError("Intertwiners over different algebras")


def juxtapose(g: Intertwiner, f: Intertwiner) -> Intertwiner:
    """
    (gf)^i = Σ_{j̃+k=i} (-1)^{(|g|-j̃)k̃} g^j [1_{j̃} ⊗ f^k] [Σ_{j̃,k̃} ⊗ 1_U].
    """
    _require_same_algebra(g, f)
    if f.target != g.source:
        raise SpaceMismatchError(f"Cannot compose {g.source.name}⇝{g.target.name} after "
                                 f"{f.source.name}⇝{f.target.name}")
    alg = g.algebra
    space = alg.space
    last, exact, complete = _composite_range(g, f)
    degree = g.degree + f.degree
    components = {}
    for i in range(1, last + 1):
        def fn(x: Key, u: Key, i: int = i) -> Sparse:
            degrees = tuple(space.degree_of(a) for a in x)
            acc: Sparse = {}
            for j in range(1, i + 1):
                k = i - j + 1
                gj, fk = g.component(j), f.component(k)
                if gj is None or fk is None:
                    continue
                outer = parity_sign((g.degree - (j - 1)) * (k - 1))
                for (y, z), eps in unshuffle_terms(x, degrees, (j - 1, k - 1)):
                    d_y = sum(space.degree_of(a) for a in y)
                    sign = outer * eps * parity_sign((f.degree - (k - 1)) * d_y)
                    for w, c in fk.evaluate(z, u).items():
                        gj.evaluate_into(acc, y, w, sign * c)
            return acc

        comp = SkewMultiMap.tabulate(space, i - 1, f.source, g.target, degree - (i - 1), fn)
        if not comp.is_zero():
            components[i] = comp
    return Intertwiner(alg, f.source, g.target, degree, components, exact, complete)


def odot(f: Intertwiner, g: Intertwiner) -> Intertwiner:
    """
    (f⊙g)^i = Σ_{j̃+k̃=ĩ} (-1)^{(|f|-j̃)k̃} [f^j ⊗ g^k] [1 ⊗ s ⊗ 1] [Σ_{j̃,k̃} ⊗ 1_{U⊗V}].
    """
    _require_same_algebra(f, g)
    alg = f.algebra
    space = alg.space
    U = f.source
    last, exact, complete = _composite_range(f, g)
    degree = f.degree + g.degree
    components = {}
    for i in range(1, last + 1):
        def fn(x: Key, uv: Key, i: int = i) -> Sparse:
            u, v = uv[:U.arity], uv[U.arity:]
            d_u = U.degree(u)
            degrees = tuple(space.degree_of(a) for a in x)
            acc: Sparse = {}
            for j in range(1, i + 1):
                k = i - j + 1
                fj, gk = f.component(j), g.component(k)
                if fj is None or gk is None:
                    continue
                outer = parity_sign((f.degree - (j - 1)) * (k - 1))
                for (y, z), eps in unshuffle_terms(x, degrees, (j - 1, k - 1)):
                    d_y = sum(space.degree_of(a) for a in y)
                    d_z = sum(space.degree_of(a) for a in z)
                    sign = outer * eps * parity_sign(d_u * d_z + (g.degree - (k - 1)) * (d_y + d_u))
                    left = fj.evaluate(y, u)
                    if not left:
                        continue
                    right = gk.evaluate(z, v)
                    for a, ca in left.items():
                        for b, cb in right.items():
                            add_term(acc, a + b, sign * ca * cb)
            return acc

        comp = SkewMultiMap.tabulate(space, i - 1, f.source @ g.source, f.target @ g.target,
                                     degree - (i - 1), fn)
        if not comp.is_zero():
            components[i] = comp
    return Intertwiner(alg, f.source @ g.source, f.target @ g.target, degree, components, exact, complete)


def lambda_of(f: Intertwiner) -> Intertwiner:
    """λ_f := ϱ_f γ_{U,𝔤}, a family U⊗𝔤 ⇝ V of degree |f| - 1."""
    alg = f.algebra
    return juxtapose(varrho_of(f), gamma(alg, f.source, _g(alg)))


def lambda_rep(U: Representation) -> Intertwiner:
    """λ_U := ϱ_U γ_{U,𝔤}."""
    alg = U.algebra
    return juxtapose(varrho_rep(U), gamma(alg, U.space, _g(alg)))


# ============================================================================
# Differential and predicates
# ============================================================================

def hom_differential(U: Representation, V: Representation, f: Intertwiner) -> Intertwiner:
    """⟦ρ,f⟧ := ρ_V f - (-1)^{|f|} f ρ_U - ϱ_f ℓ_U."""
    if f.source != U.space or f.target != V.space:
        raise SpaceMismatchError(f"{f.source.name}⇝{f.target.name} is not a map {U.name} ⇝ {V.name}")
    alg = f.algebra
    left = juxtapose(V.action, f)
    right = juxtapose(f, U.action).scaled(parity_sign(f.degree))
    correction = juxtapose(varrho_of(f), ell_U(alg, U.space))
    return left - right - correction


@dataclass
class EquivarianceReport:
    passed: bool
    compared_up_to: int
    witness: Optional[Witness] = None


def is_equivariant(U: Representation, V: Representation, f: Intertwiner) -> EquivarianceReport:
    """Degree-0 f with ⟦ρ,f⟧ = 0 on every exactly known arity."""
    if f.degree != 0 and not f.is_zero():
        raise DegreeError(f"Equivariance is defined for degree 0, got {f.degree}")
    residual = hom_differential(U, V, f)
    up_to = residual.checked_up_to
    witness = residual.first_nonzero(up_to)
    return EquivarianceReport(passed=witness is None, compared_up_to=up_to, witness=witness)


@dataclass
class RepresentationReport:
    """Both routes of the representation predicate with their agreement."""

    representation: str
    passed: bool
    compared_up_to: int
    routes_agree: bool
    witness: Optional[Witness] = None
    incidents: List[str] = field(default_factory=list)


def representation_residual(rep: Representation) -> Intertwiner:
    """ρρ - ϱ_ρ ℓ_V."""
    alg = rep.algebra
    rho = rep.action
    return juxtapose(rho, rho) - juxtapose(varrho_of(rho), ell_U(alg, rep.space))


def allocca_residual(rep: Representation, up_to: int) -> Dict[int, Dict[Tuple[Key, Key], Sparse]]:
    """
    Σ_{j̃+k=i} (-1)^{jk̃} ρ^j (1_{j̃} ⊗ ρ^k) Σ_{j̃,k}, with ρ^k on 𝔤 inputs read as π₁^k.

    Summed directly, splitting each term by where the inner map lands.
    """
    alg = rep.algebra
    space = alg.space
    rho = rep.action
    pi1 = alg.pi1()
    out: Dict[int, Dict[Tuple[Key, Key], Sparse]] = {}
    for i in range(1, up_to + 1):
        cells: Dict[Tuple[Key, Key], Sparse] = {}
        for x in exterior_basis(space, i - 1):
            degrees = tuple(space.degree_of(a) for a in x)
            for v in rep.space.basis():
                acc: Sparse = {}
                # inner map acting on the module slot
                for j in range(1, i + 1):
                    k = i - j + 1
                    rj, rk = rho.component(j), rho.component(k)
                    if rj is None or rk is None:
                        continue
                    outer = parity_sign(j * (k - 1))
                    for (y, z), eps in unshuffle_terms(x, degrees, (j - 1, k - 1)):
                        d_y = sum(space.degree_of(a) for a in y)
                        sign = outer * eps * parity_sign((1 - (k - 1)) * d_y)
                        for w, c in rk.evaluate(z, v).items():
                            rj.evaluate_into(acc, y, w, sign * c)
                # inner map acting on 𝔤 inputs only
                for big_k in range(1, i):
                    big_j = i - big_k + 1
                    rj, pk = rho.component(big_j), pi1.get(big_k)
                    if rj is None or pk is None or pk.is_zero():
                        continue
                    outer = parity_sign((big_j - 1) * (big_k - 1))
                    for (y, z), eps in unshuffle_terms(x, degrees, (big_j - 2, big_k)):
                        d_y = sum(space.degree_of(a) for a in y)
                        sign = outer * eps * parity_sign((2 - big_k) * d_y)
                        for (w,), c in pk.evaluate(z).items():
                            rj.evaluate_into(acc, y + (w,), v, sign * c)
                if acc:
                    cells[(x, v)] = acc
        if cells:
            out[i] = cells
    return out


def is_representation(rep: Representation) -> RepresentationReport:
    """ρ_Vρ_V = ϱ_{ρ_V} ℓ_V, checked along the composite and the direct sum."""
    residual = representation_residual(rep)
    up_to = residual.checked_up_to
    direct = allocca_residual(rep, up_to)
    composite = {i: {k: v for k, v in residual.components[i].entries.items() if v}
                 for i in residual.components if i <= up_to}
    composite = {i: cells for i, cells in composite.items() if cells}
    incidents = []
    if composite != direct:
        message = f"Composite and direct representation routes disagree for '{rep.name}'"
        logger.error(message)
        incidents.append(message)
    witness = residual.first_nonzero(up_to)
    report = RepresentationReport(
        representation=rep.name,
        passed=witness is None and not direct,
        compared_up_to=up_to,
        routes_agree=not incidents,
        witness=witness,
        incidents=incidents,
    )
    logger.debug(f"Representation check for '{rep.name}': passed={report.passed}, up to arity {up_to}")
    return report


# ============================================================================
# Representations
# ============================================================================

def adjoint_rep(alg: LInfinityAlgebra) -> Representation:
    """ρ_𝔤^i := π₁^i, i.e. ρ^i(x_1..x_ĩ; x) = (-1)^{ĩ} ℓ^i(x_1..x_ĩ, x)."""
    g = _g(alg)

    def fn(i: int, x: Key, u: Key) -> Sparse:
        sign = parity_sign(i - 1)
        return {w: sign * c for w, c in alg.evaluate(x + u).items()}

    action = tabulate_intertwiner(alg, g, g, 1, alg.top_arity, fn, name=f"rho_{alg.name}")
    return Representation(f"ad({alg.name})", g, action)


def trivial_rep(alg: LInfinityAlgebra) -> Representation:
    """The unit 𝕂 with vanishing action."""
    return Representation("K", UNIT, zero_intertwiner(alg, UNIT, UNIT, 1), verified=True)


def tensor_rep(U: Representation, V: Representation) -> Representation:
    """ρ_{U,V} := ρ_U ⊙ 𝟙_V + 𝟙_U ⊙ ρ_V."""
    alg = U.algebra
    action = (odot(U.action, identity_intertwiner(alg, V.space))
              + odot(identity_intertwiner(alg, U.space), V.action))
    return Representation(f"{U.name}⊙{V.name}", U.space @ V.space, action)

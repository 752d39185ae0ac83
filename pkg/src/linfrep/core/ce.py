"""
Chevalley–Eilenberg algebras, modules and morphisms.

CE_𝔤 is the free graded-commutative algebra on generators θ^α of degree
1 - |x_α|, cut off at word length W, with the differential δ read off the
brackets. A representation V gives the semi-free CE_𝔤-module CE_𝔤 ⊗ V and an
intertwiner f gives the CE_𝔤-linear map CE^f, both tabulated on generators.

Every table stores ordered sums over 𝔤-words divided by the word-length
factorial, so the stored coefficients are those of sorted monomials.

Usage:
    from linfrep.core.ce import build_ce_algebra, build_ce_module, check_delta_squared

    A = build_ce_algebra(alg, 6)
    verdict = check_delta_squared(A)
    M = build_ce_module(adjoint_rep(alg), A)
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from .errors import ShapeMismatchError, SpaceMismatchError
from .graded import (
    GradedSpace, Key, Number, Sparse, TensorSpace, add_into, add_term, drop_zeros, parity_sign, scaled,
    sparse_sub, sym_normalize,
)
from .linfty import LInfinityAlgebra, SkewMultiMap
from .repcat import (
    Intertwiner, Representation, gamma, hom_differential, identity_intertwiner, juxtapose, odot,
    tensor_rep, trivial_rep,
)

logger = logging.getLogger(__name__)

Monomial = Tuple[str, ...]
ModuleKey = Tuple[Monomial, Key]


# ============================================================================
# Sign conventions
# ============================================================================

class CEConventions(BaseModel):
    """Switches for each sign in the CE formulas. All True is the correct convention."""

    model_config = ConfigDict(frozen=True)

    delta_position: bool = Field(default=True, description="Σ_l |x_l|·l in the δθ^α coefficients")
    delta_reversal: bool = Field(default=True, description="Reversal degree in the δθ^α coefficients")
    delta_leibniz: bool = Field(default=True, description="(-1)^{|a|} in δ(aa') = δa·a' + (-1)^{|a|} a·δa'")
    module_position: bool = Field(default=True, description="Σ_l |x_l|·(l-1) in dv")
    module_reversal: bool = Field(default=True, description="Reversal degree in dv")
    module_leibniz: bool = Field(default=True, description="(-1)^{|a|} in d(a·v) = δa·v + (-1)^{|a|} a·dv")
    morphism_position: bool = Field(default=True, description="Σ_l |x_l|·l in CE^f(u)")
    morphism_degree: bool = Field(default=True, description="Σ_l |x_l|·|f| in CE^f(u)")
    morphism_reversal: bool = Field(default=True, description="Reversal degree in CE^f(u)")
    morphism_linearity: bool = Field(default=True, description="(-1)^{|f||a|} in CE^f(a·u)")

    @classmethod
    def switches(cls) -> List[str]:
        return list(cls.model_fields)

    def flipped(self, switch: str) -> "CEConventions":
        if switch not in self.switches():
            available = ", ".join(self.switches())
            raise ValueError(f"Unknown convention switch: '{switch}'. Available: {available}")
        return self.model_copy(update={switch: not getattr(self, switch)})

    @property
    def mutated(self) -> List[str]:
        return [name for name in self.switches() if not getattr(self, name)]


DEFAULT_CONVENTIONS = CEConventions()


def reversal_degree(degrees: Sequence[int]) -> int:
    """|x_1 ... x_i|_rev = Σ_l |x_l| · (|x_{l+1}| + ... + |x_i|)."""
    total = 0
    tail = 0
    for d in reversed(list(degrees)):
        total += d * tail
        tail += d
    return total


def _word_sign(degrees: Sequence[int], position: bool, reversal: bool, offset: int,
               extra: int = 0) -> int:
    """(-1) to Σ_l |x_l|(l + offset) (if position) + rev (if reversal) + Σ_l |x_l|·extra."""
    exponent = extra * sum(degrees)
    if position:
        exponent += sum(d * (l + offset) for l, d in enumerate(degrees, start=1))
    if reversal:
        exponent += reversal_degree(degrees)
    return parity_sign(exponent)


def _family_reach(f: Intertwiner) -> Number:
    """Longest θ-word on which CE^f is exact."""
    return math.inf if f.complete else f.cap - 1


# ============================================================================
# The CE algebra
# ============================================================================

@dataclass(eq=False)
class CEAlgebra:
    """Word-length truncated CE_𝔤 with δ tabulated on the generators."""

    algebra: LInfinityAlgebra
    word_cap: int
    theta: GradedSpace
    delta_table: Dict[str, Sparse] = field(default_factory=dict)
    conventions: CEConventions = DEFAULT_CONVENTIONS
    _delta_cache: Dict[Monomial, Sparse] = field(default_factory=dict, repr=False)

    @property
    def generators(self) -> Tuple[str, ...]:
        return self.theta.labels

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(self.theta.degree_of(label) for label in mono)

    def product(self, *monos: Monomial) -> Optional[Tuple[Monomial, int]]:
        """Sorted product and sign, or None past the word cap or on a repeated odd θ."""
        word = tuple(itertools.chain.from_iterable(monos))
        if len(word) > self.word_cap:
            return None
        return sym_normalize(word, self.theta)

    def element(self, terms: Optional[Sparse] = None) -> "CEElement":
        return CEElement(self, dict(terms or {}))

    def unit(self) -> "CEElement":
        return self.element({(): Fraction(1)})

    def generator(self, label: str) -> "CEElement":
        self.theta.index_of(label)
        return self.element({(label,): Fraction(1)})

    def delta_of_monomial(self, mono: Monomial) -> Sparse:
        cached = self._delta_cache.get(mono)
        if cached is not None:
            return cached
        out: Sparse = {}
        left_degree = 0
        for pos, label in enumerate(mono):
            left, right = mono[:pos], mono[pos + 1:]
            sign = parity_sign(left_degree) if self.conventions.delta_leibniz else 1
            for middle, c in self.delta_table.get(label, {}).items():
                prod = self.product(left, middle, right)
                if prod is not None:
                    add_term(out, prod[0], sign * prod[1] * c)
            left_degree += self.theta.degree_of(label)
        self._delta_cache[mono] = out
        return out


@dataclass(eq=False)
class CEElement:
    """A sparse combination of sorted θ-monomials."""

    algebra: CEAlgebra
    terms: Sparse = field(default_factory=dict)

    def __post_init__(self):
        self.terms = drop_zeros(self.terms)
        for mono in self.terms:
            if len(mono) > self.algebra.word_cap:
                raise ShapeMismatchError(f"Monomial {mono} exceeds word cap {self.algebra.word_cap}")

    @property
    def degree(self) -> Optional[int]:
        degrees = {self.algebra.monomial_degree(m) for m in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    @property
    def word_length(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "CEElement") -> None:
        if other.algebra is not self.algebra:
            raise SpaceMismatchError("CE elements of different algebras")

    def __add__(self, other: "CEElement") -> "CEElement":
        self._check(other)
        out = dict(self.terms)
        add_into(out, other.terms)
        return CEElement(self.algebra, out)

    def __sub__(self, other: "CEElement") -> "CEElement":
        self._check(other)
        return CEElement(self.algebra, sparse_sub(self.terms, other.terms))

    def __neg__(self) -> "CEElement":
        return self.scale(-1)

    def scale(self, c: Union[int, Fraction]) -> "CEElement":
        return CEElement(self.algebra, scaled(self.terms, c))

    def __mul__(self, other: "CEElement") -> "CEElement":
        self._check(other)
        out: Sparse = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                prod = self.algebra.product(m1, m2)
                if prod is not None:
                    add_term(out, prod[0], prod[1] * c1 * c2)
        return CEElement(self.algebra, out)

    def truncated(self, length: Number) -> "CEElement":
        return CEElement(self.algebra, {m: c for m, c in self.terms.items() if len(m) <= length})

    def __str__(self) -> str:
        return format_terms({(m, ()): c for m, c in self.terms.items()})


def format_terms(terms: Dict[ModuleKey, Fraction]) -> str:
    if not terms:
        return "0"
    parts = []
    for (mono, ukey), c in sorted(terms.items(), key=lambda kv: (len(kv[0][0]), kv[0])):
        word = "".join(f"θ^{label}" for label in mono) or "1"
        parts.append(f"{c}·{word}" + (f"⊗{'⊗'.join(ukey)}" if ukey else ""))
    return " + ".join(parts)


def _ordered_words(space: GradedSpace, length: int, theta: GradedSpace) -> Iterator[Tuple[Key, Monomial, int]]:
    """Every ordered 𝔤-word of the given length whose θ-product survives, with its sorted form."""
    for word in itertools.product(space.labels, repeat=length):
        norm = sym_normalize(word, theta)
        if norm is not None:
            yield word, norm[0], norm[1]


def theta_space(alg: LInfinityAlgebra) -> GradedSpace:
    """θ^α := ςx^α, of degree 1 - |x_α|."""
    return GradedSpace(f"θ({alg.name})", alg.space.labels, tuple(1 - d for d in alg.space.degrees))


def build_ce_algebra(alg: LInfinityAlgebra, word_cap: int,
                     conventions: CEConventions = DEFAULT_CONVENTIONS) -> CEAlgebra:
    """
    δθ^α = Σ_i (1/i!) Σ (-1)^{Σ_l |x_l| l + rev} ℓ^α(x_{α_1}..x_{α_i}) θ^{α_1}..θ^{α_i}.
    """
    if word_cap < 0:
        raise ShapeMismatchError(f"Word cap must be non-negative, got {word_cap}")
    theta = theta_space(alg)
    table: Dict[str, Sparse] = {label: {} for label in alg.space.labels}
    for i in range(1, min(word_cap, alg.arity_cap) + 1):
        if alg.bracket(i) is None:
            continue
        weight = Fraction(1, math.factorial(i))
        for word, mono, chi in _ordered_words(alg.space, i, theta):
            image = alg.evaluate(word)
            if not image:
                continue
            degrees = [alg.space.degree_of(x) for x in word]
            sign = _word_sign(degrees, conventions.delta_position, conventions.delta_reversal, 0)
            for (alpha,), c in image.items():
                add_term(table[alpha], mono, sign * chi * c * weight)
    logger.debug(f"CE algebra of '{alg.name}' at word cap {word_cap}: "
                 f"{sum(len(v) for v in table.values())} δ-terms")
    return CEAlgebra(alg, word_cap, theta, table, conventions)


def apply_delta(A: CEAlgebra, e: CEElement) -> CEElement:
    """Leibniz extension of δ, re-truncated at the word cap."""
    if e.algebra is not A:
        raise SpaceMismatchError("Element does not belong to this CE algebra")
    out: Sparse = {}
    for mono, c in e.terms.items():
        add_into(out, A.delta_of_monomial(mono), c)
    return CEElement(A, out)


# ============================================================================
# Verdicts
# ============================================================================

@dataclass
class CEVerdict:
    """Outcome of one CE identity, exact on word lengths ≤ compared_up_to."""

    name: str
    passed: bool
    compared_up_to: Number
    witness: Optional[str] = None
    failing_lengths: Tuple[int, ...] = ()

    def describe(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] {self.name} (word length ≤ {self.compared_up_to})"
        return text if self.witness is None else f"{text}: {self.witness}"


def _first_residual(name: str, residuals: List[Tuple[str, Dict[ModuleKey, Fraction]]],
                    up_to: Number) -> CEVerdict:
    lengths = set()
    witness = None
    for where, terms in residuals:
        terms = {k: v for k, v in terms.items() if len(k[0]) <= up_to and v}
        if terms:
            lengths.update(len(k[0]) for k in terms)
            if witness is None:
                witness = f"{where} leaves {format_terms(terms)}"
    return CEVerdict(name, witness is None, up_to, witness, tuple(sorted(lengths)))


def check_delta_squared(A: CEAlgebra) -> CEVerdict:
    residuals = []
    for label in A.generators:
        square = apply_delta(A, apply_delta(A, A.generator(label)))
        residuals.append((f"δ²(θ^{label})", {(m, ()): c for m, c in square.terms.items()}))
    verdict = _first_residual("delta_squared", residuals, A.word_cap)
    logger.debug(f"δ² on '{A.algebra.name}': passed={verdict.passed}")
    return verdict


# ============================================================================
# Modules
# ============================================================================

@dataclass(eq=False)
class CEModule:
    """CE_𝔤 ⊗ V with d tabulated on the generators v."""

    base: CEAlgebra
    representation: Representation
    d_table: Dict[Key, Dict[ModuleKey, Fraction]] = field(default_factory=dict)
    exact_length: Number = math.inf
    square_zero: Optional[CEVerdict] = None

    @property
    def space(self) -> TensorSpace:
        return self.representation.space

    @property
    def name(self) -> str:
        return self.representation.name

    def generator(self, ukey: Key) -> "CEModuleElement":
        return CEModuleElement(self, {((), tuple(ukey)): Fraction(1)})

    def generators(self) -> Tuple[Key, ...]:
        return self.space.basis()

    def key_degree(self, key: ModuleKey) -> int:
        return self.base.monomial_degree(key[0]) + self.space.degree(key[1])


@dataclass(eq=False)
class CEModuleElement:
    module: CEModule
    terms: Dict[ModuleKey, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        self.terms = drop_zeros(self.terms)

    @property
    def degree(self) -> Optional[int]:
        degrees = {self.module.key_degree(k) for k in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "CEModuleElement") -> None:
        if other.module is not self.module:
            raise SpaceMismatchError(f"Elements of CE modules '{self.module.name}' and '{other.module.name}'")

    def __add__(self, other: "CEModuleElement") -> "CEModuleElement":
        self._check(other)
        out = dict(self.terms)
        add_into(out, other.terms)
        return CEModuleElement(self.module, out)

    def __sub__(self, other: "CEModuleElement") -> "CEModuleElement":
        self._check(other)
        return CEModuleElement(self.module, sparse_sub(self.terms, other.terms))

    def scale(self, c: Union[int, Fraction]) -> "CEModuleElement":
        return CEModuleElement(self.module, scaled(self.terms, c))

    def left_multiply(self, a: CEElement) -> "CEModuleElement":
        """a · x, using the base product on the θ-part."""
        A = self.module.base
        out: Dict[ModuleKey, Fraction] = {}
        for m1, c1 in a.terms.items():
            for (m2, ukey), c2 in self.terms.items():
                prod = A.product(m1, m2)
                if prod is not None:
                    add_term(out, (prod[0], ukey), prod[1] * c1 * c2)
        return CEModuleElement(self.module, out)

    def truncated(self, length: Number) -> "CEModuleElement":
        return CEModuleElement(self.module, {k: c for k, c in self.terms.items() if len(k[0]) <= length})

    def __str__(self) -> str:
        return format_terms(self.terms)


def _tabulate_on_generators(A: CEAlgebra, f: Intertwiner, sign_of) -> Tuple[Dict[Key, Dict[ModuleKey, Fraction]], Number]:
    """u ↦ Σ_i (1/ĩ!) Σ sign θ^{α_1}..θ^{α_ĩ} f^i(x_α; u) over ordered words."""
    alg = A.algebra
    reach = min(A.word_cap, _family_reach(f))
    table: Dict[Key, Dict[ModuleKey, Fraction]] = {u: {} for u in f.source.basis()}
    arities = sorted(i for i in f.components if f.component(i) is not None and i - 1 <= reach)
    for i in arities:
        weight = Fraction(1, math.factorial(i - 1))
        for word, mono, chi in _ordered_words(alg.space, i - 1, A.theta):
            degrees = [alg.space.degree_of(x) for x in word]
            sign = sign_of(degrees) * chi
            for ukey in table:
                for vkey, c in f.evaluate(i, word, ukey).items():
                    add_term(table[ukey], (mono, vkey), sign * c * weight)
    return table, reach


def build_ce_module(rep: Representation, A: CEAlgebra) -> CEModule:
    """dv = Σ_i (1/ĩ!) Σ (-1)^{rev + Σ_l |x_l| l̃} θ^{α_1}..θ^{α_ĩ} ρ^i(x_α; v)."""
    if rep.algebra.space != A.algebra.space:
        raise SpaceMismatchError(f"Representation '{rep.name}' is not over '{A.algebra.name}'")
    if not rep.verified:
        logger.debug(f"Building the CE module of unverified representation '{rep.name}'")
    conv = A.conventions
    table, reach = _tabulate_on_generators(
        A, rep.action, lambda degrees: _word_sign(degrees, conv.module_position, conv.module_reversal, -1)
    )
    module = CEModule(A, rep, table, reach)
    module.square_zero = check_module_square_zero(module)
    return module


def apply_d(M: CEModule, x: CEModuleElement) -> CEModuleElement:
    """d(a·v) = δa·v + (-1)^{|a|} a·dv."""
    if x.module is not M:
        raise SpaceMismatchError(f"Element does not belong to CE module '{M.name}'")
    A = M.base
    out: Dict[ModuleKey, Fraction] = {}
    for (mono, ukey), c in x.terms.items():
        for m, cd in A.delta_of_monomial(mono).items():
            add_term(out, (m, ukey), c * cd)
        sign = parity_sign(A.monomial_degree(mono)) if A.conventions.module_leibniz else 1
        for (m2, vkey), cv in M.d_table[ukey].items():
            prod = A.product(mono, m2)
            if prod is not None:
                add_term(out, (prod[0], vkey), sign * prod[1] * c * cv)
    return CEModuleElement(M, out)


def check_module_square_zero(M: CEModule) -> CEVerdict:
    residuals = []
    for ukey in M.generators():
        dd = apply_d(M, apply_d(M, M.generator(ukey)))
        residuals.append((f"d²({'⊗'.join(ukey) or '1'})", dd.terms))
    return _first_residual(f"square_zero[{M.name}]", residuals, min(M.base.word_cap, M.exact_length))


# ============================================================================
# Morphisms
# ============================================================================

@dataclass(eq=False)
class CEMorphism:
    """A CE_𝔤-linear map of degree |f| given on the source generators."""

    source: CEModule
    target: CEModule
    degree: int
    table: Dict[Key, Dict[ModuleKey, Fraction]] = field(default_factory=dict)
    exact_length: Number = math.inf
    name: str = ""

    def on_generator(self, ukey: Key) -> CEModuleElement:
        return CEModuleElement(self.target, dict(self.table.get(tuple(ukey), {})))

    def apply(self, x: CEModuleElement) -> CEModuleElement:
        """CE^f(a·u) = (-1)^{|f||a|} a·CE^f(u)."""
        if x.module is not self.source:
            raise SpaceMismatchError(f"CE^{self.name} does not act on '{x.module.name}'")
        A = self.source.base
        linear = A.conventions.morphism_linearity
        out: Dict[ModuleKey, Fraction] = {}
        for (mono, ukey), c in x.terms.items():
            sign = parity_sign(self.degree * A.monomial_degree(mono)) if linear else 1
            for (m2, vkey), cv in self.table.get(ukey, {}).items():
                prod = A.product(mono, m2)
                if prod is not None:
                    add_term(out, (prod[0], vkey), sign * prod[1] * c * cv)
        return CEModuleElement(self.target, out)


def ce_of_morphism(f: Intertwiner, source: CEModule, target: CEModule) -> CEMorphism:
    """CE^f(u) = Σ_i (1/ĩ!) Σ (-1)^{rev + Σ_l |x_l|(l + |f|)} θ^{α_1}..θ^{α_ĩ} f^i(x_α; u)."""
    if f.source != source.space or f.target != target.space:
        raise SpaceMismatchError(
            f"Intertwiner {f.source.name}⇝{f.target.name} does not match modules "
            f"{source.space.name}, {target.space.name}"
        )
    if source.base is not target.base:
        raise SpaceMismatchError("CE modules over different CE algebras")
    conv = source.base.conventions
    extra = f.degree if conv.morphism_degree else 0
    table, reach = _tabulate_on_generators(
        source.base, f, lambda degrees: _word_sign(degrees, conv.morphism_position, conv.morphism_reversal, 0, extra)
    )
    return CEMorphism(source, target, f.degree, table, reach, f.name)


# ============================================================================
# Augmentation, decoding and export
# ============================================================================

def augmentation(e: CEElement) -> Fraction:
    """The projection CE_𝔤 → 𝕂 killing every generator."""
    return e.terms.get((), Fraction(0))


@dataclass
class AugmentationReport:
    augmented: bool
    offending: List[str]


def augmentation_report(A: CEAlgebra) -> AugmentationReport:
    """δθ^α has no scalar part exactly when ε∘δ = 0, i.e. the algebra is augmented."""
    offending = [label for label in A.generators if A.delta_table.get(label, {}).get(())]
    return AugmentationReport(not offending, offending)


def decode_brackets(A: CEAlgebra) -> LInfinityAlgebra:
    """Recover ℓ^i from the δ table: one sorted monomial per canonical input word."""
    alg = A.algebra
    g = TensorSpace((alg.space,))
    brackets: Dict[int, SkewMultiMap] = {}
    for alpha, terms in A.delta_table.items():
        for mono, c in terms.items():
            i = len(mono)
            multiplicity = 1
            for label in set(mono):
                multiplicity *= math.factorial(mono.count(label))
            degrees = [alg.space.degree_of(x) for x in mono]
            sign = _word_sign(degrees, True, True, 0)
            bracket = brackets.setdefault(i, SkewMultiMap(alg.space, i, TensorSpace(), g, 2 - i))
            bracket.add(mono, (), {(alpha,): c * multiplicity * sign})
    return LInfinityAlgebra(f"decoded({alg.name})", alg.space, brackets, alg.arity_cap)


def _export_terms(terms: Dict[ModuleKey, Fraction]) -> List[Dict]:
    return [{"monomial": list(mono), "output": list(ukey), "coeff": str(c)}
            for (mono, ukey), c in sorted(terms.items(), key=lambda kv: (len(kv[0][0]), kv[0]))]


def export_presentation(A: CEAlgebra, modules: Sequence[CEModule] = ()) -> Dict:
    """Generators and δ/d tables as plain data for YAML or JSON output."""
    return {
        "algebra": A.algebra.name,
        "word_cap": A.word_cap,
        "generators": [{"label": label, "degree": A.theta.degree_of(label)} for label in A.generators],
        "delta": {label: _export_terms({(m, ()): c for m, c in A.delta_table[label].items()})
                  for label in A.generators},
        "modules": {
            M.name: {
                "generators": [{"label": list(u), "degree": M.space.degree(u)} for u in M.generators()],
                "d": {"⊗".join(u): _export_terms(M.d_table[u]) for u in M.generators()},
            }
            for M in modules
        },
    }


# ============================================================================
# Equivalence suite
# ============================================================================

@dataclass
class CECase:
    """Two composable intertwiners f: U ⇝ V and g: V ⇝ W between representations."""

    name: str
    source: Representation
    middle: Representation
    target: Representation
    f: Intertwiner
    g: Intertwiner


@dataclass
class CESuiteReport:
    algebra: str
    word_cap: int
    conventions: CEConventions
    verdicts: List[CEVerdict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    @property
    def failures(self) -> List[CEVerdict]:
        return [v for v in self.verdicts if not v.passed]


def relative_tensor(x: CEModuleElement, y: CEModuleElement, module: CEModule) -> CEModuleElement:
    """(a u)⊗(b v) = (-1)^{|u||b|} ab (u⊗v) inside CE(U⊙V)."""
    A = module.base
    out: Dict[ModuleKey, Fraction] = {}
    for (m1, ukey), c1 in x.terms.items():
        u_degree = x.module.space.degree(ukey)
        for (m2, vkey), c2 in y.terms.items():
            prod = A.product(m1, m2)
            if prod is not None:
                sign = parity_sign(u_degree * A.monomial_degree(m2)) * prod[1]
                add_term(out, (prod[0], ukey + vkey), sign * c1 * c2)
    return CEModuleElement(module, out)


class _ModuleCache:
    def __init__(self, A: CEAlgebra):
        self.A = A
        self._modules: Dict[int, CEModule] = {}
        self._keep: List[Representation] = []

    def __call__(self, rep: Representation) -> CEModule:
        module = self._modules.get(id(rep))
        if module is None:
            module = build_ce_module(rep, self.A)
            self._modules[id(rep)] = module
            self._keep.append(rep)
        return module


def _compare_on_generators(name: str, M: CEModule, lhs, rhs, up_to: Number) -> CEVerdict:
    residuals = []
    for ukey in M.generators():
        residuals.append((f"{'⊗'.join(ukey) or '1'}", sparse_sub(lhs(ukey).terms, rhs(ukey).terms)))
    return _first_residual(name, residuals, up_to)


def _functoriality(case: CECase, modules: _ModuleCache) -> CEVerdict:
    A = modules.A
    MU, MV, MW = modules(case.source), modules(case.middle), modules(case.target)
    cef = ce_of_morphism(case.f, MU, MV)
    ceg = ce_of_morphism(case.g, MV, MW)
    cegf = ce_of_morphism(juxtapose(case.g, case.f), MU, MW)
    up_to = min(A.word_cap, cef.exact_length, ceg.exact_length, cegf.exact_length)
    return _compare_on_generators(
        f"functoriality[{case.name}]", MU,
        cegf.on_generator, lambda u: ceg.apply(cef.on_generator(u)), up_to,
    )


def _dg_compatibility(label: str, U: Representation, V: Representation, f: Intertwiner,
                      modules: _ModuleCache) -> CEVerdict:
    """CE^{⟦ρ,f⟧} = d∘CE^f - (-1)^{|f|} CE^f∘d on generators."""
    A = modules.A
    MU, MV = modules(U), modules(V)
    cef = ce_of_morphism(f, MU, MV)
    ced = ce_of_morphism(hom_differential(U, V, f), MU, MV)
    sign = parity_sign(f.degree)
    up_to = min(A.word_cap, cef.exact_length, ced.exact_length, MU.exact_length, MV.exact_length)
    return _compare_on_generators(
        f"dg_compatibility[{label}]", MU, ced.on_generator,
        lambda u: apply_d(MV, cef.on_generator(u)) - cef.apply(apply_d(MU, MU.generator(u))).scale(sign),
        up_to,
    )


def _tensor_differential(U: Representation, V: Representation, modules: _ModuleCache) -> CEVerdict:
    """d(u⊗v) = du⊗v + (-1)^{|u|} u⊗dv inside CE(U⊙V)."""
    A = modules.A
    MU, MV = modules(U), modules(V)
    MUV = build_ce_module(tensor_rep(U, V), A)
    k = U.space.arity

    def rhs(uv: Key) -> CEModuleElement:
        u, v = uv[:k], uv[k:]
        first = relative_tensor(apply_d(MU, MU.generator(u)), MV.generator(v), MUV)
        second = relative_tensor(MU.generator(u), apply_d(MV, MV.generator(v)), MUV)
        return first + second.scale(parity_sign(U.space.degree(u)))

    up_to = min(A.word_cap, MU.exact_length, MV.exact_length, MUV.exact_length)
    return _compare_on_generators(
        f"tensor_differential[{U.name},{V.name}]", MUV,
        lambda uv: apply_d(MUV, MUV.generator(uv)), rhs, up_to,
    )


def _tensor_morphism(case: CECase, modules: _ModuleCache) -> CEVerdict:
    """CE^{f⊙g}(u⊗v) = (-1)^{|g||u|} CE^f(u)⊗CE^g(v)."""
    A = modules.A
    U, V, W = case.source, case.middle, case.target
    MU, MV, MW = modules(U), modules(V), modules(W)
    source = build_ce_module(tensor_rep(U, V), A)
    target = build_ce_module(tensor_rep(V, W), A)
    cef = ce_of_morphism(case.f, MU, MV)
    ceg = ce_of_morphism(case.g, MV, MW)
    cefg = ce_of_morphism(odot(case.f, case.g), source, target)
    k = U.space.arity

    def rhs(uv: Key) -> CEModuleElement:
        u, v = uv[:k], uv[k:]
        sign = parity_sign(case.g.degree * U.space.degree(u))
        return relative_tensor(cef.on_generator(u), ceg.on_generator(v), target).scale(sign)

    up_to = min(A.word_cap, cef.exact_length, ceg.exact_length, cefg.exact_length)
    return _compare_on_generators(f"tensor_morphism[{case.name}]", source, cefg.on_generator, rhs, up_to)


def _braiding(U: Representation, V: Representation, modules: _ModuleCache) -> CEVerdict:
    """CE^{γ_{U,V}} is the Koszul swap u⊗v ↦ (-1)^{|u||v|} v⊗u."""
    A = modules.A
    source = build_ce_module(tensor_rep(U, V), A)
    target = build_ce_module(tensor_rep(V, U), A)
    ceg = ce_of_morphism(gamma(A.algebra, U.space, V.space), source, target)
    k = U.space.arity

    def swap(uv: Key) -> CEModuleElement:
        u, v = uv[:k], uv[k:]
        sign = parity_sign(U.space.degree(u) * V.space.degree(v))
        return CEModuleElement(target, {((), v + u): Fraction(sign)})

    return _compare_on_generators(f"braiding[{U.name},{V.name}]", source, ceg.on_generator, swap, A.word_cap)


def _unit(modules: _ModuleCache) -> CEVerdict:
    """CE^𝕂 is CE_𝔤 itself: d on the unit generator vanishes and the identity is the identity."""
    A = modules.A
    K = trivial_rep(A.algebra)
    MK = modules(K)
    ident = ce_of_morphism(identity_intertwiner(A.algebra, K.space), MK, MK)
    residuals = [("d(1)", apply_d(MK, MK.generator(())).terms)]
    for label in A.generators:
        x = CEModuleElement(MK, {((label,), ()): Fraction(1)})
        expected = {(m, ()): c for m, c in A.delta_of_monomial((label,)).items()}
        residuals.append((f"d(θ^{label}·1)", sparse_sub(apply_d(MK, x).terms, expected)))
        residuals.append((f"CE^1(θ^{label}·1)", sparse_sub(ident.apply(x).terms, x.terms)))
    return _first_residual("unit", residuals, A.word_cap)


def check_equivalence_suite(alg: LInfinityAlgebra, cases: Sequence[CECase], word_cap: int,
                            conventions: CEConventions = DEFAULT_CONVENTIONS) -> CESuiteReport:
    """Check that CE is a symmetric strict monoidal dg-functor on the given cases."""
    A = build_ce_algebra(alg, word_cap, conventions)
    modules = _ModuleCache(A)
    report = CESuiteReport(alg.name, word_cap, conventions)
    report.verdicts.append(check_delta_squared(A))
    report.verdicts.append(_unit(modules))
    seen_pairs = set()
    for case in cases:
        for rep in (case.source, case.middle, case.target):
            if rep.verified:
                verdict = modules(rep).square_zero
                if verdict is not None and all(v.name != verdict.name for v in report.verdicts):
                    report.verdicts.append(verdict)
        report.verdicts.append(_functoriality(case, modules))
        report.verdicts.append(_dg_compatibility(f"{case.name}:f", case.source, case.middle, case.f, modules))
        report.verdicts.append(_dg_compatibility(f"{case.name}:g", case.middle, case.target, case.g, modules))
        report.verdicts.append(_tensor_morphism(case, modules))
        pair = (id(case.source), id(case.middle))
        if pair not in seen_pairs:
            seen_pairs.add(pair)
            report.verdicts.append(_tensor_differential(case.source, case.middle, modules))
            report.verdicts.append(_braiding(case.source, case.middle, modules))
    failed = [v.name for v in report.failures]
    mutated = ", ".join(conventions.mutated) or "none"
    logger.info(f"CE equivalence suite on '{alg.name}' (W={word_cap}, mutated: {mutated}): "
                f"{len(report.verdicts) - len(failed)}/{len(report.verdicts)} passed")
    return report


# ============================================================================
# Truncation audit
# ============================================================================

@dataclass
class MonotonicityReport:
    """Failing word lengths of δ² and d² at each cap; consistent when smaller caps agree."""

    algebra: str
    caps: Tuple[int, ...]
    failing: Dict[int, Dict[str, Tuple[int, ...]]]
    consistent: bool
    conflict: Optional[str] = None


def monotonicity_audit(alg: LInfinityAlgebra, caps: Sequence[int] = (4, 6, 8),
                       representations: Sequence[Representation] = ()) -> MonotonicityReport:
    caps = tuple(sorted(caps))
    failing: Dict[int, Dict[str, Tuple[int, ...]]] = {}
    for W in caps:
        A = build_ce_algebra(alg, W)
        verdicts = [check_delta_squared(A)]
        verdicts.extend(build_ce_module(rep, A).square_zero for rep in representations)
        failing[W] = {v.name: v.failing_lengths for v in verdicts}
    conflict = None
    for small, large in zip(caps, caps[1:]):
        for name, lengths in failing[small].items():
            restricted = tuple(n for n in failing[large].get(name, ()) if n <= small)
            if restricted != lengths:
                conflict = f"{name}: W={small} fails at {lengths}, W={large} at {restricted}"
                break
        if conflict:
            break
    if conflict:
        logger.warning(f"Truncation audit on '{alg.name}' found a flip: {conflict}")
    return MonotonicityReport(alg.name, caps, failing, conflict is None, conflict)

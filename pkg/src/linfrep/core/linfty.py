"""
Homotopy Lie algebras as structure-constant data.

Holds the skew multilinear map container shared by brackets, actions,
intertwiner components and polyvectors, the bullet product and its
Schouten-Nijenhuis commutator, and the generalised Jacobi checker.

Usage:
    from linfrep.core.linfty import LInfinityAlgebra, check_jacobi

    report = check_jacobi(alg)
    if not report.passed:
        print(report.witness)
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import DegreeError, ShapeMismatchError, SpaceMismatchError
from .graded import (
    UNIT, GradedElement, GradedSpace, Key, Sparse, TensorSpace, add_into, add_term,
    apply_shuffler, drop_zeros, exterior_basis, parity_sign, scaled, skew_normalize,
    unshuffle_terms,
)

logger = logging.getLogger(__name__)

EntryKey = Tuple[Key, Key]


@dataclass
class Witness:
    """First offending component of a failed identity."""

    arity: int
    key: Tuple
    residual: Sparse

    def describe(self) -> str:
        terms = ", ".join(f"{'⊗'.join(k) or '1'}: {v}" for k, v in sorted(self.residual.items()))
        return f"arity {self.arity} at {self.key}: {{{terms}}}"


@dataclass
class SkewMultiMap:
    """
    One arity component of a structure map.

    Maps 𝔤^{⊗skew_arity} ⊗ module → target, graded skew-symmetric in the 𝔤
    slots, with the module slots pinned last. Entries live on canonical
    (skew_normalize fixed point) 𝔤-keys only.
    """

    space: GradedSpace
    skew_arity: int
    module: TensorSpace
    target: TensorSpace
    degree: int
    entries: Dict[EntryKey, Sparse] = field(default_factory=dict)

    def __post_init__(self):
        if self.skew_arity < 0:
            raise ShapeMismatchError(f"Negative skew arity {self.skew_arity}")
        for (gkey, ukey), image in list(self.entries.items()):
            norm = skew_normalize(gkey, self.space)
            if norm is None or norm[0] != tuple(gkey):
                raise ShapeMismatchError(f"Entry key {gkey} is not canonical")
            self._validate(gkey, ukey, image)

    # -- degrees -----------------------------------------------------------

    def source_degree(self, gkey: Key, ukey: Key) -> int:
        return sum(self.space.degree_of(x) for x in gkey) + self.module.degree(ukey)

    def _validate(self, gkey: Key, ukey: Key, image: Mapping[Key, Fraction]) -> None:
        if len(gkey) != self.skew_arity:
            raise ShapeMismatchError(f"Key {gkey} has {len(gkey)} inputs, expected {self.skew_arity}")
        expected = self.source_degree(gkey, ukey) + self.degree
        for out in image:
            if self.target.degree(out) != expected:
                raise DegreeError(
                    f"Entry {gkey}|{ukey} -> {out} has degree {self.target.degree(out)}, expected {expected}"
                )

    # -- construction ------------------------------------------------------

    @classmethod
    def tabulate(cls, space: GradedSpace, skew_arity: int, module: TensorSpace, target: TensorSpace,
                 degree: int, fn: Callable[[Key, Key], Sparse]):
        """Build a component by evaluating ``fn`` on every canonical source key."""
        out = cls(space, skew_arity, module, target, degree)
        for gkey in exterior_basis(space, skew_arity):
            for ukey in module.basis():
                image = drop_zeros(fn(gkey, ukey))
                if image:
                    out._validate(gkey, ukey, image)
                    out.entries[(gkey, ukey)] = image
        return out

    def add(self, xs: Sequence[str], ukey: Key, image: Mapping[Key, Fraction],
            coeff: Union[int, Fraction] = 1) -> None:
        """Accumulate ``coeff * image`` as the value on an arbitrary ordering of xs."""
        norm = skew_normalize(tuple(xs), self.space)
        image = drop_zeros(dict(image))
        if norm is None:
            if image and coeff:
                raise ShapeMismatchError(f"{tuple(xs)} vanishes in the graded exterior power")
            return
        gkey, sign = norm
        self._validate(gkey, tuple(ukey), image)
        current = dict(self.entries.get((gkey, tuple(ukey)), {}))
        add_into(current, image, sign * coeff)
        if current:
            self.entries[(gkey, tuple(ukey))] = current
        else:
            self.entries.pop((gkey, tuple(ukey)), None)

    # -- evaluation --------------------------------------------------------

    def evaluate(self, xs: Sequence[str], ukey: Key = ()) -> Sparse:
        """Value on an arbitrary ordering of 𝔤-inputs (read-only result)."""
        norm = skew_normalize(tuple(xs), self.space)
        if norm is None:
            return {}
        gkey, sign = norm
        image = self.entries.get((gkey, ukey))
        if not image:
            return {}
        return image if sign == 1 else {k: -v for k, v in image.items()}

    def evaluate_into(self, acc: Sparse, xs: Sequence[str], ukey: Key, coeff: Union[int, Fraction]) -> None:
        norm = skew_normalize(tuple(xs), self.space)
        if norm is None or not coeff:
            return
        gkey, sign = norm
        image = self.entries.get((gkey, ukey))
        if image:
            add_into(acc, image, sign * coeff)

    # -- algebra -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.entries.values())

    def same_shape(self, other: "SkewMultiMap") -> bool:
        return (self.space == other.space and self.skew_arity == other.skew_arity
                and self.module == other.module and self.target == other.target)

    def _combine(self, other: "SkewMultiMap", scale: int) -> "SkewMultiMap":
        if not self.same_shape(other):
            raise SpaceMismatchError("Cannot combine components of different shapes")
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise DegreeError(f"Cannot add maps of degrees {self.degree} and {other.degree}")
        degree = self.degree if not self.is_zero() else other.degree
        out = type(self)(self.space, self.skew_arity, self.module, self.target, degree)
        for key in set(self.entries) | set(other.entries):
            value = dict(self.entries.get(key, {}))
            add_into(value, other.entries.get(key, {}), scale)
            if value:
                out.entries[key] = value
        return out

    def __add__(self, other: "SkewMultiMap") -> "SkewMultiMap":
        return self._combine(other, 1)

    def __sub__(self, other: "SkewMultiMap") -> "SkewMultiMap":
        return self._combine(other, -1)

    def scaled(self, c: Union[int, Fraction]) -> "SkewMultiMap":
        out = type(self)(self.space, self.skew_arity, self.module, self.target, self.degree)
        if c:
            out.entries = {k: scaled(v, c) for k, v in self.entries.items() if v}
        return out

    def first_nonzero(self) -> Optional[Tuple[EntryKey, Sparse]]:
        for key in sorted(self.entries):
            if self.entries[key]:
                return key, self.entries[key]
        return None


class PolyMap(SkewMultiMap):
    """
    A polyvector component P: Λ^j 𝔤 → Sym_±^p 𝔤.

    The target is stored inside 𝔤^{⊗p} as an (anti)symmetric tensor.
    """

    @classmethod
    def empty(cls, space: GradedSpace, arity: int, weight: int, degree: int) -> "PolyMap":
        return cls(space, arity, UNIT, TensorSpace.power(space, weight), degree)

    @property
    def arity(self) -> int:
        return self.skew_arity

    @property
    def weight(self) -> int:
        return self.target.arity

    def is_graded_symmetric(self, alternating: bool) -> bool:
        """Whether every output is invariant under the (signed) Koszul braiding."""
        for image in self.entries.values():
            for key, coeff in image.items():
                for pos in range(len(key) - 1):
                    a, b = key[pos], key[pos + 1]
                    sign = parity_sign(self.space.degree_of(a) * self.space.degree_of(b))
                    if alternating:
                        sign = -sign
                    swapped = key[:pos] + (b, a) + key[pos + 2:]
                    if image.get(swapped, 0) != sign * coeff:
                        return False
        return True


def bracket_from_table(space: GradedSpace, arity: int,
                       table: Mapping[Tuple[str, ...], Mapping[str, Union[int, str, Fraction]]]) -> SkewMultiMap:
    """ℓ^arity from {inputs: {output label: coefficient}} on any input orderings."""
    out = SkewMultiMap(space, arity, UNIT, TensorSpace((space,)), 2 - arity)
    for inputs, image in table.items():
        out.add(inputs, (), {(label,): Fraction(c) for label, c in image.items()})
    return out


@dataclass
class LInfinityAlgebra:
    """Finite-dimensional homotopy Lie algebra given by its brackets ℓ^i."""

    name: str
    space: GradedSpace
    brackets: Dict[int, SkewMultiMap] = field(default_factory=dict)
    arity_cap: int = 4

    def __post_init__(self):
        if self.arity_cap < 1:
            raise ShapeMismatchError("Arity cap must be at least 1")
        target = TensorSpace((self.space,))
        for i, bracket in self.brackets.items():
            if i < 1:
                raise ShapeMismatchError(f"Bracket arity {i} is not allowed (no curvature)")
            if bracket.skew_arity != i or bracket.module != UNIT or bracket.target != target:
                raise ShapeMismatchError(f"Bracket ℓ^{i} has the wrong shape")
            if bracket.degree != 2 - i and not bracket.is_zero():
                raise DegreeError(f"Bracket ℓ^{i} has degree {bracket.degree}, expected {2 - i}")
            if i > self.arity_cap and not bracket.is_zero():
                logger.warning(f"Bracket ℓ^{i} of '{self.name}' lies above the arity cap {self.arity_cap}")

    @property
    def g(self) -> TensorSpace:
        return TensorSpace((self.space,))

    def bracket(self, i: int) -> Optional[SkewMultiMap]:
        if i > self.arity_cap:
            return None
        bracket = self.brackets.get(i)
        if bracket is None or bracket.is_zero():
            return None
        return bracket

    @property
    def top_arity(self) -> int:
        arities = [i for i in self.brackets if self.bracket(i) is not None]
        return max(arities) if arities else 0

    def evaluate(self, xs: Sequence[str]) -> Sparse:
        bracket = self.bracket(len(xs))
        return bracket.evaluate(xs) if bracket is not None else {}

    def pi1(self) -> Dict[int, PolyMap]:
        """π₁^i := (-1)^{i-1} ℓ^i, as weight-1 polyvector components."""
        out = {}
        for i in range(1, self.arity_cap + 1):
            bracket = self.bracket(i)
            comp = PolyMap.empty(self.space, i, 1, 2 - i)
            if bracket is not None:
                comp.entries = {k: scaled(v, parity_sign(i - 1)) for k, v in bracket.entries.items()}
            out[i] = comp
        return out

    def with_bracket(self, i: int, bracket: SkewMultiMap) -> "LInfinityAlgebra":
        brackets = dict(self.brackets)
        brackets[i] = bracket
        return LInfinityAlgebra(self.name, self.space, brackets, self.arity_cap)

    def with_cap(self, arity_cap: int) -> "LInfinityAlgebra":
        return LInfinityAlgebra(self.name, self.space, dict(self.brackets), arity_cap)


def direct_sum(a: LInfinityAlgebra, b: LInfinityAlgebra, name: Optional[str] = None) -> LInfinityAlgebra:
    """Direct sum; brackets vanish whenever inputs come from both summands."""
    if set(a.space.labels) & set(b.space.labels):
        raise SpaceMismatchError(f"'{a.name}' and '{b.name}' share basis labels")
    space = GradedSpace(name or f"{a.space.name}+{b.space.name}",
                        a.space.labels + b.space.labels, a.space.degrees + b.space.degrees)
    target = TensorSpace((space,))
    brackets = {}
    for i in sorted(set(a.brackets) | set(b.brackets)):
        merged = SkewMultiMap(space, i, UNIT, target, 2 - i)
        for part in (a.brackets.get(i), b.brackets.get(i)):
            if part is not None:
                merged.entries.update({k: dict(v) for k, v in part.entries.items() if v})
        brackets[i] = merged
    return LInfinityAlgebra(name or f"{a.name}+{b.name}", space, brackets, max(a.arity_cap, b.arity_cap))


def degree_pruning(alg: LInfinityAlgebra) -> List[int]:
    """Arities at which ℓ^i must vanish because no source degree can reach a basis degree."""
    present = set(alg.space.degrees)
    pruned = []
    for i in range(1, alg.arity_cap + 1):
        reachable = any(sum(alg.space.degree_of(x) for x in key) + 2 - i in present
                        for key in exterior_basis(alg.space, i))
        if not reachable:
            pruned.append(i)
    return pruned


# ============================================================================
# Bullet product and Schouten-Nijenhuis bracket
# ============================================================================

def polyvector_composite(P: SkewMultiMap, Q: SkewMultiMap, x: Key) -> Sparse:
    """(P⊗1_{q̃})(1_{j̃}⊗Q)Σ_{j̃,k} on one canonical key, before any symmetrisation."""
    g = P.space
    degrees = tuple(g.degree_of(label) for label in x)
    raw: Sparse = {}
    for (y, z), eps in unshuffle_terms(x, degrees, (P.skew_arity - 1, Q.skew_arity)):
        sign = eps * parity_sign(Q.degree * sum(g.degree_of(label) for label in y))
        for w, cw in Q.evaluate(z).items():
            head, tail = w[0], w[1:]
            for v, cv in P.evaluate(y + (head,)).items():
                add_term(raw, v + tail, sign * cw * cv)
    return raw


def bullet(P: PolyMap, Q: PolyMap, n: int) -> PolyMap:
    """
    P•Q = (-1)^{(|P|+j̃)q̃n + |P|k̃} Σ^±_{p,q̃} (P⊗1_{q̃})(1_{j̃}⊗Q) Σ_{j̃,k}.

    Result has arity j̃+k, weight p+q̃ and degree |P|+|Q|.
    """
    if P.space != Q.space:
        raise SpaceMismatchError("Bullet product of polyvectors over different spaces")
    g = P.space
    j, p, k, q = P.arity, P.weight, Q.arity, Q.weight
    result = PolyMap.empty(g, j - 1 + k, p + q - 1, P.degree + Q.degree)
    if j < 1 or q < 1 or P.is_zero() or Q.is_zero():
        return result
    overall = parity_sign((P.degree + j - 1) * (q - 1) * n + P.degree * (k - 1))
    variant = "skew" if n % 2 else "sym"
    for x in exterior_basis(g, j - 1 + k):
        raw = polyvector_composite(P, Q, x)
        if not raw:
            continue
        symmetrised = apply_shuffler(variant, (p, q - 1), GradedElement(result.target, raw), inverse=True)
        if symmetrised.terms:
            result.entries[(x, ())] = scaled(symmetrised.terms, overall)
    return result


def schouten(P: PolyMap, Q: PolyMap, n: int) -> PolyMap:
    """{P,Q} = P•Q - (-1)^{(|P|+p̃n+j̃)(|Q|+q̃n+k̃)} Q•P."""
    sign = parity_sign((P.degree + (P.weight - 1) * n + P.arity - 1)
                       * (Q.degree + (Q.weight - 1) * n + Q.arity - 1))
    return bullet(P, Q, n) - bullet(Q, P, n).scaled(sign)


# ============================================================================
# Generalised Jacobi identity
# ============================================================================

@dataclass
class JacobiReport:
    """Per-arity Jacobi residuals plus the Schouten cross-check."""

    algebra: str
    cap: int
    passed: bool
    checked_arities: List[int]
    residuals: Dict[int, Dict[Key, Sparse]]
    pruned_arities: List[int]
    routes_agree: bool
    witness: Optional[Witness] = None
    incidents: List[str] = field(default_factory=list)

    def holds_at(self, arity: int) -> bool:
        return not self.residuals.get(arity)


def jacobi_residual(alg: LInfinityAlgebra, i: int) -> Dict[Key, Sparse]:
    """Σ_{j̃+k=i} (-1)^{j̃} ℓ^j(ℓ^k ⊗ 1_{j̃}) Σ_{k,j̃} on every canonical key of Λ^i 𝔤."""
    g = alg.space
    out: Dict[Key, Sparse] = {}
    for x in exterior_basis(g, i):
        degrees = tuple(g.degree_of(label) for label in x)
        acc: Sparse = {}
        for k in range(1, i + 1):
            j = i - k + 1
            inner, outer = alg.bracket(k), alg.bracket(j)
            if inner is None or outer is None:
                continue
            for (z, y), eps in unshuffle_terms(x, degrees, (k, j - 1)):
                for w, c in inner.evaluate(z).items():
                    outer.evaluate_into(acc, w + y, (), parity_sign(j - 1) * eps * c)
        if acc:
            out[x] = acc
    return out


def schouten_jacobi_residual(alg: LInfinityAlgebra, i: int) -> Dict[Key, Sparse]:
    """½ Σ_{j+k=i+1} {π₁^j, π₁^k} at arity i."""
    pi = alg.pi1()
    total = PolyMap.empty(alg.space, i, 1, 3 - i)
    for j in range(1, i + 1):
        k = i + 1 - j
        if pi[j].is_zero() or k not in pi or pi[k].is_zero():
            continue
        total = total + schouten(pi[j], pi[k], 2)
    return {x: scaled(v, Fraction(1, 2)) for (x, _), v in total.entries.items() if v}


def check_jacobi(alg: LInfinityAlgebra) -> JacobiReport:
    """Check the generalised Jacobi identity at every arity up to the cap."""
    residuals: Dict[int, Dict[Key, Sparse]] = {}
    incidents: List[str] = []
    witness = None
    for i in range(1, alg.arity_cap + 1):
        direct = jacobi_residual(alg, i)
        via_schouten = schouten_jacobi_residual(alg, i)
        if direct != via_schouten:
            message = f"Jacobi and Schouten routes disagree for '{alg.name}' at arity {i}"
            logger.error(message)
            incidents.append(message)
        if direct:
            residuals[i] = direct
            if witness is None:
                key = sorted(direct)[0]
                witness = Witness(i, key, direct[key])
    report = JacobiReport(
        algebra=alg.name,
        cap=alg.arity_cap,
        passed=not residuals,
        checked_arities=list(range(1, alg.arity_cap + 1)),
        residuals=residuals,
        pruned_arities=degree_pruning(alg),
        routes_agree=not incidents,
        witness=witness,
        incidents=incidents,
    )
    logger.debug(f"Jacobi check for '{alg.name}': passed={report.passed}, cap={alg.arity_cap}")
    return report


@dataclass
class LowArityReport:
    """The three low-arity relations of an L∞-algebra, reported separately."""

    differential: bool
    cochain_bracket: bool
    jacobi_up_to_homotopy: bool
    has_differential: bool
    has_jacobiator: bool


def low_arity_report(alg: LInfinityAlgebra) -> LowArityReport:
    """ℓ¹ squares to zero, ℓ² is a chain map, and Jacobi holds up to ∂ℓ³."""
    capped = alg.with_cap(max(alg.arity_cap, 3))
    return LowArityReport(
        differential=not jacobi_residual(capped, 1),
        cochain_bracket=not jacobi_residual(capped, 2),
        jacobi_up_to_homotopy=not jacobi_residual(capped, 3),
        has_differential=alg.bracket(1) is not None,
        has_jacobiator=capped.bracket(3) is not None,
    )

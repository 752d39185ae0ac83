"""
Exact graded linear algebra.

Basis-indexed graded spaces, permutation and Koszul signs, shuffles and
shufflers, canonical normal forms for graded exterior and symmetric powers,
and Koszul-correct evaluation of tensor-product operators.

Conventions:
    A permutation is a tuple ``p`` of 0-based positions where output position
    ``k`` holds input ``p[k]``, i.e. ``p`` sends ``x_0 ... x_{n-1}`` to
    ``x_{p[0]} ... x_{p[n-1]}``. A shuffle is increasing on every output
    block, so applying it selects an ordered subset of the inputs per block.

    Sparse vectors are plain dicts ``{key: Fraction}`` with zero coefficients
    dropped; keys are tuples of basis labels, one per tensor factor.
"""

import itertools
import math
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import DegreeError, ShapeMismatchError, SpaceMismatchError

logger = logging.getLogger(__name__)

Rational = Fraction
Key = Tuple[str, ...]
Sparse = Dict[Key, Fraction]
Permutation = Tuple[int, ...]
# Arity bounds, where math.inf stands for "unbounded"
Number = Union[int, float]


def parity_sign(exponent: int) -> int:
    """(-1)^exponent."""
    return -1 if exponent % 2 else 1


# ============================================================================
# Sparse helpers
# ============================================================================

def add_into(acc: Dict, terms: Dict, scale: Union[int, Fraction] = 1) -> None:
    """acc += scale * terms, dropping coefficients that cancel."""
    if not scale:
        return
    for key, coeff in terms.items():
        value = acc.get(key, 0) + scale * coeff
        if value:
            acc[key] = value
        elif key in acc:
            del acc[key]


def add_term(acc: Dict, key, coeff: Union[int, Fraction]) -> None:
    if not coeff:
        return
    value = acc.get(key, 0) + coeff
    if value:
        acc[key] = value
    elif key in acc:
        del acc[key]


def drop_zeros(terms: Dict) -> Dict:
    return {k: v for k, v in terms.items() if v}


def scaled(terms: Dict, scale: Union[int, Fraction]) -> Dict:
    if not scale:
        return {}
    return {k: scale * v for k, v in terms.items() if v}


def sparse_sub(a: Dict, b: Dict) -> Dict:
    out = drop_zeros(a)
    add_into(out, b, -1)
    return out


def sparse_equal(a: Dict, b: Dict) -> bool:
    return not sparse_sub(a, b)


# ============================================================================
# Spaces
# ============================================================================

@dataclass(frozen=True)
class GradedSpace:
    """Finite graded vector space given by an ordered basis of (label, degree)."""

    name: str
    labels: Tuple[str, ...]
    degrees: Tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.degrees):
            raise ShapeMismatchError(
                f"Space '{self.name}' has {len(self.labels)} labels but {len(self.degrees)} degrees"
            )
        if len(set(self.labels)) != len(self.labels):
            raise SpaceMismatchError(f"Space '{self.name}' has duplicate basis labels")

    @classmethod
    def from_basis(cls, name: str, basis: Iterable[Tuple[str, int]]) -> "GradedSpace":
        basis = list(basis)
        return cls(name, tuple(b[0] for b in basis), tuple(int(b[1]) for b in basis))

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise SpaceMismatchError(f"'{label}' is not a basis label of space '{self.name}'")

    def degree_of(self, label: str) -> int:
        return self.degrees[self.index_of(label)]

    @property
    def degree_range(self) -> Tuple[int, int]:
        if not self.degrees:
            return (0, 0)
        return (min(self.degrees), max(self.degrees))

    def basis(self) -> List[Tuple[str, int]]:
        return list(zip(self.labels, self.degrees))

    def shift(self, n: int) -> "GradedSpace":
        """The shifted space V[n], where V[n]^m = V^{m+n}."""
        return GradedSpace(f"{self.name}[{n}]", self.labels, tuple(d - n for d in self.degrees))


@dataclass(frozen=True)
class TensorSpace:
    """Ordered tensor product of atomic graded spaces; the empty product is the unit."""

    factors: Tuple[GradedSpace, ...] = ()

    @classmethod
    def power(cls, space: GradedSpace, n: int) -> "TensorSpace":
        return cls((space,) * n)

    @property
    def arity(self) -> int:
        return len(self.factors)

    @property
    def name(self) -> str:
        if not self.factors:
            return "K"
        return "⊗".join(f.name for f in self.factors)

    def __matmul__(self, other: "TensorSpace") -> "TensorSpace":
        return TensorSpace(self.factors + other.factors)

    def key_degrees(self, key: Key) -> Tuple[int, ...]:
        if len(key) != len(self.factors):
            raise ShapeMismatchError(f"Key {key} does not fit space {self.name}")
        return tuple(f.degree_of(label) for f, label in zip(self.factors, key))

    def degree(self, key: Key) -> int:
        return sum(self.key_degrees(key))

    @cached_property
    def _basis(self) -> Tuple[Key, ...]:
        return tuple(itertools.product(*(f.labels for f in self.factors)))

    def basis(self) -> Tuple[Key, ...]:
        return self._basis

    def split(self, key: Key, arity: int) -> Tuple[Key, Key]:
        return key[:arity], key[arity:]


UNIT = TensorSpace(())


@dataclass
class GradedElement:
    """Sparse element of a tensor space."""

    space: TensorSpace
    terms: Sparse = field(default_factory=dict)

    def __post_init__(self):
        self.terms = {tuple(k): Fraction(v) for k, v in self.terms.items() if v}
        for key in self.terms:
            self.space.key_degrees(key)

    @property
    def degree(self) -> Optional[int]:
        """Common degree of all terms; None for zero or inhomogeneous elements."""
        degrees = {self.space.degree(k) for k in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: "GradedElement") -> None:
        if other.space != self.space:
            raise SpaceMismatchError(f"Cannot combine elements of {self.space.name} and {other.space.name}")

    def __add__(self, other: "GradedElement") -> "GradedElement":
        self._check(other)
        out = dict(self.terms)
        add_into(out, other.terms)
        return GradedElement(self.space, out)

    def __sub__(self, other: "GradedElement") -> "GradedElement":
        self._check(other)
        return GradedElement(self.space, sparse_sub(self.terms, other.terms))

    def __neg__(self) -> "GradedElement":
        return self.scale(-1)

    def scale(self, c: Union[int, Fraction]) -> "GradedElement":
        return GradedElement(self.space, scaled(self.terms, c))


# ============================================================================
# Permutations and signs
# ============================================================================

def validate_permutation(p: Sequence[int]) -> Permutation:
    p = tuple(p)
    if sorted(p) != list(range(len(p))):
        raise ShapeMismatchError(f"{p} is not a permutation")
    return p


@lru_cache(maxsize=None)
def signature(p: Permutation) -> int:
    inversions = sum(1 for a, b in itertools.combinations(range(len(p)), 2) if p[a] > p[b])
    return parity_sign(inversions)


@lru_cache(maxsize=None)
def koszul_sign(p: Permutation, degrees: Tuple[int, ...]) -> int:
    """Product of (-1)^{|a||b|} over the pairs of inputs the permutation swaps."""
    if len(p) != len(degrees):
        raise ShapeMismatchError(f"Permutation of {len(p)} letters applied to {len(degrees)} degrees")
    exponent = 0
    for a, b in itertools.combinations(range(len(p)), 2):
        if p[a] > p[b]:
            exponent += degrees[p[a]] * degrees[p[b]]
    return parity_sign(exponent)


def inverse_permutation(p: Permutation) -> Permutation:
    inv = [0] * len(p)
    for k, i in enumerate(p):
        inv[i] = k
    return tuple(inv)


def permute_key(p: Permutation, key: Sequence) -> Tuple:
    return tuple(key[i] for i in p)


@lru_cache(maxsize=None)
def _shuffles(sizes: Tuple[int, ...]) -> Tuple[Permutation, ...]:
    if any(s < 0 for s in sizes):
        return ()
    result: List[Permutation] = []

    def place(remaining: Tuple[int, ...], block: int, prefix: Tuple[int, ...]):
        if block == len(sizes):
            result.append(prefix)
            return
        for chosen in itertools.combinations(remaining, sizes[block]):
            rest = tuple(r for r in remaining if r not in chosen)
            place(rest, block + 1, prefix + chosen)

    place(tuple(range(sum(sizes))), 0, ())
    return tuple(result)


def enumerate_shuffles(block_sizes: Sequence[int]) -> List[Permutation]:
    """Permutations increasing within each block; empty if any block size is negative."""
    return list(_shuffles(tuple(block_sizes)))


@lru_cache(maxsize=None)
def unshuffle_terms(labels: Key, degrees: Tuple[int, ...],
                    sizes: Tuple[int, ...]) -> Tuple[Tuple[Tuple[Key, ...], int], ...]:
    """
    Evaluation kernel of the shuffler on one basis tensor.

    Returns ``(blocks, eps)`` for every shuffle of ``labels`` into blocks of the
    given sizes, with ``eps = sgn * koszul`` of the shuffle.
    """
    if sum(max(s, 0) for s in sizes) != len(labels) and not any(s < 0 for s in sizes):
        raise ShapeMismatchError(f"Blocks {sizes} do not partition {len(labels)} inputs")
    out = []
    for p in _shuffles(sizes):
        eps = signature(p) * koszul_sign(p, degrees)
        permuted = permute_key(p, labels)
        blocks, pos = [], 0
        for s in sizes:
            blocks.append(permuted[pos:pos + s])
            pos += s
        out.append((tuple(blocks), eps))
    return tuple(out)


def _require_power(space: TensorSpace) -> None:
    if len(set(space.factors)) > 1:
        raise SpaceMismatchError(f"{space.name} is not a tensor power of a single space")


def apply_shuffler(variant: str, block_sizes: Sequence[int], element: GradedElement,
                   inverse: bool = False) -> GradedElement:
    """
    Shuffler (variant 'skew', signs ε) or symmetriser (variant 'sym', signs χ).

    With ``inverse=True`` the inverse shuffles act instead, interleaving the
    blocks; on tensors that are (anti)symmetric within each block this is the
    (anti)symmetrised product of the blocks.
    """
    if variant not in ("skew", "sym"):
        raise ValueError(f"Unknown shuffler variant: '{variant}'. Available: ['skew', 'sym']")
    sizes = tuple(block_sizes)
    if any(s < 0 for s in sizes):
        return GradedElement(element.space, {})
    if sum(sizes) != element.space.arity:
        raise ShapeMismatchError(f"Blocks {sizes} do not partition {element.space.arity} tensor factors")
    _require_power(element.space)
    out: Sparse = {}
    for key, coeff in element.terms.items():
        degrees = element.space.key_degrees(key)
        for p in _shuffles(sizes):
            q = inverse_permutation(p) if inverse else p
            sign = koszul_sign(q, degrees)
            if variant == "skew":
                sign *= signature(q)
            add_term(out, permute_key(q, key), sign * coeff)
    return GradedElement(element.space, out)


def apply_permutation(p: Permutation, element: GradedElement) -> GradedElement:
    """The symmetric braiding action: x ↦ χ(p) p(x)."""
    p = validate_permutation(p)
    if len(p) != element.space.arity:
        raise ShapeMismatchError(f"Permutation of {len(p)} letters on {element.space.arity} factors")
    out: Sparse = {}
    for key, coeff in element.terms.items():
        add_term(out, permute_key(p, key), koszul_sign(p, element.space.key_degrees(key)) * coeff)
    return GradedElement(TensorSpace(permute_key(p, element.space.factors)), out)


# ============================================================================
# Normal forms
# ============================================================================

def _sorted_with_sign(key: Key, space: GradedSpace, skew: bool) -> Optional[Tuple[Key, int]]:
    p = tuple(sorted(range(len(key)), key=lambda k: space.index_of(key[k])))
    degrees = tuple(space.degree_of(label) for label in key)
    canonical = permute_key(p, key)
    forbidden_parity = 0 if skew else 1
    for a, b in zip(canonical, canonical[1:]):
        if a == b and space.degree_of(a) % 2 == forbidden_parity:
            return None
    sign = koszul_sign(p, degrees)
    if skew:
        sign *= signature(p)
    return canonical, sign


@lru_cache(maxsize=None)
def skew_normalize(key: Key, space: GradedSpace) -> Optional[Tuple[Key, int]]:
    """
    Canonical Λ-key and sign with f(key) = sign * f(canonical) for skew f.

    None when an even-degree label repeats; repeated odd labels survive.
    """
    return _sorted_with_sign(tuple(key), space, skew=True)


@lru_cache(maxsize=None)
def sym_normalize(key: Key, space: GradedSpace) -> Optional[Tuple[Key, int]]:
    """Canonical Sym-key and Koszul sign; None when an odd-degree label repeats."""
    return _sorted_with_sign(tuple(key), space, skew=False)


@lru_cache(maxsize=None)
def exterior_basis(space: GradedSpace, arity: int) -> Tuple[Key, ...]:
    """Canonical keys of the graded exterior power."""
    if arity < 0:
        return ()
    return tuple(k for k in itertools.combinations_with_replacement(space.labels, arity)
                 if skew_normalize(k, space) is not None)


@lru_cache(maxsize=None)
def symmetric_basis(space: GradedSpace, arity: int) -> Tuple[Key, ...]:
    """Canonical keys of the graded symmetric power."""
    if arity < 0:
        return ()
    return tuple(k for k in itertools.combinations_with_replacement(space.labels, arity)
                 if sym_normalize(k, space) is not None)


# ============================================================================
# Tensor operators
# ============================================================================

@dataclass(frozen=True)
class IdentityBlock:
    """Identity on ``arity`` consecutive tensor factors."""

    arity: int
    degree: int = 0


@dataclass
class OperatorOnTensors:
    """Homogeneous linear map between tensor spaces, given on basis keys."""

    source: TensorSpace
    target: TensorSpace
    degree: int
    entries: Dict[Key, Sparse] = field(default_factory=dict)

    def __post_init__(self):
        for key, image in self.entries.items():
            expected = self.source.degree(key) + self.degree
            for out in image:
                if self.target.degree(out) != expected:
                    raise DegreeError(
                        f"Entry {key} -> {out} has degree {self.target.degree(out)}, expected {expected}"
                    )

    @property
    def arity(self) -> int:
        return self.source.arity

    def apply_key(self, key: Key) -> Sparse:
        return self.entries.get(key, {})


Block = Union[OperatorOnTensors, IdentityBlock]


def apply_operator_tensor(ops: Sequence[Block], element: GradedElement) -> GradedElement:
    """
    Apply ``ops[0] ⊗ ops[1] ⊗ ...`` with the Koszul interchange sign.

    Each block picks up (-1)^{|op| * (degree of the input factors to its left)}.
    """
    arities = [op.arity for op in ops]
    if sum(arities) != element.space.arity:
        raise ShapeMismatchError(f"Blocks of arities {arities} on {element.space.arity} tensor factors")
    factors: List[GradedSpace] = []
    pos = 0
    for op in ops:
        chunk = element.space.factors[pos:pos + op.arity]
        if isinstance(op, IdentityBlock):
            factors.extend(chunk)
        else:
            if op.source.factors != chunk:
                raise SpaceMismatchError(f"Operator on {op.source.name} applied to {TensorSpace(chunk).name}")
            factors.extend(op.target.factors)
        pos += op.arity

    out: Sparse = {}
    for key, coeff in element.terms.items():
        degrees = element.space.key_degrees(key)
        partial: Sparse = {(): coeff}
        pos, left_degree = 0, 0
        for op in ops:
            chunk = key[pos:pos + op.arity]
            if isinstance(op, IdentityBlock):
                partial = {prev + chunk: c for prev, c in partial.items()}
            else:
                sign = parity_sign(op.degree * left_degree)
                image = op.apply_key(chunk)
                partial = {prev + img: sign * c * ci
                           for prev, c in partial.items() for img, ci in image.items()}
            left_degree += sum(degrees[pos:pos + op.arity])
            pos += op.arity
        add_into(out, partial)
    return GradedElement(TensorSpace(tuple(factors)), out)


def sym_embed(key: Key, space: GradedSpace, alternating: bool = False) -> Sparse:
    """
    The (anti)symmetric tensor x_1 ⊙ ... ⊙ x_p inside 𝔤^{⊗p}.

    Sums the signed orderings once per distinct tensor, so a⊙a = a⊗a for even a.
    """
    out: Sparse = {}
    degrees = tuple(space.degree_of(label) for label in key)
    for p in itertools.permutations(range(len(key))):
        sign = koszul_sign(p, degrees)
        if alternating:
            sign *= signature(p)
        add_term(out, permute_key(p, key), sign)
    multiplicity = 1
    for label in set(key):
        multiplicity *= math.factorial(key.count(label))
    return scaled(out, Fraction(1, multiplicity))

"""
Seeded random instances for the property suites.

Algebras are nilpotent by construction: brackets take inputs from a lower
block and land in an upper block that every bracket kills, so the Jacobi
identity holds identically. Representations use the same split on the module
side and ignore upper-block algebra inputs, so ρρ and ϱ_ρ ℓ both vanish.
"""

import logging
import random
from fractions import Fraction
from typing import Callable, Optional, Sequence

from ..core.config import SessionConfig
from ..core.graded import GradedSpace, Key, Sparse, TensorSpace, exterior_basis
from ..core.linfty import LInfinityAlgebra, SkewMultiMap
from ..core.repcat import Intertwiner, Representation

logger = logging.getLogger(__name__)

COEFFICIENTS = (-2, -1, 1, 2)


class InstanceGenerator:
    """Random spaces, algebras, representations and intertwiners from one seeded stream."""

    def __init__(self, config: Optional[SessionConfig] = None, seed: Optional[int] = None):
        self.config = config or SessionConfig()
        self.rng = random.Random(self.config.seed if seed is None else seed)
        self._counter = 0

    def _name(self, prefix: str) -> str:
        self._counter += 1
        return f"{prefix}{self._counter}"

    def _coefficient(self) -> Optional[Fraction]:
        if self.rng.random() < self.config.sparsity:
            return None
        return Fraction(self.rng.choice(COEFFICIENTS))

    def degree(self) -> int:
        return self.rng.randint(self.config.degree_min, self.config.degree_max)

    def space(self, prefix: str, dim: Optional[int] = None) -> GradedSpace:
        dim = dim or self.rng.randint(1, self.config.max_dim)
        name = self._name(prefix)
        return GradedSpace.from_basis(name, [(f"{name}_{k}", self.degree()) for k in range(dim)])

    # ------------------------------------------------------------------
    # Algebras
    # ------------------------------------------------------------------

    def algebra(self, arity_cap: int = 4, dim: Optional[int] = None) -> LInfinityAlgebra:
        """Nilpotent random L∞-algebra of total dimension ≤ max_dim."""
        dim = dim or self.rng.randint(1, self.config.max_dim)
        name = self._name("g")
        basis = [(f"{name}_{k}", self.degree()) for k in range(dim)]
        space = GradedSpace.from_basis(name, basis)
        lower_count = self.rng.randint(1, dim)
        lower = set(space.labels[:lower_count])
        upper = list(space.labels[lower_count:])
        g = TensorSpace((space,))
        brackets = {}
        for i in range(1, arity_cap + 1):
            comp = SkewMultiMap(space, i, TensorSpace(), g, 2 - i)
            for key in exterior_basis(space, i):
                if not set(key) <= lower:
                    continue
                target_degree = sum(space.degree_of(x) for x in key) + 2 - i
                image = self._image([(y,) for y in upper if space.degree_of(y) == target_degree])
                if image:
                    comp.entries[(key, ())] = image
            if not comp.is_zero():
                brackets[i] = comp
        alg = LInfinityAlgebra(name, space, brackets, arity_cap)
        logger.debug(f"Generated algebra {name}: dim {dim}, brackets at arities {sorted(brackets)}")
        return alg

    def _image(self, targets: Sequence[Key]) -> Sparse:
        image: Sparse = {}
        for key in targets:
            c = self._coefficient()
            if c is not None:
                image[key] = c
        return image

    # ------------------------------------------------------------------
    # Families
    # ------------------------------------------------------------------

    def _family(self, alg: LInfinityAlgebra, U: TensorSpace, V: TensorSpace, degree: int,
                allowed: Callable[[Key, Key, Key], bool], top: Optional[int] = None) -> Intertwiner:
        top = top or alg.arity_cap
        components = {}
        for i in range(1, top + 1):
            comp = SkewMultiMap(alg.space, i - 1, U, V, degree - (i - 1))
            for x in exterior_basis(alg.space, i - 1):
                d_x = sum(alg.space.degree_of(a) for a in x)
                for u in U.basis():
                    target_degree = d_x + U.degree(u) + degree - (i - 1)
                    image = self._image([v for v in V.basis()
                                         if V.degree(v) == target_degree and allowed(x, u, v)])
                    if image:
                        comp.entries[(x, u)] = image
            if not comp.is_zero():
                components[i] = comp
        return Intertwiner(alg, U, V, degree, components)

    def module_space(self, dim: Optional[int] = None) -> TensorSpace:
        return TensorSpace((self.space("V", dim),))

    def representation(self, alg: LInfinityAlgebra, dim: Optional[int] = None) -> Representation:
        """Square-zero random representation."""
        V = self.module_space(dim)
        labels = V.factors[0].labels
        cut = self.rng.randint(1, len(labels))
        low, high = set(labels[:cut]), set(labels[cut:])
        image_labels = self._image_labels(alg)

        def allowed(x: Key, u: Key, v: Key) -> bool:
            return u[0] in low and v[0] in high and not set(x) & image_labels

        action = self._family(alg, V, V, 1, allowed)
        action.name = f"rho_{V.name}"
        return Representation(V.name, V, action)

    def action(self, alg: LInfinityAlgebra, V: TensorSpace) -> Intertwiner:
        """Arbitrary degree-1 family; usually not a representation."""
        return self._family(alg, V, V, 1, lambda x, u, v: True)

    def candidate(self, alg: LInfinityAlgebra, dim: Optional[int] = None) -> Representation:
        V = self.module_space(dim)
        return Representation(V.name, V, self.action(alg, V))

    def intertwiner(self, alg: LInfinityAlgebra, U: TensorSpace, V: TensorSpace, degree: Optional[int] = None,
                    top: Optional[int] = None) -> Intertwiner:
        degree = self.rng.choice((-1, 0, 1)) if degree is None else degree
        return self._family(alg, U, V, degree, lambda x, u, v: True, top)

    @staticmethod
    def _image_labels(alg: LInfinityAlgebra) -> set:
        labels = set()
        for bracket in alg.brackets.values():
            for image in bracket.entries.values():
                labels.update(k[0] for k in image)
        return labels

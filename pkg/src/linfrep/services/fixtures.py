"""
Built-in fixtures.

Usage:
    from linfrep.services.fixtures import FixtureRegistry

    available = FixtureRegistry.list_fixtures()
    sl2 = FixtureRegistry.get_fixture('sl2')()

Adding New Fixtures:
    @FixtureRegistry.register('your_fixture')
    def your_fixture() -> LInfinityAlgebra:
        ...
"""

import itertools
import logging
from fractions import Fraction
from typing import Callable, Dict, List, Union

from ..core.graded import GradedSpace, Key, TensorSpace
from ..core.linfty import LInfinityAlgebra, SkewMultiMap, bracket_from_table
from ..core.poisson import ShiftedPoissonStructure, casimir_structure, solve_weight2, string_poisson_structure
from ..core.repcat import Intertwiner, Representation

logger = logging.getLogger(__name__)

Fixture = Union[LInfinityAlgebra, Representation, ShiftedPoissonStructure]


class FixtureRegistry:
    """Registry of named fixture builders."""

    _fixtures: Dict[str, Callable[[], Fixture]] = {}

    @classmethod
    def register(cls, name: str):
        """Decorator to register a fixture builder."""
        def decorator(func: Callable[[], Fixture]):
            if name in cls._fixtures:
                logger.warning(f"Overwriting existing fixture: {name}")
            cls._fixtures[name] = func
            logger.debug(f"Registered fixture: {name}")
            return func
        return decorator

    @classmethod
    def get_fixture(cls, name: str) -> Callable[[], Fixture]:
        if name not in cls._fixtures:
            available = cls.list_fixtures()
            raise ValueError(f"Unknown fixture: '{name}'. Available: {available}")
        return cls._fixtures[name]

    @classmethod
    def list_fixtures(cls) -> List[str]:
        return sorted(cls._fixtures.keys())


SL2_BRACKET = {("h", "e"): {"e": 2}, ("h", "f"): {"f": -2}, ("e", "f"): {"h": 1}}

# Trace form of the defining representation and its inverse.
SL2_TRACE_FORM = {("e", "f"): Fraction(1), ("f", "e"): Fraction(1), ("h", "h"): Fraction(2)}
SL2_CASIMIR: Dict[Key, Fraction] = {("e", "f"): Fraction(1), ("f", "e"): Fraction(1), ("h", "h"): Fraction(1, 2)}


def sl2_space(name: str = "sl2") -> GradedSpace:
    return GradedSpace.from_basis(name, [("e", 0), ("f", 0), ("h", 0)])


# ============================================================================
# Algebras
# ============================================================================

@FixtureRegistry.register('abelian')
def abelian(arity_cap: int = 4) -> LInfinityAlgebra:
    space = GradedSpace.from_basis("abelian", [("x", 0), ("y", 1), ("z", -1)])
    return LInfinityAlgebra("abelian", space, {}, arity_cap)


@FixtureRegistry.register('sl2')
def sl2(arity_cap: int = 4) -> LInfinityAlgebra:
    space = sl2_space()
    return LInfinityAlgebra("sl2", space, {2: bracket_from_table(space, 2, SL2_BRACKET)}, arity_cap)


@FixtureRegistry.register('dgla')
def dgla(arity_cap: int = 4) -> LInfinityAlgebra:
    """sl₂ ⊗ 𝕂[ε]/ε² with |ε| = -1 and ℓ¹ = ∂_ε; labels xE stand for x⊗ε."""
    base = ("e", "f", "h")
    space = GradedSpace.from_basis("dgla", [(x, 0) for x in base] + [(x + "E", -1) for x in base])
    differential = {(x + "E",): {x: 1} for x in base}
    table: Dict[tuple, Dict[str, int]] = {}
    for (x, y), image in SL2_BRACKET.items():
        table[(x, y)] = dict(image)
        table[(x + "E", y)] = {z + "E": c for z, c in image.items()}
        table[(x, y + "E")] = {z + "E": c for z, c in image.items()}
    brackets = {1: bracket_from_table(space, 1, differential), 2: bracket_from_table(space, 2, table)}
    return LInfinityAlgebra("dgla", space, brackets, arity_cap)


def _trace_pairing(x: str, y: str) -> Fraction:
    return SL2_TRACE_FORM.get((x, y), Fraction(0))


@FixtureRegistry.register('string_lie2')
def string_lie2(arity_cap: int = 4) -> LInfinityAlgebra:
    """sl₂ ⊕ 𝕂c with |c| = -1 and ℓ³(x, y, z) = (x, [y, z]) c."""
    space = GradedSpace.from_basis("string", [("e", 0), ("f", 0), ("h", 0), ("c", -1)])
    sl2_alg = sl2()
    table: Dict[tuple, Dict[str, Fraction]] = {}
    for key in itertools.combinations(("e", "f", "h"), 3):
        x, y, z = key
        value = sum((_trace_pairing(x, w) * c for (w,), c in sl2_alg.evaluate((y, z)).items()), Fraction(0))
        if value:
            table[key] = {"c": value}
    brackets = {2: bracket_from_table(space, 2, SL2_BRACKET), 3: bracket_from_table(space, 3, table)}
    return LInfinityAlgebra("string_lie2", space, brackets, arity_cap)


@FixtureRegistry.register('sl2_central')
def sl2_central(arity_cap: int = 4) -> LInfinityAlgebra:
    """sl₂ ⊕ 𝕂c with |c| = -1 central and no ℓ³: the strict truncation of string_lie2."""
    space = GradedSpace.from_basis("sl2_central", [("e", 0), ("f", 0), ("h", 0), ("c", -1)])
    return LInfinityAlgebra("sl2_central", space, {2: bracket_from_table(space, 2, SL2_BRACKET)}, arity_cap)


@FixtureRegistry.register('heisenberg')
def heisenberg(arity_cap: int = 4) -> LInfinityAlgebra:
    """Odd generators a, b with ℓ²(a, b) = c in degree 2."""
    space = GradedSpace.from_basis("heisenberg", [("a", 1), ("b", 1), ("c", 2)])
    return LInfinityAlgebra("heisenberg", space, {2: bracket_from_table(space, 2, {("a", "b"): {"c": 1}})},
                            arity_cap)


# ============================================================================
# Representations and Poisson structures
# ============================================================================

@FixtureRegistry.register('sl2_fundamental')
def sl2_fundamental(arity_cap: int = 4) -> Representation:
    """The defining 2-dimensional module, ρ²(x; v) = -x·v."""
    alg = sl2(arity_cap)
    V = TensorSpace((GradedSpace.from_basis("V2", [("v1", 0), ("v2", 0)]),))
    action = {("e", "v2"): "v1", ("f", "v1"): "v2", ("h", "v1"): "v1"}
    rho = SkewMultiMap(alg.space, 1, V, V, 0)
    for (x, v), w in action.items():
        rho.add((x,), (v,), {(w,): Fraction(-1)})
    rho.add(("h",), ("v2",), {("v2",): Fraction(1)})
    return Representation("V2", V, Intertwiner(alg, V, V, 1, {2: rho}, name="rho_V2"))


@FixtureRegistry.register('sl2_casimir')
def sl2_casimir(arity_cap: int = 2) -> ShiftedPoissonStructure:
    return casimir_structure(sl2(arity_cap), SL2_CASIMIR, "sl2_casimir", weight_cap=3, arity_cap=arity_cap)


@FixtureRegistry.register('string_poisson')
def string_poisson(arity_cap: int = 2) -> ShiftedPoissonStructure:
    # ℓ³ must stay visible while solving
    alg = string_lie2(max(arity_cap + 1, 3))
    return string_poisson_structure(alg, "h", "c", weight_cap=3, arity_cap=arity_cap)


@FixtureRegistry.register('central_casimir')
def central_casimir(arity_cap: int = 2) -> ShiftedPoissonStructure:
    """The weight-2 solution direction on sl2_central with nonzero π₂⁰; π₃ vanishes by degrees."""
    solution = solve_weight2(sl2_central(max(arity_cap + 1, 3)), 2, arity_cap)
    directions = solution.directions(0)
    if not directions:
        raise ValueError("sl2_central has no weight-2 solution with nonzero π₂⁰")
    return solution.structure("central_casimir", directions[0], weight_cap=3)

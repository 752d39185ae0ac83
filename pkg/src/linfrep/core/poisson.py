"""
Shifted Poisson structures on homotopy Lie algebras.

A shifted Poisson structure is a family of polyvector components π_w^i of
weight w ≥ 2 that, together with π₁^i = (-1)^{i-1} ℓ^i, solves the
Maurer-Cartan equation for the bullet product. Residuals are computed along
the generic bullet sum and cross-checked against the Schouten-Nijenhuis
bracket; for shift 2 the explicit weight-2 and weight-3 relations give a
third route.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from .errors import ParityMismatchError, ShapeMismatchError, ShiftError, SpaceMismatchError
from .graded import (
    GradedElement, GradedSpace, Key, Sparse, TensorSpace, add_into, apply_shuffler, exterior_basis,
    parity_sign, scaled, sym_embed, symmetric_basis,
)
from .linfty import LInfinityAlgebra, PolyMap, Witness, bullet, polyvector_composite, schouten

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]


def polyvector_degree(weight: int, arity: int, shift: int) -> int:
    """|π_w^i| = (1-w)n + 2 - i."""
    return (1 - weight) * shift + 2 - arity


def polyvector_coordinates(space: GradedSpace, weight: int, arity: int, shift: int) -> List[Tuple[Key, Key]]:
    """Degree-admissible (input key, canonical output key) pairs of π_w^i."""
    degree = polyvector_degree(weight, arity, shift)
    targets = exterior_basis(space, weight) if shift % 2 == 1 else symmetric_basis(space, weight)
    out = []
    for gkey in exterior_basis(space, arity):
        source = sum(space.degree_of(x) for x in gkey)
        out.extend((gkey, skey) for skey in targets
                   if sum(space.degree_of(y) for y in skey) == source + degree)
    return out


def admissible_arities(space: GradedSpace, weight: int, shift: int, arity_cap: int) -> List[int]:
    """Arities ≤ arity_cap at which π_w can be nonzero at all; an empty list means π_w = 0 by degrees."""
    return [i for i in range(arity_cap + 1) if polyvector_coordinates(space, weight, i, shift)]


@dataclass
class ShiftedPoissonStructure:
    """Components π_w^i for 2 ≤ w ≤ weight_cap and 0 ≤ i ≤ arity_cap."""

    name: str
    shift: int
    components: Dict[Cell, PolyMap] = field(default_factory=dict)
    weight_cap: int = 3
    arity_cap: int = 4

    def __post_init__(self):
        alternating = self.shift % 2 == 1
        for (w, i), comp in self.components.items():
            if w < 2:
                raise ShapeMismatchError(f"Component π_{w}^{i}: weights start at 2, weight 1 is ℓ")
            if comp.weight != w or comp.arity != i:
                raise ShapeMismatchError(f"Component stored at ({w}, {i}) has weight {comp.weight}, arity {comp.arity}")
            if not comp.is_zero() and comp.degree != polyvector_degree(w, i, self.shift):
                raise ShapeMismatchError(
                    f"π_{w}^{i} has degree {comp.degree}, expected {polyvector_degree(w, i, self.shift)}"
                )
            if not comp.is_graded_symmetric(alternating):
                kind = "antisymmetric" if alternating else "symmetric"
                raise ParityMismatchError(f"π_{w}^{i} of '{self.name}' is not graded {kind}")

    def component(self, weight: int, arity: int) -> Optional[PolyMap]:
        if weight > self.weight_cap or arity > self.arity_cap:
            return None
        comp = self.components.get((weight, arity))
        if comp is None or comp.is_zero():
            return None
        return comp

    def with_component(self, weight: int, arity: int, comp: PolyMap) -> "ShiftedPoissonStructure":
        components = dict(self.components)
        components[(weight, arity)] = comp
        return ShiftedPoissonStructure(self.name, self.shift, components, self.weight_cap, self.arity_cap)

    @classmethod
    def zero(cls, name: str, shift: int, weight_cap: int = 3, arity_cap: int = 4) -> "ShiftedPoissonStructure":
        return cls(name, shift, {}, weight_cap, arity_cap)


def _require_space(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure) -> None:
    for comp in sps.components.values():
        if comp.space != alg.space:
            raise SpaceMismatchError(f"'{sps.name}' is not a structure on '{alg.name}'")


def polyvector_family(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure) -> Dict[Cell, PolyMap]:
    """All nonzero components, weight 1 taken from the brackets."""
    family: Dict[Cell, PolyMap] = {}
    for i, comp in alg.pi1().items():
        if not comp.is_zero():
            family[(1, i)] = comp
    for (w, i) in sps.components:
        comp = sps.component(w, i)
        if comp is not None:
            family[(w, i)] = comp
    return family


def _cell_pairs(weight: int, arity: int):
    """Index pairs ((p, j), (q, k)) with p + q̃ = weight and j̃ + k = arity."""
    for p in range(1, weight + 1):
        q = weight - p + 1
        for j in range(1, arity + 2):
            yield (p, j), (q, arity - j + 1)


def mc_residual(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure, weight: int, arity: int) -> Dict[Key, Sparse]:
    """Σ π_p^j • π_q^k over p + q̃ = weight, j̃ + k = arity."""
    family = polyvector_family(alg, sps)
    total = PolyMap.empty(alg.space, arity, weight, polyvector_degree(weight, arity, sps.shift) + 1)
    for left, right in _cell_pairs(weight, arity):
        if left in family and right in family:
            total = total + bullet(family[left], family[right], sps.shift)
    return {x: v for (x, _), v in total.entries.items() if v}


def schouten_mc_residual(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure,
                         weight: int, arity: int) -> Dict[Key, Sparse]:
    """½ Σ {π_p^j, π_q^k} over the same ordered index pairs."""
    family = polyvector_family(alg, sps)
    total = PolyMap.empty(alg.space, arity, weight, polyvector_degree(weight, arity, sps.shift) + 1)
    for left, right in _cell_pairs(weight, arity):
        if left in family and right in family:
            total = total + schouten(family[left], family[right], sps.shift)
    return {x: scaled(v, Fraction(1, 2)) for (x, _), v in total.entries.items() if v}


def mc_weight_component(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure,
                        weight: int) -> Dict[int, Dict[Key, Sparse]]:
    """Nonzero residuals of one weight, by arity."""
    _require_space(alg, sps)
    start = 1 if weight == 1 else 0
    out = {}
    for i in range(start, sps.arity_cap + 1):
        residual = mc_residual(alg, sps, weight, i)
        if residual:
            out[i] = residual
    return out


# ============================================================================
# Explicit shift-2 relations
# ============================================================================

def _displayed_term(P: Optional[PolyMap], Q: Optional[PolyMap], x: Key, blocks: Tuple[int, int],
                    target: TensorSpace) -> Sparse:
    if P is None or Q is None:
        return {}
    raw = polyvector_composite(P, Q, x)
    if not raw or blocks[1] == 0:
        return raw
    return apply_shuffler("sym", blocks, GradedElement(target, raw), inverse=True).terms


def _displayed_residual(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure, weight: int, arity: int,
                        shapes: Sequence[Tuple[int, int]]) -> Dict[Key, Sparse]:
    if sps.shift != 2:
        raise ShiftError(f"Explicit weight-{weight} relation needs shift 2, got {sps.shift}")
    _require_space(alg, sps)
    pi1 = {i: c for i, c in alg.pi1().items() if not c.is_zero()}

    def pi(w: int, i: int) -> Optional[PolyMap]:
        return pi1.get(i) if w == 1 else sps.component(w, i)

    target = TensorSpace.power(alg.space, weight)
    out: Dict[Key, Sparse] = {}
    for x in exterior_basis(alg.space, arity):
        acc: Sparse = {}
        for j in range(1, arity + 2):
            k = arity - j + 1
            sign = parity_sign(j * (k - 1))
            for p, q in shapes:
                term = _displayed_term(pi(p, j), pi(q, k), x, (p, q - 1), target)
                add_into(acc, term, sign)
        if acc:
            out[x] = acc
    return out


def _displayed_by_arity(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure, weight: int,
                        shapes: Sequence[Tuple[int, int]]) -> Dict[int, Dict[Key, Sparse]]:
    out = {}
    for i in range(sps.arity_cap + 1):
        residual = _displayed_residual(alg, sps, weight, i, shapes)
        if residual:
            out[i] = residual
    return out


def weight2_mc_residual(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure) -> Dict[int, Dict[Key, Sparse]]:
    """
    Σ_{j̃+k=i} (-1)^{jk̃} (Σ⁺_{1,1}[π₁^j⊗1][1⊗π₂^k] + π₂^j[1⊗π₁^k]) Σ_{j̃,k}, by arity i ≤ arity_cap.

    Only arities with a nonzero residual are returned.
    """
    return _displayed_by_arity(alg, sps, 2, ((1, 2), (2, 1)))


def weight3_mc_residual(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure) -> Dict[int, Dict[Key, Sparse]]:
    """
    Σ_{j̃+k=i} (-1)^{jk̃} (Σ⁺_{1,2}[π₁^j⊗1][1⊗π₃^k] + π₃^j[1⊗π₁^k]
    + Σ⁺_{2,1}[π₂^j⊗1][1⊗π₂^k]) Σ_{j̃,k}, by arity i ≤ arity_cap.
    """
    return _displayed_by_arity(alg, sps, 3, ((1, 3), (3, 1), (2, 2)))


# ============================================================================
# Maurer-Cartan check
# ============================================================================

@dataclass
class MCReport:
    """Per-cell Maurer-Cartan residuals with route agreement."""

    structure: str
    algebra: str
    shift: int
    passed: bool
    weight_cap: int
    arity_cap: int
    checked_cells: List[Cell]
    residuals: Dict[Cell, Dict[Key, Sparse]]
    routes_agree: bool
    witness: Optional[Witness] = None
    incidents: List[str] = field(default_factory=list)

    def holds_at(self, weight: int, arity: int) -> bool:
        return not self.residuals.get((weight, arity))

    def failing_weights(self) -> List[int]:
        return sorted({w for (w, _), r in self.residuals.items() if r})


def check_mc(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure, shift: Optional[int] = None) -> MCReport:
    """Check the Maurer-Cartan equation up to the weight and arity caps."""
    if shift is not None and shift != sps.shift:
        raise ShiftError(f"'{sps.name}' is {sps.shift}-shifted, {shift} was requested")
    _require_space(alg, sps)
    residuals: Dict[Cell, Dict[Key, Sparse]] = {}
    incidents: List[str] = []
    cells: List[Cell] = []
    witness = None
    displayed: Dict[int, Dict[int, Dict[Key, Sparse]]] = {}
    if sps.shift == 2:
        routes_by_weight = {2: weight2_mc_residual, 3: weight3_mc_residual}
        displayed = {w: fn(alg, sps) for w, fn in routes_by_weight.items() if w <= sps.weight_cap}
    for w in range(1, sps.weight_cap + 1):
        for i in range(1 if w == 1 else 0, sps.arity_cap + 1):
            cells.append((w, i))
            direct = mc_residual(alg, sps, w, i)
            routes = {"Schouten": schouten_mc_residual(alg, sps, w, i)}
            if w in displayed:
                routes["explicit"] = displayed[w].get(i, {})
            for route, value in routes.items():
                if value != direct:
                    message = f"Bullet and {route} routes disagree for '{sps.name}' at weight {w}, arity {i}"
                    logger.error(message)
                    incidents.append(message)
            if direct:
                residuals[(w, i)] = direct
                if witness is None:
                    key = sorted(direct)[0]
                    witness = Witness(i, (w,) + (key,), direct[key])
    report = MCReport(
        structure=sps.name,
        algebra=alg.name,
        shift=sps.shift,
        passed=not residuals,
        weight_cap=sps.weight_cap,
        arity_cap=sps.arity_cap,
        checked_cells=cells,
        residuals=residuals,
        routes_agree=not incidents,
        witness=witness,
        incidents=incidents,
    )
    logger.debug(f"MC check for '{sps.name}': passed={report.passed}, cells={len(cells)}")
    return report


# ============================================================================
# Weight-2 solver
# ============================================================================

Variable = Tuple[int, Key, Key]


def _to_sympy(c: Fraction) -> sympy.Rational:
    return sympy.Rational(c.numerator, c.denominator)


def _from_sympy(c) -> Fraction:
    c = sympy.Rational(c)
    return Fraction(int(c.p), int(c.q))


@dataclass
class Weight2Solution:
    """Affine solution space of the weight-2 relation in the unknown π₂ coordinates."""

    algebra: LInfinityAlgebra
    shift: int
    arity_cap: int
    variables: List[Variable]
    fixed: Dict[int, PolyMap]
    matrix: sympy.Matrix
    constant: sympy.Matrix
    particular: Optional[List[Fraction]]
    nullspace: List[List[Fraction]]

    @property
    def consistent(self) -> bool:
        return self.particular is not None

    @property
    def dimension(self) -> int:
        return len(self.nullspace)

    def components(self, coords: Sequence[Fraction]) -> Dict[int, PolyMap]:
        """π₂ components for a coordinate vector, fixed components included."""
        if len(coords) != len(self.variables):
            raise ShapeMismatchError(f"{len(coords)} coordinates for {len(self.variables)} unknowns")
        alternating = self.shift % 2 == 1
        g = self.algebra.space
        out = {i: PolyMap(g, c.arity, c.module, c.target, c.degree, {k: dict(v) for k, v in c.entries.items()})
               for i, c in self.fixed.items()}
        for (i, gkey, skey), value in zip(self.variables, coords):
            if not value:
                continue
            comp = out.setdefault(i, PolyMap.empty(g, i, 2, polyvector_degree(2, i, self.shift)))
            comp.add(gkey, (), sym_embed(skey, g, alternating), Fraction(value))
        return out

    def coordinates(self, comps: Dict[int, PolyMap]) -> List[Fraction]:
        """
        Read π₂ components back into the solver's unknowns.

        Raises ShapeMismatchError when the components touch a fixed arity or
        are not spanned by the unknowns.
        """
        alternating = self.shift % 2 == 1
        g = self.algebra.space
        clash = sorted(i for i, c in comps.items() if i in self.fixed and not c.is_zero())
        if clash:
            raise ShapeMismatchError(f"π₂ is held fixed at arities {clash}")
        coords = []
        for (i, gkey, skey) in self.variables:
            embedded = sym_embed(skey, g, alternating)
            lead = min(embedded)
            image = comps[i].entries.get((gkey, ()), {}) if i in comps else {}
            coords.append(Fraction(image.get(lead, 0)) / embedded[lead])
        rebuilt = self.components(coords)
        for i, comp in comps.items():
            if comp.is_zero():
                continue
            entries = rebuilt[i].entries if i in rebuilt else {}
            if {k: v for k, v in entries.items() if v} != {k: v for k, v in comp.entries.items() if v}:
                raise ShapeMismatchError(f"π₂^{i} is not spanned by the solver's coordinates")
        return coords

    def directions(self, arity: int) -> List[List[Fraction]]:
        """Nullspace directions whose π₂^arity part is nonzero."""
        return [vec for vec in self.nullspace
                if any(v for (i, _, _), v in zip(self.variables, vec) if i == arity)]

    def contains(self, coords: Sequence[Fraction]) -> bool:
        vector = sympy.Matrix([_to_sympy(Fraction(c)) for c in coords])
        return (self.matrix * vector + self.constant).is_zero_matrix

    def structure(self, name: str, coords: Sequence[Fraction], weight_cap: int = 2) -> ShiftedPoissonStructure:
        comps = {(2, i): c for i, c in self.components(coords).items()}
        return ShiftedPoissonStructure(name, self.shift, comps, weight_cap, self.arity_cap)


def _weight2_linear(alg: LInfinityAlgebra, comps: Dict[int, PolyMap], shift: int,
                    arity_cap: int) -> Dict[Tuple[int, Key, Key], Fraction]:
    sps = ShiftedPoissonStructure("weight2-column", shift, {(2, i): c for i, c in comps.items()}, 2, arity_cap)
    flat = {}
    for i in range(arity_cap + 1):
        for x, image in mc_residual(alg, sps, 2, i).items():
            for out, c in image.items():
                flat[(i, x, out)] = c
    return flat


def solve_weight2(alg: LInfinityAlgebra, shift: int = 2, arity_cap: int = 2,
                  fixed: Optional[Dict[int, PolyMap]] = None) -> Weight2Solution:
    """
    Solve the weight-2 relation for π₂^i, i ≤ arity_cap, with some arities held fixed.

    The relation is affine in π₂ once π₁ is given, so its solutions are a
    particular solution plus the nullspace of the linear part.
    """
    fixed = dict(fixed or {})
    g = alg.space
    alternating = shift % 2 == 1
    variables: List[Variable] = [(i, gkey, skey) for i in range(arity_cap + 1) if i not in fixed
                                 for gkey, skey in polyvector_coordinates(g, 2, i, shift)]
    logger.info(f"Weight-2 system for '{alg.name}': {len(variables)} unknowns, {len(fixed)} fixed arities")

    constant_part = _weight2_linear(alg, fixed, shift, arity_cap)
    columns = []
    for (i, gkey, skey) in variables:
        comp = PolyMap.empty(g, i, 2, polyvector_degree(2, i, shift))
        comp.add(gkey, (), sym_embed(skey, g, alternating))
        columns.append(_weight2_linear(alg, {i: comp}, shift, arity_cap))
    rows = sorted(set(constant_part).union(*columns) if columns else set(constant_part))

    matrix = sympy.Matrix(len(rows), len(variables),
                          lambda r, c: _to_sympy(columns[c].get(rows[r], Fraction(0))))
    constant = sympy.Matrix(len(rows), 1, lambda r, _: _to_sympy(constant_part.get(rows[r], Fraction(0))))

    nullspace = [[_from_sympy(v) for v in vec] for vec in matrix.nullspace()]
    particular: Optional[List[Fraction]]
    if not rows or constant.is_zero_matrix:
        particular = [Fraction(0)] * len(variables)
    else:
        try:
            sol, params = matrix.gauss_jordan_solve(-constant)
            sol = sol.subs({p: 0 for p in params})
            particular = [_from_sympy(v) for v in sol]
        except ValueError:
            logger.warning(f"Weight-2 system for '{alg.name}' has no solution with the given fixed arities")
            particular = None
    return Weight2Solution(alg, shift, arity_cap, variables, fixed, matrix, constant, particular, nullspace)


# ============================================================================
# Named structures
# ============================================================================

def casimir_structure(alg: LInfinityAlgebra, tensor: Dict[Key, Fraction], name: Optional[str] = None,
                      weight_cap: int = 3, arity_cap: int = 4) -> ShiftedPoissonStructure:
    """The classical 2-shifted structure with π₂⁰ a symmetric invariant tensor and nothing else."""
    comp = PolyMap.empty(alg.space, 0, 2, polyvector_degree(2, 0, 2))
    comp.entries[((), ())] = {k: Fraction(v) for k, v in tensor.items() if v}
    return ShiftedPoissonStructure(name or f"{alg.name}-casimir", 2, {(2, 0): comp}, weight_cap, arity_cap)


def string_poisson_structure(alg: LInfinityAlgebra, element: str = "h", central: str = "c",
                             weight_cap: int = 3, arity_cap: int = 2) -> ShiftedPoissonStructure:
    """
    The inner derivation π₂¹(x) = [element, x] ⊙ central, read off the weight-2 solutions with π₂⁰ = 0.

    On the string Lie 2-algebra with ℓ³ visible, a nonzero π₂⁰ forces π₂¹ to
    carry a multiple of id ⊙ central, and π₂¹•π₂⁰ then leaves a weight-3
    residual that π₃ cannot cancel: π₃ vanishes by degrees. With π₂⁰ = 0 the
    weight-3 relation holds because central ⊙ central = 0.
    """
    g = alg.space
    for label in (element, central):
        if label not in g:
            raise SpaceMismatchError(f"'{label}' is not a basis label of '{alg.name}'")
    zero = PolyMap.empty(g, 0, 2, polyvector_degree(2, 0, 2))
    solution = solve_weight2(alg, 2, arity_cap, fixed={0: zero})
    comp = PolyMap.empty(g, 1, 2, polyvector_degree(2, 1, 2))
    for x in g.labels:
        for (y,), c in alg.evaluate((element, x)).items():
            comp.add((x,), (), sym_embed((y, central), g), c)
    coords = solution.coordinates({1: comp})
    if not solution.contains(coords):
        raise ShapeMismatchError(f"ad_{element} ⊙ {central} does not solve the weight-2 relation on '{alg.name}'")
    sps = solution.structure(f"{alg.name}-poisson", coords, weight_cap)
    logger.debug(f"'{sps.name}': one of {solution.dimension} weight-2 directions with π₂⁰ = 0, "
                 f"π₃ admissible at arities {admissible_arities(g, 3, 2, arity_cap)}")
    return sps


def perturb_coordinate(sps: ShiftedPoissonStructure, space: GradedSpace, weight: int, arity: int,
                       gkey: Key, skey: Key, coeff: Fraction) -> ShiftedPoissonStructure:
    """Add coeff · (skey as an (anti)symmetric tensor) to π_w^i at the input gkey."""
    existing = sps.components.get((weight, arity))
    comp = PolyMap.empty(space, arity, weight, polyvector_degree(weight, arity, sps.shift))
    if existing is not None:
        comp.entries = {k: dict(v) for k, v in existing.entries.items()}
    comp.add(gkey, (), sym_embed(skey, space, sps.shift % 2 == 1), coeff)
    return sps.with_component(weight, arity, comp)


def fuzz_non_solution(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure, rng: random.Random,
                      attempts: int = 25) -> Optional[ShiftedPoissonStructure]:
    """
    Perturb one coordinate of one π_w^i until the result violates Maurer-Cartan.

    Returns None when no degree-compatible perturbation breaks the equation.
    """
    g = alg.space
    cells = [(w, i) for w in range(2, sps.weight_cap + 1) for i in range(sps.arity_cap + 1)]
    for _ in range(attempts):
        w, i = rng.choice(cells)
        options = polyvector_coordinates(g, w, i, sps.shift)
        if not options:
            continue
        gkey, skey = rng.choice(options)
        fuzzed = perturb_coordinate(sps, g, w, i, gkey, skey, Fraction(rng.choice((-2, -1, 1, 2))))
        fuzzed.name = f"{sps.name}-fuzzed"
        if not check_mc(alg, fuzzed).passed:
            return fuzzed
    logger.warning(f"No Maurer-Cartan-breaking perturbation of '{sps.name}' found in {attempts} attempts")
    return None

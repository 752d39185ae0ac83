"""
Loading and saving instance files.

YAML and JSON share one loader (JSON is read through the YAML parser).
Degree homogeneity and admissibility are enforced at load time; keys that
are not in canonical order are normalised with a warning.
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Tuple, Union

import yaml
from pydantic import ValidationError

from ..core.errors import InstanceFormatError, LinfrepError
from ..core.graded import GradedSpace, Key, TensorSpace, skew_normalize
from ..core.linfty import LInfinityAlgebra, PolyMap, SkewMultiMap
from ..core.poisson import ShiftedPoissonStructure, polyvector_degree
from ..core.repcat import Intertwiner, Representation, adjoint_rep, trivial_rep
from ..models.instance import InstanceFile, InstanceKind, MapEntry
from ..utils.common import parse_rational

logger = logging.getLogger(__name__)

Instance = Union[LInfinityAlgebra, Representation, ShiftedPoissonStructure, Intertwiner]

BUILTIN_REPRESENTATIONS = ("adjoint", "trivial")


def read_instance_file(path: Union[str, Path]) -> InstanceFile:
    path = Path(path)
    try:
        with open(path, 'r') as f:
            raw = yaml.safe_load(f)
    except FileNotFoundError:
        raise InstanceFormatError(f"Instance file not found: {path}")
    except yaml.YAMLError as e:
        raise InstanceFormatError(f"Cannot parse {path}: {e}")
    if not isinstance(raw, dict):
        raise InstanceFormatError(f"{path} does not hold a mapping")
    try:
        return InstanceFile.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(p) for p in first["loc"])
        raise InstanceFormatError(f"{path}: {first['msg']}", location)


def _output(entry: MapEntry, arity: int) -> Dict[Key, Fraction]:
    image: Dict[Key, Fraction] = {}
    for term in entry.output:
        key = term.key
        if len(key) != arity:
            raise InstanceFormatError(f"Output {list(key)} should have {arity} label(s)", entry.model_dump())
        image[key] = image.get(key, Fraction(0)) + parse_rational(term.coeff)
    return image


def _fill(comp: SkewMultiMap, entries: Iterable[MapEntry], module_arity: int, target_arity: int,
          where: str) -> None:
    for entry in entries:
        inputs = tuple(entry.inputs)
        gkey, ukey = inputs[:len(inputs) - module_arity], inputs[len(inputs) - module_arity:]
        if len(gkey) != comp.skew_arity:
            raise InstanceFormatError(
                f"{where}: expected {comp.skew_arity} algebra inputs, got {len(gkey)}", entry.model_dump()
            )
        norm = skew_normalize(gkey, comp.space)
        if norm is not None and norm[0] != gkey:
            logger.warning(f"{where}: inputs {list(gkey)} normalised to {list(norm[0])}")
        try:
            comp.add(gkey, ukey, _output(entry, target_arity))
        except InstanceFormatError:
            raise
        except (LinfrepError, ValueError) as e:
            raise InstanceFormatError(f"{where}: {e}", entry.model_dump())


def _space(data: InstanceFile, name: str) -> GradedSpace:
    try:
        return GradedSpace.from_basis(name, [(b.label, b.degree) for b in data.basis])
    except LinfrepError as e:
        raise InstanceFormatError(f"Invalid basis of '{name}': {e}")


def _algebra(data: InstanceFile) -> LInfinityAlgebra:
    space = _space(data, data.name)
    g = TensorSpace((space,))
    brackets = {}
    for arity, entries in sorted(data.brackets.items()):
        if arity < 1:
            raise InstanceFormatError(f"Bracket arity {arity} is not allowed (no curvature)")
        comp = SkewMultiMap(space, arity, TensorSpace(), g, 2 - arity)
        _fill(comp, entries, 0, 1, f"ℓ^{arity}")
        brackets[arity] = comp
    return LInfinityAlgebra(data.name, space, brackets, data.arity_cap or 4)


def _representation(data: InstanceFile, alg: LInfinityAlgebra) -> Representation:
    V = TensorSpace((_space(data, data.name),))
    components = {}
    for arity, entries in sorted(data.actions.items()):
        if arity < 1:
            raise InstanceFormatError(f"Action arity {arity} must be at least 1")
        comp = SkewMultiMap(alg.space, arity - 1, V, V, 1 - (arity - 1))
        _fill(comp, entries, 1, 1, f"ρ^{arity}")
        components[arity] = comp
    action = Intertwiner(alg, V, V, 1, components, name=f"rho_{data.name}")
    return Representation(data.name, V, action)


def _poisson(data: InstanceFile, alg: LInfinityAlgebra) -> ShiftedPoissonStructure:
    components = {}
    for cell, entries in data.components.items():
        try:
            w, i = (int(part) for part in cell.split(","))
        except ValueError:
            raise InstanceFormatError(f"Poisson cell '{cell}' is not 'weight,arity'")
        comp = PolyMap.empty(alg.space, i, w, polyvector_degree(w, i, data.shift))
        _fill(comp, entries, 0, w, f"π_{w}^{i}")
        components[(w, i)] = comp
    try:
        return ShiftedPoissonStructure(data.name, data.shift, components, data.weight_cap or 3,
                                       data.arity_cap or alg.arity_cap)
    except LinfrepError as e:
        raise InstanceFormatError(f"Invalid Poisson structure '{data.name}': {e}")


def resolve_representation(ref: str, alg: LInfinityAlgebra, base: Path) -> Representation:
    if ref == "adjoint":
        return adjoint_rep(alg)
    if ref == "trivial":
        return trivial_rep(alg)
    rep = load_instance(base / ref)
    if not isinstance(rep, Representation):
        raise InstanceFormatError(f"'{ref}' is not a representation")
    return rep


def _intertwiner(data: InstanceFile, alg: LInfinityAlgebra, base: Path) -> Tuple[Intertwiner, Representation, Representation]:
    U = resolve_representation(data.source, alg, base)
    V = resolve_representation(data.target, alg, base)
    components = {}
    for key, entries in data.components.items():
        arity = int(key)
        comp = SkewMultiMap(alg.space, arity - 1, U.space, V.space, data.degree - (arity - 1))
        _fill(comp, entries, U.space.arity, V.space.arity, f"f^{arity}")
        components[arity] = comp
    return Intertwiner(alg, U.space, V.space, data.degree, components, name=data.name), U, V


def load_instance(path: Union[str, Path]) -> Instance:
    """Load and validate one instance file."""
    path = Path(path)
    data = read_instance_file(path)
    if data.kind == InstanceKind.ALGEBRA:
        instance: Instance = _algebra(data)
    else:
        alg = load_instance(path.parent / data.algebra)
        if not isinstance(alg, LInfinityAlgebra):
            raise InstanceFormatError(f"'{data.algebra}' referenced by {path} is not an algebra")
        if data.kind == InstanceKind.REPRESENTATION:
            instance = _representation(data, alg)
        elif data.kind == InstanceKind.POISSON:
            instance = _poisson(data, alg)
        else:
            instance = _intertwiner(data, alg, path.parent)[0]
    logger.debug(f"Loaded {data.kind.value} '{data.name}' from {path}")
    return instance


def load_poisson_with_algebra(path: Union[str, Path]):
    """A Poisson file together with the algebra it references."""
    path = Path(path)
    data = read_instance_file(path)
    if data.kind != InstanceKind.POISSON:
        raise InstanceFormatError(f"{path} holds a {data.kind.value}, not a Poisson structure")
    alg = load_instance(path.parent / data.algebra)
    return alg, _poisson(data, alg)


def load_intertwiner_with_representations(path: Union[str, Path]) -> Tuple[Intertwiner, Representation, Representation]:
    """An intertwiner file with its resolved source and target representations."""
    path = Path(path)
    data = read_instance_file(path)
    if data.kind != InstanceKind.INTERTWINER:
        raise InstanceFormatError(f"{path} holds a {data.kind.value}, not an intertwiner")
    alg = load_instance(path.parent / data.algebra)
    if not isinstance(alg, LInfinityAlgebra):
        raise InstanceFormatError(f"'{data.algebra}' referenced by {path} is not an algebra")
    return _intertwiner(data, alg, path.parent)


# ============================================================================
# Saving
# ============================================================================

def _entries(comp: SkewMultiMap, tensor_output: bool) -> List[Dict]:
    out = []
    for (gkey, ukey), image in sorted(comp.entries.items()):
        if not image:
            continue
        output = [{"label": list(k) if tensor_output else k[0], "coeff": str(c)}
                  for k, c in sorted(image.items())]
        out.append({"inputs": list(gkey) + list(ukey), "output": output})
    return out


def instance_to_dict(instance: Instance, algebra_ref: Optional[str] = None, source_ref: Optional[str] = None,
                     target_ref: Optional[str] = None) -> Dict:
    """Canonical plain-data form of any instance kind; references are file paths or builtin names."""
    if isinstance(instance, LInfinityAlgebra):
        return {
            "kind": "algebra",
            "name": instance.name,
            "arity_cap": instance.arity_cap,
            "basis": [{"label": l, "degree": d} for l, d in instance.space.basis()],
            "brackets": {i: _entries(b, False) for i, b in sorted(instance.brackets.items()) if not b.is_zero()},
        }
    if algebra_ref is None:
        raise InstanceFormatError("Saving a non-algebra instance needs the algebra's path")
    if isinstance(instance, Representation):
        if instance.space.arity != 1:
            raise InstanceFormatError(f"Only single-factor modules can be saved, not {instance.space.name}")
        factor = instance.space.factors[0]
        return {
            "kind": "representation",
            "name": instance.name,
            "algebra": algebra_ref,
            "basis": [{"label": l, "degree": d} for l, d in factor.basis()],
            "actions": {i: _entries(c, False) for i, c in sorted(instance.action.components.items())
                        if not c.is_zero()},
        }
    if isinstance(instance, ShiftedPoissonStructure):
        return {
            "kind": "poisson",
            "name": instance.name,
            "algebra": algebra_ref,
            "shift": instance.shift,
            "weight_cap": instance.weight_cap,
            "arity_cap": instance.arity_cap,
            "components": {f"{w},{i}": _entries(c, True) for (w, i), c in sorted(instance.components.items())
                           if not c.is_zero()},
        }
    if isinstance(instance, Intertwiner):
        return {
            "kind": "intertwiner",
            "name": instance.name or "f",
            "algebra": algebra_ref,
            "source": source_ref or instance.source.name,
            "target": target_ref or instance.target.name,
            "degree": instance.degree,
            "components": {str(i): _entries(c, instance.target.arity != 1)
                           for i, c in sorted(instance.components.items()) if not c.is_zero()},
        }
    raise InstanceFormatError(f"Cannot save objects of type {type(instance).__name__}")


def save_instance(instance: Instance, path: Union[str, Path], algebra_ref: Optional[str] = None) -> Path:
    path = Path(path)
    data = instance_to_dict(instance, algebra_ref)
    with open(path, 'w') as f:
        yaml.safe_dump(data, f, sort_keys=False, allow_unicode=True)
    logger.info(f"Saved {data['kind']} '{data['name']}' to {path}")
    return path

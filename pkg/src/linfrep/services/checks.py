"""
Check dispatch for the command line.

Usage:
    from linfrep.services.checks import CheckRegistry, run_check

    report = run_check('jacobi', [Path('fixtures/sl2.yaml')], SessionConfig())

Adding New Checks:
    @CheckRegistry.register('your_check')
    def your_check(ctx: CheckContext) -> CheckResult:
        ...
"""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, TypeVar

from ..core.braiding import Verdict, build_braiding_data, certify, classical_casimir_oracle, t_objects
from ..core.ce import (
    CECase, CEVerdict, augmentation_report, build_ce_algebra, build_ce_module, check_delta_squared,
    check_equivalence_suite,
)
from ..core.config import SessionConfig
from ..core.errors import InstanceFormatError
from ..core.linfty import LInfinityAlgebra, Witness, check_jacobi
from ..core.poisson import ShiftedPoissonStructure, check_mc
from ..core.repcat import Representation, adjoint_rep, is_representation, trivial_rep
from ..models.report import CheckVerdict, Report, ResidualWitness
from ..utils.common import ProgressLogger, file_digest
from ..utils.suite_config import SuiteConfigManager
from . import fixtures
from .axioms import SUITES, labelled, random_instance, representation_corpus, representation_routes
from .generator import InstanceGenerator
from .instances import load_instance, load_poisson_with_algebra, resolve_representation

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

ALGEBRA_FIXTURES = ("abelian", "sl2", "dgla", "string_lie2", "sl2_central", "heisenberg")


@dataclass
class CheckContext:
    """Inputs of one check command."""

    paths: List[Path]
    config: SessionConfig
    suites: SuiteConfigManager
    reps: Tuple[str, ...] = ("adjoint", "adjoint", "adjoint")
    progress: Optional[ProgressLogger] = None


@dataclass
class CheckResult:
    verdicts: List[CheckVerdict] = field(default_factory=list)
    incidents: List[str] = field(default_factory=list)


CheckFunction = Callable[[CheckContext], CheckResult]


class CheckRegistry:
    """Registry of check commands."""

    _checks: Dict[str, CheckFunction] = {}

    @classmethod
    def register(cls, name: str):
        """Decorator to register a check command."""
        def decorator(func: CheckFunction):
            if name in cls._checks:
                logger.warning(f"Overwriting existing check: {name}")
            cls._checks[name] = func
            logger.debug(f"Registered check: {name}")
            return func
        return decorator

    @classmethod
    def get_check(cls, name: str) -> CheckFunction:
        if name not in cls._checks:
            available = cls.list_checks()
            raise ValueError(f"Unknown check: '{name}'. Available: {available}")
        return cls._checks[name]

    @classmethod
    def list_checks(cls) -> List[str]:
        return sorted(cls._checks.keys())


# ============================================================================
# Helpers
# ============================================================================

def fan_out(fn: Callable[[T], R], items: Sequence[T], jobs: int) -> List[R]:
    """Map ``fn`` over ``items`` in order, on a thread pool when jobs > 1."""
    if jobs > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _witness(witness: Optional[Witness]) -> Optional[ResidualWitness]:
    return ResidualWitness.from_witness(witness) if witness is not None else None


def from_verdict(v: Verdict) -> CheckVerdict:
    return CheckVerdict(name=v.name, passed=v.passed, cap=v.compared_up_to, witness=_witness(v.witness),
                        detail=v.note or None)


def from_ce_verdict(v: CEVerdict, prefix: str = "") -> CheckVerdict:
    cap = None if v.compared_up_to == math.inf else int(v.compared_up_to)
    detail = v.witness
    if v.failing_lengths:
        detail = f"{detail} (word lengths {list(v.failing_lengths)})"
    return CheckVerdict(name=f"{prefix}{v.name}", passed=v.passed, cap=cap, detail=detail)


def _base_name(name: str) -> str:
    return name.split("[", 1)[0]


def summarise(verdicts: Iterable[CheckVerdict], suite: str, total: int) -> List[CheckVerdict]:
    """One verdict per identity across a random corpus; the first failure is kept as witness."""
    grouped: Dict[str, List[CheckVerdict]] = {}
    for v in verdicts:
        grouped.setdefault(_base_name(v.name), []).append(v)
    summary = []
    for name, group in grouped.items():
        failed = [v for v in group if not v.passed]
        first = failed[0] if failed else None
        detail = f"{len(group) - len(failed)}/{len(group)} instances of {total}"
        if first is not None:
            detail += f"; first failure {first.name}"
            if first.detail:
                detail += f": {first.detail}"
        caps = [v.cap for v in group if v.cap is not None]
        summary.append(CheckVerdict(name=f"{suite}.{name}", passed=first is None,
                                    cap=min(caps) if caps else None,
                                    witness=first.witness if first is not None else None, detail=detail))
    return summary


def _algebras(ctx: CheckContext) -> List[LInfinityAlgebra]:
    if not ctx.paths:
        return [fixtures.FixtureRegistry.get_fixture(name)(ctx.config.arity_cap) for name in ALGEBRA_FIXTURES]
    algebras = []
    for path in ctx.paths:
        alg = load_instance(path)
        if not isinstance(alg, LInfinityAlgebra):
            raise InstanceFormatError(f"{path} is not an algebra")
        algebras.append(alg.with_cap(ctx.config.arity_cap))
    return algebras


# ============================================================================
# Checks
# ============================================================================

@CheckRegistry.register('jacobi')
def jacobi_check(ctx: CheckContext) -> CheckResult:
    result = CheckResult()
    for report in fan_out(check_jacobi, _algebras(ctx), ctx.config.jobs):
        detail = f"degree-pruned arities {report.pruned_arities}" if report.pruned_arities else None
        result.verdicts.append(CheckVerdict(name=f"jacobi[{report.algebra}]", passed=report.passed,
                                            cap=report.cap, witness=_witness(report.witness), detail=detail))
        result.incidents.extend(report.incidents)
    return result


def _representations(ctx: CheckContext) -> List[Representation]:
    if not ctx.paths:
        reps = [adjoint_rep(alg) for alg in _algebras(ctx)]
        reps.append(fixtures.sl2_fundamental(ctx.config.arity_cap))
        return reps
    reps = []
    for path in ctx.paths:
        instance = load_instance(path)
        if isinstance(instance, LInfinityAlgebra):
            reps.append(adjoint_rep(instance.with_cap(ctx.config.arity_cap)))
        elif isinstance(instance, Representation):
            reps.append(instance)
        else:
            raise InstanceFormatError(f"{path} is neither an algebra nor a representation")
    return reps


@CheckRegistry.register('rep')
def representation_check(ctx: CheckContext) -> CheckResult:
    result = CheckResult()
    for report in fan_out(is_representation, _representations(ctx), ctx.config.jobs):
        result.verdicts.append(CheckVerdict(name=f"representation[{report.representation}]", passed=report.passed,
                                            cap=report.compared_up_to, witness=_witness(report.witness)))
        result.incidents.extend(report.incidents)
    return result


def _poisson_pairs(ctx: CheckContext) -> List[Tuple[LInfinityAlgebra, ShiftedPoissonStructure]]:
    if not ctx.paths:
        return [(fixtures.sl2(2), fixtures.sl2_casimir()), (fixtures.string_lie2(3), fixtures.string_poisson()),
                (fixtures.sl2_central(3), fixtures.central_casimir())]
    return [load_poisson_with_algebra(path) for path in ctx.paths]


@CheckRegistry.register('poisson')
def poisson_check(ctx: CheckContext) -> CheckResult:
    result = CheckResult()
    reports = fan_out(lambda pair: check_mc(*pair), _poisson_pairs(ctx), ctx.config.jobs)
    for report in reports:
        failing = report.failing_weights()
        detail = f"failing weights {failing}" if failing else f"{len(report.checked_cells)} cells"
        result.verdicts.append(CheckVerdict(name=f"maurer_cartan[{report.structure}]", passed=report.passed,
                                            cap=report.arity_cap, witness=_witness(report.witness), detail=detail))
        result.incidents.extend(report.incidents)
    return result


@CheckRegistry.register('axioms')
def axiom_check(ctx: CheckContext) -> CheckResult:
    if ctx.paths:
        logger.warning("The axiom suites run on generated instances; input files are ignored")
    gen = InstanceGenerator(ctx.config)
    progress = ctx.progress
    result = CheckResult()
    for suite, fn in SUITES.items():
        settings = ctx.suites.get_suite(suite)
        count = settings['instances']
        instances = [random_instance(gen, settings.get('arity_cap', ctx.config.arity_cap)) for _ in range(count)]
        if progress:
            progress.start_suite(suite, count)
        outcomes = fan_out(lambda inst: labelled(inst, fn(inst)), instances, ctx.config.jobs)
        verdicts = []
        for outcome in outcomes:
            if progress:
                progress.record(all(v.passed for v in outcome))
            verdicts.extend(from_verdict(v) for v in outcome)
        if progress:
            progress.end_suite()
        result.verdicts.extend(summarise(verdicts, suite, count))

    settings = ctx.suites.get_suite('representation')
    corpus = representation_corpus(gen, settings['instances'], settings.get('arity_cap', ctx.config.arity_cap))
    outcome, accepted = representation_routes(corpus)
    summary = summarise((from_verdict(v) for v in outcome.verdicts), "representation", len(corpus))
    for v in summary:
        v.detail = f"{v.detail}; {accepted} candidates are representations"
    result.verdicts.extend(summary)
    result.incidents.extend(outcome.incidents)
    return result


def _is_classical(alg: LInfinityAlgebra, sps: ShiftedPoissonStructure) -> bool:
    brackets = [i for i, b in alg.brackets.items() if not b.is_zero()]
    cells = [cell for cell, c in sps.components.items() if not c.is_zero()]
    return brackets in ([], [2]) and set(alg.space.degrees) <= {0} and cells in ([], [(2, 0)])


@CheckRegistry.register('braiding')
def braiding_check(ctx: CheckContext) -> CheckResult:
    if ctx.paths:
        alg, sps = load_poisson_with_algebra(ctx.paths[-1])
        base = ctx.paths[-1].parent
        if len(ctx.paths) > 1:
            given = load_instance(ctx.paths[0])
            if not isinstance(given, LInfinityAlgebra) or given.space != alg.space:
                raise InstanceFormatError(f"{ctx.paths[0]} is not the algebra of {ctx.paths[-1]}")
    else:
        alg, sps = fixtures.sl2(), fixtures.sl2_casimir()
        base = Path.cwd()
    if len(ctx.reps) != 3:
        raise InstanceFormatError(f"Braiding needs three representations, got {list(ctx.reps)}")
    alg = alg.with_cap(min(ctx.config.arity_cap, ctx.suites.get_suite('braiding')['arity_cap']))
    U, V, W = (resolve_representation(ref, alg, base) for ref in ctx.reps)
    data = build_braiding_data(alg, sps)
    certificate = certify(U, V, W, data)

    result = CheckResult()
    result.verdicts.extend(from_verdict(v) for v in certificate.verdicts())
    result.verdicts.append(CheckVerdict(name="degree_audit", passed=certificate.degree_audit,
                                        detail=", ".join(f"{k}={v}" for k, v in certificate.degrees.items())))
    if _is_classical(alg, sps):
        casimir = {}
        comp = sps.component(2, 0)
        if comp is not None:
            casimir = dict(comp.entries.get(((), ()), {}))
        comparison = t_objects(U, V, data).difference(classical_casimir_oracle(U, V, casimir))
        result.verdicts.append(from_verdict(Verdict.from_comparison("classical_oracle", comparison)))
    result.incidents.extend(certificate.incidents)
    return result


def _ce_cases(gen: InstanceGenerator, alg: LInfinityAlgebra, pool: List[Representation], count: int) -> List[CECase]:
    cases = []
    for k in range(count):
        U, V, W = (gen.rng.choice(pool) for _ in range(3))
        cases.append(CECase(f"case{k}", U, V, W, gen.intertwiner(alg, U.space, V.space),
                            gen.intertwiner(alg, V.space, W.space)))
    return cases


@CheckRegistry.register('ce')
def ce_check(ctx: CheckContext) -> CheckResult:
    W = ctx.config.word_cap
    if ctx.paths:
        algebras = _algebras(CheckContext(ctx.paths[:1], ctx.config, ctx.suites))
        extra = [load_instance(path) for path in ctx.paths[1:]]
        if not all(isinstance(rep, Representation) for rep in extra):
            raise InstanceFormatError("Files after the algebra must be representations")
    else:
        algebras = [fixtures.sl2(ctx.config.arity_cap), fixtures.string_lie2(ctx.config.arity_cap)]
        extra = []
    gen = InstanceGenerator(ctx.config)
    count = ctx.suites.get_suite('ce_pairs')['instances']
    result = CheckResult()
    for alg in algebras:
        prefix = f"{alg.name}."
        A = build_ce_algebra(alg, W)
        result.verdicts.append(from_ce_verdict(check_delta_squared(A), prefix))
        adjoint = adjoint_rep(alg)
        for rep in [adjoint] + extra:
            result.verdicts.append(from_ce_verdict(build_ce_module(rep, A).square_zero, prefix))
        augmented = augmentation_report(A)
        result.verdicts.append(CheckVerdict(
            name=f"{prefix}augmentation", passed=True,
            detail="augmented" if augmented.augmented else f"scalar δ on {augmented.offending}",
        ))
        pool = [adjoint, trivial_rep(alg)] + extra
        cases = _ce_cases(gen, alg, pool, count)
        suite = check_equivalence_suite(alg, cases, W)
        result.verdicts.extend(summarise((from_ce_verdict(v) for v in suite.verdicts), alg.name, len(cases)))
    return result


# ============================================================================
# Entry point
# ============================================================================

def run_check(command: str, paths: Sequence[Path], config: SessionConfig,
              reps: Sequence[str] = ("adjoint", "adjoint", "adjoint"),
              suites: Optional[SuiteConfigManager] = None,
              progress: Optional[ProgressLogger] = None) -> Report:
    """Run one registered check and assemble its report."""
    check = CheckRegistry.get_check(command)
    paths = [Path(p) for p in paths]
    inputs = {str(p): file_digest(p) for p in paths if p.exists()}
    ctx = CheckContext(paths, config, suites or SuiteConfigManager(), tuple(reps), progress)
    logger.info(f"Running check '{command}' on {len(paths)} input(s), seed {config.seed}")
    start = time.perf_counter()
    result = check(ctx)
    report = Report(
        command=f"check {command}",
        inputs=inputs,
        caps={"arity_cap": config.arity_cap, "word_cap": config.word_cap, "weight_cap": config.weight_cap},
        seed=config.seed,
        verdicts=result.verdicts,
        incidents=result.incidents,
        wall_time=time.perf_counter() - start,
    )
    logger.info(f"Check '{command}': {sum(v.passed for v in report.verdicts)}/{len(report.verdicts)} passed")
    return report

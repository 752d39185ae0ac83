"""
Command-line interface.

Exit codes: 0 when every check passes, 1 when a mathematical check fails,
2 on input or usage errors.
"""

import argparse
import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, List, Optional

import yaml
from pydantic import ValidationError

from . import __version__
from .core.ce import build_ce_algebra, build_ce_module, export_presentation
from .core.config import SessionConfig, get_settings
from .core.errors import InstanceFormatError, LinfrepError
from .core.linfty import LInfinityAlgebra
from .core.repcat import Representation, adjoint_rep, hom_differential, juxtapose, odot
from .services.checks import CheckRegistry, run_check
from .services.generator import InstanceGenerator
from .services.instances import (
    instance_to_dict, load_instance, load_intertwiner_with_representations, read_instance_file, save_instance,
)
from .utils.common import ProgressLogger, setup_logging

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--arity-cap", type=int, default=None,
                        help="Highest arity at which families are computed (default: 4)")
    common.add_argument("--word-cap", "-W", type=int, default=None,
                        help="CE word-length cap (default: 6)")
    common.add_argument("--seed", type=int, default=None,
                        help="Random seed for generated instances (default: 42)")
    common.add_argument("--jobs", type=int, default=None,
                        help="Worker threads for independent sub-checks (default: 1)")
    common.add_argument("--format", choices=["text", "structured"], default=None,
                        help="Report rendering (default: text)")
    common.add_argument("-o", "--output", type=str, default=None,
                        help="Write the result to this file instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true", help="Increases output verbosity")
    common.add_argument("-sl", "--save-log", action="store_true", default=False,
                        help="Save log output to a file")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linfrep",
        description="Exact checks for L∞-algebras, their representations, 2-braidings and CE algebras",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Generalised Jacobi identity on a fixture
  linfrep check jacobi fixtures/sl2.yaml

  # Braiding certificate for the Casimir structure on three adjoint modules
  linfrep check braiding fixtures/sl2.yaml fixtures/sl2_casimir.yaml --reps adjoint,adjoint,adjoint

  # Randomized Rep(g) axiom suites as JSON
  linfrep check axioms --seed 7 --jobs 4 --format structured

  # CE presentation with the delta table up to word length 6
  linfrep ce export fixtures/sl2.yaml -W 6 -o sl2_ce.yaml
        """
    )
    parser.add_argument("--version", action="version", version=f"linfrep {__version__}")
    common = _common_flags()
    verbs = parser.add_subparsers(dest="verb", required=True)

    check = verbs.add_parser("check", help="Run a check and print its report", parents=[common])
    check.add_argument("what", choices=CheckRegistry.list_checks(), help="Check to run")
    check.add_argument("paths", nargs="*", help="Instance files (fixtures are used when omitted)")
    check.add_argument("--reps", type=str, default="adjoint,adjoint,adjoint",
                       help="Three representations for 'check braiding': adjoint, trivial or file paths")
    check.set_defaults(handler=_check)

    op = verbs.add_parser("op", help="Compose, tensor or differentiate intertwiners")
    op_verbs = op.add_subparsers(dest="op", required=True)
    for name, helptext, count in (("compose", "g∘f of f.yaml g.yaml", 2),
                                  ("odot", "f⊙g of f.yaml g.yaml", 2),
                                  ("diff", "⟦ρ,f⟧ of f.yaml", 1)):
        sub = op_verbs.add_parser(name, help=helptext, parents=[common])
        sub.add_argument("paths", nargs=count, help="Intertwiner files")
        sub.set_defaults(handler=_op)

    ce = verbs.add_parser("ce", help="Chevalley-Eilenberg tools")
    ce_verbs = ce.add_subparsers(dest="ce", required=True)
    export = ce_verbs.add_parser("export", help="Export generators and the δ/d tables", parents=[common])
    export.add_argument("paths", nargs="+", help="Algebra file followed by representation files")
    export.set_defaults(handler=_ce_export)

    gen = verbs.add_parser("gen", help="Generate instances")
    gen_verbs = gen.add_subparsers(dest="gen", required=True)
    random_parser = gen_verbs.add_parser("random", help="Random nilpotent algebra with representations",
                                         parents=[common])
    random_parser.add_argument("--representations", type=int, default=1,
                               help="Number of square-zero representations to generate (default: 1)")
    random_parser.set_defaults(handler=_gen_random)
    return parser


def _config(args: argparse.Namespace) -> SessionConfig:
    overrides = {key: getattr(args, key) for key in ("arity_cap", "word_cap", "seed", "jobs")
                 if getattr(args, key, None) is not None}
    if getattr(args, "format", None) is not None:
        overrides["report_format"] = args.format
    return SessionConfig(**overrides) if overrides else get_settings()


def _emit(text: str, output: Optional[str]) -> None:
    if output is None:
        print(text)
        return
    Path(output).write_text(text + "\n")
    logger.info(f"Wrote {output}")


def _dump(data: Dict) -> str:
    return yaml.safe_dump(data, sort_keys=False, allow_unicode=True).rstrip("\n")


# ============================================================================
# Handlers
# ============================================================================

def _check(args: argparse.Namespace, config: SessionConfig) -> int:
    reps = [ref.strip() for ref in args.reps.split(",") if ref.strip()]
    progress = ProgressLogger(logging.getLogger("linfrep"))
    report = run_check(args.what, [Path(p) for p in args.paths], config, reps=reps, progress=progress)
    _emit(report.render(config.report_format), args.output)
    return EXIT_PASS if report.passed else EXIT_FAIL


def _op(args: argparse.Namespace, config: SessionConfig) -> int:
    loaded = [load_intertwiner_with_representations(p) for p in args.paths]
    raw = [read_instance_file(p) for p in args.paths]
    f, U, V = loaded[0]
    if args.op == "compose":
        g = loaded[1][0]
        result = juxtapose(g, f)
        refs = (raw[0].source, raw[1].target)
    elif args.op == "odot":
        g = loaded[1][0]
        result = odot(f, g)
        refs = (f"{raw[0].source}⊙{raw[1].source}", f"{raw[0].target}⊙{raw[1].target}")
    else:
        result = hom_differential(U, V, f)
        refs = (raw[0].source, raw[0].target)
    result.name = f"{args.op}({', '.join(d.name for d in raw)})"
    _emit(_dump(instance_to_dict(result, raw[0].algebra, *refs)), args.output)
    return EXIT_PASS


def _ce_export(args: argparse.Namespace, config: SessionConfig) -> int:
    alg = load_instance(args.paths[0])
    if not isinstance(alg, LInfinityAlgebra):
        raise InstanceFormatError(f"{args.paths[0]} is not an algebra")
    alg = alg.with_cap(config.arity_cap)
    reps: List[Representation] = [adjoint_rep(alg)]
    for path in args.paths[1:]:
        rep = load_instance(path)
        if not isinstance(rep, Representation):
            raise InstanceFormatError(f"{path} is not a representation")
        reps.append(rep)
    A = build_ce_algebra(alg, config.word_cap)
    modules = [build_ce_module(rep, A) for rep in reps]
    _emit(_dump(export_presentation(A, modules)), args.output)
    return EXIT_PASS


def _gen_random(args: argparse.Namespace, config: SessionConfig) -> int:
    out_dir = Path(args.output or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    gen = InstanceGenerator(config)
    alg = gen.algebra(config.arity_cap)
    alg_path = save_instance(alg, out_dir / f"{alg.name}.yaml")
    for _ in range(args.representations):
        rep = gen.representation(alg)
        save_instance(rep, out_dir / f"{rep.name}.yaml", algebra_ref=alg_path.name)
    print(f"Generated {alg.name} with {args.representations} representation(s) in {out_dir}")
    return EXIT_PASS


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    log_file = None
    if args.save_log:
        log_file = f"linfrep_{datetime.now().strftime('%Y%m%d_%H%M')}.log"
    setup_logging(args.verbose, log_file)
    logger.debug(f"Called with the following arguments: {vars(args)}")

    try:
        config = _config(args)
    except ValidationError as e:
        print(f"Error: invalid configuration: {e.errors()[0]['msg']}")
        return EXIT_USAGE

    try:
        return args.handler(args, config)
    except (LinfrepError, ValueError) as e:
        print(f"Error: {e}")
        return EXIT_USAGE

"""
exactlab Main Entry
Command-line front end: validate, axioms, frobenius, subcats, correspondence, gorenstein
"""

import argparse
import logging
import sys

from dynaconf import ValidationError

from .config import settings
from .core.results import FAIL, INCONCLUSIVE, PASS
from .errors import (
    AlgebraSpecError,
    ContractViolation,
    InconclusiveError,
    NotExtensionClosedError,
    OutOfUniverseError,
    UnsupportedAlgebraError,
)
from .utils.config_validator import ConfigValidator
from .utils.report import write_report
from .workbench import RunConfig, Workbench

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_SPEC_ERROR = 2
EXIT_INCONCLUSIVE = 3

EXIT_CODES = {PASS: EXIT_OK, FAIL: EXIT_FAILED, INCONCLUSIVE: EXIT_INCONCLUSIVE}

COMMANDS = {
    "validate": "Parse and validate the algebra and its seed modules",
    "axioms": "Check the exact-category axioms of a structure",
    "frobenius": "Detect Frobenius structures and check the stable category",
    "subcats": "Enumerate complete or thick subcategories",
    "correspondence": "Verify the subcategory correspondence between E and E/N",
    "gorenstein": "Totally reflexive modules and G(R) over a Gorenstein ring",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="exactlab", description="Exact and quotient category verification workbench"
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name, help_text in COMMANDS.items():
        sub = subparsers.add_parser(name, help=help_text)
        source = sub.add_mutually_exclusive_group()
        source.add_argument("--preset", help="Preset algebra as name:p,n (default from settings)")
        source.add_argument("--spec", help="YAML algebra specification file")
        sub.add_argument("--bound", type=int, help="Multiplicity bound of the universe")
        sub.add_argument(
            "--structure",
            default="abelian",
            help="split | abelian | induced:<label,..> | file:<path> (default: abelian)",
        )
        sub.add_argument(
            "--N",
            dest="n_selector",
            default="inj",
            help="inj | proj | zero | file:<path> (default: inj)",
        )
        sub.add_argument("--kind", default="thick", choices=["thick", "complete"])
        sub.add_argument("--side", default="ambient", choices=["ambient", "stable"])
        sub.add_argument(
            "--emit",
            action="append",
            choices=["json", "dot", "md"],
            help="Report format, repeatable (default: json)",
        )
        sub.add_argument("--cap", type=int, help="Largest enumeration before a cell is inconclusive")
        sub.add_argument("--out", help="Output directory for reports")
        sub.add_argument(
            "--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level"
        )
    return parser


def run_config_from_args(args: argparse.Namespace) -> RunConfig:
    """Command line values take priority over settings"""
    preset = args.preset or (None if args.spec else settings.DEFAULT_PRESET)
    return RunConfig(
        command=args.command,
        preset=preset,
        spec=args.spec,
        mult_bound=args.bound if args.bound is not None else settings.MULT_BOUND,
        structure=args.structure,
        n_selector=args.n_selector,
        kind=args.kind,
        side=args.side,
        emit=args.emit or ["json"],
        enum_cap=args.cap if args.cap is not None else settings.ENUM_CAP,
        axiom_cap=settings.AXIOM_CAP,
        lattice_limit=settings.LATTICE_LIMIT,
        cover_limit=settings.COVER_SEARCH_LIMIT,
        ext_bound=settings.EXT_BOUND,
        out=args.out or settings.OUTPUT_DIR,
    )


def execute(config: RunConfig) -> int:
    bench = Workbench(config)
    if config.command == "validate":
        universe = bench.universe
        print(
            f"✅ {bench.algebra.name}: {len(bench.seeds)} seeds valid, "
            f"{len(universe)} objects at bound {config.mult_bound}"
        )
        return EXIT_OK
    report = bench.run()
    write_report(report, config.out, config.command, config.emit)
    print(f"{'✅' if report.status == PASS else '❌'} {config.command}: {report.status}")
    return EXIT_CODES[report.status]


def main(argv: list[str] | None = None) -> int:
    """Main function"""
    args = build_parser().parse_args(argv)
    try:
        level = args.log_level or settings.LOG_LEVEL
        config = run_config_from_args(args)
    except ValidationError as e:
        print(f"❌ settings: {e}", file=sys.stderr)
        return EXIT_SPEC_ERROR
    logging.basicConfig(level=level, format="%(asctime)s - %(levelname)s - %(message)s")

    is_valid, problems = ConfigValidator.validate_run_config(config)
    if not is_valid:
        for problem in problems:
            print(f"❌ {problem}", file=sys.stderr)
        return EXIT_SPEC_ERROR

    try:
        return execute(config)
    except AlgebraSpecError as e:
        for line in e.describe():
            print(f"❌ {line}", file=sys.stderr)
        return EXIT_SPEC_ERROR
    except FileNotFoundError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_SPEC_ERROR
    except (ContractViolation, NotExtensionClosedError, UnsupportedAlgebraError) as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_SPEC_ERROR
    except (OutOfUniverseError, InconclusiveError) as e:
        logger.warning(f"Run stopped: {e}")
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())

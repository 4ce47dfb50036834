"""
doodle-ft – command line entry for the doodle invariant toolkit
"""

import argparse
import random
import sys
from pathlib import Path

from dotenv import load_dotenv
load_dotenv()

from doodle_ft.common import census as census_lib
from doodle_ft.common import diagram as diagram_lib
from doodle_ft.common import errors, invariant, moves, render, selftest, tangles
from doodle_ft.common.diagram import ArrowDiagram
from doodle_ft.common.types import parse_field
from src import config
from src.interfaces.rich_report_display import RichReportDisplay
from src.utils import census_store
from src.utils.logger import configure_library_logging, get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT_ERROR = 2


def read_diagram(text: str) -> ArrowDiagram:
    """Gauss code, or a signed linear code when it contains ``signs:``."""
    if "signs:" in text:
        return diagram_lib.from_signed_linear(diagram_lib.parse_signed_linear(text))
    return diagram_lib.parse_gauss(text)


def write_output(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise errors.PreconditionError(f"Cannot write {path}: {e}") from e


# ================================================================
# Subcommands
# ================================================================
def cmd_canon(args, display) -> int:
    display.display_message(diagram_lib.serialize(read_diagram(args.code)))
    return EXIT_OK


def cmd_minimize(args, display) -> int:
    rng = random.Random(args.seed) if args.random_order else None
    minimal, trace = moves.minimize(read_diagram(args.code), rng)
    display.display_message(diagram_lib.serialize(minimal))
    if args.trace:
        for step in trace.steps:
            display.display_message(f"  {step.direction} {step.move}")
    return EXIT_OK


def cmd_realizable(args, display) -> int:
    d = read_diagram(args.code)
    genus = diagram_lib.genus(d)
    realizable = genus == 0
    display.display_message(f"realizable={'yes' if realizable else 'no'} genus={genus}")
    return EXIT_OK if realizable else EXIT_VIOLATION


def cmd_invariant(args, display) -> int:
    value = invariant.diagram_invariant(
        read_diagram(args.code),
        args.degree,
        args.field,
        workers=args.workers,
        max_chords=config.MAX_INVARIANT_CHORDS,
    )
    text = value.format()
    if args.out:
        write_output(args.out, text + "\n")
        logger.info(f"Invariant written to {args.out}")
    display.display_message(text)
    return EXIT_OK


def cmd_compare(args, display) -> int:
    d1, d2 = read_diagram(args.first), read_diagram(args.second)
    distinct = invariant.distinguishes(
        d1, d2, args.degree, args.field, workers=args.workers, max_chords=config.MAX_INVARIANT_CHORDS
    )
    display.display_message("distinct" if distinct else "equal")
    return EXIT_VIOLATION if distinct else EXIT_OK


def _build_census(args) -> census_lib.Census:
    return census_lib.build_census(
        args.kmax,
        args.n_extra,
        args.field,
        workers=args.workers,
        allow_unsafe=args.allow_unsafe,
        budget=config.CENSUS_DIAGRAM_BUDGET,
        checkpoint=census_store.write_checkpoint,
    )


def cmd_census(args, display) -> int:
    if args.kmax > config.MAX_SAFE_KMAX and not args.allow_unsafe:
        growth = config.CENSUS_GROWTH.get(args.kmax, "more than 32 million")
        display.display_message(f"k={args.kmax} has about {growth} rotation classes", error=True)
    census = _build_census(args)
    path = census_store.save_census(census, Path(args.out) if args.out else None)
    for record in census.records:
        display.display_message(record.line(f"class_{record.class_id:04d}"))
    display.display_message(f"{len(census)} classes written to {path}")
    return EXIT_OK


def cmd_verify(args, display) -> int:
    census = census_store.load_census(Path(args.census)) if args.census else _build_census(args)
    report = census_lib.verify_theorems(census, args.field)
    display.display(report)
    census_store.save_report(report, "verify")
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_render(args, display) -> int:
    document = render.render_svg(read_diagram(args.code))
    if args.svg:
        write_output(args.svg, document)
        display.display_message(f"SVG written to {args.svg}")
    else:
        sys.stdout.write(document + "\n")
    return EXIT_OK


def cmd_resolve(args, display) -> int:
    report = tangles.resolution_report(args.k)
    display.display(report)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_selftest(args, display) -> int:
    report = selftest.run_selftest(args.samples, args.seed, kmax=args.kmax)
    display.display(report)
    census_store.save_report(report, "selftest")
    return EXIT_OK if report.passed else EXIT_VIOLATION


# ================================================================
# Argument parsing
# ================================================================
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="doodle-ft", description=__doc__)
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    parser.add_argument(
        "--workers",
        type=int,
        default=config.WORKERS,
        help="worker threads for subset sums and the census; they share the interpreter lock, "
        "so CPU-bound runs gain little",
    )
    parser.add_argument("--verbose", "-v", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    def add_field(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--field", type=parse_field, default=parse_field("Q"))

    def add_census_options(sub: argparse.ArgumentParser, required: bool) -> None:
        sub.add_argument("--kmax", type=int, required=required, default=4)
        sub.add_argument("--n-extra", type=int, default=1)
        sub.add_argument("--allow-unsafe", action="store_true")

    add(
        "canon", cmd_canon, "print the canonical Gauss code"
    ).add_argument("code")

    sub = add("minimize", cmd_minimize, "apply deleting moves until none is left")
    sub.add_argument("code")
    sub.add_argument("--trace", action="store_true")
    sub.add_argument("--random-order", action="store_true")

    add("realizable", cmd_realizable, "decide planarity of the diagram").add_argument("code")

    sub = add("invariant", cmd_invariant, "compute the truncated invariant")
    sub.add_argument("code")
    sub.add_argument("--degree", "-n", type=int, required=True)
    sub.add_argument("--out")
    add_field(sub)

    sub = add("compare", cmd_compare, "compare the invariants of two diagrams")
    sub.add_argument("first")
    sub.add_argument("second")
    sub.add_argument("--degree", "-n", type=int, required=True)
    add_field(sub)

    sub = add("census", cmd_census, "enumerate and classify doodles")
    add_census_options(sub, required=True)
    sub.add_argument("--out")
    add_field(sub)

    sub = add("verify", cmd_verify, "check completeness properties of a census")
    sub.add_argument("--census", help="census file or directory; built from --kmax otherwise")
    add_census_options(sub, required=False)
    add_field(sub)

    sub = add("render", cmd_render, "draw the arrow diagram as SVG")
    sub.add_argument("code")
    sub.add_argument("--svg", help="output path; stdout when omitted")

    sub = add("resolve", cmd_resolve, "resolve the star tangle with k branches")
    sub.add_argument("--k", type=int, required=True)

    sub = add("selftest", cmd_selftest, "run the seeded property checks")
    sub.add_argument("--samples", type=int, default=config.DEFAULT_SELFTEST_SAMPLES)
    sub.add_argument("--kmax", type=int, default=4)
    return parser


# ================================================================
# ENTRY POINT
# ================================================================
def main(argv: list[str] | None = None, display=None) -> int:
    args = build_parser().parse_args(argv)
    configure_library_logging(args.verbose)
    display = display or RichReportDisplay()
    ledger = census_store.RunLedger()

    try:
        status = args.handler(args, display)
    except errors.CensusBudgetExceeded as e:
        display.display_message(f"{e} (checkpoint: {e.checkpoint})", error=True)
        status = EXIT_INPUT_ERROR
    except errors.DoodleError as e:
        display.display_message(f"error: {e}", error=True)
        status = EXIT_INPUT_ERROR
    except OSError as e:
        display.display_message(f"error: {e}", error=True)
        status = EXIT_INPUT_ERROR

    ledger.record(args.command, argv=sys.argv[1:] if argv is None else argv, status=status)
    return status


if __name__ == "__main__":
    sys.exit(main())

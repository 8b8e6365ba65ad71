"""
Command-line interface.

    python main.py table --input fourfold.csv [--force-rxc]
    python main.py anova (--input groups.csv | --summary dfb,dfw,F) [--form partial_eta_sq|cohens_f]
    python main.py correlation (--input pairs.csv | --r VALUE)
    python main.py classify --value VALUE
    python main.py simulate --pop p11,p12,p21,p22 --sizes n1,n2,... --reps R --seed S [--workers W]

Every subcommand takes --format {text,json} and --verbose. Exit status is 0 on
success, 2 on invalid input (one diagnostic line on stderr, nothing on stdout)
and 1 on an internal error.
"""
import argparse
import logging
import sys
from typing import Callable, List, Optional, Sequence

from anova import AnovaSummary
from core import ValidationError
from correlation import CorrelationValue
from dataio import parse_groups_csv, parse_pairs_csv, parse_table_csv, read_source
from invariance import PopulationTable2x2, run_estimator_sim
from report import (COHENS_F_NB, PARTIAL_ETA_SQ, correlation_report, groups_report, pairs_report,
                    simulation_json, simulation_text, summary_report, table_report, value_report)

logger = logging.getLogger(__name__)

FORMS = {"partial_eta_sq": PARTIAL_ETA_SQ, "cohens_f": COHENS_F_NB}


def _number_list(convert: Callable[[str], float], count: Optional[int] = None):
    def parse(text: str) -> List[float]:
        parts = [part.strip() for part in text.split(",")]
        if count is not None and len(parts) != count:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated values, got {len(parts)}")
        try:
            return [convert(part) for part in parts]
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid number in {text!r}")
    return parse


def _summary(text: str) -> AnovaSummary:
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected dfb,dfw,F, got {text!r}")
    try:
        df_between, df_within, f_stat = int(parts[0]), int(parts[1]), float(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integer dfs and a numeric F, got {text!r}")
    return AnovaSummary(df_between, df_within, f_stat)


def _render(report_text: str, report_json: str, fmt: str) -> str:
    return report_json if fmt == "json" else report_text


def _run_table(args: argparse.Namespace) -> str:
    report = table_report(parse_table_csv(read_source(args.input)), force_rxc=args.force_rxc)
    return _render(report.to_text(), report.to_json(), args.format)


def _run_anova(args: argparse.Namespace) -> str:
    form = FORMS[args.form]
    if args.summary is not None:
        report = summary_report(args.summary, form)
    else:
        report = groups_report(parse_groups_csv(read_source(args.input)), form)
    return _render(report.to_text(), report.to_json(), args.format)


def _run_correlation(args: argparse.Namespace) -> str:
    if args.r is not None:
        report = correlation_report(CorrelationValue(args.r))
    else:
        report = pairs_report(parse_pairs_csv(read_source(args.input)))
    return _render(report.to_text(), report.to_json(), args.format)


def _run_classify(args: argparse.Namespace) -> str:
    report = value_report(args.value)
    return _render(report.to_text(), report.to_json(), args.format)


def _run_simulate(args: argparse.Namespace) -> str:
    result = run_estimator_sim(
        PopulationTable2x2(*args.pop),
        args.sizes,
        args.reps,
        args.seed,
        max_workers=args.workers,
    )
    return _render(simulation_text(result), simulation_json(result), args.format)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text", help="output format (default: text)")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")

    parser = argparse.ArgumentParser(
        prog="main.py",
        description="Neutrality boundary values for contingency tables, one-way ANOVA and correlations.",
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="{table,anova,correlation,classify,simulate}")

    table = commands.add_parser("table", parents=[common], help="nb of a contingency table CSV")
    table.add_argument("--input", required=True, help="headerless CSV of counts, or - for stdin")
    table.add_argument("--force-rxc", action="store_true", help="use the r x c formula on 2x2 tables too")
    table.set_defaults(handler=_run_table)

    anova = commands.add_parser("anova", parents=[common], help="nb of a one-way ANOVA")
    source = anova.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="long-format group,value CSV, or - for stdin")
    source.add_argument("--summary", type=_summary, help="dfb,dfw,F")
    anova.add_argument("--form", choices=tuple(FORMS), default="partial_eta_sq", help="reported nb form")
    anova.set_defaults(handler=_run_anova)

    correlation = commands.add_parser("correlation", parents=[common], help="Distance to Independence of a correlation")
    source = correlation.add_mutually_exclusive_group(required=True)
    source.add_argument("--input", help="x,y CSV, or - for stdin")
    source.add_argument("--r", type=float, help="Pearson correlation in (-1, 1)")
    correlation.set_defaults(handler=_run_correlation)

    classify = commands.add_parser("classify", parents=[common], help="robustness band of an nb value")
    classify.add_argument("--value", type=float, required=True, help="nb value in [0, 1)")
    classify.set_defaults(handler=_run_classify)

    simulate = commands.add_parser("simulate", parents=[common], help="Monte-Carlo sample-size invariance check")
    simulate.add_argument("--pop", type=_number_list(float, 4), required=True, help="p11,p12,p21,p22")
    simulate.add_argument("--sizes", type=_number_list(int), required=True, help="n1,n2,...")
    simulate.add_argument("--reps", type=int, required=True, help="replicates per sample size")
    simulate.add_argument("--seed", type=int, required=True, help="nonnegative root seed")
    simulate.add_argument("--workers", type=int, default=None, help="worker threads (output does not depend on it)")
    simulate.set_defaults(handler=_run_simulate)

    return parser


def _configure_logging(verbose: bool):
    level = logging.DEBUG if verbose else logging.WARNING
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


def run_cli(argv: Sequence[str]) -> int:
    """
    Run one CLI command.

    Args:
        argv: Arguments without the program name

    Returns:
        int: Exit status (0 success, 2 invalid input, 1 internal error)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else 2
    except ValidationError as e:
        # raised by argument types that build validated objects (--summary)
        print(f"error: {_one_line(e)}", file=sys.stderr)
        return 2

    _configure_logging(args.verbose)
    try:
        output = args.handler(args)
    except ValidationError as e:
        print(f"error: {_one_line(e)}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.debug("internal error", exc_info=True)
        print(f"internal error: {_one_line(e)}", file=sys.stderr)
        return 1

    print(output)
    return 0


def _one_line(error: Exception) -> str:
    return " ".join(str(error).split())


if __name__ == "__main__":
    sys.exit(run_cli(sys.argv[1:]))

"""
Benchmark command line.

    bench run <config> [--parallel] [--output-dir DIR]
    bench plot <mode> <csv...> -o <file> [--suboptimality] [--labels a,b]
    bench scale --dims 100,400,1600 <config> [-o file]

Exit codes: 0 success, 1 configuration or input error, 2 a method failed.
"""

import argparse
import sys
from typing import List, Optional

from ..errors import ConfigError, IncompatibleTraces
from ..utils.logger import setup_logger
from .config import load_experiment, load_scaling, parse_dims
from .pipeline import run_experiment
from .plots import emit_plot_data
from .scaling import growth_factors, per_iteration_scaling
from .schemas import PLOT_MODES

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_METHOD = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bench",
        description="📈 SPAN benchmark runner",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  bench run configs/synthetic_quadratic.conf
  bench run configs/desk_logistic.conf --parallel
  bench plot loss_vs_time results/desk/span.csv results/desk/newsamp.csv -o time.csv
  bench scale --dims 100,400,1600 configs/scaling.conf
        """,
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run every method of an experiment file")
    run.add_argument("config", help="Experiment file (section.key = value)")
    run.add_argument("--parallel", action="store_true", help="Run methods in separate processes")
    run.add_argument("--output-dir", help="Override experiment.output_dir")

    plot = commands.add_parser("plot", help="Align trace CSVs into one plot table")
    plot.add_argument("mode", choices=PLOT_MODES)
    plot.add_argument("traces", nargs="+", help="Trace CSV files")
    plot.add_argument("-o", "--output", required=True, help="Output CSV")
    plot.add_argument("--suboptimality", action="store_true", help="Subtract the best loss across traces")
    plot.add_argument("--labels", help="Comma-separated column names (default: file stems)")

    scale = commands.add_parser("scale", help="Per-iteration timing sweep over dimensions")
    scale.add_argument("config", help="File with a scaling section")
    scale.add_argument("--dims", help="Comma-separated dimensions, overrides scaling.dims")
    scale.add_argument("-o", "--output", help="Output CSV")
    return parser


def command_run(args: argparse.Namespace) -> int:
    cfg = load_experiment(args.config)
    if args.output_dir:
        cfg.output_dir = args.output_dir
    result = run_experiment(cfg, parallel=args.parallel)
    if result.ok:
        logger.info("🎉 All methods completed")
        return EXIT_OK
    failed = [r.name for r in result.results if not r.ok]
    logger.error(f"💥 Failed methods: {failed}")
    return EXIT_METHOD


def command_plot(args: argparse.Namespace) -> int:
    labels = [label.strip() for label in args.labels.split(",")] if args.labels else None
    emit_plot_data(args.traces, args.mode, output=args.output, suboptimality=args.suboptimality, labels=labels)
    return EXIT_OK


def command_scale(args: argparse.Namespace) -> int:
    dims = parse_dims(args.dims) if args.dims else None
    cfg = load_scaling(args.config, dims)
    table = per_iteration_scaling(cfg, output=args.output)

    logger.info("=" * 60)
    logger.info("📊 PER-ITERATION SCALING")
    logger.info("=" * 60)
    for line in table.to_string(index=False).splitlines():
        logger.info(line)
    if len(table) > 1:
        logger.info("-" * 60)
        logger.info("Growth between consecutive dimensions:")
        for line in growth_factors(table).to_string(index=False).splitlines():
            logger.info(line)
    logger.info("=" * 60)
    return EXIT_OK


COMMANDS = {"run": command_run, "plot": command_plot, "scale": command_scale}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, IncompatibleTraces, FileNotFoundError) as exc:
        logger.error(f"❌ {exc}")
        return EXIT_CONFIG
    except KeyboardInterrupt:
        logger.warning("⚠️ Interrupted by user")
        return EXIT_METHOD
    except Exception as exc:
        logger.error(f"💥 {type(exc).__name__}: {exc}")
        return EXIT_METHOD


if __name__ == "__main__":
    sys.exit(main())

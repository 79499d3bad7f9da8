"""
Command-line entry point.

    python -m src.main.app fig1 --config config/paper_fig1.yaml --threads 8
    python -m src.main.app fig2 --seed 7
    python -m src.main.app validate --config config/validate.yaml
    python -m src.main.app dump-network --config config/validate.yaml --out results/drop0.txt

Exit codes: 0 success, 1 configuration error, 2 validation failure, 3 I/O error.
"""

import argparse
import sys
from typing import Callable, Dict, List, Optional

import structlog

from src import __version__
from src.common.errors import ConfigurationError, MimoSimError
from src.common.logging_setup import configure_logging
from src.experiments.config import ExperimentConfig, load_experiment_config
from src.experiments.runners import ExperimentResult, realize_drop, run_fig1, run_fig2, run_validate
from src.network.dump import dump_network

logger = structlog.get_logger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_VALIDATION = 2
EXIT_IO = 3

SCENARIOS = {
    'fig1': 'paper-fig1',
    'fig2': 'paper-fig2',
    'validate': 'validate',
    'dump-network': 'validate',
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='mimo-uplink-sim',
        description='Massive MIMO uplink SE with correlated Rician fading: closed forms and Monte Carlo.',
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', required=True)

    helps = {
        'fig1': 'average UL sum SE versus number of BS antennas',
        'fig2': 'CDF of the UL SE per UE',
        'validate': 'compare closed forms with Monte Carlo',
        'dump-network': 'write one network realization as text',
    }
    for name, help_text in helps.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument('--config', type=str, default=None, help='experiment YAML file (default: scenario preset)')
        sub.add_argument('--seed', type=int, default=None, help='root seed (overrides the file)')
        sub.add_argument('--out', type=str, default=None, help='output path (overrides the file)')
        sub.add_argument('--threads', type=int, default=1, help='worker threads; never changes results')
        sub.add_argument(
            '--log-level', type=str, default=None,
            choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
            help='log level (overrides the file)',
        )
        if name == 'dump-network':
            sub.add_argument('--drop', type=int, default=0, help='drop index to dump')
    return parser


def _load(args: argparse.Namespace) -> ExperimentConfig:
    overrides = {'seed': args.seed, 'output': args.out}
    if args.log_level is not None:
        overrides['logging'] = {'level': args.log_level}
    return load_experiment_config(args.config, scenario=SCENARIOS[args.command], overrides=overrides)


def _dump(experiment: ExperimentConfig, args: argparse.Namespace) -> int:
    if args.drop < 0:
        raise ConfigurationError(f"--drop must be non-negative, got {args.drop}")
    realization = realize_drop(experiment, args.drop)
    path = args.out if args.out is not None else f'results/network_drop{args.drop}.txt'
    dump_network(realization, path)
    return EXIT_OK


RUNNERS: Dict[str, Callable[[ExperimentConfig, int], ExperimentResult]] = {
    'fig1': run_fig1,
    'fig2': run_fig2,
    'validate': run_validate,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level or 'INFO')
    try:
        if args.threads < 1:
            raise ConfigurationError(f"--threads must be >= 1, got {args.threads}")
        experiment = _load(args)
        configure_logging(experiment.logging.level, experiment.logging.file)
        logger.info(
            "experiment starting",
            command=args.command,
            scenario=experiment.scenario,
            seed=experiment.seed,
            threads=args.threads,
        )
        if args.command == 'dump-network':
            return _dump(experiment, args)

        result = RUNNERS[args.command](experiment, args.threads)
        logger.info("experiment finished", output=str(result.output), rows=len(result.rows))
        if args.command == 'validate' and not result.all_passed:
            logger.error("closed form and Monte Carlo disagree", output=str(result.output))
            return EXIT_VALIDATION
        return EXIT_OK
    except ConfigurationError as e:
        logger.error("configuration error", error=str(e))
        return EXIT_CONFIG
    except OSError as e:
        logger.error("i/o error", error=str(e), path=str(getattr(e, 'path', '') or getattr(e, 'filename', '')))
        return EXIT_IO
    except MimoSimError as e:
        logger.error("simulation error", error=str(e))
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

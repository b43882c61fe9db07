#!/usr/bin/env python3
"""
Command-line interface for pycda.

Subcommands run the chain, simulation, first-passage and sweep experiments
and write their results under the output directory.
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from pycda import __version__
from pycda.commands import COMMANDS
from pycda.core.config import FORMATS, ExperimentConfig
from pycda.core.exceptions import CdaError, ParameterError
from pycda.parsers.config_parser import CONVERTERS, ConfigParser
from pycda.renderers import dumps, error_payload

logger = logging.getLogger(__name__)

EXIT_VALIDATION = 2
EXIT_RUNTIME = 1

# (flag, config field, help)
FLAGS = [
    ('--N', 'N', 'grid size (prices 1..N)'),
    ('--n', 'n', 'jump cut-off of the placement intervals'),
    ('--rho', 'rho', 'traffic intensity lambda/mu'),
    ('--mu', 'mu', 'market order rate per side (default: 1)'),
    ('--events', 'events', 'run length of the equilibrium simulation, in order arrivals'),
    ('--burn-in', 'burn_in', 'leading steps discarded (default: events // 10)'),
    ('--step-unit', 'step_unit', 'what --events and --burn-in count: events (default) or trades'),
    ('--replicates', 'replicates', 'first-passage replicates (default: 10000)'),
    ('--ks-replicates', 'ks_replicates', 'permutations for KS p-values (default: 10000)'),
    ('--seed', 'seed', 'master seed'),
    ('--workers', 'workers', 'worker processes for replicates'),
    ('--bins', 'bins', 'histogram bins (default: Freedman-Diaconis)'),
    ('--max-events', 'max_events', 'arrival cap per first-passage run'),
    ('--opening', 'opening', 'opening price (default: median price)'),
    ('--rho-grid', 'rho_grid', 'comma-separated rho values of the sweep'),
    ('--grid', 'grid', 'comma-separated N:n cells of the sweep'),
    ('--curve-rhos', 'curve_rhos', 'comma-separated rho values of the mean log T curve'),
]


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as ParameterError so they come out as JSON."""

    def error(self, message: str) -> None:
        raise ParameterError(message)


def _argument_type(name: str):
    convert = CONVERTERS[name]

    def parse(text: str) -> Any:
        try:
            return convert(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"invalid value for {name}: {text!r}") from exc

    parse.__name__ = name
    return parse


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subcommand per experiment."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', dest='config_file', help='key = value configuration file')
    for flag, name, help_text in FLAGS:
        common.add_argument(flag, dest=name, type=_argument_type(name), default=None, help=help_text)
    common.add_argument('-o', '--output', dest='output_path', default=None,
                        help='output directory (default: results)')
    common.add_argument('-f', '--format', dest='format', choices=FORMATS, default=None,
                        help='format of tabular output (default: csv)')
    common.add_argument('--exact', dest='exact', action='store_true', default=None,
                        help='rational arithmetic for the transition matrix')
    common.add_argument('--log-level', dest='log_level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='logging level (default: WARNING)')
    common.add_argument('-v', '--verbose', dest='verbose', action='store_true', help='shorthand for --log-level INFO')

    parser = _ArgumentParser(
        prog='pycda',
        description='Low-traffic continuous double auction experiments',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Transition matrix and invariant distribution
  pycda chain --N 10 --n 2 -o out

  # Trade-price frequencies against the low-traffic limit
  pycda simulate --N 50 --n 5 --rho 0.3 --events 1000000
  pycda simulate --N 50 --n 5 --rho 1e-4 --events 1000000 --step-unit trades

  # First-passage times with the mixture comparison
  pycda fpt --N 11 --n 1 --rho 0.01 --replicates 10000

  # Mean first-passage table from a config file
  pycda sweep --config table1.cfg --workers 8
        """
    )
    parser.add_argument('--version', action='version', version=f'pycda {__version__}')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True
    helps = {
        'chain': 'write the transition matrix and invariant distribution',
        'simulate': 'compare simulated trade prices with the invariant distribution',
        'fpt': 'first-passage times, log-time histogram and mixture comparison',
        'sweep': 'mean first-passage times over an (N, n) x rho grid',
    }
    for name, help_text in helps.items():
        subparsers.add_parser(name, parents=[common], help=help_text)
    return parser


def load_config(args: argparse.Namespace) -> ExperimentConfig:
    """Layer defaults, the config file and the command-line flags."""
    file_values: Dict[str, Any] = {}
    if args.config_file:
        file_values = ConfigParser.from_file(args.config_file).load()
    names = [name for _, name, _ in FLAGS] + ['output_path', 'format', 'exact']
    flag_values = {name: getattr(args, name) for name in names}
    return ExperimentConfig.from_sources(file_values, flag_values)


def _configure_logging(args: argparse.Namespace) -> None:
    level = 'INFO' if args.verbose and args.log_level == 'WARNING' else args.log_level
    logging.basicConfig(level=getattr(logging, level), format='%(asctime)s %(name)s %(levelname)s %(message)s')


def _report(error: BaseException, command: Optional[str]) -> None:
    print(dumps(error_payload(error, command)), file=sys.stderr)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the CLI.

    Returns:
        0 on success, 2 for invalid input, 1 for runtime and I/O failures
    """
    command = None
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        _configure_logging(args)
        config = load_config(args).validate()
        COMMANDS[command](config)
        return 0
    except ParameterError as e:
        _report(e, command)
        return EXIT_VALIDATION
    except (CdaError, OSError) as e:
        logger.debug("command failed", exc_info=True)
        _report(e, command)
        return EXIT_RUNTIME


if __name__ == '__main__':
    sys.exit(main())

"""
CLI utilities for the SLQ engine
"""
import argparse
from typing import Any, Dict, List, Optional


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        '--config',
        help='key=value run configuration file (default: built-in defaults)'
    )

    parser.add_argument(
        '--workers',
        type=int,
        help='Number of shard workers (overrides runtime.workers)'
    )

    parser.add_argument(
        '--precision',
        choices=['f32', 'f64'],
        help='Working precision of probes and Lanczos vectors (overrides runtime.precision)'
    )

    parser.add_argument(
        '--seed',
        help='Comma-separated probe seeds, e.g. "1,2,3"'
    )

    parser.add_argument(
        '--out',
        help='Output directory for artifacts (overrides output.dir)'
    )

    parser.add_argument(
        '--debug',
        action='store_true',
        help='Enable DEBUG logging'
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='hessian-slq',
        description="Matrix-free spectral density estimation for large symmetric operators "
                    "with stochastic Lanczos quadrature over sharded vectors.",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Spectral density of a 256x256 Wigner matrix, 10 Lanczos steps, 4 workers
  %(prog)s slq --workers 4 --k 10

  # Several probes averaged, from a config file
  %(prog)s slq --config run.conf --seed 1,2,3,4,5

  # Fraction of near-zero entries in a random Hessian column
  %(prog)s probe --config hessian.conf --seed 0,1,2

  # Ghost eigenvalues with and without full reorthogonalization
  %(prog)s compare-ortho --k 25 --seed 7

Config files hold one 'section.key = value' per line, e.g.:
  operator.kind = spiked
  operator.spikes = 1000
  lanczos.reorthogonalize = full
        """
    )

    subparsers = parser.add_subparsers(dest='command', required=True)

    slq = subparsers.add_parser('slq', help='Estimate the spectral density')
    _add_common(slq)
    slq.add_argument('--k', type=int, help='Lanczos steps per probe (overrides lanczos.k)')

    probe = subparsers.add_parser('probe', help='Histogram the magnitudes of operator columns')
    _add_common(probe)
    probe.add_argument('--index', type=int, help='Fixed column index instead of a seeded draw')

    compare = subparsers.add_parser('compare-ortho',
                                    help='Run Lanczos with and without reorthogonalization and diff the ghosts')
    _add_common(compare)
    compare.add_argument('--k', type=int, help='Lanczos steps (overrides lanczos.k)')

    return parser


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments"""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.workers is not None and args.workers < 1:
        parser.error("--workers must be at least 1")

    if getattr(args, 'k', None) is not None and args.k < 1:
        parser.error("--k must be at least 1")

    return args


def config_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Map CLI flags onto dotted config keys; unset flags map to None"""
    seeds_key = 'column.seeds' if args.command == 'probe' else 'probe.seeds'
    return {
        'runtime.workers': args.workers,
        'runtime.precision': args.precision,
        'lanczos.k': getattr(args, 'k', None),
        seeds_key: args.seed,
        'output.dir': args.out,
        'column.index': getattr(args, 'index', None),
    }

#!/usr/bin/env python3
"""
hessian-slq - Main Entry Point

Matrix-free spectral density estimation for large symmetric operators (loss
Hessians, random matrices, dense oracles) with stochastic Lanczos quadrature
over sharded vectors.
"""

import logging
import sys
from typing import List, Optional

from engine.commands import COMMANDS
from modules.autodiff.errors import DataError, ShapeError
from modules.lanczos.errors import LanczosBreakdownError, LanczosConfigError
from modules.logs.logger import setup_logger
from modules.logs.run_trail import setup_run_trail
from modules.operators.base import OperatorError
from modules.sharded.errors import ArgumentError, LayoutError, ProbeIndexError
from modules.utils.cli import config_overrides, parse_args
from modules.utils.config import ConfigError, load_config

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_BREAKDOWN = 3

# Invalid configuration, operator, data or probe input
INPUT_ERRORS = (ConfigError, OperatorError, DataError, ShapeError, LayoutError, ProbeIndexError, ArgumentError,
                LanczosConfigError)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    args = parse_args(argv)

    log_level = logging.DEBUG if args.debug else logging.INFO
    logger = setup_logger(None, log_level)

    try:
        cfg = load_config(args.config, config_overrides(args))
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        logger.close()
        return EXIT_CONFIG

    if cfg.output.log_file:
        logger = setup_logger(cfg.output.log_file, log_level)

    trail = setup_run_trail(logger, cfg.output.dir)
    logger.info(f"Starting {args.command}: output in {cfg.output.dir}")

    try:
        COMMANDS[args.command](cfg, logger, trail)
        return EXIT_OK
    except INPUT_ERRORS as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_CONFIG
    except LanczosBreakdownError as e:
        logger.error(f"Numerical breakdown: {e}; partial result written to {cfg.output.dir}")
        return EXIT_BREAKDOWN
    except KeyboardInterrupt:
        logger.warning("Interrupted by user")
        return EXIT_FAILURE
    except Exception as e:
        logger.error(f"Fatal error: {e}", exc_info=True)
        return EXIT_FAILURE
    finally:
        logger.close()


def cli_main():
    """Entry point for console script"""
    sys.exit(main())


if __name__ == "__main__":
    cli_main()

"""
Gradient check controller

Handles the gradcheck subcommand.
"""

import argparse
import logging
from typing import Optional, TextIO, Type

from milnet.config.base_config import BaseConfig
from milnet.controllers.base_controller import BaseController, pool_kind
from milnet.domain.enums import CommandName, PoolKind
from milnet.dto.base import ValidationError
from milnet.middleware.error_handler import EXIT_CHECK_FAILED, EXIT_OK
from milnet.middleware.run_logger import with_run_logging
from milnet.services.gradcheck_service import GradientCheckService


logger = logging.getLogger(__name__)

ALL_POOLS = "all"


def pool_choice(text: str):
    if text.strip().lower() == ALL_POOLS:
        return ALL_POOLS
    return pool_kind(text)


class GradientCheckController(BaseController):
    """Controller for the finite-difference gradient suite."""

    def __init__(
        self,
        settings: Type[BaseConfig],
        gradcheck_service: GradientCheckService,
        stdout: Optional[TextIO] = None,
    ):
        super().__init__(settings, stdout)
        self._gradcheck = gradcheck_service

    def register(self, subparsers) -> None:
        parser = self._add_command(subparsers, CommandName.GRADCHECK, self.gradcheck,
                                   "compare analytic and finite-difference gradients")
        parser.add_argument("--trials", type=int, default=self.settings.GRADCHECK_TRIALS,
                            help="random cases per pooling kind")
        parser.add_argument("--pool", type=pool_choice, default=ALL_POOLS,
                            help="mean, max, smoothmax or all")
        parser.add_argument("--seed", type=int, default=None, help="random seed")
        parser.add_argument("--sabotage", action="store_true", help=argparse.SUPPRESS)

    @with_run_logging
    def gradcheck(self, args: argparse.Namespace) -> int:
        """
        Run the suite and print one line per pooling kind plus the overall maximum.

        Returns:
            0 if every relative error is below the tolerance, 3 otherwise
        """
        if args.trials < 1:
            raise ValidationError(f"--trials must be at least 1, got {args.trials}")
        pools = tuple(PoolKind) if args.pool == ALL_POOLS else (args.pool,)

        result = self._gradcheck.run(
            trials=args.trials,
            pools=pools,
            seed=self.resolve_seed(args),
            sabotage=args.sabotage,
        )

        for summary in result.summaries:
            self.echo(
                f"{summary.pool.value}: max_relative_error={summary.max_relative_error:.3e} "
                f"checked={summary.checked} excluded={summary.excluded} "
                f"excluded_cases={summary.excluded_cases}"
            )
        self.echo(f"max_relative_error={result.max_relative_error:.3e}")
        self.echo(f"excluded={result.excluded + result.excluded_cases}")

        if not result.passed:
            logger.error(
                f"Gradient check failed: {result.max_relative_error:.3e} >= {result.tolerance:.0e}",
                extra={'max_relative_error': result.max_relative_error}
            )
            return EXIT_CHECK_FAILED
        return EXIT_OK

"""
Base controller with common functionality

Provides shared argument parsing and option resolution for all
subcommand controllers.
"""

import argparse
import logging
import sys
from typing import Callable, List, Optional, TextIO, Type

from milnet.config.base_config import BaseConfig
from milnet.domain.enums import ArchitectureKind, CommandName, LossKind, PoolKind
from milnet.domain.models import (
    DEFAULT_LAMBDA_VALUES,
    DEFAULT_M_VALUES,
    Grid,
    NetworkTemplate,
    TrainConfig,
)
from milnet.dto.base import ValidationError
from milnet.dto.train_config_document import TrainConfigDocument


logger = logging.getLogger(__name__)


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that raises ValidationError instead of exiting on bad usage."""

    def error(self, message: str):
        raise ValidationError(f"{self.prog}: {message}")


def int_list(text: str) -> List[int]:
    """
    Parse a comma-separated list of integers.

    Examples:
        >>> int_list("2,4,8")
        [2, 4, 8]
    """
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got '{text}'")


def float_list(text: str) -> List[float]:
    """Parse a comma-separated list of reals."""
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def pool_kind(text: str) -> PoolKind:
    try:
        return PoolKind.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown pooling kind '{text}'")


class BaseController:
    """
    Base controller class.

    Provides:
    - Subcommand registration
    - Shared network/training/grid options and their resolution
    - Output helpers (results on stdout, diagnostics through logging)
    """

    def __init__(self, settings: Type[BaseConfig], stdout: Optional[TextIO] = None):
        """
        Initialize base controller.

        Args:
            settings: Configuration class supplying defaults
            stdout: Stream for command results (sys.stdout if not provided)
        """
        self.settings = settings
        self._stdout = stdout

    def register(self, subparsers) -> None:
        """Add this controller's subcommands to the CLI parser."""
        raise NotImplementedError

    def _add_command(
        self,
        subparsers,
        name: CommandName,
        handler: Callable[[argparse.Namespace], int],
        help_text: str,
    ) -> argparse.ArgumentParser:
        parser = subparsers.add_parser(name.value, help=help_text, description=help_text)
        parser.set_defaults(handler=handler)
        return parser

    def echo(self, text: str) -> None:
        """Write one result line to stdout."""
        print(text, file=self._stdout or sys.stdout)

    # ------------------------------------------------------------------
    # Shared options
    # ------------------------------------------------------------------

    def add_network_arguments(self, parser: argparse.ArgumentParser, embed_dim: bool = True) -> None:
        group = parser.add_argument_group("network")
        group.add_argument("--arch", choices=[k.value for k in ArchitectureKind],
                           default=ArchitectureKind.PROPOSED.value,
                           help="proposed (pool inside the network) or prior-nn (pool the output)")
        group.add_argument("--pool", type=pool_kind, default=None,
                           help="mean, max or smoothmax (default: mean; max for prior-nn)")
        if embed_dim:
            group.add_argument("--embed-dim", type=int, default=self.settings.DEFAULT_EMBED_DIM,
                               help="width m of the embedding layer")
        group.add_argument("--pre-hidden", type=int_list, default=[],
                           help="comma-separated widths of extra layers before the embedding")
        group.add_argument("--post-hidden", type=int_list, default=[],
                           help="comma-separated widths of extra layers after pooling")

    def add_training_arguments(self, parser: argparse.ArgumentParser, lam: bool = True) -> None:
        group = parser.add_argument_group("training")
        group.add_argument("--config", default=None, help="key=value training config file")
        if lam:
            group.add_argument("--lambda", dest="lam", type=float, default=None,
                               help="L1 strength on weight matrices")
        group.add_argument("--batch", type=int, default=None, help="bags per mini-batch")
        group.add_argument("--iters", type=int, default=None, help="mini-batch steps")
        group.add_argument("--alpha", type=float, default=None, help="Adam step size")
        group.add_argument("--loss", choices=[k.value for k in LossKind], default=None)
        group.add_argument("--seed", type=int, default=None, help="random seed")
        group.add_argument("--no-standardize", action="store_true",
                           help="do not z-score features")
        self.add_jobs_argument(parser)

    def add_grid_arguments(self, parser: argparse.ArgumentParser) -> None:
        group = parser.add_argument_group("grid search")
        group.add_argument("--grid-m", type=int_list, default=list(DEFAULT_M_VALUES),
                           help="comma-separated embed dims")
        group.add_argument("--grid-lambda", type=float_list, default=list(DEFAULT_LAMBDA_VALUES),
                           help="comma-separated L1 strengths")
        group.add_argument("--inner-folds", type=int, default=5, help="inner cross-validation folds")

    @staticmethod
    def add_jobs_argument(parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--jobs", type=int, default=None,
                            help="concurrent tasks (default: MILNET_JOBS or 1)")

    # ------------------------------------------------------------------
    # Resolution
    # ------------------------------------------------------------------

    def resolve_seed(self, args: argparse.Namespace) -> int:
        seed = args.seed if args.seed is not None else self.settings.DEFAULT_SEED
        if seed < 0:
            raise ValidationError(f"--seed must be non-negative, got {seed}")
        return seed

    def resolve_jobs(self, args: argparse.Namespace) -> int:
        jobs = args.jobs if args.jobs is not None else self.settings.default_jobs()
        if jobs < 1:
            raise ValidationError(f"--jobs must be at least 1, got {jobs}")
        return jobs

    def build_train_config(self, args: argparse.Namespace) -> TrainConfig:
        """
        Resolve training settings: defaults, then --config file, then flags.

        Raises:
            ValidationError: If a value is invalid
            OSError: If the config file cannot be read
        """
        config = TrainConfig(
            lam=self.settings.DEFAULT_LAMBDA,
            seed=self.settings.DEFAULT_SEED,
            checkpoint_every=self.settings.CHECKPOINT_EVERY,
        )
        if args.config:
            config = TrainConfigDocument.from_file(args.config, base=config).config

        try:
            return config.with_overrides(
                lam=getattr(args, "lam", None),
                batch_size=args.batch,
                max_iterations=args.iters,
                alpha=args.alpha,
                loss=LossKind(args.loss) if args.loss else None,
                seed=args.seed,
                standardize=False if args.no_standardize else None,
            )
        except ValueError as error:
            raise ValidationError(str(error)) from error

    @staticmethod
    def build_template(args: argparse.Namespace) -> NetworkTemplate:
        """
        Resolve architecture options.

        Raises:
            InvalidArchitectureError: If prior-nn is combined with a pooling other than max
        """
        kind = ArchitectureKind(args.arch)
        pool = args.pool
        if pool is None:
            pool = PoolKind.MAX if kind == ArchitectureKind.PRIOR_NN else PoolKind.MEAN
        return NetworkTemplate(
            kind=kind,
            pool=pool,
            pre_hidden=tuple(args.pre_hidden),
            post_hidden=tuple(args.post_hidden),
        )

    @staticmethod
    def build_grid(args: argparse.Namespace) -> Grid:
        try:
            return Grid(m_values=tuple(args.grid_m), lambda_values=tuple(args.grid_lambda))
        except ValueError as error:
            raise ValidationError(str(error)) from error

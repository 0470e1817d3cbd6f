"""
Synthetic data controller

Handles the synth subcommand.
"""

import argparse
import logging
from typing import Optional, TextIO, Type

from milnet.config.base_config import BaseConfig
from milnet.controllers.base_controller import BaseController
from milnet.domain.enums import CommandName, Regime
from milnet.domain.models import SynthSpec
from milnet.middleware.error_handler import EXIT_OK
from milnet.middleware.run_logger import with_run_logging
from milnet.services.dataset_service import DatasetService
from milnet.services.synthetic_service import SyntheticService


logger = logging.getLogger(__name__)


class SynthController(BaseController):
    """Controller for synthetic dataset generation."""

    def __init__(
        self,
        settings: Type[BaseConfig],
        synthetic_service: SyntheticService,
        dataset_service: DatasetService,
        stdout: Optional[TextIO] = None,
    ):
        super().__init__(settings, stdout)
        self._synthetic = synthetic_service
        self._datasets = dataset_service

    def register(self, subparsers) -> None:
        parser = self._add_command(subparsers, CommandName.SYNTH, self.synth,
                                   "generate a synthetic MIL dataset")
        parser.add_argument("--regime", choices=[r.value for r in Regime], required=True)
        parser.add_argument("--out", required=True, help="dataset CSV to write")
        parser.add_argument("--bags", type=int, default=100, help="bags per class")
        parser.add_argument("--dim", type=int, default=5, help="instance dimension")
        parser.add_argument("--min-instances", type=int, default=5)
        parser.add_argument("--max-instances", type=int, default=20)
        parser.add_argument("--separation", type=float, default=3.0,
                            help="distance between the component means")
        parser.add_argument("--positive-fraction", type=float, default=0.8,
                            help="component-A probability in positive bags (distribution-shift)")
        parser.add_argument("--negative-fraction", type=float, default=0.2,
                            help="component-A probability in negative bags (distribution-shift)")
        parser.add_argument("--seed", type=int, default=None, help="random seed")

    @with_run_logging
    def synth(self, args: argparse.Namespace) -> int:
        spec = SynthSpec(
            regime=Regime(args.regime),
            dim=args.dim,
            bags_per_class=args.bags,
            instances_per_bag=(args.min_instances, args.max_instances),
            seed=self.resolve_seed(args),
            separation=args.separation,
            positive_fraction=args.positive_fraction,
            negative_fraction=args.negative_fraction,
        )
        dataset = self._synthetic.generate_synthetic(spec)
        self._datasets.write_dataset(args.out, dataset)
        self.echo(f"bags={len(dataset)}")
        return EXIT_OK

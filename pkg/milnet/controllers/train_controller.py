"""
Train controller

Handles the train and predict subcommands.
"""

import argparse
import logging
from pathlib import Path
from typing import Optional, TextIO, Type

from milnet.config.base_config import BaseConfig
from milnet.controllers.base_controller import BaseController
from milnet.domain.enums import CommandName
from milnet.domain.errors import SingleClassError
from milnet.dto.report_document import ScoreTableDocument
from milnet.middleware.run_logger import with_run_logging
from milnet.middleware.error_handler import EXIT_OK
from milnet.repositories.model_repository import IModelRepository
from milnet.services.dataset_service import DatasetService
from milnet.services.evaluation_service import EvaluationService
from milnet.services.network_service import NetworkService
from milnet.services.training_service import TrainingService


logger = logging.getLogger(__name__)


class TrainController(BaseController):
    """
    Controller for model fitting and scoring.

    Handles:
    - train: fit one network on a dataset and write the model JSON
    - predict: score a dataset with a saved model
    """

    def __init__(
        self,
        settings: Type[BaseConfig],
        dataset_service: DatasetService,
        network_service: NetworkService,
        training_service: TrainingService,
        evaluation_service: EvaluationService,
        model_repository: IModelRepository,
        stdout: Optional[TextIO] = None,
    ):
        """
        Initialize train controller.

        Args:
            settings: Configuration class supplying defaults
            dataset_service: Dataset loading
            network_service: Initialization and scoring
            training_service: Training loop
            evaluation_service: EER of the trained model
            model_repository: Model storage
            stdout: Stream for command results
        """
        super().__init__(settings, stdout)
        self._datasets = dataset_service
        self._networks = network_service
        self._training = training_service
        self._evaluation = evaluation_service
        self._models = model_repository

    def register(self, subparsers) -> None:
        train = self._add_command(subparsers, CommandName.TRAIN, self.train,
                                  "train a MIL network and write the model JSON")
        train.add_argument("--data", required=True, help="dataset CSV")
        train.add_argument("--out", required=True, help="model JSON to write")
        self.add_network_arguments(train)
        self.add_training_arguments(train)

        predict = self._add_command(subparsers, CommandName.PREDICT, self.predict,
                                    "score a dataset with a trained model")
        predict.add_argument("--model", required=True, help="model JSON")
        predict.add_argument("--data", required=True, help="dataset CSV")
        predict.add_argument("--out", default=None, help="bag_id,score CSV (default: stdout)")

    @with_run_logging
    def train(self, args: argparse.Namespace) -> int:
        """
        Train one network.

        The network is initialized with the training seed. Prints the final
        training objective and the EER on the training data.
        """
        config = self.build_train_config(args)
        template = self.build_template(args)
        jobs = self.resolve_jobs(args)
        dataset = self._datasets.load_dataset(args.data)

        architecture = template.architecture(dataset.dim, args.embed_dim)
        net = self._networks.init_network(architecture, template.pool, config.seed)
        trained, report = self._training.train(net, dataset, config, jobs=jobs)
        self._models.save(args.out, trained)

        self.echo(f"final_objective={report.final_objective:.6f}")
        try:
            self.echo(f"train_eer={self._evaluation.dataset_eer(trained, dataset):.6f}")
        except SingleClassError:
            logger.warning("Training data holds a single class; EER is undefined")
            self.echo("train_eer=nan")
        return EXIT_OK

    @with_run_logging
    def predict(self, args: argparse.Namespace) -> int:
        """Score every bag and emit bag_id,score rows."""
        net = self._models.load(args.model)
        dataset = self._datasets.load_dataset(args.data)
        document = ScoreTableDocument(scored=self._networks.score_dataset(net, dataset))

        if args.out:
            path = Path(args.out)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(document.to_csv(), encoding="utf-8")
            logger.info(f"Wrote {len(dataset)} scores to {args.out}", extra={'path': args.out})
        else:
            self.echo(document.to_csv().rstrip("\n"))
        return EXIT_OK

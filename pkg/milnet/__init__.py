"""
milnet: multiple-instance learning networks with in-network pooling

CLI factory and dependency injection container.
"""

import logging
from typing import List, Optional, Sequence, TextIO, Type

# Config
from milnet.config.base_config import BaseConfig

# Repositories
from milnet.repositories.dataset_repository import IDatasetRepository
from milnet.repositories.model_repository import IModelRepository
from milnet.repositories.plan_repository import IPlanRepository
from milnet.repositories.report_repository import IReportRepository
from milnet.repositories.implementations.csv_dataset_repo import CsvDatasetRepository
from milnet.repositories.implementations.csv_plan_repo import CsvPlanRepository
from milnet.repositories.implementations.file_report_repo import FileReportRepository
from milnet.repositories.implementations.json_model_repo import JsonModelRepository

# Services
from milnet.services.dataset_service import DatasetService
from milnet.services.evaluation_service import EvaluationService
from milnet.services.gradcheck_service import GradientCheckService
from milnet.services.network_service import NetworkService
from milnet.services.synthetic_service import SyntheticService
from milnet.services.training_service import TrainingService

# Controllers
from milnet.controllers.base_controller import BaseController, CliArgumentParser
from milnet.controllers.evaluation_controller import EvaluationController
from milnet.controllers.gradcheck_controller import GradientCheckController
from milnet.controllers.synth_controller import SynthController
from milnet.controllers.train_controller import TrainController

__version__ = "0.1.0"

logger = logging.getLogger(__name__)


class DependencyContainer:
    """
    Dependency injection container.

    Wires up all dependencies:
    - Repositories
    - Services
    - Controllers

    Services depend on repository interfaces; any repository can be
    replaced (e.g. with the in-memory implementations in tests).
    """

    def __init__(
        self,
        settings: Optional[Type[BaseConfig]] = None,
        stdout: Optional[TextIO] = None,
        dataset_repository: Optional[IDatasetRepository] = None,
        plan_repository: Optional[IPlanRepository] = None,
        model_repository: Optional[IModelRepository] = None,
        report_repository: Optional[IReportRepository] = None,
    ):
        """
        Initialize dependency container.

        Args:
            settings: Configuration class (loaded from MILNET_ENV if not provided)
            stdout: Stream for command results
            dataset_repository: Dataset storage (CSV files if not provided)
            plan_repository: Split plan storage (CSV files if not provided)
            model_repository: Model storage (JSON files if not provided)
            report_repository: Report storage (CSV + JSON files if not provided)
        """
        self.settings = settings or self._load_default_settings()
        self.stdout = stdout

        self.dataset_repository = dataset_repository or CsvDatasetRepository()
        self.plan_repository = plan_repository or CsvPlanRepository()
        self.model_repository = model_repository or JsonModelRepository()
        self.report_repository = report_repository or FileReportRepository()

        self._init_services()
        self._init_controllers()

    @staticmethod
    def _load_default_settings() -> Type[BaseConfig]:
        from milnet.config.settings import get_settings
        return get_settings()

    def _init_services(self) -> None:
        """Initialize service layer."""
        self.dataset_service = DatasetService(
            dataset_repository=self.dataset_repository,
            plan_repository=self.plan_repository,
        )
        self.synthetic_service = SyntheticService()
        self.network_service = NetworkService(probe_bags=self.settings.PROBE_BAGS)
        self.training_service = TrainingService(
            network_service=self.network_service,
            dataset_service=self.dataset_service,
        )
        self.evaluation_service = EvaluationService(
            dataset_service=self.dataset_service,
            network_service=self.network_service,
            training_service=self.training_service,
        )
        self.gradcheck_service = GradientCheckService(network_service=self.network_service)
        logger.debug("Services initialized")

    def _init_controllers(self) -> None:
        """Initialize controller layer."""
        self.train_controller = TrainController(
            settings=self.settings,
            dataset_service=self.dataset_service,
            network_service=self.network_service,
            training_service=self.training_service,
            evaluation_service=self.evaluation_service,
            model_repository=self.model_repository,
            stdout=self.stdout,
        )
        self.evaluation_controller = EvaluationController(
            settings=self.settings,
            dataset_service=self.dataset_service,
            evaluation_service=self.evaluation_service,
            report_repository=self.report_repository,
            stdout=self.stdout,
        )
        self.gradcheck_controller = GradientCheckController(
            settings=self.settings,
            gradcheck_service=self.gradcheck_service,
            stdout=self.stdout,
        )
        self.synth_controller = SynthController(
            settings=self.settings,
            synthetic_service=self.synthetic_service,
            dataset_service=self.dataset_service,
            stdout=self.stdout,
        )

    @property
    def controllers(self) -> List[BaseController]:
        return [
            self.train_controller,
            self.evaluation_controller,
            self.gradcheck_controller,
            self.synth_controller,
        ]


class CliApplication:
    """Argument parser bound to the container's controllers."""

    def __init__(self, container: DependencyContainer):
        self.container = container
        self.parser = CliArgumentParser(
            prog="milnet",
            description="Multiple-instance learning networks with in-network pooling.",
        )
        self.parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
        subparsers = self.parser.add_subparsers(dest="command", metavar="COMMAND")
        subparsers.required = True
        for controller in container.controllers:
            controller.register(subparsers)

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        """
        Parse arguments and dispatch to the subcommand handler.

        Raises:
            ValidationError: On usage errors
        """
        args = self.parser.parse_args(argv)
        if self.container.settings.LOG_RUN_ARGS:
            logger.debug(f"Parsed arguments: {vars(args)}", extra={'command': args.command})
        return args.handler(args)


def create_cli(
    settings: Optional[Type[BaseConfig]] = None,
    stdout: Optional[TextIO] = None,
    **repositories,
) -> CliApplication:
    """
    CLI factory.

    Args:
        settings: Configuration class (loaded from MILNET_ENV if not provided)
        stdout: Stream for command results
        **repositories: Repository overrides passed to DependencyContainer

    Returns:
        Configured CLI application
    """
    container = DependencyContainer(settings=settings, stdout=stdout, **repositories)
    logger.debug("CLI created")
    return CliApplication(container)

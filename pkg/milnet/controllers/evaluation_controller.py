"""
Evaluation controller

Handles the eval (outer cross-validation) and gridsearch subcommands.
"""

import argparse
import logging
from typing import Optional, TextIO, Type

from milnet.config.base_config import BaseConfig
from milnet.controllers.base_controller import BaseController
from milnet.domain.enums import CommandName
from milnet.domain.models import SplitPlan
from milnet.dto.base import ValidationError
from milnet.middleware.error_handler import EXIT_OK
from milnet.middleware.run_logger import with_run_logging
from milnet.repositories.report_repository import IReportRepository
from milnet.services.dataset_service import DatasetService
from milnet.services.evaluation_service import EvaluationService
from milnet.utils.seeding import derive_seed


logger = logging.getLogger(__name__)


class EvaluationController(BaseController):
    """
    Controller for model selection and evaluation runs.

    Handles:
    - eval: repeated stratified k-fold cross-validation with inner grid search
    - gridsearch: inner grid search over a whole dataset
    """

    def __init__(
        self,
        settings: Type[BaseConfig],
        dataset_service: DatasetService,
        evaluation_service: EvaluationService,
        report_repository: IReportRepository,
        stdout: Optional[TextIO] = None,
    ):
        """
        Initialize evaluation controller.

        Args:
            settings: Configuration class supplying defaults
            dataset_service: Dataset and split plan I/O
            evaluation_service: Grid search and cross-validation
            report_repository: Report storage
            stdout: Stream for command results
        """
        super().__init__(settings, stdout)
        self._datasets = dataset_service
        self._evaluation = evaluation_service
        self._reports = report_repository

    def register(self, subparsers) -> None:
        evaluate = self._add_command(subparsers, CommandName.EVAL, self.eval,
                                     "cross-validate the full training protocol")
        evaluate.add_argument("--data", required=True, help="dataset CSV")
        evaluate.add_argument("--report", required=True,
                              help="report CSV to write (a .json mirror is written next to it)")
        evaluate.add_argument("--plan", default=None, help="split plan CSV to use")
        evaluate.add_argument("--folds", type=int, default=None, help="outer folds per repetition")
        evaluate.add_argument("--repeats", type=int, default=None, help="outer repetitions")
        evaluate.add_argument("--write-plan", default=None,
                              help="save the generated split plan to this CSV")
        self.add_network_arguments(evaluate, embed_dim=False)
        self.add_training_arguments(evaluate, lam=False)
        self.add_grid_arguments(evaluate)

        search = self._add_command(subparsers, CommandName.GRIDSEARCH, self.gridsearch,
                                   "select (m, lambda) by inner cross-validation")
        search.add_argument("--data", required=True, help="dataset CSV")
        search.add_argument("--out", required=True,
                            help="grid table CSV to write (a .json mirror is written next to it)")
        self.add_network_arguments(search, embed_dim=False)
        self.add_training_arguments(search, lam=False)
        self.add_grid_arguments(search)

    def _resolve_plan(self, args: argparse.Namespace, dataset, seed: int) -> SplitPlan:
        if args.plan:
            return self._datasets.load_plan(args.plan)
        if args.folds is None or args.repeats is None:
            raise ValidationError("eval needs --plan or both --folds and --repeats")
        plan = self._datasets.make_splits(dataset, args.folds, args.repeats, derive_seed(seed, 0))
        if args.write_plan:
            self._datasets.write_plan(args.write_plan, plan)
        return plan

    @with_run_logging
    def eval(self, args: argparse.Namespace) -> int:
        """Run cross_validate, write the report and print the mean EERs."""
        if not args.plan and (args.folds is None or args.repeats is None):
            raise ValidationError("eval needs --plan or both --folds and --repeats")
        config = self.build_train_config(args)
        template = self.build_template(args)
        grid = self.build_grid(args)
        jobs = self.resolve_jobs(args)
        seed = self.resolve_seed(args)

        dataset = self._datasets.load_dataset(args.data)
        plan = self._resolve_plan(args, dataset, seed)
        report = self._evaluation.cross_validate(
            dataset,
            plan,
            grid,
            config,
            template,
            seed=derive_seed(seed, 1),
            inner_folds=args.inner_folds,
            jobs=jobs,
        )
        self._reports.save(args.report, report)

        self.echo(f"mean_train_eer={report.mean_train_eer:.6f}")
        self.echo(f"mean_test_eer={report.mean_test_eer:.6f}")
        return EXIT_OK

    @with_run_logging
    def gridsearch(self, args: argparse.Namespace) -> int:
        """Run grid_search on the whole dataset and write the per-cell table."""
        config = self.build_train_config(args)
        template = self.build_template(args)
        grid = self.build_grid(args)
        jobs = self.resolve_jobs(args)
        seed = self.resolve_seed(args)

        dataset = self._datasets.load_dataset(args.data)
        if config.standardize:
            standardizer = self._datasets.fit_standardizer(dataset)
            dataset = self._datasets.apply_standardizer(standardizer, dataset)
            config = config.with_overrides(standardize=False)

        result = self._evaluation.grid_search(
            dataset, grid, args.inner_folds, config, template, seed=seed, jobs=jobs
        )
        self._reports.save_grid_search(args.out, result)

        self.echo(f"m={result.m}")
        self.echo(f"lambda={result.lam!r}")
        return EXIT_OK

"""
Evaluation service

ROC curves and equal error rates of scored bags, the inner grid search over
(m, lambda) and the repeated outer cross-validation protocol.

Every grid cell and every outer fold owns a seed derived from the caller's
seed and its indices, so each can be rerun on its own and results do not
depend on execution order.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from milnet.domain.errors import SingleClassError
from milnet.domain.models import (
    EvalReport,
    FoldRecord,
    Grid,
    GridCellResult,
    GridSearchResult,
    MilDataset,
    Network,
    NetworkTemplate,
    ScoredBag,
    SplitPlan,
    TrainConfig,
)
from milnet.services.dataset_service import DatasetService
from milnet.services.network_service import NetworkService
from milnet.services.training_service import TrainingService
from milnet.utils.executor import run_ordered
from milnet.utils.seeding import derive_seed


logger = logging.getLogger(__name__)

DEFAULT_INNER_FOLDS = 5


class EvaluationService:
    """
    Service for EER computation, model selection and cross-validation.

    Dependencies:
    - DatasetService: Subsets, standardization, split plans
    - NetworkService: Initialization and scoring
    - TrainingService: Model fitting
    """

    def __init__(
        self,
        dataset_service: Optional[DatasetService] = None,
        network_service: Optional[NetworkService] = None,
        training_service: Optional[TrainingService] = None,
        jobs: int = 1,
    ):
        """
        Initialize evaluation service.

        Args:
            dataset_service: Dataset operations (creates default if not provided)
            network_service: Network operations (creates default if not provided)
            training_service: Training (creates default if not provided)
            jobs: Maximum concurrent grid cells / outer folds
        """
        self.dataset_service = dataset_service or DatasetService()
        self.network_service = network_service or NetworkService()
        self.training_service = training_service or TrainingService(
            network_service=self.network_service,
            dataset_service=self.dataset_service,
        )
        self.jobs = jobs

    # ------------------------------------------------------------------
    # ROC / EER
    # ------------------------------------------------------------------

    @staticmethod
    def roc_points(scored: Sequence[ScoredBag]) -> List[Tuple[float, float]]:
        """
        ROC polyline from a descending threshold sweep.

        One point per distinct score: the rates of bags scoring at or above
        it. Tied scores move the curve in a single (diagonal) step.

        Returns:
            [(fpr, tpr), ...] from (0, 0) to (1, 1), non-decreasing in both

        Raises:
            SingleClassError: If either class is missing
        """
        scores = np.array([s.score for s in scored], dtype=np.float64)
        positive = np.array([s.label == 1 for s in scored], dtype=bool)
        n_pos = int(positive.sum())
        n_neg = len(scored) - n_pos
        if n_pos == 0 or n_neg == 0:
            raise SingleClassError(
                f"ROC needs both classes, got {n_pos} positive and {n_neg} negative bags"
            )

        order = np.argsort(-scores, kind="stable")
        sorted_scores = scores[order]
        true_pos = np.cumsum(positive[order])
        false_pos = np.cumsum(~positive[order])
        group_ends = np.flatnonzero(np.append(sorted_scores[1:] != sorted_scores[:-1], True))

        points = [(0.0, 0.0)]
        for end in group_ends:
            points.append((false_pos[end] / n_neg, true_pos[end] / n_pos))
        return [(float(x), float(y)) for x, y in points]

    @classmethod
    def eer(cls, scored: Sequence[ScoredBag]) -> float:
        """
        Equal error rate.

        The false-positive rate where the linearly interpolated ROC polyline
        meets tpr = 1 - fpr (false-positive rate equals false-negative rate).

        Raises:
            SingleClassError: If either class is missing

        Examples:
            Labels (+, +, -, -) with scores (0.9, 0.4, 0.6, 0.1) give 0.5.
        """
        points = cls.roc_points(scored)
        previous_x, previous_y = points[0]
        previous_h = previous_x + previous_y - 1.0
        for x, y in points[1:]:
            h = x + y - 1.0
            if h >= 0.0:
                t = -previous_h / (h - previous_h)
                return min(1.0, max(0.0, previous_x + t * (x - previous_x)))
            previous_x, previous_y, previous_h = x, y, h
        return 1.0

    def dataset_eer(self, net: Network, dataset: MilDataset) -> float:
        """EER of a network on a dataset (standardizing with the network's standardizer)."""
        return self.eer(self.network_service.score_dataset(net, dataset))

    # ------------------------------------------------------------------
    # Grid search
    # ------------------------------------------------------------------

    @staticmethod
    def select_cell(cells: Sequence[GridCellResult]) -> GridCellResult:
        """Lowest mean EER; ties go to the smaller m, then the larger lambda."""
        return min(cells, key=lambda cell: (cell.mean_eer, cell.m, -cell.lam))

    def grid_search(
        self,
        train: MilDataset,
        grid: Grid,
        inner_folds: int = DEFAULT_INNER_FOLDS,
        config: Optional[TrainConfig] = None,
        template: Optional[NetworkTemplate] = None,
        seed: int = 0,
        jobs: Optional[int] = None,
    ) -> GridSearchResult:
        """
        Choose (m, lambda) by stratified inner cross-validation.

        Every cell trains one network per inner fold and is scored by the
        mean held-out EER; all cells share one inner split plan.

        Args:
            train: Training bags
            grid: Candidate cells
            inner_folds: Inner folds
            config: Optimizer settings (lam and seed are set per cell)
            template: Architecture choices (m comes from the grid)
            seed: Seed of the inner plan and of every cell
            jobs: Concurrent cells/folds (defaults to the service setting)

        Returns:
            Chosen cell plus the full per-cell table

        Raises:
            InfeasibleStratificationError: If a class has fewer bags than inner_folds
        """
        config = config or TrainConfig()
        template = template or NetworkTemplate()
        jobs = self.jobs if jobs is None else jobs

        plan = self.dataset_service.make_splits(train, inner_folds, 1, derive_seed(seed, 0))
        cells = grid.cells()
        tasks = [
            (index, m, lam, fold)
            for index, (m, lam) in enumerate(cells)
            for fold in range(inner_folds)
        ]

        def evaluate(task: Tuple[int, int, float, int]) -> float:
            index, m, lam, fold = task
            cell_seed = derive_seed(seed, index, fold)
            return self._fit_and_score(
                train.subset(plan.train_ids(0, fold)),
                train.subset(plan.test_ids(0, fold)),
                template,
                config.with_overrides(lam=lam, seed=cell_seed),
                m,
                cell_seed,
            )[1]

        eers = run_ordered(evaluate, tasks, jobs)

        by_cell: Dict[int, List[float]] = {index: [] for index in range(len(cells))}
        for (index, _, _, _), value in zip(tasks, eers):
            by_cell[index].append(value)

        results = []
        for index, (m, lam) in enumerate(cells):
            result = GridCellResult(m=m, lam=lam, fold_eers=tuple(by_cell[index]))
            results.append(result)
            logger.info(
                f"Grid cell m={m} lambda={lam:g}: mean EER {result.mean_eer:.4f}",
                extra={'m': m, 'lam': lam, 'mean_eer': result.mean_eer}
            )

        chosen = self.select_cell(results)
        return GridSearchResult(m=chosen.m, lam=chosen.lam, cells=tuple(results))

    # ------------------------------------------------------------------
    # Outer protocol
    # ------------------------------------------------------------------

    def cross_validate(
        self,
        dataset: MilDataset,
        plan: SplitPlan,
        grid: Grid,
        config: Optional[TrainConfig] = None,
        template: Optional[NetworkTemplate] = None,
        seed: int = 0,
        inner_folds: int = DEFAULT_INNER_FOLDS,
        jobs: Optional[int] = None,
    ) -> EvalReport:
        """
        Run the repeated outer cross-validation.

        For every (repetition, fold): fit the standardizer on the training
        portion (when config.standardize), pick (m, lambda) by grid_search on
        it, train the final model on the whole training portion and record
        the EER on the training portion and on the held-out fold. With more
        than one job the outer folds run concurrently and each inner grid
        search runs serially.

        Raises:
            PlanMismatchError: If the plan does not cover exactly the dataset's bags
        """
        config = config or TrainConfig()
        template = template or NetworkTemplate()
        self.dataset_service.check_plan_covers(plan, dataset)

        outer = [(r, f) for r in range(plan.repeats) for f in range(plan.folds)]
        jobs = self.jobs if jobs is None else jobs
        outer_jobs = jobs if len(outer) > 1 else 1
        inner_jobs = 1 if outer_jobs > 1 else jobs

        def run_fold(task: Tuple[int, int]) -> FoldRecord:
            repetition, fold = task
            fold_seed = derive_seed(seed, repetition, fold)
            train = dataset.subset(plan.train_ids(repetition, fold))
            test = dataset.subset(plan.test_ids(repetition, fold))

            inner_config = config
            if config.standardize:
                standardizer = self.dataset_service.fit_standardizer(train)
                train = self.dataset_service.apply_standardizer(standardizer, train)
                test = self.dataset_service.apply_standardizer(standardizer, test)
                inner_config = config.with_overrides(standardize=False)

            choice = self.grid_search(
                train, grid, inner_folds, inner_config, template, fold_seed, jobs=inner_jobs
            )
            final_seed = derive_seed(fold_seed, len(grid))
            trained, train_eer = self._fit_and_score(
                train,
                train,
                template,
                inner_config.with_overrides(lam=choice.lam, seed=final_seed),
                choice.m,
                final_seed,
            )
            record = FoldRecord(
                repetition=repetition,
                fold=fold,
                m=choice.m,
                lam=choice.lam,
                train_eer=train_eer,
                test_eer=self.dataset_eer(trained, test),
            )
            logger.info(
                f"Fold {repetition}/{fold}: m={record.m} lambda={record.lam:g} "
                f"train EER {record.train_eer:.4f} test EER {record.test_eer:.4f}",
                extra={'repetition': repetition, 'fold': fold}
            )
            return record

        records = run_ordered(run_fold, outer, outer_jobs)
        report = EvalReport(records=tuple(records))
        logger.info(
            f"Cross-validation finished: mean test EER {report.mean_test_eer:.4f}",
            extra={'records': len(records)}
        )
        return report

    def _fit_and_score(
        self,
        train: MilDataset,
        held_out: MilDataset,
        template: NetworkTemplate,
        config: TrainConfig,
        m: int,
        init_seed: int,
    ) -> Tuple[Network, float]:
        """Train a fresh network with embed dim m and return it with its EER on held_out."""
        architecture = template.architecture(train.dim, m)
        net = self.network_service.init_network(architecture, template.pool, init_seed)
        trained, _ = self.training_service.train(net, train, config)
        return trained, self.dataset_eer(trained, held_out)

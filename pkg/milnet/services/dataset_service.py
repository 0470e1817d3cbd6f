"""
Dataset service

Business logic for MIL datasets: ingestion, feature standardization and
reproducible stratified cross-validation plans.
"""

import logging
from typing import Dict, List, Optional

import numpy as np

from milnet.domain.errors import (
    DimensionMismatchError,
    EmptyDatasetError,
    InfeasibleStratificationError,
    InvalidConfigError,
    PlanMismatchError,
)
from milnet.domain.models import VALID_LABELS, MilDataset, SplitPlan, Standardizer
from milnet.repositories.dataset_repository import IDatasetRepository
from milnet.repositories.implementations.csv_dataset_repo import CsvDatasetRepository
from milnet.repositories.implementations.csv_plan_repo import CsvPlanRepository
from milnet.repositories.plan_repository import IPlanRepository
from milnet.utils.seeding import make_rng


logger = logging.getLogger(__name__)

SCALE_FLOOR = 1e-8
SUPPORTED_FORMATS = ("csv",)


class DatasetService:
    """
    Service for datasets and split plans.

    Handles:
    - Dataset loading/writing through a repository
    - Standardizer fitting and application
    - Stratified, repeated k-fold split plans

    Dependencies:
    - IDatasetRepository: Dataset storage (CSV by default)
    - IPlanRepository: Split plan storage (CSV by default)
    """

    def __init__(
        self,
        dataset_repository: Optional[IDatasetRepository] = None,
        plan_repository: Optional[IPlanRepository] = None,
    ):
        """
        Initialize dataset service.

        Args:
            dataset_repository: Dataset storage (creates CSV storage if not provided)
            plan_repository: Split plan storage (creates CSV storage if not provided)
        """
        self._datasets = dataset_repository or CsvDatasetRepository()
        self._plans = plan_repository or CsvPlanRepository()

    # ------------------------------------------------------------------
    # Ingestion
    # ------------------------------------------------------------------

    def load_dataset(self, path: str, format: str = "csv") -> MilDataset:
        """
        Load a dataset file.

        Args:
            path: Dataset file
            format: File format (only "csv")

        Returns:
            The dataset, one bag per distinct bag id

        Raises:
            ValueError: If the format is unsupported
            OSError: If the file cannot be read
            DatasetParseError: On malformed rows (carries the row number)
            DatasetConsistencyError: On conflicting labels within a bag
            EmptyDatasetError: If the file holds no rows
        """
        if format not in SUPPORTED_FORMATS:
            raise ValueError(f"Unsupported dataset format: {format}")
        return self._datasets.load(path)

    def write_dataset(self, path: str, dataset: MilDataset) -> None:
        """Write a dataset in the CSV contract."""
        self._datasets.save(path, dataset)

    def load_plan(self, path: str) -> SplitPlan:
        return self._plans.load(path)

    def write_plan(self, path: str, plan: SplitPlan) -> None:
        self._plans.save(path, plan)

    # ------------------------------------------------------------------
    # Standardization
    # ------------------------------------------------------------------

    def fit_standardizer(self, dataset: MilDataset) -> Standardizer:
        """
        Fit per-feature mean and population standard deviation over all instances.

        Scales below 1e-8 (constant features) are floored at 1e-8. A single
        feature with values {0, 2} yields mean 1 and scale 1.
        """
        if len(dataset) == 0:
            raise EmptyDatasetError("cannot fit a standardizer on an empty dataset")
        instances = dataset.instance_matrix()
        mean = instances.mean(axis=0)
        scale = np.maximum(instances.std(axis=0), SCALE_FLOOR)
        return Standardizer(mean=mean, scale=scale)

    def apply_standardizer(self, standardizer: Standardizer, dataset: MilDataset) -> MilDataset:
        """
        Replace every feature by (value - mean) / scale.

        Bag ids, labels and instance order are unchanged.

        Raises:
            DimensionMismatchError: If dimensions differ
        """
        if standardizer.dim != dataset.dim:
            raise DimensionMismatchError(
                f"standardizer has dimension {standardizer.dim}, dataset has {dataset.dim}"
            )
        return dataset.map_instances(standardizer.transform)

    # ------------------------------------------------------------------
    # Split plans
    # ------------------------------------------------------------------

    def make_splits(self, dataset: MilDataset, folds: int, repeats: int, seed: int) -> SplitPlan:
        """
        Build a stratified, repeated k-fold plan at bag level.

        Within each repetition, the bags of each class are shuffled with a
        seed derived from (seed, repetition) and dealt round-robin over the
        folds; the second class continues where the first stopped, so fold
        sizes differ by at most one overall and per class.

        Args:
            dataset: Bags to split
            folds: Folds per repetition (>= 2)
            repeats: Repetitions (>= 1)
            seed: Unsigned seed

        Returns:
            Split plan, a deterministic function of (bag ids, folds, repeats, seed)

        Raises:
            InvalidConfigError: If folds < 2, repeats < 1 or seed < 0
            InfeasibleStratificationError: If a class has fewer bags than folds
        """
        if folds < 2:
            raise InvalidConfigError(f"folds must be at least 2, got {folds}")
        if repeats < 1:
            raise InvalidConfigError(f"repeats must be at least 1, got {repeats}")
        if seed < 0:
            raise InvalidConfigError(f"seed must be unsigned, got {seed}")

        ids_by_class: Dict[int, List[str]] = {
            label: sorted(bag.id for bag in dataset if bag.label == label)
            for label in sorted(VALID_LABELS, reverse=True)
        }
        for label, ids in ids_by_class.items():
            if len(ids) < folds:
                raise InfeasibleStratificationError(
                    f"class {label:+d} has {len(ids)} bags, fewer than {folds} folds"
                )

        assignment = {}
        for repetition in range(repeats):
            rng = make_rng(seed, repetition)
            offset = 0
            for ids in ids_by_class.values():
                for position, index in enumerate(rng.permutation(len(ids))):
                    assignment[(repetition, ids[index])] = (offset + position) % folds
                offset = (offset + len(ids)) % folds

        logger.info(
            f"Built split plan: {repeats}x{folds}-fold over {len(dataset)} bags",
            extra={'folds': folds, 'repeats': repeats, 'seed': seed}
        )
        return SplitPlan(repeats=repeats, folds=folds, assignment=assignment)

    @staticmethod
    def check_plan_covers(plan: SplitPlan, dataset: MilDataset) -> None:
        """
        Ensure a plan assigns exactly the bags of a dataset and that every
        held-out fold, and its training complement, holds both classes.

        Raises:
            PlanMismatchError: If some bag is missing from either side, or a
                fold's test or training part holds a single class
        """
        plan_ids = set(plan.bag_ids)
        data_ids = set(dataset.bag_ids)
        if plan_ids != data_ids:
            missing = sorted(data_ids - plan_ids)[:5]
            unknown = sorted(plan_ids - data_ids)[:5]
            raise PlanMismatchError(
                f"split plan does not match dataset (unassigned bags: {missing}, "
                f"unknown bags: {unknown})"
            )

        both = set(VALID_LABELS)
        for repetition in range(plan.repeats):
            for fold in range(plan.folds):
                test_labels = {dataset.get(i).label for i in plan.test_ids(repetition, fold)}
                train_labels = {
                    dataset.get(i).label
                    for i in plan.bag_ids
                    if plan.fold_of(repetition, i) != fold
                }
                for part, labels in (("test", test_labels), ("training", train_labels)):
                    if labels != both:
                        raise PlanMismatchError(
                            f"split plan repetition {repetition} fold {fold}: "
                            f"{part} part must hold both classes, got {sorted(labels)}"
                        )

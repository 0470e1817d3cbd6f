"""
Unit tests for EvaluationService

ROC/EER against a brute-force oracle, grid search selection and the outer
cross-validation protocol.
"""

from fractions import Fraction

import numpy as np
import pytest

from milnet.domain.enums import PoolKind
from milnet.domain.errors import InfeasibleStratificationError, PlanMismatchError, SingleClassError
from milnet.domain.models import (
    Grid,
    GridCellResult,
    MilDataset,
    NetworkTemplate,
    ScoredBag,
    TrainConfig,
)
from milnet.services.dataset_service import DatasetService
from milnet.services.evaluation_service import EvaluationService


def scored(labels, scores):
    return [ScoredBag(bag_id=str(i), label=y, score=float(s)) for i, (y, s) in enumerate(zip(labels, scores))]


def oracle_eer(labels, scores):
    """Exhaustive threshold sweep with exact rational interpolation."""
    positives = [s for y, s in zip(labels, scores) if y == 1]
    negatives = [s for y, s in zip(labels, scores) if y == -1]
    points = [(Fraction(0), Fraction(0))]
    for threshold in sorted(set(scores), reverse=True):
        points.append((
            Fraction(sum(s >= threshold for s in negatives), len(negatives)),
            Fraction(sum(s >= threshold for s in positives), len(positives)),
        ))
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        h0, h1 = x0 + y0 - 1, x1 + y1 - 1
        if h1 >= 0:
            return float(x0 + (-h0 / (h1 - h0)) * (x1 - x0))
    return 1.0


def random_score_set(rng):
    size = int(rng.integers(2, 13))
    labels = [1, -1] + [int(v) for v in rng.choice([-1, 1], size=size - 2)]
    rng.shuffle(labels)
    if rng.random() < 0.5:
        scores = rng.integers(-3, 4, size=size).astype(float)
    else:
        scores = rng.standard_normal(size)
    return labels, scores


@pytest.fixture
def service():
    return EvaluationService()


@pytest.fixture
def fast_config():
    return TrainConfig(batch_size=4, max_iterations=2, alpha=0.01, checkpoint_every=100)


@pytest.mark.unit
class TestRocPoints:
    """Tests for roc_points."""

    def test_separated_contains_top_left(self):
        points = EvaluationService.roc_points(scored([1, 1, -1, -1], [4, 3, 2, 1]))

        assert (0.0, 1.0) in points

    def test_all_equal_scores(self):
        points = EvaluationService.roc_points(scored([1, -1, 1, -1], [0.5] * 4))

        assert points == [(0.0, 0.0), (1.0, 1.0)]

    def test_hand_example(self):
        points = EvaluationService.roc_points(scored([1, 1, -1, -1], [0.9, 0.4, 0.6, 0.1]))

        assert points == [(0.0, 0.0), (0.0, 0.5), (0.5, 0.5), (0.5, 1.0), (1.0, 1.0)]

    def test_single_class(self):
        with pytest.raises(SingleClassError):
            EvaluationService.roc_points(scored([1, 1], [0.1, 0.2]))

    def test_monotone_and_anchored(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            labels, scores = random_score_set(rng)

            points = EvaluationService.roc_points(scored(labels, scores))

            assert points[0] == (0.0, 0.0)
            assert points[-1] == (1.0, 1.0)
            assert all(a[0] <= b[0] and a[1] <= b[1] for a, b in zip(points, points[1:]))


@pytest.mark.unit
class TestEer:
    """Tests for eer."""

    def test_separated_is_zero(self):
        assert EvaluationService.eer(scored([1, 1, -1, -1], [4, 3, 2, 1])) == 0.0

    def test_anti_separated_is_one(self):
        assert EvaluationService.eer(scored([1, 1, -1, -1], [1, 2, 3, 4])) == 1.0

    def test_hand_example(self):
        assert EvaluationService.eer(scored([1, 1, -1, -1], [0.9, 0.4, 0.6, 0.1])) == 0.5

    def test_single_class(self):
        with pytest.raises(SingleClassError):
            EvaluationService.eer(scored([-1, -1], [0.1, 0.2]))

    def test_matches_oracle(self):
        rng = np.random.default_rng(2024)
        for _ in range(200):
            labels, scores = random_score_set(rng)

            value = EvaluationService.eer(scored(labels, scores))

            assert abs(value - oracle_eer(labels, list(scores))) <= 1e-12
            assert 0.0 <= value <= 1.0

    def test_zero_iff_separated(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            labels, scores = random_score_set(rng)
            positives = [s for y, s in zip(labels, scores) if y == 1]
            negatives = [s for y, s in zip(labels, scores) if y == -1]

            value = EvaluationService.eer(scored(labels, scores))

            assert (value == 0.0) == (min(positives) > max(negatives))

    @pytest.mark.parametrize("transform", [np.exp, lambda s: s ** 3, lambda s: 3.0 * s + 5.0])
    def test_invariant_under_monotone_transform(self, transform):
        rng = np.random.default_rng(11)
        for _ in range(200):
            labels, scores = random_score_set(rng)

            before = EvaluationService.eer(scored(labels, scores))
            after = EvaluationService.eer(scored(labels, transform(scores)))

            assert before == after

    def test_symmetric_under_negation_and_flip(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            labels, scores = random_score_set(rng)

            before = EvaluationService.eer(scored(labels, scores))
            after = EvaluationService.eer(scored([-y for y in labels], -scores))

            assert after == pytest.approx(before, abs=1e-12)


@pytest.mark.unit
class TestGridSearch:
    """Tests for select_cell and grid_search."""

    def test_tie_prefers_smaller_m(self):
        cells = [
            GridCellResult(m=8, lam=1e-5, fold_eers=(0.1,)),
            GridCellResult(m=4, lam=1e-5, fold_eers=(0.1,)),
        ]

        assert EvaluationService.select_cell(cells).m == 4

    def test_tie_then_prefers_larger_lambda(self):
        cells = [
            GridCellResult(m=4, lam=1e-5, fold_eers=(0.1,)),
            GridCellResult(m=4, lam=1e-3, fold_eers=(0.1,)),
            GridCellResult(m=2, lam=1e-7, fold_eers=(0.2,)),
        ]

        chosen = EvaluationService.select_cell(cells)

        assert (chosen.m, chosen.lam) == (4, 1e-3)

    def test_default_grid_evaluates_thirty_cells(self, service, balanced_dataset):
        config = TrainConfig(max_iterations=0, standardize=False)

        result = service.grid_search(balanced_dataset, Grid(), inner_folds=5, config=config)

        assert len(result.cells) == 30
        assert all(len(cell.fold_eers) == 5 for cell in result.cells)
        assert (result.m, result.lam) in Grid().cells()

    def test_single_cell_grid(self, service, balanced_dataset, fast_config):
        grid = Grid(m_values=(3,), lambda_values=(1e-4,))

        result = service.grid_search(balanced_dataset, grid, inner_folds=5, config=fast_config, seed=4)

        assert (result.m, result.lam) == (3, 1e-4)
        assert len(result.cells[0].fold_eers) == 5

    def test_thread_pool_matches_serial(self, service, balanced_dataset, fast_config):
        grid = Grid(m_values=(2, 3), lambda_values=(0.0, 1e-3))

        serial = service.grid_search(balanced_dataset, grid, 2, fast_config, seed=1, jobs=1)
        pooled = service.grid_search(balanced_dataset, grid, 2, fast_config, seed=1, jobs=4)

        assert serial == pooled

    def test_infeasible_inner_folds(self, service, balanced_dataset, fast_config):
        with pytest.raises(InfeasibleStratificationError):
            service.grid_search(balanced_dataset, Grid(m_values=(2,), lambda_values=(0.0,)), 11, fast_config)


@pytest.mark.unit
class TestCrossValidate:
    """Tests for cross_validate."""

    @pytest.fixture
    def grid(self):
        return Grid(m_values=(3,), lambda_values=(1e-5,))

    def test_five_by_ten_gives_fifty_records(self, service, balanced_dataset, grid, fast_config):
        plan = DatasetService().make_splits(balanced_dataset, folds=10, repeats=5, seed=0)

        report = service.cross_validate(balanced_dataset, plan, grid, fast_config)

        assert len(report.records) == 50
        assert [(r.repetition, r.fold) for r in report.records] == [(r, f) for r in range(5) for f in range(10)]
        assert all(0.0 <= r.test_eer <= 1.0 and 0.0 <= r.train_eer <= 1.0 for r in report.records)

    def test_bag_order_does_not_matter(self, service, balanced_dataset, grid, fast_config):
        plan = DatasetService().make_splits(balanced_dataset, folds=2, repeats=1, seed=0)
        reversed_dataset = MilDataset(bags=tuple(reversed(balanced_dataset.bags)), dim=balanced_dataset.dim)

        first = service.cross_validate(balanced_dataset, plan, grid, fast_config, seed=5)
        second = service.cross_validate(reversed_dataset, plan, grid, fast_config, seed=5)

        assert first == second

    def test_outer_folds_in_parallel_match_serial(self, service, balanced_dataset, grid, fast_config):
        plan = DatasetService().make_splits(balanced_dataset, folds=2, repeats=2, seed=3)
        template = NetworkTemplate(pool=PoolKind.MAX)

        serial = service.cross_validate(balanced_dataset, plan, grid, fast_config, template, jobs=1)
        pooled = service.cross_validate(balanced_dataset, plan, grid, fast_config, template, jobs=4)

        assert serial == pooled

    def test_plan_mismatch(self, service, balanced_dataset, tiny_dataset, grid, fast_config):
        plan = DatasetService().make_splits(balanced_dataset, folds=2, repeats=1, seed=0)

        with pytest.raises(PlanMismatchError):
            service.cross_validate(tiny_dataset, plan, grid, fast_config)

    def test_dataset_eer_single_class(self, service, small_network, balanced_dataset):
        negatives = balanced_dataset.subset([i for i in balanced_dataset.bag_ids if i.startswith("n")])

        with pytest.raises(SingleClassError):
            service.dataset_eer(small_network, negatives)

"""
Training service

Minimizes

    mean_b loss(score(b), y_b) + lambda * sum |w|

over mini-batches of bags with Adam. The L1 term covers every weight
matrix (biases excluded) and enters Adam as the subgradient
lambda * sign(w), with sign(0) = 0.
"""

import logging
import math
from functools import reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np

from milnet.domain.enums import LossKind
from milnet.domain.errors import DimensionMismatchError, EmptyDatasetError, ShapeMismatchError
from milnet.domain.models import (
    AdamState,
    Bag,
    Checkpoint,
    Gradients,
    MilDataset,
    Network,
    TrainConfig,
    TrainReport,
    VALID_LABELS,
)
from milnet.services.dataset_service import DatasetService
from milnet.services.network_service import NetworkService
from milnet.utils.executor import run_ordered


logger = logging.getLogger(__name__)


def _check_label(label: int) -> None:
    if label not in VALID_LABELS:
        raise ValueError(f"label must be -1 or +1, got {label}")


class TrainingService:
    """
    Service for objective evaluation and Adam training.

    Handles:
    - Bag-level losses (hinge, squared) and their score derivatives
    - Mini-batch gradients (per-bag work optionally on a thread pool)
    - Adam updates with the L1 subgradient
    - The full training loop with checkpoints

    Dependencies:
    - NetworkService: Forward/backward passes
    - DatasetService: Standardizer fitting
    """

    def __init__(
        self,
        network_service: Optional[NetworkService] = None,
        dataset_service: Optional[DatasetService] = None,
        jobs: int = 1,
    ):
        """
        Initialize training service.

        Args:
            network_service: Forward/backward passes (creates default if not provided)
            dataset_service: Standardization (creates default if not provided)
            jobs: Workers for per-bag gradients inside one mini-batch
        """
        self.network_service = network_service or NetworkService()
        self.dataset_service = dataset_service or DatasetService()
        self.jobs = jobs

    # ------------------------------------------------------------------
    # Losses
    # ------------------------------------------------------------------

    @staticmethod
    def hinge_loss(score: float, label: int) -> Tuple[float, float]:
        """
        Hinge loss with margin 1.

        Returns:
            (max(0, 1 - label * score), d loss / d score)

        Examples:
            >>> TrainingService.hinge_loss(0.5, 1)
            (0.5, -1.0)
            >>> TrainingService.hinge_loss(2.0, 1)
            (0.0, 0.0)
        """
        _check_label(label)
        margin = label * score
        if margin < 1.0:
            return 1.0 - margin, float(-label)
        return 0.0, 0.0

    @staticmethod
    def squared_loss(score: float, label: int) -> Tuple[float, float]:
        """Squared error (score - label)^2 and its derivative."""
        _check_label(label)
        residual = score - label
        return residual * residual, 2.0 * residual

    def loss(self, kind: LossKind, score: float, label: int) -> Tuple[float, float]:
        if kind == LossKind.HINGE:
            return self.hinge_loss(score, label)
        if kind == LossKind.SQUARED:
            return self.squared_loss(score, label)
        raise ValueError(f"Unsupported loss: {kind}")

    # ------------------------------------------------------------------
    # Objective and gradients
    # ------------------------------------------------------------------

    def objective(
        self,
        net: Network,
        bags: Sequence[Bag],
        lam: float,
        loss: LossKind = LossKind.HINGE,
    ) -> float:
        """
        Mean bag loss plus lam times the L1 norm of all weight matrices.

        Bags are scored as given (no standardization).

        Raises:
            EmptyDatasetError: If bags is empty
        """
        if not bags:
            raise EmptyDatasetError("objective needs at least one bag")
        losses = [
            self.loss(loss, self.network_service.forward_bag(net, bag)[0], bag.label)[0]
            for bag in bags
        ]
        return math.fsum(losses) / len(losses) + lam * net.weight_l1()

    def bag_gradient(self, net: Network, bag: Bag, loss: LossKind = LossKind.HINGE) -> Tuple[Gradients, float]:
        """Loss gradient of one bag and its loss value."""
        score, trace = self.network_service.forward_bag(net, bag)
        value, dscore = self.loss(loss, score, bag.label)
        return self.network_service.backward_bag(net, trace, dscore), value

    def batch_gradient(
        self,
        net: Network,
        bags: Sequence[Bag],
        loss: LossKind = LossKind.HINGE,
        jobs: Optional[int] = None,
    ) -> Tuple[Gradients, float]:
        """
        Average loss gradient over a mini-batch.

        Per-bag gradients are summed in batch order and then divided by the
        batch size, whatever order the workers finish in.

        Returns:
            (averaged gradients, mean loss)

        Raises:
            EmptyDatasetError: If bags is empty
        """
        if not bags:
            raise EmptyDatasetError("mini-batch is empty")
        jobs = self.jobs if jobs is None else jobs
        results = run_ordered(lambda bag: self.bag_gradient(net, bag, loss), list(bags), jobs)
        total = reduce(lambda acc, grads: acc + grads, (grads for grads, _ in results))
        mean_loss = math.fsum(value for _, value in results) / len(results)
        return total.scaled(1.0 / len(results)), mean_loss

    # ------------------------------------------------------------------
    # Optimizer
    # ------------------------------------------------------------------

    @staticmethod
    def adam_step(
        net: Network,
        grads: Gradients,
        state: AdamState,
        config: TrainConfig,
    ) -> Tuple[Network, AdamState]:
        """
        One Adam update with bias correction.

        The L1 subgradient config.lam * sign(w) is added to the gradient of
        every weight matrix before the moment updates.

        Raises:
            ShapeMismatchError: If grads or state are not congruent with net
        """
        params = net.parameters()
        if not grads.is_congruent_with(net):
            raise ShapeMismatchError("gradients are not congruent with the network parameters")
        if len(state.first) != len(params) or any(
            m.shape != p.shape or v.shape != p.shape
            for m, v, p in zip(state.first, state.second, params)
        ):
            raise ShapeMismatchError("optimizer state is not congruent with the network parameters")

        t = state.t + 1
        first_correction = 1.0 - config.beta1 ** t
        second_correction = 1.0 - config.beta2 ** t

        new_params: List[np.ndarray] = []
        new_first: List[np.ndarray] = []
        new_second: List[np.ndarray] = []
        for param, grad, m, v, is_weight in zip(
            params, grads.arrays, state.first, state.second, net.weight_mask()
        ):
            if is_weight and config.lam > 0:
                grad = grad + config.lam * np.sign(param)
            m = config.beta1 * m + (1.0 - config.beta1) * grad
            v = config.beta2 * v + (1.0 - config.beta2) * grad * grad
            m_hat = m / first_correction
            v_hat = v / second_correction
            new_params.append(param - config.alpha * m_hat / (np.sqrt(v_hat) + config.epsilon))
            new_first.append(m)
            new_second.append(v)

        return net.with_parameters(new_params), AdamState(
            first=tuple(new_first), second=tuple(new_second), t=t
        )

    # ------------------------------------------------------------------
    # Training loop
    # ------------------------------------------------------------------

    def train(
        self,
        net: Network,
        dataset: MilDataset,
        config: TrainConfig,
        jobs: Optional[int] = None,
    ) -> Tuple[Network, TrainReport]:
        """
        Train a network for config.max_iterations mini-batch steps.

        Each epoch visits the bags in a fresh permutation drawn from a
        generator seeded with config.seed; an epoch ends with a short batch
        when the batch size does not divide the number of bags. The full
        training objective is recorded before the first step, every
        config.checkpoint_every steps and after the last step.

        Args:
            net: Initial network (its standardizer, if any, is replaced)
            dataset: Training bags
            config: Optimizer settings
            jobs: Workers for per-bag gradients (defaults to the service setting)

        Returns:
            (trained network, report). The network carries the fitted
            standardizer when config.standardize is set.

        Raises:
            DimensionMismatchError: If dimensions differ
        """
        if dataset.dim != net.input_dim:
            raise DimensionMismatchError(
                f"dataset has dimension {dataset.dim}, network expects {net.input_dim}"
            )

        standardizer = None
        if config.standardize:
            standardizer = self.dataset_service.fit_standardizer(dataset)
            dataset = self.dataset_service.apply_standardizer(standardizer, dataset)

        bags = dataset.bags
        rng = np.random.default_rng(config.seed)
        net = net.with_standardizer(None)
        state = AdamState.zeros_like(net)

        checkpoints = [Checkpoint(
            iteration=0,
            batch_objective=None,
            train_objective=self.objective(net, bags, config.lam, config.loss),
        )]
        logger.debug(f"Initial objective {checkpoints[0].train_objective:.6f}")

        order = np.arange(0)
        cursor = 0
        for iteration in range(1, config.max_iterations + 1):
            if cursor >= len(order):
                order = rng.permutation(len(bags))
                cursor = 0
            batch = [bags[i] for i in order[cursor:cursor + config.batch_size]]
            cursor += config.batch_size

            grads, batch_loss = self.batch_gradient(net, batch, config.loss, jobs)
            batch_objective = batch_loss + config.lam * net.weight_l1()
            net, state = self.adam_step(net, grads, state, config)

            if iteration % config.checkpoint_every == 0 or iteration == config.max_iterations:
                checkpoint = Checkpoint(
                    iteration=iteration,
                    batch_objective=batch_objective,
                    train_objective=self.objective(net, bags, config.lam, config.loss),
                )
                checkpoints.append(checkpoint)
                logger.debug(
                    f"Iteration {iteration}: objective {checkpoint.train_objective:.6f}",
                    extra={'iteration': iteration, 'batch_objective': batch_objective}
                )

        report = TrainReport(
            checkpoints=tuple(checkpoints),
            iterations=config.max_iterations,
            final_l1_norm=net.weight_l1(),
        )
        logger.info(
            f"Trained {config.max_iterations} iterations: objective "
            f"{report.initial_objective:.6f} -> {report.final_objective:.6f}",
            extra={'iterations': config.max_iterations, 'bags': len(bags)}
        )
        return net.with_standardizer(standardizer), report

"""
Gradient check service

Compares back-propagated gradients with central finite differences on
random (architecture, pooling, bag) cases.

Relative error of an entry is |a - n| / max(|a|, |n|, 1e-2), compared only
when max(|a|, |n|) > 1e-10. Scores are piecewise smooth: a whole case is
skipped when its base pass has a ReLU pre-activation or a max-pooling
top-two gap within 1e-4, and a single entry is skipped when one of its
perturbed passes flips a ReLU or moves a max-pooling argmax.
"""

import logging
from typing import Iterable, List, Optional, Tuple

import numpy as np

from milnet.domain.enums import Activation, ArchitectureKind, PoolKind
from milnet.domain.models import (
    Architecture,
    ForwardTrace,
    GradientCheckResult,
    Network,
    PoolCheckSummary,
)
from milnet.services.network_service import NetworkService
from milnet.utils.seeding import derive_seed, make_rng


logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 100
STEP = 1e-6
TOLERANCE = 1e-6
KINK_MARGIN = 1e-4
RELATIVE_FLOOR = 1e-2
MAGNITUDE_THRESHOLD = 1e-10
SABOTAGE_OFFSET = 1.0


class GradientCheckService:
    """
    Finite-difference gradient suite.

    Dependencies:
    - NetworkService: Forward/backward passes under test
    """

    def __init__(self, network_service: Optional[NetworkService] = None):
        self.network_service = network_service or NetworkService()

    def run(
        self,
        trials: int = DEFAULT_TRIALS,
        pools: Iterable[PoolKind] = tuple(PoolKind),
        seed: int = 0,
        sabotage: bool = False,
    ) -> GradientCheckResult:
        """
        Check trials random cases for every pooling kind.

        Args:
            trials: Cases per pooling kind
            pools: Pooling kinds to check
            seed: Seed of the case generator
            sabotage: Corrupt the analytic gradients (negative control)

        Returns:
            Per-pool summaries; passed iff the max relative error is below 1e-6
        """
        summaries = []
        for pool in pools:
            pool = PoolKind(pool)
            pool_index = list(PoolKind).index(pool)
            checked = excluded = excluded_cases = 0
            worst = 0.0
            for trial in range(trials):
                outcome = self.check_case(*self.random_case(pool, seed, pool_index, trial), sabotage=sabotage)
                if outcome is None:
                    excluded_cases += 1
                    continue
                case_checked, case_excluded, case_worst = outcome
                checked += case_checked
                excluded += case_excluded
                worst = max(worst, case_worst)

            summary = PoolCheckSummary(
                pool=pool,
                cases=trials,
                excluded_cases=excluded_cases,
                checked=checked,
                excluded=excluded,
                max_relative_error=worst,
            )
            summaries.append(summary)
            logger.info(
                f"Gradient check {pool.value}: max relative error {worst:.3e} "
                f"over {checked} entries ({excluded} entries, {excluded_cases} cases excluded)",
                extra={'pool': pool.value, 'trials': trials}
            )

        return GradientCheckResult(tolerance=TOLERANCE, summaries=tuple(summaries))

    def random_case(self, pool: PoolKind, seed: int, *indices: int) -> Tuple[Network, np.ndarray]:
        """
        Draw a random network and bag.

        d in 1..4, m in 1..5, an optional extra hidden layer on either side of
        the pooling, random biases and a bag of 1..6 instances. Max-pooling
        cases use the prior-nn architecture one time in four.
        """
        rng = make_rng(seed, *indices)
        dim = int(rng.integers(1, 5))
        embed_dim = int(rng.integers(1, 6))
        kind = ArchitectureKind.PROPOSED
        if pool == PoolKind.MAX and rng.random() < 0.25:
            kind = ArchitectureKind.PRIOR_NN
        pre_hidden = (int(rng.integers(1, 5)),) if rng.random() < 0.3 else ()
        post_hidden = ()
        if kind == ArchitectureKind.PROPOSED and rng.random() < 0.3:
            post_hidden = (int(rng.integers(1, 5)),)

        architecture = Architecture(
            kind=kind,
            input_dim=dim,
            embed_dim=embed_dim,
            pre_hidden=pre_hidden,
            post_hidden=post_hidden,
        )
        net = self.network_service.init_network(architecture, pool, derive_seed(seed, *indices))
        arrays = [
            param if is_weight else rng.normal(0.0, 0.5, size=param.shape)
            for param, is_weight in zip(net.parameters(), net.weight_mask())
        ]
        net = net.with_parameters(arrays)
        size = int(rng.integers(1, 7))
        return net, rng.standard_normal((size, dim))

    def check_case(
        self,
        net: Network,
        inputs: np.ndarray,
        sabotage: bool = False,
    ) -> Optional[Tuple[int, int, float]]:
        """
        Compare every parameter gradient of one case.

        Returns:
            (entries checked, entries excluded, max relative error), or None
            when the base pass sits within 1e-4 of a kink or tie
        """
        _, trace = self.network_service.forward_instances(net, inputs)
        if self._near_kink(net, trace):
            return None

        analytic = list(self.network_service.backward_bag(net, trace, 1.0).arrays)
        if sabotage:
            analytic[0] = analytic[0] + SABOTAGE_OFFSET

        base_pattern = self._pattern(net, trace)
        params = [p.copy() for p in net.parameters()]
        checked = excluded = 0
        worst = 0.0

        for index, param in enumerate(params):
            for position in np.ndindex(param.shape):
                scores: List[float] = []
                crossed = False
                for step in (STEP, -STEP):
                    perturbed = [p.copy() for p in params]
                    perturbed[index][position] += step
                    moved = net.with_parameters(perturbed)
                    score, moved_trace = self.network_service.forward_instances(moved, inputs)
                    if not self._same_pattern(base_pattern, self._pattern(moved, moved_trace)):
                        crossed = True
                        break
                    scores.append(score)
                if crossed:
                    excluded += 1
                    continue

                numeric = (scores[0] - scores[1]) / (2.0 * STEP)
                value = float(analytic[index][position])
                magnitude = max(abs(value), abs(numeric))
                if magnitude <= MAGNITUDE_THRESHOLD:
                    continue
                checked += 1
                worst = max(worst, abs(value - numeric) / max(magnitude, RELATIVE_FLOOR))

        return checked, excluded, worst

    @staticmethod
    def _near_kink(net: Network, trace: ForwardTrace) -> bool:
        layers = zip(net.layers, trace.pre_activations + trace.post_pre_activations)
        for layer, z in layers:
            if layer.activation == Activation.RELU and np.any(np.abs(z) < KINK_MARGIN):
                return True
        if net.pool == PoolKind.MAX:
            values = trace.activations[-1]
            if values.shape[0] >= 2:
                top_two = np.sort(values, axis=0)[-2:]
                if np.any(top_two[1] - top_two[0] < KINK_MARGIN):
                    return True
        return False

    @staticmethod
    def _pattern(net: Network, trace: ForwardTrace) -> List[np.ndarray]:
        """ReLU on/off masks of every layer plus the max-pooling argmax."""
        pattern = [
            z > 0
            for layer, z in zip(net.layers, trace.pre_activations + trace.post_pre_activations)
            if layer.activation == Activation.RELU
        ]
        if trace.argmax is not None:
            pattern.append(trace.argmax)
        return pattern

    @staticmethod
    def _same_pattern(first: List[np.ndarray], second: List[np.ndarray]) -> bool:
        return all(np.array_equal(a, b) for a, b in zip(first, second))

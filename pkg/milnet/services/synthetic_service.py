"""
Synthetic MIL generators

Two label regimes:

- witness: negative bags draw every instance from N(0, I); positive bags
  are identical except that 1..max(1, ceil(0.2 |b|)) instances are drawn
  from N(mu+, I) with |mu+| = separation. Max pooling fits this regime.
- distribution-shift: every instance comes from a two-component mixture
  with means +/- (separation / 2) along one direction; positive bags pick
  component A with probability 0.8, negative bags with 0.2. Mean pooling
  fits this regime.

Generation metadata records the witness positions (witness regime) or
the realised component-A fraction (distribution-shift regime) per bag.
"""

import logging
import math
from typing import Dict, List, Tuple

import numpy as np

from milnet.domain.enums import Regime
from milnet.domain.models import Bag, MilDataset, SynthSpec


logger = logging.getLogger(__name__)

# ceil(0.2 * size) computed in integers
WITNESS_DIVISOR = 5


def bag_id_for(label: int, index: int) -> str:
    """
    Identifier of the index-th generated bag of a class.

    Examples:
        >>> bag_id_for(1, 3)
        'pos-00003'
    """
    return f"{'pos' if label > 0 else 'neg'}-{index:05d}"


class SyntheticService:
    """Generator of synthetic MIL datasets; a pure function of the SynthSpec."""

    def generate_synthetic(self, spec: SynthSpec) -> MilDataset:
        """
        Generate a dataset with 2 * bags_per_class bags.

        Bags are generated negative-then-positive for each index, all from a
        single generator seeded with spec.seed.

        Args:
            spec: Validated synthetic specification

        Returns:
            Dataset whose metadata holds the regime and per-bag ground truth
        """
        rng = np.random.default_rng(spec.seed)
        direction = np.ones(spec.dim) / math.sqrt(spec.dim)
        lo, hi = spec.instances_per_bag

        bags: List[Bag] = []
        witnesses: Dict[str, Tuple[int, ...]] = {}
        fractions: Dict[str, float] = {}

        for index in range(spec.bags_per_class):
            for label in (-1, 1):
                bag_id = bag_id_for(label, index)
                size = int(rng.integers(lo, hi + 1))

                if spec.regime == Regime.WITNESS:
                    instances = rng.standard_normal((size, spec.dim))
                    if label == 1:
                        positions = self._witness_positions(rng, size)
                        shifted = rng.standard_normal((len(positions), spec.dim))
                        instances[positions] = shifted + spec.separation * direction
                        witnesses[bag_id] = tuple(int(p) for p in positions)
                else:
                    share = spec.positive_fraction if label == 1 else spec.negative_fraction
                    from_a = rng.random(size) < share
                    half = 0.5 * spec.separation * direction
                    centers = np.where(from_a[:, None], half, -half)
                    instances = rng.standard_normal((size, spec.dim)) + centers
                    fractions[bag_id] = float(from_a.mean())

                bags.append(Bag(id=bag_id, label=label, instances=instances))

        metadata = {"regime": spec.regime.value}
        if spec.regime == Regime.WITNESS:
            metadata["witness_indices"] = witnesses
        else:
            metadata["component_a_fraction"] = fractions

        logger.info(
            f"Generated {spec.regime.value} dataset: {len(bags)} bags, dim {spec.dim}",
            extra={'regime': spec.regime.value, 'seed': spec.seed, 'bags': len(bags)}
        )
        return MilDataset(bags=tuple(bags), dim=spec.dim, metadata=metadata)

    @staticmethod
    def _witness_positions(rng: np.random.Generator, size: int) -> np.ndarray:
        """Sorted positions of 1..max(1, ceil(0.2 * size)) witness instances."""
        most = max(1, -(-size // WITNESS_DIVISOR))
        count = int(rng.integers(1, most + 1))
        return np.sort(rng.choice(size, size=count, replace=False))

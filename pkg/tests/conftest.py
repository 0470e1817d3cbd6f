"""
Shared pytest fixtures and configuration

Fixtures available to all tests across the test suite.
"""

import numpy as np
import pytest

from milnet.config.testing import TestingConfig
from milnet.domain.enums import Activation, ArchitectureKind, PoolKind, Regime
from milnet.domain.models import Architecture, Bag, Layer, MilDataset, Network, SynthSpec
from milnet.services.network_service import NetworkService
from milnet.services.synthetic_service import SyntheticService


@pytest.fixture
def settings():
    """Testing configuration class."""
    return TestingConfig


@pytest.fixture
def tiny_dataset():
    """Two bags in d=2: A (positive, two instances) and B (negative, one instance)."""
    return MilDataset(
        bags=(
            Bag(id="A", label=1, instances=[[0.5, 1.25], [0.0, 2.0]]),
            Bag(id="B", label=-1, instances=[[3.0, 1.0]]),
        ),
        dim=2,
    )


@pytest.fixture
def balanced_dataset():
    """20 bags in d=3, 10 per class, bag sizes 1..4."""
    rng = np.random.default_rng(3)
    bags = []
    for index in range(10):
        for label in (-1, 1):
            size = int(rng.integers(1, 5))
            instances = rng.standard_normal((size, 3)) + (1.0 if label == 1 else -1.0)
            bags.append(Bag(id=f"{'p' if label == 1 else 'n'}{index:02d}", label=label, instances=instances))
    return MilDataset(bags=tuple(bags), dim=3)


@pytest.fixture
def witness_spec():
    """Small, well separated witness problem."""
    return SynthSpec(
        regime=Regime.WITNESS,
        dim=3,
        bags_per_class=15,
        instances_per_bag=(3, 6),
        seed=11,
        separation=6.0,
    )


@pytest.fixture
def witness_dataset(witness_spec):
    return SyntheticService().generate_synthetic(witness_spec)


@pytest.fixture
def network_service():
    return NetworkService(probe_bags=TestingConfig.PROBE_BAGS)


@pytest.fixture
def small_network(network_service):
    """Proposed network, d=3, m=4, mean pooling."""
    architecture = Architecture(kind=ArchitectureKind.PROPOSED, input_dim=3, embed_dim=4)
    return network_service.init_network(architecture, PoolKind.MEAN, seed=5)


@pytest.fixture
def identity_network():
    """d=2, identity first layer, zero biases, mean pooling, output weights (1, 1)."""
    architecture = Architecture(kind=ArchitectureKind.PROPOSED, input_dim=2, embed_dim=2)
    return Network(
        architecture=architecture,
        pool=PoolKind.MEAN,
        pre_layers=(Layer(weights=np.eye(2), bias=np.zeros(2), activation=Activation.RELU),),
        post_layers=(Layer(weights=[[1.0, 1.0]], bias=[0.0], activation=Activation.LINEAR),),
    )

"""
Network service

Forward and backward passes of the MIL network over variable-size bags:

    score = f(g({k(x, theta)} for x in bag))

k is the stack of per-instance layers, g the pooling function and f the
layers after pooling. The prior-nn baseline is the special case where the
per-instance stack ends in the scalar output unit and g is max.
"""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np

from milnet.domain.enums import Activation, ArchitectureKind, PoolKind
from milnet.domain.errors import (
    DimensionMismatchError,
    InvalidArchitectureError,
    ShapeMismatchError,
    StaleTraceError,
)
from milnet.domain.models import (
    Architecture,
    Bag,
    ForwardTrace,
    Gradients,
    Layer,
    MilDataset,
    Network,
    ScoredBag,
)
from milnet.utils.activations import activate, derivative
from milnet.utils.pooling import argmax_per_column, pool_backward, pool_forward
from milnet.utils.seeding import make_rng


logger = logging.getLogger(__name__)

DEFAULT_PROBE_BAGS = 64
PROBE_MAX_INSTANCES = 10


def _instance_affine(inputs: np.ndarray, layer: Layer) -> np.ndarray:
    """
    Row-wise affine map, shape (n, fan_out).

    Each output entry is reduced on its own, so a row's result does not
    depend on its position in the bag.
    """
    return (inputs[:, None, :] * layer.weights[None, :, :]).sum(axis=2) + layer.bias


class NetworkService:
    """
    Service for building and evaluating MIL networks.

    Handles:
    - He-normal initialization
    - Forward pass with trace, backward pass to parameter gradients
    - Scoring datasets (applying the attached standardizer)
    - The prior-nn special-case equivalence check
    """

    def __init__(self, probe_bags: int = DEFAULT_PROBE_BAGS, probe_seed: int = 0):
        """
        Initialize network service.

        Args:
            probe_bags: Number of random bags used by equivalence_check
            probe_seed: Seed of the probe bag set
        """
        self._probe_bags = probe_bags
        self._probe_seed = probe_seed

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    def init_network(self, architecture: Architecture, pool: PoolKind, seed: int) -> Network:
        """
        Create a network with He-normal weights and zero biases.

        Weights are drawn i.i.d. from N(0, 2 / fan_in), layer by layer in
        forward order, from one generator seeded with seed.

        Raises:
            InvalidArchitectureError: If the pooling kind is not allowed for the architecture
        """
        if architecture.kind == ArchitectureKind.PRIOR_NN and pool != PoolKind.MAX:
            raise InvalidArchitectureError(f"prior-nn pools with max only, got {pool.value}")

        rng = np.random.default_rng(seed)
        pre_plan, post_plan = architecture.layer_plan()

        def build(plan: Sequence[Tuple[int, int, Activation]]) -> Tuple[Layer, ...]:
            return tuple(
                Layer(
                    weights=rng.normal(0.0, math.sqrt(2.0 / fan_in), size=(fan_out, fan_in)),
                    bias=np.zeros(fan_out),
                    activation=activation,
                )
                for fan_in, fan_out, activation in plan
            )

        pre_layers = build(pre_plan)
        post_layers = build(post_plan)
        return Network(architecture=architecture, pool=pool, pre_layers=pre_layers, post_layers=post_layers)

    # ------------------------------------------------------------------
    # Forward / backward
    # ------------------------------------------------------------------

    def forward_bag(self, net: Network, bag: Bag) -> Tuple[float, ForwardTrace]:
        """
        Score one bag.

        Args:
            net: Network (its standardizer is not applied here)
            bag: Bag whose instance dimension equals the network input dim

        Returns:
            (score, trace) where trace holds everything backward_bag needs

        Raises:
            DimensionMismatchError: If dimensions differ
        """
        if bag.dim != net.input_dim:
            raise DimensionMismatchError(
                f"Bag '{bag.id}' has dimension {bag.dim}, network expects {net.input_dim}"
            )
        return self.forward_instances(net, bag.instances)

    def forward_instances(self, net: Network, inputs: np.ndarray) -> Tuple[float, ForwardTrace]:
        """Forward pass over a raw (n, d) instance array."""
        pre_activations: List[np.ndarray] = []
        activations: List[np.ndarray] = []
        hidden = inputs
        for layer in net.pre_layers:
            z = _instance_affine(hidden, layer)
            hidden = activate(layer.activation, z)
            pre_activations.append(z)
            activations.append(hidden)

        argmax = argmax_per_column(hidden) if net.pool == PoolKind.MAX else None
        pooled = pool_forward(hidden, net.pool)

        post_pre_activations: List[np.ndarray] = []
        post_activations: List[np.ndarray] = []
        vector = pooled
        for layer in net.post_layers:
            z = layer.weights @ vector + layer.bias
            vector = activate(layer.activation, z)
            post_pre_activations.append(z)
            post_activations.append(vector)

        score = float(vector[0])
        trace = ForwardTrace(
            network=net,
            inputs=inputs,
            pre_activations=tuple(pre_activations),
            activations=tuple(activations),
            pooled=pooled,
            argmax=argmax,
            post_pre_activations=tuple(post_pre_activations),
            post_activations=tuple(post_activations),
            score=score,
        )
        return score, trace

    def backward_bag(self, net: Network, trace: ForwardTrace, dscore: float) -> Gradients:
        """
        Gradients of dscore * score w.r.t. every parameter.

        Args:
            net: Network the trace was produced with
            trace: Result of forward_bag(net, bag)
            dscore: Upstream derivative of the loss w.r.t. the score

        Returns:
            Gradients in Network.parameters() order

        Raises:
            StaleTraceError: If the trace belongs to another network
        """
        if trace.network is not net:
            raise StaleTraceError("trace was produced by a different network")

        post_grads: List[Tuple[np.ndarray, np.ndarray]] = []
        upstream = np.array([float(dscore)])
        for i in reversed(range(len(net.post_layers))):
            layer = net.post_layers[i]
            delta = upstream * derivative(layer.activation, trace.post_pre_activations[i])
            layer_input = trace.post_activations[i - 1] if i > 0 else trace.pooled
            post_grads.append((np.outer(delta, layer_input), delta))
            upstream = layer.weights.T @ delta
        post_grads.reverse()

        instance_grad = pool_backward(trace.activations[-1], net.pool, upstream, argmax=trace.argmax)

        pre_grads: List[Tuple[np.ndarray, np.ndarray]] = []
        for i in reversed(range(len(net.pre_layers))):
            layer = net.pre_layers[i]
            delta = instance_grad * derivative(layer.activation, trace.pre_activations[i])
            layer_input = trace.activations[i - 1] if i > 0 else trace.inputs
            pre_grads.append((delta.T @ layer_input, delta.sum(axis=0)))
            instance_grad = delta @ layer.weights
        pre_grads.reverse()

        arrays: List[np.ndarray] = []
        for weights_grad, bias_grad in pre_grads + post_grads:
            arrays.extend((weights_grad, bias_grad))
        return Gradients(arrays=tuple(arrays))

    # ------------------------------------------------------------------
    # Scoring
    # ------------------------------------------------------------------

    def score_dataset(self, net: Network, dataset: MilDataset) -> List[ScoredBag]:
        """
        Score every bag, standardizing first when the network carries a standardizer.

        Raises:
            DimensionMismatchError: If dimensions differ
        """
        if dataset.dim != net.input_dim:
            raise DimensionMismatchError(
                f"dataset has dimension {dataset.dim}, network expects {net.input_dim}"
            )
        scored = []
        for bag in dataset:
            inputs = bag.instances
            if net.standardizer is not None:
                inputs = net.standardizer.transform(inputs)
            score, _ = self.forward_instances(net, inputs)
            scored.append(ScoredBag(bag_id=bag.id, label=bag.label, score=score))
        return scored

    # ------------------------------------------------------------------
    # Prior-nn special case
    # ------------------------------------------------------------------

    @staticmethod
    def special_case_of(prior: Network, pool: PoolKind = PoolKind.MAX) -> Network:
        """
        Proposed-form network sharing the per-instance weights of a prior-nn network.

        The embedding has dimension m = 1 (the scalar instance score) and
        there are no layers after pooling (f is the identity).

        Raises:
            InvalidArchitectureError: If prior is not a prior-nn network
        """
        arch = prior.architecture
        if arch.kind != ArchitectureKind.PRIOR_NN:
            raise InvalidArchitectureError("special case is defined for prior-nn networks")
        proposed = Architecture(
            kind=ArchitectureKind.PROPOSED,
            input_dim=arch.input_dim,
            embed_dim=1,
            pre_hidden=arch.pre_hidden + (arch.embed_dim,),
        )
        return Network(architecture=proposed, pool=pool, pre_layers=prior.pre_layers, post_layers=())

    def equivalence_check(self, prior: Network, candidate: Optional[Network] = None) -> bool:
        """
        Check that a proposed-form network reproduces the prior-nn scores.

        Args:
            prior: prior-nn network
            candidate: Proposed-form network; defaults to special_case_of(prior)

        Returns:
            True iff both networks give identical scores on every probe bag

        Raises:
            ShapeMismatchError: If the candidate does not pool a scalar with identity f,
                or its per-instance layers are not shaped like the prior's
        """
        if candidate is None:
            candidate = self.special_case_of(prior)

        if candidate.pooled_dim != 1 or candidate.post_layers:
            raise ShapeMismatchError(
                f"candidate pools {candidate.pooled_dim}-d vectors with "
                f"{len(candidate.post_layers)} layers after pooling; expected m=1 and identity f"
            )
        prior_shapes = [p.shape for p in prior.parameters()]
        candidate_shapes = [p.shape for p in candidate.parameters()]
        if prior_shapes != candidate_shapes:
            raise ShapeMismatchError("candidate per-instance layers differ in shape from prior-nn")

        rng = make_rng(self._probe_seed)
        for _ in range(self._probe_bags):
            size = int(rng.integers(1, PROBE_MAX_INSTANCES + 1))
            inputs = rng.standard_normal((size, prior.input_dim))
            prior_score, _ = self.forward_instances(prior, inputs)
            candidate_score, _ = self.forward_instances(candidate, inputs)
            if prior_score != candidate_score:
                logger.debug(
                    f"Equivalence broken: {prior_score!r} != {candidate_score!r}",
                    extra={'instances': size}
                )
                return False
        return True

"""
Domain models for milnet

Core entities of the multiple-instance learning problem: bags and datasets,
split plans, synthetic-data specifications, network parameters and the
values exchanged between training and evaluation.

All models are immutable after construction. Arrays are copied to float64
and marked read-only, so a model can be shared between concurrent workers.
"""

import math
from dataclasses import dataclass, field, replace
from types import MappingProxyType
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from milnet.domain.enums import Activation, ArchitectureKind, LossKind, PoolKind, Regime
from milnet.domain.errors import (
    DatasetConsistencyError,
    DimensionMismatchError,
    EmptyDatasetError,
    InvalidArchitectureError,
    InvalidConfigError,
    InvalidSpecError,
    ShapeMismatchError,
)


VALID_LABELS = (-1, 1)


def frozen_array(values: Any, ndim: Optional[int] = None) -> np.ndarray:
    """Copy values into a read-only float64 array."""
    array = np.array(values, dtype=np.float64)
    if ndim is not None and array.ndim != ndim:
        raise ShapeMismatchError(f"expected a {ndim}-d array, got shape {array.shape}")
    array.setflags(write=False)
    return array


# ============================================================================
# DATA
# ============================================================================

@dataclass(frozen=True, eq=False)
class Bag:
    """
    One MIL sample.

    Attributes:
        id: Unique bag identifier; non-empty, no leading or trailing whitespace
        label: Bag label, -1 or +1 (instance labels are never observed)
        instances: Array of shape (n, d), one row per instance, n >= 1
    """
    id: str
    label: int
    instances: np.ndarray

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id or self.id != self.id.strip():
            raise ValueError(f"Bag id must be non-empty without surrounding whitespace, got {self.id!r}")
        if self.label not in VALID_LABELS:
            raise ValueError(f"Bag '{self.id}': label must be -1 or +1, got {self.label}")
        instances = frozen_array(self.instances)
        if instances.ndim != 2:
            raise DimensionMismatchError(
                f"Bag '{self.id}': instances must be a 2-d array, got shape {instances.shape}"
            )
        if instances.shape[0] == 0:
            raise EmptyDatasetError(f"Bag '{self.id}' has no instances")
        if not np.all(np.isfinite(instances)):
            raise ValueError(f"Bag '{self.id}' holds non-finite feature values")
        object.__setattr__(self, "label", int(self.label))
        object.__setattr__(self, "instances", instances)

    @property
    def size(self) -> int:
        """Number of instances |b|."""
        return int(self.instances.shape[0])

    @property
    def dim(self) -> int:
        """Instance dimension d."""
        return int(self.instances.shape[1])

    def with_instances(self, instances: Any) -> "Bag":
        """Return a copy carrying different instances."""
        return Bag(id=self.id, label=self.label, instances=instances)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bag):
            return NotImplemented
        return (
            self.id == other.id
            and self.label == other.label
            and np.array_equal(self.instances, other.instances)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class MilDataset:
    """
    A collection of bags sharing one instance dimension.

    Attributes:
        bags: Bags in file (or generation) order
        dim: Instance dimension d
        metadata: Free-form generation metadata (not part of equality)
    """
    bags: Tuple[Bag, ...]
    dim: int
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        bags = tuple(self.bags)
        if not bags:
            raise EmptyDatasetError("dataset holds no bags")
        if self.dim < 1:
            raise DimensionMismatchError(f"dataset dimension must be positive, got {self.dim}")

        index: Dict[str, int] = {}
        for position, bag in enumerate(bags):
            if bag.id in index:
                raise DatasetConsistencyError(f"duplicate bag id '{bag.id}'", bag_id=bag.id)
            if bag.dim != self.dim:
                raise DimensionMismatchError(
                    f"Bag '{bag.id}' has dimension {bag.dim}, dataset has {self.dim}"
                )
            index[bag.id] = position

        object.__setattr__(self, "bags", bags)
        object.__setattr__(self, "metadata", MappingProxyType(dict(self.metadata)))
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.bags)

    def __iter__(self) -> Iterator[Bag]:
        return iter(self.bags)

    @property
    def bag_ids(self) -> Tuple[str, ...]:
        """Bag ids in dataset order."""
        return tuple(bag.id for bag in self.bags)

    @property
    def labels(self) -> np.ndarray:
        """Bag labels in dataset order."""
        return np.array([bag.label for bag in self.bags], dtype=np.int64)

    def class_counts(self) -> Dict[int, int]:
        """Number of bags per label."""
        counts = {label: 0 for label in VALID_LABELS}
        for bag in self.bags:
            counts[bag.label] += 1
        return counts

    def get(self, bag_id: str) -> Bag:
        """
        Get a bag by id.

        Raises:
            KeyError: If the id is unknown
        """
        return self.bags[self._index[bag_id]]  # type: ignore[attr-defined]

    def subset(self, bag_ids: Sequence[str]) -> "MilDataset":
        """
        Select bags by id.

        The result is ordered by bag id, so it depends only on which bags
        are selected and not on the order of the source dataset.
        """
        return MilDataset(bags=tuple(self.get(i) for i in sorted(bag_ids)), dim=self.dim)

    def map_instances(self, transform) -> "MilDataset":
        """Apply transform(instances) -> instances to every bag."""
        return MilDataset(
            bags=tuple(bag.with_instances(transform(bag.instances)) for bag in self.bags),
            dim=self.dim,
            metadata=self.metadata,
        )

    def instance_matrix(self) -> np.ndarray:
        """All instances of all bags stacked into one (N, d) array."""
        return np.vstack([bag.instances for bag in self.bags])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MilDataset):
            return NotImplemented
        return self.dim == other.dim and self.bags == other.bags

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class Standardizer:
    """
    Per-feature z-scoring parameters.

    Attributes:
        mean: Feature means, length d
        scale: Feature standard deviations, length d, strictly positive
    """
    mean: np.ndarray
    scale: np.ndarray

    def __post_init__(self):
        mean = frozen_array(self.mean, ndim=1)
        scale = frozen_array(self.scale, ndim=1)
        if mean.shape != scale.shape:
            raise DimensionMismatchError(
                f"mean has length {mean.shape[0]}, scale has length {scale.shape[0]}"
            )
        if not np.all(scale > 0):
            raise ValueError("standardizer scale entries must be positive")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "scale", scale)

    @property
    def dim(self) -> int:
        return int(self.mean.shape[0])

    @classmethod
    def identity(cls, dim: int) -> "Standardizer":
        """Standardizer that leaves features unchanged."""
        return cls(mean=np.zeros(dim), scale=np.ones(dim))

    def transform(self, instances: np.ndarray) -> np.ndarray:
        """
        Z-score an (n, d) instance array.

        Raises:
            DimensionMismatchError: If the instance dimension is not d
        """
        if instances.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"standardizer has dimension {self.dim}, instances have {instances.shape[-1]}"
            )
        return (instances - self.mean) / self.scale

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Standardizer):
            return NotImplemented
        return np.array_equal(self.mean, other.mean) and np.array_equal(self.scale, other.scale)

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class SplitPlan:
    """
    Explicit cross-validation assignment.

    Attributes:
        repeats: Number of repetitions
        folds: Number of folds per repetition
        assignment: (repetition, bag id) -> fold index
    """
    repeats: int
    folds: int
    assignment: Mapping[Tuple[int, str], int]

    def __post_init__(self):
        if self.repeats < 1 or self.folds < 1:
            raise InvalidConfigError(
                f"split plan needs positive repeats and folds, got {self.repeats}x{self.folds}"
            )
        assignment = dict(self.assignment)
        per_repetition: Dict[int, set] = {r: set() for r in range(self.repeats)}
        for (repetition, bag_id), fold in assignment.items():
            if repetition not in per_repetition:
                raise InvalidConfigError(f"repetition {repetition} outside [0, {self.repeats})")
            if not 0 <= fold < self.folds:
                raise InvalidConfigError(f"fold {fold} outside [0, {self.folds})")
            per_repetition[repetition].add(bag_id)

        reference = per_repetition[0]
        if not reference:
            raise EmptyDatasetError("split plan assigns no bags")
        for repetition, ids in per_repetition.items():
            if ids != reference:
                raise InvalidConfigError(
                    f"repetition {repetition} does not assign the same bags as repetition 0"
                )

        object.__setattr__(self, "assignment", MappingProxyType(assignment))
        object.__setattr__(self, "_bag_ids", tuple(sorted(reference)))

    @property
    def bag_ids(self) -> Tuple[str, ...]:
        """All bag ids covered by the plan, sorted."""
        return self._bag_ids  # type: ignore[attr-defined]

    def fold_of(self, repetition: int, bag_id: str) -> int:
        return self.assignment[(repetition, bag_id)]

    def test_ids(self, repetition: int, fold: int) -> Tuple[str, ...]:
        """Bag ids held out in (repetition, fold), sorted."""
        return tuple(i for i in self.bag_ids if self.assignment[(repetition, i)] == fold)

    def train_ids(self, repetition: int, fold: int) -> Tuple[str, ...]:
        """Bag ids used for training in (repetition, fold), sorted."""
        return tuple(i for i in self.bag_ids if self.assignment[(repetition, i)] != fold)

    def records(self) -> List[Tuple[int, int, str]]:
        """(repetition, fold, bag_id) rows sorted for serialization."""
        return sorted((r, f, i) for (r, i), f in self.assignment.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SplitPlan):
            return NotImplemented
        return (
            self.repeats == other.repeats
            and self.folds == other.folds
            and dict(self.assignment) == dict(other.assignment)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class SynthSpec:
    """
    Specification of a synthetic MIL problem.

    Attributes:
        regime: Witness (single-instance evidence) or distribution shift
        dim: Instance dimension d
        bags_per_class: Number of bags generated for each label
        instances_per_bag: Inclusive range (lo, hi) of bag sizes
        seed: Seed of the generator
        separation: Distance between the component means
        positive_fraction: Component-A probability in positive bags
        negative_fraction: Component-A probability in negative bags
    """
    regime: Regime
    dim: int
    bags_per_class: int
    instances_per_bag: Tuple[int, int]
    seed: int
    separation: float
    positive_fraction: float = 0.8
    negative_fraction: float = 0.2

    def __post_init__(self):
        lo, hi = self.instances_per_bag
        if lo < 1:
            raise InvalidSpecError(f"instances per bag must be at least 1, got {lo}")
        if hi < lo:
            raise InvalidSpecError(f"instance range [{lo}, {hi}] is empty")
        if not (math.isfinite(self.separation) and self.separation > 0):
            raise InvalidSpecError(f"separation must be positive, got {self.separation}")
        if self.dim < 1:
            raise InvalidSpecError(f"dim must be positive, got {self.dim}")
        if self.bags_per_class < 1:
            raise InvalidSpecError(f"bags per class must be positive, got {self.bags_per_class}")
        if self.seed < 0:
            raise InvalidSpecError(f"seed must be unsigned, got {self.seed}")
        for name in ("positive_fraction", "negative_fraction"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidSpecError(f"{name} must lie in [0, 1], got {value}")
        object.__setattr__(self, "regime", Regime(self.regime))
        object.__setattr__(self, "instances_per_bag", (int(lo), int(hi)))


# ============================================================================
# NETWORK
# ============================================================================

@dataclass(frozen=True)
class Architecture:
    """
    Network topology.

    Attributes:
        kind: Proposed (pool inside) or prior-nn (pool the scalar output)
        input_dim: Instance dimension d
        embed_dim: Width m of the last ReLU layer before pooling
        pre_hidden: Widths of extra ReLU layers before the embedding layer
        post_hidden: Widths of extra ReLU layers between pooling and the output unit
    """
    kind: ArchitectureKind
    input_dim: int
    embed_dim: int
    pre_hidden: Tuple[int, ...] = ()
    post_hidden: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", ArchitectureKind(self.kind))
        object.__setattr__(self, "pre_hidden", tuple(int(w) for w in self.pre_hidden))
        object.__setattr__(self, "post_hidden", tuple(int(w) for w in self.post_hidden))
        if self.input_dim < 1:
            raise InvalidArchitectureError(f"input dim must be positive, got {self.input_dim}")
        if self.embed_dim < 1:
            raise InvalidArchitectureError(f"embed dim must be positive, got {self.embed_dim}")
        if any(w < 1 for w in self.pre_hidden + self.post_hidden):
            raise InvalidArchitectureError("hidden layer widths must be positive")
        if self.kind == ArchitectureKind.PRIOR_NN and self.post_hidden:
            raise InvalidArchitectureError("prior-nn has no layers after pooling")

    def layer_plan(self) -> Tuple[List[Tuple[int, int, Activation]], List[Tuple[int, int, Activation]]]:
        """
        Layer shapes as (fan_in, fan_out, activation) before and after pooling.

        Examples:
            >>> pre, post = Architecture(ArchitectureKind.PROPOSED, 4, 8).layer_plan()
            >>> [(a, b) for a, b, _ in pre], [(a, b) for a, b, _ in post]
            ([(4, 8)], [(8, 1)])
        """
        if self.kind == ArchitectureKind.PROPOSED:
            pre_widths = [self.input_dim, *self.pre_hidden, self.embed_dim]
            pre = [(a, b, Activation.RELU) for a, b in zip(pre_widths, pre_widths[1:])]
            post_widths = [self.embed_dim, *self.post_hidden, 1]
            post = [
                (a, b, Activation.RELU if i < len(post_widths) - 2 else Activation.LINEAR)
                for i, (a, b) in enumerate(zip(post_widths, post_widths[1:]))
            ]
            return pre, post

        widths = [self.input_dim, *self.pre_hidden, self.embed_dim, 1]
        pre = [
            (a, b, Activation.RELU if i < len(widths) - 2 else Activation.LINEAR)
            for i, (a, b) in enumerate(zip(widths, widths[1:]))
        ]
        return pre, []


@dataclass(frozen=True, eq=False)
class Layer:
    """
    Affine layer followed by an activation.

    Attributes:
        weights: Matrix of shape (fan_out, fan_in)
        bias: Vector of length fan_out
        activation: Transfer function
    """
    weights: np.ndarray
    bias: np.ndarray
    activation: Activation

    def __post_init__(self):
        weights = frozen_array(self.weights, ndim=2)
        bias = frozen_array(self.bias, ndim=1)
        if bias.shape[0] != weights.shape[0]:
            raise ShapeMismatchError(
                f"bias length {bias.shape[0]} does not match {weights.shape[0]} weight rows"
            )
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bias", bias)
        object.__setattr__(self, "activation", Activation(self.activation))

    @property
    def rows(self) -> int:
        return int(self.weights.shape[0])

    @property
    def cols(self) -> int:
        return int(self.weights.shape[1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Layer):
            return NotImplemented
        return (
            self.activation == other.activation
            and np.array_equal(self.weights, other.weights)
            and np.array_equal(self.bias, other.bias)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class Network:
    """
    MIL network: per-instance layers, pooling, post-pool classifier.

    Parameters are ordered as [W, b] per layer, pre-pool layers first.

    Attributes:
        architecture: Topology the network was built from
        pool: Pooling function
        pre_layers: Layers applied to every instance
        post_layers: Layers applied to the pooled vector (may be empty)
        standardizer: Feature standardizer fitted during training, if any
    """
    architecture: Architecture
    pool: PoolKind
    pre_layers: Tuple[Layer, ...]
    post_layers: Tuple[Layer, ...] = ()
    standardizer: Optional[Standardizer] = None

    def __post_init__(self):
        pre_layers = tuple(self.pre_layers)
        post_layers = tuple(self.post_layers)
        object.__setattr__(self, "pre_layers", pre_layers)
        object.__setattr__(self, "post_layers", post_layers)
        object.__setattr__(self, "pool", PoolKind(self.pool))

        if not pre_layers:
            raise InvalidArchitectureError("network needs at least one layer before pooling")
        if pre_layers[0].cols != self.architecture.input_dim:
            raise ShapeMismatchError(
                f"first layer expects {pre_layers[0].cols} inputs, "
                f"architecture has input dim {self.architecture.input_dim}"
            )
        layers = pre_layers + post_layers
        for before, after in zip(layers, layers[1:]):
            if after.cols != before.rows:
                raise ShapeMismatchError(
                    f"layer with {before.rows} outputs feeds a layer expecting {after.cols}"
                )
        if layers[-1].rows != 1:
            raise ShapeMismatchError(f"network must end in one output, got {layers[-1].rows}")

        if self.architecture.kind == ArchitectureKind.PRIOR_NN:
            if self.pool != PoolKind.MAX:
                raise InvalidArchitectureError("prior-nn pools with max only")
            if post_layers:
                raise InvalidArchitectureError("prior-nn has no layers after pooling")

        if self.standardizer is not None and self.standardizer.dim != self.architecture.input_dim:
            raise DimensionMismatchError(
                f"standardizer dim {self.standardizer.dim} does not match "
                f"input dim {self.architecture.input_dim}"
            )

    @property
    def layers(self) -> Tuple[Layer, ...]:
        return self.pre_layers + self.post_layers

    @property
    def input_dim(self) -> int:
        return self.architecture.input_dim

    @property
    def pooled_dim(self) -> int:
        """Dimension of the pooled vector."""
        return self.pre_layers[-1].rows

    def parameters(self) -> Tuple[np.ndarray, ...]:
        """All parameter arrays, [W, b] per layer."""
        arrays: List[np.ndarray] = []
        for layer in self.layers:
            arrays.extend((layer.weights, layer.bias))
        return tuple(arrays)

    def weight_mask(self) -> Tuple[bool, ...]:
        """True for weight matrices, False for biases (parameter order)."""
        return tuple(i % 2 == 0 for i in range(2 * len(self.layers)))

    def with_parameters(self, arrays: Sequence[np.ndarray]) -> "Network":
        """
        Return a network with the same topology and new parameter values.

        Raises:
            ShapeMismatchError: If arrays are not congruent with parameters()
        """
        current = self.parameters()
        if len(arrays) != len(current):
            raise ShapeMismatchError(f"expected {len(current)} arrays, got {len(arrays)}")
        for new, old in zip(arrays, current):
            if np.shape(new) != old.shape:
                raise ShapeMismatchError(f"expected shape {old.shape}, got {np.shape(new)}")

        layers = [
            Layer(weights=arrays[2 * i], bias=arrays[2 * i + 1], activation=layer.activation)
            for i, layer in enumerate(self.layers)
        ]
        split = len(self.pre_layers)
        return replace(self, pre_layers=tuple(layers[:split]), post_layers=tuple(layers[split:]))

    def with_standardizer(self, standardizer: Optional[Standardizer]) -> "Network":
        return replace(self, standardizer=standardizer)

    def weight_l1(self) -> float:
        """Sum of absolute values of all weight-matrix entries (biases excluded)."""
        return math.fsum(float(np.abs(layer.weights).sum()) for layer in self.layers)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.architecture == other.architecture
            and self.pool == other.pool
            and self.pre_layers == other.pre_layers
            and self.post_layers == other.post_layers
            and self.standardizer == other.standardizer
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True)
class NetworkTemplate:
    """
    Architecture choices fixed for an experiment; the embed dim comes from the grid.

    Attributes:
        kind: Architecture kind
        pool: Pooling kind (prior-nn requires max)
        pre_hidden: Extra ReLU widths before the embedding layer
        post_hidden: Extra ReLU widths after pooling
    """
    kind: ArchitectureKind = ArchitectureKind.PROPOSED
    pool: PoolKind = PoolKind.MEAN
    pre_hidden: Tuple[int, ...] = ()
    post_hidden: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", ArchitectureKind(self.kind))
        object.__setattr__(self, "pool", PoolKind(self.pool))
        if self.kind == ArchitectureKind.PRIOR_NN and self.pool != PoolKind.MAX:
            raise InvalidArchitectureError(
                f"prior-nn pools with max only, got {self.pool.value}"
            )

    def architecture(self, input_dim: int, embed_dim: int) -> Architecture:
        return Architecture(
            kind=self.kind,
            input_dim=input_dim,
            embed_dim=embed_dim,
            pre_hidden=self.pre_hidden,
            post_hidden=self.post_hidden,
        )


@dataclass(frozen=True, eq=False)
class ForwardTrace:
    """
    Intermediate values of one forward pass, kept for back-propagation.

    Attributes:
        network: Network that produced the trace
        inputs: Bag instances, shape (n, d)
        pre_activations: Per pre-pool layer, shape (n, fan_out)
        activations: Per pre-pool layer, shape (n, fan_out)
        pooled: Pooled vector of length m
        argmax: Instance index of the maximum per pooled coordinate (max pooling only)
        post_pre_activations: Per post-pool layer, shape (fan_out,)
        post_activations: Per post-pool layer, shape (fan_out,)
        score: Final network output
    """
    network: Network
    inputs: np.ndarray
    pre_activations: Tuple[np.ndarray, ...]
    activations: Tuple[np.ndarray, ...]
    pooled: np.ndarray
    argmax: Optional[np.ndarray]
    post_pre_activations: Tuple[np.ndarray, ...]
    post_activations: Tuple[np.ndarray, ...]
    score: float


@dataclass(frozen=True, eq=False)
class Gradients:
    """Parameter-shaped arrays, same order as Network.parameters()."""
    arrays: Tuple[np.ndarray, ...]

    @classmethod
    def zeros_like(cls, network: Network) -> "Gradients":
        return cls(arrays=tuple(np.zeros_like(p) for p in network.parameters()))

    def is_congruent_with(self, network: Network) -> bool:
        params = network.parameters()
        return len(params) == len(self.arrays) and all(
            g.shape == p.shape for g, p in zip(self.arrays, params)
        )

    def __add__(self, other: "Gradients") -> "Gradients":
        if len(other.arrays) != len(self.arrays):
            raise ShapeMismatchError("gradients have different parameter counts")
        return Gradients(arrays=tuple(a + b for a, b in zip(self.arrays, other.arrays)))

    def scaled(self, factor: float) -> "Gradients":
        return Gradients(arrays=tuple(a * factor for a in self.arrays))

    def flat(self) -> np.ndarray:
        """All entries concatenated into one vector."""
        return np.concatenate([a.ravel() for a in self.arrays])


# ============================================================================
# TRAINING
# ============================================================================

@dataclass(frozen=True)
class TrainConfig:
    """
    Optimizer and objective settings.

    Defaults: mini-batches of 100 bags, 10 000
    iterations, hinge loss and the standard Adam constants.

    Attributes:
        batch_size: Bags per mini-batch
        max_iterations: Number of mini-batch steps
        lam: L1 strength on weight matrices
        alpha: Adam step size
        beta1: Adam first-moment decay
        beta2: Adam second-moment decay
        epsilon: Adam denominator constant
        seed: Seed of the batch shuffler
        standardize: Fit and apply a z-score standardizer on the training data
        loss: Bag-level loss
        checkpoint_every: Iterations between full-train objective evaluations
    """
    batch_size: int = 100
    max_iterations: int = 10_000
    lam: float = 0.0
    alpha: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    seed: int = 0
    standardize: bool = True
    loss: LossKind = LossKind.HINGE
    checkpoint_every: int = 500

    def __post_init__(self):
        object.__setattr__(self, "loss", LossKind(self.loss))
        if self.batch_size < 1:
            raise InvalidConfigError(f"batch size must be at least 1, got {self.batch_size}")
        if self.max_iterations < 0:
            raise InvalidConfigError(f"iterations must be non-negative, got {self.max_iterations}")
        if not (math.isfinite(self.lam) and self.lam >= 0):
            raise InvalidConfigError(f"lambda must be non-negative, got {self.lam}")
        if not (math.isfinite(self.alpha) and self.alpha >= 0):
            raise InvalidConfigError(f"alpha must be non-negative, got {self.alpha}")
        for name in ("beta1", "beta2"):
            value = getattr(self, name)
            if not 0.0 <= value < 1.0:
                raise InvalidConfigError(f"{name} must lie in [0, 1), got {value}")
        if not self.epsilon > 0:
            raise InvalidConfigError(f"epsilon must be positive, got {self.epsilon}")
        if self.seed < 0:
            raise InvalidConfigError(f"seed must be unsigned, got {self.seed}")
        if self.checkpoint_every < 1:
            raise InvalidConfigError(
                f"checkpoint interval must be positive, got {self.checkpoint_every}"
            )

    def with_overrides(self, **changes: Any) -> "TrainConfig":
        """Copy with some fields replaced (None values are ignored)."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


@dataclass(frozen=True, eq=False)
class AdamState:
    """
    Adam accumulators.

    Attributes:
        first: First-moment estimates, parameter-shaped
        second: Second-moment estimates, parameter-shaped
        t: Number of steps taken
    """
    first: Tuple[np.ndarray, ...]
    second: Tuple[np.ndarray, ...]
    t: int = 0

    @classmethod
    def zeros_like(cls, network: Network) -> "AdamState":
        params = network.parameters()
        return cls(
            first=tuple(np.zeros_like(p) for p in params),
            second=tuple(np.zeros_like(p) for p in params),
            t=0,
        )


@dataclass(frozen=True)
class Checkpoint:
    """
    Training progress at one iteration.

    Attributes:
        iteration: Number of completed steps
        batch_objective: Objective on the last mini-batch (None before the first step)
        train_objective: Objective on the full training set
    """
    iteration: int
    batch_objective: Optional[float]
    train_objective: float


@dataclass(frozen=True)
class TrainReport:
    """
    Summary of one training run.

    Attributes:
        checkpoints: Progress records ordered by iteration (iteration 0 first)
        iterations: Steps taken
        final_l1_norm: Sum of |w| over weight matrices after training
    """
    checkpoints: Tuple[Checkpoint, ...]
    iterations: int
    final_l1_norm: float

    @property
    def initial_objective(self) -> float:
        return self.checkpoints[0].train_objective

    @property
    def final_objective(self) -> float:
        return self.checkpoints[-1].train_objective


# ============================================================================
# EVALUATION
# ============================================================================

@dataclass(frozen=True)
class ScoredBag:
    """Network output for one bag together with its true label."""
    bag_id: str
    label: int
    score: float

    def __post_init__(self):
        if self.label not in VALID_LABELS:
            raise ValueError(f"label must be -1 or +1, got {self.label}")
        if not math.isfinite(self.score):
            raise ValueError(f"score of bag '{self.bag_id}' is not finite")


DEFAULT_M_VALUES: Tuple[int, ...] = (2, 4, 8, 12, 16, 20)
DEFAULT_LAMBDA_VALUES: Tuple[float, ...] = (1e-7, 1e-6, 1e-5, 1e-4, 1e-3)


@dataclass(frozen=True)
class Grid:
    """
    Hyper-parameter grid over embed dim m and L1 strength lambda.

    Attributes:
        m_values: Candidate embed dims
        lambda_values: Candidate L1 strengths
    """
    m_values: Tuple[int, ...] = DEFAULT_M_VALUES
    lambda_values: Tuple[float, ...] = DEFAULT_LAMBDA_VALUES

    def __post_init__(self):
        object.__setattr__(self, "m_values", tuple(int(m) for m in self.m_values))
        object.__setattr__(self, "lambda_values", tuple(float(v) for v in self.lambda_values))
        if not self.m_values or not self.lambda_values:
            raise InvalidConfigError("grid needs at least one m and one lambda")
        if any(m < 1 for m in self.m_values):
            raise InvalidConfigError("grid m values must be positive")
        if any(not (math.isfinite(v) and v >= 0) for v in self.lambda_values):
            raise InvalidConfigError("grid lambda values must be non-negative")

    def cells(self) -> List[Tuple[int, float]]:
        """All (m, lambda) combinations, m-major."""
        return [(m, lam) for m in self.m_values for lam in self.lambda_values]

    def __len__(self) -> int:
        return len(self.m_values) * len(self.lambda_values)


@dataclass(frozen=True)
class GridCellResult:
    """Inner cross-validation outcome of one grid cell."""
    m: int
    lam: float
    fold_eers: Tuple[float, ...]

    @property
    def mean_eer(self) -> float:
        return math.fsum(self.fold_eers) / len(self.fold_eers)


@dataclass(frozen=True)
class GridSearchResult:
    """
    Outcome of a grid search.

    Attributes:
        m: Chosen embed dim
        lam: Chosen L1 strength
        cells: Every evaluated cell in grid order
    """
    m: int
    lam: float
    cells: Tuple[GridCellResult, ...]


@dataclass(frozen=True)
class FoldRecord:
    """Result of one outer (repetition, fold)."""
    repetition: int
    fold: int
    m: int
    lam: float
    train_eer: float
    test_eer: float

    def __post_init__(self):
        for name in ("train_eer", "test_eer"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True)
class EvalReport:
    """
    Outer cross-validation report.

    Attributes:
        records: One record per (repetition, fold), sorted
    """
    records: Tuple[FoldRecord, ...]

    def __post_init__(self):
        records = tuple(sorted(self.records, key=lambda r: (r.repetition, r.fold)))
        if not records:
            raise EmptyDatasetError("evaluation report holds no records")
        object.__setattr__(self, "records", records)

    @property
    def mean_test_eer(self) -> float:
        return math.fsum(r.test_eer for r in self.records) / len(self.records)

    @property
    def mean_train_eer(self) -> float:
        return math.fsum(r.train_eer for r in self.records) / len(self.records)


# ============================================================================
# GRADIENT CHECK
# ============================================================================

@dataclass(frozen=True)
class PoolCheckSummary:
    """
    Finite-difference comparison results for one pooling kind.

    Attributes:
        pool: Pooling kind of the cases
        cases: Random cases drawn
        excluded_cases: Cases skipped because the base pass sat near a kink or tie
        checked: Parameter entries compared
        excluded: Parameter entries skipped because a perturbation crossed a kink or tie
        max_relative_error: Largest relative error over the compared entries
    """
    pool: PoolKind
    cases: int
    excluded_cases: int
    checked: int
    excluded: int
    max_relative_error: float


@dataclass(frozen=True)
class GradientCheckResult:
    """
    Outcome of a gradient-check run.

    Attributes:
        tolerance: Largest acceptable relative error
        summaries: One summary per pooling kind checked
    """
    tolerance: float
    summaries: Tuple[PoolCheckSummary, ...]

    @property
    def max_relative_error(self) -> float:
        return max((s.max_relative_error for s in self.summaries), default=0.0)

    @property
    def checked(self) -> int:
        return sum(s.checked for s in self.summaries)

    @property
    def excluded(self) -> int:
        return sum(s.excluded for s in self.summaries)

    @property
    def excluded_cases(self) -> int:
        return sum(s.excluded_cases for s in self.summaries)

    @property
    def passed(self) -> bool:
        return self.checked > 0 and self.max_relative_error < self.tolerance

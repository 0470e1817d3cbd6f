"""
Domain enums for milnet

Defines the closed vocabularies used across the application.
"""

from enum import Enum


class PoolKind(str, Enum):
    """
    Pooling function applied inside the network.

    Attributes:
        MEAN: Coordinate-wise mean over the instances of a bag
        MAX: Coordinate-wise maximum over the instances of a bag
        SMOOTH_MAX: (1/|b|) * ln(sum(exp(v))) coordinate-wise
    """
    MEAN = "mean"
    MAX = "max"
    SMOOTH_MAX = "smoothmax"

    @classmethod
    def parse(cls, value: str) -> "PoolKind":
        """Parse a pooling name, accepting `smooth-max` as an alias."""
        normalized = value.strip().lower().replace("-", "").replace("_", "")
        for kind in cls:
            if kind.value == normalized:
                return kind
        raise ValueError(
            f"Invalid pooling kind: {value}. "
            f"Must be one of: {', '.join(k.value for k in cls)}"
        )


class ArchitectureKind(str, Enum):
    """
    Network topology.

    Attributes:
        PROPOSED: Pooling inside the network, classifier after pooling
        PRIOR_NN: Max pooling of the scalar output of a per-instance network
    """
    PROPOSED = "proposed"
    PRIOR_NN = "prior-nn"


class Activation(str, Enum):
    """Transfer function of a layer."""
    RELU = "relu"
    LINEAR = "linear"


class Regime(str, Enum):
    """
    Label regime of a synthetic MIL problem.

    Attributes:
        WITNESS: Bag label depends on a single instance
        DISTRIBUTION_SHIFT: Bag label depends on properties of all instances
    """
    WITNESS = "witness"
    DISTRIBUTION_SHIFT = "distribution-shift"


class LossKind(str, Enum):
    """
    Bag-level loss minimized during training.

    Attributes:
        HINGE: max(0, 1 - y * score)
        SQUARED: (score - y) ** 2
    """
    HINGE = "hinge"
    SQUARED = "squared"


class CommandName(str, Enum):
    """CLI subcommands."""
    TRAIN = "train"
    PREDICT = "predict"
    EVAL = "eval"
    GRIDSEARCH = "gridsearch"
    GRADCHECK = "gradcheck"
    SYNTH = "synth"

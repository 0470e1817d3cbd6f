"""Layer transfer functions and their derivatives."""

import numpy as np

from milnet.domain.enums import Activation


def activate(activation: Activation, z: np.ndarray) -> np.ndarray:
    """Apply the transfer function element-wise."""
    if activation == Activation.RELU:
        return np.maximum(z, 0.0)
    if activation == Activation.LINEAR:
        return np.array(z, dtype=np.float64, copy=True)
    raise ValueError(f"Unsupported activation: {activation}")


def derivative(activation: Activation, z: np.ndarray) -> np.ndarray:
    """
    Element-wise derivative at the pre-activation z.

    The ReLU derivative at exactly 0 is 0.
    """
    if activation == Activation.RELU:
        return (z > 0.0).astype(np.float64)
    if activation == Activation.LINEAR:
        return np.ones_like(z, dtype=np.float64)
    raise ValueError(f"Unsupported activation: {activation}")

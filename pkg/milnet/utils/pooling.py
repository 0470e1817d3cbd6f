"""
Pooling kernels

Symmetric reductions of per-instance vectors to one bag vector, and their
back-propagation rules.

Mean and smooth-max reduce with exactly rounded sums (math.fsum), so the
pooled vector does not depend on the order of instances in a bag.
"""

import math
from typing import Optional

import numpy as np

from milnet.domain.enums import PoolKind
from milnet.domain.errors import EmptyDatasetError, ShapeMismatchError


def _as_instance_matrix(values) -> np.ndarray:
    matrix = np.asarray(values, dtype=np.float64)
    if matrix.ndim != 2:
        raise ShapeMismatchError(f"expected an (instances, m) array, got shape {matrix.shape}")
    if matrix.shape[0] == 0:
        raise EmptyDatasetError("cannot pool an empty bag")
    return matrix


def exact_column_sums(matrix: np.ndarray) -> np.ndarray:
    """Correctly rounded sum of every column."""
    return np.array([math.fsum(column) for column in matrix.T], dtype=np.float64)


def argmax_per_column(values) -> np.ndarray:
    """Index of the maximum per column; ties resolve to the lowest index."""
    return np.argmax(_as_instance_matrix(values), axis=0)


def pool_forward(values, kind: PoolKind) -> np.ndarray:
    """
    Pool per-instance vectors into one vector.

    Args:
        values: Array of shape (n, m), n >= 1
        kind: Pooling function

    Returns:
        Vector of length m

    Raises:
        EmptyDatasetError: If n == 0

    Examples:
        >>> pool_forward([[1.0, 2.0], [3.0, 4.0]], PoolKind.MEAN)
        array([2., 3.])
        >>> pool_forward([[1.0, 2.0], [3.0, 4.0]], PoolKind.MAX)
        array([3., 4.])
    """
    matrix = _as_instance_matrix(values)
    n = matrix.shape[0]

    if kind == PoolKind.MEAN:
        return exact_column_sums(matrix) / n
    if kind == PoolKind.MAX:
        return matrix.max(axis=0)
    if kind == PoolKind.SMOOTH_MAX:
        peak = matrix.max(axis=0)
        return (np.log(exact_column_sums(np.exp(matrix - peak))) + peak) / n
    raise ValueError(f"Unsupported pooling kind: {kind}")


def pool_backward(
    values,
    kind: PoolKind,
    upstream,
    argmax: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Distribute the gradient of the pooled vector over the instances.

    Args:
        values: Array of shape (n, m) given to pool_forward
        kind: Pooling function
        upstream: Gradient w.r.t. the pooled vector, length m
        argmax: Precomputed argmax per column (max pooling only)

    Returns:
        Array of shape (n, m): gradient w.r.t. every instance vector

    Raises:
        EmptyDatasetError: If n == 0
        ShapeMismatchError: If upstream does not have length m
    """
    matrix = _as_instance_matrix(values)
    n, m = matrix.shape
    upstream = np.asarray(upstream, dtype=np.float64)
    if upstream.shape != (m,):
        raise ShapeMismatchError(f"upstream gradient must have shape ({m},), got {upstream.shape}")

    if kind == PoolKind.MEAN:
        return np.broadcast_to(upstream / n, (n, m)).copy()

    if kind == PoolKind.MAX:
        winners = argmax if argmax is not None else np.argmax(matrix, axis=0)
        grad = np.zeros((n, m), dtype=np.float64)
        grad[winners, np.arange(m)] = upstream
        return grad

    if kind == PoolKind.SMOOTH_MAX:
        shifted = np.exp(matrix - matrix.max(axis=0))
        weights = shifted / exact_column_sums(shifted)
        return weights * (upstream / n)

    raise ValueError(f"Unsupported pooling kind: {kind}")

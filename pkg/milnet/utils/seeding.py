"""
Seed utilities

Every random choice in milnet flows from an explicit seed. Child seeds are
derived from (parent seed, indices...) so independent tasks (grid cells,
folds, repetitions) are reproducible on their own.
"""

import numpy as np


def derive_seed(seed: int, *indices: int) -> int:
    """
    Derive a child seed from a parent seed and a path of indices.

    Args:
        seed: Parent seed (unsigned)
        *indices: Non-negative path components, e.g. (repetition, fold)

    Returns:
        Unsigned 63-bit child seed

    Examples:
        >>> derive_seed(7, 0, 1) == derive_seed(7, 0, 1)
        True
        >>> derive_seed(7, 0, 1) == derive_seed(7, 1, 0)
        False
    """
    entropy = [int(seed), *(int(i) for i in indices)]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0] >> np.uint64(1))


def make_rng(seed: int, *indices: int) -> np.random.Generator:
    """Random generator for a seed, optionally derived along a path of indices."""
    if indices:
        seed = derive_seed(seed, *indices)
    return np.random.default_rng(seed)

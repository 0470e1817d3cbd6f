"""Business logic: datasets, synthetic data, networks, training, evaluation, gradient checks."""

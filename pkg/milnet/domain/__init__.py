"""Domain layer: enums, errors and immutable models."""

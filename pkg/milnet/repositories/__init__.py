"""Repository interfaces for datasets, split plans, models and reports."""

"""Numerical and infrastructure helpers shared by the services."""

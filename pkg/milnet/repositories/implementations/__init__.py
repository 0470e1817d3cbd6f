"""Repository implementations: CSV, JSON and in-memory stores."""
